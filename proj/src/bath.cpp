#include "lambflux/bath.hpp"

#include "lambflux/errors.hpp"

#include <cmath>
#include <string>

namespace lambflux::bath {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::size_t rate_index(int bath, int channel, Sign sign) {
    if ((bath != 1 && bath != 2) || (channel != 1 && channel != 2)) {
        throw std::out_of_range("TransitionRates: indices must be 1 or 2");
    }
    return static_cast<std::size_t>(4 * (bath - 1) + 2 * (channel - 1) +
                                    (sign == Sign::Absorption ? 1 : 0));
}

void check_temperature(double temperature) {
    if (!(temperature > 0.0) || !std::isfinite(temperature)) {
        throw DomainError("domain.temperature_positive", "temperature must be finite and > 0");
    }
}

void check_frequency(double omega) {
    if (!(omega > 0.0) || !std::isfinite(omega)) {
        throw DomainError("domain.frequency_positive", "frequency must be finite and > 0");
    }
}

} // namespace

SpectralDensity make_spectral(SpectralKind kind, double gamma, double omega_d) {
    switch (kind) {
    case SpectralKind::Drude: return DrudeLorentz{gamma, omega_d};
    case SpectralKind::Hard: return HardCutoff{gamma, omega_d};
    case SpectralKind::Gaussian: return GaussianCutoff{gamma, omega_d};
    }
    return DrudeLorentz{gamma, omega_d};
}

SpectralKind kind_of(const SpectralDensity& J) noexcept {
    return std::visit(overloaded{
                          [](const DrudeLorentz&) { return SpectralKind::Drude; },
                          [](const HardCutoff&) { return SpectralKind::Hard; },
                          [](const GaussianCutoff&) { return SpectralKind::Gaussian; },
                      },
                      J);
}

std::string_view name_of(SpectralKind kind) noexcept {
    switch (kind) {
    case SpectralKind::Drude: return "drude";
    case SpectralKind::Hard: return "hard";
    case SpectralKind::Gaussian: return "gaussian";
    }
    return "drude";
}

SpectralKind parse_kind(std::string_view name) {
    if (name == "drude") return SpectralKind::Drude;
    if (name == "hard") return SpectralKind::Hard;
    if (name == "gaussian") return SpectralKind::Gaussian;
    throw DomainError("domain.spectral_kind",
                      "unknown spectral density '" + std::string(name) +
                          "' (expected drude, hard or gaussian)");
}

double strength(const SpectralDensity& J) noexcept {
    return std::visit([](const auto& s) { return s.gamma; }, J);
}

double cutoff(const SpectralDensity& J) noexcept {
    return std::visit([](const auto& s) { return s.omega_d; }, J);
}

void validate(const SpectralDensity& J) {
    const double gamma = strength(J);
    const double wd = cutoff(J);
    if (!std::isfinite(gamma) || gamma < 0.0) {
        throw DomainError("domain.gamma_nonnegative", "gamma must be finite and >= 0");
    }
    if (!std::isfinite(wd) || !(wd > 0.0)) {
        throw DomainError("domain.cutoff_positive", "omega_d must be finite and > 0");
    }
}

double spectral_value(const SpectralDensity& J, double omega) {
    if (!(omega >= 0.0)) {
        throw DomainError("domain.frequency_nonnegative", "spectral density needs omega >= 0");
    }
    return std::visit(overloaded{
                          [omega](const DrudeLorentz& s) {
                              const double r = omega / s.omega_d;
                              return s.gamma * omega / (1.0 + r * r);
                          },
                          [omega](const HardCutoff& s) {
                              return omega < s.omega_d ? s.gamma * omega : 0.0;
                          },
                          [omega](const GaussianCutoff& s) {
                              const double r = omega / s.omega_d;
                              return s.gamma * omega * std::exp(-r * r);
                          },
                      },
                      J);
}

void validate(const Bath& b) {
    check_temperature(b.temperature);
    validate(b.spectral);
}

double bose_occupation(double omega, double temperature) {
    check_frequency(omega);
    check_temperature(temperature);
    const double x = omega / temperature;
    if (x > 1.0) {
        const double e = std::exp(-x);
        return e / -std::expm1(-x);
    }
    return 1.0 / std::expm1(x);
}

double thermal_weight(const SpectralDensity& J, double temperature, double omega) {
    if (omega == 0.0) {
        check_temperature(temperature);
        // J(w) ~ gamma w and nbar ~ T/w for every variant here.
        return strength(J) * temperature;
    }
    return spectral_value(J, omega) * bose_occupation(omega, temperature);
}

double thermal_weight_plus_one(const SpectralDensity& J, double temperature, double omega) {
    if (omega == 0.0) {
        return thermal_weight(J, temperature, omega);
    }
    check_frequency(omega);
    check_temperature(temperature);
    // nbar + 1 = 1/(1 - exp(-x))
    const double x = omega / temperature;
    return spectral_value(J, omega) / -std::expm1(-x);
}

double gamma_rate(const SpectralDensity& J, double temperature, double omega, Sign sign) {
    check_frequency(omega);
    const double n = bose_occupation(omega, temperature);
    const double j = spectral_value(J, omega);
    return sign == Sign::Emission ? 2.0 * j * (n + 1.0) : 2.0 * j * n;
}

double TransitionRates::at(int bath, int channel, Sign sign) const {
    return values[rate_index(bath, channel, sign)];
}

double& TransitionRates::at(int bath, int channel, Sign sign) {
    return values[rate_index(bath, channel, sign)];
}

TransitionRates transition_rates(const model::EigenSystem& es, const Bath& bath1,
                                 const Bath& bath2) {
    validate(bath1);
    validate(bath2);
    TransitionRates rates;
    for (int j = 1; j <= 2; ++j) {
        const Bath& b = j == 1 ? bath1 : bath2;
        for (int mu = 1; mu <= 2; ++mu) {
            for (Sign s : {Sign::Emission, Sign::Absorption}) {
                rates.at(j, mu, s) = gamma_rate(b.spectral, b.temperature, es.omega(mu), s);
            }
        }
    }
    return rates;
}

} // namespace lambflux::bath
