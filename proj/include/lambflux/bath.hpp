// Ohmic spectral densities, Bose occupation and golden-rule rates

#pragma once

#include "lambflux/model.hpp"

#include <array>
#include <string_view>
#include <variant>

namespace lambflux::bath {

// J(w) = gamma w / (1 + (w/wD)^2)
struct DrudeLorentz {
    double gamma{0.01};
    double omega_d{50.0};
};

// J(w) = gamma w for w < wD, 0 for w >= wD
struct HardCutoff {
    double gamma{0.01};
    double omega_d{50.0};
};

// J(w) = gamma w exp(-w^2/wD^2)
struct GaussianCutoff {
    double gamma{0.01};
    double omega_d{50.0};
};

using SpectralDensity = std::variant<DrudeLorentz, HardCutoff, GaussianCutoff>;

enum class SpectralKind { Drude, Hard, Gaussian };

SpectralDensity make_spectral(SpectralKind kind, double gamma, double omega_d);
SpectralKind kind_of(const SpectralDensity& J) noexcept;
std::string_view name_of(SpectralKind kind) noexcept; // "drude", "hard", "gaussian"
SpectralKind parse_kind(std::string_view name);       // throws DomainError

double strength(const SpectralDensity& J) noexcept; // gamma
double cutoff(const SpectralDensity& J) noexcept;   // omega_d

// gamma >= 0 (0 = decoupled bath) and omega_d > 0, both finite.
void validate(const SpectralDensity& J);

// J(w) for w >= 0.
double spectral_value(const SpectralDensity& J, double omega);

struct Bath {
    double temperature{1.0};
    SpectralDensity spectral{DrudeLorentz{}};
};

void validate(const Bath& b);

// 1/(exp(w/T) - 1). Evaluated as exp(-x)/(1 - exp(-x)) for x > 1 so that
// it underflows to 0 instead of overflowing at T -> 0.
double bose_occupation(double omega, double temperature);

// J(w) nbar(w) and J(w)(nbar(w) + 1), with their finite w -> 0 limits
// (gamma T for the Ohmic densities here).
double thermal_weight(const SpectralDensity& J, double temperature, double omega);
double thermal_weight_plus_one(const SpectralDensity& J, double temperature, double omega);

// Emission: Gamma(+w) = 2 J(w)(nbar + 1).  Absorption: Gamma(-w) = 2 J(w) nbar.
enum class Sign { Emission, Absorption };

double gamma_rate(const SpectralDensity& J, double temperature, double omega, Sign sign);

// Gamma_j(+-omega_mu) for both baths and both channels.
struct TransitionRates {
    std::array<double, 8> values{};

    double at(int bath, int channel, Sign sign) const;
    double& at(int bath, int channel, Sign sign);
};

TransitionRates transition_rates(const model::EigenSystem& es, const Bath& bath1, const Bath& bath2);

} // namespace lambflux::bath
