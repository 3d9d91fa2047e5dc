#include "lambflux/lambshift.hpp"

#include "lambflux/errors.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>

namespace lambflux::lambshift {

namespace {

constexpr double pi = std::numbers::pi;

void check_pole(double omega_mu) {
    if (!(omega_mu > 0.0) || !std::isfinite(omega_mu)) {
        throw DomainError("domain.frequency_positive", "transition frequency must be finite and > 0");
    }
}

void check_temperature(double temperature) {
    if (!(temperature > 0.0) || !std::isfinite(temperature)) {
        throw DomainError("domain.temperature_positive", "temperature must be finite and > 0");
    }
}

// n-th derivative of G(x) = 1/(wD + x) - x/(x^2 + w^2)
//   = (-1)^n n! [ (wD + x)^-(n+1) - Re (x + i w)^-(n+1) ].
double matsubara_summand_derivative(int n, double x, double omega_mu, double omega_d) {
    double factorial = 1.0;
    for (int i = 2; i <= n; ++i) factorial *= i;
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    const std::complex<double> z(x, omega_mu);
    const double a = std::pow(omega_d + x, -(n + 1));
    const double b = std::real(std::pow(z, -(n + 1)));
    return sign * factorial * (a - b);
}

// Full sum_{k>=1} term(k h) for slowly decaying, smooth-beyond-K terms:
// explicit head up to K, then (1/h) int_{Kh}^inf term - term(Kh)/2 - h term'(Kh)/12.
double series_with_integral_tail(const quadrature::Integrand& term, double h, std::size_t K,
                                 const QuadratureConfig& cfg) {
    double head = 0.0;
    for (std::size_t k = K; k >= 1; --k) {
        head += term(static_cast<double>(k) * h);
    }
    const double xk = static_cast<double>(K) * h;
    // x = xk e^s: the ln(x)/x^2 tails become smooth and exponentially small by s = 80.
    auto stretched = [&](double s) {
        const double x = xk * std::exp(s);
        return term(x) * x;
    };
    const double tail_integral = quadrature::integrate(stretched, 0.0, 80.0, cfg).value;
    const double step = 1e-3 * xk;
    const double derivative = (term(xk + step) - term(xk - step)) / (2.0 * step);
    return head + tail_integral / h - 0.5 * term(xk) - h * derivative / 12.0;
}

std::size_t cot_series_terms(double h, double omega_d) {
    const double past_pole = 4.0 * omega_d / h;
    return static_cast<std::size_t>(std::max(2000.0, std::ceil(past_pole)));
}

double drude_value(const bath::DrudeLorentz& J, double omega) {
    return bath::spectral_value(bath::SpectralDensity{J}, omega);
}

} // namespace

std::string_view name_of(Route route) noexcept {
    return route == Route::Analytic ? "analytic" : "quadrature";
}

quadrature::Support support_of(const bath::SpectralDensity& J, const QuadratureConfig& cfg) {
    const double wd = bath::cutoff(J);
    if (bath::kind_of(J) == bath::SpectralKind::Hard) {
        return {wd, false, 0.0};
    }
    return {cfg.cutoff_factor * wd, true, wd};
}

Estimate pv_quadrature_S(const bath::SpectralDensity& J, double temperature, double omega_mu,
                         bath::Sign sign, const QuadratureConfig& cfg) {
    check_pole(omega_mu);
    check_temperature(temperature);
    bath::validate(J);
    const double w = omega_mu;
    const auto support = support_of(J, cfg);
    if (sign == bath::Sign::Emission) {
        auto h = [&](double x) { return bath::thermal_weight_plus_one(J, temperature, x) / pi; };
        auto r = [&](double x) { return bath::thermal_weight(J, temperature, x) / (pi * (w + x)); };
        return quadrature::principal_value(h, r, w, support, cfg);
    }
    auto h = [&](double x) { return -bath::thermal_weight(J, temperature, x) / pi; };
    auto r = [&](double x) {
        return -bath::thermal_weight_plus_one(J, temperature, x) / (pi * (w + x));
    };
    return quadrature::principal_value(h, r, w, support, cfg);
}

Estimate quadrature_delta(const bath::SpectralDensity& J, double temperature, double omega_mu,
                          const QuadratureConfig& cfg) {
    check_pole(omega_mu);
    check_temperature(temperature);
    bath::validate(J);
    const double w = omega_mu;
    auto h = [&](double x) {
        return (2.0 * w / pi) * bath::thermal_weight(J, temperature, x) / (w + x);
    };
    return quadrature::principal_value(h, {}, w, support_of(J, cfg), cfg);
}

Estimate quadrature_delta_prime(const bath::SpectralDensity& J, double omega_mu,
                                const QuadratureConfig& cfg) {
    check_pole(omega_mu);
    bath::validate(J);
    const double w = omega_mu;
    auto h = [&](double x) { return (2.0 * w / pi) * bath::spectral_value(J, x) / (w + x); };
    return quadrature::principal_value(h, {}, w, support_of(J, cfg), cfg);
}

Estimate quadrature_delta_plus(const bath::SpectralDensity& J, double omega_mu,
                               const QuadratureConfig& cfg) {
    check_pole(omega_mu);
    bath::validate(J);
    quadrature::validate(cfg);
    const double w = omega_mu;
    auto f = [&](double x) { return bath::spectral_value(J, x) / (pi * (w + x)); };
    const auto support = support_of(J, cfg);

    Estimate total;
    double lo = 0.0;
    for (double hi : {support.knot, support.upper}) {
        if (hi <= lo) continue;
        const Estimate e = quadrature::integrate(f, lo, hi, cfg);
        total.value += e.value;
        total.error += e.error;
        lo = hi;
    }
    if (support.infinite_tail) {
        const Estimate e =
            quadrature::integrate(f, support.upper, std::numeric_limits<double>::infinity(), cfg);
        total.value += e.value;
        total.error += e.error;
        total.tail = e.value;
    }
    return total;
}

Estimate quadrature_delta_minus(const bath::SpectralDensity& J, double omega_mu,
                                const QuadratureConfig& cfg) {
    check_pole(omega_mu);
    bath::validate(J);
    auto h = [&](double x) { return bath::spectral_value(J, x) / pi; };
    return quadrature::principal_value(h, {}, omega_mu, support_of(J, cfg), cfg);
}

SeriesValue matsubara_R(double temperature, double omega_mu, double omega_d, double tol) {
    check_temperature(temperature);
    check_pole(omega_mu);
    if (!(omega_d > 0.0)) {
        throw DomainError("domain.cutoff_positive", "omega_d must be > 0");
    }
    if (!(tol >= 4.0 * std::numeric_limits<double>::epsilon())) {
        throw DomainError("domain.series_tolerance",
                          "series tolerance " + std::to_string(tol) +
                              " is below double precision resolution");
    }

    const double h = 2.0 * pi * temperature;
    const double w2 = omega_mu * omega_mu;
    auto G = [&](double x) { return 1.0 / (omega_d + x) - x / (x * x + w2); };

    constexpr std::size_t max_terms = std::size_t{1} << 26;
    double head = 0.0;
    std::size_t summed = 0;
    for (std::size_t K = 8; K <= max_terms; K *= 2) {
        for (std::size_t k = summed + 1; k <= K; ++k) {
            head += G(static_cast<double>(k) * h);
        }
        summed = K;

        const double xk = static_cast<double>(K) * h;
        const double h2 = h * h;
        const double next = h2 * h2 * h2 / 30240.0 *
                            std::abs(matsubara_summand_derivative(5, xk, omega_mu, omega_d));
        if (next > tol) continue;

        const double tail = 0.5 * std::log(xk * xk + w2) - std::log(omega_d + xk);
        const double value = h * head + tail - 0.5 * h * G(xk) -
                             h2 / 12.0 * matsubara_summand_derivative(1, xk, omega_mu, omega_d) +
                             h2 * h2 / 720.0 *
                                 matsubara_summand_derivative(3, xk, omega_mu, omega_d);
        return {value, K, next};
    }
    throw ConvergenceError("convergence.matsubara",
                           "Matsubara series did not reach tolerance within " +
                               std::to_string(max_terms) + " terms");
}

double euler_maclaurin_R(double temperature, double omega_mu, double omega_d) {
    check_temperature(temperature);
    check_pole(omega_mu);
    const double beta = 1.0 / temperature;
    const double two_pi = 2.0 * pi;
    return 0.5 * std::log(two_pi * two_pi + omega_mu * omega_mu * beta * beta) -
           std::log(two_pi + omega_d * beta);
}

double analytic_delta(const bath::DrudeLorentz& J, double temperature, double omega_mu,
                      double series_tol) {
    bath::validate(bath::SpectralDensity{J});
    const double R = matsubara_R(temperature, omega_mu, J.omega_d, series_tol).value;
    return drude_value(J, omega_mu) / pi *
           (std::log(J.omega_d / omega_mu) + pi * temperature / J.omega_d + R);
}

double analytic_delta_prime(const bath::DrudeLorentz& J, double omega_mu) {
    check_pole(omega_mu);
    bath::validate(bath::SpectralDensity{J});
    return -2.0 * drude_value(J, omega_mu) / pi * std::log(J.omega_d / omega_mu);
}

double analytic_delta_plus(const bath::DrudeLorentz& J, double omega_mu) {
    check_pole(omega_mu);
    bath::validate(bath::SpectralDensity{J});
    const double j = drude_value(J, omega_mu);
    return j * J.omega_d / (2.0 * omega_mu) - j / pi * std::log(J.omega_d / omega_mu);
}

void check_cot_window(double temperature, double omega_d, double window) {
    check_temperature(temperature);
    const double turns = omega_d / (2.0 * pi * temperature);
    if (std::abs(turns - std::round(turns)) < window) {
        throw DomainError("domain.cot_pole",
                          "wD/(2 pi T) = " + std::to_string(turns) +
                              " is too close to an integer for the cot form");
    }
}

double closed_form_f_integral(double temperature, double omega_mu, double omega_d,
                              const QuadratureConfig& cfg) {
    check_pole(omega_mu);
    check_cot_window(temperature, omega_d);
    const double beta = 1.0 / temperature;
    const double m = omega_mu;
    const double D = omega_d;
    const double norm = D * D + m * m;
    const double h = 2.0 * pi * temperature;

    auto term = [&](double x) {
        return x * (2.0 * x * std::log(x) - pi * m) / ((x * x + m * m) * (D * D - x * x));
    };
    const double series = series_with_integral_tail(term, h, cot_series_terms(h, D), cfg);

    return m * std::log(m) / norm * bath::bose_occupation(m, temperature) +
           0.5 * (m * std::log(D) + 0.5 * pi * D) / norm + series / beta -
           0.5 * (D * std::log(D) - 0.5 * pi * m) / norm / std::tan(0.5 * beta * D);
}

double closed_form_F_integral(double temperature, double omega_mu, double omega_d,
                              const QuadratureConfig& cfg) {
    check_pole(omega_mu);
    check_cot_window(temperature, omega_d);
    const double beta = 1.0 / temperature;
    const double m = omega_mu;
    const double D = omega_d;
    const double norm = D * D + m * m;
    const double h = 2.0 * pi * temperature;

    auto term = [&](double x) {
        return x * (2.0 * x * std::log(x) + pi * m) / ((x * x + m * m) * (D * D - x * x));
    };
    const double series = series_with_integral_tail(term, h, cot_series_terms(h, D), cfg);

    // 1/(exp(-beta m) - 1) = -(nbar + 1)
    const double inverted = 1.0 / std::expm1(-beta * m);
    return m * std::log(m) / norm * inverted + 0.5 * (m * std::log(D) - 0.5 * pi * D) / norm -
           series / beta + 0.5 * (D * std::log(D) + 0.5 * pi * m) / norm / std::tan(0.5 * beta * D);
}

double delta_cot_form(const bath::DrudeLorentz& J, double temperature, double omega_mu,
                      const QuadratureConfig& cfg) {
    check_pole(omega_mu);
    bath::validate(bath::SpectralDensity{J});
    check_cot_window(temperature, J.omega_d);
    const double beta = 1.0 / temperature;
    const double m = omega_mu;
    const double D = J.omega_d;
    const double h = 2.0 * pi * temperature;

    auto term = [&](double x) { return x / ((x * x + m * m) * (D * D - x * x)); };
    const double series = series_with_integral_tail(term, h, cot_series_terms(h, D), cfg);

    const double bracket =
        m / (D * D + m * m) * (std::log(D / m) + 0.5 * pi / std::tan(0.5 * beta * D)) -
        2.0 * pi * m / beta * series;
    return J.gamma * D * D / pi * bracket;
}

double cot_mittag_leffler(double x, std::size_t terms) {
    if (x == 0.0 || !std::isfinite(x)) {
        throw DomainError("domain.cot_argument", "cot expansion needs a finite nonzero argument");
    }
    const double K = static_cast<double>(terms);
    if (!(pi * K > std::abs(x) + pi)) {
        throw DomainError("domain.cot_terms", "need more terms than |x|/pi + 1");
    }
    const double x2 = x * x;
    auto f = [&](double k) { return 1.0 / (pi * pi * k * k - x2); };
    double head = 0.0;
    for (std::size_t k = terms; k >= 1; --k) {
        head += f(static_cast<double>(k));
    }
    const double pk = pi * K;
    const double integral = std::log((pk + x) / (pk - x)) / (2.0 * pi * x);
    const double fk = f(K);
    const double dfk = -2.0 * pi * pi * K * fk * fk;
    const double tail = integral - 0.5 * fk - dfk / 12.0;
    return 1.0 / x - 2.0 * x * (head + tail);
}

ChannelShift channel_shift(const bath::Bath& b, double omega_mu, const LambShiftOptions& opts) {
    bath::validate(b);
    check_pole(omega_mu);
    const bool drude = bath::kind_of(b.spectral) == bath::SpectralKind::Drude;
    const Route route = opts.route.value_or(drude ? Route::Analytic : Route::Quadrature);
    if (route == Route::Analytic && !drude) {
        throw DomainError("domain.analytic_requires_drude",
                          "closed-form Lamb shifts exist only for the Drude spectral density");
    }

    ChannelShift out;
    out.route = route;
    if (drude) {
        const double wd = bath::cutoff(b.spectral);
        out.matsubara_r = matsubara_R(b.temperature, omega_mu, wd, opts.series_tol).value;
        out.r_estimate = euler_maclaurin_R(b.temperature, omega_mu, wd);
    }

    if (route == Route::Analytic) {
        const auto& J = std::get<bath::DrudeLorentz>(b.spectral);
        out.delta = J.gamma == 0.0 ? 0.0
                                   : drude_value(J, omega_mu) / pi *
                                         (std::log(J.omega_d / omega_mu) +
                                          pi * b.temperature / J.omega_d + *out.matsubara_r);
        out.delta_prime = analytic_delta_prime(J, omega_mu);
        out.delta_plus = analytic_delta_plus(J, omega_mu);
    } else {
        const auto& cfg = opts.quadrature;
        out.delta = quadrature_delta(b.spectral, b.temperature, omega_mu, cfg).value;
        out.delta_prime = quadrature_delta_prime(b.spectral, omega_mu, cfg).value;
        out.delta_plus = quadrature_delta_plus(b.spectral, omega_mu, cfg).value;
    }
    out.delta_minus = out.delta_prime - out.delta_plus;
    return out;
}

std::array<double, 4> level_shifts(const model::EigenSystem& es,
                                   const PerChannel<ChannelShift>& c) {
    const auto w = es.weights();
    // u = Delta + Delta+ enters through S(-w), v = Delta + Delta- through S(+w).
    auto u = [&](int j, int mu) { return c.at(j, mu).delta + c.at(j, mu).delta_plus; };
    auto v = [&](int j, int mu) { return c.at(j, mu).delta + c.at(j, mu).delta_minus; };

    const double d1 = -u(1, 1) * w.sin2_plus - u(2, 2) * w.sin2_minus - u(1, 2) * w.cos2_plus -
                      u(2, 1) * w.cos2_minus;
    const double d2 = v(1, 1) * w.sin2_plus + v(2, 2) * w.sin2_minus + v(1, 2) * w.cos2_plus +
                      v(2, 1) * w.cos2_minus;
    const double d3 = -u(1, 1) * w.sin2_plus + v(2, 2) * w.sin2_minus + v(1, 2) * w.cos2_plus -
                      u(2, 1) * w.cos2_minus;
    const double d4 = v(1, 1) * w.sin2_plus - u(2, 2) * w.sin2_minus - u(1, 2) * w.cos2_plus +
                      v(2, 1) * w.cos2_minus;
    return {d1, d2, d3, d4};
}

Increments transition_increments(const model::EigenSystem& es,
                                 const PerChannel<ChannelShift>& c) {
    const auto w = es.weights();
    auto weight = [&](int j, int mu) { return c.at(j, mu).transition_weight(); };
    return {weight(1, 1) * w.sin2_plus + weight(2, 1) * w.cos2_minus,
            weight(2, 2) * w.sin2_minus + weight(1, 2) * w.cos2_plus};
}

Margins positivity_margin(const model::EigenSystem& es, const Increments& inc) noexcept {
    return {es.omega1 + inc.delta1, es.omega2 + inc.delta2};
}

LambShiftData compute(const model::EigenSystem& es, const bath::Bath& bath1,
                      const bath::Bath& bath2, const LambShiftOptions& opts) {
    LambShiftData data;
    for (int j = 1; j <= 2; ++j) {
        const bath::Bath& b = j == 1 ? bath1 : bath2;
        for (int mu = 1; mu <= 2; ++mu) {
            data.channels.at(j, mu) = channel_shift(b, es.omega(mu), opts);
        }
    }
    data.levels = level_shifts(es, data.channels);
    data.increments = transition_increments(es, data.channels);
    return data;
}

} // namespace lambflux::lambshift
