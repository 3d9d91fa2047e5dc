// Environment-induced level shifts of the two-qubit system.
//
// For each bath j and channel mu the shift is built from three integrals
//   Delta   = (2 w/pi) PV int J(x) nbar(x) / (w^2 - x^2) dx
//   Delta+  = (1/pi)      int J(x) / (w + x) dx
//   Delta-  = (1/pi)   PV int J(x) / (w - x) dx,      Delta' = Delta+ + Delta-
// with w = omega_mu. Two independent routes are provided: adaptive
// principal-value quadrature (any spectral density) and the residue /
// Matsubara closed forms (Drude only).

#pragma once

#include "lambflux/bath.hpp"
#include "lambflux/model.hpp"
#include "lambflux/quadrature.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string_view>

namespace lambflux::lambshift {

using quadrature::Estimate;
using quadrature::QuadratureConfig;

enum class Route { Analytic, Quadrature };

std::string_view name_of(Route route) noexcept;

// ---------------------------------------------------------------- quadrature

// Where the quadrature route integrates J: [0, cutoff_factor * wD) plus the
// mapped tail for smooth cutoffs, [0, wD) for the hard cutoff.
quadrature::Support support_of(const bath::SpectralDensity& J, const QuadratureConfig& cfg);

// S_j(+w) for Sign::Emission, S_j(-w) for Sign::Absorption, straight from the
// (nbar+1)/(w-x) and nbar/(w+x) kernels.
Estimate pv_quadrature_S(const bath::SpectralDensity& J, double temperature, double omega_mu,
                         bath::Sign sign, const QuadratureConfig& cfg);

Estimate quadrature_delta(const bath::SpectralDensity& J, double temperature, double omega_mu,
                          const QuadratureConfig& cfg);
Estimate quadrature_delta_prime(const bath::SpectralDensity& J, double omega_mu,
                                const QuadratureConfig& cfg);
Estimate quadrature_delta_plus(const bath::SpectralDensity& J, double omega_mu,
                               const QuadratureConfig& cfg);
Estimate quadrature_delta_minus(const bath::SpectralDensity& J, double omega_mu,
                                const QuadratureConfig& cfg);

// ------------------------------------------------------------- analytic (Drude)

struct SeriesValue {
    double value{};
    std::size_t terms{};    // number of explicitly summed Matsubara terms
    double error_estimate{}; // magnitude of the first omitted Euler-Maclaurin term
};

// R = (2 pi T) sum_{k>=1} (w^2 - wD w_k) / ((w^2 + w_k^2)(wD + w_k)),  w_k = 2 pi k T.
//
// The summand equals 1/(wD + x) - x/(x^2 + w^2) at x = w_k, whose antiderivative
// ln(sqrt(x^2 + w^2)/(wD + x)) gives the tail beyond K in closed form; the
// Euler-Maclaurin corrections through the third derivative are added and K is
// doubled until the next correction is below tol. Throws DomainError when tol
// is below what double precision can deliver.
SeriesValue matsubara_R(double temperature, double omega_mu, double omega_d, double tol);

// ln( sqrt(4 pi^2 + w^2/T^2) / (2 pi + wD/T) ), i.e. the K = 0 tail integral.
double euler_maclaurin_R(double temperature, double omega_mu, double omega_d);

// (J(w)/pi) (ln(wD/w) + pi T/wD + R)
double analytic_delta(const bath::DrudeLorentz& J, double temperature, double omega_mu,
                      double series_tol);

// -(2 J(w)/pi) ln(wD/w)
double analytic_delta_prime(const bath::DrudeLorentz& J, double omega_mu);

// J(w) wD / (2w) - (J(w)/pi) ln(wD/w)
double analytic_delta_plus(const bath::DrudeLorentz& J, double omega_mu);

// ---------------------------------------------- residue forms with cot(wD/2T)
//
// These reproduce the intermediate closed forms for
//   f(x) = x nbar(x) / ((wD^2 + x^2)(w - x)),  F(x) = x nbar(x) / ((wD^2 + x^2)(w + x)).
// They are ill-conditioned near wD/T = 2 k pi and exist only as cross-checks.

inline constexpr double kCotPoleWindow = 1e-3;

// Throws DomainError("domain.cot_pole") when wD/(2 pi T) lies within
// `window` of an integer.
void check_cot_window(double temperature, double omega_d, double window = kCotPoleWindow);

double closed_form_f_integral(double temperature, double omega_mu, double omega_d,
                              const QuadratureConfig& cfg);
double closed_form_F_integral(double temperature, double omega_mu, double omega_d,
                              const QuadratureConfig& cfg);

// Delta from the cot form before the Mittag-Leffler resummation.
double delta_cot_form(const bath::DrudeLorentz& J, double temperature, double omega_mu,
                      const QuadratureConfig& cfg);

// cot(x) = 1/x - 2x sum_k 1/((k pi)^2 - x^2), first `terms` terms plus an
// integral tail with Euler-Maclaurin corrections.
double cot_mittag_leffler(double x, std::size_t terms);

// -------------------------------------------------------------------- assembly

struct ChannelShift {
    double delta{};
    double delta_plus{};
    double delta_minus{};
    double delta_prime{};
    std::optional<double> matsubara_r; // Drude only
    std::optional<double> r_estimate;  // Drude only
    Route route{Route::Analytic};

    double transition_weight() const noexcept { return 2.0 * delta + delta_prime; }
};

// Indexed by bath j and channel mu, both in {1, 2}.
template <class T>
struct PerChannel {
    std::array<T, 4> values{};

    T& at(int bath, int channel) { return values[index(bath, channel)]; }
    const T& at(int bath, int channel) const { return values[index(bath, channel)]; }

private:
    static std::size_t index(int bath, int channel) {
        if ((bath != 1 && bath != 2) || (channel != 1 && channel != 2)) {
            throw std::out_of_range("PerChannel: indices must be 1 or 2");
        }
        return static_cast<std::size_t>(2 * (bath - 1) + (channel - 1));
    }
};

struct LambShiftOptions {
    // Empty: analytic for Drude, quadrature otherwise.
    std::optional<Route> route;
    QuadratureConfig quadrature{};
    double series_tol{1e-12};
};

ChannelShift channel_shift(const bath::Bath& bath, double omega_mu, const LambShiftOptions& opts);

// Diagonal of H_LS in the eigenbasis, (Delta_1 .. Delta_4).
std::array<double, 4> level_shifts(const model::EigenSystem& es,
                                   const PerChannel<ChannelShift>& channels);

// Shifts of the s2->s3 and s2->s4 gaps: delta1 = Delta_2 - Delta_3,
// delta2 = Delta_2 - Delta_4, written through the (2 Delta + Delta') weights.
struct Increments {
    double delta1{};
    double delta2{};
};

Increments transition_increments(const model::EigenSystem& es,
                                 const PerChannel<ChannelShift>& channels);

struct Margins {
    double first{};  // omega1 + delta1
    double second{}; // omega2 + delta2
};

Margins positivity_margin(const model::EigenSystem& es, const Increments& inc) noexcept;

struct LambShiftData {
    PerChannel<ChannelShift> channels;
    std::array<double, 4> levels{};
    Increments increments;
};

LambShiftData compute(const model::EigenSystem& es, const bath::Bath& bath1,
                      const bath::Bath& bath2, const LambShiftOptions& opts);

} // namespace lambflux::lambshift
