// Adaptive integration and Cauchy principal values on the
// positive half-line, used by the Lamb-shift quadrature route.

#pragma once

#include <cstddef>
#include <functional>

namespace lambflux::quadrature {

struct QuadratureConfig {
    double abs_tol{1e-14};
    double rel_tol{1e-11};     // relative to the L1 norm of the integrand
    double pole_window{0.5};   // eta0, half-width of the symmetric window around the pole
    double cutoff_factor{100}; // Lambda = cutoff_factor * omega_d for smooth cutoffs
    unsigned max_depth{30};    // bisection depth of the adaptive Gauss-Kronrod rule
    double cutoff_guard{1e-3}; // reject poles closer than guard * Lambda to a hard edge
};

void validate(const QuadratureConfig& cfg);

struct Estimate {
    double value{};
    double error{}; // accumulated Gauss-Kronrod error estimate
    double tail{};  // contribution of [Lambda, inf); 0 when the support ends at Lambda
};

using Integrand = std::function<double(double)>;

// Integral of f over [a, b]; b may be +infinity. Throws ConvergenceError when
// the error estimate stays above max(abs_tol, rel_tol * L1).
Estimate integrate(const Integrand& f, double a, double b, const QuadratureConfig& cfg);

// Where the integrand lives on the half-line.
struct Support {
    double upper{};     // Lambda
    bool infinite_tail{}; // also integrate [Lambda, inf)
    double knot{};      // optional extra breakpoint (e.g. omega_d); ignored if <= 0
};

// PV int_0^inf [ h(w)/(pole - w) + regular(w) ] dw.
//
// Inside [pole - eta, pole + eta], eta = min(eta0, pole/2, (Lambda - pole)/2),
// the odd singular part cancels analytically and the remainder
//   [h(pole - t) - h(pole + t)] / t
// is integrated over t in (0, eta]. regular may be empty.
Estimate principal_value(const Integrand& h, const Integrand& regular, double pole,
                         const Support& support, const QuadratureConfig& cfg);

} // namespace lambflux::quadrature
