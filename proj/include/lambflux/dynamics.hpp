// Lindblad generator in the eigenbasis, steady states and heat currents.
//
// Superoperators act on column-stacked density matrices: vec(A X B) =
// (B^T kron A) vec(X), so element (r, c) of a 4x4 matrix sits at 4c + r.

#pragma once

#include "lambflux/bath.hpp"
#include "lambflux/lambshift.hpp"
#include "lambflux/model.hpp"

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

namespace lambflux::dynamics {

using Complex = std::complex<double>;
using SuperOperator = Eigen::Matrix<Complex, 16, 16>;
using StateVector = Eigen::Matrix<Complex, 16, 1>;
using DensityMatrix = Eigen::Matrix4cd;

StateVector vec(const DensityMatrix& rho);
DensityMatrix unvec(const StateVector& v);

// X -> -i [H, X]
SuperOperator commutator(const Eigen::Matrix4cd& H);

// X -> rate (V X V^+ - {V^+ V, X}/2)
SuperOperator lindblad_term(const Eigen::Matrix4cd& V, double rate);

struct Liouvillian {
    SuperOperator total{SuperOperator::Zero()};
    SuperOperator coherent{SuperOperator::Zero()};
    std::array<SuperOperator, 2> dissipators{SuperOperator::Zero(), SuperOperator::Zero()};
    Eigen::Matrix4d hamiltonian{Eigen::Matrix4d::Zero()}; // diag(s_n)
    Eigen::Matrix4d lamb_shift{Eigen::Matrix4d::Zero()};  // diag(Delta_n), zero without Lamb shift
    bool include_lamb{false};

    const SuperOperator& dissipator(int bath) const;
};

// Everything is expressed in the eigenbasis of H_S. `lamb` must be given when
// include_lamb is set and is ignored otherwise.
Liouvillian build_liouvillian(const model::EigenSystem& es, const bath::Bath& bath1,
                              const bath::Bath& bath2, bool include_lamb,
                              const lambshift::LambShiftData* lamb = nullptr);

// H_LS assembled directly from S_j(+-w) and the eigenoperators, without the
// level-shift bookkeeping. Used as an oracle for lambshift::level_shifts.
Eigen::Matrix4d lamb_hamiltonian(const model::EigenSystem& es,
                                 const lambshift::PerChannel<double>& s_plus,
                                 const lambshift::PerChannel<double>& s_minus);

struct SteadyState {
    std::array<double, 4> populations{}; // rho_11 .. rho_44 in the eigenbasis
    double x_plus{};
    double x_minus{};
    double y_plus{};
    double y_minus{};
    double x{};
    double y{};
};

SteadyState steady_state_analytic(const model::EigenSystem& es, const bath::Bath& bath1,
                                  const bath::Bath& bath2);

struct NumericSteadyState {
    DensityMatrix rho{DensityMatrix::Zero()};
    std::array<double, 4> populations{};
    double max_off_diagonal{};
    double residual{}; // max |(L rho)_k|
    std::size_t kernel_dimension{};
};

// Number of singular values below rel_tol * sigma_max.
std::size_t kernel_dimension(const SuperOperator& L, double rel_tol = 1e-11);

// Replaces the first row of L with the trace functional and LU-solves for the
// unit-trace kernel vector. Throws ConvergenceError("convergence.kernel_degenerate")
// when the kernel is not one-dimensional.
NumericSteadyState steady_state_numeric(const Liouvillian& L);

// Same kernel from the right singular vector of the smallest singular value.
DensityMatrix steady_state_svd(const SuperOperator& L);

// Tr(H L_j(rho)).
double heat_current_trace(const Eigen::Matrix4d& H, const SuperOperator& dissipator,
                          const DensityMatrix& rho);

struct HeatCurrentReport {
    double j_lamb{};    // J_1 with the shifted frequencies w_i + delta_i
    double j_no_lamb{}; // delta_i = 0
    double difference{};
    double j_lamb_magnitude{};
    double j_no_lamb_magnitude{};
    double a1{};
    double a2{};
    double supremum{};
    std::optional<double> slope; // needs a Drude bath 2
};

HeatCurrentReport heat_current_closed(const model::EigenSystem& es, const bath::Bath& bath1,
                                      const bath::Bath& bath2,
                                      const lambshift::Increments& increments);

// J_1(w1) w1 sin^2(phi+) + J_1(w2) w2 cos^2(phi+)
double supremum_no_lamb(const model::EigenSystem& es, const bath::SpectralDensity& J1);

// delta_mu = P_mu + Q_mu dT + (Q_mu wD / pi) R_{2,mu} for Drude baths sharing wD.
struct IncrementDecomposition {
    std::array<double, 2> p{};
    std::array<double, 2> q{};
    std::array<double, 2> r2{};
    double omega_d{};

    double delta(int mu, double delta_t) const;
};

IncrementDecomposition increment_decomposition(const model::EigenSystem& es,
                                               const bath::Bath& bath1, const bath::Bath& bath2,
                                               double series_tol = 1e-12);

// J_1(w1) Q_1 sin^2(phi+) + J_1(w2) Q_2 cos^2(phi+); needs a Drude bath 2.
double asymptotic_slope(const model::EigenSystem& es, const bath::SpectralDensity& J1,
                        const bath::SpectralDensity& J2);

struct MonotonicityResult {
    bool increasing{true};
    bool bounded{true};
    std::optional<std::size_t> first_violation;
};

// Strictly increasing and strictly below `bound`; throws DomainError when the
// grid is not strictly increasing or the sizes differ.
MonotonicityResult monotonicity_check(const std::vector<double>& grid,
                                      const std::vector<double>& values, double bound);

} // namespace lambflux::dynamics
