// Two-qubit XX Hamiltonian, its exact eigenstructure, and the
// bath-coupling eigenoperators.
//
// Conventions used throughout lambflux:
//   * hbar = k_B = 1; every energy, frequency and temperature is dimensionless.
//   * Product basis ordering {|00>, |01>, |10>, |11>}, first label = qubit 1,
//     with sigma^z|0> = +|0>. Index of |ab> is 2a + b.
//   * Eigenbasis ordering (s1, s2, s3, s4) with energies (-beta, beta, alpha, -alpha).
//     Matrices "in the eigenbasis" use zero-based indices 0..3 for s1..s4.

#pragma once

#include <Eigen/Dense>

#include <array>

namespace lambflux::model {

struct SystemParams {
    double epsilon1{3.0}; // level splitting of qubit 1
    double epsilon2{2.0}; // level splitting of qubit 2
    double g{0.5};        // XX coupling
};

// Throws DomainError unless epsilon1 >= epsilon2 > 0 and g > 0.
void validate(const SystemParams& p);

// Swaps the splittings if needed so that epsilon1 >= epsilon2.
SystemParams ordered(SystemParams p) noexcept;

// sin^2/cos^2 of the half-angle sums; these weights appear in every rate,
// shift and current formula.
struct MixingWeights {
    double sin2_plus{};
    double cos2_plus{};
    double sin2_minus{};
    double cos2_minus{};
};

struct EigenSystem {
    double alpha{};
    double beta{};
    double phi{};       // atan2(2g, eps1 + eps2)
    double theta{};     // atan2(2g, eps1 - eps2)
    double phi_plus{};  // (theta + phi) / 2
    double phi_minus{}; // (theta - phi) / 2
    double omega1{};    // beta - alpha
    double omega2{};    // beta + alpha

    std::array<double, 4> eigenvalues{}; // s1..s4 = -beta, beta, alpha, -alpha

    // Column n is |s_{n+1}> expanded in the product basis.
    Eigen::Matrix4d vectors{Eigen::Matrix4d::Zero()};

    // Transition frequency of channel mu in {1, 2}.
    double omega(int mu) const;

    MixingWeights weights() const noexcept;

    Eigen::Matrix4d hamiltonian() const; // diag(s1..s4)
};

EigenSystem diagonalize(const SystemParams& p);

// H_S in the product basis. Only finiteness is checked, so the decoupled
// case g = 0 and degenerate splittings are representable.
Eigen::Matrix4d hamiltonian_matrix(const SystemParams& p);

// sigma_j^x (qubit j in {1, 2}) in the product basis.
Eigen::Matrix4d sigma_x(int qubit);

// U^T A U with U = es.vectors.
Eigen::Matrix4d to_eigenbasis(const EigenSystem& es, const Eigen::Matrix4d& product_op);

// V_{j,mu}: lowers the energy by omega_mu, [H_S, V] = -omega_mu V.
struct EigenOperator {
    int bath{};
    int channel{};
    double prefactor{}; // sin(phi+), cos(phi+), cos(phi-), sin(phi-) for (1,1),(1,2),(2,1),(2,2)
    double frequency{};
    Eigen::Matrix4d pattern{Eigen::Matrix4d::Zero()}; // the +-1 entries

    Eigen::Matrix4d matrix() const { return prefactor * pattern; }
};

struct EigenOperatorSet {
    std::array<EigenOperator, 4> ops; // (1,1), (1,2), (2,1), (2,2)

    const EigenOperator& at(int bath, int channel) const;
};

EigenOperatorSet eigenoperators(const EigenSystem& es);

} // namespace lambflux::model
