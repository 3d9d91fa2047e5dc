#include "lambflux/model.hpp"

#include "lambflux/errors.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace lambflux::model {

namespace {

bool finite(const SystemParams& p) {
    return std::isfinite(p.epsilon1) && std::isfinite(p.epsilon2) && std::isfinite(p.g);
}

} // namespace

void validate(const SystemParams& p) {
    if (!finite(p)) {
        throw DomainError("domain.system_finite", "system parameters must be finite");
    }
    if (!(p.epsilon2 > 0.0)) {
        throw DomainError("domain.epsilon_positive", "epsilon2 must be > 0");
    }
    if (p.epsilon1 < p.epsilon2) {
        throw DomainError("domain.epsilon_order",
                          "epsilon1 must be >= epsilon2 (got " + std::to_string(p.epsilon1) +
                              " < " + std::to_string(p.epsilon2) + ")");
    }
    if (!(p.g > 0.0)) {
        throw DomainError("domain.coupling_positive", "g must be > 0");
    }
}

SystemParams ordered(SystemParams p) noexcept {
    if (p.epsilon1 < p.epsilon2) {
        std::swap(p.epsilon1, p.epsilon2);
    }
    return p;
}

double EigenSystem::omega(int mu) const {
    if (mu == 1) return omega1;
    if (mu == 2) return omega2;
    throw std::out_of_range("EigenSystem::omega: channel must be 1 or 2");
}

MixingWeights EigenSystem::weights() const noexcept {
    const double sp = std::sin(phi_plus);
    const double cp = std::cos(phi_plus);
    const double sm = std::sin(phi_minus);
    const double cm = std::cos(phi_minus);
    return {sp * sp, cp * cp, sm * sm, cm * cm};
}

Eigen::Matrix4d EigenSystem::hamiltonian() const {
    return Eigen::Vector4d(eigenvalues[0], eigenvalues[1], eigenvalues[2], eigenvalues[3])
        .asDiagonal();
}

EigenSystem diagonalize(const SystemParams& p) {
    validate(p);

    const double sum = p.epsilon1 + p.epsilon2;
    const double diff = p.epsilon1 - p.epsilon2;

    EigenSystem es;
    es.alpha = std::hypot(0.5 * diff, p.g);
    es.beta = std::hypot(0.5 * sum, p.g);
    // atan2 keeps theta = pi/2 exact at eps1 == eps2 where tan(theta) diverges.
    es.phi = std::atan2(2.0 * p.g, sum);
    es.theta = std::atan2(2.0 * p.g, diff);
    es.phi_plus = 0.5 * (es.theta + es.phi);
    es.phi_minus = 0.5 * (es.theta - es.phi);
    es.omega1 = es.beta - es.alpha;
    es.omega2 = es.beta + es.alpha;
    es.eigenvalues = {-es.beta, es.beta, es.alpha, -es.alpha};

    const double cf = std::cos(0.5 * es.phi);
    const double sf = std::sin(0.5 * es.phi);
    const double ct = std::cos(0.5 * es.theta);
    const double st = std::sin(0.5 * es.theta);

    // |00>=0, |01>=1, |10>=2, |11>=3 with |0> the upper level of each qubit.
    auto& U = es.vectors;
    U.setZero();
    U(0, 0) = -sf; U(3, 0) = cf; // s1 = cos|11> - sin|00>
    U(0, 1) = cf;  U(3, 1) = sf; // s2 = sin|11> + cos|00>
    U(1, 2) = ct;  U(2, 2) = st; // s3 = cos|01> + sin|10>
    U(1, 3) = -st; U(2, 3) = ct; // s4 = -sin|01> + cos|10>
    return es;
}

Eigen::Matrix4d hamiltonian_matrix(const SystemParams& p) {
    if (!finite(p)) {
        throw DomainError("domain.system_finite", "system parameters must be finite");
    }
    const double sum = 0.5 * (p.epsilon1 + p.epsilon2);
    const double diff = 0.5 * (p.epsilon1 - p.epsilon2);
    Eigen::Matrix4d H = Eigen::Vector4d(sum, diff, -diff, -sum).asDiagonal();
    H(0, 3) = H(3, 0) = p.g;
    H(1, 2) = H(2, 1) = p.g;
    return H;
}

Eigen::Matrix4d sigma_x(int qubit) {
    Eigen::Matrix4d X = Eigen::Matrix4d::Zero();
    if (qubit == 1) {
        X(0, 2) = X(2, 0) = 1.0;
        X(1, 3) = X(3, 1) = 1.0;
    } else if (qubit == 2) {
        X(0, 1) = X(1, 0) = 1.0;
        X(2, 3) = X(3, 2) = 1.0;
    } else {
        throw std::out_of_range("sigma_x: qubit must be 1 or 2");
    }
    return X;
}

Eigen::Matrix4d to_eigenbasis(const EigenSystem& es, const Eigen::Matrix4d& product_op) {
    return es.vectors.transpose() * product_op * es.vectors;
}

const EigenOperator& EigenOperatorSet::at(int bath, int channel) const {
    if ((bath != 1 && bath != 2) || (channel != 1 && channel != 2)) {
        throw std::out_of_range("EigenOperatorSet::at: indices must be 1 or 2");
    }
    return ops[static_cast<std::size_t>(2 * (bath - 1) + (channel - 1))];
}

EigenOperatorSet eigenoperators(const EigenSystem& es) {
    // Zero-based eigenbasis indices: s1=0, s2=1, s3=2, s4=3.
    auto make = [&](int bath, int channel, double prefactor,
                    std::pair<int, int> first, std::pair<int, int> second, double second_sign) {
        EigenOperator op;
        op.bath = bath;
        op.channel = channel;
        op.prefactor = prefactor;
        op.frequency = es.omega(channel);
        op.pattern(first.first, first.second) = 1.0;
        op.pattern(second.first, second.second) = second_sign;
        return op;
    };

    EigenOperatorSet set;
    // V11 = sin(phi+) (|s3><s2| - |s1><s4|)
    set.ops[0] = make(1, 1, std::sin(es.phi_plus), {2, 1}, {0, 3}, -1.0);
    // V12 = cos(phi+) (|s1><s3| + |s4><s2|)
    set.ops[1] = make(1, 2, std::cos(es.phi_plus), {0, 2}, {3, 1}, +1.0);
    // V21 = cos(phi-) (|s3><s2| + |s1><s4|)
    set.ops[2] = make(2, 1, std::cos(es.phi_minus), {2, 1}, {0, 3}, +1.0);
    // V22 = sin(phi-) (|s1><s3| - |s4><s2|)
    set.ops[3] = make(2, 2, std::sin(es.phi_minus), {0, 2}, {3, 1}, -1.0);
    return set;
}

} // namespace lambflux::model
