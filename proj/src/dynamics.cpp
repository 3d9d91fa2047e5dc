#include "lambflux/dynamics.hpp"

#include "lambflux/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace lambflux::dynamics {

namespace {

constexpr double pi = std::numbers::pi;

SuperOperator kron(const Eigen::Matrix4cd& A, const Eigen::Matrix4cd& B) {
    SuperOperator out;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            out.block<4, 4>(4 * i, 4 * j) = A(i, j) * B;
        }
    }
    return out;
}

Eigen::Matrix4cd complexify(const Eigen::Matrix4d& A) { return A.cast<Complex>(); }

bool is_drude(const bath::SpectralDensity& J) {
    return bath::kind_of(J) == bath::SpectralKind::Drude;
}

} // namespace

StateVector vec(const DensityMatrix& rho) {
    return Eigen::Map<const StateVector>(rho.data());
}

DensityMatrix unvec(const StateVector& v) {
    return Eigen::Map<const DensityMatrix>(v.data());
}

SuperOperator commutator(const Eigen::Matrix4cd& H) {
    const Eigen::Matrix4cd I = Eigen::Matrix4cd::Identity();
    const Complex minus_i(0.0, -1.0);
    return minus_i * (kron(I, H) - kron(H.transpose(), I));
}

SuperOperator lindblad_term(const Eigen::Matrix4cd& V, double rate) {
    const Eigen::Matrix4cd I = Eigen::Matrix4cd::Identity();
    const Eigen::Matrix4cd VdV = V.adjoint() * V;
    return rate * (kron(V.conjugate(), V) - 0.5 * kron(I, VdV) - 0.5 * kron(VdV.transpose(), I));
}

const SuperOperator& Liouvillian::dissipator(int bath) const {
    if (bath != 1 && bath != 2) {
        throw std::out_of_range("Liouvillian::dissipator: bath must be 1 or 2");
    }
    return dissipators[static_cast<std::size_t>(bath - 1)];
}

Liouvillian build_liouvillian(const model::EigenSystem& es, const bath::Bath& bath1,
                              const bath::Bath& bath2, bool include_lamb,
                              const lambshift::LambShiftData* lamb) {
    if (include_lamb && lamb == nullptr) {
        throw DomainError("domain.missing_lamb_data",
                          "a Lamb-shifted generator needs the level shifts");
    }
    const auto rates = bath::transition_rates(es, bath1, bath2);
    const auto ops = model::eigenoperators(es);

    Liouvillian L;
    L.include_lamb = include_lamb;
    L.hamiltonian = es.hamiltonian();
    if (include_lamb) {
        for (int n = 0; n < 4; ++n) L.lamb_shift(n, n) = lamb->levels[static_cast<std::size_t>(n)];
    }
    L.coherent = commutator(complexify(L.hamiltonian + L.lamb_shift));

    for (int j = 1; j <= 2; ++j) {
        SuperOperator& D = L.dissipators[static_cast<std::size_t>(j - 1)];
        for (int mu = 1; mu <= 2; ++mu) {
            const Eigen::Matrix4cd V = complexify(ops.at(j, mu).matrix());
            D += lindblad_term(V, rates.at(j, mu, bath::Sign::Emission));
            D += lindblad_term(V.adjoint(), rates.at(j, mu, bath::Sign::Absorption));
        }
    }
    L.total = L.coherent + L.dissipators[0] + L.dissipators[1];
    return L;
}

Eigen::Matrix4d lamb_hamiltonian(const model::EigenSystem& es,
                                 const lambshift::PerChannel<double>& s_plus,
                                 const lambshift::PerChannel<double>& s_minus) {
    const auto ops = model::eigenoperators(es);
    Eigen::Matrix4d H = Eigen::Matrix4d::Zero();
    for (int j = 1; j <= 2; ++j) {
        for (int mu = 1; mu <= 2; ++mu) {
            const Eigen::Matrix4d V = ops.at(j, mu).matrix();
            H += s_plus.at(j, mu) * V.transpose() * V + s_minus.at(j, mu) * V * V.transpose();
        }
    }
    return H;
}

SteadyState steady_state_analytic(const model::EigenSystem& es, const bath::Bath& bath1,
                                  const bath::Bath& bath2) {
    bath::validate(bath1);
    bath::validate(bath2);
    const auto w = es.weights();
    auto n = [](const bath::Bath& b, double omega) {
        return bath::thermal_weight(b.spectral, b.temperature, omega);
    };
    auto n1 = [](const bath::Bath& b, double omega) {
        return bath::thermal_weight_plus_one(b.spectral, b.temperature, omega);
    };

    SteadyState s;
    s.x_plus = n(bath1, es.omega1) * w.sin2_plus + n(bath2, es.omega1) * w.cos2_minus;
    s.y_plus = n(bath1, es.omega2) * w.cos2_plus + n(bath2, es.omega2) * w.sin2_minus;
    s.x_minus = n1(bath1, es.omega1) * w.sin2_plus + n1(bath2, es.omega1) * w.cos2_minus;
    s.y_minus = n1(bath1, es.omega2) * w.cos2_plus + n1(bath2, es.omega2) * w.sin2_minus;
    s.x = s.x_plus + s.x_minus;
    s.y = s.y_plus + s.y_minus;
    if (!(s.x > 0.0) || !(s.y > 0.0)) {
        throw DomainError("domain.decoupled",
                          "both baths decouple from a transition; the steady state is not unique");
    }
    const double xy = s.x * s.y;
    s.populations = {s.x_minus * s.y_minus / xy, s.x_plus * s.y_plus / xy,
                     s.x_minus * s.y_plus / xy, s.x_plus * s.y_minus / xy};
    return s;
}

std::size_t kernel_dimension(const SuperOperator& L, double rel_tol) {
    Eigen::JacobiSVD<SuperOperator> svd(L);
    const auto& sigma = svd.singularValues();
    const double threshold = rel_tol * sigma(0);
    return static_cast<std::size_t>((sigma.array() <= threshold).count());
}

NumericSteadyState steady_state_numeric(const Liouvillian& L) {
    NumericSteadyState out;
    out.kernel_dimension = kernel_dimension(L.total);
    if (out.kernel_dimension != 1) {
        throw ConvergenceError("convergence.kernel_degenerate",
                               "Liouvillian kernel has dimension " +
                                   std::to_string(out.kernel_dimension) + ", expected 1");
    }

    SuperOperator A = L.total;
    StateVector b = StateVector::Zero();
    A.row(0).setZero();
    for (int k = 0; k < 4; ++k) A(0, 5 * k) = 1.0;
    b(0) = 1.0;
    const StateVector x = A.partialPivLu().solve(b);

    DensityMatrix rho = unvec(x);
    rho = 0.5 * (rho + rho.adjoint()).eval();
    out.rho = rho;
    out.residual = (L.total * vec(rho)).cwiseAbs().maxCoeff();
    for (int n = 0; n < 4; ++n) out.populations[static_cast<std::size_t>(n)] = rho(n, n).real();
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            if (r != c) out.max_off_diagonal = std::max(out.max_off_diagonal, std::abs(rho(r, c)));
        }
    }
    return out;
}

DensityMatrix steady_state_svd(const SuperOperator& L) {
    Eigen::JacobiSVD<SuperOperator> svd(L, Eigen::ComputeFullV);
    const StateVector v = svd.matrixV().col(15);
    DensityMatrix rho = unvec(v);
    rho /= rho.trace();
    return 0.5 * (rho + rho.adjoint());
}

double heat_current_trace(const Eigen::Matrix4d& H, const SuperOperator& dissipator,
                          const DensityMatrix& rho) {
    const DensityMatrix drho = unvec(dissipator * vec(rho));
    return (H.cast<Complex>() * drho).trace().real();
}

HeatCurrentReport heat_current_closed(const model::EigenSystem& es, const bath::Bath& bath1,
                                      const bath::Bath& bath2,
                                      const lambshift::Increments& increments) {
    const SteadyState s = steady_state_analytic(es, bath1, bath2);
    const auto w = es.weights();
    auto J1 = [&](double omega) { return bath::spectral_value(bath1.spectral, omega); };
    auto J2 = [&](double omega) { return bath::spectral_value(bath2.spectral, omega); };
    auto dn = [&](double omega) {
        return bath::bose_occupation(omega, bath1.temperature) -
               bath::bose_occupation(omega, bath2.temperature);
    };

    HeatCurrentReport r;
    r.a1 = 2.0 * w.sin2_plus * w.cos2_minus * J1(es.omega1) * J2(es.omega1) / s.x;
    r.a2 = 2.0 * w.sin2_minus * w.cos2_plus * J1(es.omega2) * J2(es.omega2) / s.y;
    const double f1 = r.a1 * dn(es.omega1);
    const double f2 = r.a2 * dn(es.omega2);
    r.j_no_lamb = f1 * es.omega1 + f2 * es.omega2;
    r.difference = f1 * increments.delta1 + f2 * increments.delta2;
    r.j_lamb = f1 * (es.omega1 + increments.delta1) + f2 * (es.omega2 + increments.delta2);
    r.j_lamb_magnitude = std::abs(r.j_lamb);
    r.j_no_lamb_magnitude = std::abs(r.j_no_lamb);
    r.supremum = supremum_no_lamb(es, bath1.spectral);
    if (is_drude(bath2.spectral)) {
        r.slope = asymptotic_slope(es, bath1.spectral, bath2.spectral);
    }
    return r;
}

double supremum_no_lamb(const model::EigenSystem& es, const bath::SpectralDensity& J1) {
    const auto w = es.weights();
    return bath::spectral_value(J1, es.omega1) * es.omega1 * w.sin2_plus +
           bath::spectral_value(J1, es.omega2) * es.omega2 * w.cos2_plus;
}

double IncrementDecomposition::delta(int mu, double delta_t) const {
    if (mu != 1 && mu != 2) throw std::out_of_range("IncrementDecomposition: mu must be 1 or 2");
    const auto i = static_cast<std::size_t>(mu - 1);
    return p[i] + q[i] * delta_t + q[i] * omega_d / pi * r2[i];
}

IncrementDecomposition increment_decomposition(const model::EigenSystem& es,
                                               const bath::Bath& bath1, const bath::Bath& bath2,
                                               double series_tol) {
    if (!is_drude(bath1.spectral) || !is_drude(bath2.spectral)) {
        throw DomainError("domain.analytic_requires_drude",
                          "the P/Q decomposition of delta_mu exists only for Drude baths");
    }
    bath::validate(bath1);
    bath::validate(bath2);
    const auto w = es.weights();
    const double t1 = bath1.temperature;
    const double d1 = bath::cutoff(bath1.spectral);
    const double d2 = bath::cutoff(bath2.spectral);
    auto J1 = [&](double omega) { return bath::spectral_value(bath1.spectral, omega); };
    auto J2 = [&](double omega) { return bath::spectral_value(bath2.spectral, omega); };

    const std::array<double, 2> omegas{es.omega1, es.omega2};
    const std::array<double, 2> own{w.sin2_plus, w.cos2_plus};    // bath-1 weight per channel
    const std::array<double, 2> other{w.cos2_minus, w.sin2_minus}; // bath-2 weight per channel

    IncrementDecomposition out;
    out.omega_d = d2;
    for (std::size_t i = 0; i < 2; ++i) {
        const double m = omegas[i];
        const double r1 = lambshift::matsubara_R(t1, m, d1, series_tol).value;
        out.r2[i] = lambshift::matsubara_R(bath2.temperature, m, d2, series_tol).value;
        out.p[i] = 2.0 * J1(m) / pi * (pi * t1 / d1 + r1) * own[i] +
                   2.0 * J2(m) * t1 / d2 * other[i];
        out.q[i] = 2.0 * J2(m) / d2 * other[i];
    }
    return out;
}

double asymptotic_slope(const model::EigenSystem& es, const bath::SpectralDensity& J1,
                        const bath::SpectralDensity& J2) {
    if (!is_drude(J2)) {
        throw DomainError("domain.analytic_requires_drude",
                          "the asymptotic slope is derived for a Drude bath 2");
    }
    const auto w = es.weights();
    const double d2 = bath::cutoff(J2);
    const double q1 = 2.0 * bath::spectral_value(J2, es.omega1) / d2 * w.cos2_minus;
    const double q2 = 2.0 * bath::spectral_value(J2, es.omega2) / d2 * w.sin2_minus;
    return bath::spectral_value(J1, es.omega1) * q1 * w.sin2_plus +
           bath::spectral_value(J1, es.omega2) * q2 * w.cos2_plus;
}

MonotonicityResult monotonicity_check(const std::vector<double>& grid,
                                      const std::vector<double>& values, double bound) {
    if (grid.size() != values.size()) {
        throw DomainError("domain.grid_size", "grid and values differ in length");
    }
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] > grid[i - 1])) {
            throw DomainError("domain.grid_order", "grid must be strictly increasing");
        }
    }
    MonotonicityResult out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const bool below = values[i] < bound;
        const bool up = i == 0 || values[i] > values[i - 1];
        if (!below) out.bounded = false;
        if (!up) out.increasing = false;
        if ((!below || !up) && !out.first_violation) out.first_violation = i;
    }
    return out;
}

} // namespace lambflux::dynamics
