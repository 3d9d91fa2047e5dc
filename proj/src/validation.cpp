#include "lambflux/validation.hpp"

#include "lambflux/dynamics.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>

namespace lambflux::validation {

namespace {

double rel(double a, double b, double floor = 0.0) {
    const double scale = std::max({std::abs(a), std::abs(b), floor});
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

CheckResult make(std::string name, double measured, double tolerance) {
    return {std::move(name), measured <= tolerance, measured, tolerance};
}

CheckResult eigenstructure(const model::SystemParams& p) {
    const auto es = model::diagonalize(p);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> solver(model::hamiltonian_matrix(p));
    std::array<double, 4> analytic = es.eigenvalues;
    std::sort(analytic.begin(), analytic.end());
    double err = 0.0;
    for (int i = 0; i < 4; ++i) {
        err = std::max(err, std::abs(solver.eigenvalues()(i) - analytic[static_cast<std::size_t>(i)]));
    }
    // [H, V] = -w V in the eigenbasis
    const auto ops = model::eigenoperators(es);
    const Eigen::Matrix4d H = es.hamiltonian();
    for (const auto& op : ops.ops) {
        const Eigen::Matrix4d V = op.matrix();
        err = std::max(err, (H * V - V * H + op.frequency * V).cwiseAbs().maxCoeff());
    }
    return make("eigenstructure", err, 1e-12);
}

CheckResult kms(const experiments::SweepConfig& cfg) {
    double err = 0.0;
    for (auto kind : {bath::SpectralKind::Drude, bath::SpectralKind::Hard,
                      bath::SpectralKind::Gaussian}) {
        const auto J = bath::make_spectral(kind, cfg.gamma1, cfg.omega_d);
        for (int i = 0; i < 10; ++i) {
            const double w = 0.01 * cfg.omega_d * std::pow(90.0, i / 9.0);
            for (int k = 0; k < 10; ++k) {
                const double T = 0.1 * std::pow(1e3, k / 9.0);
                const double up = bath::gamma_rate(J, T, w, bath::Sign::Emission);
                const double down = bath::gamma_rate(J, T, w, bath::Sign::Absorption);
                if (up == 0.0) continue;
                err = std::max(err, rel(down, std::exp(-w / T) * up));
            }
        }
    }
    return make("KMS", err, 1e-12);
}

} // namespace

std::vector<CheckResult> run_checks(const config::RunConfig& run) {
    const auto& cfg = run.sweep;
    experiments::validate(cfg);
    const auto kind = cfg.variants.front();
    const double dt = run.delta_t > 0.0 ? run.delta_t : cfg.omega_d;
    const auto es = model::diagonalize(cfg.system);
    const auto b1 = cfg.bath1(kind);
    const auto b2 = cfg.bath2(kind, dt);

    std::vector<CheckResult> out;
    out.push_back(eigenstructure(cfg.system));
    out.push_back(kms(cfg));

    const auto lamb = lambshift::compute(es, b1, b2, cfg.lamb);
    const auto plain = dynamics::build_liouvillian(es, b1, b2, false);
    const auto shifted = dynamics::build_liouvillian(es, b1, b2, true, &lamb);
    const auto ns_plain = dynamics::steady_state_numeric(plain);
    const auto ns = dynamics::steady_state_numeric(shifted);
    const auto as = dynamics::steady_state_analytic(es, b1, b2);

    {
        double err = std::max(ns.max_off_diagonal, ns.residual);
        for (std::size_t n = 0; n < 4; ++n) {
            err = std::max(err, std::abs(ns.populations[n] - as.populations[n]));
        }
        out.push_back(make("steady-state oracle", err, 1e-10));
        out.push_back(make("Lamb-shift invariance of steady state",
                           (ns.rho - ns_plain.rho).cwiseAbs().maxCoeff(), 1e-10));
    }

    {
        const Eigen::Matrix4d H = shifted.hamiltonian + shifted.lamb_shift;
        const double j1 = dynamics::heat_current_trace(H, shifted.dissipator(1), ns.rho);
        const double j2 = dynamics::heat_current_trace(H, shifted.dissipator(2), ns.rho);
        const auto closed = dynamics::heat_current_closed(es, b1, b2, lamb.increments);
        out.push_back(make("current trace vs closed form", rel(j1, closed.j_lamb), 1e-9));
        out.push_back(make("current conservation",
                           std::abs(j1 + j2) / std::max(std::abs(j1), 1.0), 1e-12));
        out.push_back(make("Lamb current decomposition",
                           rel(closed.j_lamb, closed.j_no_lamb + closed.difference), 1e-12));

        const auto beq = cfg.bath2(kind, 0.0);
        const auto eq_lamb = lambshift::compute(es, b1, beq, cfg.lamb);
        const auto eq = dynamics::build_liouvillian(es, b1, beq, true, &eq_lamb);
        const auto rho_eq = dynamics::steady_state_numeric(eq).rho;
        const Eigen::Matrix4d Heq = eq.hamiltonian + eq.lamb_shift;
        const double j_eq = std::max(
            std::abs(dynamics::heat_current_trace(Heq, eq.dissipator(1), rho_eq)),
            std::abs(dynamics::heat_current_closed(es, b1, beq, eq_lamb.increments).j_lamb));
        out.push_back(make("equilibrium current", j_eq, 1e-12));
    }

    {
        // H_LS from the raw S_j(+-w) integrals against the level-shift bookkeeping.
        lambshift::PerChannel<double> sp;
        lambshift::PerChannel<double> sm;
        for (int j = 1; j <= 2; ++j) {
            const auto& b = j == 1 ? b1 : b2;
            for (int mu = 1; mu <= 2; ++mu) {
                sp.at(j, mu) = lambshift::pv_quadrature_S(b.spectral, b.temperature, es.omega(mu),
                                                          bath::Sign::Emission, cfg.lamb.quadrature)
                                   .value;
                sm.at(j, mu) = lambshift::pv_quadrature_S(b.spectral, b.temperature, es.omega(mu),
                                                          bath::Sign::Absorption,
                                                          cfg.lamb.quadrature)
                                   .value;
            }
        }
        const Eigen::Matrix4d H = dynamics::lamb_hamiltonian(es, sp, sm);
        double err = (H - Eigen::Matrix4d(H.diagonal().asDiagonal())).cwiseAbs().maxCoeff();
        for (int n = 0; n < 4; ++n) {
            err = std::max(err, rel(H(n, n), lamb.levels[static_cast<std::size_t>(n)], cfg.gamma1));
        }
        out.push_back(make("level shifts vs S integrals", err, 1e-6));
    }

    {
        // Drude closed forms against principal-value quadrature.
        double err = 0.0;
        const bath::DrudeLorentz drude{std::max(cfg.gamma1, 1e-3), cfg.omega_d};
        for (double T : {0.1, cfg.t1, cfg.t1 + dt}) {
            for (int mu = 1; mu <= 2; ++mu) {
                const double w = es.omega(mu);
                const double a = lambshift::analytic_delta(drude, T, w, cfg.lamb.series_tol);
                const double q =
                    lambshift::quadrature_delta(drude, T, w, cfg.lamb.quadrature).value;
                const double ap = lambshift::analytic_delta_prime(drude, w);
                const double qp =
                    lambshift::quadrature_delta_prime(drude, w, cfg.lamb.quadrature).value;
                err = std::max({err, rel(a, q, drude.gamma), rel(ap, qp, drude.gamma)});
            }
        }
        out.push_back(make("Drude route equivalence", err, 1e-6));
    }

    {
        // omega_mu + delta_mu > 0 across T1, T2 in [0.01, 100].
        double worst = std::numeric_limits<double>::infinity();
        for (int a = 0; a < 5; ++a) {
            for (int b = 0; b < 5; ++b) {
                const bath::Bath x{0.01 * std::pow(1e4, a / 4.0), cfg.bath1(kind).spectral};
                const bath::Bath y{0.01 * std::pow(1e4, b / 4.0), cfg.bath2(kind, 0.0).spectral};
                const auto inc = lambshift::compute(es, x, y, cfg.lamb).increments;
                const auto m = lambshift::positivity_margin(es, inc);
                worst = std::min({worst, m.first, m.second});
            }
        }
        CheckResult c{"positivity of shifted gaps", worst > 0.0, worst, 0.0};
        out.push_back(c);
    }
    return out;
}

} // namespace lambflux::validation
