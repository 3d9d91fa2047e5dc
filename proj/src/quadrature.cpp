#include "lambflux/quadrature.hpp"

#include "lambflux/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <sstream>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace lambflux::quadrature {

void validate(const QuadratureConfig& cfg) {
    if (!(cfg.abs_tol > 0.0) || !(cfg.rel_tol > 0.0)) {
        throw DomainError("domain.quadrature_tolerance", "quadrature tolerances must be > 0");
    }
    if (!(cfg.pole_window > 0.0)) {
        throw DomainError("domain.pole_window", "pole window half-width must be > 0");
    }
    if (!(cfg.cutoff_factor > 1.0)) {
        throw DomainError("domain.cutoff_factor", "cutoff_factor must be > 1 so that Lambda > omega_d");
    }
    if (cfg.max_depth == 0 || cfg.max_depth > 60) {
        throw DomainError("domain.max_depth", "max_depth must be in [1, 60]");
    }
    if (!(cfg.cutoff_guard > 0.0) || !(cfg.cutoff_guard < 0.5)) {
        throw DomainError("domain.cutoff_guard", "cutoff_guard must be in (0, 0.5)");
    }
}

Estimate integrate(const Integrand& f, double a, double b, const QuadratureConfig& cfg) {
    if (!(b > a)) {
        return {};
    }
    using rule = boost::math::quadrature::gauss_kronrod<double, 31>;
    double error = 0.0;
    double l1 = 0.0;
    double value = 0.0;
    try {
        auto run = [&](const auto& g, double lo, double hi) {
            // Pieces that are negligible in absolute terms (Bose tails deep in the
            // subnormal range) would otherwise bisect to max_depth chasing a
            // relative tolerance on noise.
            value = rule::integrate(g, lo, hi, 0, cfg.rel_tol, &error, &l1);
            if (l1 > cfg.abs_tol) {
                value = rule::integrate(g, lo, hi, cfg.max_depth, cfg.rel_tol, &error, &l1);
            }
        };
        if (std::isinf(b) && a > 0.0) {
            // x = a/t puts the algebraic tails of J(w)/w^k on a smooth, finite interval.
            auto mapped = [&f, a](double t) { return t == 0.0 ? 0.0 : f(a / t) * a / (t * t); };
            run(mapped, 0.0, 1.0);
        } else {
            run(f, a, b);
        }
    } catch (const std::exception& e) {
        throw ConvergenceError("convergence.quadrature", std::string("quadrature failed: ") + e.what());
    }
    if (!std::isfinite(value)) {
        throw ConvergenceError("convergence.quadrature_nonfinite", "quadrature produced a non-finite value");
    }
    const double allowed = std::max(cfg.abs_tol, cfg.rel_tol * l1);
    if (error > allowed) {
        std::ostringstream msg;
        msg << "adaptive quadrature on [" << a << ", " << b << "] reached depth " << cfg.max_depth
            << " with error " << error << " > " << allowed;
        throw ConvergenceError("convergence.quadrature_depth", msg.str());
    }
    return {value, error, 0.0};
}

Estimate principal_value(const Integrand& h, const Integrand& regular, double pole,
                         const Support& support, const QuadratureConfig& cfg) {
    validate(cfg);
    const double upper = support.upper;
    if (!(pole > 0.0) || !(upper > pole)) {
        throw DomainError("domain.pole_outside", "principal value needs 0 < pole < Lambda");
    }
    if (upper - pole < cfg.cutoff_guard * upper) {
        throw DomainError("domain.pole_near_cutoff",
                          "pole at " + std::to_string(pole) + " is within " +
                              std::to_string(cfg.cutoff_guard) + " * Lambda of the cutoff " +
                              std::to_string(upper));
    }

    const double eta = std::min({cfg.pole_window, 0.5 * pole, 0.5 * (upper - pole)});

    auto outer = [&](double w) {
        double v = h(w) / (pole - w);
        if (regular) v += regular(w);
        return v;
    };
    auto window = [&](double t) {
        double v = (h(pole - t) - h(pole + t)) / t;
        if (regular) v += regular(pole - t) + regular(pole + t);
        return v;
    };

    Estimate total;
    auto add = [&total](const Estimate& e) {
        total.value += e.value;
        total.error += e.error;
    };

    add(integrate(outer, 0.0, pole - eta, cfg));
    add(integrate(window, 0.0, eta, cfg));

    std::vector<double> knots{pole + eta};
    if (support.knot > pole + eta && support.knot < upper) {
        knots.push_back(support.knot);
    }
    knots.push_back(upper);
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        add(integrate(outer, knots[i], knots[i + 1], cfg));
    }

    if (support.infinite_tail) {
        const Estimate tail = integrate(outer, upper, std::numeric_limits<double>::infinity(), cfg);
        add(tail);
        total.tail = tail.value;
    }
    return total;
}

} // namespace lambflux::quadrature
