#include "lambflux/errors.hpp"
#include "lambflux/quadrature.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

using namespace lambflux;
using quadrature::QuadratureConfig;

TEST_CASE("plain integrals") {
    const QuadratureConfig cfg;
    CHECK(quadrature::integrate([](double x) { return std::exp(-x); }, 0.0, 1.0, cfg).value ==
          doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-14));
    const double inf = std::numeric_limits<double>::infinity();
    CHECK(quadrature::integrate([](double x) { return 1.0 / (x * x * x); }, 100.0, inf, cfg).value ==
          doctest::Approx(0.5e-4).epsilon(1e-13));
    CHECK(quadrature::integrate([](double x) { return x; }, 1.0, 1.0, cfg).value == 0.0);
}

TEST_CASE("non-convergence is reported") {
    QuadratureConfig cfg;
    cfg.max_depth = 1;
    auto wild = [](double x) { return std::sin(400.0 * x) * std::exp(-x); };
    CHECK_THROWS_AS(quadrature::integrate(wild, 0.0, 60.0, cfg), ConvergenceError);
}

TEST_CASE("principal value of simple kernels") {
    const QuadratureConfig cfg;
    // PV int_0^3 1/(1-x) dx = ln(1/2)
    auto one = [](double) { return 1.0; };
    const auto e = quadrature::principal_value(one, {}, 1.0, {3.0, false, 0.0}, cfg);
    CHECK(e.value == doctest::Approx(std::log(0.5)).epsilon(1e-13));
    CHECK(e.tail == 0.0);

    // PV int_0^inf exp(-x)/(1 - x) dx = e^{-1} Ei(1)
    auto ex = [](double x) { return std::exp(-x); };
    const auto pv = quadrature::principal_value(ex, {}, 1.0, {40.0, true, 0.0}, cfg);
    const double ei1 = 1.8951178163559368;
    CHECK(pv.value == doctest::Approx(std::exp(-1.0) * ei1).epsilon(1e-12));
}

TEST_CASE("regular part and knot") {
    const QuadratureConfig cfg;
    auto zero = [](double) { return 0.0; };
    auto reg = [](double x) { return 1.0 / (1.0 + x * x); };
    const auto e = quadrature::principal_value(zero, reg, 2.0, {10.0, true, 5.0}, cfg);
    CHECK(e.value == doctest::Approx(std::numbers::pi / 2).epsilon(1e-12));
    CHECK(e.tail == doctest::Approx(std::atan(0.1)).epsilon(1e-12));
}

TEST_CASE("pole guards and configuration checks") {
    const QuadratureConfig cfg;
    auto one = [](double) { return 1.0; };
    CHECK_THROWS_AS(quadrature::principal_value(one, {}, 5.0, {4.0, false, 0.0}, cfg), DomainError);
    try {
        quadrature::principal_value(one, {}, 49.99, {50.0, false, 0.0}, cfg);
        FAIL("expected a guard");
    } catch (const DomainError& e) {
        CHECK(e.code() == "domain.pole_near_cutoff");
    }
    QuadratureConfig bad;
    bad.cutoff_factor = 1.0;
    CHECK_THROWS_AS(quadrature::validate(bad), DomainError);
    bad = {};
    bad.rel_tol = 0;
    CHECK_THROWS_AS(quadrature::validate(bad), DomainError);
}
