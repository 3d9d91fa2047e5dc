#include "lambflux/errors.hpp"
#include "lambflux/lambshift.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace lambflux;
using lambshift::QuadratureConfig;

namespace {

const bath::DrudeLorentz drude{0.01, 50.0};
const QuadratureConfig qcfg{};

double fig2_omega1() { return model::diagonalize({3, 2, 0.5}).omega1; }

} // namespace

TEST_CASE("analytic Delta' matches the residue closed form and quadrature") {
    const double w = 1.8424;
    const double J = bath::spectral_value(drude, w);
    CHECK(J == doctest::Approx(0.0183990).epsilon(1e-5));
    CHECK(lambshift::analytic_delta_prime(drude, w) ==
          doctest::Approx(-2 * J / oracle::pi * std::log(50 / w)).epsilon(1e-14));
    CHECK(lambshift::analytic_delta_prime(drude, 50.0) == doctest::Approx(0.0));
    for (double m : {0.3, 1.8424, 4.0, 20.0}) {
        CHECK(lambshift::analytic_delta_prime(drude, m) <= 0.0);
        const double q = lambshift::quadrature_delta_prime(drude, m, qcfg).value;
        CHECK(oracle::rel_err(lambshift::analytic_delta_prime(drude, m), q) < 1e-9);
    }
}

TEST_CASE("Delta' is temperature independent and Delta scales with gamma") {
    const double w = fig2_omega1();
    const bath::DrudeLorentz twice{0.02, 50.0};
    CHECK(lambshift::analytic_delta(twice, 1.0, w, 1e-12) ==
          doctest::Approx(2 * lambshift::analytic_delta(drude, 1.0, w, 1e-12)).epsilon(1e-14));
    const auto gauss = bath::GaussianCutoff{0.01, 50};
    const double a = lambshift::quadrature_delta(gauss, 2.0, w, qcfg).value;
    const auto g2 = bath::GaussianCutoff{0.005, 50};
    CHECK(lambshift::quadrature_delta(g2, 2.0, w, qcfg).value == doctest::Approx(a / 2).epsilon(1e-10));
}

TEST_CASE("Drude Delta: closed form, quadrature and the coth-form oracle") {
    for (double T : {0.2, 1.0, 7.0, 51.0}) {
        for (double m : {0.5, 1.8424, 3.3}) {
            const double a = lambshift::analytic_delta(drude, T, m, 1e-12);
            const double q = lambshift::quadrature_delta(drude, T, m, qcfg).value;
            CHECK(oracle::rel_err(a, q, 0.01) < 1e-8);

            const double combo = 2 * a + lambshift::analytic_delta_prime(drude, m);
            const double coth = oracle::coth_form(drude, T, m, 200.0, 1e-10);
            CHECK(oracle::rel_err(combo, coth, 0.01) < 1e-6);
        }
    }
}

TEST_CASE("Delta vanishes like T^2 as T -> 0") {
    // J nbar -> gamma x/(exp(x/T) - 1) near 0, so Delta ~ gamma pi T^2 / (3 w)
    const double w = fig2_omega1();
    for (double T : {0.01, 0.003}) {
        const double expect = 0.01 * oracle::pi * T * T / (3.0 * w);
        CHECK(oracle::rel_err(lambshift::quadrature_delta(drude, T, w, qcfg).value, expect) < 2e-3);
        CHECK(std::abs(lambshift::analytic_delta(drude, T, w, 1e-13) - expect) < 1e-10);
    }
}

TEST_CASE("Delta+ closed form for Drude against quadrature") {
    for (double m : {0.4, 1.8424, 3.35, 12.0}) {
        const double a = lambshift::analytic_delta_plus(drude, m);
        const double q = lambshift::quadrature_delta_plus(drude, m, qcfg).value;
        CHECK(oracle::rel_err(a, q) < 1e-9);
        const double minus = lambshift::quadrature_delta_minus(drude, m, qcfg).value;
        CHECK(oracle::rel_err(a + minus, lambshift::analytic_delta_prime(drude, m), 0.01) < 1e-9);
    }
}

TEST_CASE("hard cutoff closed forms") {
    const bath::HardCutoff hard{0.01, 50.0};
    for (double m : {0.5, 1.8424, 3.35, 30.0}) {
        CHECK(oracle::rel_err(lambshift::quadrature_delta_prime(hard, m, qcfg).value,
                              oracle::hard_delta_prime(0.01, 50, m)) < 1e-9);
        CHECK(oracle::rel_err(lambshift::quadrature_delta_plus(hard, m, qcfg).value,
                              oracle::hard_delta_plus(0.01, 50, m)) < 1e-9);
    }
    try {
        lambshift::quadrature_delta(hard, 1.0, 49.99, qcfg);
        FAIL("pole at the hard edge should be rejected");
    } catch (const DomainError& e) {
        CHECK(e.code() == "domain.pole_near_cutoff");
    }
}

TEST_CASE("Gaussian Delta' does not depend on the pole window or the split point") {
    const bath::GaussianCutoff gauss{0.01, 50.0};
    QuadratureConfig tight;
    tight.pole_window = 0.05;
    tight.cutoff_factor = 20;
    for (double m : {0.7, 2.2, 3.35}) {
        const double a = lambshift::quadrature_delta_prime(gauss, m, qcfg).value;
        const double b = lambshift::quadrature_delta_prime(gauss, m, tight).value;
        CHECK(oracle::rel_err(a, b) < 1e-10);
    }
}

TEST_CASE("S(+w) and S(-w) against the Delta bookkeeping") {
    for (auto J : {bath::SpectralDensity{drude}, bath::SpectralDensity{bath::HardCutoff{0.01, 50}},
                   bath::SpectralDensity{bath::GaussianCutoff{0.01, 50}}}) {
        const double T = 3.0, m = 1.8424;
        const double d = lambshift::quadrature_delta(J, T, m, qcfg).value;
        const double dp = lambshift::quadrature_delta_plus(J, m, qcfg).value;
        const double dm = lambshift::quadrature_delta_minus(J, m, qcfg).value;
        const double sp = lambshift::pv_quadrature_S(J, T, m, bath::Sign::Emission, qcfg).value;
        const double sm = lambshift::pv_quadrature_S(J, T, m, bath::Sign::Absorption, qcfg).value;
        CHECK(oracle::rel_err(sp, d + dm, 0.01) < 1e-9);
        CHECK(oracle::rel_err(sm, -(d + dp), 0.01) < 1e-9);
        CHECK(oracle::rel_err(sp - sm, 2 * d + dp + dm, 0.01) < 1e-9);
    }
    CHECK(lambshift::pv_quadrature_S(bath::DrudeLorentz{0.0, 50}, 1.0, 2.0, bath::Sign::Emission, qcfg)
              .value == 0.0);
}

TEST_CASE("Matsubara R against brute summation") {
    for (double T : {0.05, 1.0, 13.0, 400.0}) {
        for (double m : {0.5, 1.8424, 3.35}) {
            const auto r = lambshift::matsubara_R(T, m, 50.0, 1e-12);
            const double brute = oracle::brute_matsubara_R(T, m, 50.0);
            CHECK(std::abs(r.value - brute) < 1e-8);
            CHECK(r.error_estimate <= 1e-12);
        }
    }
}

TEST_CASE("R limits") {
    const double w = fig2_omega1();
    // T -> 0
    const double r0 = lambshift::matsubara_R(1e-3, w, 50.0, 1e-12).value;
    CHECK(oracle::rel_err(r0, std::log(w / 50.0)) < 0.01);
    // R/T -> 0 for large T
    const double big = 5e5;
    CHECK(std::abs(lambshift::matsubara_R(big, w, 50.0, 1e-12).value / big) < 1e-6);
    CHECK_THROWS_AS(lambshift::matsubara_R(1.0, w, 50.0, 1e-17), DomainError);
    CHECK_THROWS_AS(lambshift::matsubara_R(0.0, w, 50.0, 1e-10), DomainError);
}

TEST_CASE("Euler-Maclaurin estimate of R") {
    const double w = fig2_omega1();
    CHECK(lambshift::euler_maclaurin_R(1e12, w, 50.0) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(lambshift::euler_maclaurin_R(1e-4, w, 50.0) ==
          doctest::Approx(std::log(w / 50.0)).epsilon(1e-3));
    auto gap = [&](double T) {
        return std::abs(lambshift::euler_maclaurin_R(T, w, 50.0) -
                        lambshift::matsubara_R(T, w, 50.0, 1e-12).value);
    };
    // the gap opens from 0 at T -> 0, peaks, then closes as T grows
    CHECK(gap(1e-3) < 1e-3);
    CHECK(gap(100.0) < gap(30.0));
    CHECK(gap(1000.0) < gap(100.0));
    CHECK(gap(1e4) < 0.01);
}

TEST_CASE("residue forms with the cotangent") {
    const double w = fig2_omega1();
    for (double T : {0.7, 1.0, 3.1}) {
        auto h = [&](double x) { return x == 0.0 ? T / 2500.0 : x * oracle::nbar(x, T) / (2500.0 + x * x); };
        const double pv_f = oracle::pv_half_line(h, w, 100.0, 1e-13);
        auto F = [&](double x) { return x * oracle::nbar(x, T) / ((2500.0 + x * x) * (w + x)); };
        const double int_F = oracle::simpson_panels(F, 1e-12, 100.0, 64, 1e-14) +
                             oracle::semi_infinite(F, 100.0, 1e-14);
        const double f_closed = lambshift::closed_form_f_integral(T, w, 50.0, qcfg);
        const double F_closed = lambshift::closed_form_F_integral(T, w, 50.0, qcfg);
        CHECK(oracle::rel_err(f_closed, pv_f) < 1e-6);
        CHECK(oracle::rel_err(F_closed, int_F) < 1e-6);

        const double delta = lambshift::analytic_delta(drude, T, w, 1e-12);
        CHECK(oracle::rel_err(f_closed + F_closed, delta * oracle::pi / (0.01 * 2500.0)) < 1e-6);
        CHECK(oracle::rel_err(lambshift::delta_cot_form(drude, T, w, qcfg), delta) < 1e-6);
    }
}

TEST_CASE("cotangent pole window") {
    const double T = 50.0 / (2 * oracle::pi * 3.0); // wD / (2 pi T) = 3
    try {
        lambshift::closed_form_f_integral(T, 1.0, 50.0, qcfg);
        FAIL("expected the cot guard");
    } catch (const DomainError& e) {
        CHECK(e.code() == "domain.cot_pole");
    }
    CHECK_NOTHROW(lambshift::check_cot_window(1.0, 50.0));
}

TEST_CASE("Mittag-Leffler expansion of cot") {
    for (double x : {1.0, 0.3, 2.5, -1.7}) {
        CHECK(std::abs(lambshift::cot_mittag_leffler(x, 1000) - 1.0 / std::tan(x)) < 1e-10);
    }
    CHECK_THROWS_AS(lambshift::cot_mittag_leffler(0.0, 100), DomainError);
}

TEST_CASE("level shifts and increments") {
    const auto es = model::diagonalize({3, 2, 0.5});
    const bath::Bath b1{1.0, drude};
    const bath::Bath b2{26.0, drude};
    const auto data = lambshift::compute(es, b1, b2, {});
    const auto& L = data.levels;
    CHECK(std::abs(data.increments.delta1 - (L[1] - L[2])) < 1e-12);
    CHECK(std::abs(data.increments.delta2 - (L[1] - L[3])) < 1e-12);
    CHECK(std::abs(data.increments.delta1 - (L[3] - L[0])) < 1e-12);
    CHECK(std::abs(data.increments.delta2 - (L[2] - L[0])) < 1e-12);

    const lambshift::PerChannel<lambshift::ChannelShift> zero{};
    for (double v : lambshift::level_shifts(es, zero)) CHECK(v == 0.0);

    const auto m = lambshift::positivity_margin(es, data.increments);
    CHECK(m.first == doctest::Approx(es.omega1 + data.increments.delta1));
    CHECK(m.second == doctest::Approx(es.omega2 + data.increments.delta2));
}

TEST_CASE("routes") {
    const auto es = model::diagonalize({3, 2, 0.5});
    const bath::Bath hard{1.0, bath::HardCutoff{0.01, 50}};
    lambshift::LambShiftOptions opts;
    opts.route = lambshift::Route::Analytic;
    try {
        lambshift::channel_shift(hard, es.omega1, opts);
        FAIL("analytic route needs Drude");
    } catch (const DomainError& e) {
        CHECK(e.code() == "domain.analytic_requires_drude");
    }
    opts.route.reset();
    const auto c = lambshift::channel_shift(hard, es.omega1, opts);
    CHECK(c.route == lambshift::Route::Quadrature);
    CHECK_FALSE(c.matsubara_r.has_value());
    const auto d = lambshift::channel_shift({1.0, drude}, es.omega1, opts);
    CHECK(d.route == lambshift::Route::Analytic);
    CHECK(d.matsubara_r.has_value());
}

TEST_CASE("positivity at low temperature and vanishing coupling") {
    const auto es = model::diagonalize({3, 2, 0.5});
    const auto inc = lambshift::compute(es, {0.01, drude}, {0.01, drude}, {}).increments;
    const auto m = lambshift::positivity_margin(es, inc);
    CHECK(m.first > 0.9 * es.omega1);
    CHECK(m.second > 0.9 * es.omega2);

    const bath::DrudeLorentz weak{1e-9, 50};
    const auto tiny = lambshift::compute(es, {1.0, weak}, {30.0, weak}, {}).increments;
    CHECK(std::abs(tiny.delta1) < 1e-7);
    CHECK(std::abs(tiny.delta2) < 1e-7);
}
