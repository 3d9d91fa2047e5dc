#include "lambflux/config.hpp"
#include "lambflux/dynamics.hpp"
#include "lambflux/errors.hpp"
#include "lambflux/experiments.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <sstream>

using namespace lambflux;
using experiments::Grid;
using experiments::GridScale;
using experiments::SweepConfig;

namespace {

SweepConfig small_config(std::size_t count = 24) {
    SweepConfig cfg;
    cfg.grid = Grid{0.01, 100.0, count, GridScale::Log};
    cfg.spot_check_interval = 5;
    return cfg;
}

std::string csv_of(const std::vector<experiments::SweepRow>& rows) {
    std::ostringstream os;
    experiments::write_csv(os, rows);
    return os.str();
}

} // namespace

TEST_CASE("grid points") {
    const auto lin = Grid{0.0, 2.0, 101, GridScale::Linear}.points();
    REQUIRE(lin.size() == 101);
    CHECK(lin.front() == 0.0);
    CHECK(lin[50] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(lin.back() == 2.0);

    const auto lg = Grid{0.01, 100.0, 5, GridScale::Log}.points();
    CHECK(lg.front() == 0.01);
    CHECK(lg[2] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(lg.back() == 100.0);

    CHECK(Grid{0.5, 1.0, 0, GridScale::Log}.points().empty());
    CHECK(Grid{0.5, 0.5, 1, GridScale::Log}.points().size() == 1);
    CHECK_THROWS_AS((Grid{0.0, 1.0, 3, GridScale::Log}.points()), DomainError);
    CHECK_THROWS_AS((Grid{2.0, 1.0, 3, GridScale::Linear}.points()), DomainError);
    CHECK(experiments::parse_scale("log") == GridScale::Log);
    CHECK_THROWS_AS(experiments::parse_scale("cubic"), DomainError);
}

TEST_CASE("rows are internally consistent") {
    const auto cfg = small_config();
    const auto rows = experiments::sweep(cfg, bath::SpectralKind::Drude);
    REQUIRE(rows.size() == 24);
    const auto es = model::diagonalize(cfg.system);
    const double sup = dynamics::supremum_no_lamb(es, cfg.bath1(bath::SpectralKind::Drude).spectral);
    for (const auto& r : rows) {
        CHECK(r.dj == doctest::Approx(r.jdelta - r.j0).epsilon(1e-14));
        CHECK(r.supremum == doctest::Approx(sup).epsilon(1e-15));
        CHECK(r.margin1 == doctest::Approx(r.omega1 + r.delta1));
        CHECK(r.margin2 == doctest::Approx(r.omega2 + r.delta2));
        CHECK(std::abs(r.j0) < sup);
        CHECK(std::isfinite(r.r21));
        CHECK(std::isfinite(r.r22_est));
        const auto direct = experiments::evaluate_point(cfg, bath::SpectralKind::Drude, r.delta_t);
        CHECK(direct.jdelta == r.jdelta);
    }
    // J0 magnitude increases with dT
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(std::abs(rows[i].j0) > std::abs(rows[i - 1].j0));
}

TEST_CASE("non-Drude rows have no Matsubara columns") {
    auto cfg = small_config(4);
    const auto rows = experiments::sweep(cfg, bath::SpectralKind::Gaussian);
    for (const auto& r : rows) CHECK(std::isnan(r.r21));
    const auto csv = csv_of(rows);
    CHECK(csv.find(",nan,nan,nan,nan,") != std::string::npos);
    CHECK(csv.find("gaussian\n") != std::string::npos);
}

TEST_CASE("sweeps are deterministic across thread counts") {
    auto one = small_config(40);
    one.threads = 1;
    auto four = one;
    four.threads = 4;
    one.variants = four.variants = {bath::SpectralKind::Drude, bath::SpectralKind::Hard};
    const auto a = csv_of(experiments::sweep(one));
    const auto b = csv_of(experiments::sweep(four));
    CHECK(a == b);
    CHECK(std::count(a.begin(), a.end(), '\n') == 2 + 80);
}

TEST_CASE("CSV schema") {
    auto cfg = small_config(2);
    const auto csv = csv_of(experiments::sweep(cfg));
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    CHECK(line == "schema=lambflux.v1");
    std::getline(in, line);
    CHECK(line ==
          "dT,omega1,omega2,delta1,delta2,R21,R22,R21_est,R22_est,J0,Jdelta,dJ,supremum,margin1,"
          "margin2,variant");
    std::getline(in, line);
    CHECK(std::count(line.begin(), line.end(), ',') == 15);
    CHECK(line.rfind("0.5,", 0) == 0);

    CHECK(experiments::format_number(0.1) == "0.1");
    CHECK(experiments::format_number(-2.5e-300) == "-2.5e-300");
    CHECK(experiments::format_number(std::numeric_limits<double>::infinity()) == "inf");
    CHECK_THROWS_AS(experiments::write_csv("/nonexistent-dir/x.csv", {}), DomainError);
}

TEST_CASE("empty grid gives header only") {
    auto cfg = small_config(0);
    const auto rows = experiments::sweep(cfg, bath::SpectralKind::Drude);
    CHECK(rows.empty());
    CHECK(csv_of(rows).size() > 20);
}

TEST_CASE("failures are collected per point") {
    auto cfg = small_config(3);
    cfg.lamb.quadrature.max_depth = 1;
    cfg.lamb.route = lambshift::Route::Quadrature;
    try {
        experiments::sweep(cfg, bath::SpectralKind::Gaussian);
        FAIL("expected a sweep error");
    } catch (const experiments::SweepError& e) {
        CHECK(e.failures().size() == 3);
        CHECK(e.code().rfind("convergence.", 0) == 0);
        CHECK(e.failures()[1].index == 1);
    }
}

TEST_CASE("crossing search") {
    SweepConfig cfg;
    cfg.grid = Grid{0.5, 40.0, 40, GridScale::Log};
    const auto c = experiments::find_crossing(cfg, bath::SpectralKind::Drude);
    REQUIRE(c.has_value());
    const auto before = experiments::evaluate_point(cfg, bath::SpectralKind::Drude, c->delta_t - 1e-3);
    const auto after = experiments::evaluate_point(cfg, bath::SpectralKind::Drude, c->delta_t + 1e-3);
    CHECK(std::abs(before.jdelta) < c->bound);
    CHECK(std::abs(after.jdelta) > c->bound);
    CHECK(std::abs(before.j0) < c->bound);

    // a larger coupling asymmetry moves the crossing
    SweepConfig green = cfg;
    green.system = {2.5, 2.5, 0.5};
    const auto cg = experiments::find_crossing(green, bath::SpectralKind::Drude);
    REQUIRE(cg.has_value());
    CHECK(cg->delta_t != doctest::Approx(c->delta_t));

    SweepConfig off = cfg;
    off.gamma2 = 0.0;
    off.grid = Grid{0.5, 40.0, 8, GridScale::Log};
    CHECK_FALSE(experiments::find_crossing(off, bath::SpectralKind::Drude).has_value());

    CHECK_THROWS_AS(experiments::find_crossing(cfg, bath::SpectralKind::Drude,
                                               std::numeric_limits<double>::infinity()),
                    DomainError);
    CHECK_THROWS_AS(experiments::find_crossing(cfg, bath::SpectralKind::Drude, 0.0), DomainError);
}

TEST_CASE("compare_spectra uses quadrature for every variant") {
    auto cfg = small_config(3);
    const auto all = experiments::compare_spectra(cfg);
    REQUIRE(all.size() == 3);
    const auto analytic = experiments::sweep(cfg, bath::SpectralKind::Drude);
    const auto& quad = all.at(bath::SpectralKind::Drude);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(oracle::rel_err(quad[i].delta1, analytic[i].delta1, 0.02) < 1e-7);
        CHECK(std::isfinite(quad[i].r21)); // R is still reported for Drude
    }
}

TEST_CASE("configuration parsing") {
    const auto run = config::parse_string(
        "# comment\nepsilon1 = 2.75\nepsilon2=2.25\nvariants = drude, hard\ngrid_count = 7\n"
        "grid_scale = linear\ngrid_min = 0\ngrid_max = 2\ndt = 12.5\nroute = quadrature\n");
    CHECK(run.sweep.system.epsilon1 == 2.75);
    CHECK(run.sweep.variants.size() == 2);
    CHECK(run.sweep.grid.count == 7);
    CHECK(run.sweep.grid.scale == GridScale::Linear);
    CHECK(run.delta_t == 12.5);
    CHECK(run.sweep.lamb.route == lambshift::Route::Quadrature);

    auto code_of = [](const std::string& text) {
        try {
            config::parse_string(text);
        } catch (const DomainError& e) {
            return e.code();
        }
        return std::string{"none"};
    };
    CHECK(code_of("bogus = 1\n") == "config.unknown_key");
    CHECK(code_of("g = 1\ng = 2\n") == "config.duplicate_key");
    CHECK(code_of("g = abc\n") == "config.value");
    CHECK(code_of("just words\n") == "config.syntax");
    CHECK_THROWS_AS(config::load("/no/such/file.cfg"), DomainError);

    SweepConfig wide;
    wide.gamma1 = 1.0;
    CHECK_FALSE(config::regime_warnings(wide).empty());
    CHECK(config::regime_warnings(SweepConfig{}).empty());
}
