#include "lambflux/experiments.hpp"

#include "lambflux/dynamics.hpp"
#include "lambflux/errors.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <thread>

namespace lambflux::experiments {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

bool is_drude(bath::SpectralKind kind) { return kind == bath::SpectralKind::Drude; }

double relative_gap(double a, double b, double floor) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
    unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

} // namespace

GridScale parse_scale(const std::string& name) {
    if (name == "linear") return GridScale::Linear;
    if (name == "log") return GridScale::Log;
    throw DomainError("domain.grid_scale", "grid scale must be 'linear' or 'log', got '" + name + "'");
}

std::string_view name_of(GridScale scale) noexcept {
    return scale == GridScale::Linear ? "linear" : "log";
}

void validate(const Grid& grid) {
    if (!std::isfinite(grid.min) || !std::isfinite(grid.max) || grid.min < 0.0) {
        throw DomainError("domain.grid_range", "grid bounds must be finite and >= 0");
    }
    if (grid.scale == GridScale::Log && grid.count > 0 && !(grid.min > 0.0)) {
        throw DomainError("domain.grid_range", "a log grid needs grid_min > 0");
    }
    if (grid.count > 1 && !(grid.max > grid.min)) {
        throw DomainError("domain.grid_order", "grid_max must exceed grid_min");
    }
}

std::vector<double> Grid::points() const {
    validate(*this);
    std::vector<double> out;
    out.reserve(count);
    if (count == 0) return out;
    if (count == 1) {
        out.push_back(min);
        return out;
    }
    const double last = static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) {
        const double s = static_cast<double>(i) / last;
        if (scale == GridScale::Linear) {
            out.push_back(min + (max - min) * s);
        } else {
            out.push_back(std::exp(std::log(min) + (std::log(max) - std::log(min)) * s));
        }
    }
    out.front() = min;
    out.back() = max;
    return out;
}

bath::Bath SweepConfig::bath1(bath::SpectralKind kind) const {
    return {t1, bath::make_spectral(kind, gamma1, omega_d)};
}

bath::Bath SweepConfig::bath2(bath::SpectralKind kind, double delta_t) const {
    return {t1 + delta_t, bath::make_spectral(kind, gamma2, omega_d)};
}

void validate(const SweepConfig& cfg) {
    model::validate(cfg.system);
    validate(cfg.grid);
    if (cfg.variants.empty()) {
        throw DomainError("domain.variants_empty", "at least one spectral variant is needed");
    }
    for (auto kind : cfg.variants) {
        bath::validate(cfg.bath1(kind));
        bath::validate(cfg.bath2(kind, 0.0));
    }
    quadrature::validate(cfg.lamb.quadrature);
    if (!(cfg.spot_check_tol > 0.0)) {
        throw DomainError("domain.spot_check_tol", "spot_check_tol must be > 0");
    }
}

SweepRow evaluate_point(const SweepConfig& cfg, bath::SpectralKind kind, double delta_t,
                        bool spot_check) {
    if (!std::isfinite(delta_t) || delta_t < 0.0) {
        throw DomainError("domain.delta_t", "dT must be finite and >= 0");
    }
    const auto es = model::diagonalize(cfg.system);
    const bath::Bath b1 = cfg.bath1(kind);
    const bath::Bath b2 = cfg.bath2(kind, delta_t);

    SweepRow row;
    row.delta_t = delta_t;
    row.omega1 = es.omega1;
    row.omega2 = es.omega2;
    row.variant = kind;
    row.r21 = row.r22 = row.r21_est = row.r22_est = nan;

    lambshift::Increments inc{};
    if (cfg.include_lamb) {
        const auto lamb = lambshift::compute(es, b1, b2, cfg.lamb);
        inc = lamb.increments;
        const auto& c21 = lamb.channels.at(2, 1);
        const auto& c22 = lamb.channels.at(2, 2);
        if (c21.matsubara_r) {
            row.r21 = *c21.matsubara_r;
            row.r22 = *c22.matsubara_r;
            row.r21_est = *c21.r_estimate;
            row.r22_est = *c22.r_estimate;
        }
        if (spot_check && is_drude(kind) && c21.route == lambshift::Route::Analytic) {
            auto opts = cfg.lamb;
            opts.route = lambshift::Route::Quadrature;
            const auto check = lambshift::compute(es, b1, b2, opts).increments;
            const double floor = cfg.gamma1 + cfg.gamma2;
            const double gap = std::max(relative_gap(inc.delta1, check.delta1, floor),
                                        relative_gap(inc.delta2, check.delta2, floor));
            if (gap > cfg.spot_check_tol) {
                throw ConvergenceError("convergence.spot_check",
                                       "analytic and quadrature increments differ by " +
                                           format_number(gap) + " (relative)");
            }
        }
    }
    row.delta1 = inc.delta1;
    row.delta2 = inc.delta2;

    const auto report = dynamics::heat_current_closed(es, b1, b2, inc);
    row.j0 = report.j_no_lamb;
    row.jdelta = report.j_lamb;
    row.dj = report.difference;
    row.supremum = report.supremum;
    row.margin1 = es.omega1 + inc.delta1;
    row.margin2 = es.omega2 + inc.delta2;
    return row;
}

SweepError::SweepError(std::vector<PointFailure> failures)
    : std::runtime_error([&] {
          const auto& f = failures.at(0);
          return std::to_string(failures.size()) + " grid point(s) failed; first at index " +
                 std::to_string(f.index) + " (dT = " + format_number(f.delta_t) +
                 "): " + f.message;
      }()),
      failures_(std::move(failures)) {}

std::vector<SweepRow> sweep(const SweepConfig& cfg, bath::SpectralKind kind) {
    validate(cfg);
    const auto grid = cfg.grid.points();
    std::vector<SweepRow> rows(grid.size());
    std::vector<std::optional<PointFailure>> failed(grid.size());

    parallel_for(grid.size(), cfg.threads, [&](std::size_t i) {
        const double dt = grid[i] * cfg.omega_d;
        const bool spot = cfg.spot_check_interval > 0 && i % cfg.spot_check_interval == 0;
        try {
            rows[i] = evaluate_point(cfg, kind, dt, spot);
        } catch (const DomainError& e) {
            failed[i] = PointFailure{i, dt, e.code(), e.what()};
        } catch (const ConvergenceError& e) {
            failed[i] = PointFailure{i, dt, e.code(), e.what()};
        } catch (const std::exception& e) {
            failed[i] = PointFailure{i, dt, "internal", e.what()};
        }
    });

    std::vector<PointFailure> failures;
    for (auto& f : failed) {
        if (f) failures.push_back(std::move(*f));
    }
    if (!failures.empty()) throw SweepError(std::move(failures));
    return rows;
}

std::vector<SweepRow> sweep(const SweepConfig& cfg) {
    validate(cfg);
    std::vector<SweepRow> rows;
    for (auto kind : cfg.variants) {
        auto block = sweep(cfg, kind);
        rows.insert(rows.end(), block.begin(), block.end());
    }
    return rows;
}

std::map<bath::SpectralKind, std::vector<SweepRow>> compare_spectra(const SweepConfig& cfg) {
    SweepConfig c = cfg;
    c.lamb.route = lambshift::Route::Quadrature;
    c.spot_check_interval = 0;
    std::map<bath::SpectralKind, std::vector<SweepRow>> out;
    for (auto kind : {bath::SpectralKind::Drude, bath::SpectralKind::Hard,
                      bath::SpectralKind::Gaussian}) {
        out[kind] = sweep(c, kind);
    }
    return out;
}

std::optional<Crossing> find_crossing(const SweepConfig& cfg, bath::SpectralKind kind) {
    validate(cfg);
    const auto es = model::diagonalize(cfg.system);
    return find_crossing(cfg, kind, dynamics::supremum_no_lamb(es, cfg.bath1(kind).spectral));
}

std::optional<Crossing> find_crossing(const SweepConfig& cfg, bath::SpectralKind kind,
                                      double bound) {
    if (!std::isfinite(bound) || !(bound > 0.0)) {
        throw DomainError("domain.bound", "crossing bound must be finite and > 0");
    }
    SweepConfig c = cfg;
    c.include_lamb = true;
    c.spot_check_interval = 0;
    validate(c);

    auto excess = [&](double dt) {
        return std::abs(evaluate_point(c, kind, dt).jdelta) - bound;
    };
    const auto rows = sweep(c, kind);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (std::abs(rows[i].jdelta) - bound < 0.0) continue;
        if (i == 0) return Crossing{rows[0].delta_t, bound};
        double lo = rows[i - 1].delta_t;
        double hi = rows[i].delta_t;
        const double tol = 1e-6 * c.omega_d;
        while (hi - lo > tol) {
            const double mid = 0.5 * (lo + hi);
            (excess(mid) < 0.0 ? lo : hi) = mid;
        }
        return Crossing{hi, bound};
    }
    return std::nullopt;
}

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

void write_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << kCsvSchema << '\n';
    out << "dT,omega1,omega2,delta1,delta2,R21,R22,R21_est,R22_est,J0,Jdelta,dJ,supremum,"
           "margin1,margin2,variant\n";
    for (const auto& r : rows) {
        for (double v : {r.delta_t, r.omega1, r.omega2, r.delta1, r.delta2, r.r21, r.r22,
                         r.r21_est, r.r22_est, r.j0, r.jdelta, r.dj, r.supremum, r.margin1,
                         r.margin2}) {
            out << format_number(v) << ',';
        }
        out << bath::name_of(r.variant) << '\n';
    }
}

void write_csv(const std::string& path, const std::vector<SweepRow>& rows) {
    std::ofstream file(path, std::ios::binary);
    if (!file) {
        throw DomainError("io.open_output", "cannot open '" + path + "' for writing");
    }
    write_csv(file, rows);
    if (!file) {
        throw DomainError("io.write_output", "failed while writing '" + path + "'");
    }
}

} // namespace lambflux::experiments
