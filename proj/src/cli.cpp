#include "lambflux/cli.hpp"

#include "lambflux/config.hpp"
#include "lambflux/dynamics.hpp"
#include "lambflux/errors.hpp"
#include "lambflux/experiments.hpp"
#include "lambflux/validation.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <ctime>
#include <iostream>
#include <optional>
#include <ostream>

namespace lambflux::cli {

namespace {

using experiments::format_number;

struct Options {
    std::string config_path;
    std::optional<double> dt;
    std::string output;
    bool no_timestamp{false};
};

class Printer {
public:
    explicit Printer(std::ostream& out) : out_(out) {}

    void kv(const std::string& key, double value) { out_ << key << " = " << format_number(value) << '\n'; }
    void kv(const std::string& key, const std::string& value) { out_ << key << " = " << value << '\n'; }
    void section(const std::string& name) { out_ << "[" << name << "]\n"; }

private:
    std::ostream& out_;
};

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

config::RunConfig load_run(const Options& opt) {
    config::RunConfig run = opt.config_path.empty() ? config::RunConfig{} : config::load(opt.config_path);
    if (opt.dt) run.delta_t = *opt.dt;
    if (!opt.output.empty()) run.sweep.output = opt.output;
    if (!std::isfinite(run.delta_t) || run.delta_t < 0.0) {
        throw DomainError("domain.delta_t", "dT must be finite and >= 0");
    }
    experiments::validate(run.sweep);
    return run;
}

struct Point {
    model::EigenSystem es;
    bath::Bath b1;
    bath::Bath b2;
};

Point point_of(const config::RunConfig& run) {
    const auto kind = run.sweep.variants.front();
    return {model::diagonalize(run.sweep.system), run.sweep.bath1(kind),
            run.sweep.bath2(kind, run.delta_t)};
}

void print_point_header(Printer& p, const config::RunConfig& run) {
    p.kv("spectral", std::string(bath::name_of(run.sweep.variants.front())));
    p.kv("T1", run.sweep.t1);
    p.kv("T2", run.sweep.t1 + run.delta_t);
    p.kv("dT", run.delta_t);
}

int cmd_spectrum(const config::RunConfig& run, Printer& p) {
    const auto es = model::diagonalize(run.sweep.system);
    const auto w = es.weights();
    p.kv("alpha", es.alpha);
    p.kv("beta", es.beta);
    p.kv("phi", es.phi);
    p.kv("theta", es.theta);
    p.kv("phi_plus", es.phi_plus);
    p.kv("phi_minus", es.phi_minus);
    p.kv("omega1", es.omega1);
    p.kv("omega2", es.omega2);
    for (int n = 0; n < 4; ++n) p.kv("s" + std::to_string(n + 1), es.eigenvalues[static_cast<std::size_t>(n)]);
    p.kv("sin2_phi_plus", w.sin2_plus);
    p.kv("cos2_phi_plus", w.cos2_plus);
    p.kv("sin2_phi_minus", w.sin2_minus);
    p.kv("cos2_phi_minus", w.cos2_minus);
    return kOk;
}

int cmd_rates(const config::RunConfig& run, Printer& p) {
    const auto pt = point_of(run);
    print_point_header(p, run);
    const auto rates = bath::transition_rates(pt.es, pt.b1, pt.b2);
    for (int j = 1; j <= 2; ++j) {
        for (int mu = 1; mu <= 2; ++mu) {
            const std::string tag = std::to_string(j) + std::to_string(mu);
            p.kv("Gamma" + tag + "_emission", rates.at(j, mu, bath::Sign::Emission));
            p.kv("Gamma" + tag + "_absorption", rates.at(j, mu, bath::Sign::Absorption));
        }
    }
    return kOk;
}

void print_channels(Printer& p, const lambshift::LambShiftData& data) {
    for (int j = 1; j <= 2; ++j) {
        for (int mu = 1; mu <= 2; ++mu) {
            const auto& c = data.channels.at(j, mu);
            const std::string tag = std::to_string(j) + std::to_string(mu);
            p.kv("Delta" + tag, c.delta);
            p.kv("Delta_plus" + tag, c.delta_plus);
            p.kv("Delta_minus" + tag, c.delta_minus);
            p.kv("Delta_prime" + tag, c.delta_prime);
            if (c.matsubara_r) {
                p.kv("R" + tag, *c.matsubara_r);
                p.kv("R" + tag + "_est", *c.r_estimate);
            }
        }
    }
}

int cmd_lambshift(const config::RunConfig& run, Printer& p) {
    const auto pt = point_of(run);
    print_point_header(p, run);

    std::vector<lambshift::Route> routes;
    if (run.sweep.lamb.route) {
        routes.push_back(*run.sweep.lamb.route);
    } else {
        if (bath::kind_of(pt.b1.spectral) == bath::SpectralKind::Drude) {
            routes.push_back(lambshift::Route::Analytic);
        }
        routes.push_back(lambshift::Route::Quadrature);
    }
    for (auto route : routes) {
        auto opts = run.sweep.lamb;
        opts.route = route;
        const auto data = lambshift::compute(pt.es, pt.b1, pt.b2, opts);
        p.section(std::string(lambshift::name_of(route)));
        print_channels(p, data);
        for (int n = 0; n < 4; ++n) p.kv("level" + std::to_string(n + 1), data.levels[static_cast<std::size_t>(n)]);
        p.kv("delta1", data.increments.delta1);
        p.kv("delta2", data.increments.delta2);
        const auto m = lambshift::positivity_margin(pt.es, data.increments);
        p.kv("margin1", m.first);
        p.kv("margin2", m.second);
    }
    return kOk;
}

int cmd_steady(const config::RunConfig& run, Printer& p) {
    const auto pt = point_of(run);
    print_point_header(p, run);
    const auto as = dynamics::steady_state_analytic(pt.es, pt.b1, pt.b2);
    p.section("analytic");
    p.kv("X_plus", as.x_plus);
    p.kv("X_minus", as.x_minus);
    p.kv("Y_plus", as.y_plus);
    p.kv("Y_minus", as.y_minus);
    for (int n = 0; n < 4; ++n) p.kv("rho" + std::to_string(n + 1) + std::to_string(n + 1), as.populations[static_cast<std::size_t>(n)]);

    const auto lamb = lambshift::compute(pt.es, pt.b1, pt.b2, run.sweep.lamb);
    const auto L = dynamics::build_liouvillian(pt.es, pt.b1, pt.b2, run.sweep.include_lamb, &lamb);
    const auto ns = dynamics::steady_state_numeric(L);
    p.section("numeric");
    for (int n = 0; n < 4; ++n) p.kv("rho" + std::to_string(n + 1) + std::to_string(n + 1), ns.populations[static_cast<std::size_t>(n)]);
    p.kv("max_off_diagonal", ns.max_off_diagonal);
    p.kv("residual", ns.residual);
    return kOk;
}

int cmd_current(const config::RunConfig& run, Printer& p) {
    const auto pt = point_of(run);
    print_point_header(p, run);
    lambshift::Increments inc{};
    if (run.sweep.include_lamb) inc = lambshift::compute(pt.es, pt.b1, pt.b2, run.sweep.lamb).increments;
    const auto r = dynamics::heat_current_closed(pt.es, pt.b1, pt.b2, inc);
    const auto m = lambshift::positivity_margin(pt.es, inc);
    p.kv("J0", r.j_no_lamb);
    p.kv("Jdelta", r.j_lamb);
    p.kv("dJ", r.difference);
    p.kv("J0_abs", r.j_no_lamb_magnitude);
    p.kv("Jdelta_abs", r.j_lamb_magnitude);
    p.kv("A1", r.a1);
    p.kv("A2", r.a2);
    p.kv("supremum", r.supremum);
    if (r.slope) p.kv("asymptotic_slope", *r.slope);
    p.kv("delta1", inc.delta1);
    p.kv("delta2", inc.delta2);
    p.kv("margin1", m.first);
    p.kv("margin2", m.second);
    return kOk;
}

int emit_rows(const config::RunConfig& run, const std::vector<experiments::SweepRow>& rows,
              std::ostream& out, Printer& p) {
    if (run.sweep.output.empty() || run.sweep.output == "-") {
        experiments::write_csv(out, rows);
        return kOk;
    }
    experiments::write_csv(run.sweep.output, rows);
    p.kv("rows", std::to_string(rows.size()));
    p.kv("output", run.sweep.output);
    return kOk;
}

int cmd_sweep(const config::RunConfig& run, std::ostream& out, Printer& p) {
    return emit_rows(run, experiments::sweep(run.sweep), out, p);
}

int cmd_compare(const config::RunConfig& run, std::ostream& out, Printer& p) {
    const auto by_kind = experiments::compare_spectra(run.sweep);
    std::vector<experiments::SweepRow> rows;
    for (const auto& [kind, block] : by_kind) rows.insert(rows.end(), block.begin(), block.end());
    return emit_rows(run, rows, out, p);
}

int cmd_crossing(const config::RunConfig& run, Printer& p) {
    for (auto kind : run.sweep.variants) {
        const std::string name(bath::name_of(kind));
        const auto c = experiments::find_crossing(run.sweep, kind);
        if (c) {
            p.kv(name + ".dT_star", c->delta_t);
            p.kv(name + ".dT_star_over_omega_d", c->delta_t / run.sweep.omega_d);
            p.kv(name + ".supremum", c->bound);
        } else {
            p.kv(name + ".dT_star", "none");
        }
    }
    return kOk;
}

int cmd_validate(const config::RunConfig& run, std::ostream& out) {
    const auto results = validation::run_checks(run);
    std::size_t width = 0;
    for (const auto& r : results) width = std::max(width, r.name.size());
    bool all = true;
    for (const auto& r : results) {
        all = all && r.passed;
        out << r.name << ' ' << (r.passed ? "PASS" : "FAIL")
            << std::string(width - r.name.size() + 2, ' ') << "measured=" << format_number(r.measured)
            << " tol=" << format_number(r.tolerance) << '\n';
    }
    out << "summary = " << (all ? "PASS" : "FAIL") << '\n';
    return all ? kOk : kValidationFailed;
}

void report(std::ostream& err, const std::string& code, const std::string& what) {
    err << "error: " << code << ": " << what << '\n';
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Steady-state heat transport between two coupled qubits with and without the Lamb shift",
                 "lambflux"};
    app.fallthrough();
    app.require_subcommand(1);

    Options opt;
    app.add_option("-c,--config", opt.config_path, "key = value configuration file");
    app.add_option("--dt", opt.dt, "temperature difference T2 - T1 for single-point commands");
    app.add_option("-o,--output", opt.output, "CSV destination for sweep and compare-spectra ('-' = stdout)");
    app.add_flag("--no-timestamp", opt.no_timestamp, "omit the timestamp line");

    const std::vector<std::pair<std::string, std::string>> commands{
        {"spectrum", "eigenvalues, mixing angles and transition frequencies"},
        {"rates", "golden-rule transition rates at dT"},
        {"lambshift", "Lamb-shift integrals, level shifts and increments at dT"},
        {"steady", "analytic and numeric steady state at dT"},
        {"current", "heat currents with and without the Lamb shift at dT"},
        {"sweep", "sweep dT over the configured grid and write CSV"},
        {"compare-spectra", "sweep all three spectral densities (quadrature route)"},
        {"crossing", "temperature difference at which J1 with Lamb shift exceeds the supremum"},
        {"validate", "run the oracle cross-checks and print a pass/fail table"},
    };
    for (const auto& [name, help] : commands) app.add_subcommand(name, help);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        report(err, "usage", e.what());
        return kUsage;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        const auto run_cfg = load_run(opt);
        for (const auto& w : config::regime_warnings(run_cfg.sweep)) err << "warning: " << w << '\n';

        const bool csv_to_stdout = (command == "sweep" || command == "compare-spectra") &&
                                   (run_cfg.sweep.output.empty() || run_cfg.sweep.output == "-");
        if (!opt.no_timestamp && !csv_to_stdout) {
            out << "# lambflux " << command << " " << utc_timestamp() << '\n';
        }

        Printer p(out);
        if (command == "spectrum") return cmd_spectrum(run_cfg, p);
        if (command == "rates") return cmd_rates(run_cfg, p);
        if (command == "lambshift") return cmd_lambshift(run_cfg, p);
        if (command == "steady") return cmd_steady(run_cfg, p);
        if (command == "current") return cmd_current(run_cfg, p);
        if (command == "sweep") return cmd_sweep(run_cfg, out, p);
        if (command == "compare-spectra") return cmd_compare(run_cfg, out, p);
        if (command == "crossing") return cmd_crossing(run_cfg, p);
        return cmd_validate(run_cfg, out);
    } catch (const DomainError& e) {
        report(err, e.code(), e.what());
        return kUsage;
    } catch (const ConvergenceError& e) {
        report(err, e.code(), e.what());
        return kNumerical;
    } catch (const experiments::SweepError& e) {
        report(err, e.code(), e.what());
        return e.code().rfind("domain.", 0) == 0 || e.code().rfind("config.", 0) == 0 ? kUsage
                                                                                        : kNumerical;
    } catch (const std::exception& e) {
        report(err, "internal", e.what());
        return kNumerical;
    }
}

int run(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args, std::cout, std::cerr);
}

} // namespace lambflux::cli
