#include "lambflux/config.hpp"

#include "lambflux/errors.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace lambflux::config {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

[[noreturn]] void bad_value(const std::string& where, const std::string& key,
                            const std::string& value, const std::string& expected) {
    throw DomainError("config.value", where + ": " + key + " = '" + value + "' is not " + expected);
}

double to_double(const std::string& where, const std::string& key, const std::string& value) {
    double out = 0.0;
    const auto res = std::from_chars(value.data(), value.data() + value.size(), out);
    if (res.ec != std::errc{} || res.ptr != value.data() + value.size()) {
        bad_value(where, key, value, "a number");
    }
    return out;
}

std::size_t to_count(const std::string& where, const std::string& key, const std::string& value) {
    std::size_t out = 0;
    const auto res = std::from_chars(value.data(), value.data() + value.size(), out);
    if (res.ec != std::errc{} || res.ptr != value.data() + value.size()) {
        bad_value(where, key, value, "a non-negative integer");
    }
    return out;
}

bool to_bool(const std::string& where, const std::string& key, const std::string& value) {
    if (value == "true" || value == "yes" || value == "1") return true;
    if (value == "false" || value == "no" || value == "0") return false;
    bad_value(where, key, value, "true or false");
}

std::vector<bath::SpectralKind> to_kinds(const std::string& where, const std::string& key,
                                         const std::string& value) {
    std::vector<bath::SpectralKind> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const std::string name = trim(item);
        try {
            out.push_back(bath::parse_kind(name));
        } catch (const DomainError&) {
            bad_value(where, key, name, "one of drude, hard, gaussian");
        }
    }
    if (out.empty()) bad_value(where, key, value, "a spectral density list");
    return out;
}

using Setter = std::function<void(RunConfig&, const std::string& where, const std::string& key,
                                  const std::string& value)>;

const std::vector<std::pair<std::string, Setter>>& setters() {
    static const std::vector<std::pair<std::string, Setter>> table = [] {
        std::vector<std::pair<std::string, Setter>> t;
        auto number = [&t](const char* key, double experiments::SweepConfig::*field) {
            t.emplace_back(key, [field](RunConfig& c, const auto& w, const auto& k, const auto& v) {
                c.sweep.*field = to_double(w, k, v);
            });
        };
        t.emplace_back("epsilon1", [](RunConfig& c, const auto& w, const auto& k, const auto& v) {
            c.sweep.system.epsilon1 = to_double(w, k, v);
        });
        t.emplace_back("epsilon2", [](RunConfig& c, const auto& w, const auto& k, const auto& v) {
            c.sweep.system.epsilon2 = to_double(w, k, v);
        });
        t.emplace_back("g", [](RunConfig& c, const auto& w, const auto& k, const auto& v) {
            c.sweep.system.g = to_double(w, k, v);
        });
        number("t1", &experiments::SweepConfig::t1);
        number("gamma1", &experiments::SweepConfig::gamma1);
        number("gamma2", &experiments::SweepConfig::gamma2);
        number("omega_d", &experiments::SweepConfig::omega_d);
        t.emplace_back("spectral", [](RunConfig& c, const auto& w, const auto& k, const auto& v) {
            const auto kinds = to_kinds(w, k, v);
            if (kinds.size() != 1) bad_value(w, k, v, "a single spectral density");
            c.sweep.variants = kinds;
        });
        t.emplace_back("variants", [](RunConfig& c, const auto& w, const auto& k, const auto& v) {
            c.sweep.variants = to_kinds(w, k, v);
        });
        t.emplace_back("dt", [](RunConfig& c, const auto& w, const auto& k, const auto& v) {
            c.delta_t = to_double(w, k, v);
        });
        t.emplace_back("grid_min", [](RunConfig& c, const auto& w, const auto& k, const auto& v) {
            c.sweep.grid.min = to_double(w, k, v);
        });
        t.emplace_back("grid_max", [](RunConfig& c, const auto& w, const auto& k, const auto& v) {
            c.sweep.grid.max = to_double(w, k, v);
        });
        t.emplace_back("grid_count", [](RunConfig& c, const auto& w, const auto& k, const auto& v) {
            c.sweep.grid.count = to_count(w, k, v);
        });
        t.emplace_back("grid_scale", [](RunConfig& c, const auto& w, const auto& k, const auto& v) {
            try {
                c.sweep.grid.scale = experiments::parse_scale(v);
            } catch (const DomainError&) {
                bad_value(w, k, v, "linear or log");
            }
        });
        t.emplace_back("include_lamb", [](RunConfig& c, const auto& w, const auto& k, const auto& v) {
            c.sweep.include_lamb = to_bool(w, k, v);
        });
        t.emplace_back("route", [](RunConfig& c, const auto& w, const auto& k, const auto& v) {
            if (v == "auto") {
                c.sweep.lamb.route.reset();
            } else if (v == "analytic") {
                c.sweep.lamb.route = lambshift::Route::Analytic;
            } else if (v == "quadrature") {
                c.sweep.lamb.route = lambshift::Route::Quadrature;
            } else {
                bad_value(w, k, v, "auto, analytic or quadrature");
            }
        });
        t.emplace_back("output", [](RunConfig& c, const auto&, const auto&, const auto& v) {
            c.sweep.output = v;
        });
        t.emplace_back("abs_tol", [](RunConfig& c, const auto& w, const auto& k, const auto& v) {
            c.sweep.lamb.quadrature.abs_tol = to_double(w, k, v);
        });
        t.emplace_back("rel_tol", [](RunConfig& c, const auto& w, const auto& k, const auto& v) {
            c.sweep.lamb.quadrature.rel_tol = to_double(w, k, v);
        });
        t.emplace_back("pole_window", [](RunConfig& c, const auto& w, const auto& k, const auto& v) {
            c.sweep.lamb.quadrature.pole_window = to_double(w, k, v);
        });
        t.emplace_back("cutoff_factor", [](RunConfig& c, const auto& w, const auto& k, const auto& v) {
            c.sweep.lamb.quadrature.cutoff_factor = to_double(w, k, v);
        });
        t.emplace_back("max_depth", [](RunConfig& c, const auto& w, const auto& k, const auto& v) {
            c.sweep.lamb.quadrature.max_depth = static_cast<unsigned>(to_count(w, k, v));
        });
        t.emplace_back("series_tol", [](RunConfig& c, const auto& w, const auto& k, const auto& v) {
            c.sweep.lamb.series_tol = to_double(w, k, v);
        });
        t.emplace_back("threads", [](RunConfig& c, const auto& w, const auto& k, const auto& v) {
            c.sweep.threads = static_cast<unsigned>(to_count(w, k, v));
        });
        t.emplace_back("spot_check_interval",
                       [](RunConfig& c, const auto& w, const auto& k, const auto& v) {
                           c.sweep.spot_check_interval = to_count(w, k, v);
                       });
        return t;
    }();
    return table;
}

} // namespace

const std::vector<std::string>& known_keys() {
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> k;
        for (const auto& [name, _] : setters()) k.push_back(name);
        return k;
    }();
    return keys;
}

RunConfig parse(std::istream& in, const std::string& source) {
    std::map<std::string, const Setter*> lookup;
    for (const auto& [name, fn] : setters()) lookup[name] = &fn;

    RunConfig cfg;
    cfg.source = source;
    std::set<std::string> seen;
    std::string line;
    for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
        const auto hash = line.find('#');
        const std::string body = trim(hash == std::string::npos ? line : line.substr(0, hash));
        if (body.empty()) continue;

        const std::string where = source + ":" + std::to_string(lineno);
        const auto eq = body.find('=');
        if (eq == std::string::npos) {
            throw DomainError("config.syntax", where + ": expected 'key = value', got '" + body + "'");
        }
        const std::string key = trim(body.substr(0, eq));
        const std::string value = trim(body.substr(eq + 1));
        const auto it = lookup.find(key);
        if (it == lookup.end()) {
            throw DomainError("config.unknown_key", where + ": unknown key '" + key + "'");
        }
        if (!seen.insert(key).second) {
            throw DomainError("config.duplicate_key", where + ": key '" + key + "' set twice");
        }
        (*it->second)(cfg, where, key, value);
    }
    return cfg;
}

RunConfig parse_string(const std::string& text) {
    std::istringstream in(text);
    return parse(in, "<string>");
}

std::filesystem::path resolve(const std::string& path) {
    std::filesystem::path p(path);
    if (std::filesystem::exists(p) || p.is_absolute()) return p;
    if (const char* dir = std::getenv("LAMBFLUX_CONFIG_DIR"); dir != nullptr && *dir != '\0') {
        const auto candidate = std::filesystem::path(dir) / p;
        if (std::filesystem::exists(candidate)) return candidate;
    }
    return p;
}

RunConfig load(const std::string& path) {
    const auto resolved = resolve(path);
    std::ifstream in(resolved);
    if (!in) {
        throw DomainError("config.not_found", "cannot open config file '" + path + "'");
    }
    return parse(in, resolved.string());
}

std::vector<std::string> regime_warnings(const experiments::SweepConfig& cfg) {
    std::vector<std::string> out;
    const auto es = model::diagonalize(cfg.system);
    for (int mu = 1; mu <= 2; ++mu) {
        const double w = es.omega(mu);
        const std::string name = "omega" + std::to_string(mu) + " = " + experiments::format_number(w);
        for (auto [label, gamma] : {std::pair{"gamma1", cfg.gamma1}, std::pair{"gamma2", cfg.gamma2}}) {
            if (gamma >= w / 10.0) {
                out.push_back(std::string(label) + " = " + experiments::format_number(gamma) +
                              " is not << " + name + "; the weak-coupling master equation may not apply");
            }
        }
        if (w >= cfg.omega_d / 10.0) {
            out.push_back(name + " is not << omega_d = " + experiments::format_number(cfg.omega_d) +
                          "; the wide-band assumption may not apply");
        }
    }
    return out;
}

} // namespace lambflux::config
