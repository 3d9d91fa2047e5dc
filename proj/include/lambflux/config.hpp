// Flat key = value run configuration.
//
//   # larger splitting asymmetry
//   epsilon1 = 3
//   epsilon2 = 2
//   variants = drude, hard
//
// Blank lines and everything after '#' are ignored. Unknown keys and
// repeated keys are errors.

#pragma once

#include "lambflux/experiments.hpp"

#include <filesystem>
#include <istream>
#include <string>
#include <vector>

namespace lambflux::config {

struct RunConfig {
    experiments::SweepConfig sweep{};
    double delta_t{0.0}; // absolute dT for the single-point subcommands
    std::string source;  // file the values came from, empty for defaults
};

// Every recognised key, in documentation order.
const std::vector<std::string>& known_keys();

RunConfig parse(std::istream& in, const std::string& source = "<input>");
RunConfig parse_string(const std::string& text);

// Relative paths that do not exist are retried under $LAMBFLUX_CONFIG_DIR.
std::filesystem::path resolve(const std::string& path);
RunConfig load(const std::string& path);

// Outside the weak-coupling, wide-band regime gamma << w_mu << omega_d. These
// are advisory only.
std::vector<std::string> regime_warnings(const experiments::SweepConfig& cfg);

} // namespace lambflux::config
