// Oracle cross-checks behind `lambflux validate`.

#pragma once

#include "lambflux/config.hpp"

#include <string>
#include <vector>

namespace lambflux::validation {

struct CheckResult {
    std::string name;
    bool passed{};
    double measured{};  // worst error seen
    double tolerance{};
};

// Runs every check at the configuration's parameters, using its first
// spectral variant and dT (omega_d when dT = 0, so that currents are nonzero).
std::vector<CheckResult> run_checks(const config::RunConfig& cfg);

} // namespace lambflux::validation
