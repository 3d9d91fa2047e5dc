// Command-line front end. run() never calls exit(), so tests can drive it.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lambflux::cli {

enum ExitCode : int {
    kOk = 0,
    kValidationFailed = 1,
    kUsage = 2,       // bad flags, bad config, physical-domain violation
    kNumerical = 3,   // a quadrature, series or kernel solve did not converge
};

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

} // namespace lambflux::cli
