// Exception types shared by every lambflux module

#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace lambflux {

// Physical input outside a module's domain. code() is a stable dotted
// identifier such as "domain.epsilon_order", printed verbatim by the CLI.
class DomainError : public std::domain_error {
public:
    DomainError(std::string code, const std::string& what)
        : std::domain_error(what), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

// A numerical procedure (quadrature, series, linear solve) could not reach
// its requested accuracy.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(std::string code, const std::string& what)
        : std::runtime_error(what), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

} // namespace lambflux
