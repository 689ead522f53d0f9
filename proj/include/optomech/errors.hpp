#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace optomech {

// Validation failure attributable to a named field ("kappa", "modes[1].gamma").
class FieldError : public std::invalid_argument {
public:
    FieldError(std::string field, const std::string& what)
        : std::invalid_argument(field + ": " + what), field_(std::move(field)), detail_(what) {}

    const std::string& field() const noexcept { return field_; }
    const std::string& detail() const noexcept { return detail_; }

    // Re-raise with a path prefix, e.g. "params." + "kappa".
    FieldError prefixed(const std::string& prefix) const { return FieldError(prefix + field_, detail_); }

private:
    std::string field_;
    std::string detail_;
};

// A numerical procedure (fit, quadrature) failed to reach its tolerance.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(std::string procedure, const std::string& what)
        : std::runtime_error(procedure + ": " + what), procedure_(std::move(procedure)) {}

    const std::string& procedure() const noexcept { return procedure_; }

private:
    std::string procedure_;
};

// Non-fatal warnings collected by operations whose assumptions are stretched.
struct Diagnostics {
    std::vector<std::string> warnings;

    void warn(std::string message) { warnings.push_back(std::move(message)); }
    bool empty() const noexcept { return warnings.empty(); }
};

inline void warn(Diagnostics* diag, std::string message)
{
    if (diag != nullptr)
        diag->warn(std::move(message));
}

} // namespace optomech
