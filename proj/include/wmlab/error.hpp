#pragma once

#include <stdexcept>
#include <string>

namespace wmlab {

/// Error categories. The CLI maps them onto exit codes.
enum class ErrorKind {
    contract,        ///< precondition or side-tag violation
    infeasible,      ///< exponent hypotheses do not hold
    non_integrable,  ///< power weight not locally integrable
    resolution,      ///< grid too coarse for the requested object
    numerical,       ///< a numerical self-check failed
    config,          ///< malformed configuration
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
    throw Error(kind, what);
}

inline void require(bool ok, ErrorKind kind, const std::string& what) {
    if (!ok) fail(kind, what);
}

}  // namespace wmlab
