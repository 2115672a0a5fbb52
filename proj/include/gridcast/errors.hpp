#pragma once

#include <stdexcept>
#include <string>

namespace gridcast {

/// Bad user-supplied data or configuration: malformed files, unknown ids,
/// out-of-range settings.  Maps to process exit code 2.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A numerical procedure failed on valid input: an infeasible dispatch
/// problem, an optimizer that cannot produce a usable fit.  Maps to
/// process exit code 3.
class ModelError : public std::runtime_error {
public:
    explicit ModelError(const std::string& msg) : std::runtime_error(msg) {}
};

/// An internal invariant was violated.  Always a bug, never a data
/// problem.  Maps to process exit code 4.
class InternalError : public std::logic_error {
public:
    explicit InternalError(const std::string& msg) : std::logic_error(msg) {}
};

}  // namespace gridcast
