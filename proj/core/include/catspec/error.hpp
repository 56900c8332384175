#pragma once

#include <stdexcept>
#include <string>

namespace catspec {

/// Raised when an argument violates an operation's precondition.
class InvalidParameter : public std::invalid_argument {
public:
    explicit InvalidParameter(const std::string& what) : std::invalid_argument(what) {}
};

/// Raised when a signal/noise computation has zero combined noise.
class DegenerateNoise : public std::domain_error {
public:
    explicit DegenerateNoise(const std::string& what) : std::domain_error(what) {}
};

/// Raised by the timeline scheduler when steps would overlap.
class SchedulingError : public std::runtime_error {
public:
    explicit SchedulingError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace catspec
