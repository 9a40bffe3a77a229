#pragma once

#include <stdexcept>

namespace mcpa {

// Bad model parameters, bad instance values, or a malformed config file.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A mapping violates the assignment constraints, or an instance admits no
// feasible mapping at all.
class InfeasibleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A PA load exceeds P_max.
class OverloadError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Exhaustive enumeration refused: raw search space over the guard limit.
class ResourceLimitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace mcpa
