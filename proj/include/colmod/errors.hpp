// Exception types that map onto CLI exit codes.

#pragma once

#include <stdexcept>

namespace colmod {

// Invalid or inconsistent configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A numerical validation check failed during a run (CLI exit code 3).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace colmod
