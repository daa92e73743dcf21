#pragma once

#include <stdexcept>
#include <string>

namespace sapsim {

// Exit codes used by the CLI. Library code throws; tools/main.cpp maps.
enum ExitCode : int {
    exit_ok = 0,
    exit_config = 1,
    exit_numeric = 2,
    exit_boundary = 3,
    exit_io = 4,
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NumericalDomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BoundaryContaminationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace sapsim
