#pragma once

#include <stdexcept>
#include <string>

namespace ancient_heat {

// Bad user input: malformed files, out-of-range options, schema violations.
// Maps to CLI exit code 2.
struct input_error : std::runtime_error {
    explicit input_error(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure or unmet tolerance: overflow, cap exceeded, solver
// non-convergence. Maps to CLI exit code 1.
struct compute_error : std::runtime_error {
    explicit compute_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ancient_heat
