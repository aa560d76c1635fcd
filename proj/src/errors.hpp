#pragma once

#include <stdexcept>
#include <string>

namespace hqg {

// Bad user input: malformed config text, unknown keys, out-of-range values.
// Maps to process exit code 2.
struct config_error : std::runtime_error {
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure at runtime: non-convergent integrator, degenerate state
// normalization, undefined phase. Maps to process exit code 3.
struct numeric_error : std::runtime_error {
    explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace hqg
