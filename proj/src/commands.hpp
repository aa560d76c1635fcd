#pragma once

// CSV-producing entry points shared by the CLI and the shared-library API.

#include "config.hpp"

#include <string>

namespace hqg {

struct RunOptions {
    int jobs = 0;             // worker threads for sweeps; 0 = hardware count
    bool oracle_check = false; // add Fock-oracle columns to the truth table
};

// command is one of: truth-table, sweep, modes, validate-linearization.
// Returns the CSV text (header comments, column row, data rows). Throws
// config_error for bad configuration and numeric_error for failed numerics.
std::string run_command(const std::string& command, const Config& cfg,
                        const RunOptions& opt);

} // namespace hqg
