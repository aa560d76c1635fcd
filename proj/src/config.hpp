#pragma once

// key = value configuration with a fixed registry of known keys. Frequencies
// are given in cycles (MHz/kHz/Hz as the key name says) and converted to
// angular rates when the simulation parameters are built; durations are in
// microseconds. Unknown keys are rejected with a nearest-match suggestion.

#include "fidelity.hpp"

#include <map>
#include <string>
#include <vector>

namespace hqg {

enum class KeyKind { number, boolean, text };

struct KeySpec {
    const char* name;
    KeyKind kind;
    const char* default_value;
    const char* description;
};

// The full registry, in display order.
const std::vector<KeySpec>& config_registry();

struct Config {
    std::map<std::string, std::string> values; // always fully populated

    double get_number(const std::string& key) const;
    bool get_bool(const std::string& key) const;
    int get_int(const std::string& key) const; // rejects non-integers
    const std::string& get_text(const std::string& key) const;

    // Validates the key against the registry (numeric kind) and formats the
    // value losslessly; used by sweeps.
    void set_number(const std::string& key, double value);
};

Config default_config();

// Parses `key = value` lines into a default-initialized config. '#' starts a
// comment; blank lines are skipped; later assignments win. Errors carry the
// line number, and unknown keys suggest the nearest registered name.
Config parse_config_text(const std::string& text);
Config load_config_file(const std::string& path);

// Builds the simulation parameter block, applying unit conversions and range
// checks. Throws config_error on invalid combinations.
GateParams gate_params_from_config(const Config& cfg);

// Cat size used by single-point commands.
double config_alpha(const Config& cfg);

struct SweepAxis {
    std::string parameter; // empty = unused
    double min = 0.0;
    double max = 0.0;
    int steps = 0;
    bool log_scale = false;

    double value_at(int i) const;
};

// Reads sweep.* / sweep2.* and validates: the parameter must be a registered
// numeric key (not itself a sweep control), steps >= 1, min <= max, and a log
// scale needs positive endpoints. The second axis requires the first.
std::vector<SweepAxis> sweep_axes_from_config(const Config& cfg);

// Edit distance used for the unknown-key suggestion; exposed for tests.
int edit_distance(const std::string& a, const std::string& b);

} // namespace hqg
