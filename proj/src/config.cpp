#include "config.hpp"

#include "errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace hqg {

const std::vector<KeySpec>& config_registry() {
    static const std::vector<KeySpec> registry = {
        {"pulse.duration_us", KeyKind::number, "0.5",
         "optical pulse width (1/e^2 intensity), microseconds"},
        {"pulse.delay_us", KeyKind::number, "0",
         "optical pulse arrival offset, microseconds"},
        {"mw.duration_us", KeyKind::number, "3",
         "microwave pulse width, microseconds"},
        {"mw.alpha0", KeyKind::number, "1.4142135623730951",
         "cat coherent amplitude"},
        {"eit.omega0_over_2pi_mhz", KeyKind::number, "30",
         "peak control Rabi frequency / 2pi, MHz"},
        {"eit.ramp_rate_per_us", KeyKind::number, "20",
         "control ramp steepness, 1/us"},
        {"eit.ramp_off_us", KeyKind::number, "2",
         "control switch-off ramp center, us"},
        {"eit.ramp_on_us", KeyKind::number, "18",
         "control switch-on ramp center, us"},
        {"eit.cycle_us", KeyKind::number, "20", "storage cycle length, us"},
        {"eit.atom_count", KeyKind::number, "60000", "ensemble atom number"},
        {"eit.length_mm", KeyKind::number, "0.4", "medium length, mm"},
        {"eit.gamma_eg_over_2pi_mhz", KeyKind::number, "3",
         "optical coherence decay / 2pi, MHz"},
        {"eit.left.g_over_2pi_khz", KeyKind::number, "29",
         "left-channel single-atom coupling / 2pi, kHz"},
        {"eit.left.gamma_bc_over_2pi_khz", KeyKind::number, "3.5",
         "left-channel spin-wave decoherence / 2pi, kHz"},
        {"eit.right.g_over_2pi_khz", KeyKind::number, "12",
         "right-channel single-atom coupling / 2pi, kHz"},
        {"eit.right.gamma_bc_over_2pi_hz", KeyKind::number, "16",
         "right-channel spin-wave decoherence / 2pi, Hz"},
        {"eit.flat_response", KeyKind::boolean, "false",
         "replace both storage transfers by the identity"},
        {"cqed.g_m_over_2pi_mhz", KeyKind::number, "2.723",
         "emitter-cavity coupling / 2pi, MHz"},
        {"cqed.kappa_over_2pi_mhz", KeyKind::number, "2",
         "cavity in/out rate / 2pi, MHz"},
        {"cqed.kappa_s_over_kappa", KeyKind::number, "0.001",
         "internal loss as a fraction of kappa"},
        {"cqed.gamma_s_over_2pi_khz", KeyKind::number, "4.78",
         "emitter decay / 2pi, kHz"},
        {"cqed.flat_response", KeyKind::boolean, "false",
         "replace the cavity response by its ideal +-1"},
        {"grid.n_points", KeyKind::number, "2049",
         "frequency samples per pulse grid"},
        {"grid.span_factor", KeyKind::number, "16",
         "grid span in units of 2pi/duration"},
        {"fidelity.balance_losses", KeyKind::boolean, "true",
         "attenuate the better storage channel to match the worse"},
        {"engine", KeyKind::text, "linear",
         "microwave stage engine: linear or mean_field"},
        {"ode.rel_tol", KeyKind::number, "1e-9",
         "mean-field integrator relative tolerance"},
        {"ode.mf_samples", KeyKind::number, "8193",
         "mean-field trajectory samples"},
        {"oracle.modes", KeyKind::number, "257",
         "frequency bins for the Fock-space cross-check"},
        {"oracle.truncation", KeyKind::number, "40",
         "Fock cutoff per bin for the cross-check"},
        {"sweep.parameter", KeyKind::text, "",
         "first sweep axis: a numeric config key"},
        {"sweep.min", KeyKind::number, "0", "first axis start"},
        {"sweep.max", KeyKind::number, "0", "first axis end"},
        {"sweep.steps", KeyKind::number, "0", "first axis point count"},
        {"sweep.scale", KeyKind::text, "linear",
         "first axis spacing: linear or log"},
        {"sweep2.parameter", KeyKind::text, "", "second sweep axis"},
        {"sweep2.min", KeyKind::number, "0", "second axis start"},
        {"sweep2.max", KeyKind::number, "0", "second axis end"},
        {"sweep2.steps", KeyKind::number, "0", "second axis point count"},
        {"sweep2.scale", KeyKind::text, "linear", "second axis spacing"},
    };
    return registry;
}

namespace {

const KeySpec* find_key(const std::string& name) {
    for (const KeySpec& k : config_registry())
        if (name == k.name) return &k;
    return nullptr;
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

double parse_number(const std::string& key, const std::string& raw) {
    const char* begin = raw.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end == begin || trim(end) != "" || !std::isfinite(v))
        throw config_error("value of '" + key + "' is not a finite number: '" +
                           raw + "'");
    return v;
}

// Keys consumed as counts or indices; fractional values are configuration
// mistakes and are rejected when the value is set, not when it is used.
bool integer_valued(const std::string& key) {
    return key == "grid.n_points" || key == "ode.mf_samples" ||
           key == "oracle.modes" || key == "oracle.truncation" ||
           key == "sweep.steps" || key == "sweep2.steps";
}

void check_integer(const std::string& key, double v) {
    double r = std::round(v);
    if (std::abs(v - r) > 1e-9 || std::abs(r) > 2e9)
        throw config_error("value of '" + key + "' must be an integer");
}

void check_text_value(const std::string& key, const std::string& value) {
    if (key == "engine" && value != "linear" && value != "mean_field")
        throw config_error("'engine' must be 'linear' or 'mean_field', got '" +
                           value + "'");
    if ((key == "sweep.scale" || key == "sweep2.scale") && value != "linear" &&
        value != "log")
        throw config_error("'" + key + "' must be 'linear' or 'log', got '" +
                           value + "'");
    // sweep.parameter is checked when the axis is read; empty disables it.
}

std::string nearest_key(const std::string& name) {
    int best = 1 << 20;
    std::string match;
    for (const KeySpec& k : config_registry()) {
        int d = edit_distance(name, k.name);
        if (d < best) {
            best = d;
            match = k.name;
        }
    }
    return match;
}

} // namespace

int edit_distance(const std::string& a, const std::string& b) {
    std::vector<int> prev(b.size() + 1), cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = static_cast<int>(j);
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = static_cast<int>(i);
        for (std::size_t j = 1; j <= b.size(); ++j) {
            int sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

double Config::get_number(const std::string& key) const {
    auto it = values.find(key);
    if (it == values.end()) throw config_error("missing config key '" + key + "'");
    return parse_number(key, it->second);
}

bool Config::get_bool(const std::string& key) const {
    auto it = values.find(key);
    if (it == values.end()) throw config_error("missing config key '" + key + "'");
    std::string v = lower(trim(it->second));
    if (v == "true" || v == "on" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "off" || v == "no" || v == "0") return false;
    throw config_error("value of '" + key + "' is not a boolean: '" + it->second + "'");
}

int Config::get_int(const std::string& key) const {
    double v = get_number(key);
    double r = std::round(v);
    if (std::abs(v - r) > 1e-9 || std::abs(r) > 2e9)
        throw config_error("value of '" + key + "' must be an integer");
    return static_cast<int>(r);
}

const std::string& Config::get_text(const std::string& key) const {
    auto it = values.find(key);
    if (it == values.end()) throw config_error("missing config key '" + key + "'");
    return it->second;
}

void Config::set_number(const std::string& key, double value) {
    const KeySpec* spec = find_key(key);
    if (spec == nullptr)
        throw config_error("unknown config key '" + key + "'; nearest match is '" +
                           nearest_key(key) + "'");
    if (spec->kind != KeyKind::number)
        throw config_error("config key '" + key + "' is not numeric");
    if (integer_valued(key)) check_integer(key, value);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    values[key] = buf;
}

Config default_config() {
    Config cfg;
    for (const KeySpec& k : config_registry()) cfg.values[k.name] = k.default_value;
    return cfg;
}

Config parse_config_text(const std::string& text) {
    Config cfg = default_config();
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::string body = trim(line);
        if (body.empty()) continue;
        std::size_t eq = body.find('=');
        if (eq == std::string::npos)
            throw config_error("line " + std::to_string(lineno) +
                               ": expected 'key = value', got '" + body + "'");
        std::string key = trim(body.substr(0, eq));
        std::string value = trim(body.substr(eq + 1));
        const KeySpec* spec = find_key(key);
        if (spec == nullptr)
            throw config_error("line " + std::to_string(lineno) + ": unknown key '" +
                               key + "'; nearest match is '" + nearest_key(key) + "'");
        // Validate eagerly so mistakes surface at load, not at first use.
        if (spec->kind == KeyKind::number) {
            double v = parse_number(key, value);
            if (integer_valued(key)) check_integer(key, v);
        }
        if (spec->kind == KeyKind::text) check_text_value(key, value);
        cfg.values[key] = value;
        if (spec->kind == KeyKind::boolean) cfg.get_bool(key);
    }
    return cfg;
}

Config load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

namespace {

double require_positive(const Config& cfg, const std::string& key) {
    double v = cfg.get_number(key);
    if (!(v > 0.0)) throw config_error("'" + key + "' must be positive");
    return v;
}

double require_non_negative(const Config& cfg, const std::string& key) {
    double v = cfg.get_number(key);
    if (v < 0.0) throw config_error("'" + key + "' must be non-negative");
    return v;
}

} // namespace

GateParams gate_params_from_config(const Config& cfg) {
    constexpr double two_pi = 2.0 * pi;
    constexpr double us = 1e-6;

    GateParams p;
    p.optical_duration = require_positive(cfg, "pulse.duration_us") * us;
    p.optical_delay = cfg.get_number("pulse.delay_us") * us;
    p.mw_duration = require_positive(cfg, "mw.duration_us") * us;

    ControlSchedule sched;
    sched.peak = require_positive(cfg, "eit.omega0_over_2pi_mhz") * two_pi * 1e6;
    sched.rate = require_positive(cfg, "eit.ramp_rate_per_us") / us;
    sched.off_time = cfg.get_number("eit.ramp_off_us") * us;
    sched.on_time = cfg.get_number("eit.ramp_on_us") * us;
    sched.total_time = require_positive(cfg, "eit.cycle_us") * us;
    if (!(sched.off_time < sched.on_time))
        throw config_error("'eit.ramp_off_us' must precede 'eit.ramp_on_us'");
    if (!(sched.on_time < sched.total_time))
        throw config_error("'eit.ramp_on_us' must lie inside 'eit.cycle_us'");

    EitChannelParams common;
    common.schedule = sched;
    common.atom_count = require_positive(cfg, "eit.atom_count");
    common.medium_length = require_positive(cfg, "eit.length_mm") * 1e-3;
    common.gamma_ba = require_non_negative(cfg, "eit.gamma_eg_over_2pi_mhz") *
                      two_pi * 1e6;

    p.storage_left = common;
    p.storage_left.coupling =
        require_positive(cfg, "eit.left.g_over_2pi_khz") * two_pi * 1e3;
    p.storage_left.gamma_bc =
        require_non_negative(cfg, "eit.left.gamma_bc_over_2pi_khz") * two_pi * 1e3;

    p.storage_right = common;
    p.storage_right.coupling =
        require_positive(cfg, "eit.right.g_over_2pi_khz") * two_pi * 1e3;
    p.storage_right.gamma_bc =
        require_non_negative(cfg, "eit.right.gamma_bc_over_2pi_hz") * two_pi;

    p.cavity.coupling = require_non_negative(cfg, "cqed.g_m_over_2pi_mhz") * two_pi * 1e6;
    p.cavity.kappa = require_positive(cfg, "cqed.kappa_over_2pi_mhz") * two_pi * 1e6;
    p.cavity.kappa_s =
        require_non_negative(cfg, "cqed.kappa_s_over_kappa") * p.cavity.kappa;
    p.cavity.gamma_s =
        require_non_negative(cfg, "cqed.gamma_s_over_2pi_khz") * two_pi * 1e3;

    p.flat_storage = cfg.get_bool("eit.flat_response");
    p.flat_microwave = cfg.get_bool("cqed.flat_response");
    p.balance = cfg.get_bool("fidelity.balance_losses");

    const std::string& engine = cfg.get_text("engine");
    if (engine == "linear") {
        p.engine = MwEngine::linear;
    } else if (engine == "mean_field") {
        p.engine = MwEngine::mean_field;
    } else {
        throw config_error("'engine' must be 'linear' or 'mean_field', got '" +
                           engine + "'");
    }

    p.mf_rel_tol = cfg.get_number("ode.rel_tol");
    if (!(p.mf_rel_tol >= 1e-12 && p.mf_rel_tol <= 1e-6))
        throw config_error("'ode.rel_tol' must lie in [1e-12, 1e-6]");
    p.mf_samples = cfg.get_int("ode.mf_samples");
    if (p.mf_samples < 16)
        throw config_error("'ode.mf_samples' must be at least 16");

    p.grid_points = cfg.get_int("grid.n_points");
    if (p.grid_points < 2) throw config_error("'grid.n_points' must be at least 2");
    p.span_factor = require_positive(cfg, "grid.span_factor");
    return p;
}

double config_alpha(const Config& cfg) {
    return require_non_negative(cfg, "mw.alpha0");
}

double SweepAxis::value_at(int i) const {
    if (steps <= 1) return min;
    double t = static_cast<double>(i) / (steps - 1);
    if (log_scale) return std::exp(std::log(min) + t * (std::log(max) - std::log(min)));
    return min + t * (max - min);
}

namespace {

SweepAxis read_axis(const Config& cfg, const std::string& prefix) {
    SweepAxis ax;
    ax.parameter = trim(cfg.get_text(prefix + ".parameter"));
    if (ax.parameter.empty()) return ax;

    const KeySpec* spec = find_key(ax.parameter);
    if (spec == nullptr)
        throw config_error("'" + prefix + ".parameter' names unknown key '" +
                           ax.parameter + "'; nearest match is '" +
                           nearest_key(ax.parameter) + "'");
    if (spec->kind != KeyKind::number)
        throw config_error("'" + prefix + ".parameter' must name a numeric key");
    if (ax.parameter.rfind("sweep", 0) == 0)
        throw config_error("sweep controls cannot sweep themselves");

    ax.min = cfg.get_number(prefix + ".min");
    ax.max = cfg.get_number(prefix + ".max");
    ax.steps = cfg.get_int(prefix + ".steps");
    if (ax.steps < 1)
        throw config_error("'" + prefix + ".steps' must be at least 1");
    if (!(ax.min <= ax.max))
        throw config_error("'" + prefix + ".min' must not exceed '" + prefix +
                           ".max'");
    const std::string& scale = cfg.get_text(prefix + ".scale");
    if (scale == "log") {
        ax.log_scale = true;
        if (!(ax.min > 0.0))
            throw config_error("log-scale sweep endpoints must be positive");
    } else if (scale != "linear") {
        throw config_error("'" + prefix + ".scale' must be 'linear' or 'log'");
    }
    return ax;
}

} // namespace

std::vector<SweepAxis> sweep_axes_from_config(const Config& cfg) {
    std::vector<SweepAxis> axes;
    SweepAxis first = read_axis(cfg, "sweep");
    SweepAxis second = read_axis(cfg, "sweep2");
    if (!second.parameter.empty() && first.parameter.empty())
        throw config_error("'sweep2.parameter' requires 'sweep.parameter'");
    if (!first.parameter.empty()) axes.push_back(first);
    if (!second.parameter.empty()) axes.push_back(second);
    return axes;
}

} // namespace hqg
