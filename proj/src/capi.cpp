#include "hybridgate/hybridgate.h"

#include "commands.hpp"
#include "config.hpp"
#include "errors.hpp"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

struct hqg_sim {
    hqg::Config cfg;
};

namespace {

thread_local std::string last_error;

template <typename Fn>
hqg_status guarded(Fn&& fn) {
    try {
        fn();
        last_error.clear();
        return HQG_OK;
    } catch (const hqg::config_error& e) {
        last_error = e.what();
        return HQG_ERROR_CONFIG;
    } catch (const hqg::numeric_error& e) {
        last_error = e.what();
        return HQG_ERROR_NUMERIC;
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
        return HQG_ERROR_NUMERIC;
    } catch (const std::exception& e) {
        last_error = e.what();
        return HQG_ERROR_NUMERIC;
    }
}

} // namespace

extern "C" {

const char* hqg_version(void) { return "1.0.0"; }

hqg_status hqg_sim_create(const char* path, hqg_sim** out_sim) {
    if (out_sim == nullptr) {
        last_error = "null output handle";
        return HQG_ERROR_INVALID;
    }
    *out_sim = nullptr;
    return guarded([&]() {
        auto sim = new hqg_sim;
        try {
            sim->cfg = (path == nullptr) ? hqg::default_config()
                                         : hqg::load_config_file(path);
        } catch (...) {
            delete sim;
            throw;
        }
        *out_sim = sim;
    });
}

hqg_status hqg_sim_create_from_string(const char* text, hqg_sim** out_sim) {
    if (out_sim == nullptr) {
        last_error = "null output handle";
        return HQG_ERROR_INVALID;
    }
    *out_sim = nullptr;
    if (text == nullptr) {
        last_error = "null config text";
        return HQG_ERROR_INVALID;
    }
    return guarded([&]() {
        auto sim = new hqg_sim;
        try {
            sim->cfg = hqg::parse_config_text(text);
        } catch (...) {
            delete sim;
            throw;
        }
        *out_sim = sim;
    });
}

void hqg_sim_destroy(hqg_sim* sim) { delete sim; }

hqg_status hqg_sim_set_number(hqg_sim* sim, const char* key, double value) {
    if (sim == nullptr || key == nullptr) {
        last_error = "null handle or key";
        return HQG_ERROR_INVALID;
    }
    return guarded([&]() { sim->cfg.set_number(key, value); });
}

hqg_status hqg_sim_run(const hqg_sim* sim, const char* command,
                       const hqg_run_options* options, char** out_csv) {
    if (sim == nullptr || command == nullptr || out_csv == nullptr) {
        last_error = "null handle, command or output pointer";
        return HQG_ERROR_INVALID;
    }
    *out_csv = nullptr;
    return guarded([&]() {
        hqg::RunOptions opt;
        if (options != nullptr) {
            opt.jobs = options->jobs;
            opt.oracle_check = options->oracle_check != 0;
        }
        std::string csv = hqg::run_command(command, sim->cfg, opt);
        char* buf = static_cast<char*>(std::malloc(csv.size() + 1));
        if (buf == nullptr) throw std::bad_alloc();
        std::memcpy(buf, csv.c_str(), csv.size() + 1);
        *out_csv = buf;
    });
}

void hqg_string_free(char* s) { std::free(s); }

const char* hqg_last_error(void) { return last_error.c_str(); }

} // extern "C"
