// Command-line front end. Everything numerical happens behind the shared
// library; this file only parses arguments, moves bytes and maps statuses to
// exit codes (0 success, 2 configuration error, 3 numerical failure).

#include "hybridgate/hybridgate.h"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

namespace {

int fail(hqg_status status) {
    std::cerr << "error: " << hqg_last_error() << "\n";
    if (status == HQG_ERROR_NUMERIC) return 3;
    return 2;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hybrid optical-microwave gate simulator"};
    app.set_version_flag("--version", std::string(hqg_version()));

    std::string command;
    std::string config_path;
    std::string out_path;
    int jobs = 0;
    bool oracle_check = false;

    app.add_option("command", command,
                   "truth-table | sweep | modes | validate-linearization")
        ->required();
    app.add_option("--config", config_path, "configuration file (key = value)");
    app.add_option("--out", out_path, "write CSV here instead of stdout");
    app.add_option("--jobs", jobs, "sweep worker threads (default: all cores)");
    app.add_flag("--oracle-check", oracle_check,
                 "add Fock-oracle cross-check columns to the truth table");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    hqg_sim* sim = nullptr;
    hqg_status status =
        hqg_sim_create(config_path.empty() ? nullptr : config_path.c_str(), &sim);
    if (status != HQG_OK) return fail(status);

    hqg_run_options options{};
    options.jobs = jobs;
    options.oracle_check = oracle_check ? 1 : 0;

    char* csv = nullptr;
    status = hqg_sim_run(sim, command.c_str(), &options, &csv);
    if (status != HQG_OK) {
        hqg_sim_destroy(sim);
        return fail(status);
    }

    int rc = 0;
    if (out_path.empty()) {
        std::fputs(csv, stdout);
    } else {
        std::ofstream out(out_path);
        if (!out) {
            std::cerr << "error: cannot open output file '" << out_path << "'\n";
            rc = 2;
        } else {
            out << csv;
        }
    }
    hqg_string_free(csv);
    hqg_sim_destroy(sim);
    return rc;
}
