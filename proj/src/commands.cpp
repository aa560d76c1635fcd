#include "commands.hpp"

#include "errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>
#include <vector>

namespace hqg {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void write_header(std::ostringstream& out, const std::string& command,
                  const Config& cfg) {
    out << "# command: " << command << "\n";
    for (const KeySpec& k : config_registry()) {
        auto it = cfg.values.find(k.name);
        out << "# config: " << k.name << " = "
            << (it == cfg.values.end() ? "" : it->second) << "\n";
    }
}

void write_field_banner(std::ostringstream& out, const GateFields& f) {
    for (const std::string& flag : f.convention_flags) out << "# flag: " << flag << "\n";
    for (const std::string& w : f.warnings) out << "# warning: " << w << "\n";
}

// Deterministic parallel map: results land in index order regardless of the
// thread count.
template <typename Fn>
void parallel_for(int n, int jobs, Fn&& body) {
    if (jobs <= 0) {
        unsigned hw = std::thread::hardware_concurrency();
        jobs = hw == 0 ? 1 : static_cast<int>(hw);
    }
    jobs = std::max(1, std::min(jobs, n));
    if (jobs == 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::mutex err_mutex;
    std::exception_ptr first_error;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(jobs));
    for (int w = 0; w < jobs; ++w) {
        pool.emplace_back([&, w]() {
            try {
                for (int i = w; i < n; i += jobs) body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (std::thread& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

struct TruthRow {
    OpticalPol pol;
    int parity;
    const char* pol_name;
    const char* parity_name;
    double nominal_efficiency;
    double nominal_fidelity;
};

OracleProblem binned_problem(const GateParams& p, const Config& cfg, double alpha) {
    int n_bins = cfg.get_int("oracle.modes");
    if (n_bins < 3) throw config_error("'oracle.modes' must be at least 3");
    FrequencyGrid grid = grid_for_duration(p.mw_duration, n_bins, p.span_factor);
    SampledMode mode = make_gaussian_mode(grid, p.mw_duration, 0.0);

    CqedParams occ = p.cavity;
    occ.occupied = true;
    CqedParams emp = p.cavity;
    emp.occupied = false;
    TransferPair t_occ, t_emp;
    if (!p.flat_microwave) {
        t_occ = transfer_functions(grid, occ);
        t_emp = transfer_functions(grid, emp);
    }

    OracleProblem problem;
    problem.alpha = alpha;
    problem.bins.resize(static_cast<std::size_t>(n_bins));
    for (int i = 0; i < n_bins; ++i) {
        std::size_t k = static_cast<std::size_t>(i);
        OracleBin& bin = problem.bins[k];
        bin.shape = mode.amp[k] * std::sqrt(trapezoid_weight(grid, i));
        if (p.flat_microwave) {
            bin.c1_occupied = cplx(1.0, 0.0);
            bin.c1_empty = cplx(-1.0, 0.0);
            bin.c2_occupied = bin.c2_empty = cplx(0.0, 0.0);
        } else {
            bin.c1_occupied = t_occ.c1[k];
            bin.c2_occupied = t_occ.c2[k];
            bin.c1_empty = t_emp.c1[k];
            bin.c2_empty = t_emp.c2[k];
        }
    }
    return problem;
}

std::string cmd_truth_table(const Config& cfg, const RunOptions& opt) {
    GateParams params = gate_params_from_config(cfg);
    double alpha = config_alpha(cfg);
    GateFields fields = assemble_fields(params, alpha);

    const TruthRow rows[4] = {
        {OpticalPol::right, +1, "R", "even", 0.74, 0.923},
        {OpticalPol::right, -1, "R", "odd", 0.74, 0.923},
        {OpticalPol::left, +1, "L", "even", 0.45, 0.969},
        {OpticalPol::left, -1, "L", "odd", 0.45, 0.967},
    };

    OracleProblem oracle_base;
    int truncation = 0;
    if (opt.oracle_check) {
        oracle_base = binned_problem(params, cfg, alpha);
        truncation = cfg.get_int("oracle.truncation");
        if (truncation < 8) throw config_error("'oracle.truncation' must be at least 8");
    }

    std::ostringstream out;
    write_header(out, "truth-table", cfg);
    write_field_banner(out, fields);

    std::ostringstream notes;
    std::ostringstream data;
    data << "input_pol,cat_parity,fidelity,f_opt,f_mw,efficiency,"
            "post_selection_probability,lambda_re,lambda_im,xi,"
            "nominal_efficiency,nominal_fidelity,fidelity_delta,efficiency_delta";
    if (opt.oracle_check) data << ",oracle_fidelity,oracle_delta";
    data << "\n";

    for (const TruthRow& row : rows) {
        FidelityReport r = truth_table_entry(row.pol, row.parity, fields);
        double f_delta = r.fidelity - row.nominal_fidelity;
        double e_delta = r.efficiency - row.nominal_efficiency;

        data << row.pol_name << ',' << row.parity_name << ',' << fmt(r.fidelity)
             << ',' << fmt(r.f_opt) << ',' << fmt(r.f_mw) << ','
             << fmt(r.efficiency) << ',' << fmt(r.post_selection_probability)
             << ',' << fmt(r.lambda.real()) << ',' << fmt(r.lambda.imag()) << ','
             << fmt(r.xi) << ',' << fmt(row.nominal_efficiency) << ','
             << fmt(row.nominal_fidelity) << ',' << fmt(f_delta) << ','
             << fmt(e_delta);

        if (opt.oracle_check) {
            OracleProblem problem = oracle_base;
            problem.occupied_amp = (row.pol == OpticalPol::left) ? 1.0 : 0.0;
            problem.empty_amp = (row.pol == OpticalPol::right) ? 1.0 : 0.0;
            problem.even_amp = (row.parity == 1) ? 1.0 : 0.0;
            problem.odd_amp = (row.parity == -1) ? 1.0 : 0.0;
            problem.optical_kept_occupied = fields.path[0].kept_raw;
            problem.optical_kept_empty = fields.path[1].kept_raw;
            OracleResult res = fock_oracle_fidelity(problem, truncation);
            double oracle_total = r.f_opt * res.fidelity;
            data << ',' << fmt(oracle_total) << ',' << fmt(r.fidelity - oracle_total);
        }
        data << "\n";

        if (std::abs(e_delta) > 0.05) {
            notes << "# note: " << row.pol_name << " (x) " << row.parity_name
                  << ": efficiency " << fmt(r.efficiency)
                  << " deviates from the nominal " << fmt(row.nominal_efficiency)
                  << "; the omega/c detuning-to-wavevector mapping suppresses the"
                     " spreading penalty for this channel (see README)\n";
        }
        if (std::abs(f_delta) > 0.03) {
            notes << "# note: " << row.pol_name << " (x) " << row.parity_name
                  << ": fidelity " << fmt(r.fidelity)
                  << " deviates from the nominal " << fmt(row.nominal_fidelity)
                  << "\n";
        }
    }

    out << notes.str() << data.str();
    return out.str();
}

std::string cmd_sweep(const Config& cfg, const RunOptions& opt) {
    std::vector<SweepAxis> axes = sweep_axes_from_config(cfg);
    if (axes.empty())
        throw config_error("the sweep command needs 'sweep.parameter' to be set");

    int n1 = axes[0].steps;
    int n2 = axes.size() > 1 ? axes[1].steps : 1;
    int total = n1 * n2;

    std::ostringstream out;
    write_header(out, "sweep", cfg);
    out << axes[0].parameter;
    if (axes.size() > 1) out << ',' << axes[1].parameter;
    out << ",f_avg,f_min,f_max,eff_left,eff_right,distortion_empty\n";

    std::vector<std::string> lines(static_cast<std::size_t>(total));
    parallel_for(total, opt.jobs, [&](int idx) {
        int i = idx / n2;
        int j = idx % n2;
        Config point = cfg;
        point.set_number(axes[0].parameter, axes[0].value_at(i));
        if (axes.size() > 1) point.set_number(axes[1].parameter, axes[1].value_at(j));

        GateParams params = gate_params_from_config(point);
        double alpha = config_alpha(point);
        GateFields fields = assemble_fields(params, alpha);
        AverageFidelity avg = average_fidelity(fields);

        double distortion = std::abs(cplx(1.0, 0.0) + fields.path[1].lambda);
        std::ostringstream line;
        line << fmt(axes[0].value_at(i));
        if (axes.size() > 1) line << ',' << fmt(axes[1].value_at(j));
        line << ',' << fmt(avg.mean) << ',' << fmt(avg.min) << ',' << fmt(avg.max)
             << ',' << fmt(fields.path[0].kept_raw * fields.path[0].kept_raw)
             << ',' << fmt(fields.path[1].kept_raw * fields.path[1].kept_raw)
             << ',' << fmt(distortion) << "\n";
        lines[static_cast<std::size_t>(idx)] = line.str();
    });

    for (const std::string& line : lines) out << line;
    return out.str();
}

std::string cmd_modes(const Config& cfg) {
    GateParams params = gate_params_from_config(cfg);
    double alpha = config_alpha(cfg);
    (void)alpha; // mode shapes are amplitude-normalized; alpha scales nothing here

    std::ostringstream out;
    write_header(out, "modes", cfg);
    out << "series,x,re,im\n";

    auto emit = [&](const char* series, double x, cplx v) {
        out << series << ',' << fmt(x) << ',' << fmt(v.real()) << ','
            << fmt(v.imag()) << "\n";
    };

    // Control schedule (shared by both storage channels).
    const ControlSchedule& sched = params.storage_left.schedule;
    const int n_ctrl = 1001;
    for (int i = 0; i < n_ctrl; ++i) {
        double t = sched.total_time * i / (n_ctrl - 1);
        ControlValue cv = control_amplitude(sched, t);
        emit("control", t, cplx(cv.amplitude, cv.derivative));
    }

    // Optical channels.
    FrequencyGrid grid_o =
        grid_for_duration(params.optical_duration, params.grid_points,
                          params.span_factor);
    SampledMode f_o = make_gaussian_mode(grid_o, params.optical_duration,
                                         params.optical_delay);
    StorageTransfer st_l = storage_transfer(f_o, params.storage_left);
    StorageTransfer st_r = storage_transfer(f_o, params.storage_right);
    for (const std::string& w : st_l.warnings) out << "# warning: left storage: " << w << "\n";
    for (const std::string& w : st_r.warnings) out << "# warning: right storage: " << w << "\n";
    SampledMode kept_l = apply_storage(f_o, st_l);
    SampledMode kept_r = apply_storage(f_o, st_r);
    for (int i = 0; i < grid_o.n_points; ++i) {
        std::size_t k = static_cast<std::size_t>(i);
        double w = grid_o.point(i);
        emit("optical_input", w, f_o.amp[k]);
        emit("optical_kept_left", w, kept_l.amp[k]);
        emit("optical_kept_right", w, kept_r.amp[k]);
        emit("storage_filter_left", w, cplx(st_l.chi[k], st_l.phase[k]));
        emit("storage_filter_right", w, cplx(st_r.chi[k], st_r.phase[k]));
    }

    // Microwave channels (linear response).
    FrequencyGrid grid_m = grid_for_duration(params.mw_duration,
                                             params.grid_points, params.span_factor);
    SampledMode f_m = make_gaussian_mode(grid_m, params.mw_duration, 0.0);
    CqedParams occ = params.cavity;
    occ.occupied = true;
    CqedParams emp = params.cavity;
    emp.occupied = false;

    SampledMode refl_occ = f_m, refl_emp = f_m;
    if (params.flat_microwave) {
        for (std::size_t k = 0; k < refl_emp.amp.size(); ++k) refl_emp.amp[k] = -refl_emp.amp[k];
    } else {
        TransferPair t_occ = transfer_functions(grid_m, occ);
        TransferPair t_emp = transfer_functions(grid_m, emp);
        for (std::size_t k = 0; k < refl_occ.amp.size(); ++k) {
            refl_occ.amp[k] *= t_occ.c1[k];
            refl_emp.amp[k] *= t_emp.c1[k];
        }
    }
    for (int i = 0; i < grid_m.n_points; ++i) {
        std::size_t k = static_cast<std::size_t>(i);
        double w = grid_m.point(i);
        emit("mw_input", w, f_m.amp[k]);
        emit("mw_reflected_occupied", w, refl_occ.amp[k]);
        emit("mw_reflected_empty", w, refl_emp.amp[k]);
    }

    // Time-domain views of the same microwave modes.
    double rate = std::min(0.5 * (occ.kappa + occ.kappa_s), occ.kappa * 0.5);
    double t0 = -2.5 * params.mw_duration;
    double t1 = 2.5 * params.mw_duration + 20.0 / rate;
    const int n_time = 1001;
    std::vector<double> times(n_time);
    for (int i = 0; i < n_time; ++i)
        times[static_cast<std::size_t>(i)] = t0 + (t1 - t0) * i / (n_time - 1);
    std::vector<cplx> in_t = time_samples(f_m, times);
    std::vector<cplx> occ_t = time_samples(refl_occ, times);
    std::vector<cplx> emp_t = time_samples(refl_emp, times);
    for (int i = 0; i < n_time; ++i) {
        std::size_t k = static_cast<std::size_t>(i);
        emit("mw_time_input", times[k], in_t[k]);
        emit("mw_time_occupied", times[k], occ_t[k]);
        emit("mw_time_empty", times[k], emp_t[k]);
    }
    return out.str();
}

std::string cmd_validate_linearization(const Config& cfg) {
    GateParams params = gate_params_from_config(cfg);
    const double alphas[4] = {0.0, 1.0, std::sqrt(2.0), 2.0};

    CqedParams cav = params.cavity;
    cav.occupied = true;

    double kt = cav.kappa + cav.kappa_s;
    double t0 = -2.5 * params.mw_duration;
    double t1 = 2.5 * params.mw_duration + 20.0 / (0.5 * kt);

    std::ostringstream out;
    write_header(out, "validate-linearization", cfg);
    out << "# max_inversion_drift is the transient spin excitation while the"
           " pulse is on (peak |sigma|^2,\n"
        << "# second order in alpha); predicted_drift is the closed-form"
           " pulse-energy fraction lost\n"
        << "# through emitter decay, which tracks it up to a fixed factor"
           " ~1/(2 gamma_s T_eff).\n"
        << "# residual_drift, the settled value after the pulse"
           " (t >= 2.5 durations), is fourth order\n"
        << "# in alpha: radiative damping returns the inversion to the Bloch"
           " sphere as the spin decays.\n"
        << "# drift_ratio = max_inversion_drift / predicted_drift.\n";
    out << "alpha,max_inversion_drift,residual_drift,predicted_drift,"
           "drift_ratio,output_gap_l2\n";

    for (double alpha : alphas) {
        if (alpha == 0.0) {
            out << fmt(0.0) << ",0,0,0,0,0\n";
            continue;
        }
        GaussianDrive env{1.0, params.mw_duration, 0.0};
        auto b_in = [&](double t) { return alpha * drive_value(env, t); };
        MeanFieldTrajectory traj =
            simulate_mean_field(cav, b_in, t0, t1, params.mf_samples,
                                params.mf_rel_tol,
                                alpha / std::sqrt(params.mw_duration));

        double drift = inversion_drift(traj);
        double residual = 0.0;
        for (std::size_t i = 0; i < traj.times.size(); ++i) {
            if (traj.times[i] < 2.5 * params.mw_duration) continue;
            residual = std::max(residual, std::abs(traj.inversion[i] + 0.5));
        }
        double predicted = linearization_drift_estimate(cav, alpha);
        double ratio = predicted > 0.0 ? drift / predicted : 0.0;

        double gap_sq = 0.0;
        double dt = (t1 - t0) / (params.mf_samples - 1);
        for (std::size_t i = 0; i < traj.times.size(); ++i) {
            double w = (i == 0 || i + 1 == traj.times.size()) ? 0.5 * dt : dt;
            gap_sq += w * std::norm(traj.output[i] - traj.output_lin[i]);
        }
        out << fmt(alpha) << ',' << fmt(drift) << ',' << fmt(residual) << ','
            << fmt(predicted) << ',' << fmt(ratio) << ','
            << fmt(std::sqrt(gap_sq)) << "\n";
    }
    return out.str();
}

} // namespace

std::string run_command(const std::string& command, const Config& cfg,
                        const RunOptions& opt) {
    if (command == "truth-table") return cmd_truth_table(cfg, opt);
    if (command == "sweep") return cmd_sweep(cfg, opt);
    if (command == "modes") return cmd_modes(cfg);
    if (command == "validate-linearization") return cmd_validate_linearization(cfg);
    throw config_error("unknown command '" + command +
                       "'; expected truth-table, sweep, modes or "
                       "validate-linearization");
}

} // namespace hqg
