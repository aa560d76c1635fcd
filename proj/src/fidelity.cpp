#include "fidelity.hpp"

#include "errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace hqg {

namespace {

cplx dot(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    if (a.size() != b.size())
        throw numeric_error("overlap of vectors with different sample counts");
    cplx acc(0.0, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
    return acc;
}

double norm_sq(const std::vector<cplx>& a) {
    double acc = 0.0;
    for (const cplx& v : a) acc += std::norm(v);
    return acc;
}

int branch_path(int b) { return b / 2; }
double branch_sign(int b) { return (b % 2 == 0) ? 1.0 : -1.0; }

// Slowest field decay rate of the linear cavity-emitter block, used to size
// the ringdown tail of the time window.
double slowest_decay_rate(const CqedParams& c) {
    double kt = c.kappa + c.kappa_s;
    double g = c.occupied ? c.coupling : 0.0;
    if (g <= 0.0) return 0.5 * kt;
    double tr = -(0.5 * kt + c.gamma_s);
    double det = 0.5 * kt * c.gamma_s + g * g;
    double disc = tr * tr - 4.0 * det;
    if (disc >= 0.0) {
        double slow = 0.5 * (tr + std::sqrt(disc));
        if (std::abs(slow) > 1e-12 * std::abs(tr)) return std::abs(slow);
        return 0.5 * kt; // degenerate: undamped spin mode never excited
    }
    return 0.5 * std::abs(tr);
}

} // namespace

GateOutcome cz_branch_coefficients(const GateInput& in) {
    if (!(in.alpha >= 0.0) || !std::isfinite(in.alpha))
        throw config_error("cat size alpha must be a finite non-negative number");
    double n_e = cat_normalization(in.alpha, +1);
    cplx even = in.c_even * n_e;
    cplx odd(0.0, 0.0);
    if (in.c_odd != cplx(0.0, 0.0))
        odd = in.c_odd * cat_normalization(in.alpha, -1);

    GateOutcome out;
    out.a_plus = in.c_left * (even + odd);
    out.a_minus = in.c_left * (even - odd);
    out.b_plus = in.c_right * (even + odd);
    out.b_minus = in.c_right * (even - odd);

    // Gram norm of the decomposition: same-path branches overlap through the
    // coherent factor <-alpha|alpha> = exp(-2 alpha^2).
    double cross = std::exp(-2.0 * in.alpha * in.alpha);
    auto pair_norm = [cross](cplx plus, cplx minus) {
        return std::norm(plus) + std::norm(minus) +
               2.0 * cross * (plus * std::conj(minus)).real();
    };
    double total = pair_norm(out.a_plus, out.a_minus) +
                   pair_norm(out.b_plus, out.b_minus);
    out.norm = std::sqrt(std::max(0.0, total));
    return out;
}

GateFields assemble_fields(const GateParams& p, double alpha) {
    if (!(alpha >= 0.0) || !std::isfinite(alpha))
        throw config_error("cat size alpha must be a finite non-negative number");
    if (p.mf_samples < 16)
        throw config_error("mean-field engine needs at least 16 time samples");

    GateFields out;
    out.alpha = alpha;
    out.engine = p.engine;

    // Optical storage channels.
    FrequencyGrid grid_o =
        grid_for_duration(p.optical_duration, p.grid_points, p.span_factor);
    SampledMode f_o = make_gaussian_mode(grid_o, p.optical_duration, p.optical_delay);

    std::size_t n_o = f_o.amp.size();
    out.optical_ideal.resize(n_o);
    if (p.flat_storage) {
        // Identity storage: both ensembles return the pulse unchanged.
        for (std::size_t i = 0; i < n_o; ++i) {
            double sw = std::sqrt(trapezoid_weight(grid_o, static_cast<int>(i)));
            out.optical_ideal[i] = f_o.amp[i] * sw;
        }
        for (int P = 0; P < 2; ++P) {
            out.path[P].kept_raw = 1.0;
            out.path[P].balance_scale = 1.0;
            out.path[P].optical_overlap = cplx(1.0, 0.0);
            out.path[P].optical_out = out.optical_ideal;
        }
    } else {
        StorageTransfer st[2] = {storage_transfer(f_o, p.storage_left),
                                 storage_transfer(f_o, p.storage_right)};
        const char* side[2] = {"left storage: ", "right storage: "};
        for (int P = 0; P < 2; ++P) {
            for (const std::string& w : st[P].warnings)
                out.warnings.push_back(side[P] + w);
            out.path[P].kept_raw = st[P].kept_amplitude;
        }

        auto scales = p.balance
                          ? balance_losses(out.path[0].kept_raw, out.path[1].kept_raw)
                          : std::pair<double, double>(1.0, 1.0);
        double scale_arr[2] = {scales.first, scales.second};

        for (int P = 0; P < 2; ++P) {
            SampledMode kept = apply_storage(f_o, st[P]);
            out.path[P].optical_overlap = inner_product(f_o, kept);
            out.path[P].balance_scale = scale_arr[P];
            out.path[P].optical_out.resize(n_o);
            for (std::size_t i = 0; i < n_o; ++i) {
                double sw = std::sqrt(trapezoid_weight(grid_o, static_cast<int>(i)));
                out.path[P].optical_out[i] = kept.amp[i] * sw * scale_arr[P];
                if (P == 0) out.optical_ideal[i] = f_o.amp[i] * sw;
            }
        }
    }

    // Microwave reflection, per cavity occupation.
    out.path[0].ideal_sign = +1;
    out.path[1].ideal_sign = -1;

    if (p.engine == MwEngine::linear) {
        FrequencyGrid grid_m =
            grid_for_duration(p.mw_duration, p.grid_points, p.span_factor);
        SampledMode f_m = make_gaussian_mode(grid_m, p.mw_duration, 0.0);
        std::size_t n_m = f_m.amp.size();

        for (int P = 0; P < 2; ++P) {
            PathFields& pf = out.path[P];
            double sign = pf.ideal_sign;
            pf.mw_channels.assign(2, std::vector<cplx>(n_m, cplx(0.0, 0.0)));
            pf.mw_ideal.resize(n_m);

            if (p.flat_microwave) {
                for (std::size_t i = 0; i < n_m; ++i) {
                    double sw = std::sqrt(trapezoid_weight(grid_m, static_cast<int>(i)));
                    cplx ideal = sign * alpha * f_m.amp[i] * sw;
                    pf.mw_channels[0][i] = ideal;
                    pf.mw_ideal[i] = ideal;
                }
                pf.lambda = cplx(sign, 0.0);
                pf.kept_mw = 1.0;
                pf.lost_mw = 0.0;
            } else {
                CqedParams cav = p.cavity;
                cav.occupied = (P == 0);
                TransferPair tp = transfer_functions(grid_m, cav);
                for (std::size_t i = 0; i < n_m; ++i) {
                    double sw = std::sqrt(trapezoid_weight(grid_m, static_cast<int>(i)));
                    cplx base = alpha * f_m.amp[i] * sw;
                    pf.mw_channels[0][i] = tp.c1[i] * base;
                    pf.mw_channels[1][i] = tp.c2[i] * base;
                    pf.mw_ideal[i] = sign * alpha * f_m.amp[i] * sw;
                }
                pf.lambda = mode_overlap_lambda(f_m, tp);
                pf.kept_mw = kept_fraction(f_m, tp);
                pf.lost_mw = lost_fraction(f_m, tp);
            }
            pf.xi = std::exp(-2.0 * alpha * alpha * pf.lost_mw);
        }
    } else {
        // Time-domain mean-field engine. Both paths share one window so the
        // cross-path Gram entries are overlaps on identical sample points.
        double T = p.mw_duration;
        if (!(T > 0.0)) throw config_error("microwave pulse duration must be positive");
        CqedParams cav_occ = p.cavity;
        cav_occ.occupied = true;
        CqedParams cav_emp = p.cavity;
        cav_emp.occupied = false;
        double rate = std::min(slowest_decay_rate(cav_occ), slowest_decay_rate(cav_emp));
        if (!(rate > 0.0)) throw config_error("cavity decay rate must be positive");
        double t0 = -2.5 * T;
        double t1 = 2.5 * T + 20.0 / rate;
        int n_t = p.mf_samples;

        GaussianDrive env{1.0, T, 0.0};
        auto b_in = [&](double t) { return alpha * drive_value(env, t); };
        double hint = alpha / std::sqrt(T);

        for (int P = 0; P < 2; ++P) {
            PathFields& pf = out.path[P];
            const CqedParams& cav = (P == 0) ? cav_occ : cav_emp;
            double sign = pf.ideal_sign;
            std::size_t n = static_cast<std::size_t>(n_t);
            pf.mw_channels.assign(3, std::vector<cplx>(n, cplx(0.0, 0.0)));
            pf.mw_ideal.resize(n);

            MeanFieldTrajectory traj;
            bool run_ode = !p.flat_microwave && alpha > 0.0;
            if (run_ode)
                traj = simulate_mean_field(cav, b_in, t0, t1, n_t, p.mf_rel_tol, hint);

            double dt = (t1 - t0) / (n_t - 1);
            double sqrt_ks = std::sqrt(p.cavity.kappa_s);
            double sqrt_gs = std::sqrt(2.0 * cav.gamma_s);
            std::vector<cplx> ideal_plus(n);
            for (std::size_t i = 0; i < n; ++i) {
                double t = t0 + dt * static_cast<double>(i);
                double w = (i == 0 || i + 1 == n) ? 0.5 * dt : dt;
                double sw = std::sqrt(w);
                ideal_plus[i] = alpha * drive_value(env, t) * sw;
                pf.mw_ideal[i] = sign * ideal_plus[i];
                if (p.flat_microwave) {
                    pf.mw_channels[0][i] = pf.mw_ideal[i];
                } else if (run_ode) {
                    pf.mw_channels[0][i] = traj.output[i] * sw;
                    pf.mw_channels[1][i] = sqrt_ks * traj.cavity[i] * sw;
                    pf.mw_channels[2][i] = sqrt_gs * traj.spin[i] * sw;
                }
            }

            if (p.flat_microwave) {
                pf.lambda = cplx(sign, 0.0);
                pf.kept_mw = 1.0;
                pf.lost_mw = 0.0;
            } else if (alpha > 0.0) {
                double a2 = alpha * alpha;
                pf.lambda = std::conj(dot(ideal_plus, pf.mw_channels[0])) / a2;
                pf.kept_mw = norm_sq(pf.mw_channels[0]) / a2;
                pf.lost_mw =
                    (norm_sq(pf.mw_channels[1]) + norm_sq(pf.mw_channels[2])) / a2;
            } else {
                pf.lambda = cplx(sign, 0.0);
                pf.kept_mw = 1.0;
                pf.lost_mw = 0.0;
            }
            pf.xi = std::exp(-2.0 * alpha * alpha * pf.lost_mw);
        }
    }

    out.convention_flags.push_back(p.engine == MwEngine::linear
                                       ? "engine=linear"
                                       : "engine=mean_field");
    out.convention_flags.push_back("output=input+sqrt(kappa)*cavity");
    out.convention_flags.push_back("distortion_metric=|1+Lambda|");
    out.convention_flags.push_back("cat_norm=1/sqrt(2(1+p*exp(-2a^2)))");
    out.convention_flags.push_back("storage_wavevector=omega/c");
    out.convention_flags.push_back(p.balance ? "balance=on" : "balance=off");
    if (p.flat_storage) out.convention_flags.push_back("flat_storage=on");
    if (p.flat_microwave) out.convention_flags.push_back("flat_microwave=on");
    return out;
}

GramResult evaluate_gram(const GateFields& f, const GateOutcome& c,
                         bool include_optical) {
    const cplx coeff[4] = {c.a_plus, c.a_minus, c.b_plus, c.b_minus};

    // Path-pair blocks; branch signs multiply the cross terms.
    double out0_norm[2], env_norm[2], id_norm[2];
    cplx io_cross[2][2], oo_cross[2][2], env_cross[2][2], id_cross[2][2];
    cplx opt_io[2], opt_oo[2];
    double opt_id_norm = norm_sq(f.optical_ideal);

    std::size_t n_ch = f.path[0].mw_channels.size();
    if (f.path[1].mw_channels.size() != n_ch || n_ch == 0)
        throw numeric_error("branch fields have inconsistent channel structure");

    for (int P = 0; P < 2; ++P) {
        const PathFields& pf = f.path[P];
        out0_norm[P] = norm_sq(pf.mw_channels[0]);
        env_norm[P] = 0.0;
        for (std::size_t ch = 1; ch < n_ch; ++ch)
            env_norm[P] += norm_sq(pf.mw_channels[ch]);
        id_norm[P] = norm_sq(pf.mw_ideal);
        opt_io[P] = dot(f.optical_ideal, pf.optical_out);
        opt_oo[P] = dot(pf.optical_out, pf.optical_out);
    }
    for (int Pa = 0; Pa < 2; ++Pa) {
        for (int Pb = 0; Pb < 2; ++Pb) {
            io_cross[Pa][Pb] = dot(f.path[Pa].mw_ideal, f.path[Pb].mw_channels[0]);
            oo_cross[Pa][Pb] =
                dot(f.path[Pa].mw_channels[0], f.path[Pb].mw_channels[0]);
            id_cross[Pa][Pb] = dot(f.path[Pa].mw_ideal, f.path[Pb].mw_ideal);
            cplx acc(0.0, 0.0);
            for (std::size_t ch = 1; ch < n_ch; ++ch)
                acc += dot(f.path[Pa].mw_channels[ch], f.path[Pb].mw_channels[ch]);
            env_cross[Pa][Pb] = acc;
        }
    }

    // G_b = sum_a conj(coeff_a) <ideal_a | kept-branch_b> (optical factor and
    // output-channel coherent overlap; the environment enters below).
    cplx G[4];
    for (int b = 0; b < 4; ++b) {
        int Pb = branch_path(b);
        double sb = branch_sign(b);
        cplx acc(0.0, 0.0);
        for (int a = 0; a < 4; ++a) {
            int Pa = branch_path(a);
            if (Pa != Pb) continue; // orthogonal polarization labels
            double sa = branch_sign(a);
            cplx coh = std::exp(-0.5 * id_norm[Pa] - 0.5 * out0_norm[Pb] +
                                sa * sb * io_cross[Pa][Pb]);
            cplx opt = include_optical ? opt_io[Pb] : cplx(1.0, 0.0);
            acc += std::conj(coeff[a]) * opt * coh;
        }
        G[b] = acc;
    }

    cplx s_num(0.0, 0.0), s_ps(0.0, 0.0), s_id(0.0, 0.0);
    for (int b = 0; b < 4; ++b) {
        int Pb = branch_path(b);
        double sb = branch_sign(b);
        for (int b2 = 0; b2 < 4; ++b2) {
            int P2 = branch_path(b2);
            double s2 = branch_sign(b2);
            cplx pair = coeff[b] * std::conj(coeff[b2]);

            // Environment Gram between branches, <e_{b2}|e_b>.
            cplx env = std::exp(-0.5 * env_norm[P2] - 0.5 * env_norm[Pb] +
                                s2 * sb * env_cross[P2][Pb]);
            s_num += pair * env * G[b] * std::conj(G[b2]);

            if (P2 == Pb) {
                cplx mm = std::exp(-0.5 * out0_norm[P2] - 0.5 * out0_norm[Pb] +
                                   s2 * sb * oo_cross[P2][Pb]);
                cplx opt = include_optical ? opt_oo[Pb] : cplx(1.0, 0.0);
                s_ps += pair * env * opt * mm;

                cplx ii = std::exp(-0.5 * id_norm[P2] - 0.5 * id_norm[Pb] +
                                   s2 * sb * id_cross[P2][Pb]);
                cplx opt_id = include_optical ? cplx(opt_id_norm, 0.0)
                                              : cplx(1.0, 0.0);
                s_id += pair * opt_id * ii;
            }
        }
    }

    double ps = s_ps.real();
    double id = s_id.real();
    if (!(ps > 1e-300))
        throw numeric_error("post-selection probability vanished; fidelity undefined");
    if (!(id > 1e-300))
        throw numeric_error("ideal image has zero norm; input state is empty");

    GramResult r;
    r.fidelity = s_num.real() / ps;
    r.post_probability = ps / id;
    r.ideal_norm = id;
    return r;
}

double cz_sign_amplitude(const GateFields& f, const GateOutcome& c) {
    const cplx coeff[4] = {c.a_plus, c.a_minus, c.b_plus, c.b_minus};

    double out0_norm[2], env_norm[2], id_norm[2];
    cplx io_cross[2][2], oo_cross[2][2], env_cross[2][2], id_cross[2][2];
    cplx opt_io[2], opt_oo[2];
    double opt_id_norm = norm_sq(f.optical_ideal);

    std::size_t n_ch = f.path[0].mw_channels.size();
    if (f.path[1].mw_channels.size() != n_ch || n_ch == 0)
        throw numeric_error("branch fields have inconsistent channel structure");

    for (int P = 0; P < 2; ++P) {
        const PathFields& pf = f.path[P];
        out0_norm[P] = norm_sq(pf.mw_channels[0]);
        env_norm[P] = 0.0;
        for (std::size_t ch = 1; ch < n_ch; ++ch)
            env_norm[P] += norm_sq(pf.mw_channels[ch]);
        id_norm[P] = norm_sq(pf.mw_ideal);
        opt_io[P] = dot(f.optical_ideal, pf.optical_out);
        opt_oo[P] = dot(pf.optical_out, pf.optical_out);
    }
    for (int Pa = 0; Pa < 2; ++Pa) {
        for (int Pb = 0; Pb < 2; ++Pb) {
            // Reference uses the unflipped image s_a * (alpha f); dividing the
            // stored ideal by its sign multiplies the cross term by the sign.
            io_cross[Pa][Pb] = static_cast<double>(f.path[Pa].ideal_sign) *
                               dot(f.path[Pa].mw_ideal, f.path[Pb].mw_channels[0]);
            oo_cross[Pa][Pb] =
                dot(f.path[Pa].mw_channels[0], f.path[Pb].mw_channels[0]);
            id_cross[Pa][Pb] =
                static_cast<double>(f.path[Pa].ideal_sign * f.path[Pb].ideal_sign) *
                dot(f.path[Pa].mw_ideal, f.path[Pb].mw_ideal);
            cplx acc(0.0, 0.0);
            for (std::size_t ch = 1; ch < n_ch; ++ch)
                acc += dot(f.path[Pa].mw_channels[ch], f.path[Pb].mw_channels[ch]);
            env_cross[Pa][Pb] = acc;
        }
    }

    cplx s_num(0.0, 0.0), s_ps(0.0, 0.0), s_ref(0.0, 0.0);
    for (int b = 0; b < 4; ++b) {
        int Pb = branch_path(b);
        double sb = branch_sign(b);
        for (int a = 0; a < 4; ++a) {
            int Pa = branch_path(a);
            if (Pa != Pb) continue;
            double sa = branch_sign(a);
            cplx pair = std::conj(coeff[a]) * coeff[b];

            // <reference_a | output_b>; the reference rides on the vacuum of
            // the loss channels, so the environment enters as <0|e_b>.
            cplx coh = std::exp(-0.5 * id_norm[Pa] - 0.5 * out0_norm[Pb] +
                                sa * sb * io_cross[Pa][Pb]);
            cplx env0 = std::exp(-0.5 * env_norm[Pb]);
            s_num += pair * opt_io[Pb] * coh * env0;

            cplx env = std::exp(-0.5 * env_norm[Pa] - 0.5 * env_norm[Pb] +
                                sa * sb * env_cross[Pa][Pb]);
            cplx mm = std::exp(-0.5 * out0_norm[Pa] - 0.5 * out0_norm[Pb] +
                               sa * sb * oo_cross[Pa][Pb]);
            s_ps += pair * env * opt_oo[Pb] * mm;

            cplx ii = std::exp(-0.5 * id_norm[Pa] - 0.5 * id_norm[Pb] +
                               sa * sb * id_cross[Pa][Pb]);
            s_ref += pair * cplx(opt_id_norm, 0.0) * ii;
        }
    }

    double ps = s_ps.real();
    double ref = s_ref.real();
    if (!(ps > 1e-300))
        throw numeric_error("post-selection probability vanished; sign undefined");
    if (!(ref > 1e-300))
        throw numeric_error("reference image has zero norm; input state is empty");
    return s_num.real() / std::sqrt(ps * ref);
}

double mw_fidelity_closed_form(int parity, double alpha, cplx lambda,
                               double kept_mw, double lost_mw, int ideal_sign) {
    if (parity != 1 && parity != -1)
        throw config_error("cat parity must be +1 or -1");
    cat_normalization(alpha, parity); // validates the degenerate odd cat
    double a2 = alpha * alpha;
    double pq = kept_mw + lost_mw;
    double xi = std::exp(-2.0 * a2 * lost_mw);
    cplx w = static_cast<double>(ideal_sign) * std::conj(lambda);
    double num = (1.0 + xi) * std::exp(-a2 * (1.0 + kept_mw)) *
                 (std::cosh(2.0 * a2 * w.real()) +
                  parity * std::cos(2.0 * a2 * w.imag()));
    double den = (1.0 + parity * std::exp(-2.0 * a2)) *
                 (1.0 + parity * std::exp(-2.0 * a2 * pq));
    return num / den;
}

namespace {

FidelityReport build_report(const GateFields& f, const GateOutcome& outcome,
                            double pop_occupied, double pop_empty) {
    GramResult full = evaluate_gram(f, outcome, true);

    FidelityReport r;
    r.fidelity = full.fidelity;
    r.post_selection_probability = full.post_probability;
    r.convention_flags = f.convention_flags;

    double total = pop_occupied + pop_empty;
    if (!(total > 0.0))
        throw config_error("optical qubit amplitudes are all zero");
    double wts[2] = {pop_occupied / total, pop_empty / total};

    r.f_opt = 0.0;
    r.efficiency = 0.0;
    r.lambda = cplx(0.0, 0.0);
    r.xi = 0.0;
    for (int P = 0; P < 2; ++P) {
        const PathFields& pf = f.path[P];
        if (wts[P] == 0.0) continue;
        if (!(pf.kept_raw > 1e-300))
            throw numeric_error("storage channel transmits nothing; "
                                "optical fidelity undefined");
        r.f_opt += wts[P] * std::norm(pf.optical_overlap) /
                   (pf.kept_raw * pf.kept_raw);
        r.efficiency += wts[P] * pf.kept_raw * pf.kept_raw;
        r.lambda += wts[P] * pf.lambda;
        r.xi += wts[P] * pf.xi;
    }
    return r;
}

} // namespace

FidelityReport truth_table_entry(OpticalPol pol, int parity, const GateFields& f) {
    if (parity != 1 && parity != -1)
        throw config_error("cat parity must be +1 or -1");
    int path = (pol == OpticalPol::left) ? 0 : 1;

    GateInput in;
    in.c_left = (path == 0) ? cplx(1.0, 0.0) : cplx(0.0, 0.0);
    in.c_right = (path == 1) ? cplx(1.0, 0.0) : cplx(0.0, 0.0);
    in.c_even = (parity == 1) ? cplx(1.0, 0.0) : cplx(0.0, 0.0);
    in.c_odd = (parity == -1) ? cplx(1.0, 0.0) : cplx(0.0, 0.0);
    in.alpha = f.alpha;
    GateOutcome outcome = cz_branch_coefficients(in);

    FidelityReport r = build_report(f, outcome, path == 0 ? 1.0 : 0.0,
                                    path == 1 ? 1.0 : 0.0);
    const PathFields& pf = f.path[path];
    if (f.engine == MwEngine::linear) {
        r.f_mw = mw_fidelity_closed_form(parity, f.alpha, pf.lambda, pf.kept_mw,
                                         pf.lost_mw, pf.ideal_sign);
    } else {
        r.f_mw = evaluate_gram(f, outcome, false).fidelity;
    }
    return r;
}

FidelityReport separable_input_fidelity(const GateInput& in, const GateFields& f) {
    if (std::abs(in.alpha - f.alpha) > 1e-12 * std::max(1.0, f.alpha))
        throw config_error("input cat size does not match the assembled fields");
    GateOutcome outcome = cz_branch_coefficients(in);
    FidelityReport r =
        build_report(f, outcome, std::norm(in.c_left), std::norm(in.c_right));
    r.f_mw = evaluate_gram(f, outcome, false).fidelity;
    return r;
}

std::pair<cplx, cplx> bloch_rotation(const std::pair<cplx, cplx>& state,
                                     char axis, double angle) {
    double c = std::cos(0.5 * angle);
    double s = std::sin(0.5 * angle);
    const cplx u = state.first, v = state.second;
    switch (std::tolower(static_cast<unsigned char>(axis))) {
    case 'x':
        return {c * u - cplx(0.0, s) * v, -cplx(0.0, s) * u + c * v};
    case 'y':
        return {c * u - s * v, s * u + c * v};
    case 'z':
        return {cplx(c, -s) * u, cplx(c, s) * v};
    default:
        throw config_error("rotation axis must be x, y or z");
    }
}

std::array<std::pair<cplx, cplx>, 6> cardinal_states() {
    const std::pair<cplx, cplx> base{cplx(1.0, 0.0), cplx(0.0, 0.0)};
    return {
        base,                                  // +Z
        bloch_rotation(base, 'x', pi),         // -Z
        bloch_rotation(base, 'y', 0.5 * pi),   // +X
        bloch_rotation(base, 'y', -0.5 * pi),  // -X
        bloch_rotation(base, 'x', -0.5 * pi),  // +Y
        bloch_rotation(base, 'x', 0.5 * pi),   // -Y
    };
}

AverageFidelity average_fidelity(const GateFields& f) {
    auto states = cardinal_states();
    AverageFidelity out;
    out.cells.reserve(36);
    double acc = 0.0;
    for (int i = 0; i < 6; ++i) {
        for (int j = 0; j < 6; ++j) {
            GateInput in;
            in.c_left = states[static_cast<std::size_t>(i)].first;
            in.c_right = states[static_cast<std::size_t>(i)].second;
            in.c_even = states[static_cast<std::size_t>(j)].first;
            in.c_odd = states[static_cast<std::size_t>(j)].second;
            in.alpha = f.alpha;
            double fid = separable_input_fidelity(in, f).fidelity;
            out.cells.push_back({i, j, fid});
            acc += fid;
            if (out.cells.size() == 1) {
                out.min = fid;
                out.max = fid;
            } else {
                out.min = std::min(out.min, fid);
                out.max = std::max(out.max, fid);
            }
        }
    }
    out.mean = acc / 36.0;
    return out;
}

} // namespace hqg
