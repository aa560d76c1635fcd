#include "cat.hpp"

#include "errors.hpp"

#include <cmath>

namespace hqg {

cplx coherent_overlap(cplx u, cplx v) {
    return std::exp(-0.5 * std::norm(u) - 0.5 * std::norm(v) + std::conj(u) * v);
}

cplx coherent_overlap(const std::vector<cplx>& u, const std::vector<cplx>& v) {
    if (u.size() != v.size())
        throw config_error("coherent overlap: amplitude lists differ in length");
    cplx expo = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i)
        expo += -0.5 * std::norm(u[i]) - 0.5 * std::norm(v[i]) + std::conj(u[i]) * v[i];
    return std::exp(expo);
}

double cat_normalization(double alpha, int parity) {
    if (parity != 1 && parity != -1)
        throw config_error("cat normalization: parity must be +1 or -1");
    const double overlap = std::exp(-2.0 * alpha * alpha);
    const double denom = 2.0 * (1.0 + parity * overlap);
    if (!(denom > 1e-300))
        throw numeric_error("cat normalization: odd cat degenerates at alpha = 0");
    return 1.0 / std::sqrt(denom);
}

double cat_normalization_nominal(double alpha, int parity) {
    if (parity != 1 && parity != -1)
        throw config_error("cat normalization: parity must be +1 or -1");
    const double denom = 2.0 + parity * std::exp(-2.0 * alpha * alpha);
    if (!(denom > 1e-300))
        throw numeric_error("cat normalization: degenerate nominal normalization");
    return 1.0 / std::sqrt(denom);
}

std::vector<cplx> coherent_fock(cplx alpha, int n_max) {
    if (n_max < 0)
        throw config_error("coherent_fock: negative truncation");
    std::vector<cplx> c(n_max + 1);
    // c_n = e^{-|a|^2/2} a^n / sqrt(n!), built by recurrence.
    c[0] = std::exp(-0.5 * std::norm(alpha));
    for (int n = 1; n <= n_max; ++n) c[n] = c[n - 1] * alpha / std::sqrt(double(n));
    double captured = 0.0;
    for (const cplx& x : c) captured += std::norm(x);
    if (captured < 1.0 - 1e-12)
        throw numeric_error("coherent_fock: truncation tail above 1e-12; raise n_max");
    return c;
}

namespace {

struct Branch {
    int path;  // 0 occupied, 1 empty
    int sign;  // +1 or -1
    cplx weight;
};

// Two-mode beam-splitter image of a coherent state: out[k][l] is the amplitude
// of |k> kept and |l> lost, k + l <= n_max.
std::vector<std::vector<cplx>> split_coherent(cplx input, cplx c1, cplx c2, int n_max) {
    const std::vector<cplx> in = coherent_fock(input, n_max);
    std::vector<std::vector<cplx>> out(n_max + 1, std::vector<cplx>(n_max + 1, 0.0));
    // sqrt-binomial weights by recurrence along each anti-diagonal k + l = n.
    std::vector<cplx> c1_pow(n_max + 1), c2_pow(n_max + 1);
    c1_pow[0] = 1.0;
    c2_pow[0] = 1.0;
    for (int i = 1; i <= n_max; ++i) {
        c1_pow[i] = c1_pow[i - 1] * c1;
        c2_pow[i] = c2_pow[i - 1] * c2;
    }
    std::vector<double> log_fact(n_max + 1, 0.0);
    for (int i = 1; i <= n_max; ++i) log_fact[i] = log_fact[i - 1] + std::log(double(i));
    for (int n = 0; n <= n_max; ++n) {
        for (int k = 0; k <= n; ++k) {
            const int l = n - k;
            const double sqb =
                std::exp(0.5 * (log_fact[n] - log_fact[k] - log_fact[l]));
            out[k][l] = in[n] * sqb * c1_pow[k] * c2_pow[l];
        }
    }
    return out;
}

} // namespace

OracleResult fock_oracle_fidelity(const OracleProblem& p, int n_max) {
    if (p.bins.empty())
        throw config_error("oracle: no frequency bins");
    if (p.bins.size() > 1024)
        throw config_error("oracle: more than 1024 bins requested");
    if (n_max > 64)
        throw config_error("oracle: Fock cutoff above 64; the per-branch "
                           "two-mode tables scale as bins * cutoff^2");
    if (!(p.alpha >= 0.0))
        throw config_error("oracle: alpha must be non-negative");
    double shape_norm = 0.0;
    for (const auto& b : p.bins) shape_norm += std::norm(b.shape);
    if (std::abs(shape_norm - 1.0) > 1e-9)
        throw config_error("oracle: bin shape amplitudes are not normalized");

    const double ne = cat_normalization(p.alpha, +1);
    const double no = cat_normalization(p.alpha, -1);

    Branch br[4];
    for (int path = 0; path < 2; ++path) {
        const cplx path_amp = path == 0 ? p.occupied_amp : p.empty_amp;
        const double kept = path == 0 ? p.optical_kept_occupied : p.optical_kept_empty;
        for (int si = 0; si < 2; ++si) {
            const int s = si == 0 ? 1 : -1;
            const cplx d = p.even_amp * ne + double(s) * p.odd_amp * no;
            br[2 * path + si] = {path, s, path_amp * d * kept};
        }
    }
    // Ideal weights differ from branch weights only by the optical survival.
    cplx ideal_w[4];
    for (int b = 0; b < 4; ++b) {
        const cplx path_amp = br[b].path == 0 ? p.occupied_amp : p.empty_amp;
        const cplx d = p.even_amp * ne + double(br[b].sign) * p.odd_amp * no;
        ideal_w[b] = path_amp * d;
    }

    const int nb = int(p.bins.size());
    // Per branch and bin: beam-splitter image of the coherent input.
    std::vector<std::vector<std::vector<cplx>>> psi[4];
    for (int b = 0; b < 4; ++b) {
        psi[b].reserve(nb);
        for (int j = 0; j < nb; ++j) {
            const OracleBin& bin = p.bins[j];
            const cplx u = double(br[b].sign) * p.alpha * bin.shape;
            const cplx c1 = br[b].path == 0 ? bin.c1_occupied : bin.c1_empty;
            const cplx c2 = br[b].path == 0 ? bin.c2_occupied : bin.c2_empty;
            psi[b].push_back(split_coherent(u, c1, c2, n_max));
        }
    }

    // Ideal reflection: identity on the occupied path, pi phase on the empty
    // path, no loss, no distortion.
    auto ideal_amp = [&](int path, int sign, int j) {
        const double r = path == 0 ? 1.0 : -1.0;
        return double(sign) * r * p.alpha * p.bins[j].shape;
    };

    // A[a_sign_idx][b][j][l] = <ideal(a), l | psi(b), bin j>.
    std::vector<cplx> A[2][4];
    for (int ai = 0; ai < 2; ++ai) {
        const int sa = ai == 0 ? 1 : -1;
        for (int b = 0; b < 4; ++b) {
            A[ai][b].assign(std::size_t(nb) * (n_max + 1), 0.0);
            for (int j = 0; j < nb; ++j) {
                const std::vector<cplx> f =
                    coherent_fock(ideal_amp(br[b].path, sa, j), n_max);
                for (int l = 0; l <= n_max; ++l) {
                    cplx acc = 0.0;
                    for (int k = 0; k + l <= n_max; ++k)
                        acc += std::conj(f[k]) * psi[b][j][k][l];
                    A[ai][b][std::size_t(j) * (n_max + 1) + l] = acc;
                }
            }
        }
    }

    // Post-selection numerator: joint kept+env Gram restricted to same path.
    cplx s_ps = 0.0;
    for (int b = 0; b < 4; ++b) {
        for (int b2 = 0; b2 < 4; ++b2) {
            if (br[b].path != br[b2].path) continue;
            cplx prod = 1.0;
            for (int j = 0; j < nb; ++j) {
                cplx g = 0.0;
                for (int k = 0; k <= n_max; ++k)
                    for (int l = 0; l + k <= n_max; ++l)
                        g += std::conj(psi[b2][j][k][l]) * psi[b][j][k][l];
                prod *= g;
            }
            s_ps += br[b].weight * std::conj(br[b2].weight) * prod;
        }
    }

    // Ideal norm, using exact coherent overlaps of the ideal images.
    cplx s_id = 0.0;
    for (int a = 0; a < 4; ++a) {
        for (int a2 = 0; a2 < 4; ++a2) {
            if (br[a].path != br[a2].path) continue;
            cplx prod = 1.0;
            for (int j = 0; j < nb; ++j)
                prod *= coherent_overlap(ideal_amp(br[a2].path, br[a2].sign, j),
                                         ideal_amp(br[a].path, br[a].sign, j));
            s_id += std::conj(ideal_w[a2]) * ideal_w[a] * prod;
        }
    }

    // Fidelity numerator: env-traced overlap with the ideal image.
    cplx s_num = 0.0;
    for (int b = 0; b < 4; ++b) {
        for (int b2 = 0; b2 < 4; ++b2) {
            // a runs over ideal branches on path of b; a2 on path of b2.
            for (int ai = 0; ai < 2; ++ai) {
                for (int ai2 = 0; ai2 < 2; ++ai2) {
                    const int a = 2 * br[b].path + ai;
                    const int a2 = 2 * br[b2].path + ai2;
                    cplx prod = 1.0;
                    for (int j = 0; j < nb; ++j) {
                        cplx m = 0.0;
                        const cplx* Ab = &A[ai][b][std::size_t(j) * (n_max + 1)];
                        const cplx* Ab2 = &A[ai2][b2][std::size_t(j) * (n_max + 1)];
                        for (int l = 0; l <= n_max; ++l)
                            m += Ab[l] * std::conj(Ab2[l]);
                        prod *= m;
                    }
                    s_num += br[b].weight * std::conj(br[b2].weight) *
                             std::conj(ideal_w[a]) * ideal_w[a2] * prod;
                }
            }
        }
    }

    const double ps = s_ps.real();
    const double id_norm = s_id.real();
    if (!(id_norm > 1e-300))
        throw numeric_error("oracle: ideal state has zero norm");
    if (!(ps > 1e-300))
        throw numeric_error("oracle: post-selection probability vanishes");
    OracleResult r;
    r.fidelity = s_num.real() / (ps * id_norm);
    r.post_probability = ps / id_norm;
    r.trace = ps;
    return r;
}

} // namespace hqg
