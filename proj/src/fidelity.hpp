#pragma once

// End-to-end gate fidelity engine. The gate entangles an optical polarization
// qubit (stored and retrieved through one of two ensemble channels) with a
// microwave cat-state qubit (reflected off the emitter cavity, whose response
// depends on whether the left-polarization channel deposited the excitation).
//
// The joint input is expanded into four branches
//   (path, branch sign) in {occupied, empty} x {+alpha, -alpha},
// each of which evolves into a product of (i) a single-photon optical mode
// filtered by its storage channel, (ii) a multimode coherent state in the
// cavity output, and (iii) coherent environment modes carrying the losses.
// Fidelity against the ideal gate image and the heralding probability are
// Gram forms over these branches; environments enter through their pairwise
// overlaps (they decohere branches without being post-selected).
//
// Ideal gate convention: the occupied path reflects the cat unchanged
// (resonant coupled cavity, C1(0) -> +1), the empty path flips its coherent
// amplitude (bare cavity pi mirror, C1(0) -> -1). In the logical basis this
// is a CZ on (right polarization, odd parity).

#include "cat.hpp"
#include "cqed.hpp"
#include "eit.hpp"
#include "spectral.hpp"

#include <array>
#include <string>
#include <utility>
#include <vector>

namespace hqg {

enum class OpticalPol { left, right }; // left = occupied cavity path
enum class MwEngine { linear, mean_field };

// Joint separable input (c_left |L> + c_right |R>) (x) (c_even |cat+> +
// c_odd |cat->) with cat size alpha.
struct GateInput {
    cplx c_left{1.0, 0.0};
    cplx c_right{0.0, 0.0};
    cplx c_even{1.0, 0.0};
    cplx c_odd{0.0, 0.0};
    double alpha = 0.0;
};

// Coefficients of the coherent-branch expansion: a_* multiply the occupied
// path (|L, +alpha>, |L, -alpha>), b_* the empty path. norm is the Gram norm
// of the decomposition, 1 for a normalized input.
struct GateOutcome {
    cplx a_plus, a_minus;
    cplx b_plus, b_minus;
    double norm = 0.0;
};

// a_pm = c_left (c_even n_e +- c_odd n_o), b_pm likewise with c_right, where
// n_e/n_o are the cat normalizations. Throws numeric_error when an odd-cat
// component is requested at alpha = 0.
GateOutcome cz_branch_coefficients(const GateInput& in);

// Static description of the two processing stages.
struct GateParams {
    double optical_duration = 0.5e-6; // s
    double optical_delay = 0.0;       // s
    EitChannelParams storage_left;    // occupied-path ensemble
    EitChannelParams storage_right;   // empty-path ensemble
    double mw_duration = 3.0e-6;      // s
    CqedParams cavity;                // `occupied` is overridden per path
    bool flat_storage = false;        // replace the storage transfer by identity
    bool flat_microwave = false;      // replace C1 by its ideal +-1, C2 by 0
    bool balance = true;              // attenuate the better optical channel
    MwEngine engine = MwEngine::linear;
    double mf_rel_tol = 1e-9;
    int mf_samples = 8193;            // time samples for mean-field vectors
    int grid_points = 2049;
    double span_factor = 16.0;
};

// Sampled branch data for one path (0 = occupied, 1 = empty). All vectors
// carry sqrt(quadrature weight) folded in, so plain complex dot products are
// the physical overlaps. Microwave vectors are for the +alpha branch; the
// -alpha branch is their exact negation in both engines.
struct PathFields {
    double kept_raw = 1.0;      // optical amplitude survival, pre-balance
    double balance_scale = 1.0; // applied attenuation
    cplx optical_overlap{0.0, 0.0}; // <f_in, T f_in>, pre-balance
    std::vector<cplx> optical_out;  // balanced kept optical mode
    std::vector<std::vector<cplx>> mw_channels; // [output, losses...]
    std::vector<cplx> mw_ideal;     // ideal_sign * alpha * input mode
    int ideal_sign = 1;             // +1 occupied, -1 empty
    cplx lambda{0.0, 0.0};          // integral |f|^2 conj(C1)
    double kept_mw = 1.0;           // P = integral |f|^2 |C1|^2
    double lost_mw = 0.0;           // Q, total loss-channel weight
    double xi = 1.0;                // exp(-2 alpha^2 Q)
};

struct GateFields {
    double alpha = 0.0;
    MwEngine engine = MwEngine::linear;
    std::array<PathFields, 2> path;
    std::vector<cplx> optical_ideal; // weighted input optical mode
    std::vector<std::string> convention_flags;
    std::vector<std::string> warnings;
};

// Runs both storage channels and both cavity responses for the given cat
// size and packages the weighted branch vectors.
GateFields assemble_fields(const GateParams& p, double alpha);

struct FidelityReport {
    double fidelity = 0.0;
    double f_opt = 0.0;
    double f_mw = 0.0;
    double efficiency = 0.0; // raw storage survival probability
    cplx lambda{0.0, 0.0};
    double xi = 1.0;
    double post_selection_probability = 0.0;
    std::vector<std::string> convention_flags;
};

// Closed-form microwave-side fidelity for a definite path and cat parity,
// exact for the linear engine:
//   F = (1 + xi) e^{-a^2 (1 + P)} [cosh(2 a^2 Re W) + p cos(2 a^2 Im W)]
//       / [(1 + p e^{-2 a^2}) (1 + p e^{-2 a^2 (P + Q)})]
// with W = ideal_sign * conj(Lambda) and xi = e^{-2 a^2 Q}. The overlap
// exponent carries the ideal and kept-output norms only; the lost weight Q
// enters through the environment overlap xi and the heralding denominator.
double mw_fidelity_closed_form(int parity, double alpha, cplx lambda,
                               double kept_mw, double lost_mw, int ideal_sign);

// Definite-polarization, definite-parity row. fidelity comes from the Gram
// evaluator; f_opt is the normalized storage overlap squared and f_mw the
// microwave factor (closed form for the linear engine, optical-stripped Gram
// form for the mean-field engine); fidelity = f_opt * f_mw holds exactly for
// these single-path inputs.
FidelityReport truth_table_entry(OpticalPol pol, int parity, const GateFields& f);

// General separable input. fidelity and the heralding probability are the
// full Gram forms; f_opt, f_mw, efficiency, lambda and xi are
// population-weighted per-path diagnostics (the per-branch truth lives in
// fidelity itself).
FidelityReport separable_input_fidelity(const GateInput& in, const GateFields& f);

// Qubit rotation exp(-i angle sigma_axis / 2) on an amplitude pair; axis is
// 'x', 'y' or 'z' (case-insensitive).
std::pair<cplx, cplx> bloch_rotation(const std::pair<cplx, cplx>& state,
                                     char axis, double angle);

// Mean gate fidelity over the 36 pairs of cardinal Bloch states (six per
// qubit, generated from the basis state by half-turn and quarter-turn
// rotations).
struct AverageFidelity {
    double mean = 0.0;
    double min = 0.0;
    double max = 0.0;
    struct Cell {
        int optical_index; // 0..5: +Z -Z +X -X +Y -Y
        int cat_index;     // same order
        double fidelity;
    };
    std::vector<Cell> cells;
};
AverageFidelity average_fidelity(const GateFields& f);

// The six cardinal amplitude pairs in the order used by average_fidelity.
std::array<std::pair<cplx, cplx>, 6> cardinal_states();

// Gram-form evaluation used by the report functions; exposed for tests.
struct GramResult {
    double fidelity = 0.0;
    double post_probability = 0.0;
    double ideal_norm = 0.0; // squared norm of the ideal image (1 for unit input)
};
GramResult evaluate_gram(const GateFields& f, const GateOutcome& c,
                         bool include_optical);

// Signed overlap of the post-selected output with the do-nothing reference
// (the input image with no conditional flip), normalized by both norms. A
// perfect gate gives +1 on rows the flip leaves alone and -1 on the flipped
// row, so the conditional-phase pattern over (R even, R odd, L even, L odd)
// reads (+, -, +, +).
double cz_sign_amplitude(const GateFields& f, const GateOutcome& c);

} // namespace hqg
