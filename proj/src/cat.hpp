#pragma once

// Coherent-state and cat-state algebra for the microwave qubit, plus an
// independent truncated Fock-space oracle for the reflected-cat fidelity.
// The oracle discretizes the pulse into frequency bins, applies the exact
// two-mode beam-splitter unitary per bin (transmission C1 to the kept mode,
// C2 to an environment mode), traces the environment, and evaluates the
// overlap with the ideally reflected cat. It shares no algebra with the
// closed-form path, which is the point.

#include "spectral.hpp"

#include <vector>

namespace hqg {

// <u|v> for single-mode coherent states.
cplx coherent_overlap(cplx u, cplx v);

// <u|v> for products of coherent states over many modes:
// exp(-|u|^2/2 - |v|^2/2 + sum conj(u_i) v_i).
cplx coherent_overlap(const std::vector<cplx>& u, const std::vector<cplx>& v);

// Normalization of (|alpha> + parity * |-alpha>) / (2 sqrt(...)):
// n_p = 1 / sqrt(2 (1 + parity * exp(-2 alpha^2))). parity is +1 or -1.
// Throws numeric_error when the odd cat degenerates (alpha = 0).
double cat_normalization(double alpha, int parity);

// Nominal-convention variant, 1 / sqrt(2 + parity * exp(-2 alpha^2)), which
// places the 2 outside the parenthesis; kept for side-by-side reporting only.
double cat_normalization_nominal(double alpha, int parity);

// Coefficients of a coherent state |alpha> in the number basis up to n_max.
// Throws numeric_error if the truncated tail exceeds 1e-12 of the norm.
std::vector<cplx> coherent_fock(cplx alpha, int n_max);

// One frequency bin of the discretized problem: the input amplitude carried
// by the bin (mode shape sample times sqrt of the bin weight) and the C1/C2
// values there, per channel.
struct OracleBin {
    cplx shape;        // input amplitude fraction, sum |shape|^2 = 1
    cplx c1_occupied;  // kept transfer when the control qubit occupies the cavity path
    cplx c2_occupied;
    cplx c1_empty;
    cplx c2_empty;
};

struct OracleProblem {
    // Control-qubit amplitudes on the occupied / empty optical paths and the
    // cat coefficients (even, odd) of the microwave qubit.
    cplx occupied_amp;
    cplx empty_amp;
    cplx even_amp;
    cplx odd_amp;
    double alpha = 0.0;
    std::vector<OracleBin> bins;
    // Amplitude transmitted on each optical path (storage survival); the kept
    // optical mode shapes are assumed identical between paths here, which is
    // the regime the closed form is compared in.
    double optical_kept_occupied = 1.0;
    double optical_kept_empty = 1.0;
};

struct OracleResult {
    double fidelity;        // conditional on post-selection
    double post_probability;
    double trace;           // diagnostic: trace of the post-selected state
};

// Exact (up to truncation) fidelity of the reflected state against the ideal
// gate image, conditioned on detecting the heralding photon (the cat is never
// post-selected). n_max is the Fock cutoff per bin (tail-checked against
// alpha).
OracleResult fock_oracle_fidelity(const OracleProblem& p, int n_max = 40);

} // namespace hqg
