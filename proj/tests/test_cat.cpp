#include <doctest.h>

#include "cat.hpp"
#include "errors.hpp"
#include "fidelity.hpp"

#include <cmath>
#include <random>
#include <vector>

using namespace hqg;

TEST_CASE("cat normalization") {
    // Even cat at alpha = 0 is the vacuum written twice: n = 1/2.
    CHECK(cat_normalization(0.0, +1) == doctest::Approx(0.5));
    // Odd cat degenerates at alpha = 0.
    CHECK_THROWS_AS(cat_normalization(0.0, -1), numeric_error);
    CHECK_THROWS_AS(cat_normalization(1.0, 0), config_error);

    double a = std::sqrt(2.0);
    double ov = std::exp(-2.0 * a * a);
    CHECK(cat_normalization(a, +1) ==
          doctest::Approx(1.0 / std::sqrt(2.0 * (1.0 + ov))).epsilon(1e-14));
    CHECK(cat_normalization(a, -1) ==
          doctest::Approx(1.0 / std::sqrt(2.0 * (1.0 - ov))).epsilon(1e-14));

    // Nominal-convention variant differs in the placement of the 2.
    CHECK(cat_normalization_nominal(a, +1) ==
          doctest::Approx(1.0 / std::sqrt(2.0 + ov)).epsilon(1e-14));

    // Both conventions agree in the large-cat limit.
    CHECK(cat_normalization(3.0, -1) ==
          doctest::Approx(cat_normalization_nominal(3.0, -1)).epsilon(1e-7));
}

TEST_CASE("normalized cats have unit norm under the coherent algebra") {
    for (double a : {0.3, 1.0, std::sqrt(2.0), 2.0}) {
        for (int parity : {+1, -1}) {
            double n = cat_normalization(a, parity);
            // || n (|a> + p |-a>) ||^2 = n^2 (2 + 2 p e^{-2a^2}).
            double norm_sq =
                n * n *
                (2.0 + 2.0 * parity * coherent_overlap(cplx(a, 0.0), cplx(-a, 0.0)).real());
            CHECK(norm_sq == doctest::Approx(1.0).epsilon(1e-13));
        }
    }
}

TEST_CASE("coherent overlaps") {
    cplx u(0.7, -0.3), v(-0.2, 1.1);
    CHECK(std::abs(coherent_overlap(u, u) - cplx(1.0, 0.0)) < 1e-14);
    CHECK(std::abs(std::abs(coherent_overlap(u, v)) -
                   std::exp(-0.5 * std::norm(u - v))) < 1e-14);

    // Product structure over modes.
    std::vector<cplx> a{u, v}, b{v, u};
    cplx prod = coherent_overlap(u, v) * coherent_overlap(v, u);
    CHECK(std::abs(coherent_overlap(a, b) - prod) < 1e-14);

    std::vector<cplx> c{u};
    CHECK_THROWS_AS(coherent_overlap(a, c), config_error);
}

TEST_CASE("coherent fock coefficients") {
    cplx a(0.8, 0.5);
    std::vector<cplx> c = coherent_fock(a, 30);
    REQUIRE(c.size() == 31);
    // Direct formula at a few n.
    double pref = std::exp(-0.5 * std::norm(a));
    CHECK(std::abs(c[0] - cplx(pref, 0.0)) < 1e-14);
    CHECK(std::abs(c[3] - pref * a * a * a / std::sqrt(6.0)) < 1e-14);
    double total = 0.0;
    for (const cplx& x : c) total += std::norm(x);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));

    // Number statistics recover |a|^2.
    double nbar = 0.0;
    for (int n = 0; n < int(c.size()); ++n) nbar += n * std::norm(c[n]);
    CHECK(nbar == doctest::Approx(std::norm(a)).epsilon(1e-10));

    CHECK_THROWS_AS(coherent_fock(cplx(2.0, 0.0), 5), numeric_error);
    CHECK_THROWS_AS(coherent_fock(a, -1), config_error);
}

namespace {

OracleProblem perfect_mirror_problem(double alpha) {
    OracleProblem p;
    p.alpha = alpha;
    p.occupied_amp = 1.0 / std::sqrt(2.0);
    p.empty_amp = 1.0 / std::sqrt(2.0);
    p.even_amp = 0.6;
    p.odd_amp = 0.8;
    p.bins.resize(3);
    double w[3] = {0.5, 0.3, 0.2};
    for (int j = 0; j < 3; ++j) {
        p.bins[j].shape = std::sqrt(w[j]);
        p.bins[j].c1_occupied = cplx(1.0, 0.0);
        p.bins[j].c1_empty = cplx(-1.0, 0.0);
        p.bins[j].c2_occupied = p.bins[j].c2_empty = cplx(0.0, 0.0);
    }
    return p;
}

} // namespace

TEST_CASE("oracle gives unit fidelity for the perfect mirror") {
    OracleProblem p = perfect_mirror_problem(1.2);
    OracleResult r = fock_oracle_fidelity(p, 32);
    CHECK(r.fidelity == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(r.post_probability == doctest::Approx(1.0).epsilon(1e-10));

    // Mirror with the wrong sign on the occupied path: the even/odd cat mix
    // is mapped to its parity mirror and the fidelity drops.
    p.bins[0].c1_occupied = p.bins[1].c1_occupied = p.bins[2].c1_occupied =
        cplx(-1.0, 0.0);
    OracleResult bad = fock_oracle_fidelity(p, 32);
    CHECK(bad.fidelity < 0.7);
}

TEST_CASE("oracle input validation") {
    OracleProblem p = perfect_mirror_problem(1.0);
    p.bins.clear();
    CHECK_THROWS_AS(fock_oracle_fidelity(p, 20), config_error);

    p = perfect_mirror_problem(1.0);
    p.bins.resize(65, p.bins[0]);
    CHECK_THROWS_AS(fock_oracle_fidelity(p, 20), config_error);

    p = perfect_mirror_problem(1.0);
    p.bins[0].shape *= 1.01;
    CHECK_THROWS_AS(fock_oracle_fidelity(p, 20), config_error);

    p = perfect_mirror_problem(1.0);
    p.alpha = -1.0;
    CHECK_THROWS_AS(fock_oracle_fidelity(p, 20), config_error);
}

TEST_CASE("oracle agrees with the closed-form single-path cat fidelity") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> u(0.0, 1.0);

    for (int trial = 0; trial < 24; ++trial) {
        int nb = 1 + int(u(rng) * 5.0);
        double alpha = 0.4 + 1.4 * u(rng);
        int parity = trial % 2 == 0 ? +1 : -1;
        bool occupied = trial % 4 < 2;

        OracleProblem p;
        p.alpha = alpha;
        p.occupied_amp = occupied ? 1.0 : 0.0;
        p.empty_amp = occupied ? 0.0 : 1.0;
        double ne = cat_normalization(alpha, +1);
        double no = cat_normalization(alpha, -1);
        p.even_amp = parity == +1 ? 0.5 / ne : 0.0;
        p.odd_amp = parity == -1 ? 0.5 / no : 0.0;
        p.bins.resize(nb);

        std::vector<double> w(nb);
        double wsum = 0.0;
        for (double& x : w) {
            x = 0.1 + u(rng);
            wsum += x;
        }
        cplx lambda(0.0, 0.0);
        double kept = 0.0;
        for (int j = 0; j < nb; ++j) {
            // Random unitary transfer pair: |c1|^2 + |c2|^2 = 1.
            double m1 = u(rng);
            double ph1 = 2.0 * pi * u(rng), ph2 = 2.0 * pi * u(rng);
            cplx c1 = std::sqrt(m1) * std::exp(cplx(0.0, ph1));
            cplx c2 = std::sqrt(1.0 - m1) * std::exp(cplx(0.0, ph2));
            p.bins[j].shape = std::sqrt(w[j] / wsum);
            if (occupied) {
                p.bins[j].c1_occupied = c1;
                p.bins[j].c2_occupied = c2;
                p.bins[j].c1_empty = cplx(1.0, 0.0);
                p.bins[j].c2_empty = cplx(0.0, 0.0);
            } else {
                p.bins[j].c1_empty = c1;
                p.bins[j].c2_empty = c2;
                p.bins[j].c1_occupied = cplx(1.0, 0.0);
                p.bins[j].c2_occupied = cplx(0.0, 0.0);
            }
            double ww = std::norm(p.bins[j].shape);
            lambda += ww * std::conj(c1);
            kept += ww * std::norm(c1);
        }

        OracleResult r = fock_oracle_fidelity(p, 40);
        int sign = occupied ? +1 : -1;
        double closed = mw_fidelity_closed_form(parity, alpha, lambda, kept,
                                                1.0 - kept, sign);
        CHECK(std::abs(r.fidelity - closed) < 1e-10);
    }
}
