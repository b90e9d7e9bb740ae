// Copyright 2026 The eml Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "eml/builders.hpp"
#include "eml/dem.hpp"
#include "eml/faults.hpp"
#include "eml/noise.hpp"
#include "eml/sampler.hpp"

using namespace eml;

namespace {

Circuit noisy_hook(uint32_t d1, uint32_t rounds = 2) {
    return annotate(build_hook_injection({d1, rounds}), NoiseParams::scenario("non_erasure"),
                    ErasurePlan::none());
}

} // namespace

TEST_CASE("hook injection has the 7/30 undetected channel") {
    for (uint32_t d1 : {2u, 3u, 4u}) {
        CAPTURE(d1);
        FaultEnumeration e = enumerate_faults(noisy_hook(d1));
        FaultCoefficients co = coefficients(e);
        // One undetected single-qubit mechanism (the rotation ancilla), three
        // two-qubit mechanisms in the neighbouring CNOTs, no SPAM leakage;
        // independent of d1. The mechanism-level rate reproduces the paper's
        // scalar 1/3 p1 + 3/15 p2 = 7/30 p exactly.
        CHECK(co.n_a == 1);
        CHECK(co.n_b == 3);
        CHECK(co.n_c == 0);
        CHECK(co.effective_factor == doctest::Approx(7.0 / 30.0).epsilon(1e-12));
        // Term level: the two-qubit mechanisms overlap, so 4 of the 15-term
        // shares contribute; this is the rate Monte Carlo sampling sees.
        CHECK(co.n_a_terms == 1);
        CHECK(co.n_b_terms == 4);
        CHECK(co.n_c_terms == 0);
        CHECK(co.term_factor == doctest::Approx(9.0 / 30.0).epsilon(1e-12));
        CHECK(co.channel[1][1] + co.channel[1][3] == 3);
        CHECK(co.channel[0][2] == 0);
    }
}

TEST_CASE("hook channel split by residual coset") {
    // Enumerated channel for the hook circuit. The paper's Appendix B.2
    // listing (2/15 Y_L + 1/15 Z_L) matches neither granularity exactly;
    // the scalar 7/30 is what the mechanism count reproduces, so the
    // channel split is recorded here as a documented cross-check.
    FaultCoefficients co = coefficients(enumerate_faults(noisy_hook(3)));
    CHECK(co.channel[1][1] == 1); // X_L mechanisms
    CHECK(co.channel[1][2] == 1); // Y_L, stabilizes |S>
    CHECK(co.channel[1][3] == 2); // Z_L
    CHECK(co.term_channel[1][1] == 1);
    CHECK(co.term_channel[1][2] == 3);
    CHECK(co.term_channel[1][3] == 3);
}

TEST_CASE("lao-criger injection has the 46/30 undetected channel") {
    Circuit noisy = annotate(build_lao_criger_injection({3, 2}),
                             NoiseParams::scenario("non_erasure"), ErasurePlan::none());
    FaultCoefficients co = coefficients(enumerate_faults(noisy));
    // The paper's Appendix B.1 channel counts fault locations: 9 two-qubit
    // errors split 5/15 X_L + 2/15 Y_L + 2/15 Z_L. That is the term-level
    // view, and it reproduces p_IN + 2/3 p1 + 7/15 p2 = 46/30 p exactly.
    CHECK(co.n_a_terms == 2);
    CHECK(co.n_b_terms == 7);
    CHECK(co.n_c_terms == 1);
    CHECK(co.term_channel[1][1] == 5); // X_L
    CHECK(co.term_channel[1][2] == 2); // Y_L share of p2
    CHECK(co.term_channel[1][3] == 2); // Z_L
    CHECK(co.term_factor == doctest::Approx(46.0 / 30.0).epsilon(1e-12));
    // Several of those locations propagate to the same physical fault, so
    // the deduplicated mechanism count is smaller.
    CHECK(co.n_a == 2);
    CHECK(co.n_b == 3);
    CHECK(co.n_c == 1);
    CHECK(co.effective_factor == doctest::Approx(38.0 / 30.0).epsilon(1e-12));
}

TEST_CASE("spam faults in hook injection are always caught") {
    // No SPAM flip ever reaches undetected_logical, at any tested d1.
    for (uint32_t d1 : {2u, 3u, 4u}) {
        CAPTURE(d1);
        FaultEnumeration e = enumerate_faults(noisy_hook(d1));
        for (const Fault& f : e.faults)
            if (f.source == Op::X_ERROR || f.source == Op::Z_ERROR)
                CHECK(f.cls != FaultClass::undetected_logical);
    }
    // Full detection (every SPAM unit at fraction 1.0) holds for d1=2, the
    // layout the paper's detection histogram uses. At d1=3 the far corner
    // data qubit touches exactly one Z plaquette, nondeterministic in round
    // 1, so its init flip is silent but gauge-trivial; it reappears detected
    // at d1=4.
    FaultEnumeration e = enumerate_faults(noisy_hook(2));
    FaultReport report = detection_histogram(e, noisy_hook(2));
    size_t spam_units = 0;
    for (size_t b = 0; b < 10; ++b)
        CHECK(report.histogram_spam[b] == 0);
    for (uint32_t n : report.histogram_spam)
        spam_units += n;
    CHECK(spam_units > 0);
    CHECK(report.histogram_spam[10] == spam_units);
}

TEST_CASE("fault count matches the dem term count") {
    Circuit clean = build_hook_injection({3, 2});
    Circuit noisy =
        annotate(clean, NoiseParams::uniform(1e-3, 1e-2), ErasurePlan::all_qubits(clean));
    FaultEnumeration e = enumerate_faults(noisy);
    DetectorErrorModel dem = build_dem(noisy);
    CHECK(e.faults.size() == dem.num_terms);
}

TEST_CASE("hybrid erasure set covers every linear mechanism") {
    for (uint32_t d1 : {2u, 3u, 5u}) {
        CAPTURE(d1);
        Circuit clean = build_hook_injection({d1, 2});
        std::vector<uint32_t> cover = hybrid_erasure_set(clean);
        ErasurePlan plan;
        plan.erasure_qubits.insert(cover.begin(), cover.end());
        // Perfect erasure qubits (zero residual rates) on the cover set,
        // noisy gates elsewhere: nothing undetected survives.
        NoiseParams params;
        params.pn1 = 1e-4;
        params.pn2 = 1e-3;
        params.pn_spam = 1e-3;
        FaultCoefficients co = coefficients(enumerate_faults(annotate(clean, params, plan)));
        CHECK(co.n_a == 0);
        CHECK(co.n_b == 0);
        CHECK(co.n_c == 0);
    }
}

TEST_CASE("erasure faults carry their own source tag") {
    Circuit clean = build_hook_injection({2, 2});
    Circuit noisy =
        annotate(clean, NoiseParams::uniform(0.0, 1e-2), ErasurePlan::all_qubits(clean));
    FaultEnumeration e = enumerate_faults(noisy);
    size_t erase_terms = 0;
    for (const Fault& f : e.faults) {
        CHECK((f.source == Op::ERASE1 || f.source == Op::ERASE2));
        erase_terms += 1;
    }
    CHECK(erase_terms > 0);
    // Erasure terms do not enter the Pauli coefficient count.
    FaultCoefficients co = coefficients(e);
    CHECK(co.n_a + co.n_b + co.n_c == 0);
}

TEST_CASE("predicted acceptance matches sampled acceptance") {
    Circuit noisy = noisy_hook(3);
    FaultEnumeration e = enumerate_faults(noisy);
    FaultReport report = detection_histogram(e, noisy);
    CHECK(report.ar_p < 1.0);
    CHECK(report.ar_p > 0.5);

    FrameSampler sampler(noisy);
    ShotRecord rec;
    const uint64_t shots = 20000;
    uint64_t accepted = 0;
    for (uint64_t s = 0; s < shots; ++s) {
        sampler.sample_shot(41, s, rec);
        bool fired = false;
        for (int64_t d = 0; d < e.inj_detectors && !fired; ++d)
            fired = rec.detectors[size_t(d)];
        accepted += !fired;
    }
    double mc = double(accepted) / double(shots);
    CHECK(std::abs(mc - report.ar_p) < 0.05 * report.ar_p);
    CHECK(std::abs(mc - report.ar_p) < 0.015);
}

TEST_CASE("second order pairs exist and are rare") {
    FaultEnumeration e = enumerate_faults(noisy_hook(2));
    PairSummary summary = second_order_undetected(e);
    size_t pauli = 0;
    for (const Fault& f : e.faults)
        pauli += f.source == Op::DEPOL1 || f.source == Op::DEPOL2 ||
                 f.source == Op::X_ERROR || f.source == Op::Z_ERROR;
    CHECK(summary.pairs_examined == uint64_t(pauli) * (pauli - 1) / 2);
    CHECK(summary.undetected_pairs > 0);
    FaultCoefficients co = coefficients(e);
    CHECK(summary.rate < co.effective_factor * NoiseParams::scenario("non_erasure").pn2);
}

TEST_CASE("undetected faults have nontrivial logical action") {
    FaultEnumeration e = enumerate_faults(noisy_hook(3));
    bool saw_undetected = false;
    for (const Fault& f : e.faults) {
        if (f.cls == FaultClass::undetected_logical) {
            saw_undetected = true;
            CHECK(f.logical != 0);
        }
    }
    CHECK(saw_undetected);
}

TEST_CASE("enumeration requires logical metadata") {
    Circuit c;
    c.qubits.push_back({0, 0, 0, QubitRole::data});
    c.instructions.push_back({Op::RESET_Z, {0}});
    c.instructions.push_back({Op::X_ERROR, {0}, {}, 0.1});
    c.instructions.push_back({Op::MEASURE_Z, {0}});
    c.instructions.push_back({Op::DETECTOR, {}, {-1}});
    CHECK_THROWS_AS(enumerate_faults(c), std::invalid_argument);
}
