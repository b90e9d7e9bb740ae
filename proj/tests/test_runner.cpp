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
#include "eml/noise.hpp"
#include "eml/runner.hpp"
#include "eml/sampler.hpp"

using namespace eml;

TEST_CASE("wilson interval basics") {
    Estimate none = wilson_estimate(0, 0);
    CHECK(none.rate == 0);

    Estimate zero = wilson_estimate(0, 100);
    CHECK(zero.rate == 0);
    CHECK(zero.ci_low == 0);
    CHECK(zero.ci_high > 0);
    CHECK(zero.ci_high < 0.05);

    Estimate all = wilson_estimate(100, 100);
    CHECK(all.rate == 1);
    CHECK(all.ci_high == 1);
    CHECK(all.ci_low < 1);

    Estimate half = wilson_estimate(50, 100);
    CHECK(half.ci_low < half.rate);
    CHECK(half.rate < half.ci_high);
    CHECK(half.rate == doctest::Approx(0.5));
}

TEST_CASE("noiseless run accepts everything") {
    NoiseParams quiet;
    RunResult res = run_protocol(build_hook_injection({3, 2}), quiet, ErasurePlan::none(),
                                 {}, 200, 7, "quiet");
    CHECK(res.acceptance.rate == 1);
    CHECK(res.logical.rate == 0);
    CHECK(res.logical.n == res.acceptance.k);
    CHECK(res.volume_defined);
    CHECK(res.volume == doctest::Approx(17.0 * 2.0)); // Q_3 = 17, r = 2, AR = 1
    CHECK(res.scenario == "quiet");
}

TEST_CASE("volume formula arithmetic") {
    // Q = 17, r = 2, AR = 0.85 gives exactly 40 volume units.
    CHECK(17.0 * 2.0 / 0.85 == doctest::Approx(40.0));
}

TEST_CASE("noisy run post-selects and stays consistent") {
    RunResult res = run_protocol(build_hook_injection({3, 2}),
                                 NoiseParams::scenario("non_erasure"), ErasurePlan::none(),
                                 {}, 4000, 11, "non_erasure");
    CHECK(res.acceptance.rate < 1);
    CHECK(res.acceptance.rate > 0.5);
    CHECK(res.logical.n == res.acceptance.k);
    CHECK(res.logical.rate < 0.1);
    // V * AR = Q * r exactly.
    CHECK(res.volume * res.acceptance.rate == doctest::Approx(17.0 * 2.0));
    CHECK(res.d1 == 3);
    CHECK(res.r == 2);
}

TEST_CASE("monte carlo acceptance matches the erasure product") {
    // Pure erasure noise with perfect detection: AR is exactly the product of
    // per-location no-erasure probabilities.
    Circuit clean = build_hook_injection({3, 2});
    NoiseParams params = NoiseParams::uniform(0.0, 1e-2);
    ErasurePlan plan = ErasurePlan::all_qubits(clean);
    auto [ar_e, ar_p] = acceptance_prediction(annotate(clean, params, plan));
    CHECK(ar_p == 1.0); // no Pauli noise at all
    const uint64_t shots = 20000;
    RunResult res = run_protocol(clean, params, plan, {}, shots, 23);
    double sigma = std::sqrt(ar_e * (1 - ar_e) / double(shots));
    CHECK(std::abs(res.acceptance.rate - ar_e) < 3 * sigma + 1e-9);
}

TEST_CASE("pauli and erasure acceptance agree at matched rates") {
    // With matched mean rates the two acceptance products nearly coincide.
    Circuit clean = build_hook_injection({3, 2});
    double x = 1e-3;
    NoiseParams pauli_only;
    pauli_only.pn1 = x / 10;
    pauli_only.pn2 = x;
    pauli_only.pn_spam = x;
    auto [unused_e, ar_p] =
        acceptance_prediction(annotate(clean, pauli_only, ErasurePlan::none()));
    (void)unused_e;
    NoiseParams erasure_only = NoiseParams::uniform(0.0, x);
    auto [ar_e, unused_p] = acceptance_prediction(
        annotate(clean, erasure_only, ErasurePlan::all_qubits(clean)));
    (void)unused_p;
    CHECK(std::abs(ar_e - ar_p) / ar_e < 0.10);
}

TEST_CASE("logical rate is insensitive to the erasure rate at fixed p") {
    // Perfect detection and threshold 1: every erasure inside the injection
    // window raises a flag, so accepted shots carry no erasures at all and
    // the logical rate is set by the Pauli noise alone. Check the structural
    // half exactly, then the rates statistically.
    Circuit clean = build_hook_injection({3, 2});
    for (double e : {1e-3, 1e-2}) {
        CAPTURE(e);
        Circuit noisy =
            annotate(clean, NoiseParams::uniform(1e-3, e), ErasurePlan::all_qubits(clean));
        FrameSampler sampler(noisy);
        ShotRecord rec;
        int64_t slots = noisy.meta_int("inj_erasure_slots", 0);
        size_t clean_shots = 0;
        for (uint64_t s = 0; s < 4000; ++s) {
            sampler.sample_shot(29, s, rec);
            int flagged = 0;
            for (int64_t i = 0; i < slots; ++i)
                flagged += rec.erasure_flags[size_t(i)];
            if (flagged == 0) {
                ++clean_shots;
                CHECK(rec.erased_locations.empty());
            }
        }
        CHECK(clean_shots > 0);
    }
    const uint64_t shots = 150000;
    RunResult low = run_protocol(clean, NoiseParams::uniform(1e-3, 1e-3),
                                 ErasurePlan::all_qubits(clean), {}, shots, 31);
    RunResult high = run_protocol(clean, NoiseParams::uniform(1e-3, 1e-2),
                                  ErasurePlan::all_qubits(clean), {}, shots, 37);
    CHECK(high.acceptance.rate < low.acceptance.rate);
    // 95% intervals overlap.
    CHECK(low.logical.ci_low <= high.logical.ci_high);
    CHECK(high.logical.ci_low <= low.logical.ci_high);
}

TEST_CASE("faulty detection with threshold two still runs") {
    Circuit clean = build_hook_injection({2, 2});
    NoiseParams params = NoiseParams::uniform(1e-3, 4e-3);
    params.e_fp = 1e-2;
    params.e_fn = 1e-2;
    PostSelectionPolicy policy;
    policy.discard_threshold = 2;
    RunResult res =
        run_protocol(clean, params, ErasurePlan::all_qubits(clean), policy, 5000, 43);
    CHECK(res.acceptance.rate > 0.5);
    CHECK(res.acceptance.rate <= 1.0);
    CHECK(res.logical.rate < 0.1);
}

TEST_CASE("per gate detection cadence runs end to end") {
    Circuit clean = build_hook_injection({2, 2});
    ErasurePlan plan = ErasurePlan::all_qubits(clean);
    plan.cadence = DetectionCadence::per_gate;
    RunResult res =
        run_protocol(clean, NoiseParams::uniform(1e-3, 1e-2), plan, {}, 5000, 47);
    CHECK(res.acceptance.rate < 1);
    CHECK(res.acceptance.rate > 0.5);
    CHECK(res.logical.rate < 0.1);
}

TEST_CASE("ansatz fit round trips synthetic data") {
    for (AnsatzForm form : {AnsatzForm::erasure, AnsatzForm::non_erasure}) {
        CAPTURE(int(form));
        double c = 0.1, x_th = 0.05, alpha = 1.0;
        std::vector<FitPoint> points;
        for (double d : {3.0, 5.0, 7.0})
            for (double x : {0.005, 0.01, 0.02}) {
                double D = form == AnsatzForm::erasure ? d : d + 1;
                double pl = c * std::pow(x / x_th, alpha * D);
                points.push_back({x, d, pl, 1.0});
            }
        FitResult fit = fit_ansatz(points, form);
        CHECK(fit.c == doctest::Approx(c).epsilon(1e-6));
        CHECK(fit.x_th == doctest::Approx(x_th).epsilon(1e-6));
        CHECK(fit.alpha == doctest::Approx(alpha).epsilon(1e-6));
        CHECK(fit.residual < 1e-9);
    }
}

TEST_CASE("ansatz fit rejects degenerate designs") {
    std::vector<FitPoint> single_d = {
        {0.01, 3, 0.01, 1}, {0.02, 3, 0.03, 1}, {0.03, 3, 0.08, 1}};
    CHECK_THROWS_AS(fit_ansatz(single_d, AnsatzForm::erasure), std::invalid_argument);
    std::vector<FitPoint> two = {{0.01, 3, 0.01, 1}, {0.02, 5, 0.03, 1}};
    CHECK_THROWS_AS(fit_ansatz(two, AnsatzForm::erasure), std::invalid_argument);
    std::vector<FitPoint> bad_pl = {
        {0.01, 3, 0.7, 1}, {0.02, 5, 0.03, 1}, {0.03, 7, 0.08, 1}};
    CHECK_THROWS_AS(fit_ansatz(bad_pl, AnsatzForm::erasure), std::invalid_argument);
}

TEST_CASE("pareto sweep flags dominance and survives bad configs") {
    std::vector<SweepConfig> configs = {{3, 2}, {0, 2}};
    std::vector<SweepRow> rows =
        pareto_sweep(configs, NoiseParams::scenario("non_erasure"), ErasurePlan::none(),
                     {}, 2000, 53, "non_erasure");
    REQUIRE(rows.size() == 2);
    CHECK(!rows[0].error.has_value());
    CHECK(rows[0].dominant); // the only successful point
    CHECK(rows[1].error.has_value());
}

TEST_CASE("csv output shape and determinism") {
    RunResult res = run_protocol(build_hook_injection({2, 2}),
                                 NoiseParams::scenario("non_erasure"), ErasurePlan::none(),
                                 {}, 500, 3, "non_erasure");
    std::string csv = results_csv({res}, false);
    CHECK(csv.substr(0, 9) == "scenario,");
    CHECK(csv == results_csv({res}, false));
    size_t lines = 0;
    for (char ch : csv)
        lines += ch == '\n';
    CHECK(lines == 2);
    std::string stamped = results_csv({res}, true);
    CHECK(stamped.substr(0, 2) == "# ");
}
