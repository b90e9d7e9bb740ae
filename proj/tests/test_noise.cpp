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
#include <limits>

#include "eml/builders.hpp"
#include "eml/noise.hpp"

using namespace eml;

namespace {

std::vector<Instruction> without_checks(const Circuit& c) {
    std::vector<Instruction> out;
    for (const Instruction& inst : c.instructions)
        if (inst.op != Op::ERASURE_CHECK)
            out.push_back(inst);
    return out;
}

size_t count_op(const Circuit& c, Op op) {
    size_t n = 0;
    for (const Instruction& inst : c.instructions)
        n += inst.op == op;
    return n;
}

// CX pairs in the noisy window, i.e. before the noiseless tail round.
size_t noisy_cx_pairs(const Circuit& c) {
    int64_t tail = c.meta_int("noiseless_from_round", std::numeric_limits<int64_t>::max());
    size_t pairs = 0;
    int64_t round = 0;
    for (const Instruction& inst : c.instructions) {
        if (inst.op == Op::TICK)
            ++round;
        else if (inst.op == Op::CX && round < tail)
            pairs += inst.targets.size() / 2;
    }
    return pairs;
}

size_t noisy_spam(const Circuit& c) {
    int64_t tail = c.meta_int("noiseless_from_round", std::numeric_limits<int64_t>::max());
    size_t n = 0;
    int64_t round = 0;
    for (const Instruction& inst : c.instructions) {
        if (inst.op == Op::TICK)
            ++round;
        else if ((is_reset(inst.op) || is_measurement(inst.op)) && round < tail)
            n += inst.targets.size();
    }
    return n;
}

} // namespace

TEST_CASE("zero rates annotate to the same instruction stream") {
    Circuit clean = build_hook_injection({2, 2});
    Circuit noisy = annotate(clean, NoiseParams{}, ErasurePlan::none());
    CHECK(noisy.instructions == clean.instructions);
    CHECK(noisy.meta_int("annotated", 0) == 1);
    CHECK(noisy.meta_int("inj_erasure_slots", -1) == 0);
}

TEST_CASE("scenario registry") {
    NoiseParams ne = NoiseParams::scenario("non_erasure");
    CHECK(ne.p2 == doctest::Approx(1e-3));
    CHECK(ne.p1 == doctest::Approx(1e-4));
    CHECK(ne.e2 == 0.0);
    NoiseParams np = NoiseParams::scenario("near_perfect");
    CHECK(np.p2 == doctest::Approx(1e-4));
    CHECK(np.e2 == doctest::Approx(1e-3));
    CHECK(NoiseParams::scenario("imperfect_4e3").e2 == doctest::Approx(4e-3));
    CHECK(NoiseParams::scenario("imperfect_1e2").e2 == doctest::Approx(1e-2));
    CHECK_THROWS_AS(NoiseParams::scenario("bogus"), std::invalid_argument);
}

TEST_CASE("every CX gets a two-qubit depolarizing location") {
    Circuit clean = build_hook_injection({3, 2});
    Circuit noisy = annotate(clean, NoiseParams::scenario("non_erasure"), ErasurePlan::none());
    CHECK(count_op(noisy, Op::DEPOL2) == noisy_cx_pairs(clean));
    CHECK(count_op(noisy, Op::ERASE2) == 0);
    CHECK(count_op(noisy, Op::ERASURE_CHECK) == 0);
    // One flip location per reset and per measurement in the noisy window.
    size_t flip_targets = 0;
    for (const Instruction& inst : noisy.instructions)
        if (inst.op == Op::X_ERROR || inst.op == Op::Z_ERROR)
            flip_targets += inst.targets.size();
    CHECK(flip_targets == noisy_spam(clean));
}

TEST_CASE("all-qubit erasure plan erases every CX and checks every round") {
    Circuit clean = build_hook_injection({2, 2});
    Circuit noisy = annotate(clean, NoiseParams::uniform(1e-4, 1e-2),
                             ErasurePlan::all_qubits(clean));
    CHECK(count_op(noisy, Op::ERASE2) == noisy_cx_pairs(clean));
    // One check per measured round: r injection rounds plus the noiseless
    // tail is outside the window.
    CHECK(count_op(noisy, Op::ERASURE_CHECK) == size_t(clean.meta_int("inj_rounds", 0)));
    CHECK(noisy.meta_int("inj_erasure_slots", 0) > 0);
    CHECK(noisy.meta_int("inj_end_instr", -1) > 0);
    CHECK(noisy.instructions[noisy.meta_int("inj_end_instr", -1)].op == Op::TICK);
}

TEST_CASE("hybrid plan erases only gates touching the set") {
    Circuit clean = build_hook_injection({3, 2});
    std::vector<uint32_t> hybrid = hybrid_erasure_set(clean);
    ErasurePlan plan;
    plan.erasure_qubits.insert(hybrid.begin(), hybrid.end());
    Circuit noisy = annotate(clean, NoiseParams::uniform(1e-4, 1e-2), plan);
    for (const Instruction& inst : noisy.instructions) {
        if (inst.op == Op::ERASE2) {
            CHECK(plan.erasure_qubits.count(inst.targets[0]) == 1);
            CHECK(plan.erasure_qubits.count(inst.targets[1]) == 1);
        }
        if (inst.op == Op::ERASE1)
            for (uint32_t q : inst.targets)
                CHECK(plan.erasure_qubits.count(q) == 1);
    }
    // Mixed pairs carry a one-sided split at rate 1 - sqrt(1 - e2).
    bool saw_split = false;
    for (const Instruction& inst : noisy.instructions)
        if (inst.op == Op::ERASE1 && inst.arg0 == doctest::Approx(two_qubit_erasure_split(1e-2)))
            saw_split = true;
    CHECK(saw_split);
}

TEST_CASE("annotation refuses already-annotated input") {
    Circuit noisy = annotate(build_hook_injection({2, 1}), NoiseParams::scenario("non_erasure"),
                             ErasurePlan::none());
    CHECK_THROWS_AS(annotate(noisy, NoiseParams::scenario("non_erasure"), ErasurePlan::none()),
                    std::invalid_argument);
}

TEST_CASE("two-qubit erasure split identity") {
    double s = two_qubit_erasure_split(0.19);
    CHECK(s == doctest::Approx(0.1));
    CHECK(1.0 - (1.0 - s) * (1.0 - s) == doctest::Approx(0.19));
}

TEST_CASE("idling-adjusted two-qubit rate") {
    NoiseParams base = NoiseParams::uniform(1e-3, 1e-2);
    NoiseParams adj = idling_adjusted_params(base, IdlingModel{});
    CHECK(adj.pn2 == doctest::Approx(5.5e-3));
    CHECK(adj.p2 == doctest::Approx(base.p2));
}

TEST_CASE("end_only cadence emits a single check") {
    Circuit clean = build_hook_injection({2, 3});
    ErasurePlan plan = ErasurePlan::all_qubits(clean);
    plan.cadence = DetectionCadence::end_only;
    Circuit noisy = annotate(clean, NoiseParams::uniform(1e-4, 1e-2), plan);
    CHECK(count_op(noisy, Op::ERASURE_CHECK) == 1);
}

TEST_CASE("per_gate cadence emits no check instructions") {
    Circuit clean = build_hook_injection({2, 2});
    ErasurePlan plan = ErasurePlan::all_qubits(clean);
    plan.cadence = DetectionCadence::per_gate;
    Circuit noisy = annotate(clean, NoiseParams::uniform(1e-4, 1e-2), plan);
    CHECK(count_op(noisy, Op::ERASURE_CHECK) == 0);
    CHECK(count_op(noisy, Op::ERASE2) > 0);
}

TEST_CASE("e=0 all-qubit plan matches the plain stream up to checks") {
    Circuit clean = build_hook_injection({2, 2});
    NoiseParams p = NoiseParams::uniform(1e-3, 0.0);
    Circuit a = annotate(clean, p, ErasurePlan::none());
    Circuit b = annotate(clean, p, ErasurePlan::all_qubits(clean));
    CHECK(a.instructions == without_checks(b));
}

TEST_CASE("noise stops at the noiseless tail round") {
    Circuit clean = build_hook_injection({3, 2});
    int64_t tail = clean.meta_int("noiseless_from_round", -1);
    REQUIRE(tail > 0);
    Circuit noisy = annotate(clean, NoiseParams::uniform(0.5, 0.0), ErasurePlan::none());
    int64_t round = 0;
    for (const Instruction& inst : noisy.instructions) {
        if (inst.op == Op::TICK)
            ++round;
        if (round >= tail)
            CHECK(!is_noise(inst.op));
    }
}

TEST_CASE("location counts survive annotation") {
    Circuit clean = build_lao_criger_injection({3, 2});
    Circuit noisy = annotate(clean, NoiseParams::uniform(1e-3, 1e-2),
                             ErasurePlan::all_qubits(clean));
    LocationCounts a = count_locations(clean);
    LocationCounts b = count_locations(noisy);
    CHECK(a.x1 == b.x1);
    CHECK(a.x2 == b.x2);
    CHECK(a.x_spam == b.x_spam);
    CHECK(a.idle == b.idle);
}
