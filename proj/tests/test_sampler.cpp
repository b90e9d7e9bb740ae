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
#include "eml/sampler.hpp"
#include "eml/tableau.hpp"

using namespace eml;

TEST_CASE("noise-free circuit samples quietly") {
    Circuit c = build_hook_injection({3, 2});
    for (const ShotRecord& rec : sample_serial(c, 16, 7)) {
        for (uint8_t d : rec.detectors)
            CHECK(d == 0);
        CHECK(rec.observable_flip == 0);
        CHECK(rec.erased_locations.empty());
    }
}

TEST_CASE("forced X flip fires the detector every shot") {
    Circuit c;
    c.qubits.push_back({0, 0, 0, QubitRole::data});
    c.instructions.push_back({Op::RESET_Z, {0}});
    c.instructions.push_back({Op::X_ERROR, {0}, {}, 1.0});
    c.instructions.push_back({Op::MEASURE_Z, {0}});
    c.instructions.push_back({Op::DETECTOR, {}, {-1}});
    for (const ShotRecord& rec : sample_serial(c, 32, 3)) {
        REQUIRE(rec.detectors.size() == 1);
        CHECK(rec.detectors[0] == 1);
    }
}

TEST_CASE("forced X on a hook data qubit matches tableau propagation") {
    Circuit c = build_hook_injection({2, 2});
    uint32_t d1_qubit = UINT32_MAX;
    for (const Qubit& q : c.qubits)
        if (q.role == QubitRole::data && q.x == 1 && q.y == 1)
            d1_qubit = q.index;
    REQUIRE(d1_qubit != UINT32_MAX);
    Circuit forced;
    forced.qubits = c.qubits;
    bool inserted = false;
    for (const Instruction& inst : c.instructions) {
        forced.instructions.push_back(inst);
        if (!inserted && inst.op == Op::TICK) {
            forced.instructions.push_back({Op::X_ERROR, {d1_qubit}, {}, 1.0});
            inserted = true;
        }
    }
    ReferenceFrame ref = reference_frame(forced);
    std::vector<ShotRecord> shots = sample_serial(forced, 4, 11);
    for (const ShotRecord& rec : shots) {
        TableauShot oracle = tableau_sample_shot(forced, ref, rec.seed, rec.shot);
        CHECK(rec.detectors == oracle.detectors);
        CHECK(rec.observable_flip == oracle.observable_flips[0]);
    }
    // The flip is detected somewhere: a lone X cannot hide after round 1.
    bool any = false;
    for (uint8_t d : shots[0].detectors)
        any |= d;
    CHECK(any);
}

TEST_CASE("frame sampler equals tableau oracle on noisy hook d1=2") {
    Circuit clean = build_hook_injection({2, 2});
    Circuit noisy = annotate(clean, NoiseParams::uniform(0.1, 0.0), ErasurePlan::none());
    REQUIRE(validate(noisy).empty());
    ReferenceFrame ref = reference_frame(noisy);
    FrameSampler sampler(noisy);
    ShotRecord rec;
    for (uint64_t shot = 0; shot < 300; ++shot) {
        sampler.sample_shot(17, shot, rec);
        TableauShot oracle = tableau_sample_shot(noisy, ref, 17, shot);
        REQUIRE(rec.detectors.size() == oracle.detectors.size());
        CHECK(rec.detectors == oracle.detectors);
        CHECK(rec.observable_flip == oracle.observable_flips[0]);
    }
}

TEST_CASE("parallel sampling is bit-identical to serial") {
    Circuit noisy =
        annotate(build_hook_injection({3, 2}), NoiseParams::uniform(0.05, 0.0), ErasurePlan::none());
    std::vector<ShotRecord> a = sample_serial(noisy, 200, 5);
    std::vector<ShotRecord> b = sample(noisy, 200, 5);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].detectors == b[i].detectors);
        CHECK(a[i].observable_flip == b[i].observable_flip);
        CHECK(a[i].erased_locations == b[i].erased_locations);
    }
}

TEST_CASE("replay is bit-exact") {
    Circuit noisy =
        annotate(build_hook_injection({2, 2}), NoiseParams::uniform(0.2, 0.1),
                 ErasurePlan::all_qubits(build_hook_injection({2, 2})));
    FrameSampler sampler(noisy);
    ShotRecord r1, r2;
    sampler.sample_shot(123, 45, r1);
    sampler.sample_shot(123, 46, r2);
    ShotRecord r1b;
    sampler.sample_shot(123, 45, r1b);
    CHECK(r1.detectors == r1b.detectors);
    CHECK(r1.erasure_flags == r1b.erasure_flags);
    CHECK(r1.erased_locations == r1b.erased_locations);
    CHECK(r1.observable_flip == r1b.observable_flip);
    bool differs = r1.detectors != r2.detectors || r1.erased_locations != r2.erased_locations;
    CHECK(differs);
}

TEST_CASE("erased measurement is uniformly random and flagged exactly") {
    Circuit c;
    c.qubits.push_back({0, 0, 0, QubitRole::data});
    c.instructions.push_back({Op::RESET_Z, {0}});
    c.instructions.push_back({Op::ERASE1, {0}, {}, 0.5});
    Instruction check{Op::ERASURE_CHECK, {0}};
    check.arg0 = 0;
    check.arg1 = 0;
    c.instructions.push_back(check);
    c.instructions.push_back({Op::MEASURE_Z, {0}});
    c.instructions.push_back({Op::DETECTOR, {}, {-1}});
    size_t erased = 0, fired_given_erased = 0;
    const uint64_t shots = 20000;
    for (const ShotRecord& rec : sample_serial(c, shots, 9)) {
        REQUIRE(rec.erasure_flags.size() == 1);
        bool was_erased = !rec.erased_locations.empty();
        CHECK(rec.erasure_flags[0] == (was_erased ? 1 : 0));
        if (was_erased) {
            ++erased;
            fired_given_erased += rec.detectors[0];
        } else {
            CHECK(rec.detectors[0] == 0);
        }
    }
    double erased_rate = double(erased) / double(shots);
    CHECK(std::abs(erased_rate - 0.5) < 0.02);
    // Flag-and-reset leaves the qubit depolarized: the Z outcome is a coin.
    double fire_rate = double(fired_given_erased) / double(erased);
    CHECK(std::abs(fire_rate - 0.5) < 0.02);
}

TEST_CASE("two-qubit erasure rate splits per qubit") {
    Circuit c;
    c.qubits.push_back({0, 0, 0, QubitRole::data});
    c.qubits.push_back({1, 1, 0, QubitRole::data});
    c.instructions.push_back({Op::RESET_Z, {0, 1}});
    c.instructions.push_back({Op::CX, {0, 1}});
    c.instructions.push_back({Op::ERASE2, {0, 1}, {}, 0.19});
    c.instructions.push_back({Op::MEASURE_Z, {0, 1}});
    size_t any = 0, first = 0;
    const uint64_t shots = 40000;
    for (const ShotRecord& rec : sample_serial(c, shots, 21)) {
        if (!rec.erased_locations.empty())
            ++any;
        for (auto [idx, q] : rec.erased_locations)
            if (q == 0)
                ++first;
    }
    CHECK(std::abs(double(any) / double(shots) - 0.19) < 0.01);
    CHECK(std::abs(double(first) / double(shots) - 0.1) < 0.01);
}

TEST_CASE("detector marginal matches first-order analytics") {
    // DEPOL1(p) feeding a Z measurement fires the detector at 2p/3.
    Circuit c;
    c.qubits.push_back({0, 0, 0, QubitRole::data});
    c.instructions.push_back({Op::RESET_Z, {0}});
    c.instructions.push_back({Op::DEPOL1, {0}, {}, 0.03});
    c.instructions.push_back({Op::MEASURE_Z, {0}});
    c.instructions.push_back({Op::DETECTOR, {}, {-1}});
    size_t fired = 0;
    const uint64_t shots = 200000;
    for (const ShotRecord& rec : sample_serial(c, shots, 31))
        fired += rec.detectors[0];
    double expect = 2.0 / 3.0 * 0.03;
    double sigma = std::sqrt(expect * (1 - expect) / double(shots));
    CHECK(std::abs(double(fired) / double(shots) - expect) < 4 * sigma);
}

TEST_CASE("per-gate detection records locations without flags") {
    Circuit c;
    c.qubits.push_back({0, 0, 0, QubitRole::data});
    c.instructions.push_back({Op::RESET_Z, {0}});
    c.instructions.push_back({Op::ERASE1, {0}, {}, 1.0});
    c.instructions.push_back({Op::MEASURE_Z, {0}});
    c.instructions.push_back({Op::DETECTOR, {}, {-1}});
    size_t fired = 0;
    const uint64_t shots = 20000;
    for (const ShotRecord& rec : sample_serial(c, shots, 41, true)) {
        CHECK(rec.erasure_flags.empty());
        REQUIRE(rec.erased_locations.size() == 1);
        fired += rec.detectors[0];
    }
    // The erasure still depolarizes the qubit before measurement.
    CHECK(std::abs(double(fired) / double(shots) - 0.5) < 0.02);
}

TEST_CASE("sampler refuses T") {
    Circuit c;
    c.qubits.push_back({0, 0, 0, QubitRole::data});
    c.instructions.push_back({Op::T, {0}});
    CHECK_THROWS_AS(FrameSampler{c}, std::invalid_argument);
}
