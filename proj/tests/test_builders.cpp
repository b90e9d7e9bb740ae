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

#include <set>
#include <sstream>

#include "eml/builders.hpp"
#include "eml/tableau.hpp"

using namespace eml;

namespace {

// Replays the gate content of a circuit on a tableau; noise, detectors and
// checks are skipped, non-deterministic branches take a fixed convention.
Tableau replay(const Circuit& c) {
    Tableau t(c.qubits.size());
    for (const Instruction& inst : c.instructions) {
        switch (inst.op) {
            case Op::RESET_Z:
                for (uint32_t q : inst.targets)
                    t.reset_z(q, false);
                break;
            case Op::RESET_X:
                for (uint32_t q : inst.targets)
                    t.reset_x(q, false);
                break;
            case Op::H:
                for (uint32_t q : inst.targets)
                    t.apply_h(q);
                break;
            case Op::S:
                for (uint32_t q : inst.targets)
                    t.apply_s(q);
                break;
            case Op::S_DAG:
                for (uint32_t q : inst.targets)
                    t.apply_s_dag(q);
                break;
            case Op::CX:
                for (size_t i = 0; i + 1 < inst.targets.size(); i += 2)
                    t.apply_cx(inst.targets[i], inst.targets[i + 1]);
                break;
            case Op::MEASURE_Z:
                for (uint32_t q : inst.targets)
                    t.measure_z(q, false);
                break;
            case Op::MEASURE_X:
                for (uint32_t q : inst.targets)
                    t.measure_x(q, false);
                break;
            default:
                break;
        }
    }
    return t;
}

// Replays up to (not including) the readout ancilla reset, so logical
// operator expectations can be probed on the data state.
Tableau replay_until_readout(const Circuit& c) {
    Circuit head;
    head.qubits = c.qubits;
    uint32_t readout = static_cast<uint32_t>(c.qubits.size()) - 1;
    for (const Instruction& inst : c.instructions) {
        if (inst.op == Op::RESET_X && inst.targets.size() == 1 && inst.targets[0] == readout)
            break;
        head.instructions.push_back(inst);
    }
    return replay(head);
}

std::vector<uint32_t> parse_list(const std::string& s) {
    std::vector<uint32_t> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(static_cast<uint32_t>(std::stoul(item)));
    return out;
}

std::vector<std::pair<size_t, int>> pauli_string(const std::vector<uint32_t>& qs, int p) {
    std::vector<std::pair<size_t, int>> out;
    for (uint32_t q : qs)
        out.emplace_back(q, p);
    return out;
}

// Y_L support: Z along the logical row, X along the logical column, Y where
// they cross.
std::vector<std::pair<size_t, int>> y_logical(const Circuit& c) {
    std::vector<uint32_t> z_l = parse_list(c.metadata.at("z_l"));
    std::vector<uint32_t> x_l = parse_list(c.metadata.at("x_l"));
    std::set<uint32_t> zs(z_l.begin(), z_l.end()), xs(x_l.begin(), x_l.end());
    std::vector<std::pair<size_t, int>> out;
    for (uint32_t q : z_l)
        out.emplace_back(q, xs.count(q) ? 2 : 3);
    for (uint32_t q : x_l)
        if (!zs.count(q))
            out.emplace_back(q, 1);
    return out;
}

void check_injected_state(const Circuit& c) {
    REQUIRE(validate(c).empty());
    Tableau t = replay_until_readout(c);
    std::vector<uint32_t> z_l = parse_list(c.metadata.at("z_l"));
    std::vector<uint32_t> x_l = parse_list(c.metadata.at("x_l"));
    // Eigenstate of Y_L but of neither X_L nor Z_L: the |S>-type state.
    CHECK(t.pauli_expectation(y_logical(c)) != 0);
    CHECK(t.pauli_expectation(pauli_string(x_l, 1)) == 0);
    CHECK(t.pauli_expectation(pauli_string(z_l, 3)) == 0);
    // The discriminator measurement itself is deterministic.
    ReferenceFrame ref = reference_frame(c);
    REQUIRE(!ref.measurement_deterministic.empty());
    CHECK(ref.measurement_deterministic.back() == 1);
    REQUIRE(ref.observable_values.size() == 1);
}

} // namespace

TEST_CASE("surface patch counts") {
    SurfaceLayout d2 = build_surface_patch(2);
    size_t data = 0, xa = 0, za = 0;
    for (const Qubit& q : d2.qubits) {
        if (q.role == QubitRole::data)
            ++data;
        else if (q.role == QubitRole::x_ancilla)
            ++xa;
        else
            ++za;
    }
    CHECK(data == 4);
    CHECK(xa == 2);
    CHECK(za == 1);

    SurfaceLayout d3 = build_surface_patch(3);
    CHECK(d3.qubits.size() == 17);
    CHECK_THROWS_AS(build_surface_patch(1), std::invalid_argument);
}

TEST_CASE("stabilizers commute and logicals anticommute") {
    for (uint32_t d : {2u, 3u, 5u}) {
        SurfaceLayout lay = build_surface_patch(d);
        for (const Stabilizer& a : lay.stabilizers)
            for (const Stabilizer& b : lay.stabilizers) {
                if (a.is_x == b.is_x)
                    continue;
                size_t overlap = 0;
                for (uint32_t q : a.data)
                    for (uint32_t p : b.data)
                        if (p == q)
                            ++overlap;
                CHECK(overlap % 2 == 0);
            }
        CHECK(lay.z_logical.size() == d);
        CHECK(lay.x_logical.size() == d);
        // Overlap of the logicals is the single corner qubit.
        size_t cross = 0;
        for (uint32_t q : lay.z_logical)
            for (uint32_t p : lay.x_logical)
                if (p == q)
                    ++cross;
        CHECK(cross == 1);
        // Logicals commute with all stabilizers of the opposite type.
        for (const Stabilizer& s : lay.stabilizers) {
            const auto& logical = s.is_x ? lay.z_logical : lay.x_logical;
            size_t overlap = 0;
            for (uint32_t q : logical)
                for (uint32_t p : s.data)
                    if (p == q)
                        ++overlap;
            CHECK(overlap % 2 == 0);
        }
    }
}

TEST_CASE("hook d1=2 has exactly one S on the hook ancilla") {
    Circuit c = build_hook_injection({2, 1});
    size_t s_count = 0;
    uint32_t target = UINT32_MAX;
    for (const Instruction& inst : c.instructions)
        if (inst.op == Op::S && c.qubits[inst.targets[0]].role != QubitRole::data) {
            ++s_count;
            target = inst.targets[0];
        }
    CHECK(s_count == 1);
    REQUIRE(target != UINT32_MAX);
    CHECK(c.qubits[target].role == QubitRole::z_ancilla);
    CHECK(c.qubits[target].x == 2);
    CHECK(c.qubits[target].y == 2);
}

TEST_CASE("hook injection prepares a Y_L eigenstate") {
    for (uint32_t d1 : {2u, 3u, 5u})
        check_injected_state(build_hook_injection({d1, 2}));
}

TEST_CASE("lao-criger injection prepares a Y_L eigenstate") {
    check_injected_state(build_lao_criger_injection({3, 2}));
    check_injected_state(build_lao_criger_injection({5, 2}));
    CHECK_THROWS_AS(build_lao_criger_injection({4, 2}), std::invalid_argument);
}

TEST_CASE("lao-criger has one prepared data qubit") {
    Circuit c = build_lao_criger_injection({3, 2});
    size_t prep = 0;
    for (const Instruction& inst : c.instructions) {
        if (inst.op == Op::TICK)
            break;
        if ((inst.op == Op::S || inst.op == Op::H) &&
            c.qubits[inst.targets[0]].role == QubitRole::data)
            ++prep;
    }
    // RESET_X followed by a single S on the center qubit; no other data
    // qubit carries a preparation gate.
    CHECK(prep == 1);
}

TEST_CASE("noiseless builder circuits have deterministic detectors") {
    // Reference detector parities exist for every emitted detector and the
    // sampler measures them relative to the reference, so a noiseless shot
    // reads all zeros; here we verify the reference itself is well formed.
    for (const Circuit& c : {build_hook_injection({3, 2}), build_lao_criger_injection({3, 2}),
                             build_color_unitary_injection()}) {
        ReferenceFrame ref = reference_frame(c);
        CHECK(ref.detector_values.size() == c.num_detectors());
        CHECK(c.meta_int("inj_detectors", -1) > 0);
    }
}

TEST_CASE("expansion layout counts") {
    Circuit inner = build_hook_injection({3, 2});
    Circuit grown = build_expansion({15, 3}, inner);
    REQUIRE(validate(grown).empty());
    // 2*15^2-1 lattice qubits plus the readout ancilla.
    CHECK(grown.qubits.size() == 450);
    check_injected_state(grown);
}

TEST_CASE("degenerate expansion keeps the patch size") {
    Circuit inner = build_hook_injection({3, 2});
    Circuit grown = build_expansion({3, 2}, inner);
    REQUIRE(validate(grown).empty());
    CHECK(grown.qubits.size() == 18);
    check_injected_state(grown);
}

TEST_CASE("lao-criger expansion") {
    Circuit inner = build_lao_criger_injection({3, 2});
    Circuit grown = build_expansion({5, 2}, inner);
    REQUIRE(validate(grown).empty());
    check_injected_state(grown);
}

TEST_CASE("color code injection") {
    Circuit c = build_color_unitary_injection();
    REQUIRE(validate(c).empty());
    ReferenceFrame ref = reference_frame(c);
    // All six stabilizer outcomes and the readout are deterministic.
    for (uint8_t det : ref.measurement_deterministic)
        CHECK(det == 1);
    for (uint8_t v : ref.detector_values)
        CHECK(v == 0);
    Tableau t = replay_until_readout(c);
    CHECK(t.pauli_expectation({{2, 2}, {4, 2}, {5, 2}}) != 0);
    CHECK(t.pauli_expectation({{2, 1}, {4, 1}, {5, 1}}) == 0);
}

TEST_CASE("hybrid erasure set") {
    Circuit c2 = build_hook_injection({2, 2});
    std::vector<uint32_t> set2 = hybrid_erasure_set(c2);
    REQUIRE(set2.size() == 3);
    CHECK(c2.qubits[set2[2]].role == QubitRole::z_ancilla);
    CHECK(c2.qubits[set2[0]].role == QubitRole::data);
    CHECK(c2.qubits[set2[1]].role == QubitRole::data);
    for (uint32_t d1 : {3u, 5u})
        CHECK(hybrid_erasure_set(build_hook_injection({d1, 2})).size() == 3);
    CHECK_THROWS_AS(hybrid_erasure_set(build_lao_criger_injection({3, 2})),
                    std::invalid_argument);
}
