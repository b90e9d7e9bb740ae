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

#ifndef EML_BUILDERS_HPP
#define EML_BUILDERS_HPP

#include <cstdint>
#include <map>
#include <vector>

#include "eml/circuit.hpp"

namespace eml {

/// Rotated surface code layout. Data qubits sit at odd-odd coordinates,
/// ancillas at even-even; boundary plaquettes have weight 2. The Z logical
/// runs along the top row, the X logical down the left column.
struct Stabilizer {
    uint32_t ancilla;
    std::vector<uint32_t> data;
    bool is_x;
};

struct SurfaceLayout {
    uint32_t d = 0;
    std::vector<Qubit> qubits;
    std::vector<Stabilizer> stabilizers;
    std::vector<uint32_t> z_logical; // top row, left to right
    std::vector<uint32_t> x_logical; // left column, top to bottom
    std::map<std::pair<int, int>, uint32_t> index_of;

    bool has(int x, int y) const { return index_of.count({x, y}) != 0; }
    uint32_t at(int x, int y) const { return index_of.at({x, y}); }
};

SurfaceLayout build_surface_patch(uint32_t d);

struct InjectionConfig {
    uint32_t d1 = 3;
    uint32_t rounds = 2; // r: noisy stabilizer rounds including the first
};

/// Gidney-style hook injection of |S> on a d1 patch: the first round runs the
/// corner Z plaquette first with an S on its ancilla between the CNOT pairs,
/// implementing exp(-i pi/4 Z_L) on the unprojected state. Ends with a
/// noiseless stabilizer round and an ancilla-based Y_L readout feeding
/// OBSERVABLE 0.
Circuit build_hook_injection(const InjectionConfig& config);

/// Lao-Criger injection: the center qubit is prepared with RESET_Z, H, S and
/// the logical operators are arranged to act on it through |0>/|+> arms.
/// Requires odd d1 >= 3.
Circuit build_lao_criger_injection(const InjectionConfig& config);

struct MemoryConfig {
    uint32_t d = 3;
    uint32_t rounds = 3;
};

/// Plain |0> memory on a d patch: all data reset to |0>, `rounds` noisy
/// stabilizer rounds, a noiseless round, and a Z_L readout feeding
/// OBSERVABLE 0. Used for decoder calibration.
Circuit build_memory(const MemoryConfig& config);

struct ExpansionConfig {
    uint32_t d2 = 7;
    uint32_t memory_rounds = 7;
};

/// Grows the injection circuit `inner` (built by one of the builders above,
/// identified through its metadata) from d1 to d2 in one reset round, then
/// runs memory_rounds full rounds before the noiseless readout. New qubits
/// right of the patch start in |0> (extending Z_L), new qubits below it in
/// |+> (extending X_L); expansion-round detectors cover old stabilizers and
/// the new ones that are deterministic.
Circuit build_expansion(const ExpansionConfig& config, const Circuit& inner);

/// Unitary encoding of S|+> into the Steane code followed by one round of
/// all six stabilizer measurements and a noiseless Y_L readout.
Circuit build_color_unitary_injection();

/// The minimal erasure-qubit set covering the single-fault locations of a
/// hook-style injection circuit: the two data qubits feeding the rotation
/// ancilla plus that ancilla. Throws if the circuit has no rotation gate on
/// a Z ancilla.
std::vector<uint32_t> hybrid_erasure_set(const Circuit& circuit);

} // namespace eml

#endif // EML_BUILDERS_HPP
