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

#ifndef EML_PAULI_DRAW_HPP
#define EML_PAULI_DRAW_HPP

#include "eml/circuit.hpp"
#include "eml/rng.hpp"

namespace eml::detail {

// Pauli codes: 0=I, 1=X, 2=Y, 3=Z.

/// Draws the Pauli errors of one noise instruction and feeds them to
/// `apply(qubit, pauli)`. The draw sequence is the contract shared by the
/// frame sampler and the tableau oracle: both must consume the stream
/// identically for shot replay equivalence.
template <class F>
inline void draw_pauli_noise(const Instruction& inst, CounterRng& rng, F&& apply) {
    switch (inst.op) {
        case Op::DEPOL1:
            for (uint32_t q : inst.targets)
                if (rng.bernoulli(inst.arg0))
                    apply(q, rng.next_below(3) + 1);
            break;
        case Op::DEPOL2:
            for (size_t i = 0; i + 1 < inst.targets.size(); i += 2) {
                if (rng.bernoulli(inst.arg0)) {
                    uint32_t k = rng.next_below(15) + 1; // nontrivial 2Q Pauli
                    if (k >> 2)
                        apply(inst.targets[i], k >> 2);
                    if (k & 3)
                        apply(inst.targets[i + 1], k & 3);
                }
            }
            break;
        case Op::X_ERROR:
            for (uint32_t q : inst.targets)
                if (rng.bernoulli(inst.arg0))
                    apply(q, 1);
            break;
        case Op::Z_ERROR:
            for (uint32_t q : inst.targets)
                if (rng.bernoulli(inst.arg0))
                    apply(q, 3);
            break;
        default:
            break;
    }
}

} // namespace eml::detail

#endif // EML_PAULI_DRAW_HPP
