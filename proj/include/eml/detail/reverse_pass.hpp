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

#ifndef EML_DETAIL_REVERSE_PASS_HPP
#define EML_DETAIL_REVERSE_PASS_HPP

#include <algorithm>
#include <cstdint>
#include <vector>

#include "eml/circuit.hpp"

namespace eml::detail {

using Mask = std::vector<uint64_t>;

inline void mask_xor(Mask& a, const Mask& b) {
    for (size_t i = 0; i < a.size(); ++i)
        a[i] ^= b[i];
}

inline void mask_flip(Mask& m, uint32_t bit) { m[bit / 64] ^= uint64_t(1) << (bit % 64); }

inline bool mask_test(const Mask& m, uint32_t bit) { return m[bit / 64] >> (bit % 64) & 1; }

/// Walks a Clifford circuit backwards maintaining, for every qubit, the set
/// of detector/observable bits an X or a Z inserted at the current position
/// would flip. Bit layout: detectors [0, D), observables [D, D+O), then
/// `extra` caller-seeded bits. At each noise instruction the callback runs
/// with the masks valid for that position.
struct SensitivityPass {
    const Circuit& c;
    size_t num_det, num_obs, extra, words;
    std::vector<std::vector<uint32_t>> meas_bits;
    std::vector<Mask> sx, sz;

    explicit SensitivityPass(const Circuit& circuit, size_t extra_bits = 0)
        : c(circuit), extra(extra_bits) {
        num_det = c.num_detectors();
        num_obs = c.num_observables();
        words = (num_det + num_obs + extra + 63) / 64;
        meas_bits.assign(c.num_measurements(), {});
        size_t meas = 0;
        uint32_t det = 0;
        for (const Instruction& inst : c.instructions) {
            if (is_measurement(inst.op)) {
                meas += inst.targets.size();
            } else if (inst.op == Op::DETECTOR) {
                for (int32_t off : inst.rec)
                    meas_bits[meas + off].push_back(det);
                ++det;
            } else if (inst.op == Op::OBSERVABLE) {
                for (int32_t off : inst.rec)
                    meas_bits[meas + off].push_back(uint32_t(num_det) + inst.obs_id);
            }
        }
        sx.assign(c.qubits.size(), Mask(words, 0));
        sz.assign(c.qubits.size(), Mask(words, 0));
    }

    template <typename OnNoise>
    void run(OnNoise&& on_noise) {
        size_t meas = c.num_measurements();
        for (size_t idx = c.instructions.size(); idx-- > 0;) {
            const Instruction& inst = c.instructions[idx];
            switch (inst.op) {
                case Op::RESET_Z:
                case Op::RESET_X:
                    for (uint32_t q : inst.targets) {
                        std::fill(sx[q].begin(), sx[q].end(), 0);
                        std::fill(sz[q].begin(), sz[q].end(), 0);
                    }
                    break;
                case Op::MEASURE_Z:
                    for (size_t i = inst.targets.size(); i-- > 0;) {
                        --meas;
                        uint32_t q = inst.targets[i];
                        for (uint32_t bit : meas_bits[meas])
                            mask_flip(sx[q], bit);
                        // Z before a Z measurement acts trivially.
                        std::fill(sz[q].begin(), sz[q].end(), 0);
                    }
                    break;
                case Op::MEASURE_X:
                    for (size_t i = inst.targets.size(); i-- > 0;) {
                        --meas;
                        uint32_t q = inst.targets[i];
                        for (uint32_t bit : meas_bits[meas])
                            mask_flip(sz[q], bit);
                        std::fill(sx[q].begin(), sx[q].end(), 0);
                    }
                    break;
                case Op::H:
                    for (uint32_t q : inst.targets)
                        std::swap(sx[q], sz[q]);
                    break;
                case Op::S:
                case Op::S_DAG:
                    // S X S^ = Y: an X here also flips whatever Z flips.
                    for (uint32_t q : inst.targets)
                        mask_xor(sx[q], sz[q]);
                    break;
                case Op::CX:
                    for (size_t i = inst.targets.size(); i >= 2; i -= 2) {
                        uint32_t ctrl = inst.targets[i - 2], tgt = inst.targets[i - 1];
                        mask_xor(sx[ctrl], sx[tgt]);
                        mask_xor(sz[tgt], sz[ctrl]);
                    }
                    break;
                default:
                    on_noise(idx, inst);
                    break;
            }
        }
    }
};

} // namespace eml::detail

#endif // EML_DETAIL_REVERSE_PASS_HPP
