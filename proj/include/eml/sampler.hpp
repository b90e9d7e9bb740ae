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

#ifndef EML_SAMPLER_HPP
#define EML_SAMPLER_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "eml/circuit.hpp"
#include "eml/rng.hpp"

namespace eml {

struct ShotRecord {
    std::vector<uint8_t> detectors;
    std::vector<uint8_t> erasure_flags; // one slot per (check, qubit)
    uint8_t observable_flip = 0;
    std::vector<std::pair<uint32_t, uint32_t>> erased_locations; // (instruction, qubit)
    uint64_t seed = 0;
    uint64_t shot = 0;
};

/// Pauli-frame simulator. Detector bits are measurement-flip parities, which
/// are noise-only by construction and therefore already relative to the
/// noiseless reference. One instance per thread; sample_shot reuses internal
/// scratch buffers.
///
/// With per_gate_detection the erasure draws are treated as immediately
/// detected: the effect of the erasure on the current gate is applied, the
/// location is recorded, and the qubit is reset to a depolarized state.
/// No erasure_flags slots are produced in that mode.
class FrameSampler {
  public:
    explicit FrameSampler(const Circuit& circuit, bool per_gate_detection = false);

    void sample_shot(uint64_t seed, uint64_t shot, ShotRecord& out);

    size_t num_detectors() const { return num_detectors_; }
    size_t num_flag_slots() const { return num_flag_slots_; }

  private:
    const Circuit* c_;
    bool per_gate_;
    size_t num_detectors_;
    size_t num_flag_slots_;
    std::vector<double> erase2_split_; // per instruction, for ERASE2 only
    std::vector<uint8_t> fx_, fz_, erased_;
    std::vector<uint8_t> meas_flips_;
};

/// Serial reference implementation.
std::vector<ShotRecord> sample_serial(const Circuit& circuit, uint64_t shots, uint64_t seed,
                                      bool per_gate_detection = false);

/// OpenMP-parallel over shots; bit-identical to sample_serial.
std::vector<ShotRecord> sample(const Circuit& circuit, uint64_t shots, uint64_t seed,
                               bool per_gate_detection = false);

} // namespace eml

#endif // EML_SAMPLER_HPP
