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

#ifndef EML_TABLEAU_HPP
#define EML_TABLEAU_HPP

#include <cstdint>
#include <vector>

#include "eml/circuit.hpp"

namespace eml {

/// Aaronson-Gottesman stabilizer tableau over n qubits. Row-major bit-packed
/// destabilizer/stabilizer rows with sign bits.
class Tableau {
  public:
    explicit Tableau(size_t num_qubits);

    size_t num_qubits() const { return n_; }

    void apply_h(size_t q);
    void apply_s(size_t q);
    void apply_s_dag(size_t q);
    void apply_cx(size_t control, size_t target);
    void apply_x(size_t q);
    void apply_y(size_t q);
    void apply_z(size_t q);

    struct MeasResult {
        bool value;
        bool deterministic;
    };

    /// Z-basis measurement; `random_branch` is consumed only when the
    /// outcome is non-deterministic.
    MeasResult measure_z(size_t q, bool random_branch);
    MeasResult measure_x(size_t q, bool random_branch);
    void reset_z(size_t q, bool random_branch);
    void reset_x(size_t q, bool random_branch);

    /// Expectation of a sparse Pauli product: returns +1 / -1 when the state
    /// is an eigenstate, 0 otherwise. Paulis given as (qubit, pauli) with
    /// pauli in {1=X, 2=Y, 3=Z}.
    int pauli_expectation(const std::vector<std::pair<size_t, int>>& paulis) const;

  private:
    size_t n_;
    size_t words_;
    // rows 0..n-1: destabilizers, n..2n-1: stabilizers, row 2n: scratch.
    std::vector<uint64_t> x_;
    std::vector<uint64_t> z_;
    std::vector<uint8_t> r_; // phase, mod 4 (0 or 2 for +/-)

    uint64_t* xrow(size_t i) { return x_.data() + i * words_; }
    uint64_t* zrow(size_t i) { return z_.data() + i * words_; }
    const uint64_t* xrow(size_t i) const { return x_.data() + i * words_; }
    const uint64_t* zrow(size_t i) const { return z_.data() + i * words_; }
    bool xbit(size_t i, size_t q) const { return (xrow(i)[q >> 6] >> (q & 63)) & 1; }
    bool zbit(size_t i, size_t q) const { return (zrow(i)[q >> 6] >> (q & 63)) & 1; }
    void set_xbit(size_t i, size_t q, bool v);
    void set_zbit(size_t i, size_t q, bool v);
    void rowsum(size_t h, size_t i);
    void row_clear(size_t i);
};

/// Noiseless evaluation of a circuit: per-measurement reference value and
/// determinism flag, plus reference detector/observable parities.
/// Non-deterministic outcomes take a fixed branch convention keyed by the
/// measurement index (independent of any sampling seed). Noise instructions
/// are skipped; ERASURE_CHECK reference flags are 0. Rejects T.
struct ReferenceFrame {
    std::vector<uint8_t> measurement_values;
    std::vector<uint8_t> measurement_deterministic;
    std::vector<uint8_t> detector_values;
    std::vector<uint8_t> observable_values;
};

ReferenceFrame reference_frame(const Circuit& circuit);

/// Full tableau simulation of one noisy shot. Noise channels consume random
/// draws from stream (seed, shot) in instruction order, exactly mirroring the
/// frame sampler's draw sequence; measurement branches use a separate stream.
/// Erasure instructions are not supported here. Returns detector bits
/// (relative to the reference frame) and observable flips.
struct TableauShot {
    std::vector<uint8_t> detectors;
    std::vector<uint8_t> observable_flips;
};

TableauShot tableau_sample_shot(const Circuit& circuit, const ReferenceFrame& ref, uint64_t seed,
                                uint64_t shot);

} // namespace eml

#endif // EML_TABLEAU_HPP
