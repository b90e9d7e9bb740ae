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

#ifndef EML_CIRCUIT_HPP
#define EML_CIRCUIT_HPP

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace eml {

enum class QubitRole : uint8_t { data, x_ancilla, z_ancilla };

struct Qubit {
    uint32_t index = 0;
    double x = 0;
    double y = 0;
    QubitRole role = QubitRole::data;

    bool operator==(const Qubit&) const = default;
};

enum class Op : uint8_t {
    RESET_Z,
    RESET_X,
    H,
    S,
    S_DAG,
    T,
    CX,
    MEASURE_Z,
    MEASURE_X,
    TICK,
    DEPOL1,
    DEPOL2,
    X_ERROR,
    Z_ERROR,
    ERASE1,
    ERASE2,
    ERASURE_CHECK,
    DETECTOR,
    OBSERVABLE,
};

const char* op_name(Op op);
bool is_noise(Op op);
bool is_unitary(Op op);
bool is_reset(Op op);
bool is_measurement(Op op);

/// One circuit instruction. `targets` holds qubit indices; `rec` holds
/// negative measurement-record offsets (DETECTOR / OBSERVABLE only).
/// `arg0` is the error probability; ERASURE_CHECK uses (arg0, arg1) as
/// (false-positive, false-negative) probabilities.
struct Instruction {
    Op op = Op::TICK;
    std::vector<uint32_t> targets;
    std::vector<int32_t> rec;
    double arg0 = 0;
    double arg1 = 0;
    uint32_t obs_id = 0;

    bool operator==(const Instruction&) const = default;
};

struct Circuit {
    std::vector<Qubit> qubits;
    std::vector<Instruction> instructions;
    std::map<std::string, std::string> metadata;

    bool operator==(const Circuit&) const = default;

    size_t num_measurements() const;
    size_t num_detectors() const;
    size_t num_observables() const;

    /// Metadata accessors with defaults; values are stored as strings.
    int64_t meta_int(const std::string& key, int64_t fallback) const;
    void set_meta(const std::string& key, int64_t value);
};

struct Violation {
    size_t instruction_index; // SIZE_MAX for circuit-level violations
    std::string message;
};

using ValidationReport = std::vector<Violation>;

/// Empty report iff all structural invariants hold.
ValidationReport validate(const Circuit& circuit);

struct ParseError : std::runtime_error {
    ParseError(size_t line, const std::string& message);
    size_t line;
};

std::string serialize(const Circuit& circuit);
Circuit parse(const std::string& text);

struct LocationCounts {
    size_t x1 = 0;     // non-SPAM one-qubit gate locations
    size_t x2 = 0;     // two-qubit gate locations (pairs)
    size_t x_spam = 0; // resets + measurements
    size_t idle = 0;   // per measured round, active qubits not measured
};

LocationCounts count_locations(const Circuit& circuit);

} // namespace eml

#endif // EML_CIRCUIT_HPP
