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

#ifndef EML_FAULTS_HPP
#define EML_FAULTS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "eml/circuit.hpp"

namespace eml {

/// detected: flips at least one injection-window detector, so post-selection
/// discards the shot. undetected_logical: flips no detector anywhere but
/// leaves a nontrivial logical coset. harmless: everything else, including
/// faults caught only by detectors after the injection window (the decoder
/// sees those).
enum class FaultClass : uint8_t { detected, undetected_logical, harmless };

struct Fault {
    uint32_t instruction = 0;
    uint32_t term = 0; // Pauli term index within the instruction
    Op source = Op::DEPOL1;
    double probability = 0;
    FaultClass cls = FaultClass::harmless;
    int logical = 0; // 0=I, 1=X_L, 2=Y_L, 3=Z_L residual coset
};

struct FaultEnumeration {
    std::vector<Fault> faults;
    size_t num_detectors = 0;
    int64_t inj_detectors = 0;
    /// Packed per-fault masks (detectors, observables, then the two logical
    /// anticommutation bits), `words` words per fault, for pair search.
    size_t words = 0;
    size_t num_observables = 0;
    size_t logical_bit_z = 0; // bit index: anticommutes with Z_L
    size_t logical_bit_x = 0; // bit index: anticommutes with X_L
    std::vector<uint64_t> signatures;
    /// Per-fault mechanism key for undetected Pauli faults, empty otherwise.
    /// Opaque: two faults share a key exactly when they flip the same
    /// measurement records and their residuals differ only by a stabilizer of
    /// the noiseless final state, i.e. they are one physical mechanism whose
    /// probabilities add.
    std::vector<std::string> mechanisms;
};

/// Classifies every Pauli term of every noise instruction (and every erasure
/// site treated as depolarizing) by exact symplectic propagation against the
/// detectors and the final logical operators read from the z_l/x_l metadata.
/// Throws if that metadata is missing.
FaultEnumeration enumerate_faults(const Circuit& circuit);

/// Undetected-logical counts by source rate, at two granularities. Mechanism
/// counts merge Pauli terms with identical fault action (same flipped records
/// and same residual); term counts keep every term separate and predict the
/// Monte Carlo rate exactly. Units: p1/3 per single-qubit term, p2/15 per
/// two-qubit term, p_spam per flip; Y_L entries stabilize the injected
/// |S>-type state and are excluded from n_a, n_b, n_c and both factors.
struct FaultCoefficients {
    int64_t channel[3][4] = {}; // mechanisms per [source: p1, p2, spam][I..Z_L]
    int64_t term_channel[3][4] = {};
    int64_t n_a = 0, n_b = 0, n_c = 0; // deduplicated mechanisms
    int64_t n_a_terms = 0, n_b_terms = 0, n_c_terms = 0;
    double a = 0, b = 0, c = 0;
    /// Rates as multiples of p at p_IN = p2 = p, p1 = p/10:
    /// mechanism-counted (matches the closed-form coefficient statements) and
    /// term-counted (matches sampled shot statistics).
    double effective_factor = 0;
    double term_factor = 0;
};
FaultCoefficients coefficients(const FaultEnumeration& enumeration);

struct GateDetection {
    uint32_t instruction = 0;
    uint32_t unit = 0; // target or pair index within the instruction
    Op source = Op::DEPOL1;
    double p_gate = 0;
    double p_detected = 0; // p_gate scaled by the detected-term fraction
    uint32_t terms = 0;
    uint32_t detected_terms = 0;
};

struct FaultReport {
    std::vector<GateDetection> gates;
    double ar_p = 1; // product of (1 - p_detected) over Pauli locations
    /// Detected-fraction histograms, 11 buckets [0, 0.1) .. [0.9, 1) and
    /// exactly 1.
    std::vector<uint32_t> histogram_1q, histogram_2q, histogram_spam;
};
FaultReport detection_histogram(const FaultEnumeration& enumeration, const Circuit& circuit);

/// Bounded pair search over Pauli faults: pairs whose combined signature
/// escapes every detector and flips the effective logical. rate sums
/// p_i * p_j over such unordered pairs.
struct PairSummary {
    uint64_t pairs_examined = 0;
    uint64_t undetected_pairs = 0;
    double rate = 0;
};
PairSummary second_order_undetected(const FaultEnumeration& enumeration);

} // namespace eml

#endif // EML_FAULTS_HPP
