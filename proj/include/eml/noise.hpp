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

#ifndef EML_NOISE_HPP
#define EML_NOISE_HPP

#include <optional>
#include <set>
#include <string>

#include "eml/circuit.hpp"

namespace eml {

/// Physical rates. Pauli rates (p1, p2, p_spam) apply to erasure-designated
/// qubits (their residual error); non-erasure qubits use (pn1, pn2, pn_spam).
/// A CX touching any non-erasure qubit uses pn2.
struct NoiseParams {
    double p1 = 0, p2 = 0, p_spam = 0;
    double e1 = 0, e2 = 0, e_spam = 0;
    double e_fp = 0, e_fn = 0;
    double pn1 = 0, pn2 = 0, pn_spam = 0;

    /// Uniform rates for the "everything is an erasure qubit" scenarios:
    /// two-qubit/SPAM Pauli rate p, 1Q and idle at p/10; same split for e.
    static NoiseParams uniform(double p, double e);
    /// Pre-registered scenarios: non_erasure, near_perfect, imperfect_4e3,
    /// imperfect_1e2. Throws std::invalid_argument on unknown names.
    static NoiseParams scenario(const std::string& name);
};

enum class DetectionCadence { per_round, end_only, per_gate };

struct ErasurePlan {
    std::set<uint32_t> erasure_qubits;
    DetectionCadence cadence = DetectionCadence::per_round;
    int discard_threshold = 1;

    static ErasurePlan all_qubits(const Circuit& circuit);
    static ErasurePlan none();
};

/// Per-qubit erasure probability of a two-qubit gate with total rate e2.
double two_qubit_erasure_split(double e2);

struct IdlingModel {
    double t1 = 1;       // shared decay time
    double t_2dr = 0;    // dual-rail / dual-rail gate time
    double t_2tr = 0;    // transmon / transmon gate time
    double t_trdr = 0;   // mixed gate time
};

double twirled_pauli_rate(double t, double t1);  // 3/4 - e^{-t/T1}/4 - e^{-3t/2T1}/2
double erasure_rate_from_time(double t, double t1); // 1 - e^{-t/T1}
double idle_pauli_rate(double t, double t1);        // t / 2T1

/// Replaces the non-erasure CX rate by p2* = (pn2 + e2) / 2: transmons idle
/// while dual-rail gates finish.
NoiseParams idling_adjusted_params(const NoiseParams& base, const IdlingModel& model);

struct AnnotateOptions {
    /// Noise is applied to rounds in [from_round, to_round). Defaults to
    /// [0, meta "noiseless_from_round").
    int64_t from_round = 0;
    std::optional<int64_t> to_round;
};

/// Applies the noise model to a clean circuit. Rejects circuits that already
/// contain noise instructions and plans referencing unknown qubits.
Circuit annotate(const Circuit& circuit, const NoiseParams& params, const ErasurePlan& plan,
                 const AnnotateOptions& options = {});

} // namespace eml

#endif // EML_NOISE_HPP
