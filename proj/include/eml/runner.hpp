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

#ifndef EML_RUNNER_HPP
#define EML_RUNNER_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "eml/circuit.hpp"
#include "eml/noise.hpp"

namespace eml {

/// Accept/discard rules for the injection window only; expansion and memory
/// rounds are decoded, never post-selected.
struct PostSelectionPolicy {
    bool pauli_rule = true;    // discard on any injection-window detector
    int discard_threshold = 1; // discard on >= this many flagged erasures
};

/// Wilson score interval at 95%.
struct Estimate {
    double rate = 0, ci_low = 0, ci_high = 0;
    uint64_t n = 0, k = 0;
};
Estimate wilson_estimate(uint64_t k, uint64_t n);

struct RunResult {
    Estimate acceptance;
    Estimate logical; // over accepted shots
    double volume = 0;
    bool volume_defined = false; // false when nothing was accepted
    std::string scenario;
    int64_t d1 = 0, d2 = 0, r = 0;
    uint64_t shots = 0;
};

/// Annotates `clean` with (params, plan), samples `shots` shots, applies the
/// policy over the injection window, decodes accepted shots over the full
/// record and reports AR, p_L and the expected volume V = Q_{d1} * r / AR.
/// `annotate_options` restricts the noisy round window (e.g. expansion-only
/// noise studies).
RunResult run_protocol(const Circuit& clean, const NoiseParams& params,
                       const ErasurePlan& plan, const PostSelectionPolicy& policy,
                       uint64_t shots, uint64_t seed, const std::string& scenario_tag = "",
                       const AnnotateOptions& annotate_options = {});

/// First-order acceptance predictions on an annotated circuit:
/// AR_e = (1-e_spam)^x_spam (1-e1)^x1 (1-e2)^x2 over injection-window erasure
/// locations; AR_p = prod_g (1 - p_g^D) from the fault enumeration.
std::pair<double, double> acceptance_prediction(const Circuit& annotated);

enum class AnsatzForm { erasure, non_erasure };

struct FitPoint {
    double x = 0;  // physical rate parameter
    double d = 0;  // code distance
    double p_l = 0;
    double weight = 1;
};

struct FitResult {
    double c = 0, x_th = 0, alpha = 0;
    AnsatzForm form = AnsatzForm::erasure;
    double residual = 0; // weighted RMS of log-residuals
};

/// Weighted least squares on log p_L = log c + alpha * D * (log x - log x_th)
/// with D = d (erasure) or d + 1 (non-erasure). Throws std::invalid_argument
/// on fewer than 3 points, p_L outside (0, 0.5), or a degenerate design
/// (e.g. a single distance).
FitResult fit_ansatz(const std::vector<FitPoint>& points, AnsatzForm form);

struct SweepRow {
    int64_t d1 = 0, r = 0;
    RunResult result;
    bool dominant = false;           // on the (V, p_L) Pareto front
    std::optional<std::string> error; // per-config failure, sweep continues
};

struct SweepConfig {
    int64_t d1 = 0;
    int64_t r = 0;
};

/// Runs run_protocol per (d1, r) hook-injection config under one scenario and
/// flags Pareto-dominant points (no other row with volume <= and p_L <=, one
/// strict). Failures are recorded per row.
std::vector<SweepRow> pareto_sweep(const std::vector<SweepConfig>& configs,
                                   const NoiseParams& params, const ErasurePlan& plan,
                                   const PostSelectionPolicy& policy, uint64_t shots,
                                   uint64_t seed, const std::string& scenario_tag = "");

/// CSV with the columns: scenario,d1,d2,r,shots,accepted,ar,ar_lo,ar_hi,
/// logical_fails,pl,pl_lo,pl_hi,volume. Optional timestamp comment header.
std::string results_csv(const std::vector<RunResult>& rows, bool header_timestamp);

} // namespace eml

#endif // EML_RUNNER_HPP
