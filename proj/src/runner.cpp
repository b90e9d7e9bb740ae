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

#include "eml/runner.hpp"

#include <algorithm>
#include <cmath>
#include <ctime>
#include <sstream>
#include <stdexcept>

#include "eml/builders.hpp"
#include "eml/dem.hpp"
#include "eml/faults.hpp"
#include "eml/matching.hpp"
#include "eml/sampler.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace eml {

namespace {

using ErasedLocations = std::vector<std::pair<uint32_t, uint32_t>>;

/// For flag-based detection cadences: candidate erasure locations behind each
/// flag slot, in sampler slot order. A flag at a check says "this qubit was
/// erased since its previous check"; the decoder zero-weights every erasure
/// location of that qubit inside the window (the per-round reweighting
/// approximation).
std::vector<ErasedLocations> flag_slot_candidates(const Circuit& c) {
    std::vector<ErasedLocations> slots;
    std::vector<ErasedLocations> pending(c.qubits.size());
    for (uint32_t idx = 0; idx < c.instructions.size(); ++idx) {
        const Instruction& inst = c.instructions[idx];
        switch (inst.op) {
            case Op::ERASE1:
                for (uint32_t q : inst.targets)
                    pending[q].push_back({idx, q});
                break;
            case Op::ERASE2:
                for (uint32_t q : inst.targets)
                    pending[q].push_back({idx, q});
                break;
            case Op::ERASURE_CHECK:
                for (uint32_t q : inst.targets) {
                    slots.push_back(std::move(pending[q]));
                    pending[q].clear();
                }
                break;
            default:
                break;
        }
    }
    return slots;
}

} // namespace

Estimate wilson_estimate(uint64_t k, uint64_t n) {
    Estimate e;
    e.n = n;
    e.k = k;
    if (n == 0)
        return e;
    const double z = 1.959963984540054;
    double p = double(k) / double(n);
    e.rate = p;
    double nn = double(n);
    double denom = 1 + z * z / nn;
    double center = (p + z * z / (2 * nn)) / denom;
    double half = z * std::sqrt(p * (1 - p) / nn + z * z / (4 * nn * nn)) / denom;
    // center - half is analytically 0 at k = 0 (and 1 at k = n); keep the
    // bounds exact there instead of leaving rounding residue.
    e.ci_low = k == 0 ? 0.0 : std::max(0.0, center - half);
    e.ci_high = k == n ? 1.0 : std::min(1.0, center + half);
    return e;
}

RunResult run_protocol(const Circuit& clean, const NoiseParams& params,
                       const ErasurePlan& plan, const PostSelectionPolicy& policy,
                       uint64_t shots, uint64_t seed, const std::string& scenario_tag,
                       const AnnotateOptions& annotate_options) {
    Circuit noisy = annotate(clean, params, plan, annotate_options);
    bool per_gate = plan.cadence == DetectionCadence::per_gate;
    DetectorErrorModel dem = build_dem(noisy);
    Matcher matcher(dem);

    int64_t inj_detectors = noisy.meta_int("inj_detectors", 0);
    int64_t inj_slots = noisy.meta_int("inj_erasure_slots", 0);
    int64_t inj_end = noisy.meta_int("inj_end_instr",
                                     int64_t(noisy.instructions.size()));
    std::vector<ErasedLocations> slot_candidates;
    if (!per_gate)
        slot_candidates = flag_slot_candidates(noisy);

    uint64_t accepted = 0, fails = 0;
#ifdef _OPENMP
#pragma omp parallel reduction(+ : accepted, fails)
#endif
    {
        FrameSampler sampler(noisy, per_gate);
        ShotRecord rec;
        ErasedLocations erased;
#ifdef _OPENMP
#pragma omp for schedule(static)
#endif
        for (int64_t s = 0; s < int64_t(shots); ++s) {
            sampler.sample_shot(seed, uint64_t(s), rec);
            // Erasure rule over the injection window.
            int flagged = 0;
            if (per_gate) {
                for (const auto& loc : rec.erased_locations)
                    flagged += int64_t(loc.first) <= inj_end;
            } else {
                for (int64_t i = 0; i < inj_slots; ++i)
                    flagged += rec.erasure_flags[size_t(i)];
            }
            if (flagged >= policy.discard_threshold)
                continue;
            // Pauli rule: any nontrivial injection-window detector.
            if (policy.pauli_rule) {
                bool fired = false;
                for (int64_t d = 0; d < inj_detectors && !fired; ++d)
                    fired = rec.detectors[size_t(d)];
                if (fired)
                    continue;
            }
            ++accepted;
            erased.clear();
            if (per_gate) {
                erased = rec.erased_locations;
            } else {
                for (size_t i = 0; i < rec.erasure_flags.size(); ++i)
                    if (rec.erasure_flags[i] && i < slot_candidates.size())
                        erased.insert(erased.end(), slot_candidates[i].begin(),
                                      slot_candidates[i].end());
            }
            MatchResult res = matcher.decode(rec.detectors, erased);
            uint8_t predicted = 0;
            for (uint32_t o : res.observables)
                predicted ^= o == 0;
            fails += predicted != rec.observable_flip;
        }
    }

    RunResult result;
    result.scenario = scenario_tag;
    result.shots = shots;
    result.d1 = noisy.meta_int("d1", 0);
    result.d2 = noisy.meta_int("d2", result.d1);
    result.r = noisy.meta_int("r", 0);
    result.acceptance = wilson_estimate(accepted, shots);
    result.logical = wilson_estimate(fails, accepted);
    if (accepted > 0) {
        double q = double(noisy.meta_int("q_inner", 0));
        result.volume = q * double(result.r) / result.acceptance.rate;
        result.volume_defined = true;
    }
    return result;
}

std::pair<double, double> acceptance_prediction(const Circuit& annotated) {
    int64_t inj_end =
        annotated.meta_int("inj_end_instr", int64_t(annotated.instructions.size()));
    double ar_e = 1;
    for (int64_t idx = 0; idx <= inj_end && idx < int64_t(annotated.instructions.size());
         ++idx) {
        const Instruction& inst = annotated.instructions[size_t(idx)];
        if (inst.op == Op::ERASE1)
            ar_e *= std::pow(1 - inst.arg0, double(inst.targets.size()));
        else if (inst.op == Op::ERASE2)
            ar_e *= std::pow(1 - inst.arg0, double(inst.targets.size() / 2));
    }
    FaultReport report = detection_histogram(enumerate_faults(annotated), annotated);
    return {ar_e, report.ar_p};
}

FitResult fit_ansatz(const std::vector<FitPoint>& points, AnsatzForm form) {
    if (points.size() < 3)
        throw std::invalid_argument("ansatz fit needs at least 3 points");
    // log p_L = b0 + b1 * D + b2 * D log x, with alpha = b2,
    // x_th = exp(-b1 / b2), c = exp(b0).
    double ata[3][3] = {};
    double atb[3] = {};
    for (const FitPoint& pt : points) {
        if (!(pt.p_l > 0 && pt.p_l < 0.5))
            throw std::invalid_argument("ansatz fit requires p_L in (0, 0.5)");
        if (!(pt.x > 0) || !(pt.weight > 0))
            throw std::invalid_argument("ansatz fit requires positive x and weight");
        double D = form == AnsatzForm::erasure ? pt.d : pt.d + 1;
        double row[3] = {1, D, D * std::log(pt.x)};
        double y = std::log(pt.p_l);
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j)
                ata[i][j] += pt.weight * row[i] * row[j];
            atb[i] += pt.weight * row[i] * y;
        }
    }
    // Gaussian elimination with partial pivoting; a tiny pivot relative to
    // the column scale means the design is rank deficient (e.g. one d).
    double scale = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            scale = std::max(scale, std::abs(ata[i][j]));
    double beta[3];
    {
        double a[3][4];
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j)
                a[i][j] = ata[i][j];
            a[i][3] = atb[i];
        }
        for (int col = 0; col < 3; ++col) {
            int piv = col;
            for (int rr = col + 1; rr < 3; ++rr)
                if (std::abs(a[rr][col]) > std::abs(a[piv][col]))
                    piv = rr;
            if (std::abs(a[piv][col]) < 1e-9 * scale)
                throw std::invalid_argument(
                    "ansatz fit design is rank deficient; need multiple distances");
            std::swap(a[col], a[piv]);
            for (int rr = 0; rr < 3; ++rr) {
                if (rr == col)
                    continue;
                double f = a[rr][col] / a[col][col];
                for (int cc = col; cc < 4; ++cc)
                    a[rr][cc] -= f * a[col][cc];
            }
        }
        for (int i = 0; i < 3; ++i)
            beta[i] = a[i][3] / a[i][i];
    }
    if (beta[2] == 0)
        throw std::invalid_argument("ansatz fit found zero scaling exponent");
    FitResult fit;
    fit.form = form;
    fit.alpha = beta[2];
    fit.x_th = std::exp(-beta[1] / beta[2]);
    fit.c = std::exp(beta[0]);
    double ssr = 0, sw = 0;
    for (const FitPoint& pt : points) {
        double D = form == AnsatzForm::erasure ? pt.d : pt.d + 1;
        double pred = beta[0] + beta[1] * D + beta[2] * D * std::log(pt.x);
        double r = std::log(pt.p_l) - pred;
        ssr += pt.weight * r * r;
        sw += pt.weight;
    }
    fit.residual = std::sqrt(ssr / sw);
    return fit;
}

std::vector<SweepRow> pareto_sweep(const std::vector<SweepConfig>& configs,
                                   const NoiseParams& params, const ErasurePlan& plan,
                                   const PostSelectionPolicy& policy, uint64_t shots,
                                   uint64_t seed, const std::string& scenario_tag) {
    std::vector<SweepRow> rows;
    for (const SweepConfig& cfg : configs) {
        SweepRow row;
        row.d1 = cfg.d1;
        row.r = cfg.r;
        try {
            Circuit clean =
                build_hook_injection({uint32_t(cfg.d1), uint32_t(cfg.r)});
            row.result =
                run_protocol(clean, params, plan, policy, shots, seed, scenario_tag);
        } catch (const std::exception& ex) {
            row.error = ex.what();
        }
        rows.push_back(std::move(row));
    }
    for (SweepRow& row : rows) {
        if (row.error || !row.result.volume_defined)
            continue;
        bool dominated = false;
        for (const SweepRow& other : rows) {
            if (&other == &row || other.error || !other.result.volume_defined)
                continue;
            bool le_v = other.result.volume <= row.result.volume;
            bool le_p = other.result.logical.rate <= row.result.logical.rate;
            bool strict = other.result.volume < row.result.volume ||
                          other.result.logical.rate < row.result.logical.rate;
            if (le_v && le_p && strict) {
                dominated = true;
                break;
            }
        }
        row.dominant = !dominated;
    }
    return rows;
}

std::string results_csv(const std::vector<RunResult>& rows, bool header_timestamp) {
    std::ostringstream ss;
    ss.precision(10);
    if (header_timestamp) {
        std::time_t now = std::time(nullptr);
        char buf[64];
        std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
        ss << "# generated " << buf << "\n";
    }
    ss << "scenario,d1,d2,r,shots,accepted,ar,ar_lo,ar_hi,logical_fails,pl,pl_lo,pl_hi,"
          "volume\n";
    for (const RunResult& r : rows) {
        ss << r.scenario << "," << r.d1 << "," << r.d2 << "," << r.r << "," << r.shots
           << "," << r.acceptance.k << "," << r.acceptance.rate << ","
           << r.acceptance.ci_low << "," << r.acceptance.ci_high << "," << r.logical.k
           << "," << r.logical.rate << "," << r.logical.ci_low << "," << r.logical.ci_high
           << ",";
        if (r.volume_defined)
            ss << r.volume;
        else
            ss << "nan";
        ss << "\n";
    }
    return ss.str();
}

} // namespace eml
