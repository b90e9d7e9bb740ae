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

#include "eml/noise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace eml {

NoiseParams NoiseParams::uniform(double p, double e) {
    NoiseParams np;
    np.p1 = p / 10;
    np.p2 = p;
    np.p_spam = p;
    np.e1 = e / 10;
    np.e2 = e;
    np.e_spam = e;
    np.pn1 = p / 10;
    np.pn2 = p;
    np.pn_spam = p;
    return np;
}

NoiseParams NoiseParams::scenario(const std::string& name) {
    if (name == "non_erasure")
        return uniform(1e-3, 0.0);
    if (name == "near_perfect")
        return uniform(1e-4, 1e-3);
    if (name == "imperfect_4e3")
        return uniform(1e-4, 4e-3);
    if (name == "imperfect_1e2")
        return uniform(1e-4, 1e-2);
    throw std::invalid_argument("unknown noise scenario: " + name);
}

ErasurePlan ErasurePlan::all_qubits(const Circuit& circuit) {
    ErasurePlan plan;
    for (const Qubit& q : circuit.qubits)
        plan.erasure_qubits.insert(q.index);
    return plan;
}

ErasurePlan ErasurePlan::none() { return {}; }

double two_qubit_erasure_split(double e2) { return 1.0 - std::sqrt(1.0 - e2); }

double twirled_pauli_rate(double t, double t1) {
    return 0.75 - 0.25 * std::exp(-t / t1) - 0.5 * std::exp(-1.5 * t / t1);
}

double erasure_rate_from_time(double t, double t1) { return 1.0 - std::exp(-t / t1); }

double idle_pauli_rate(double t, double t1) { return t / (2.0 * t1); }

NoiseParams idling_adjusted_params(const NoiseParams& base, const IdlingModel& model) {
    (void)model;
    NoiseParams adjusted = base;
    adjusted.pn2 = (base.pn2 + base.e2) / 2.0;
    return adjusted;
}

namespace {

struct Annotator {
    const Circuit& in;
    const NoiseParams& params;
    const ErasurePlan& plan;
    int64_t from_round;
    int64_t to_round;

    Circuit out;
    std::vector<uint8_t> active;
    std::vector<uint8_t> measured_this_round;
    bool any_measurement_this_round = false;
    int64_t round = 0;
    int64_t inj_rounds = 0;
    int64_t inj_slots = 0;
    int64_t inj_end_instr = -1;
    int64_t end_check_round = -1;

    bool is_erasure(uint32_t q) const { return plan.erasure_qubits.count(q) != 0; }
    bool in_window() const { return round >= from_round && round < to_round; }

    void emit(Instruction inst) { out.instructions.push_back(std::move(inst)); }

    void emit_split(Op op, const std::vector<uint32_t>& targets, double p_erasure,
                    double p_normal) {
        std::vector<uint32_t> er, no;
        for (uint32_t q : targets)
            (is_erasure(q) ? er : no).push_back(q);
        if (!er.empty() && p_erasure > 0)
            emit({op, er, {}, p_erasure});
        if (!no.empty() && p_normal > 0)
            emit({op, no, {}, p_normal});
    }

    void emit_erase1(const std::vector<uint32_t>& targets, double rate) {
        if (rate <= 0)
            return;
        std::vector<uint32_t> er;
        for (uint32_t q : targets)
            if (is_erasure(q))
                er.push_back(q);
        if (!er.empty())
            emit({Op::ERASE1, er, {}, rate});
    }

    void touch(const std::vector<uint32_t>& targets) {
        for (uint32_t q : targets)
            active[q] = 1;
    }

    void end_of_round() {
        if (in_window() && any_measurement_this_round) {
            std::vector<uint32_t> idle;
            for (const Qubit& q : in.qubits)
                if (active[q.index] && !measured_this_round[q.index])
                    idle.push_back(q.index);
            std::sort(idle.begin(), idle.end());
            emit_split(Op::DEPOL1, idle, params.p1, params.pn1);
            emit_erase1(idle, params.e1);
            bool check_now = plan.cadence == DetectionCadence::per_round ||
                             (plan.cadence == DetectionCadence::end_only && round == end_check_round);
            if (check_now && !plan.erasure_qubits.empty()) {
                std::vector<uint32_t> checked;
                for (const Qubit& q : in.qubits)
                    if (active[q.index] && is_erasure(q.index))
                        checked.push_back(q.index);
                std::sort(checked.begin(), checked.end());
                if (!checked.empty()) {
                    emit({Op::ERASURE_CHECK, checked, {}, params.e_fp, params.e_fn});
                    if (round < inj_rounds)
                        inj_slots += static_cast<int64_t>(checked.size());
                }
            }
        }
        std::fill(measured_this_round.begin(), measured_this_round.end(), 0);
        any_measurement_this_round = false;
    }

    void run() {
        out.qubits = in.qubits;
        out.metadata = in.metadata;
        active.assign(in.qubits.size(), 0);
        measured_this_round.assign(in.qubits.size(), 0);
        inj_rounds = in.meta_int("inj_rounds", 0);

        // Last measurement-containing round inside the noise window; used by
        // the end_only cadence.
        int64_t scan_round = 0;
        bool meas_seen = false;
        for (const Instruction& inst : in.instructions) {
            if (is_measurement(inst.op))
                meas_seen = true;
            if (inst.op == Op::TICK) {
                if (meas_seen && scan_round >= from_round && scan_round < to_round)
                    end_check_round = scan_round;
                meas_seen = false;
                ++scan_round;
            }
        }
        if (meas_seen && scan_round >= from_round && scan_round < to_round)
            end_check_round = scan_round;

        for (const Instruction& inst : in.instructions) {
            if (is_noise(inst.op) || inst.op == Op::ERASURE_CHECK)
                throw std::invalid_argument("circuit is already annotated");
            for (uint32_t q : inst.targets)
                if (q >= in.qubits.size())
                    throw std::invalid_argument("instruction target out of range");
            bool window = in_window();
            switch (inst.op) {
                case Op::RESET_Z:
                case Op::RESET_X: {
                    touch(inst.targets);
                    emit(inst);
                    if (window) {
                        Op flip = inst.op == Op::RESET_Z ? Op::X_ERROR : Op::Z_ERROR;
                        emit_split(flip, inst.targets, params.p_spam, params.pn_spam);
                        emit_erase1(inst.targets, params.e_spam);
                    }
                    break;
                }
                case Op::MEASURE_Z:
                case Op::MEASURE_X: {
                    touch(inst.targets);
                    if (window) {
                        emit_erase1(inst.targets, params.e_spam);
                        Op flip = inst.op == Op::MEASURE_Z ? Op::X_ERROR : Op::Z_ERROR;
                        emit_split(flip, inst.targets, params.p_spam, params.pn_spam);
                    }
                    emit(inst);
                    for (uint32_t q : inst.targets)
                        measured_this_round[q] = 1;
                    any_measurement_this_round = true;
                    break;
                }
                case Op::H:
                case Op::S:
                case Op::S_DAG:
                case Op::T: {
                    touch(inst.targets);
                    emit(inst);
                    if (window) {
                        emit_split(Op::DEPOL1, inst.targets, params.p1, params.pn1);
                        emit_erase1(inst.targets, params.e1);
                    }
                    break;
                }
                case Op::CX: {
                    touch(inst.targets);
                    emit(inst);
                    if (window) {
                        for (size_t i = 0; i + 1 < inst.targets.size(); i += 2) {
                            uint32_t a = inst.targets[i];
                            uint32_t b = inst.targets[i + 1];
                            bool ea = is_erasure(a);
                            bool eb = is_erasure(b);
                            double p2 = (ea && eb) ? params.p2 : params.pn2;
                            if (p2 > 0)
                                emit({Op::DEPOL2, {a, b}, {}, p2});
                            if (params.e2 > 0) {
                                if (ea && eb)
                                    emit({Op::ERASE2, {a, b}, {}, params.e2});
                                else if (ea || eb)
                                    emit({Op::ERASE1,
                                          {ea ? a : b},
                                          {},
                                          two_qubit_erasure_split(params.e2)});
                            }
                        }
                    }
                    break;
                }
                case Op::TICK: {
                    end_of_round();
                    emit(inst);
                    ++round;
                    if (round == inj_rounds)
                        inj_end_instr = static_cast<int64_t>(out.instructions.size()) - 1;
                    break;
                }
                default:
                    emit(inst);
                    break;
            }
        }
        end_of_round();

        out.set_meta("annotated", 1);
        out.set_meta("inj_erasure_slots", inj_slots);
        if (inj_end_instr >= 0)
            out.set_meta("inj_end_instr", inj_end_instr);
    }
};

} // namespace

Circuit annotate(const Circuit& circuit, const NoiseParams& params, const ErasurePlan& plan,
                 const AnnotateOptions& options) {
    for (uint32_t q : plan.erasure_qubits)
        if (q >= circuit.qubits.size())
            throw std::invalid_argument("erasure plan references unknown qubit");
    Annotator ann{circuit, params, plan, options.from_round,
                  options.to_round.value_or(circuit.meta_int(
                      "noiseless_from_round", std::numeric_limits<int64_t>::max()))};
    ann.run();
    return std::move(ann.out);
}

} // namespace eml
