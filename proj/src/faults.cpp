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

#include "eml/faults.hpp"

#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

#include "eml/detail/reverse_pass.hpp"
#include "eml/tableau.hpp"

namespace eml {

namespace {

using detail::Mask;

std::vector<uint32_t> parse_index_list(const std::string& s) {
    std::vector<uint32_t> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(static_cast<uint32_t>(std::stoul(item)));
    return out;
}

/// Pushes one Pauli fault forward to the end of the circuit, collecting the
/// flipped measurement records and the surviving residual, then buckets the
/// result into mechanism groups. Two faults are one mechanism when they flip
/// the same records and their residuals differ only by a stabilizer of the
/// noiseless final state: such faults act identically on every run, so their
/// probabilities add in the closed-form coefficient counts.
struct ForwardTracer {
    const Circuit& c;
    std::vector<size_t> meas_base; // measurement records before instruction i
    Tableau final_state;
    struct Group {
        std::string flips;
        int logical;
        std::vector<uint8_t> px, pz;
    };
    std::vector<Group> groups;

    explicit ForwardTracer(const Circuit& circuit)
        : c(circuit), final_state(circuit.qubits.size()) {
        meas_base.reserve(c.instructions.size());
        size_t meas = 0;
        for (const Instruction& inst : c.instructions) {
            meas_base.push_back(meas);
            if (is_measurement(inst.op))
                meas += inst.targets.size();
        }
        // The stabilizer group of the final state is branch-independent, so a
        // fixed branch convention suffices for membership tests.
        for (const Instruction& inst : c.instructions)
            switch (inst.op) {
                case Op::H:
                    for (uint32_t q : inst.targets)
                        final_state.apply_h(q);
                    break;
                case Op::S:
                    for (uint32_t q : inst.targets)
                        final_state.apply_s(q);
                    break;
                case Op::S_DAG:
                    for (uint32_t q : inst.targets)
                        final_state.apply_s_dag(q);
                    break;
                case Op::CX:
                    for (size_t t = 0; t + 1 < inst.targets.size(); t += 2)
                        final_state.apply_cx(inst.targets[t], inst.targets[t + 1]);
                    break;
                case Op::RESET_Z:
                    for (uint32_t q : inst.targets)
                        final_state.reset_z(q, false);
                    break;
                case Op::RESET_X:
                    for (uint32_t q : inst.targets)
                        final_state.reset_x(q, false);
                    break;
                case Op::MEASURE_Z:
                    for (uint32_t q : inst.targets)
                        final_state.measure_z(q, false);
                    break;
                case Op::MEASURE_X:
                    for (uint32_t q : inst.targets)
                        final_state.measure_x(q, false);
                    break;
                default:
                    break;
            }
    }

    /// Mechanism key: opaque, equal keys mean one physical mechanism. The
    /// logical coset enters the key because the fully measured final state
    /// also stabilizes the recorded logical, which must not license merges
    /// across cosets.
    std::string trace(size_t idx, const std::vector<std::pair<uint32_t, int>>& paulis,
                      int logical) {
        std::vector<uint8_t> px(c.qubits.size(), 0), pz(c.qubits.size(), 0);
        for (auto [q, p] : paulis) {
            if (p == 1 || p == 2)
                px[q] ^= 1;
            if (p == 3 || p == 2)
                pz[q] ^= 1;
        }
        std::string flips;
        for (size_t i = idx + 1; i < c.instructions.size(); ++i) {
            const Instruction& inst = c.instructions[i];
            switch (inst.op) {
                case Op::H:
                    for (uint32_t q : inst.targets)
                        std::swap(px[q], pz[q]);
                    break;
                case Op::S:
                case Op::S_DAG:
                    // X conjugates to +-Y; the frame ignores the sign.
                    for (uint32_t q : inst.targets)
                        pz[q] ^= px[q];
                    break;
                case Op::CX:
                    for (size_t t = 0; t + 1 < inst.targets.size(); t += 2) {
                        px[inst.targets[t + 1]] ^= px[inst.targets[t]];
                        pz[inst.targets[t]] ^= pz[inst.targets[t + 1]];
                    }
                    break;
                case Op::RESET_Z:
                case Op::RESET_X:
                    for (uint32_t q : inst.targets)
                        px[q] = pz[q] = 0;
                    break;
                case Op::MEASURE_Z:
                    for (size_t t = 0; t < inst.targets.size(); ++t) {
                        uint32_t q = inst.targets[t];
                        if (px[q])
                            flips += 'm' + std::to_string(meas_base[i] + t) + ';';
                        // The collapsed qubit is a Z eigenstate: drop Z.
                        pz[q] = 0;
                    }
                    break;
                case Op::MEASURE_X:
                    for (size_t t = 0; t < inst.targets.size(); ++t) {
                        uint32_t q = inst.targets[t];
                        if (pz[q])
                            flips += 'm' + std::to_string(meas_base[i] + t) + ';';
                        px[q] = 0;
                    }
                    break;
                default:
                    break;
            }
        }
        for (size_t g = 0; g < groups.size(); ++g) {
            if (groups[g].logical != logical || groups[g].flips != flips)
                continue;
            // Residuals differing by a (possibly signed) stabilizer of the
            // final state have identical fault action.
            std::vector<std::pair<size_t, int>> product;
            for (size_t q = 0; q < px.size(); ++q) {
                uint8_t dx = uint8_t(px[q] ^ groups[g].px[q]);
                uint8_t dz = uint8_t(pz[q] ^ groups[g].pz[q]);
                if (dx || dz)
                    product.push_back({q, (dx && dz) ? 2 : dx ? 1 : 3});
            }
            if (product.empty() || final_state.pauli_expectation(product) != 0)
                return std::to_string(g);
        }
        groups.push_back({std::move(flips), logical, std::move(px), std::move(pz)});
        return std::to_string(groups.size() - 1);
    }
};

struct FaultEnumerator {
    const Circuit& c;
    detail::SensitivityPass pass;
    ForwardTracer tracer;
    FaultEnumeration out;
    uint32_t bit_obs, bit_z, bit_x;

    explicit FaultEnumerator(const Circuit& circuit)
        : c(circuit), pass(circuit, 2), tracer(circuit) {
        auto zit = c.metadata.find("z_l");
        auto xit = c.metadata.find("x_l");
        if (zit == c.metadata.end() || xit == c.metadata.end())
            throw std::invalid_argument(
                "fault enumeration requires z_l/x_l logical metadata");
        bit_obs = static_cast<uint32_t>(pass.num_det);
        bit_z = static_cast<uint32_t>(pass.num_det + pass.num_obs);
        bit_x = bit_z + 1;
        out.num_detectors = pass.num_det;
        out.num_observables = pass.num_obs;
        out.inj_detectors = c.meta_int("inj_detectors", 0);
        out.words = pass.words;
        out.logical_bit_z = bit_z;
        out.logical_bit_x = bit_x;
        // Seed the logical anticommutation bits at the end of the circuit:
        // an X on a Z_L qubit anticommutes with Z_L, a Z on an X_L qubit
        // with X_L.
        for (uint32_t q : parse_index_list(zit->second))
            detail::mask_flip(pass.sx[q], bit_z);
        for (uint32_t q : parse_index_list(xit->second))
            detail::mask_flip(pass.sz[q], bit_x);
    }

    void classify(const Mask& sig, Fault& f) const {
        bool window = false, any_det = false;
        for (uint32_t d = 0; d < uint32_t(pass.num_det) && !(window && any_det); ++d)
            if (detail::mask_test(sig, d)) {
                any_det = true;
                if (int64_t(d) < out.inj_detectors)
                    window = true;
            }
        bool az = detail::mask_test(sig, bit_z);
        bool ax = detail::mask_test(sig, bit_x);
        // Coset order: 0=I, (1,0)=X_L, (0,1)=Z_L, (1,1)=Y_L.
        static const int coset[4] = {0, 1, 3, 2};
        int raw = coset[(az ? 1 : 0) | (ax ? 2 : 0)];
        bool flips_obs = pass.num_obs > 0 ? detail::mask_test(sig, bit_obs)
                                          : az != ax;
        if (window) {
            f.logical = raw;
            f.cls = FaultClass::detected;
        } else if (any_det) {
            f.logical = raw;
            f.cls = FaultClass::harmless;
        } else if (flips_obs) {
            // A detector-silent fault flips the recorded logical exactly when
            // its residual sits in the X_L or Z_L coset: Y_L = X_L * Z_L, and
            // swapping a representative by a stabilizer would fire detectors.
            f.logical = (az && !ax) ? 1 : (!az && ax) ? 3 : (az ? 1 : 3);
            f.cls = FaultClass::undetected_logical;
        } else if (az && ax) {
            // Silent and record-neutral: a pure Y_L residual on the state.
            f.logical = 2;
            f.cls = FaultClass::undetected_logical;
        } else {
            f.logical = 0;
            f.cls = FaultClass::harmless;
        }
    }

    void add_fault(size_t idx, uint32_t term, Op source, double p,
                   const std::vector<std::pair<uint32_t, int>>& paulis) {
        Mask sig(pass.words, 0);
        for (auto [q, pl] : paulis) {
            if (pl == 1 || pl == 2)
                detail::mask_xor(sig, pass.sx[q]);
            if (pl == 3 || pl == 2)
                detail::mask_xor(sig, pass.sz[q]);
        }
        Fault f;
        f.instruction = static_cast<uint32_t>(idx);
        f.term = term;
        f.source = source;
        f.probability = p;
        classify(sig, f);
        out.faults.push_back(f);
        out.signatures.insert(out.signatures.end(), sig.begin(), sig.end());
        bool pauli_source = source == Op::DEPOL1 || source == Op::DEPOL2 ||
                            source == Op::X_ERROR || source == Op::Z_ERROR;
        out.mechanisms.push_back(f.cls == FaultClass::undetected_logical && pauli_source
                                     ? tracer.trace(idx, paulis, f.logical)
                                     : std::string());
    }

    void on_noise(size_t idx, const Instruction& inst) {
        uint32_t term = 0;
        switch (inst.op) {
            case Op::X_ERROR:
                for (uint32_t q : inst.targets)
                    add_fault(idx, term++, inst.op, inst.arg0, {{q, 1}});
                break;
            case Op::Z_ERROR:
                for (uint32_t q : inst.targets)
                    add_fault(idx, term++, inst.op, inst.arg0, {{q, 3}});
                break;
            case Op::DEPOL1:
                for (uint32_t q : inst.targets)
                    for (int p = 1; p <= 3; ++p)
                        add_fault(idx, term++, inst.op, inst.arg0 / 3, {{q, p}});
                break;
            case Op::ERASE1:
                for (uint32_t q : inst.targets)
                    for (int p = 1; p <= 3; ++p)
                        add_fault(idx, term++, inst.op, inst.arg0 / 4, {{q, p}});
                break;
            case Op::DEPOL2:
            case Op::ERASE2:
                for (size_t i = 0; i + 1 < inst.targets.size(); i += 2) {
                    uint32_t a = inst.targets[i], b = inst.targets[i + 1];
                    double share = inst.op == Op::DEPOL2 ? inst.arg0 / 15 : inst.arg0 / 16;
                    for (int pa = 0; pa <= 3; ++pa)
                        for (int pb = 0; pb <= 3; ++pb) {
                            if (pa == 0 && pb == 0)
                                continue;
                            std::vector<std::pair<uint32_t, int>> ps;
                            if (pa)
                                ps.emplace_back(a, pa);
                            if (pb)
                                ps.emplace_back(b, pb);
                            add_fault(idx, term++, inst.op, share, ps);
                        }
                }
                break;
            default:
                break;
        }
    }
};

bool is_pauli_source(Op op) {
    return op == Op::DEPOL1 || op == Op::DEPOL2 || op == Op::X_ERROR || op == Op::Z_ERROR;
}

} // namespace

FaultEnumeration enumerate_faults(const Circuit& circuit) {
    FaultEnumerator e(circuit);
    e.pass.run([&e](size_t idx, const Instruction& inst) { e.on_noise(idx, inst); });
    // The reverse walk visits instructions back to front; present faults in
    // circuit order.
    FaultEnumeration sorted;
    sorted.num_detectors = e.out.num_detectors;
    sorted.inj_detectors = e.out.inj_detectors;
    sorted.words = e.out.words;
    sorted.num_observables = e.out.num_observables;
    sorted.logical_bit_z = e.out.logical_bit_z;
    sorted.logical_bit_x = e.out.logical_bit_x;
    sorted.faults.reserve(e.out.faults.size());
    sorted.mechanisms.reserve(e.out.faults.size());
    sorted.signatures.reserve(e.out.signatures.size());
    // Faults within one instruction were emitted forward, so reversing the
    // per-instruction groups restores circuit order.
    std::vector<size_t> starts;
    size_t i = 0;
    while (i < e.out.faults.size()) {
        size_t j = i;
        while (j < e.out.faults.size() &&
               e.out.faults[j].instruction == e.out.faults[i].instruction)
            ++j;
        starts.push_back(i);
        i = j;
    }
    for (size_t s = starts.size(); s-- > 0;) {
        size_t begin = starts[s];
        size_t end = s + 1 < starts.size() ? starts[s + 1] : e.out.faults.size();
        for (size_t f = begin; f < end; ++f) {
            sorted.faults.push_back(e.out.faults[f]);
            sorted.mechanisms.push_back(std::move(e.out.mechanisms[f]));
            sorted.signatures.insert(sorted.signatures.end(),
                                     e.out.signatures.begin() + f * e.out.words,
                                     e.out.signatures.begin() + (f + 1) * e.out.words);
        }
    }
    return sorted;
}

FaultCoefficients coefficients(const FaultEnumeration& enumeration) {
    FaultCoefficients co;
    // Mechanisms deduplicate within one source rate only: the closed-form
    // coefficients weight p1 and p2 terms differently.
    std::set<std::pair<int, std::string>> seen;
    for (size_t i = 0; i < enumeration.faults.size(); ++i) {
        const Fault& f = enumeration.faults[i];
        if (f.cls != FaultClass::undetected_logical || !is_pauli_source(f.source))
            continue;
        int source = f.source == Op::DEPOL1 ? 0 : f.source == Op::DEPOL2 ? 1 : 2;
        ++co.term_channel[source][f.logical];
        if (seen.insert({source, enumeration.mechanisms[i]}).second)
            ++co.channel[source][f.logical];
    }
    co.n_a = co.channel[0][1] + co.channel[0][3];
    co.n_b = co.channel[1][1] + co.channel[1][3];
    co.n_c = co.channel[2][1] + co.channel[2][3];
    co.n_a_terms = co.term_channel[0][1] + co.term_channel[0][3];
    co.n_b_terms = co.term_channel[1][1] + co.term_channel[1][3];
    co.n_c_terms = co.term_channel[2][1] + co.term_channel[2][3];
    co.a = double(co.n_a) / 3.0;
    co.b = double(co.n_b) / 15.0;
    co.c = double(co.n_c);
    co.effective_factor = co.a / 10.0 + co.b + co.c;
    co.term_factor = double(co.n_a_terms) / 30.0 + double(co.n_b_terms) / 15.0 +
                     double(co.n_c_terms);
    return co;
}

FaultReport detection_histogram(const FaultEnumeration& enumeration, const Circuit& circuit) {
    FaultReport report;
    report.histogram_1q.assign(11, 0);
    report.histogram_2q.assign(11, 0);
    report.histogram_spam.assign(11, 0);
    size_t i = 0;
    const auto& faults = enumeration.faults;
    while (i < faults.size()) {
        const Fault& first = faults[i];
        if (!is_pauli_source(first.source)) {
            size_t j = i;
            while (j < faults.size() && faults[j].instruction == first.instruction)
                ++j;
            i = j;
            continue;
        }
        const Instruction& inst = circuit.instructions[first.instruction];
        uint32_t terms_per_unit = inst.op == Op::DEPOL2 ? 15 : inst.op == Op::DEPOL1 ? 3 : 1;
        size_t j = i;
        uint32_t unit = 0;
        while (j < faults.size() && faults[j].instruction == first.instruction) {
            GateDetection g;
            g.instruction = first.instruction;
            g.unit = unit++;
            g.source = inst.op;
            g.p_gate = inst.arg0;
            g.terms = terms_per_unit;
            for (uint32_t t = 0; t < terms_per_unit; ++t, ++j)
                g.detected_terms += faults[j].cls == FaultClass::detected;
            double fraction = double(g.detected_terms) / double(g.terms);
            g.p_detected = g.p_gate * fraction;
            report.ar_p *= 1.0 - g.p_detected;
            size_t bucket = fraction >= 1.0 ? 10 : size_t(fraction * 10.0);
            if (inst.op == Op::DEPOL2)
                ++report.histogram_2q[bucket];
            else if (inst.op == Op::DEPOL1)
                ++report.histogram_1q[bucket];
            else
                ++report.histogram_spam[bucket];
            report.gates.push_back(g);
        }
        i = j;
    }
    return report;
}

PairSummary second_order_undetected(const FaultEnumeration& e) {
    PairSummary summary;
    size_t n = e.faults.size(), w = e.words;
    std::vector<uint32_t> pauli;
    for (uint32_t i = 0; i < n; ++i)
        if (is_pauli_source(e.faults[i].source))
            pauli.push_back(i);
    std::vector<uint64_t> combined(w);
    for (size_t a = 0; a < pauli.size(); ++a) {
        for (size_t b = a + 1; b < pauli.size(); ++b) {
            ++summary.pairs_examined;
            const uint64_t* sa = e.signatures.data() + size_t(pauli[a]) * w;
            const uint64_t* sb = e.signatures.data() + size_t(pauli[b]) * w;
            for (size_t k = 0; k < w; ++k)
                combined[k] = sa[k] ^ sb[k];
            bool any_det = false;
            for (uint32_t d = 0; d < uint32_t(e.num_detectors) && !any_det; ++d)
                any_det = combined[d / 64] >> (d % 64) & 1;
            if (any_det)
                continue;
            bool flips;
            if (e.num_observables > 0) {
                size_t ob = e.num_detectors;
                flips = combined[ob / 64] >> (ob % 64) & 1;
            } else {
                bool az = combined[e.logical_bit_z / 64] >> (e.logical_bit_z % 64) & 1;
                bool ax = combined[e.logical_bit_x / 64] >> (e.logical_bit_x % 64) & 1;
                // Skip identity and Y_L residuals; Y_L stabilizes the state.
                flips = (az && !ax) || (!az && ax);
            }
            if (!flips)
                continue;
            ++summary.undetected_pairs;
            summary.rate += e.faults[pauli[a]].probability * e.faults[pauli[b]].probability;
        }
    }
    return summary;
}

} // namespace eml
