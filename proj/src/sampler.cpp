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

#include "eml/sampler.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "eml/pauli_draw.hpp"

namespace eml {

FrameSampler::FrameSampler(const Circuit& circuit, bool per_gate_detection)
    : c_(&circuit), per_gate_(per_gate_detection) {
    num_detectors_ = circuit.num_detectors();
    num_flag_slots_ = 0;
    erase2_split_.assign(circuit.instructions.size(), 0.0);
    for (size_t i = 0; i < circuit.instructions.size(); ++i) {
        const Instruction& inst = circuit.instructions[i];
        if (inst.op == Op::T)
            throw std::invalid_argument("sampler refuses T; inject |S> instead");
        if (inst.op == Op::ERASE2)
            erase2_split_[i] = 1.0 - std::sqrt(1.0 - inst.arg0);
        if (inst.op == Op::ERASURE_CHECK && !per_gate_)
            num_flag_slots_ += inst.targets.size();
    }
    fx_.assign(circuit.qubits.size(), 0);
    fz_.assign(circuit.qubits.size(), 0);
    erased_.assign(circuit.qubits.size(), 0);
    meas_flips_.assign(circuit.num_measurements(), 0);
}

void FrameSampler::sample_shot(uint64_t seed, uint64_t shot, ShotRecord& out) {
    CounterRng rng(seed, shot);
    std::fill(fx_.begin(), fx_.end(), 0);
    std::fill(fz_.begin(), fz_.end(), 0);
    std::fill(erased_.begin(), erased_.end(), 0);
    out.detectors.clear();
    out.detectors.reserve(num_detectors_);
    out.erasure_flags.clear();
    out.erasure_flags.reserve(num_flag_slots_);
    out.erased_locations.clear();
    out.observable_flip = 0;
    out.seed = seed;
    out.shot = shot;
    size_t meas = 0;

    auto randomize = [&](uint32_t q) {
        uint64_t u = rng.next_u64();
        fx_[q] = u & 1;
        fz_[q] = (u >> 1) & 1;
    };
    auto apply_pauli = [&](uint32_t q, uint32_t p) {
        fx_[q] ^= (p == 1 || p == 2);
        fz_[q] ^= (p >= 2);
    };

    const auto& instructions = c_->instructions;
    for (size_t idx = 0; idx < instructions.size(); ++idx) {
        const Instruction& inst = instructions[idx];
        switch (inst.op) {
            case Op::RESET_Z:
            case Op::RESET_X:
                for (uint32_t q : inst.targets) {
                    fx_[q] = fz_[q] = 0;
                    erased_[q] = 0;
                }
                break;
            case Op::H:
                for (uint32_t q : inst.targets) {
                    std::swap(fx_[q], fz_[q]);
                    if (erased_[q])
                        randomize(q);
                }
                break;
            case Op::S:
            case Op::S_DAG:
                for (uint32_t q : inst.targets) {
                    fz_[q] ^= fx_[q];
                    if (erased_[q])
                        randomize(q);
                }
                break;
            case Op::CX:
                for (size_t i = 0; i + 1 < inst.targets.size(); i += 2) {
                    uint32_t ctrl = inst.targets[i], tgt = inst.targets[i + 1];
                    fx_[tgt] ^= fx_[ctrl];
                    fz_[ctrl] ^= fz_[tgt];
                    // An erased qubit fully depolarizes its partner.
                    if (erased_[ctrl] || erased_[tgt]) {
                        randomize(ctrl);
                        randomize(tgt);
                    }
                }
                break;
            case Op::MEASURE_Z:
                for (uint32_t q : inst.targets) {
                    uint8_t flip;
                    if (erased_[q]) {
                        flip = rng.next_u64() & 1;
                        fx_[q] = flip;
                    } else {
                        flip = fx_[q];
                    }
                    fz_[q] = 0;
                    meas_flips_[meas++] = flip;
                }
                break;
            case Op::MEASURE_X:
                for (uint32_t q : inst.targets) {
                    uint8_t flip;
                    if (erased_[q]) {
                        flip = rng.next_u64() & 1;
                        fz_[q] = flip;
                    } else {
                        flip = fz_[q];
                    }
                    fx_[q] = 0;
                    meas_flips_[meas++] = flip;
                }
                break;
            case Op::DEPOL1:
            case Op::DEPOL2:
            case Op::X_ERROR:
            case Op::Z_ERROR:
                detail::draw_pauli_noise(inst, rng, apply_pauli);
                break;
            case Op::ERASE1:
                for (uint32_t q : inst.targets)
                    if (rng.bernoulli(inst.arg0)) {
                        out.erased_locations.emplace_back(uint32_t(idx), q);
                        randomize(q);
                        erased_[q] = !per_gate_;
                    }
                break;
            case Op::ERASE2:
                for (size_t i = 0; i + 1 < inst.targets.size(); i += 2) {
                    uint32_t a = inst.targets[i], b = inst.targets[i + 1];
                    bool ea = rng.bernoulli(erase2_split_[idx]);
                    bool eb = rng.bernoulli(erase2_split_[idx]);
                    if (ea)
                        out.erased_locations.emplace_back(uint32_t(idx), a);
                    if (eb)
                        out.erased_locations.emplace_back(uint32_t(idx), b);
                    if (ea || eb) {
                        randomize(a);
                        randomize(b);
                    }
                    if (!per_gate_) {
                        erased_[a] |= ea;
                        erased_[b] |= eb;
                    }
                }
                break;
            case Op::ERASURE_CHECK:
                for (uint32_t q : inst.targets) {
                    uint8_t flag;
                    if (erased_[q]) {
                        flag = !rng.bernoulli(inst.arg1);
                        if (flag) {
                            // Flag-and-reset: the qubit continues in a
                            // depolarized state with its erasure cleared.
                            randomize(q);
                            erased_[q] = 0;
                        }
                    } else {
                        // A false positive is a classical misread; the qubit
                        // itself is untouched.
                        flag = rng.bernoulli(inst.arg0);
                    }
                    if (!per_gate_)
                        out.erasure_flags.push_back(flag);
                }
                break;
            case Op::DETECTOR: {
                uint8_t bit = 0;
                for (int32_t off : inst.rec)
                    bit ^= meas_flips_[meas + off];
                out.detectors.push_back(bit);
                break;
            }
            case Op::OBSERVABLE: {
                uint8_t bit = 0;
                for (int32_t off : inst.rec)
                    bit ^= meas_flips_[meas + off];
                if (inst.obs_id == 0)
                    out.observable_flip ^= bit;
                break;
            }
            case Op::TICK:
                break;
            case Op::T:
                throw std::logic_error("unreachable");
        }
    }
}

namespace {

void warn_if_noise_free(const Circuit& circuit, uint64_t shots) {
    if (shots == 0 || circuit.num_detectors() == 0)
        return;
    for (const Instruction& inst : circuit.instructions)
        if (is_noise(inst.op))
            return;
    std::fprintf(stderr, "warning: sampling a noise-free circuit; detectors will stay quiet\n");
}

} // namespace

std::vector<ShotRecord> sample_serial(const Circuit& circuit, uint64_t shots, uint64_t seed,
                                      bool per_gate_detection) {
    warn_if_noise_free(circuit, shots);
    FrameSampler sampler(circuit, per_gate_detection);
    std::vector<ShotRecord> out(shots);
    for (uint64_t s = 0; s < shots; ++s)
        sampler.sample_shot(seed, s, out[s]);
    return out;
}

std::vector<ShotRecord> sample(const Circuit& circuit, uint64_t shots, uint64_t seed,
                               bool per_gate_detection) {
    warn_if_noise_free(circuit, shots);
    std::vector<ShotRecord> out(shots);
#pragma omp parallel
    {
        FrameSampler sampler(circuit, per_gate_detection);
#pragma omp for schedule(static)
        for (int64_t s = 0; s < int64_t(shots); ++s)
            sampler.sample_shot(seed, uint64_t(s), out[size_t(s)]);
    }
    return out;
}

} // namespace eml
