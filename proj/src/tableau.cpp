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

#include "eml/tableau.hpp"

#include <cstring>
#include <stdexcept>

#include "eml/pauli_draw.hpp"
#include "eml/rng.hpp"

namespace eml {

Tableau::Tableau(size_t num_qubits) : n_(num_qubits), words_((num_qubits + 63) / 64) {
    x_.assign((2 * n_ + 1) * words_, 0);
    z_.assign((2 * n_ + 1) * words_, 0);
    r_.assign(2 * n_ + 1, 0);
    for (size_t i = 0; i < n_; ++i) {
        set_xbit(i, i, true);         // destabilizer X_i
        set_zbit(n_ + i, i, true);    // stabilizer Z_i
    }
}

void Tableau::set_xbit(size_t i, size_t q, bool v) {
    uint64_t mask = uint64_t{1} << (q & 63);
    if (v)
        xrow(i)[q >> 6] |= mask;
    else
        xrow(i)[q >> 6] &= ~mask;
}

void Tableau::set_zbit(size_t i, size_t q, bool v) {
    uint64_t mask = uint64_t{1} << (q & 63);
    if (v)
        zrow(i)[q >> 6] |= mask;
    else
        zrow(i)[q >> 6] &= ~mask;
}

void Tableau::row_clear(size_t i) {
    std::memset(xrow(i), 0, words_ * 8);
    std::memset(zrow(i), 0, words_ * 8);
    r_[i] = 0;
}

namespace {

// Phase exponent (power of i) contributed by multiplying single-qubit
// Paulis (x1,z1)*(x2,z2), as in Aaronson-Gottesman.
inline int g_phase(int x1, int z1, int x2, int z2) {
    if (!x1 && !z1)
        return 0;
    if (x1 && z1)
        return z2 - x2;
    if (x1)
        return z2 * (2 * x2 - 1);
    return x2 * (1 - 2 * z2);
}

} // namespace

void Tableau::rowsum(size_t h, size_t i) {
    int phase = r_[h] + r_[i];
    const uint64_t* xi = xrow(i);
    const uint64_t* zi = zrow(i);
    uint64_t* xh = xrow(h);
    uint64_t* zh = zrow(h);
    for (size_t w = 0; w < words_; ++w) {
        uint64_t bits = xi[w] | zi[w] | xh[w] | zh[w];
        while (bits) {
            int b = __builtin_ctzll(bits);
            bits &= bits - 1;
            phase += g_phase((xi[w] >> b) & 1, (zi[w] >> b) & 1, (xh[w] >> b) & 1,
                             (zh[w] >> b) & 1);
        }
        xh[w] ^= xi[w];
        zh[w] ^= zi[w];
    }
    r_[h] = static_cast<uint8_t>(((phase % 4) + 4) % 4);
}

void Tableau::apply_h(size_t q) {
    for (size_t i = 0; i < 2 * n_; ++i) {
        bool x = xbit(i, q), z = zbit(i, q);
        if (x && z)
            r_[i] = (r_[i] + 2) & 3;
        set_xbit(i, q, z);
        set_zbit(i, q, x);
    }
}

void Tableau::apply_s(size_t q) {
    for (size_t i = 0; i < 2 * n_; ++i) {
        bool x = xbit(i, q), z = zbit(i, q);
        if (x && z)
            r_[i] = (r_[i] + 2) & 3;
        set_zbit(i, q, z ^ x);
    }
}

void Tableau::apply_s_dag(size_t q) {
    for (size_t i = 0; i < 2 * n_; ++i) {
        bool x = xbit(i, q), z = zbit(i, q);
        if (x && !z)
            r_[i] = (r_[i] + 2) & 3;
        set_zbit(i, q, z ^ x);
    }
}

void Tableau::apply_cx(size_t control, size_t target) {
    for (size_t i = 0; i < 2 * n_; ++i) {
        bool xc = xbit(i, control), zc = zbit(i, control);
        bool xt = xbit(i, target), zt = zbit(i, target);
        if (xc && zt && (xt == zc))
            r_[i] = (r_[i] + 2) & 3;
        set_xbit(i, target, xt ^ xc);
        set_zbit(i, control, zc ^ zt);
    }
}

void Tableau::apply_x(size_t q) {
    for (size_t i = 0; i < 2 * n_; ++i)
        if (zbit(i, q))
            r_[i] = (r_[i] + 2) & 3;
}

void Tableau::apply_z(size_t q) {
    for (size_t i = 0; i < 2 * n_; ++i)
        if (xbit(i, q))
            r_[i] = (r_[i] + 2) & 3;
}

void Tableau::apply_y(size_t q) {
    for (size_t i = 0; i < 2 * n_; ++i)
        if (xbit(i, q) != zbit(i, q))
            r_[i] = (r_[i] + 2) & 3;
}

Tableau::MeasResult Tableau::measure_z(size_t q, bool random_branch) {
    size_t p = 2 * n_;
    for (size_t i = n_; i < 2 * n_; ++i) {
        if (xbit(i, q)) {
            p = i;
            break;
        }
    }
    if (p < 2 * n_) {
        // Non-deterministic outcome.
        for (size_t i = 0; i < 2 * n_; ++i)
            if (i != p && xbit(i, q))
                rowsum(i, p);
        std::memcpy(xrow(p - n_), xrow(p), words_ * 8);
        std::memcpy(zrow(p - n_), zrow(p), words_ * 8);
        r_[p - n_] = r_[p];
        row_clear(p);
        set_zbit(p, q, true);
        r_[p] = random_branch ? 2 : 0;
        return {random_branch, false};
    }
    // Deterministic: accumulate relevant stabilizers into the scratch row.
    row_clear(2 * n_);
    for (size_t i = 0; i < n_; ++i)
        if (xbit(i, q))
            rowsum(2 * n_, i + n_);
    return {r_[2 * n_] == 2, true};
}

Tableau::MeasResult Tableau::measure_x(size_t q, bool random_branch) {
    apply_h(q);
    auto m = measure_z(q, random_branch);
    apply_h(q);
    return m;
}

void Tableau::reset_z(size_t q, bool random_branch) {
    auto m = measure_z(q, random_branch);
    if (m.value)
        apply_x(q);
}

void Tableau::reset_x(size_t q, bool random_branch) {
    auto m = measure_x(q, random_branch);
    if (m.value)
        apply_z(q);
}

int Tableau::pauli_expectation(const std::vector<std::pair<size_t, int>>& paulis) const {
    // Anticommuting with any stabilizer => expectation 0.
    auto anticommutes_row = [&](size_t row) {
        int parity = 0;
        for (auto [q, p] : paulis) {
            bool px = p == 1 || p == 2;
            bool pz = p == 2 || p == 3;
            parity ^= (px && zbit(row, q)) ^ (pz && xbit(row, q));
        }
        return parity != 0;
    };
    for (size_t i = n_; i < 2 * n_; ++i)
        if (anticommutes_row(i))
            return 0;

    // P is in +/- the stabilizer group; reconstruct it from the generators
    // selected by destabilizer anticommutation and read off the sign.
    Tableau scratch = *this;
    scratch.row_clear(2 * n_);
    for (size_t i = 0; i < n_; ++i)
        if (anticommutes_row(i))
            scratch.rowsum(2 * n_, i + n_);
    for (auto [q, p] : paulis) {
        bool px = p == 1 || p == 2;
        bool pz = p == 2 || p == 3;
        if (scratch.xbit(2 * n_, q) != px || scratch.zbit(2 * n_, q) != pz)
            return 0; // not actually in the group (mixed stabilizer state)
        scratch.set_xbit(2 * n_, q, false);
        scratch.set_zbit(2 * n_, q, false);
    }
    for (size_t w = 0; w < scratch.words_; ++w)
        if (scratch.xrow(2 * n_)[w] || scratch.zrow(2 * n_)[w])
            return 0;
    return scratch.r_[2 * n_] == 0 ? 1 : -1;
}

namespace {

bool branch_convention(uint64_t meas_index) {
    return CounterRng(0, meas_index).bernoulli(0.5);
}

void apply_pauli(Tableau& tab, size_t q, int pauli) {
    if (pauli == 1)
        tab.apply_x(q);
    else if (pauli == 2)
        tab.apply_y(q);
    else if (pauli == 3)
        tab.apply_z(q);
}

} // namespace

ReferenceFrame reference_frame(const Circuit& circuit) {
    Tableau tab(circuit.qubits.size());
    ReferenceFrame ref;
    ref.observable_values.assign(circuit.num_observables(), 0);

    for (const auto& inst : circuit.instructions) {
        switch (inst.op) {
            case Op::RESET_Z:
                for (uint32_t q : inst.targets)
                    tab.reset_z(q, false);
                break;
            case Op::RESET_X:
                for (uint32_t q : inst.targets)
                    tab.reset_x(q, false);
                break;
            case Op::H:
                for (uint32_t q : inst.targets)
                    tab.apply_h(q);
                break;
            case Op::S:
                for (uint32_t q : inst.targets)
                    tab.apply_s(q);
                break;
            case Op::S_DAG:
                for (uint32_t q : inst.targets)
                    tab.apply_s_dag(q);
                break;
            case Op::T:
                throw std::invalid_argument("T gate is not Clifford-simulable");
            case Op::CX:
                for (size_t i = 0; i + 1 < inst.targets.size(); i += 2)
                    tab.apply_cx(inst.targets[i], inst.targets[i + 1]);
                break;
            case Op::MEASURE_Z:
            case Op::MEASURE_X: {
                for (uint32_t q : inst.targets) {
                    uint64_t idx = ref.measurement_values.size();
                    auto m = inst.op == Op::MEASURE_Z ? tab.measure_z(q, branch_convention(idx))
                                                      : tab.measure_x(q, branch_convention(idx));
                    ref.measurement_values.push_back(m.value);
                    ref.measurement_deterministic.push_back(m.deterministic);
                }
                break;
            }
            case Op::DETECTOR: {
                uint8_t v = 0;
                for (int32_t offset : inst.rec)
                    v ^= ref.measurement_values[ref.measurement_values.size() + offset];
                ref.detector_values.push_back(v);
                break;
            }
            case Op::OBSERVABLE: {
                uint8_t v = 0;
                for (int32_t offset : inst.rec)
                    v ^= ref.measurement_values[ref.measurement_values.size() + offset];
                ref.observable_values[inst.obs_id] ^= v;
                break;
            }
            default:
                break; // noise / checks / ticks skipped
        }
    }
    return ref;
}

TableauShot tableau_sample_shot(const Circuit& circuit, const ReferenceFrame& ref, uint64_t seed,
                                uint64_t shot) {
    Tableau tab(circuit.qubits.size());
    CounterRng noise_rng(seed, shot);
    CounterRng branch_rng(seed + 0x517cc1b727220a95ULL, shot);
    TableauShot out;
    out.observable_flips.assign(circuit.num_observables(), 0);
    std::vector<uint8_t> values;
    values.reserve(ref.measurement_values.size());

    for (const auto& inst : circuit.instructions) {
        switch (inst.op) {
            case Op::RESET_Z:
                for (uint32_t q : inst.targets)
                    tab.reset_z(q, false);
                break;
            case Op::RESET_X:
                for (uint32_t q : inst.targets)
                    tab.reset_x(q, false);
                break;
            case Op::H:
                for (uint32_t q : inst.targets)
                    tab.apply_h(q);
                break;
            case Op::S:
                for (uint32_t q : inst.targets)
                    tab.apply_s(q);
                break;
            case Op::S_DAG:
                for (uint32_t q : inst.targets)
                    tab.apply_s_dag(q);
                break;
            case Op::T:
                throw std::invalid_argument("T gate is not Clifford-simulable");
            case Op::CX:
                for (size_t i = 0; i + 1 < inst.targets.size(); i += 2)
                    tab.apply_cx(inst.targets[i], inst.targets[i + 1]);
                break;
            case Op::DEPOL1:
            case Op::DEPOL2:
            case Op::X_ERROR:
            case Op::Z_ERROR:
                detail::draw_pauli_noise(inst, noise_rng,
                                         [&](uint32_t q, int p) { apply_pauli(tab, q, p); });
                break;
            case Op::ERASE1:
            case Op::ERASE2:
            case Op::ERASURE_CHECK:
                throw std::invalid_argument("erasures are not supported by the tableau oracle");
            case Op::MEASURE_Z:
            case Op::MEASURE_X:
                for (uint32_t q : inst.targets) {
                    auto m = inst.op == Op::MEASURE_Z
                                 ? tab.measure_z(q, branch_rng.bernoulli(0.5))
                                 : tab.measure_x(q, branch_rng.bernoulli(0.5));
                    values.push_back(m.value);
                }
                break;
            case Op::DETECTOR: {
                uint8_t v = 0;
                for (int32_t offset : inst.rec)
                    v ^= values[values.size() + offset];
                out.detectors.push_back(v ^ ref.detector_values[out.detectors.size()]);
                break;
            }
            case Op::OBSERVABLE: {
                uint8_t v = 0;
                for (int32_t offset : inst.rec)
                    v ^= values[values.size() + offset];
                out.observable_flips[inst.obs_id] ^= v;
                break;
            }
            case Op::TICK:
                break;
        }
    }
    for (size_t i = 0; i < out.observable_flips.size(); ++i)
        out.observable_flips[i] ^= ref.observable_values[i];
    return out;
}

} // namespace eml
