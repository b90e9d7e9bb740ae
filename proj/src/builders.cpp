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

#include "eml/builders.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

#include "eml/rng.hpp"
#include "eml/tableau.hpp"

namespace eml {

namespace {

// One noiseless run of a circuit with independently random branches for
// every nondeterministic measurement and reset.
struct CleanShot {
    std::vector<uint8_t> meas;
    uint8_t obs = 0;
};

CleanShot run_clean_shot(const Circuit& c, uint64_t seed) {
    Tableau t(c.qubits.size());
    CounterRng rng(seed, 0);
    CleanShot shot;
    for (const Instruction& inst : c.instructions) {
        switch (inst.op) {
            case Op::H:
                for (uint32_t q : inst.targets)
                    t.apply_h(q);
                break;
            case Op::S:
                for (uint32_t q : inst.targets)
                    t.apply_s(q);
                break;
            case Op::S_DAG:
                for (uint32_t q : inst.targets)
                    t.apply_s_dag(q);
                break;
            case Op::CX:
                for (size_t i = 0; i + 1 < inst.targets.size(); i += 2)
                    t.apply_cx(inst.targets[i], inst.targets[i + 1]);
                break;
            case Op::RESET_Z:
                for (uint32_t q : inst.targets)
                    t.reset_z(q, rng.next_u64() & 1);
                break;
            case Op::RESET_X:
                for (uint32_t q : inst.targets)
                    t.reset_x(q, rng.next_u64() & 1);
                break;
            case Op::MEASURE_Z:
                for (uint32_t q : inst.targets)
                    shot.meas.push_back(t.measure_z(q, rng.next_u64() & 1).value);
                break;
            case Op::MEASURE_X:
                for (uint32_t q : inst.targets)
                    shot.meas.push_back(t.measure_x(q, rng.next_u64() & 1).value);
                break;
            case Op::OBSERVABLE:
                for (int32_t off : inst.rec)
                    shot.obs ^= shot.meas[shot.meas.size() + off];
                break;
            default:
                break;
        }
    }
    return shot;
}

// Completes the logical observable with the measurement records that gauge
// it. A stabilizer measured without a definite prior value fixes a sign of
// the group at random; the logical readout is only deterministic relative
// to those recorded signs. The dependence is recovered empirically: solve
// obs = sum_j g_j m_j + const over GF(2) across random-branch runs, with
// the nondeterministic measurements as candidates, then fold the solution's
// records into the OBSERVABLE instruction.
void fix_observable_gauge(Circuit& c) {
    ReferenceFrame ref = reference_frame(c);
    std::vector<size_t> cand;
    for (size_t m = 0; m < ref.measurement_deterministic.size(); ++m)
        if (!ref.measurement_deterministic[m])
            cand.push_back(m);
    size_t obs_idx = SIZE_MAX, before = 0, total = 0;
    for (size_t i = 0; i < c.instructions.size(); ++i) {
        const Instruction& inst = c.instructions[i];
        if (is_measurement(inst.op)) {
            total += inst.targets.size();
        } else if (inst.op == Op::OBSERVABLE) {
            obs_idx = i;
            before = total;
        }
    }
    if (obs_idx == SIZE_MAX || cand.empty())
        return;

    // Augmented matrix rows: k gauge coefficients, a constant column, and
    // the observed parity. Fresh randomness makes the candidates linearly
    // independent, so k + 48 rows pin the solution down.
    size_t k = cand.size();
    size_t cols = k + 2;
    size_t words = (cols + 63) / 64;
    std::vector<std::vector<uint64_t>> rows;
    for (size_t run = 0; run < k + 48; ++run) {
        CleanShot shot = run_clean_shot(c, 0x6175676531ULL + run);
        std::vector<uint64_t> row(words, 0);
        for (size_t j = 0; j < k; ++j)
            if (shot.meas[cand[j]])
                row[j / 64] |= uint64_t(1) << (j % 64);
        row[k / 64] |= uint64_t(1) << (k % 64); // constant term
        if (shot.obs)
            row[(k + 1) / 64] |= uint64_t(1) << ((k + 1) % 64);
        rows.push_back(std::move(row));
    }
    std::vector<uint8_t> solution(k + 1, 0);
    std::vector<size_t> pivot_col;
    size_t rank = 0;
    for (size_t col = 0; col <= k && rank < rows.size(); ++col) {
        size_t piv = rank;
        while (piv < rows.size() && !(rows[piv][col / 64] >> (col % 64) & 1))
            ++piv;
        if (piv == rows.size())
            continue;
        std::swap(rows[rank], rows[piv]);
        for (size_t r2 = 0; r2 < rows.size(); ++r2)
            if (r2 != rank && (rows[r2][col / 64] >> (col % 64) & 1))
                for (size_t w = 0; w < words; ++w)
                    rows[r2][w] ^= rows[rank][w];
        pivot_col.push_back(col);
        ++rank;
    }
    for (size_t r2 = rank; r2 < rows.size(); ++r2)
        if (rows[r2][(k + 1) / 64] >> ((k + 1) % 64) & 1)
            throw std::logic_error(
                "logical readout is not a linear function of the gauge records");
    // Free variables stay zero, so each pivot equals its reduced rhs.
    for (size_t r2 = 0; r2 < rank; ++r2)
        solution[pivot_col[r2]] = rows[r2][(k + 1) / 64] >> ((k + 1) % 64) & 1;

    std::vector<size_t> chosen;
    for (size_t j = 0; j < k; ++j)
        if (solution[j])
            chosen.push_back(cand[j]);
    for (size_t run = 0; run < 16; ++run) {
        CleanShot shot = run_clean_shot(c, 0xc4ec4ULL + run);
        uint8_t y = shot.obs;
        for (size_t m : chosen)
            y ^= shot.meas[m];
        if (y != solution[k])
            throw std::logic_error("gauge completion of the observable failed to verify");
    }
    Instruction& obs = c.instructions[obs_idx];
    for (size_t m : chosen)
        obs.rec.push_back(int32_t(m) - int32_t(before));
    std::sort(obs.rec.begin(), obs.rec.end());
}

// Step offsets of the four-step CNOT schedule. X and Z plaquettes traverse
// their supports in transposed orders, which keeps the steps conflict-free.
constexpr int kXOff[4][2] = {{1, -1}, {-1, -1}, {1, 1}, {-1, 1}};
constexpr int kZOff[4][2] = {{1, -1}, {1, 1}, {-1, -1}, {-1, 1}};

bool is_z_site(int x, int y) { return ((x + y) / 2) % 2 == 0; }

std::string join_indices(const std::vector<uint32_t>& v) {
    std::ostringstream ss;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i)
            ss << ',';
        ss << v[i];
    }
    return ss.str();
}

} // namespace

SurfaceLayout build_surface_patch(uint32_t d) {
    if (d < 2)
        throw std::invalid_argument("surface patch requires d >= 2");
    SurfaceLayout lay;
    lay.d = d;
    int dd = static_cast<int>(d);
    for (int y = 1; y < 2 * dd; y += 2)
        for (int x = 1; x < 2 * dd; x += 2) {
            uint32_t idx = static_cast<uint32_t>(lay.qubits.size());
            lay.qubits.push_back({idx, double(x), double(y), QubitRole::data});
            lay.index_of[{x, y}] = idx;
        }
    struct AncSite {
        int x, y;
        bool is_x;
        std::vector<uint32_t> data;
    };
    std::vector<AncSite> sites;
    for (int y = 0; y <= 2 * dd; y += 2)
        for (int x = 0; x <= 2 * dd; x += 2) {
            AncSite site{x, y, !is_z_site(x, y), {}};
            for (int dy : {-1, 1})
                for (int dx : {-1, 1})
                    if (lay.index_of.count({x + dx, y + dy}))
                        site.data.push_back(lay.index_of.at({x + dx, y + dy}));
            bool keep = false;
            if (site.data.size() == 4) {
                keep = true;
            } else if (site.data.size() == 2) {
                bool vertical_boundary = x == 0 || x == 2 * dd;
                bool horizontal_boundary = y == 0 || y == 2 * dd;
                keep = (vertical_boundary && !site.is_x) || (horizontal_boundary && site.is_x);
            }
            if (keep)
                sites.push_back(std::move(site));
        }
    for (const AncSite& site : sites) {
        uint32_t idx = static_cast<uint32_t>(lay.qubits.size());
        lay.qubits.push_back({idx, double(site.x), double(site.y),
                              site.is_x ? QubitRole::x_ancilla : QubitRole::z_ancilla});
        lay.index_of[{site.x, site.y}] = idx;
        std::vector<uint32_t> data = site.data;
        std::sort(data.begin(), data.end());
        lay.stabilizers.push_back({idx, std::move(data), site.is_x});
    }
    if (lay.stabilizers.size() != d * d - 1)
        throw std::logic_error("surface patch has wrong stabilizer count");
    for (int x = 1; x < 2 * dd; x += 2)
        lay.z_logical.push_back(lay.at(x, 1));
    for (int y = 1; y < 2 * dd; y += 2)
        lay.x_logical.push_back(lay.at(1, y));
    return lay;
}

namespace {

enum class Kind { hook, lao, memory };

enum class DetectorMode { by_tableau, compare, expansion };

struct SurfaceCircuitBuilder {
    Kind kind;
    uint32_t d1, r;
    bool grown = false;
    uint32_t d2 = 0, memory_rounds = 0;

    SurfaceLayout lay;  // the full-size patch (d2 when grown)
    SurfaceLayout lay1; // the d1 patch
    uint32_t readout_anc = 0;
    std::vector<Stabilizer> inner_stabs; // lay1 stabilizers in full indices
    Circuit c;
    std::map<uint32_t, size_t> last_meas; // ancilla -> absolute record index
    size_t meas_count = 0;
    int64_t round_index = 0;
    int64_t inj_detectors = 0;

    int coord_x(uint32_t q) const { return static_cast<int>(c.qubits[q].x); }
    int coord_y(uint32_t q) const { return static_cast<int>(c.qubits[q].y); }

    void emit(Instruction inst) { c.instructions.push_back(std::move(inst)); }

    void setup() {
        uint32_t d_full = grown ? d2 : d1;
        lay = build_surface_patch(d_full);
        lay1 = build_surface_patch(d1);
        c.qubits = lay.qubits;
        readout_anc = static_cast<uint32_t>(c.qubits.size());
        c.qubits.push_back({readout_anc, -1, -1, QubitRole::x_ancilla});
        for (const Stabilizer& s : lay1.stabilizers) {
            const Qubit& anc = lay1.qubits[s.ancilla];
            Stabilizer mapped;
            mapped.ancilla = lay.at(int(anc.x), int(anc.y));
            mapped.is_x = s.is_x;
            for (uint32_t dq : s.data) {
                const Qubit& q = lay1.qubits[dq];
                mapped.data.push_back(lay.at(int(q.x), int(q.y)));
            }
            std::sort(mapped.data.begin(), mapped.data.end());
            inner_stabs.push_back(std::move(mapped));
        }
    }

    // Logical row / column coordinate of the injected patch.
    int logical_row() const { return kind == Kind::lao ? int(d1) : 1; }
    int logical_col() const { return kind == Kind::lao ? int(d1) : 1; }

    uint32_t hook_ancilla() const { return lay.at(2, 2); }

    bool lao_plus_init(uint32_t q) const {
        int x = coord_x(q), y = coord_y(q), dd = int(d1);
        if (x == dd && y == dd)
            return false; // center, prepared separately
        if (x == dd)
            return true; // X_L arm
        if (y == dd)
            return false; // Z_L arm
        return (x < dd) == (y < dd);
    }

    void emit_inner_data_init() {
        std::vector<uint32_t> plus, zero;
        uint32_t center = kind == Kind::lao ? lay.at(int(d1), int(d1)) : UINT32_MAX;
        for (const Qubit& q : lay1.qubits) {
            if (q.role != QubitRole::data)
                continue;
            uint32_t full = lay.at(int(q.x), int(q.y));
            if (full == center)
                continue;
            // Hook injection starts from logical |+>: |+> on the two left
            // columns (so the X plaquettes between them are deterministic
            // and X_L is definite), |0> further right (so the right-hand Z
            // plaquettes are deterministic). The only X plaquette touching
            // the hook's landing pair with odd overlap is then gauge.
            bool p = kind == Kind::hook     ? int(q.x) <= 3
                     : kind == Kind::lao    ? lao_plus_init(full)
                                            : false; // memory holds |0...0>

            (p ? plus : zero).push_back(full);
        }
        std::sort(plus.begin(), plus.end());
        std::sort(zero.begin(), zero.end());
        if (!zero.empty())
            emit({Op::RESET_Z, zero});
        if (!plus.empty())
            emit({Op::RESET_X, plus});
        if (center != UINT32_MAX) {
            // Single rotation gate after reset: the channel has exactly one
            // 1Q noise location in the state preparation.
            emit({Op::RESET_X, {center}});
            emit({Op::S, {center}});
        }
    }

    void emit_expansion_data_init() {
        std::vector<uint32_t> plus, zero;
        for (const Qubit& q : lay.qubits) {
            if (q.role != QubitRole::data)
                continue;
            int x = int(q.x), y = int(q.y);
            if (x < 2 * int(d1) && y < 2 * int(d1))
                continue; // inner patch keeps its state
            if (x > 2 * int(d1))
                zero.push_back(q.index); // extends the logical Z row
            else
                plus.push_back(q.index); // extends the logical X column
        }
        std::sort(plus.begin(), plus.end());
        std::sort(zero.begin(), zero.end());
        if (!zero.empty())
            emit({Op::RESET_Z, zero});
        if (!plus.empty())
            emit({Op::RESET_X, plus});
    }

    void emit_round(const std::vector<Stabilizer>& table, DetectorMode mode, bool hook_first) {
        std::vector<uint32_t> x_anc, z_anc;
        for (const Stabilizer& s : table)
            (s.is_x ? x_anc : z_anc).push_back(s.ancilla);
        std::sort(x_anc.begin(), x_anc.end());
        std::sort(z_anc.begin(), z_anc.end());
        emit({Op::RESET_X, x_anc});
        emit({Op::RESET_Z, z_anc});

        uint32_t hook_anc = UINT32_MAX;
        if (hook_first) {
            // The S between the CNOT pairs lands a Z rotation on the second
            // data pair with a sign set by the first pair's Z product. The
            // first pair is the Z_L row; the landing pair's Z product equals
            // the hook plaquette times Z_L, so the rotation sign cancels
            // against the measured plaquette value and the patch holds |S>
            // for either hook outcome. The Y-basis readout record alone is
            // then the deterministic logical observable.
            hook_anc = hook_ancilla();
            uint32_t q1 = lay.at(1, 1), q2 = lay.at(3, 1);
            uint32_t q3 = lay.at(1, 3), q4 = lay.at(3, 3);
            emit({Op::CX, {q1, hook_anc}});
            emit({Op::CX, {q2, hook_anc}});
            emit({Op::S, {hook_anc}});
            emit({Op::CX, {q3, hook_anc}});
            emit({Op::CX, {q4, hook_anc}});
        }

        for (int step = 0; step < 4; ++step) {
            for (const Stabilizer& s : table) {
                if (s.ancilla == hook_anc)
                    continue;
                const int* off = s.is_x ? kXOff[step] : kZOff[step];
                int tx = coord_x(s.ancilla) + off[0];
                int ty = coord_y(s.ancilla) + off[1];
                if (!lay.has(tx, ty))
                    continue;
                uint32_t dq = lay.at(tx, ty);
                if (!std::binary_search(s.data.begin(), s.data.end(), dq))
                    continue;
                if (s.is_x)
                    emit({Op::CX, {s.ancilla, dq}});
                else
                    emit({Op::CX, {dq, s.ancilla}});
            }
        }

        std::map<uint32_t, size_t> prev_meas = last_meas;
        std::vector<std::pair<size_t, uint32_t>> round_meas; // (abs index, ancilla)
        emit({Op::MEASURE_X, x_anc});
        for (uint32_t a : x_anc)
            round_meas.emplace_back(meas_count++, a);
        emit({Op::MEASURE_Z, z_anc});
        for (uint32_t a : z_anc)
            round_meas.emplace_back(meas_count++, a);
        for (auto [m, a] : round_meas)
            last_meas[a] = m;

        std::vector<uint8_t> deterministic;
        if (mode != DetectorMode::compare) {
            ReferenceFrame ref = reference_frame(c);
            deterministic = ref.measurement_deterministic;
        }
        int64_t emitted = 0;
        for (auto [m, a] : round_meas) {
            int32_t cur = static_cast<int32_t>(m) - static_cast<int32_t>(meas_count);
            bool have_prev = prev_meas.count(a) != 0;
            if (mode == DetectorMode::compare ||
                (mode == DetectorMode::expansion && have_prev)) {
                int32_t prev =
                    static_cast<int32_t>(prev_meas.at(a)) - static_cast<int32_t>(meas_count);
                emit({Op::DETECTOR, {}, {cur, prev}});
                ++emitted;
            } else if (deterministic[m]) {
                emit({Op::DETECTOR, {}, {cur}});
                ++emitted;
            }
        }
        if (round_index < int64_t(r))
            inj_detectors += emitted;
        emit({Op::TICK});
        ++round_index;
    }

    void emit_readout() {
        int row = logical_row(), col = logical_col();
        emit({Op::RESET_X, {readout_anc}});
        std::vector<uint32_t> z_l, x_l;
        for (const Qubit& q : c.qubits) {
            if (q.role != QubitRole::data)
                continue;
            if (int(q.y) == row)
                z_l.push_back(q.index);
            if (int(q.x) == col)
                x_l.push_back(q.index);
        }
        std::sort(z_l.begin(), z_l.end());
        std::sort(x_l.begin(), x_l.end());
        std::vector<uint32_t> support;
        std::vector<int> pauli; // 1=X, 2=Y, 3=Z
        for (uint32_t q : z_l) {
            bool corner =
                kind != Kind::memory && std::binary_search(x_l.begin(), x_l.end(), q);
            support.push_back(q);
            pauli.push_back(corner ? 2 : 3);
        }
        if (kind != Kind::memory)
            for (uint32_t q : x_l)
                if (!std::binary_search(z_l.begin(), z_l.end(), q)) {
                    support.push_back(q);
                    pauli.push_back(1);
                }
        for (size_t i = 0; i < support.size(); ++i) {
            uint32_t q = support[i];
            switch (pauli[i]) {
                case 1:
                    emit({Op::CX, {readout_anc, q}});
                    break;
                case 2:
                    emit({Op::S_DAG, {q}});
                    emit({Op::CX, {readout_anc, q}});
                    emit({Op::S, {q}});
                    break;
                case 3:
                    emit({Op::H, {q}});
                    emit({Op::CX, {readout_anc, q}});
                    emit({Op::H, {q}});
                    break;
            }
        }
        emit({Op::MEASURE_X, {readout_anc}});
        ++meas_count;
        Instruction obs{Op::OBSERVABLE, {}, {-1}};
        obs.obs_id = 0;
        emit(obs);
        c.metadata["z_l"] = join_indices(z_l);
        c.metadata["x_l"] = join_indices(x_l);
    }

    Circuit build() {
        setup();
        emit_inner_data_init();
        for (uint32_t i = 0; i < r; ++i)
            emit_round(inner_stabs, i == 0 ? DetectorMode::by_tableau : DetectorMode::compare,
                       kind == Kind::hook && i == 0);
        if (grown) {
            emit_expansion_data_init();
            emit_round(lay.stabilizers, DetectorMode::expansion, false);
            for (uint32_t i = 0; i < memory_rounds; ++i)
                emit_round(lay.stabilizers, DetectorMode::compare, false);
            emit_round(lay.stabilizers, DetectorMode::compare, false); // noiseless
        } else {
            emit_round(inner_stabs, DetectorMode::compare, false); // noiseless
        }
        emit_readout();

        c.metadata["protocol"] = kind == Kind::memory ? "memory"
                                 : kind == Kind::hook ? (grown ? "hook_grown" : "hook")
                                                      : (grown ? "lao_grown" : "lao");
        c.set_meta("d1", d1);
        c.set_meta("d2", grown ? d2 : d1);
        c.set_meta("r", r);
        c.set_meta("inj_rounds", r);
        c.set_meta("q_inner", 2 * int64_t(d1) * d1 - 1);
        c.set_meta("inj_detectors", inj_detectors);
        c.set_meta("noiseless_from_round", round_index - 1);
        fix_observable_gauge(c);
        return std::move(c);
    }
};

} // namespace

Circuit build_hook_injection(const InjectionConfig& config) {
    if (config.d1 < 2)
        throw std::invalid_argument("hook injection requires d1 >= 2");
    if (config.rounds < 1)
        throw std::invalid_argument("injection requires rounds >= 1");
    SurfaceCircuitBuilder b;
    b.kind = Kind::hook;
    b.d1 = config.d1;
    b.r = config.rounds;
    return b.build();
}

Circuit build_lao_criger_injection(const InjectionConfig& config) {
    if (config.d1 < 3 || config.d1 % 2 == 0)
        throw std::invalid_argument("lao-criger injection requires odd d1 >= 3");
    if (config.rounds < 1)
        throw std::invalid_argument("injection requires rounds >= 1");
    SurfaceCircuitBuilder b;
    b.kind = Kind::lao;
    b.d1 = config.d1;
    b.r = config.rounds;
    return b.build();
}

Circuit build_memory(const MemoryConfig& config) {
    if (config.d < 2)
        throw std::invalid_argument("memory requires d >= 2");
    if (config.rounds < 1)
        throw std::invalid_argument("memory requires rounds >= 1");
    SurfaceCircuitBuilder b;
    b.kind = Kind::memory;
    b.d1 = config.d;
    b.r = config.rounds;
    return b.build();
}

Circuit build_expansion(const ExpansionConfig& config, const Circuit& inner) {
    std::string protocol;
    if (auto it = inner.metadata.find("protocol"); it != inner.metadata.end())
        protocol = it->second;
    Kind kind;
    if (protocol == "hook")
        kind = Kind::hook;
    else if (protocol == "lao")
        kind = Kind::lao;
    else
        throw std::invalid_argument("inner circuit is not an ungrown surface injection");
    uint32_t d1 = static_cast<uint32_t>(inner.meta_int("d1", 0));
    uint32_t r = static_cast<uint32_t>(inner.meta_int("r", 0));
    if (config.d2 < d1)
        throw std::invalid_argument("expansion requires d2 >= d1");
    SurfaceCircuitBuilder b;
    b.kind = kind;
    b.d1 = d1;
    b.r = r;
    b.grown = true;
    b.d2 = config.d2;
    b.memory_rounds = config.memory_rounds;
    return b.build();
}

Circuit build_color_unitary_injection() {
    Circuit c;
    // Steane code, X and Z stabilizers both on {0,2,4,6}, {1,2,5,6},
    // {3,4,5,6}; logical input on qubit 2, X_L = Z_L = {2,4,5} after encoding.
    for (uint32_t i = 0; i < 7; ++i)
        c.qubits.push_back({i, double(i), 0, QubitRole::data});
    const std::vector<std::vector<uint32_t>> stabs = {{0, 2, 4, 6}, {1, 2, 5, 6}, {3, 4, 5, 6}};
    for (uint32_t i = 0; i < 3; ++i)
        c.qubits.push_back({7 + i, double(i), 2, QubitRole::x_ancilla});
    for (uint32_t i = 0; i < 3; ++i)
        c.qubits.push_back({10 + i, double(i), 4, QubitRole::z_ancilla});
    uint32_t readout = 13;
    c.qubits.push_back({readout, -1, -1, QubitRole::x_ancilla});

    auto emit = [&](Instruction inst) { c.instructions.push_back(std::move(inst)); };
    emit({Op::RESET_X, {0, 1, 3}});
    emit({Op::RESET_Z, {4, 5, 6}});
    emit({Op::RESET_X, {2}});
    emit({Op::S, {2}});
    const std::vector<std::pair<uint32_t, uint32_t>> encoder = {
        {2, 4}, {2, 5}, {0, 2}, {0, 4}, {0, 6}, {1, 2}, {1, 5}, {1, 6}, {3, 4}, {3, 5}, {3, 6}};
    for (auto [ctrl, tgt] : encoder)
        emit({Op::CX, {ctrl, tgt}});

    emit({Op::RESET_X, {7, 8, 9}});
    emit({Op::RESET_Z, {10, 11, 12}});
    for (uint32_t i = 0; i < 3; ++i)
        for (uint32_t q : stabs[i])
            emit({Op::CX, {7 + i, q}});
    for (uint32_t i = 0; i < 3; ++i)
        for (uint32_t q : stabs[i])
            emit({Op::CX, {q, 10 + i}});
    emit({Op::MEASURE_X, {7, 8, 9}});
    emit({Op::MEASURE_Z, {10, 11, 12}});
    // The encoded state is a code state, so all six outcomes are
    // deterministic.
    for (int32_t k = 0; k < 6; ++k)
        emit({Op::DETECTOR, {}, {k - 6}});
    emit({Op::TICK});

    emit({Op::RESET_X, {readout}});
    for (uint32_t q : {2u, 4u, 5u}) {
        emit({Op::S_DAG, {q}});
        emit({Op::CX, {readout, q}});
        emit({Op::S, {q}});
    }
    emit({Op::MEASURE_X, {readout}});
    Instruction obs{Op::OBSERVABLE, {}, {-1}};
    obs.obs_id = 0;
    emit(obs);

    c.metadata["protocol"] = "color";
    c.metadata["z_l"] = "2,4,5";
    c.metadata["x_l"] = "2,4,5";
    c.set_meta("d1", 3);
    c.set_meta("d2", 3);
    c.set_meta("r", 1);
    c.set_meta("inj_rounds", 1);
    c.set_meta("q_inner", 13);
    c.set_meta("inj_detectors", 6);
    c.set_meta("noiseless_from_round", 1);
    fix_observable_gauge(c);
    return c;
}

std::vector<uint32_t> hybrid_erasure_set(const Circuit& circuit) {
    for (size_t i = 0; i < circuit.instructions.size(); ++i) {
        const Instruction& inst = circuit.instructions[i];
        if ((inst.op != Op::S && inst.op != Op::S_DAG && inst.op != Op::T) ||
            inst.targets.size() != 1)
            continue;
        uint32_t anc = inst.targets[0];
        if (circuit.qubits[anc].role != QubitRole::z_ancilla)
            continue;
        // The linear fault mechanisms that leave X_L/Z_L residuals all sit on
        // the rotation gate and the hook CNOTs immediately around it; erasing
        // their data qubits plus the ancilla covers them (remaining CNOT
        // faults are Y_L, which stabilizes |S>).
        std::vector<uint32_t> result;
        if (i > 0) {
            const Instruction& prev = circuit.instructions[i - 1];
            if (prev.op == Op::CX && prev.targets.size() == 2 && prev.targets[1] == anc)
                result.push_back(prev.targets[0]);
        }
        if (i + 1 < circuit.instructions.size()) {
            const Instruction& next = circuit.instructions[i + 1];
            if (next.op == Op::CX && next.targets.size() == 2 && next.targets[1] == anc)
                result.push_back(next.targets[0]);
        }
        if (result.size() != 2)
            throw std::invalid_argument("rotation ancilla lacks adjacent CNOT pair");
        std::sort(result.begin(), result.end());
        result.push_back(anc);
        return result;
    }
    throw std::invalid_argument("circuit has no rotation gate on a Z ancilla");
}

} // namespace eml
