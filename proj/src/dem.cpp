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

#include "eml/dem.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "eml/detail/reverse_pass.hpp"

namespace eml {

namespace {

using detail::Mask;

struct DemBuilder {
    detail::SensitivityPass pass;
    size_t num_det, num_obs;

    DetectorErrorModel dem;
    std::map<std::pair<std::vector<uint32_t>, std::vector<uint32_t>>, uint32_t> merge_index;

    explicit DemBuilder(const Circuit& circuit) : pass(circuit) {
        num_det = pass.num_det;
        num_obs = pass.num_obs;
        dem.num_detectors = num_det;
        dem.num_observables = num_obs;
    }

    // Sensitivity atoms of a Pauli (1=X, 2=Y, 3=Z) on qubit q.
    std::vector<const Mask*> atoms(uint32_t q, int p) const {
        if (p == 1)
            return {&pass.sx[q]};
        if (p == 3)
            return {&pass.sz[q]};
        return {&pass.sx[q], &pass.sz[q]};
    }

    std::pair<std::vector<uint32_t>, std::vector<uint32_t>> signature(const Mask& m) const {
        std::vector<uint32_t> det, obs;
        for (uint32_t b = 0; b < uint32_t(num_det + num_obs); ++b)
            if (detail::mask_test(m, b))
                (b < num_det ? det : obs).push_back(b < num_det ? b : b - uint32_t(num_det));
        return {std::move(det), std::move(obs)};
    }

    // Returns the mechanism index, or UINT32_MAX for an empty signature.
    uint32_t add_mechanism(const Mask& m, double p, std::pair<uint32_t, uint32_t> loc) {
        auto sig = signature(m);
        if (sig.first.empty() && sig.second.empty())
            return UINT32_MAX;
        auto it = merge_index.find(sig);
        if (it == merge_index.end()) {
            ErrorMechanism mech;
            mech.probability = p;
            mech.detectors = sig.first;
            mech.observables = sig.second;
            mech.locations.push_back(loc);
            uint32_t idx = static_cast<uint32_t>(dem.mechanisms.size());
            dem.mechanisms.push_back(std::move(mech));
            merge_index.emplace(std::move(sig), idx);
            return idx;
        }
        ErrorMechanism& mech = dem.mechanisms[it->second];
        // Independent sources of the same signature combine as an XOR of
        // Bernoulli flips.
        mech.probability = mech.probability * (1 - p) + p * (1 - mech.probability);
        if (mech.locations.empty() || mech.locations.back() != loc)
            mech.locations.push_back(loc);
        return it->second;
    }

    size_t count_detector_bits(const Mask& m) const {
        size_t n = 0;
        for (uint32_t b = 0; b < uint32_t(num_det); ++b)
            n += detail::mask_test(m, b);
        return n;
    }

    // Emits a term, decomposing into graphlike atoms when it flips more than
    // two detectors.
    void add_term(const std::vector<std::pair<uint32_t, int>>& paulis, double p,
                  std::pair<uint32_t, uint32_t> loc, std::vector<uint32_t>* touched) {
        if (p <= 0)
            return;
        ++dem.num_terms;
        std::vector<const Mask*> parts;
        for (auto [q, pl] : paulis)
            for (const Mask* a : atoms(q, pl))
                parts.push_back(a);
        Mask combined(pass.words, 0);
        for (const Mask* a : parts)
            detail::mask_xor(combined, *a);
        if (count_detector_bits(combined) <= 2) {
            uint32_t idx = add_mechanism(combined, p, loc);
            if (touched && idx != UINT32_MAX)
                touched->push_back(idx);
            return;
        }
        for (const Mask* a : parts) {
            if (count_detector_bits(*a) > 2)
                throw std::runtime_error(
                    "error term at instruction " + std::to_string(loc.first) +
                    " is not decomposable into graphlike components");
            uint32_t idx = add_mechanism(*a, p, loc);
            if (touched && idx != UINT32_MAX)
                touched->push_back(idx);
        }
    }

    void record_erasure(uint32_t idx, std::initializer_list<uint32_t> qubits,
                        std::vector<uint32_t>& touched) {
        std::sort(touched.begin(), touched.end());
        touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
        for (uint32_t q : qubits) {
            auto& slot = dem.erasure_map[{idx, q}];
            slot.insert(slot.end(), touched.begin(), touched.end());
            std::sort(slot.begin(), slot.end());
            slot.erase(std::unique(slot.begin(), slot.end()), slot.end());
        }
    }

    void collect_terms(size_t idx, const Instruction& inst) {
        uint32_t term = 0;
        auto loc = [&]() { return std::pair<uint32_t, uint32_t>{uint32_t(idx), term++}; };
        switch (inst.op) {
            case Op::X_ERROR:
                for (uint32_t q : inst.targets)
                    add_term({{q, 1}}, inst.arg0, loc(), nullptr);
                break;
            case Op::Z_ERROR:
                for (uint32_t q : inst.targets)
                    add_term({{q, 3}}, inst.arg0, loc(), nullptr);
                break;
            case Op::DEPOL1:
                for (uint32_t q : inst.targets)
                    for (int p = 1; p <= 3; ++p)
                        add_term({{q, p}}, inst.arg0 / 3, loc(), nullptr);
                break;
            case Op::DEPOL2:
                for (size_t i = 0; i + 1 < inst.targets.size(); i += 2) {
                    uint32_t a = inst.targets[i], b = inst.targets[i + 1];
                    for (int pa = 0; pa <= 3; ++pa)
                        for (int pb = 0; pb <= 3; ++pb) {
                            if (pa == 0 && pb == 0)
                                continue;
                            std::vector<std::pair<uint32_t, int>> ps;
                            if (pa)
                                ps.emplace_back(a, pa);
                            if (pb)
                                ps.emplace_back(b, pb);
                            add_term(ps, inst.arg0 / 15, loc(), nullptr);
                        }
                }
                break;
            case Op::ERASE1:
                for (uint32_t q : inst.targets) {
                    std::vector<uint32_t> touched;
                    // Erasure leaves the qubit maximally mixed: I, X, Y, Z
                    // each with conditional probability 1/4.
                    for (int p = 1; p <= 3; ++p)
                        add_term({{q, p}}, inst.arg0 / 4, loc(), &touched);
                    record_erasure(uint32_t(idx), {q}, touched);
                }
                break;
            case Op::ERASE2:
                for (size_t i = 0; i + 1 < inst.targets.size(); i += 2) {
                    uint32_t a = inst.targets[i], b = inst.targets[i + 1];
                    std::vector<uint32_t> touched;
                    for (int pa = 0; pa <= 3; ++pa)
                        for (int pb = 0; pb <= 3; ++pb) {
                            if (pa == 0 && pb == 0)
                                continue;
                            std::vector<std::pair<uint32_t, int>> ps;
                            if (pa)
                                ps.emplace_back(a, pa);
                            if (pb)
                                ps.emplace_back(b, pb);
                            add_term(ps, inst.arg0 / 16, loc(), &touched);
                        }
                    record_erasure(uint32_t(idx), {a, b}, touched);
                }
                break;
            default:
                break;
        }
    }

    void run() {
        pass.run([this](size_t idx, const Instruction& inst) { collect_terms(idx, inst); });

        // Reverse construction order; present mechanisms in circuit order.
        for (ErrorMechanism& m : dem.mechanisms)
            std::sort(m.locations.begin(), m.locations.end());
        std::vector<uint32_t> order(dem.mechanisms.size());
        for (uint32_t i = 0; i < order.size(); ++i)
            order[i] = i;
        std::stable_sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b) {
            return dem.mechanisms[a].locations.front() < dem.mechanisms[b].locations.front();
        });
        std::vector<uint32_t> inv(order.size());
        for (uint32_t i = 0; i < order.size(); ++i)
            inv[order[i]] = i;
        std::vector<ErrorMechanism> sorted;
        sorted.reserve(order.size());
        for (uint32_t i : order)
            sorted.push_back(std::move(dem.mechanisms[i]));
        dem.mechanisms = std::move(sorted);
        for (auto& [key, slot] : dem.erasure_map) {
            for (uint32_t& m : slot)
                m = inv[m];
            std::sort(slot.begin(), slot.end());
        }
    }
};

} // namespace

DetectorErrorModel build_dem(const Circuit& circuit) {
    ValidationReport report = validate(circuit);
    if (!report.empty())
        throw std::invalid_argument("circuit fails validation: " + report.front().message);
    for (const Instruction& inst : circuit.instructions)
        if (inst.op == Op::T)
            throw std::invalid_argument("detector error model requires a Clifford circuit");
    DemBuilder builder(circuit);
    builder.run();
    return std::move(builder.dem);
}

std::string dump_dem(const DetectorErrorModel& dem) {
    std::ostringstream ss;
    ss.precision(12);
    for (const ErrorMechanism& m : dem.mechanisms) {
        ss << "error(" << m.probability << ")";
        for (uint32_t d : m.detectors)
            ss << " D" << d;
        for (uint32_t o : m.observables)
            ss << " L" << o;
        ss << "\n";
    }
    return ss.str();
}

} // namespace eml
