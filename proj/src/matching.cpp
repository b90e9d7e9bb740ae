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

#include "eml/matching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

#include "eml/detail/weighted_matching.hpp"

namespace eml {

namespace {

// Deterministic per-mechanism tie-break; small against any genuine weight
// difference, so equal-weight corrections resolve identically in the
// matching decoder and the exhaustive oracle.
double tie_epsilon(uint32_t mech) { return 1e-9 * double(mech + 1); }

double mechanism_weight(double p) {
    if (p > 0.5)
        throw std::invalid_argument("mechanism probability above 1/2");
    if (p == 0.5)
        return 0;
    return std::log((1 - p) / p);
}

std::vector<uint8_t> overlay_erased(const DetectorErrorModel& dem,
                                    const std::vector<std::pair<uint32_t, uint32_t>>& erased) {
    std::vector<uint8_t> zeroed(dem.mechanisms.size(), 0);
    for (const auto& loc : erased) {
        auto it = dem.erasure_map.find(loc);
        if (it == dem.erasure_map.end())
            continue;
        for (uint32_t m : it->second)
            zeroed[m] = 1;
    }
    return zeroed;
}

} // namespace

Matcher::Matcher(const DetectorErrorModel& dem) : dem_(&dem) {
    boundary_ = static_cast<uint32_t>(dem.num_detectors);
    adj_.assign(dem.num_detectors + 1, {});
    base_weight_.resize(dem.mechanisms.size());
    plain_weight_.resize(dem.mechanisms.size());
    for (uint32_t m = 0; m < dem.mechanisms.size(); ++m) {
        const ErrorMechanism& mech = dem.mechanisms[m];
        plain_weight_[m] = mechanism_weight(mech.probability);
        base_weight_[m] = plain_weight_[m] + tie_epsilon(m);
        if (mech.detectors.empty() || mech.detectors.size() > 2)
            continue;
        Edge e;
        e.u = mech.detectors[0];
        e.v = mech.detectors.size() == 2 ? mech.detectors[1] : boundary_;
        e.mech = m;
        uint32_t id = static_cast<uint32_t>(edges_.size());
        edges_.push_back(e);
        adj_[e.u].push_back(id);
        adj_[e.v].push_back(id);
    }
}

MatchResult Matcher::decode(const std::vector<uint8_t>& detectors,
                            const std::vector<std::pair<uint32_t, uint32_t>>& erased) const {
    const DetectorErrorModel& dem = *dem_;
    if (detectors.size() != dem.num_detectors)
        throw std::invalid_argument("detector vector length mismatch");
    std::vector<uint32_t> fired;
    for (uint32_t d = 0; d < detectors.size(); ++d)
        if (detectors[d])
            fired.push_back(d);
    MatchResult result;
    if (fired.empty())
        return result;

    std::vector<uint8_t> zeroed = overlay_erased(dem, erased);
    auto weight_of = [&](uint32_t m) { return zeroed[m] ? tie_epsilon(m) : base_weight_[m]; };
    auto plain_of = [&](uint32_t m) { return zeroed[m] ? 0.0 : plain_weight_[m]; };

    // Shortest paths from each fired detector; the boundary node terminates
    // paths but is never expanded.
    const double inf = std::numeric_limits<double>::infinity();
    size_t n = dem.num_detectors + 1;
    size_t k = fired.size();
    std::vector<std::vector<double>> dist(k, std::vector<double>(n, inf));
    std::vector<std::vector<uint32_t>> pred(k, std::vector<uint32_t>(n, UINT32_MAX));
    for (size_t s = 0; s < k; ++s) {
        auto& ds = dist[s];
        auto& ps = pred[s];
        using Item = std::pair<double, uint32_t>;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
        ds[fired[s]] = 0;
        pq.push({0, fired[s]});
        while (!pq.empty()) {
            auto [d, u] = pq.top();
            pq.pop();
            if (d > ds[u] || u == boundary_)
                continue;
            for (uint32_t eid : adj_[u]) {
                const Edge& e = edges_[eid];
                uint32_t v = e.u == u ? e.v : e.u;
                double nd = d + weight_of(e.mech);
                if (nd < ds[v]) {
                    ds[v] = nd;
                    ps[v] = eid;
                    pq.push({nd, v});
                }
            }
        }
    }

    // Reduced graph: fired detectors 0..k-1, one boundary copy each at
    // k..2k-1; boundary copies pair up for free. Maximum-cardinality
    // max-weight matching on weights big - dist realizes the minimum-weight
    // pairing.
    const double scale = 1e9;
    double max_d = 0;
    for (size_t i = 0; i < k; ++i) {
        for (size_t j = i + 1; j < k; ++j)
            if (dist[i][fired[j]] < inf)
                max_d = std::max(max_d, dist[i][fired[j]]);
        if (dist[i][boundary_] < inf)
            max_d = std::max(max_d, dist[i][boundary_]);
    }
    int64_t big = static_cast<int64_t>(max_d * scale) * (2 * (int64_t)k + 2) + 1;
    std::vector<std::array<int64_t, 3>> graph_edges;
    for (size_t i = 0; i < k; ++i) {
        for (size_t j = i + 1; j < k; ++j)
            if (dist[i][fired[j]] < inf)
                graph_edges.push_back({int64_t(i), int64_t(j),
                                       big - std::llround(dist[i][fired[j]] * scale)});
        if (dist[i][boundary_] < inf)
            graph_edges.push_back({int64_t(i), int64_t(k + i),
                                   big - std::llround(dist[i][boundary_] * scale)});
        for (size_t j = i + 1; j < k; ++j)
            graph_edges.push_back({int64_t(k + i), int64_t(k + j), big});
    }
    std::vector<int> mate =
        detail::max_weight_matching(int(2 * k), graph_edges, /*max_cardinality=*/true);

    const int null_vertex = -1;
    std::vector<uint8_t> obs_flip(std::max<size_t>(dem.num_observables, 1), 0);
    auto absorb_path = [&](size_t src, uint32_t dst) {
        uint32_t node = dst;
        while (node != fired[src]) {
            uint32_t eid = pred[src][node];
            const Edge& e = edges_[eid];
            for (uint32_t o : dem.mechanisms[e.mech].observables)
                obs_flip[o] ^= 1;
            result.weight += plain_of(e.mech);
            node = e.u == node ? e.v : e.u;
        }
    };
    for (size_t i = 0; i < k; ++i) {
        size_t m = size_t(mate[i]);
        if (mate[i] == null_vertex)
            throw std::runtime_error("detector " + std::to_string(fired[i]) +
                                     " lies in an odd unmatched component");
        if (m < k) {
            if (m > i)
                absorb_path(i, fired[m]);
        } else {
            absorb_path(i, boundary_);
        }
    }
    for (uint32_t o = 0; o < dem.num_observables; ++o)
        if (obs_flip[o])
            result.observables.push_back(o);
    return result;
}

MatchResult decode(const DetectorErrorModel& dem, const std::vector<uint8_t>& detectors,
                   const std::vector<std::pair<uint32_t, uint32_t>>& erased) {
    return Matcher(dem).decode(detectors, erased);
}

MatchResult oracle_decode(const DetectorErrorModel& dem, const std::vector<uint8_t>& detectors,
                          const std::vector<std::pair<uint32_t, uint32_t>>& erased) {
    size_t m = dem.mechanisms.size();
    if (m > 20)
        throw std::invalid_argument("oracle decoder limited to 2^20 subsets");
    if (detectors.size() != dem.num_detectors)
        throw std::invalid_argument("detector vector length mismatch");
    if (dem.num_detectors > 64)
        throw std::invalid_argument("oracle decoder limited to 64 detectors");
    std::vector<uint8_t> zeroed = overlay_erased(dem, erased);
    std::vector<double> w(m), plain(m);
    for (uint32_t i = 0; i < m; ++i) {
        plain[i] = zeroed[i] ? 0.0 : mechanism_weight(dem.mechanisms[i].probability);
        w[i] = plain[i] + tie_epsilon(i);
    }
    uint64_t target = 0;
    for (uint32_t d = 0; d < detectors.size(); ++d)
        if (detectors[d])
            target |= uint64_t(1) << d;
    std::vector<uint64_t> sig(m, 0);
    for (uint32_t i = 0; i < m; ++i)
        for (uint32_t d : dem.mechanisms[i].detectors)
            sig[i] |= uint64_t(1) << d;

    double best_w = std::numeric_limits<double>::infinity();
    uint64_t best_mask = 0;
    bool found = false;
    auto lex_less = [&](uint64_t a, uint64_t b) {
        // Compare index sets lexicographically: the set containing the
        // smaller first element wins; on ties recurse.
        while (a && b) {
            int ia = __builtin_ctzll(a), ib = __builtin_ctzll(b);
            if (ia != ib)
                return ia < ib;
            a &= a - 1;
            b &= b - 1;
        }
        return a != 0 && b == 0;
    };
    for (uint64_t mask = 0; mask < (uint64_t(1) << m); ++mask) {
        uint64_t s = 0;
        double wt = 0;
        for (uint64_t rest = mask; rest; rest &= rest - 1) {
            uint32_t i = static_cast<uint32_t>(__builtin_ctzll(rest));
            s ^= sig[i];
            wt += w[i];
        }
        if (s != target)
            continue;
        if (!found || wt < best_w - 1e-15 ||
            (std::abs(wt - best_w) <= 1e-15 && lex_less(mask, best_mask))) {
            found = true;
            best_w = wt;
            best_mask = mask;
        }
    }
    if (!found)
        throw std::runtime_error("no mechanism subset reproduces the syndrome");
    MatchResult result;
    std::vector<uint8_t> obs_flip(std::max<size_t>(dem.num_observables, 1), 0);
    for (uint64_t rest = best_mask; rest; rest &= rest - 1) {
        uint32_t i = static_cast<uint32_t>(__builtin_ctzll(rest));
        for (uint32_t o : dem.mechanisms[i].observables)
            obs_flip[o] ^= 1;
        result.weight += plain[i];
    }
    for (uint32_t o = 0; o < dem.num_observables; ++o)
        if (obs_flip[o])
            result.observables.push_back(o);
    return result;
}

} // namespace eml
