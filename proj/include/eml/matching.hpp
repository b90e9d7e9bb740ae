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

#ifndef EML_MATCHING_HPP
#define EML_MATCHING_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "eml/dem.hpp"

namespace eml {

struct MatchResult {
    std::vector<uint32_t> observables; // sorted observable ids flipped
    double weight = 0;
};

/// Minimum-weight perfect matching decoder over the DEM's detector graph.
/// Mechanisms with a single detector connect to a virtual boundary node;
/// erased locations reduce their mechanisms to weight 0 per shot via an
/// overlay, never mutating the shared model. Instances are immutable and
/// safe to share across decoding threads.
class Matcher {
  public:
    explicit Matcher(const DetectorErrorModel& dem);

    MatchResult decode(const std::vector<uint8_t>& detectors,
                       const std::vector<std::pair<uint32_t, uint32_t>>& erased = {}) const;

  private:
    const DetectorErrorModel* dem_;
    struct Edge {
        uint32_t u, v; // v == boundary for single-detector mechanisms
        uint32_t mech;
    };
    std::vector<Edge> edges_;
    std::vector<std::vector<uint32_t>> adj_; // node -> incident edge ids
    std::vector<double> base_weight_;        // ln((1-p)/p) plus a tie-break epsilon
    std::vector<double> plain_weight_;       // without the epsilon, for reporting
    uint32_t boundary_;
};

/// One-shot convenience wrapper around Matcher.
MatchResult decode(const DetectorErrorModel& dem, const std::vector<uint8_t>& detectors,
                   const std::vector<std::pair<uint32_t, uint32_t>>& erased = {});

/// Exhaustive minimum-weight subset decoder for small models (< 2^20
/// subsets); weights -ln(p/(1-p)), erased locations weight 0, ties broken by
/// the lexicographically smallest mechanism index set. Throws when no subset
/// reproduces the syndrome.
MatchResult oracle_decode(const DetectorErrorModel& dem, const std::vector<uint8_t>& detectors,
                          const std::vector<std::pair<uint32_t, uint32_t>>& erased = {});

} // namespace eml

#endif // EML_MATCHING_HPP
