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

#ifndef EML_DETAIL_WEIGHTED_MATCHING_HPP
#define EML_DETAIL_WEIGHTED_MATCHING_HPP

#include <array>
#include <cstdint>
#include <vector>

namespace eml::detail {

/// Maximum-weight matching on a general graph (blossoms and dual updates in
/// the Galil formulation). Edges are (u, v, weight) with nonnegative integer
/// weights. With max_cardinality the result has maximum cardinality first and
/// maximum weight among those. Returns mate[v] (partner vertex or -1).
std::vector<int> max_weight_matching(int num_vertices,
                                     const std::vector<std::array<int64_t, 3>>& edges,
                                     bool max_cardinality);

} // namespace eml::detail

#endif // EML_DETAIL_WEIGHTED_MATCHING_HPP
