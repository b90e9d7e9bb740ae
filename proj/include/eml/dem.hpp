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

#ifndef EML_DEM_HPP
#define EML_DEM_HPP

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "eml/circuit.hpp"

namespace eml {

/// One merged error mechanism. `detectors` and `observables` are sorted;
/// after construction every mechanism is graphlike (at most two detectors),
/// hyperedge terms having been decomposed into their per-qubit X/Z atoms.
/// `locations` lists the (instruction index, term index) pairs that
/// contributed.
struct ErrorMechanism {
    double probability = 0;
    std::vector<uint32_t> detectors;
    std::vector<uint32_t> observables;
    std::vector<std::pair<uint32_t, uint32_t>> locations;
};

struct DetectorErrorModel {
    size_t num_detectors = 0;
    size_t num_observables = 0;
    std::vector<ErrorMechanism> mechanisms;
    /// (instruction index, qubit) of each erasure draw site, mapped to the
    /// mechanism indices it feeds; used for per-shot weight-0 reweighting.
    std::map<std::pair<uint32_t, uint32_t>, std::vector<uint32_t>> erasure_map;
    /// Raw Pauli terms processed before merging and decomposition.
    size_t num_terms = 0;
};

/// Builds the detector error model by propagating detector/observable
/// sensitivity masks backwards through the Clifford circuit. Deterministic.
/// Throws on validation failures, non-Clifford gates, and terms whose
/// per-qubit atoms flip more than two detectors.
DetectorErrorModel build_dem(const Circuit& circuit);

/// One line per mechanism: `error(p) D3 D7 L0`.
std::string dump_dem(const DetectorErrorModel& dem);

} // namespace eml

#endif // EML_DEM_HPP
