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

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <iostream>

#include "eml/builders.hpp"
#include "eml/noise.hpp"
#include "eml/sampler.hpp"

using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

} // namespace

int main(int argc, char** argv) {
    uint64_t shots = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 20000;
    uint32_t d1 = argc > 2 ? uint32_t(std::strtoul(argv[2], nullptr, 10)) : 3;

    eml::Circuit clean = eml::build_hook_injection({d1, 2});
    eml::Circuit noisy = eml::annotate(clean, eml::NoiseParams::uniform(1e-3, 1e-2),
                                       eml::ErasurePlan::all_qubits(clean));

    auto t0 = Clock::now();
    auto serial = eml::sample_serial(noisy, shots, 1);
    double t_serial = seconds_since(t0);

    t0 = Clock::now();
    auto parallel = eml::sample(noisy, shots, 1);
    double t_parallel = seconds_since(t0);

    size_t mismatches = 0;
    for (uint64_t s = 0; s < shots; ++s)
        mismatches += serial[s].detectors != parallel[s].detectors ||
                      serial[s].observable_flip != parallel[s].observable_flip;

    std::cout << "shots: " << shots << " (hook d1=" << d1 << ")\n"
              << "serial:   " << t_serial << " s (" << double(shots) / t_serial
              << " shots/s)\n"
              << "parallel: " << t_parallel << " s (" << double(shots) / t_parallel
              << " shots/s)\n"
              << "speedup:  " << t_serial / t_parallel << "x\n"
              << "mismatched shots: " << mismatches << "\n";
    return mismatches == 0 ? 0 : 1;
}
