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

#ifndef EML_RNG_HPP
#define EML_RNG_HPP

#include <cstdint>

namespace eml {

/// Counter-based random stream keyed by (seed, shot index).
///
/// Every draw is a pure function of (seed, shot, counter), so shots can be
/// sampled in any order, on any number of threads, and replayed bit-exactly.
class CounterRng {
  public:
    CounterRng(uint64_t seed, uint64_t shot) : counter_(0) {
        key_ = mix(seed + 0x9e3779b97f4a7c15ULL * (shot + 1));
        key_ = mix(key_ ^ shot);
    }

    uint64_t next_u64() {
        return mix(key_ + 0x9e3779b97f4a7c15ULL * ++counter_);
    }

    /// Uniform double in [0, 1).
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    bool bernoulli(double p) {
        if (p <= 0.0)
            return false;
        if (p >= 1.0)
            return true;
        return next_double() < p;
    }

    /// Uniform integer in [0, n). n must be > 0 and small (no rejection
    /// sampling; bias is negligible for n <= 16 as used here).
    uint32_t next_below(uint32_t n) {
        return static_cast<uint32_t>((static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

  private:
    // Stafford mix13 finalizer.
    static uint64_t mix(uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    uint64_t key_;
    uint64_t counter_;
};

} // namespace eml

#endif // EML_RNG_HPP
