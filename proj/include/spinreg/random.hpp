// Copyright 2026 The spinreg Authors
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

#ifndef SPINREG_RANDOM_HPP
#define SPINREG_RANDOM_HPP

#include <cstdint>
#include <random>

namespace spinreg {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Seed of the `counter`-th stream under `master`. Streams are independent of
/// how work is split across threads.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t counter) {
    return splitmix64(splitmix64(master) ^ splitmix64(counter + 0x632BE59BD9B4E019ULL));
}

inline Rng make_stream(std::uint64_t master, std::uint64_t counter) { return Rng(derive_seed(master, counter)); }

inline double uniform01(Rng &rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

inline bool bernoulli(Rng &rng, double p) { return p > 0.0 && uniform01(rng) < p; }

}  // namespace spinreg

#endif
