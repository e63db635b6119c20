// Copyright 2026 The vpmetro Authors
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

#pragma once

#include <cstdint>

namespace vpm {

// Counter-based random numbers: every draw is a pure function of
// (seed, stream, index), so results never depend on evaluation order
// or on how work is split across threads.

constexpr uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

constexpr uint64_t mix_key(uint64_t seed, uint64_t stream, uint64_t index) {
    return splitmix64(splitmix64(splitmix64(seed) ^ stream) ^ index);
}

/// Uniform double on [0, 1) with 53 random bits.
constexpr double counter_uniform(uint64_t seed, uint64_t stream, uint64_t index) {
    return static_cast<double>(mix_key(seed, stream, index) >> 11) * 0x1.0p-53;
}

/// Uniform double on [lo, hi].
constexpr double counter_uniform(uint64_t seed, uint64_t stream, uint64_t index, double lo, double hi) {
    return lo + (hi - lo) * counter_uniform(seed, stream, index);
}

/// Derives a child seed for a named sub-computation (sweep cell, repetition, ...).
constexpr uint64_t derive_seed(uint64_t seed, uint64_t a, uint64_t b = 0, uint64_t c = 0) {
    return mix_key(mix_key(seed, a, b), c, 0x5EEDull);
}

}  // namespace vpm
