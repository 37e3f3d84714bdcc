//
// Copyright 2026 The pptopn Authors
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
//

#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace pptopn {

// Every random decision in the toolkit is derived from explicit 64-bit seeds
// through the helpers below, so that a (seed, index) pair fully determines an
// outcome regardless of evaluation order, thread count, or platform.
// std::mt19937_64 is used where a sequential stream is needed because its
// output sequence is fixed by the standard; std::uniform_* distributions are
// avoided because their mappings are implementation-defined.

/// SplitMix64 finalizer. Bijective avalanche mix of a 64-bit value.
inline constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Keyed avalanche hash of a 64-bit value. Used for MinHash functions,
/// per-round RNG stream derivation, and per-like split decisions.
inline constexpr std::uint64_t keyed_hash(std::uint64_t key, std::uint64_t value) noexcept {
    return mix64(key ^ mix64(value));
}

/// Keyed hash of two 32-bit ids packed into one word (order significant).
inline constexpr std::uint64_t keyed_hash(std::uint64_t key,
                                          std::uint32_t a,
                                          std::uint32_t b) noexcept {
    return keyed_hash(key, (static_cast<std::uint64_t>(a) << 32) | b);
}

/// FNV-1a over bytes, mixed with a key. Used to subsample raw string ids.
inline std::uint64_t keyed_string_hash(std::uint64_t key, std::string_view s) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return keyed_hash(key, h);
}

/// Maps a 64-bit word to a double in [0, 1) with 53 uniform bits.
inline constexpr double to_unit_double(std::uint64_t x) noexcept {
    return static_cast<double>(x >> 11) * 0x1.0p-53;
}

/// A sequential PRNG stream. Construction from (seed) pins the sequence.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in [0, 1).
    double next_unit() { return to_unit_double(engine_()); }

    /// Unbiased uniform integer in [0, bound). Lemire multiply-shift with
    /// rejection, so the mapping is identical on every platform.
    std::uint64_t next_below(std::uint64_t bound) {
        std::uint64_t x = engine_();
        unsigned __int128 m = static_cast<unsigned __int128>(x) * bound;
        auto low = static_cast<std::uint64_t>(m);
        if (low < bound) {
            const std::uint64_t threshold = -bound % bound;
            while (low < threshold) {
                x = engine_();
                m = static_cast<unsigned __int128>(x) * bound;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace pptopn
