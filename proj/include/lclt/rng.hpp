// Copyright 2026 The lcltlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace lclt {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// xoshiro256** (Blackman & Vigna). Satisfies UniformRandomBitGenerator, so
/// it plugs into <random> distributions, but the library itself only uses
/// the bit-exact helpers below to keep streams reproducible across
/// standard library implementations.
class Xoshiro256 {
 public:
  using result_type = std::uint64_t;

  Xoshiro256() : Xoshiro256(0) {}

  explicit Xoshiro256(std::uint64_t seed) noexcept {
    std::uint64_t z = seed;
    for (auto& w : state_) {
      z = splitmix64(z);
      w = z;
    }
  }

  explicit Xoshiro256(const std::array<std::uint64_t, 4>& state) noexcept : state_(state) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  void discard(unsigned long long n) noexcept {
    while (n-- > 0) (*this)();
  }

  const std::array<std::uint64_t, 4>& state() const noexcept { return state_; }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> state_{};
};

/// Identifies one replicate: (master seed, ladder index, replicate index).
struct StreamKey {
  std::uint64_t master_seed = 0;
  std::uint32_t size_index = 0;
  std::uint32_t replicate_index = 0;

  friend bool operator==(const StreamKey&, const StreamKey&) = default;
};

/// Engine for one replicate. The first two state words carry the key
/// verbatim, so distinct keys always give distinct generator states; the
/// other two are hashed copies so low-entropy keys still start well mixed.
inline Xoshiro256 make_stream(const StreamKey& key) noexcept {
  const std::uint64_t packed =
      (static_cast<std::uint64_t>(key.size_index) << 32) | key.replicate_index;
  Xoshiro256 engine({key.master_seed, packed, splitmix64(key.master_seed ^ 0x5851f42d4c957f2dULL),
                     splitmix64(packed ^ 0x14057b7ef767814fULL)});
  engine.discard(16);
  return engine;
}

/// Uniform double in [0, 1) with 53 random bits.
template <class Engine>
inline double uniform01(Engine& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

template <class Engine>
inline double uniform(Engine& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

/// Integer in [0, bound) by Lemire's multiply-shift; bound must be > 0.
template <class Engine>
inline std::uint64_t uniform_index(Engine& rng, std::uint64_t bound) {
  std::uint64_t x = rng();
  __uint128_t m = static_cast<__uint128_t>(x) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      x = rng();
      m = static_cast<__uint128_t>(x) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

}  // namespace lclt
