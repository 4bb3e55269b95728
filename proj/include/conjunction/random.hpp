// Copyright 2026 The Conjunction Authors
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

#ifndef CONJUNCTION_RANDOM_HPP_
#define CONJUNCTION_RANDOM_HPP_

#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>

namespace conjunction {

// Counter-based generator: draw i of stream s under seed k is a pure
// function of (k, s, i), so results do not depend on how work is split
// across threads. The mixer is the SplitMix64 finalizer applied twice.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream)
      : key_(Mix(seed ^ Mix(stream + 0x632be59bd9b4e019ULL))) {}

  std::uint64_t bits(std::uint64_t counter) const {
    return Mix(key_ + Mix(counter * 0x9e3779b97f4a7c15ULL + 1));
  }

  // Uniform on the open interval (0, 1).
  double uniform(std::uint64_t counter) const {
    return (static_cast<double>(bits(counter) >> 11) + 0.5) * 0x1.0p-53;
  }

  // Two independent standard normals from counters 2i and 2i+1
  // (Box-Muller).
  std::pair<double, double> normal_pair(std::uint64_t i) const {
    const double u1 = uniform(2 * i);
    const double u2 = uniform(2 * i + 1);
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    return {radius * std::cos(angle), radius * std::sin(angle)};
  }

  // Stream derived from this one, for nested work items.
  CounterRng substream(std::uint64_t index) const {
    return CounterRng(key_, index);
  }

 private:
  static std::uint64_t Mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
};

}  // namespace conjunction

#endif  // CONJUNCTION_RANDOM_HPP_
