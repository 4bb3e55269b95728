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


// Deterministic configuration sets shared by the unit and acceptance tests.

#ifndef CONJUNCTION_TESTS_FIXTURES_HPP_
#define CONJUNCTION_TESTS_FIXTURES_HPP_

#include <cmath>
#include <numbers>
#include <vector>

#include "conjunction/geometry.hpp"
#include "conjunction/random.hpp"

namespace fixtures {

// 100 frames with d1/d2 in [1, 2], ||center|| in [0, 5 d1] and a small disk
// (hbr = 0.01 d2), where the equivalent-area series is accurate.
inline std::vector<conjunction::EncounterFrame> ChanGrid() {
  std::vector<conjunction::EncounterFrame> grid;
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 10; ++j) {
      conjunction::EncounterFrame f;
      f.d2 = 0.5;
      f.d1 = f.d2 * (1.0 + i / 9.0);
      const double rho = 5.0 * f.d1 * j / 9.0;
      const double angle = 2.0 * std::numbers::pi * std::fmod(0.618034 * (10 * i + j), 1.0);
      f.x1 = rho * std::cos(angle);
      f.x2 = rho * std::sin(angle);
      f.hbr = 0.01 * f.d2;
      grid.push_back(f);
    }
  }
  return grid;
}

// Random frames for Monte Carlo comparison: moderate anisotropy, disk and
// offset comparable to the spread so that the probability is not tiny.
inline conjunction::EncounterFrame McFrame(std::uint64_t seed, std::uint64_t i) {
  const conjunction::CounterRng rng = conjunction::CounterRng(seed, 7).substream(i);
  conjunction::EncounterFrame f;
  f.d1 = std::pow(10.0, -1.0 + 2.0 * rng.uniform(0));
  f.d2 = f.d1 * std::pow(10.0, -1.5 * rng.uniform(1));
  const double rho = 3.0 * f.d1 * rng.uniform(2);
  const double angle = 2.0 * std::numbers::pi * rng.uniform(3);
  f.x1 = rho * std::cos(angle);
  f.x2 = rho * std::sin(angle);
  f.hbr = f.d1 * std::pow(10.0, -1.0 + 1.5 * rng.uniform(4));
  return f;
}

// Frames outside the disk for dilution scans: spread d in [0.5, 5] hbr and
// offset in [1.5, 10] hbr.
inline conjunction::EncounterFrame DilutionFrame(std::uint64_t seed,
                                                 std::uint64_t i) {
  const conjunction::CounterRng rng = conjunction::CounterRng(seed, 9).substream(i);
  conjunction::EncounterFrame f;
  f.hbr = 0.02;
  f.d1 = f.hbr * 0.5 * std::pow(10.0, rng.uniform(0));
  f.d2 = f.hbr * 0.5 * std::pow(10.0, rng.uniform(1));
  if (f.d2 > f.d1) std::swap(f.d1, f.d2);
  const double rho = f.hbr * (1.5 + 8.5 * rng.uniform(2));
  const double angle = 2.0 * std::numbers::pi * rng.uniform(3);
  f.x1 = rho * std::cos(angle);
  f.x2 = rho * std::sin(angle);
  return f;
}

}  // namespace fixtures

#endif  // CONJUNCTION_TESTS_FIXTURES_HPP_
