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

#ifndef CONJUNCTION_COLLISION_PROBABILITY_HPP_
#define CONJUNCTION_COLLISION_PROBABILITY_HPP_

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "conjunction/geometry.hpp"

namespace conjunction {

struct QuadratureConfig {
  double relative_tolerance = 1e-10;
  int max_refinements = 30;

  // Throws InvalidInput unless tolerance is in (0, 1e-2] and
  // max_refinements >= 1.
  void validate() const;
};

// Probability mass of N(center, diag(d1^2, d2^2)) inside the disk of radius
// frame.hbr about the origin, integrated in polar coordinates: adaptive
// Simpson over the angle, adaptive Gauss-Kronrod along each ray. Throws
// QuadratureFailure if the tolerance is not met within max_refinements
// bisection levels.
double pc_quadrature(const EncounterFrame& frame, const Eigen::Vector2d& center,
                     const QuadratureConfig& cfg = {});

// Plug-in estimate: density centred at the observed position.
double pc_hat(const EncounterFrame& frame, const QuadratureConfig& cfg = {});

// Equivalent-area series with u = hbr^2 / (d1 d2) and
// v = c1^2/d1^2 + c2^2/d2^2:
//   p = sum_k Poisson(k; v/2) * P(k + 1, u/2)
// where P is the regularized lower incomplete gamma function. Stops after
// the Poisson mode once a term drops below 1e-16 of the sum, or at
// max_order.
double pc_chan(const EncounterFrame& frame, const Eigen::Vector2d& center,
               int max_order = 100);

// Smallest max_order for which pc_chan's truncation cannot cut the series
// before its Poisson mode (at least 100).
int chan_order_for(const EncounterFrame& frame, const Eigen::Vector2d& center);

struct DilutionPoint {
  double scale = 1.0;  // covariance multiplier c
  double pc = 0.0;
};

// pc_hat with the covariance multiplied by each c (d -> sqrt(c) d).
std::vector<DilutionPoint> dilution_curve(const EncounterFrame& frame,
                                          std::span<const double> scales,
                                          const QuadratureConfig& cfg = {});

struct PcMax {
  double scale = 1.0;
  double pc = 0.0;
  bool boundary = false;  // maximum sits on an end of the scanned range
};

// Maximizes pc_hat over c with log10(c) in [log10_c_min, log10_c_max]:
// uniform grid scan then golden-section refinement around the best point.
PcMax pc_max(const EncounterFrame& frame, double log10_c_min,
             double log10_c_max, int grid, const QuadratureConfig& cfg = {});

}  // namespace conjunction

#endif  // CONJUNCTION_COLLISION_PROBABILITY_HPP_
