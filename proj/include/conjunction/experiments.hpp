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

#ifndef CONJUNCTION_EXPERIMENTS_HPP_
#define CONJUNCTION_EXPERIMENTS_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "conjunction/collision_probability.hpp"
#include "conjunction/geometry.hpp"
#include "conjunction/inference.hpp"

namespace conjunction {

enum class TrajectoryLabel { kMiss, kHit };

struct TimelineEpoch {
  double lead_time_h = 0.0;  // hours before TCA
  EncounterFrame frame;
};

// Successive updates of one conjunction; lead times strictly decrease.
struct TimelineSeries {
  std::vector<TimelineEpoch> epochs;
  TrajectoryLabel label = TrajectoryLabel::kMiss;

  // Throws InvalidInput if empty or lead times are not strictly decreasing.
  void validate() const;
};

struct RiskAssessment {
  double pc_foster = 0.0;
  double pc_chan = 0.0;
  double p_obs = 0.5;
  double r = 0.0;
  std::optional<double> w;
  double psi_hat = 0.0;
  double psi0 = 0.0;
  ConfidenceInterval ci;
};

// Rows split on p_obs >= alpha, columns on pc < threshold.
struct ConfusionTable {
  double alpha = 0.0;
  double pc_threshold = 1e-4;
  std::uint64_t pobs_ge_pc_lt = 0;
  std::uint64_t pobs_ge_pc_ge = 0;
  std::uint64_t pobs_lt_pc_lt = 0;
  std::uint64_t pobs_lt_pc_ge = 0;  // missed detections relative to pc

  std::uint64_t total() const {
    return pobs_ge_pc_lt + pobs_ge_pc_ge + pobs_lt_pc_lt + pobs_lt_pc_ge;
  }
};

struct TimelineRow {
  double lead_time_h = 0.0;
  double psi_hat = 0.0;
  double pc = 0.0;
  double p_obs = 0.0;
  double log10_pc = 0.0;    // -inf when pc == 0
  double log10_p_obs = 0.0;
};

// Miss: every epoch plus zero-mean noise N(0, kappa^2 D_final). Hit: every
// epoch shifted by minus the final observed position, then the same noise.
std::pair<TimelineSeries, TimelineSeries> synthesize_hit_miss(
    const TimelineSeries& base, double kappa, std::uint64_t seed);

// Multiplies the covariance by c: (d1, d2) -> sqrt(c) (d1, d2).
EncounterFrame scale_covariance(const EncounterFrame& frame, double c);

// pc (quadrature and series), likelihood root, Wald, p_obs and a profile
// interval; psi0 defaults to the frame's hard-body radius.
RiskAssessment assess(const EncounterFrame& frame,
                      std::optional<double> psi0 = std::nullopt,
                      double level = 0.95, const QuadratureConfig& cfg = {});

ConfusionTable confusion_matrix(std::span<const RiskAssessment> assessments,
                                double alpha, double pc_threshold = 1e-4);

std::vector<TimelineRow> timeline_report(const TimelineSeries& series,
                                         double hbr,
                                         const QuadratureConfig& cfg = {});

// Seven-day fixture: 17 updates at 168, 156, ..., 12, 6 and 2 h before TCA.
// Standard deviations decay geometrically from (5, 1) km to (0.05, 0.01) km
// at TCA; the observed position drifts linearly from (3.8, -1.4) km toward
// (0.8, 0.6) km; HBR is 20 m.
TimelineSeries reference_timeline();

}  // namespace conjunction

#endif  // CONJUNCTION_EXPERIMENTS_HPP_
