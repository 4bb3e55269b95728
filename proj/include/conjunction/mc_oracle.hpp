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

#ifndef CONJUNCTION_MC_ORACLE_HPP_
#define CONJUNCTION_MC_ORACLE_HPP_

#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "conjunction/error.hpp"
#include "conjunction/geometry.hpp"
#include "conjunction/random.hpp"

namespace conjunction {

struct McEstimate {
  double estimate = 0.0;
  double std_error = 0.0;  // sqrt(p(1-p)/n)
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
};

// Plain Monte Carlo estimate of the disk probability; n >= 1000.
McEstimate mc_pc(const EncounterFrame& frame, const Eigen::Vector2d& center,
                 std::uint64_t n, std::uint64_t seed);

enum class BoundaryCase { kInside, kBoundary, kOutside };

struct FrameCheck {
  EncounterFrame frame;
  double pc_hat = 0.0;
  double p_obs = 0.0;
  bool quadrature_converged = true;
};

struct TheoremReport {
  std::uint64_t configs = 0;
  std::uint64_t violations = 0;
  std::uint64_t boundary_checks = 0;
  std::uint64_t inside = 0;
  std::uint64_t boundary = 0;
  std::uint64_t outside = 0;
  std::uint64_t quadrature_failures = 0;
  double max_excess = -1.0;  // max of pc_hat - p_obs over all configs
  double max_anisotropy = 1.0;
  std::vector<FrameCheck> offending;
};

class TheoremViolation : public PropertyViolation {
 public:
  explicit TheoremViolation(TheoremReport report);
  const TheoremReport& report() const { return report_; }

 private:
  TheoremReport report_;
};

// Random frame i of a sweep: d1, d2 log-uniform on [1e-3, 1e3] (sorted so
// d1 >= d2), ||x|| / d1 uniform on (0, 10], uniform orientation. The case
// cycles with i: boundary frames take hbr = ||x|| as computed, inside
// frames hbr = ||x|| * 10^U(0,2), outside frames hbr = ||x|| * 10^-U(0,3).
EncounterFrame sample_theorem_frame(std::uint64_t seed, std::uint64_t index,
                                    BoundaryCase* which = nullptr);

// Checks pc_hat <= p_obs + 1e-12 on n_configs sampled frames, plus
// p_obs == 1/2 and pc_hat < 1/2 on the boundary frames. Throws
// TheoremViolation (carrying the report) if any check fails.
// pc_hat and p_obs for one frame. A result that appears to break the
// ordering (or pc_hat < 1/2 on the boundary) is recomputed at a tighter
// quadrature tolerance.
FrameCheck check_theorem_frame(const EncounterFrame& frame, BoundaryCase kind);

TheoremReport theorem_sweep(std::uint64_t n_configs, std::uint64_t seed,
                            unsigned threads = 1);

struct CalibrationResult {
  double ks_statistic = 0.0;
  double critical_value_1pct = 0.0;  // 1.63 / sqrt(n)
  std::uint64_t replicates = 0;
  // (nominal level, empirical quantile of p_obs)
  std::vector<std::pair<double, double>> quantiles;
};

// Simulates x ~ N(psi0 (cos l, sin l), diag(d1^2, d2^2)) with l cycling
// over a uniform grid of lambda_grid angles, and compares the pooled
// p_obs(psi0) values with Uniform(0, 1).
CalibrationResult calibration_study(double d1, double d2, double psi0,
                                    int lambda_grid, std::uint64_t replicates,
                                    std::uint64_t seed);

struct CoverageResult {
  double coverage = 0.0;
  double level = 0.95;
  std::uint64_t replicates = 0;
  std::uint64_t covered = 0;
  std::uint64_t truncated = 0;
};

// Fraction of profile-likelihood intervals containing psi_true, with the
// true orientation drawn uniformly per replicate.
CoverageResult coverage_study(double d1, double d2, double psi_true,
                              double level, std::uint64_t replicates,
                              std::uint64_t seed);

// Kolmogorov-Smirnov distance between the sample and Uniform(0, 1).
double ks_uniform_distance(std::vector<double> values);

}  // namespace conjunction

#endif  // CONJUNCTION_MC_ORACLE_HPP_
