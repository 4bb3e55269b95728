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

#include "conjunction/mc_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

#include "conjunction/collision_probability.hpp"
#include "conjunction/inference.hpp"
#include "conjunction/parallel.hpp"

namespace conjunction {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kOrderingSlack = 1e-12;
constexpr double kRefinedTolerance = 1e-12;
constexpr std::uint64_t kMinReplicates = 1000;

double NearestRank(const std::vector<double>& sorted, double q) {
  const auto n = static_cast<double>(sorted.size());
  auto rank = static_cast<std::size_t>(std::ceil(q * n));
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  return sorted[rank - 1];
}

}  // namespace

TheoremViolation::TheoremViolation(TheoremReport report)
    : PropertyViolation(std::to_string(report.violations) +
                        " frame(s) violate pc_hat <= p_obs"),
      report_(std::move(report)) {}

McEstimate mc_pc(const EncounterFrame& frame, const Eigen::Vector2d& center,
                 std::uint64_t n, std::uint64_t seed) {
  if (n < kMinReplicates) {
    throw InvalidInput("Monte Carlo estimate needs at least 1000 samples");
  }
  if (!std::isfinite(frame.d1) || !std::isfinite(frame.d2) ||
      !(frame.d1 > 0.0) || !(frame.d2 > 0.0) || !(frame.hbr >= 0.0) ||
      !center.allFinite()) {
    throw InvalidInput("Monte Carlo estimate needs a valid frame and center");
  }
  const CounterRng rng(seed, 0);
  const double r2 = frame.hbr * frame.hbr;
  std::uint64_t hits = 0;
  for (std::uint64_t i = 0; i < n; ++i) {
    const auto [z1, z2] = rng.normal_pair(i);
    const double px = center.x() + frame.d1 * z1;
    const double py = center.y() + frame.d2 * z2;
    if (px * px + py * py <= r2) ++hits;
  }
  McEstimate est;
  est.samples = n;
  est.seed = seed;
  est.estimate = static_cast<double>(hits) / static_cast<double>(n);
  est.std_error = std::sqrt(est.estimate * (1.0 - est.estimate) /
                            static_cast<double>(n));
  return est;
}

EncounterFrame sample_theorem_frame(std::uint64_t seed, std::uint64_t index,
                                    BoundaryCase* which) {
  const CounterRng rng = CounterRng(seed, 1).substream(index);
  double d1, d2;
  if (index % 50 == 49) {
    // Pin the extreme anisotropy of the sampling box.
    d1 = 1e3;
    d2 = 1e-3;
  } else {
    d1 = std::pow(10.0, -3.0 + 6.0 * rng.uniform(0));
    d2 = std::pow(10.0, -3.0 + 6.0 * rng.uniform(1));
    if (d2 > d1) std::swap(d1, d2);
  }
  const double rho = d1 * 10.0 * (1.0 - rng.uniform(2));  // (0, 10] * d1
  const double angle = kTwoPi * rng.uniform(3);
  EncounterFrame f;
  f.x1 = rho * std::cos(angle);
  f.x2 = rho * std::sin(angle);
  f.d1 = d1;
  f.d2 = d2;
  const double norm = f.observed_distance();
  BoundaryCase kind;
  switch (index % 3) {
    case 0:
      kind = BoundaryCase::kBoundary;
      f.hbr = norm;
      break;
    case 1:
      kind = BoundaryCase::kInside;
      f.hbr = norm * std::pow(10.0, 2.0 * rng.uniform(4));
      if (!(f.hbr > norm)) f.hbr = std::nextafter(norm, 2.0 * norm);
      break;
    default:
      kind = BoundaryCase::kOutside;
      f.hbr = norm * std::pow(10.0, -3.0 * rng.uniform(4));
      if (!(f.hbr < norm)) f.hbr = std::nextafter(norm, 0.0);
      break;
  }
  if (which != nullptr) *which = kind;
  return f;
}

FrameCheck check_theorem_frame(const EncounterFrame& frame, BoundaryCase kind) {
  FrameCheck c;
  c.frame = frame;
  c.p_obs = significance_probability(frame, frame.hbr);
  const bool boundary = kind == BoundaryCase::kBoundary;
  QuadratureConfig cfg;
  for (double tol : {cfg.relative_tolerance, kRefinedTolerance}) {
    cfg.relative_tolerance = tol;
    c.quadrature_converged = true;
    try {
      c.pc_hat = pc_hat(frame, cfg);
    } catch (const QuadratureFailure& e) {
      c.pc_hat = e.estimate();
      c.quadrature_converged = false;
    }
    if (c.pc_hat <= c.p_obs + kOrderingSlack && (!boundary || c.pc_hat < 0.5)) {
      break;
    }
  }
  return c;
}

TheoremReport theorem_sweep(std::uint64_t n_configs, std::uint64_t seed,
                            unsigned threads) {
  if (n_configs < 1) throw InvalidInput("theorem sweep needs >= 1 config");
  std::vector<FrameCheck> checks(n_configs);
  std::vector<BoundaryCase> kinds(n_configs);
  parallel_for(n_configs, threads, [&](std::size_t i) {
    const EncounterFrame frame = sample_theorem_frame(seed, i, &kinds[i]);
    checks[i] = check_theorem_frame(frame, kinds[i]);
  });

  TheoremReport report;
  report.configs = n_configs;
  for (std::size_t i = 0; i < n_configs; ++i) {
    const FrameCheck& c = checks[i];
    report.max_excess = std::max(report.max_excess, c.pc_hat - c.p_obs);
    report.max_anisotropy =
        std::max(report.max_anisotropy, c.frame.d1 / c.frame.d2);
    if (!c.quadrature_converged) ++report.quadrature_failures;
    bool ok = c.pc_hat <= c.p_obs + kOrderingSlack;
    switch (kinds[i]) {
      case BoundaryCase::kInside:
        ++report.inside;
        break;
      case BoundaryCase::kOutside:
        ++report.outside;
        break;
      case BoundaryCase::kBoundary:
        ++report.boundary;
        ++report.boundary_checks;
        ok = ok && std::abs(c.p_obs - 0.5) <= 1e-15 && c.pc_hat < 0.5;
        break;
    }
    if (!ok) {
      ++report.violations;
      report.offending.push_back(c);
    }
  }
  if (report.violations > 0) throw TheoremViolation(std::move(report));
  return report;
}

double ks_uniform_distance(std::vector<double> values) {
  if (values.empty()) throw InvalidInput("KS distance of an empty sample");
  std::sort(values.begin(), values.end());
  const auto n = static_cast<double>(values.size());
  double d = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double u = std::clamp(values[i], 0.0, 1.0);
    d = std::max(d, (static_cast<double>(i) + 1.0) / n - u);
    d = std::max(d, u - static_cast<double>(i) / n);
  }
  return d;
}

CalibrationResult calibration_study(double d1, double d2, double psi0,
                                    int lambda_grid, std::uint64_t replicates,
                                    std::uint64_t seed) {
  if (replicates < kMinReplicates) {
    throw InvalidInput("calibration study needs at least 1000 replicates");
  }
  if (lambda_grid < 1) throw InvalidInput("lambda grid must be >= 1");
  if (!(psi0 > 0.0)) throw InvalidInput("psi0 must be positive");
  EncounterFrame{0.0, 0.0, d1, d2, psi0}.validate();

  const CounterRng rng(seed, 2);
  std::vector<double> p(replicates);
  for (std::uint64_t j = 0; j < replicates; ++j) {
    const double lambda = kTwoPi * static_cast<double>(j % lambda_grid) /
                          static_cast<double>(lambda_grid);
    const auto [z1, z2] = rng.normal_pair(j);
    const EncounterFrame f{psi0 * std::cos(lambda) + d1 * z1,
                           psi0 * std::sin(lambda) + d2 * z2, d1, d2, psi0};
    p[j] = significance_probability(f, psi0);
  }
  CalibrationResult result;
  result.replicates = replicates;
  result.ks_statistic = ks_uniform_distance(p);
  result.critical_value_1pct = 1.63 / std::sqrt(static_cast<double>(replicates));
  std::sort(p.begin(), p.end());
  for (double q : {0.01, 0.05, 0.1, 0.25, 0.5, 0.75, 0.9, 0.95, 0.99}) {
    result.quantiles.emplace_back(q, NearestRank(p, q));
  }
  return result;
}

CoverageResult coverage_study(double d1, double d2, double psi_true,
                              double level, std::uint64_t replicates,
                              std::uint64_t seed) {
  if (replicates < kMinReplicates) {
    throw InvalidInput("coverage study needs at least 1000 replicates");
  }
  if (!(psi_true > 0.0)) throw InvalidInput("psi_true must be positive");
  EncounterFrame{0.0, 0.0, d1, d2, psi_true}.validate();

  const CounterRng noise(seed, 3);
  const CounterRng orientation(seed, 4);
  CoverageResult result;
  result.level = level;
  result.replicates = replicates;
  for (std::uint64_t j = 0; j < replicates; ++j) {
    const double lambda = kTwoPi * orientation.uniform(j);
    const auto [z1, z2] = noise.normal_pair(j);
    const EncounterFrame f{psi_true * std::cos(lambda) + d1 * z1,
                           psi_true * std::sin(lambda) + d2 * z2, d1, d2,
                           psi_true};
    const ConfidenceInterval ci = confidence_interval(f, level);
    if (ci.lower_truncated) ++result.truncated;
    if (ci.lower <= psi_true && psi_true <= ci.upper) ++result.covered;
  }
  result.coverage =
      static_cast<double>(result.covered) / static_cast<double>(replicates);
  return result;
}

}  // namespace conjunction
