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

#include "conjunction/inference.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <vector>

#include <boost/math/tools/toms748_solve.hpp>

#include "conjunction/error.hpp"
#include "conjunction/normal.hpp"

namespace conjunction {
namespace {

constexpr int kScanPoints = 720;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kAngleTolerance = 1e-12;

struct ScanTable {
  std::array<double, kScanPoints> cos;
  std::array<double, kScanPoints> sin;
  ScanTable() {
    for (int i = 0; i < kScanPoints; ++i) {
      const double a = kTwoPi * i / kScanPoints;
      cos[i] = std::cos(a);
      sin[i] = std::sin(a);
    }
  }
};

const ScanTable& Scan() {
  static const ScanTable table;
  return table;
}

// d(delta)/d(lambda) scaled by d1^2 d2^2 / (2 psi), and its derivative.
// The scaling keeps both finite for very small standard deviations.
struct Stationarity {
  double x1, x2, v1, v2, psi;

  double value(double c, double s) const {
    return v2 * x1 * s - v1 * x2 * c + (v1 - v2) * psi * s * c;
  }
  double value(double lambda) const {
    return value(std::cos(lambda), std::sin(lambda));
  }
  double slope(double lambda) const {
    const double c = std::cos(lambda), s = std::sin(lambda);
    return v2 * x1 * c + v1 * x2 * s + (v1 - v2) * psi * (c * c - s * s);
  }
};

double DeltaAt(const EncounterFrame& f, double psi, double c, double s) {
  const double e1 = (psi * c - f.x1) / f.d1;
  const double e2 = (psi * s - f.x2) / f.d2;
  return e1 * e1 + e2 * e2;
}

double DeltaAt(const EncounterFrame& f, double psi, double lambda) {
  return DeltaAt(f, psi, std::cos(lambda), std::sin(lambda));
}

// Safeguarded Newton on a bracket [lo, hi] with a sign change of h.
double PolishRoot(const Stationarity& h, double lo, double hi) {
  double f_lo = h.value(lo);
  double x = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    const double fx = h.value(x);
    if (fx == 0.0) return x;
    if ((fx < 0.0) == (f_lo < 0.0)) {
      lo = x;
      f_lo = fx;
    } else {
      hi = x;
    }
    const double fp = h.slope(x);
    double next = (fp != 0.0) ? x - fx / fp : lo - 1.0;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double step = std::abs(next - x);
    x = next;
    if (step <= kAngleTolerance * 1e-2 || hi - lo <= kAngleTolerance * 1e-2) {
      break;
    }
  }
  return x;
}

// Golden-section minimization of delta on [lo, hi], then Newton polish on
// the stationarity condition.
double LocalMinimum(const EncounterFrame& f, double psi, const Stationarity& h,
                    double lo, double hi) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = DeltaAt(f, psi, c), fd = DeltaAt(f, psi, d);
  while (b - a > 1e-9) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = DeltaAt(f, psi, c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = DeltaAt(f, psi, d);
    }
  }
  double x = 0.5 * (a + b);
  for (int iter = 0; iter < 8; ++iter) {
    const double fp = h.slope(x);
    if (!(fp > 0.0)) break;
    const double next = x - h.value(x) / fp;
    if (!(std::abs(next - x) < 1e-6)) break;
    x = next;
  }
  return x;
}

double WrapAngle(double a) {
  a = std::fmod(a, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  if (a >= kTwoPi) a = 0.0;
  return a;
}

void RequirePsi(double psi) {
  if (!std::isfinite(psi) || psi < 0.0) {
    throw InvalidInput("miss distance must be finite and non-negative");
  }
}

}  // namespace

double mahalanobis_sq(const EncounterFrame& frame, const Eigen::Vector2d& t) {
  const double e1 = (t.x() - frame.x1) / frame.d1;
  const double e2 = (t.y() - frame.x2) / frame.d2;
  return e1 * e1 + e2 * e2;
}

ConstrainedFit constrained_mle(const EncounterFrame& frame, double psi) {
  frame.validate();
  RequirePsi(psi);
  ConstrainedFit fit;
  if (psi == 0.0) {
    fit.delta = mahalanobis_sq(frame, Eigen::Vector2d::Zero());
    return fit;
  }
  const double norm = frame.observed_distance();
  if (norm > 0.0 && psi == norm) {
    fit.xi_hat = frame.position();
    fit.lambda_hat = WrapAngle(std::atan2(frame.x2, frame.x1));
    fit.delta = 0.0;
    return fit;
  }

  const Stationarity h{frame.x1, frame.x2, frame.d1 * frame.d1,
                       frame.d2 * frame.d2, psi};
  const ScanTable& scan = Scan();
  std::array<double, kScanPoints> hv;
  int best_grid = 0;
  double best_grid_delta = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kScanPoints; ++i) {
    hv[i] = h.value(scan.cos[i], scan.sin[i]);
    const double d = DeltaAt(frame, psi, scan.cos[i], scan.sin[i]);
    if (d < best_grid_delta) {
      best_grid_delta = d;
      best_grid = i;
    }
  }

  const double step = kTwoPi / kScanPoints;
  std::vector<double> candidates;
  for (int i = 0; i < kScanPoints; ++i) {
    const double lo = step * i;
    const double hi = step * (i + 1);
    const double h_lo = hv[i];
    const double h_hi = hv[(i + 1) % kScanPoints];
    if (h_lo == 0.0) {
      candidates.push_back(lo);
    } else if ((h_lo < 0.0) != (h_hi < 0.0) && h_hi != 0.0) {
      // Only sign changes from - to + are minima of delta, but maxima are
      // cheap to keep and guard against misclassification at tiny slopes.
      candidates.push_back(PolishRoot(h, lo, hi));
    }
  }
  // Two stationary points sharing one scan cell produce no sign change.
  candidates.push_back(LocalMinimum(frame, psi, h, step * (best_grid - 1),
                                    step * (best_grid + 1)));

  double best_lambda = step * best_grid;
  double best_delta = best_grid_delta;
  for (double lambda : candidates) {
    const double d = DeltaAt(frame, psi, lambda);
    if (d < best_delta) {
      best_delta = d;
      best_lambda = lambda;
    }
  }
  fit.lambda_hat = WrapAngle(best_lambda);
  fit.xi_hat = {psi * std::cos(fit.lambda_hat), psi * std::sin(fit.lambda_hat)};
  fit.delta = DeltaAt(frame, psi, fit.lambda_hat);
  return fit;
}

double profile_loglik(const EncounterFrame& frame, double psi) {
  return -0.5 * constrained_mle(frame, psi).delta;
}

double mle(const EncounterFrame& frame) {
  frame.validate();
  return frame.observed_distance();
}

double likelihood_root(const EncounterFrame& frame, double psi0) {
  const double psi_hat = mle(frame);
  RequirePsi(psi0);
  if (psi_hat == psi0) return 0.0;
  const double root = std::sqrt(constrained_mle(frame, psi0).delta);
  return psi_hat > psi0 ? root : -root;
}

double wald_variance(const EncounterFrame& frame) {
  const double norm = mle(frame);
  if (!(norm > 0.0)) {
    throw UndefinedVariance(
        "Wald variance is undefined when the observed position is the origin");
  }
  const double u1 = frame.x1 / norm, u2 = frame.x2 / norm;
  return u1 * u1 * frame.d1 * frame.d1 + u2 * u2 * frame.d2 * frame.d2;
}

double wald_statistic(const EncounterFrame& frame, double psi0) {
  RequirePsi(psi0);
  const double variance = wald_variance(frame);
  const double diff = frame.observed_distance() - psi0;
  return diff * diff / variance;
}

double significance_probability(const EncounterFrame& frame, double psi0) {
  return normal_cdf(-likelihood_root(frame, psi0));
}

TestResult test_hypothesis(const EncounterFrame& frame, double psi0) {
  TestResult result;
  result.psi0 = psi0;
  result.psi_hat = mle(frame);
  result.r = likelihood_root(frame, psi0);
  result.p_obs = normal_cdf(-result.r);
  if (result.psi_hat > 0.0) result.w = wald_statistic(frame, psi0);
  return result;
}

ConfidenceInterval confidence_interval(const EncounterFrame& frame,
                                       double level) {
  if (!(level > 0.0 && level < 1.0)) {
    throw InvalidInput("confidence level must lie in (0, 1)");
  }
  const double psi_hat = mle(frame);
  const double z = normal_quantile(0.5 * (1.0 + level));
  auto shifted = [&](double target) {
    return [&frame, target](double psi) {
      return likelihood_root(frame, psi) - target;
    };
  };
  const double abs_tol = std::min(1e-8, 1e-9 * frame.d2);
  auto converged = [abs_tol](double a, double b) {
    return std::abs(b - a) <=
           std::max(abs_tol, 8.0 * std::numeric_limits<double>::epsilon() *
                                 std::max(std::abs(a), std::abs(b)));
  };

  ConfidenceInterval ci;
  ci.level = level;
  const double r_origin = likelihood_root(frame, 0.0);
  if (r_origin <= z) {
    ci.lower = 0.0;
    ci.lower_truncated = true;
  } else {
    std::uintmax_t iters = 300;
    const auto f = shifted(z);
    const auto [a, b] = boost::math::tools::toms748_solve(
        f, 0.0, psi_hat, r_origin - z, -z, converged, iters);
    ci.lower = 0.5 * (a + b);
  }

  double hi_step = std::max(frame.d1, 1e-3 * psi_hat);
  double hi = psi_hat + hi_step;
  double r_hi = likelihood_root(frame, hi);
  while (r_hi > -z) {
    hi_step *= 2.0;
    hi = psi_hat + hi_step;
    r_hi = likelihood_root(frame, hi);
  }
  std::uintmax_t iters = 300;
  const auto f = shifted(-z);
  const auto [a, b] = boost::math::tools::toms748_solve(
      f, psi_hat, hi, z, r_hi + z, converged, iters);
  ci.upper = 0.5 * (a + b);
  ci.lower = std::min(ci.lower, psi_hat);
  ci.upper = std::max(ci.upper, psi_hat);
  return ci;
}

}  // namespace conjunction
