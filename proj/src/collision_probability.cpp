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

#include "conjunction/collision_probability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "adaptive_gauss_kronrod.hpp"
#include "adaptive_simpson.hpp"
#include "conjunction/error.hpp"
#include "conjunction/inference.hpp"

namespace conjunction {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kRadialDepth = 20;

// Rays whose scaled exponent exceeds this contribute below e^-230 of the peak.
constexpr double kNegligibleExponent = 460.0;

// Along a ray, the density beyond this rise of the exponent is dropped.
constexpr double kTruncationRise = 120.0;

// Integrand of the disk integral on the unit disk, with the density scaled
// by exp(delta_min / 2) so that its peak is O(1) however far away the
// center sits.
class PolarIntegrand {
 public:
  // lambda_hat is the angle of the density peak on the unit circle when the
  // center lies outside the disk; the density is then scaled by
  // exp(delta(lambda_hat) / 2).
  PolarIntegrand(double c1, double c2, double d1, double d2,
                 std::optional<double> lambda_hat, const QuadratureConfig& cfg)
      : c1_(c1), c2_(c2), a1_(1.0 / (d1 * d1)), a2_(1.0 / (d2 * d2)),
        lambda_hat_(lambda_hat), cfg_(cfg) {
    if (lambda_hat_) {
      delta_min_ = CircleDelta(*lambda_hat_);
    }
    origin_excess_ = a1_ * c1_ * c1_ + a2_ * c2_ * c2_ - delta_min_;
  }

  double delta_min() const { return delta_min_; }

  // Integral over r in [0, 1] of r * exp(-(q(r) - delta_min) / 2) along the
  // ray at angle theta, where q is the squared Mahalanobis distance. The
  // exponent is written relative to its smallest value on the segment.
  double Ray(double theta) {
    const double ct = std::cos(theta), st = std::sin(theta);
    const double a = ct * ct * a1_ + st * st * a2_;
    const double m = (c1_ * ct * a1_ + c2_ * st * a2_) / a;
    double peak, peak_exponent;
    if (m >= 1.0) {
      peak = 1.0;
      peak_exponent = BoundaryExcess(theta, ct, st);
    } else if (m <= 0.0) {
      peak = 0.0;
      peak_exponent = origin_excess_;
    } else {
      peak = m;
      const double cross = c1_ * st - c2_ * ct;
      peak_exponent = a1_ * a2_ * cross * cross / a - delta_min_;
    }
    if (peak_exponent > kNegligibleExponent) return 0.0;

    double scale = 1.0 / std::sqrt(a);
    if (m != peak) scale = std::min(scale, 1.0 / (a * std::abs(m - peak)));
    // The ray is integrated over the offset t = r - peak, so that breakpoints
    // near the peak keep full relative precision.
    // q(peak + t) - q(peak) = a t (t + 2 (peak - m)).
    const double gap = 2.0 * (peak - m);
    auto rise = [a, gap](double t) { return a * t * (t + gap); };
    // Breakpoints grade geometrically away from the peak; each side stops
    // once the density has fallen below exp(-kTruncationRise / 2) of the peak.
    breaks_.clear();
    breaks_.push_back(0.0);
    for (int side : {-1, 1}) {
      const double end = side < 0 ? -peak : 1.0 - peak;
      if (end == 0.0) continue;
      bool truncated = false;
      for (int k = -2; k <= 1100; ++k) {
        const double t = side * std::ldexp(scale, k);
        if (side * (t - end) >= 0.0) break;
        breaks_.push_back(t);
        if (rise(t) > kTruncationRise) {
          truncated = true;
          break;
        }
      }
      if (!truncated) breaks_.push_back(end);
    }
    std::sort(breaks_.begin(), breaks_.end());

    auto radial = [&rise, peak, peak_exponent](double t) {
      return (peak + t) * std::exp(-0.5 * (rise(t) + peak_exponent));
    };
    const detail::KronrodResult res = detail::IntegrateAdaptiveKronrod(
        radial, breaks_, 0.1 * cfg_.relative_tolerance, 0.0, kRadialDepth);
    // Rays aim for a tenth of the tolerance; only missing the full tolerance
    // counts as failure.
    if (res.error > cfg_.relative_tolerance * std::abs(res.value)) {
      inner_converged_ = false;
    }
    return res.value;
  }

  bool inner_converged() const { return inner_converged_; }

 private:
  double CircleDelta(double theta) const {
    const double u1 = std::cos(theta) - c1_, u2 = std::sin(theta) - c2_;
    return a1_ * u1 * u1 + a2_ * u2 * u2;
  }

  // q(cos theta, sin theta) - delta_min, differenced against the peak angle
  // so that nearby rays do not lose the small excess to rounding.
  double BoundaryExcess(double theta, double ct, double st) const {
    if (!lambda_hat_) return CircleDelta(theta);
    const double lam = *lambda_hat_;
    const double half = std::sin(0.5 * (theta - lam));
    const double mid = 0.5 * (theta + lam);
    const double du1 = -2.0 * std::sin(mid) * half;
    const double du2 = 2.0 * std::cos(mid) * half;
    const double s1 = ct + std::cos(lam) - 2.0 * c1_;
    const double s2 = st + std::sin(lam) - 2.0 * c2_;
    return std::max(0.0, a1_ * du1 * s1 + a2_ * du2 * s2);
  }

  double c1_, c2_, a1_, a2_;
  std::optional<double> lambda_hat_;
  double delta_min_ = 0.0;
  double origin_excess_ = 0.0;
  const QuadratureConfig& cfg_;
  std::vector<double> breaks_;
  bool inner_converged_ = true;
};

double WrapAngle(double a) {
  a = std::fmod(a, kTwoPi);
  return a < 0.0 ? a + kTwoPi : a;
}

}  // namespace

void QuadratureConfig::validate() const {
  if (!(relative_tolerance > 0.0 && relative_tolerance <= 1e-2)) {
    throw InvalidInput("quadrature tolerance must lie in (0, 1e-2]");
  }
  if (max_refinements < 1) {
    throw InvalidInput("quadrature max_refinements must be at least 1");
  }
}

double pc_quadrature(const EncounterFrame& frame, const Eigen::Vector2d& center,
                     const QuadratureConfig& cfg) {
  frame.validate();
  cfg.validate();
  if (!center.allFinite()) throw InvalidInput("center must be finite");

  // Work on the unit disk; the probability is invariant under joint scaling.
  const double r = frame.hbr;
  const double c1 = center.x() / r, c2 = center.y() / r;
  const double d1 = frame.d1 / r, d2 = frame.d2 / r;
  const double dist = std::hypot(c1, c2);

  std::vector<double> keys;
  std::optional<double> lambda_hat;
  if (dist > 0.0) {
    const double toward = std::atan2(c2, c1);
    keys.push_back(toward);
    keys.push_back(toward + kPi);
  }
  if (dist > 1.0) {
    const ConstrainedFit fit =
        constrained_mle(EncounterFrame{c1, c2, d1, d2, 1.0}, 1.0);
    lambda_hat = fit.lambda_hat;
    keys.push_back(fit.lambda_hat);
  }

  // Geometric grading toward each key angle down to a fraction of the
  // narrowest angular feature of the density.
  const double width = 0.25 * std::min(d2, 1.0) / std::max(dist, 1.0);
  const int levels =
      std::clamp(static_cast<int>(std::ceil(std::log2(kPi / width))) + 2, 3, 52);
  std::vector<double> breaks;
  for (int i = 0; i <= 16; ++i) breaks.push_back(kTwoPi * i / 16.0);
  for (double key : keys) {
    breaks.push_back(WrapAngle(key));
    for (int k = 1; k <= levels; ++k) {
      const double off = std::ldexp(kPi, -k);
      breaks.push_back(WrapAngle(key + off));
      breaks.push_back(WrapAngle(key - off));
    }
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  PolarIntegrand integrand(c1, c2, d1, d2, lambda_hat, cfg);
  auto angular = [&integrand](double theta) { return integrand.Ray(theta); };
  const detail::SimpsonResult res = detail::IntegrateAdaptiveSimpson(
      angular, breaks, cfg.relative_tolerance, 0.0, cfg.max_refinements);

  const double norm = std::exp(-0.5 * integrand.delta_min()) / (kTwoPi * d1 * d2);
  const double estimate = std::clamp(norm * res.value, 0.0, 1.0);
  if (!res.converged || !integrand.inner_converged()) {
    throw QuadratureFailure("collision probability quadrature did not converge",
                            estimate, norm * res.error);
  }
  return estimate;
}

double pc_hat(const EncounterFrame& frame, const QuadratureConfig& cfg) {
  return pc_quadrature(frame, frame.position(), cfg);
}

int chan_order_for(const EncounterFrame& frame, const Eigen::Vector2d& center) {
  const double half_v = 0.5 * (std::pow(center.x() / frame.d1, 2) +
                               std::pow(center.y() / frame.d2, 2));
  const double needed = half_v + 12.0 * std::sqrt(half_v) + 30.0;
  if (!std::isfinite(needed) || needed > 1e8) return 100000000;
  return std::max(100, static_cast<int>(std::ceil(needed)));
}

double pc_chan(const EncounterFrame& frame, const Eigen::Vector2d& center,
               int max_order) {
  frame.validate();
  if (!center.allFinite()) throw InvalidInput("center must be finite");
  if (max_order < 1) throw InvalidInput("Chan series order must be >= 1");

  const double half_u = 0.5 * (frame.hbr / frame.d1) * (frame.hbr / frame.d2);
  const double half_v = 0.5 * (std::pow(center.x() / frame.d1, 2) +
                               std::pow(center.y() / frame.d2, 2));
  if (half_v == 0.0) return -std::expm1(-half_u);

  // Terms are log-concave in k, so past the peak the tail is geometric.
  const double log_half_v = std::log(half_v);
  double sum = 0.0;
  double prev_log_term = -std::numeric_limits<double>::infinity();
  for (int k = 0; k <= max_order; ++k) {
    const double log_term = -half_v + k * log_half_v - std::lgamma(k + 1.0) +
                            std::log(boost::math::gamma_p(k + 1.0, half_u));
    const double term = std::exp(log_term);
    sum += term;
    const bool falling = log_term < prev_log_term;
    if (falling && (sum > 0.0 ? term <= 1e-17 * sum : log_term < -800.0)) break;
    prev_log_term = log_term;
  }
  return std::clamp(sum, 0.0, 1.0);
}

std::vector<DilutionPoint> dilution_curve(const EncounterFrame& frame,
                                          std::span<const double> scales,
                                          const QuadratureConfig& cfg) {
  std::vector<DilutionPoint> curve;
  curve.reserve(scales.size());
  for (double c : scales) {
    if (!(c > 0.0) || !std::isfinite(c)) {
      throw InvalidInput("covariance scale factors must be positive");
    }
    EncounterFrame scaled = frame;
    scaled.d1 *= std::sqrt(c);
    scaled.d2 *= std::sqrt(c);
    curve.push_back({c, pc_hat(scaled, cfg)});
  }
  return curve;
}

PcMax pc_max(const EncounterFrame& frame, double log10_c_min,
             double log10_c_max, int grid, const QuadratureConfig& cfg) {
  if (grid < 3) throw InvalidInput("pc_max needs a grid of at least 3 points");
  if (!(log10_c_max > log10_c_min)) {
    throw InvalidInput("pc_max needs a non-empty scale range");
  }
  auto value_at = [&](double log10_c) {
    const double c = std::pow(10.0, log10_c);
    const double s[] = {c};
    return dilution_curve(frame, s, cfg).front().pc;
  };
  const double step = (log10_c_max - log10_c_min) / (grid - 1);
  int best = 0;
  double best_value = -1.0;
  for (int i = 0; i < grid; ++i) {
    const double v = value_at(log10_c_min + step * i);
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }
  PcMax result;
  if (best == 0 || best == grid - 1) {
    result.scale = std::pow(10.0, log10_c_min + step * best);
    result.pc = best_value;
    result.boundary = true;
    return result;
  }

  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = log10_c_min + step * (best - 1);
  double b = log10_c_min + step * (best + 1);
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = value_at(c), fd = value_at(d);
  while (b - a > 1e-7) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = value_at(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = value_at(d);
    }
  }
  const double x = 0.5 * (a + b);
  const double fx = value_at(x);
  if (fx >= best_value) {
    result.scale = std::pow(10.0, x);
    result.pc = fx;
  } else {
    result.scale = std::pow(10.0, log10_c_min + step * best);
    result.pc = best_value;
  }
  return result;
}

}  // namespace conjunction
