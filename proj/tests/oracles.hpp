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


// Reference computations used only by the tests. Each one reaches its answer
// by a route that shares no code with the library.

#ifndef CONJUNCTION_TESTS_ORACLES_HPP_
#define CONJUNCTION_TESTS_ORACLES_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace oracle {

inline double Phi(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

// Phi(hi) - Phi(lo) without cancellation in either tail.
inline double PhiDiff(double lo, double hi) {
  const double s = std::numbers::sqrt2;
  if (lo > 0.0) return 0.5 * (std::erfc(lo / s) - std::erfc(hi / s));
  if (hi < 0.0) return 0.5 * (std::erfc(-hi / s) - std::erfc(-lo / s));
  return 1.0 - 0.5 * std::erfc(hi / s) - 0.5 * std::erfc(-lo / s);
}

// Disk probability as a Cartesian integral over the first coordinate of the
// density times the conditional chord probability of the second. The chord
// coordinate is t = radius sin(theta) to remove the endpoint square roots.
inline double DiskProbability(double c1, double c2, double d1, double d2,
                              double radius) {
  const double R = radius;
  const double half_pi = 0.5 * std::numbers::pi;
  auto g = [&](double theta) {
    const double t = R * std::sin(theta), h = R * std::cos(theta);
    const double z = (t - c1) / d1;
    return h * std::exp(-0.5 * z * z) / (d1 * std::sqrt(2.0 * std::numbers::pi)) *
           PhiDiff((-h - c2) / d2, (h - c2) / d2);
  };
  std::vector<double> b = {-half_pi, half_pi};
  for (int k = -160; k <= 160; ++k) {
    const double t = c1 + k * 0.1 * d1;
    if (t > -R && t < R) b.push_back(std::asin(t / R));
  }
  for (int k = -160; k <= 160; ++k) {
    const double y = std::abs(c2) + k * 0.1 * d2;
    if (y >= 0.0 && y < R) {
      const double theta = std::acos(y / R);
      b.push_back(theta);
      b.push_back(-theta);
    }
  }
  for (int k = -16; k <= 16; ++k) b.push_back(k * half_pi / 16.0);
  std::sort(b.begin(), b.end());
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < b.size(); ++i) {
    if (!(b[i + 1] > b[i])) continue;
    sum += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        g, b[i], b[i + 1], 4, 1e-14);
  }
  return sum;
}

struct CircleFit {
  double lambda = 0.0;
  double delta = 0.0;
};

// Lagrange form of the circle-constrained fit: xi_i = x_i / (1 + mu d_i^2)
// with the unique mu > -1/d1^2 solving sum x_i^2 / (1 + mu d_i^2)^2 = psi^2.
// Needs x1 != 0 and psi > 0.
inline CircleFit SecularFit(double x1, double x2, double d1, double d2,
                            double psi) {
  auto g = [&](double mu) {
    const double f1 = 1.0 + mu * d1 * d1, f2 = 1.0 + mu * d2 * d2;
    return x1 * x1 / (f1 * f1) + x2 * x2 / (f2 * f2) - psi * psi;
  };
  double lo = -1.0 / (d1 * d1), hi = 1.0;
  while (g(hi) > 0.0) hi *= 2.0;
  for (int i = 0; i < 400 && hi - lo > 0.0; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (g(mid) > 0.0 ? lo : hi) = mid;
  }
  const double mu = 0.5 * (lo + hi);
  const double f1 = 1.0 + mu * d1 * d1, f2 = 1.0 + mu * d2 * d2;
  const double xi1 = x1 / f1, xi2 = x2 / f2;
  CircleFit fit;
  fit.lambda = std::atan2(xi2, xi1);
  if (fit.lambda < 0.0) fit.lambda += 2.0 * std::numbers::pi;
  const double e1 = x1 * mu * d1 / f1, e2 = x2 * mu * d2 / f2;
  fit.delta = e1 * e1 + e2 * e2;
  return fit;
}

// Dense angular grid followed by Newton on d(delta)/d(lambda).
inline CircleFit GridNewtonFit(double x1, double x2, double d1, double d2,
                               double psi, int grid = 3600) {
  const double a1 = 1.0 / (d1 * d1), a2 = 1.0 / (d2 * d2);
  auto delta = [&](double l) {
    const double u = psi * std::cos(l) - x1, v = psi * std::sin(l) - x2;
    return a1 * u * u + a2 * v * v;
  };
  double best = 0.0, best_value = delta(0.0);
  for (int i = 1; i < grid; ++i) {
    const double l = 2.0 * std::numbers::pi * i / grid;
    if (delta(l) < best_value) {
      best_value = delta(l);
      best = l;
    }
  }
  double l = best;
  for (int it = 0; it < 100; ++it) {
    const double c = std::cos(l), s = std::sin(l);
    const double g = 2.0 * psi * (-a1 * (psi * c - x1) * s + a2 * (psi * s - x2) * c);
    const double h = 2.0 * psi * (a1 * (psi * s * s - (psi * c - x1) * c) +
                                  a2 * (psi * c * c - (psi * s - x2) * s));
    const double step = g / h;
    l -= step;
    if (std::abs(step) < 1e-15) break;
  }
  l = std::fmod(l, 2.0 * std::numbers::pi);
  if (l < 0.0) l += 2.0 * std::numbers::pi;
  return {l, delta(l)};
}

// Eigenvalues of a symmetric 2x2 matrix from its characteristic polynomial,
// larger first.
inline std::pair<double, double> Eigen2x2(double a, double b, double d) {
  const double mean = 0.5 * (a + d);
  const double rad = std::hypot(0.5 * (a - d), b);
  const double big = mean + rad;
  // Product of roots is the determinant; avoids cancellation in the smaller.
  const double small = big > 0.0 ? (a * d - b * b) / big : mean - rad;
  return {big, small};
}

// Nearest-rank quantile by sorting a copy.
inline double SortQuantile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const auto n = static_cast<double>(v.size());
  std::size_t rank = static_cast<std::size_t>(std::ceil(q * n));
  rank = std::clamp<std::size_t>(rank, 1, v.size());
  return v[rank - 1];
}

}  // namespace oracle

#endif  // CONJUNCTION_TESTS_ORACLES_HPP_
