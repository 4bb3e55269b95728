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


#ifndef CONJUNCTION_SRC_ADAPTIVE_GAUSS_KRONROD_HPP_
#define CONJUNCTION_SRC_ADAPTIVE_GAUSS_KRONROD_HPP_

#include <cmath>
#include <queue>
#include <span>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace conjunction::detail {

struct KronrodResult {
  double value = 0.0;
  double error = 0.0;
  bool converged = true;
};

// Globally adaptive 7-15 Gauss-Kronrod quadrature over a partition given by
// sorted breakpoints. The panel with the largest error estimate is bisected
// until the summed error drops below max(rel_tol * |total|, abs_tol) or
// the panel budget runs out.
template <typename F>
KronrodResult IntegrateAdaptiveKronrod(F&& f, std::span<const double> breaks,
                                       double rel_tol, double abs_tol,
                                       int max_depth,
                                       int max_panels = 4000) {
  using Rule = boost::math::quadrature::gauss_kronrod<double, 15>;
  struct Panel {
    double a, b, value, error;
    int depth;
    bool operator<(const Panel& o) const { return error < o.error; }
  };
  auto make_panel = [&](double a, double b, int depth) {
    Panel p{a, b, 0.0, 0.0, depth};
    p.value = Rule::integrate(f, a, b, 0, 0.0, &p.error);
    // The rule reports its error on the reference interval [-1, 1].
    p.error *= 0.5 * (b - a);
    return p;
  };

  std::priority_queue<Panel> active;
  double total = 0.0, total_error = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (!(breaks[i + 1] > breaks[i])) continue;
    Panel p = make_panel(breaks[i], breaks[i + 1], 0);
    total += p.value;
    total_error += p.error;
    active.push(p);
  }

  KronrodResult result;
  int panels = static_cast<int>(active.size());
  double frozen_value = 0.0, frozen_error = 0.0;
  while (total_error > std::max(rel_tol * std::abs(total), abs_tol) &&
         !active.empty() && panels < max_panels) {
    Panel p = active.top();
    active.pop();
    if (p.depth >= max_depth) {
      frozen_value += p.value;
      frozen_error += p.error;
      continue;
    }
    const double m = 0.5 * (p.a + p.b);
    Panel left = make_panel(p.a, m, p.depth + 1);
    Panel right = make_panel(m, p.b, p.depth + 1);
    total += left.value + right.value - p.value;
    total_error += left.error + right.error - p.error;
    active.push(left);
    active.push(right);
    ++panels;
  }

  result.value = frozen_value;
  result.error = frozen_error;
  while (!active.empty()) {
    result.value += active.top().value;
    result.error += active.top().error;
    active.pop();
  }
  result.converged =
      result.error <= std::max(rel_tol * std::abs(result.value), abs_tol) * 1.0001;
  return result;
}

}  // namespace conjunction::detail

#endif  // CONJUNCTION_SRC_ADAPTIVE_GAUSS_KRONROD_HPP_
