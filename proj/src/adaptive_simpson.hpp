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

#ifndef CONJUNCTION_SRC_ADAPTIVE_SIMPSON_HPP_
#define CONJUNCTION_SRC_ADAPTIVE_SIMPSON_HPP_

#include <algorithm>
#include <cmath>
#include <queue>
#include <span>
#include <vector>

namespace conjunction::detail {

struct SimpsonResult {
  double value = 0.0;
  double error = 0.0;
  bool converged = true;
};

// Globally adaptive Simpson quadrature over a partition given by sorted
// breakpoints. Each panel carries a 5-point Simpson pair; its Richardson
// corrected value is S2 + (S2 - S1)/15 and its error estimate |S2 - S1|/15.
// The panel with the largest error is bisected until the summed error falls
// below rel_tol * |total| (or abs_tol). Panels deeper than max_depth are
// frozen; if the error target is still missed, converged is false.
template <typename F>
SimpsonResult IntegrateAdaptiveSimpson(F&& f, std::span<const double> breaks,
                                       double rel_tol, double abs_tol,
                                       int max_depth,
                                       int max_evaluations = 200000) {
  struct Panel {
    double a, b;
    double fa, fq1, fm, fq3, fb;
    double value, error;
    int depth;
    bool operator<(const Panel& o) const { return error < o.error; }
  };
  int evaluations = 0;
  auto make_panel = [&](double a, double b, double fa, double fm, double fb,
                        int depth) {
    Panel p{a, b, fa, 0.0, fm, 0.0, fb, 0.0, 0.0, depth};
    const double h = b - a;
    p.fq1 = f(a + 0.25 * h);
    p.fq3 = f(a + 0.75 * h);
    evaluations += 2;
    const double s1 = h / 6.0 * (fa + 4.0 * fm + fb);
    const double s2 = h / 12.0 * (fa + 4.0 * p.fq1 + 2.0 * fm + 4.0 * p.fq3 + fb);
    p.value = s2 + (s2 - s1) / 15.0;
    p.error = std::abs(s2 - s1) / 15.0;
    return p;
  };

  std::priority_queue<Panel> active;
  std::vector<Panel> frozen;
  double total = 0.0;
  double total_error = 0.0;
  if (breaks.size() < 2) return {};
  double f_left = f(breaks[0]);
  ++evaluations;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double a = breaks[i], b = breaks[i + 1];
    if (!(b > a)) continue;
    const double fm = f(0.5 * (a + b));
    const double fb = f(b);
    evaluations += 2;
    Panel p = make_panel(a, b, f_left, fm, fb, 0);
    f_left = fb;
    total += p.value;
    total_error += p.error;
    active.push(p);
  }

  auto target = [&] { return std::max(rel_tol * std::abs(total), abs_tol); };
  while (total_error > target() && !active.empty() &&
         evaluations < max_evaluations) {
    Panel p = active.top();
    active.pop();
    if (p.depth >= max_depth) {
      frozen.push_back(p);
      continue;
    }
    const double m = 0.5 * (p.a + p.b);
    Panel left = make_panel(p.a, m, p.fa, p.fq1, p.fm, p.depth + 1);
    Panel right = make_panel(m, p.b, p.fm, p.fq3, p.fb, p.depth + 1);
    total += left.value + right.value - p.value;
    total_error += left.error + right.error - p.error;
    active.push(left);
    active.push(right);
  }

  // Re-sum to shed the drift of the running totals.
  SimpsonResult result;
  double sum = 0.0, err = 0.0;
  for (const Panel& p : frozen) {
    sum += p.value;
    err += p.error;
  }
  while (!active.empty()) {
    sum += active.top().value;
    err += active.top().error;
    active.pop();
  }
  result.value = sum;
  result.error = err;
  result.converged = err <= std::max(rel_tol * std::abs(sum), abs_tol) * 1.0001;
  return result;
}

}  // namespace conjunction::detail

#endif  // CONJUNCTION_SRC_ADAPTIVE_SIMPSON_HPP_
