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

#include "conjunction/experiments.hpp"

#include <cmath>
#include <limits>

#include "conjunction/error.hpp"
#include "conjunction/random.hpp"

namespace conjunction {

void TimelineSeries::validate() const {
  if (epochs.empty()) throw InvalidInput("timeline has no epochs");
  for (std::size_t i = 0; i < epochs.size(); ++i) {
    epochs[i].frame.validate();
    if (i > 0 && !(epochs[i].lead_time_h < epochs[i - 1].lead_time_h)) {
      throw InvalidInput("timeline lead times must strictly decrease");
    }
  }
}

std::pair<TimelineSeries, TimelineSeries> synthesize_hit_miss(
    const TimelineSeries& base, double kappa, std::uint64_t seed) {
  base.validate();
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) {
    throw InvalidInput("kappa must be finite and non-negative");
  }
  const EncounterFrame& last = base.epochs.back().frame;
  const CounterRng rng(seed, 20);
  TimelineSeries hit = base, miss = base;
  hit.label = TrajectoryLabel::kHit;
  miss.label = TrajectoryLabel::kMiss;
  for (std::size_t i = 0; i < base.epochs.size(); ++i) {
    double n1 = 0.0, n2 = 0.0;
    if (kappa > 0.0) {
      const auto [z1, z2] = rng.normal_pair(i);
      n1 = kappa * last.d1 * z1;
      n2 = kappa * last.d2 * z2;
    }
    miss.epochs[i].frame.x1 += n1;
    miss.epochs[i].frame.x2 += n2;
    hit.epochs[i].frame.x1 += n1 - last.x1;
    hit.epochs[i].frame.x2 += n2 - last.x2;
  }
  return {std::move(hit), std::move(miss)};
}

EncounterFrame scale_covariance(const EncounterFrame& frame, double c) {
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw InvalidInput("covariance scale factor must be positive");
  }
  EncounterFrame out = frame;
  const double s = std::sqrt(c);
  out.d1 *= s;
  out.d2 *= s;
  return out;
}

RiskAssessment assess(const EncounterFrame& frame, std::optional<double> psi0,
                      double level, const QuadratureConfig& cfg) {
  frame.validate();
  RiskAssessment a;
  a.psi0 = psi0.value_or(frame.hbr);
  a.pc_foster = pc_hat(frame, cfg);
  a.pc_chan = pc_chan(frame, frame.position(),
                      chan_order_for(frame, frame.position()));
  const TestResult t = test_hypothesis(frame, a.psi0);
  a.p_obs = t.p_obs;
  a.r = t.r;
  a.w = t.w;
  a.psi_hat = t.psi_hat;
  a.ci = confidence_interval(frame, level);
  return a;
}

ConfusionTable confusion_matrix(std::span<const RiskAssessment> assessments,
                                double alpha, double pc_threshold) {
  if (assessments.empty()) {
    throw InvalidInput("confusion matrix needs at least one assessment");
  }
  ConfusionTable t;
  t.alpha = alpha;
  t.pc_threshold = pc_threshold;
  for (const RiskAssessment& a : assessments) {
    const bool pobs_ge = a.p_obs >= alpha;
    const bool pc_ge = a.pc_foster >= pc_threshold;
    if (pobs_ge) {
      ++(pc_ge ? t.pobs_ge_pc_ge : t.pobs_ge_pc_lt);
    } else {
      ++(pc_ge ? t.pobs_lt_pc_ge : t.pobs_lt_pc_lt);
    }
  }
  return t;
}

std::vector<TimelineRow> timeline_report(const TimelineSeries& series,
                                         double hbr,
                                         const QuadratureConfig& cfg) {
  series.validate();
  std::vector<TimelineRow> rows;
  rows.reserve(series.epochs.size());
  for (const TimelineEpoch& e : series.epochs) {
    EncounterFrame f = e.frame;
    f.hbr = hbr;
    TimelineRow row;
    row.lead_time_h = e.lead_time_h;
    row.psi_hat = mle(f);
    row.pc = pc_hat(f, cfg);
    row.p_obs = significance_probability(f, hbr);
    // log10(0) is -inf by IEEE rules; reports print it as "-inf".
    row.log10_pc = std::log10(row.pc);
    row.log10_p_obs = std::log10(row.p_obs);
    rows.push_back(row);
  }
  return rows;
}

TimelineSeries reference_timeline() {
  TimelineSeries series;
  series.label = TrajectoryLabel::kMiss;
  std::vector<double> leads;
  for (int h = 168; h >= 12; h -= 12) leads.push_back(h);
  leads.push_back(6.0);
  leads.push_back(2.0);
  for (double lead : leads) {
    const double frac = lead / 168.0;
    EncounterFrame f;
    f.d1 = 0.05 * std::pow(100.0, frac);
    f.d2 = 0.01 * std::pow(100.0, frac);
    f.x1 = 0.8 + 3.0 * frac;
    f.x2 = 0.6 - 2.0 * frac;
    f.hbr = 0.02;
    series.epochs.push_back({lead, f});
  }
  return series;
}

}  // namespace conjunction
