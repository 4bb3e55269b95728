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

#include "conjunction/report.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace conjunction {
namespace {

std::string NonFinite(double v) {
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

}  // namespace

std::string format_number(double v) {
  if (!std::isfinite(v)) return NonFinite(v);
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_probability(double p) {
  if (!std::isfinite(p)) return NonFinite(p);
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", p);
  return buf;
}

nlohmann::json to_json(const EncounterFrame& f) {
  return {{"x1", f.x1}, {"x2", f.x2}, {"d1", f.d1}, {"d2", f.d2},
          {"hbr", f.hbr}};
}

nlohmann::json to_json(const ConfidenceInterval& ci) {
  return {{"lower", ci.lower},
          {"upper", ci.upper},
          {"level", ci.level},
          {"lower_truncated", ci.lower_truncated}};
}

nlohmann::json to_json(const RiskAssessment& a) {
  nlohmann::json j = {{"pc_foster", a.pc_foster},
                      {"pc_chan", a.pc_chan},
                      {"p_obs", a.p_obs},
                      {"r", a.r},
                      {"psi_hat", a.psi_hat},
                      {"psi0", a.psi0},
                      {"ci", to_json(a.ci)}};
  j["w"] = a.w ? nlohmann::json(*a.w) : nlohmann::json(nullptr);
  j["wald_undefined"] = !a.w.has_value();
  return j;
}

nlohmann::json to_json(const ConfusionTable& t) {
  return {{"alpha", t.alpha},
          {"pc_threshold", t.pc_threshold},
          {"p_obs_ge_alpha", {{"pc_lt_threshold", t.pobs_ge_pc_lt},
                              {"pc_ge_threshold", t.pobs_ge_pc_ge}}},
          {"p_obs_lt_alpha", {{"pc_lt_threshold", t.pobs_lt_pc_lt},
                              {"pc_ge_threshold", t.pobs_lt_pc_ge}}},
          {"total", t.total()}};
}

nlohmann::json to_json(const TheoremReport& r) {
  nlohmann::json offending = nlohmann::json::array();
  for (const FrameCheck& c : r.offending) {
    offending.push_back({{"frame", to_json(c.frame)},
                         {"pc_hat", c.pc_hat},
                         {"p_obs", c.p_obs},
                         {"quadrature_converged", c.quadrature_converged}});
  }
  return {{"configs", r.configs},
          {"violations", r.violations},
          {"boundary_checks", r.boundary_checks},
          {"cases", {{"inside", r.inside},
                     {"boundary", r.boundary},
                     {"outside", r.outside}}},
          {"quadrature_failures", r.quadrature_failures},
          {"max_excess", r.max_excess},
          {"max_anisotropy", r.max_anisotropy},
          {"offending", offending}};
}

nlohmann::json to_json(const CalibrationResult& c) {
  nlohmann::json q = nlohmann::json::array();
  for (const auto& [level, value] : c.quantiles) {
    q.push_back({{"nominal", level}, {"empirical", value}});
  }
  return {{"ks_statistic", c.ks_statistic},
          {"critical_value_1pct", c.critical_value_1pct},
          {"below_critical", c.ks_statistic < c.critical_value_1pct},
          {"replicates", c.replicates},
          {"quantiles", q}};
}

nlohmann::json to_json(const CoverageResult& c) {
  return {{"coverage", c.coverage},
          {"level", c.level},
          {"replicates", c.replicates},
          {"covered", c.covered},
          {"lower_truncated", c.truncated}};
}

nlohmann::json to_json(const PcMax& m) {
  return {{"scale", m.scale}, {"pc_max", m.pc}, {"boundary", m.boundary}};
}

nlohmann::json to_json(const McEstimate& m) {
  return {{"estimate", m.estimate},
          {"std_error", m.std_error},
          {"samples", m.samples},
          {"seed", m.seed}};
}

void write_timeline_csv(std::ostream& out, std::span<const TimelineRow> rows) {
  out << "lead_time_h,psi_hat,log10_pc,log10_p_obs,pc,p_obs\n";
  for (const TimelineRow& r : rows) {
    out << format_number(r.lead_time_h) << ',' << format_number(r.psi_hat)
        << ',' << format_number(r.log10_pc) << ','
        << format_number(r.log10_p_obs) << ',' << format_probability(r.pc)
        << ',' << format_probability(r.p_obs) << '\n';
  }
}

void write_dilution_csv(std::ostream& out,
                        std::span<const DilutionPoint> curve) {
  out << "scale,log10_scale,pc\n";
  for (const DilutionPoint& p : curve) {
    out << format_number(p.scale) << ',' << format_number(std::log10(p.scale))
        << ',' << format_probability(p.pc) << '\n';
  }
}

}  // namespace conjunction
