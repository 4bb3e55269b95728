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

#include "conjunction/pipeline.hpp"

#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "conjunction/error.hpp"
#include "conjunction/parallel.hpp"
#include "conjunction/report.hpp"

namespace conjunction {
namespace {

nlohmann::json SummaryJson(const CatalogSummary& s) {
  nlohmann::json q = nlohmann::json::array();
  for (const auto& [level, value] : s.quantiles) {
    q.push_back({{"quantile", level}, {"value", value}});
  }
  nlohmann::json t = nlohmann::json::array();
  for (const auto& [threshold, c] : s.threshold_counts) {
    t.push_back(
        {{"threshold", threshold}, {"count", c.count}, {"fraction", c.fraction}});
  }
  return {{"count", s.count}, {"mean", s.mean},   {"min", s.min},
          {"max", s.max},     {"quantiles", q},   {"exceeding", t}};
}

std::ofstream OpenOutput(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write " + path.string());
  return out;
}

std::string CsvField(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

}  // namespace

void BatchConfig::validate() const {
  if (hbr && !(*hbr > 0.0 && std::isfinite(*hbr))) {
    throw InvalidInput("hbr must be positive");
  }
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw InvalidInput("covariance scale must be positive");
  }
  for (double a : alphas) {
    if (!(a > 0.0 && a < 1.0)) throw InvalidInput("alpha must lie in (0, 1)");
  }
  if (!(pc_threshold > 0.0 && pc_threshold < 1.0)) {
    throw InvalidInput("pc threshold must lie in (0, 1)");
  }
  if (!(level > 0.0 && level < 1.0)) {
    throw InvalidInput("confidence level must lie in (0, 1)");
  }
  quadrature.validate();
}

BatchResult run_batch(const ParsedCatalog& catalog, const BatchConfig& cfg) {
  cfg.validate();
  if (catalog.messages.empty()) {
    throw EmptyCatalog("catalog contains no valid conjunction message");
  }
  BatchResult result;
  result.messages = catalog.messages.size();
  result.rejects = catalog.rejects;

  const std::vector<EventGroup> groups = group_events(catalog.messages);
  result.events.resize(groups.size());
  parallel_for(groups.size(), cfg.threads, [&](std::size_t i) {
    const EventGroup& g = groups[i];
    EventRecord& rec = result.events[i];
    rec.primary_id = g.primary_id;
    rec.secondary_id = g.secondary_id;
    rec.representative_tca = g.representative_tca;
    rec.group_size = g.messages.size();
    rec.selected = select_decision_epoch(g);
    const std::optional<double> hbr = cfg.hbr ? cfg.hbr : rec.selected.hbr;
    if (!hbr) {
      rec.skip_reason = "no hbr";
      rec.features.flagged = true;
      rec.features.flag_reason = rec.skip_reason;
      return;
    }
    rec.hbr = *hbr;
    rec.features = derive_features(rec.selected, *hbr);
    if (rec.features.flagged) {
      rec.skip_reason = rec.features.flag_reason;
      return;
    }
    try {
      rec.assessment = assess(scale_covariance(rec.features.frame, cfg.scale),
                              std::nullopt, cfg.level, cfg.quadrature);
    } catch (const QuadratureFailure& e) {
      rec.skip_reason = std::string("quadrature failure: ") + e.what();
    }
  });

  std::vector<RiskAssessment> assessed;
  for (const EventRecord& rec : result.events) {
    if (rec.assessment) assessed.push_back(*rec.assessment);
  }
  if (!assessed.empty()) {
    for (double alpha : cfg.alphas) {
      result.confusion.push_back(
          confusion_matrix(assessed, alpha, cfg.pc_threshold));
    }
    std::vector<double> pc, p_obs;
    for (const RiskAssessment& a : assessed) {
      pc.push_back(a.pc_foster);
      p_obs.push_back(a.p_obs);
    }
    result.pc_summary = summarize(pc, kDecisionThresholds);
    result.p_obs_summary = summarize(p_obs, kDecisionThresholds);
  }

  const std::pair<const char*, std::optional<double> ConjunctionMessage::*>
      columns[] = {{"foster_1", &ConjunctionMessage::foster_1},
                   {"foster_2", &ConjunctionMessage::foster_2},
                   {"chan_1", &ConjunctionMessage::chan_1},
                   {"chan_2", &ConjunctionMessage::chan_2}};
  for (const auto& [name, member] : columns) {
    std::vector<double> values;
    for (const EventRecord& rec : result.events) {
      if (const auto& v = rec.selected.*member) values.push_back(*v);
    }
    if (!values.empty()) {
      result.catalog_summaries[name] = summarize(values, kDecisionThresholds);
    }
  }
  return result;
}

void write_batch_outputs(const BatchResult& result, const BatchConfig& cfg,
                         const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);

  {
    std::ofstream out = OpenOutput(dir / "features.csv");
    out << "primary_id,secondary_id,tca,creation_time,lead_time_h,hbr,x1,x2,"
           "d1,d2,d1_sq,d2_sq,x1_over_d1,x2_over_d2,psi_hat,psi_hat_over_d2,"
           "psi_hat_over_d1,flagged,flag_reason\n";
    for (const EventRecord& rec : result.events) {
      const FeatureRow& f = rec.features;
      const double lead_h =
          std::chrono::duration<double, std::ratio<3600>>(
              rec.selected.lead_time())
              .count();
      out << CsvField(rec.primary_id) << ',' << CsvField(rec.secondary_id)
          << ',' << format_timestamp(rec.selected.tca) << ','
          << format_timestamp(rec.selected.creation_time) << ','
          << format_number(lead_h) << ',' << format_number(rec.hbr) << ','
          << format_number(f.frame.x1) << ',' << format_number(f.frame.x2)
          << ',' << format_number(f.frame.d1) << ','
          << format_number(f.frame.d2) << ',' << format_number(f.d1_sq) << ','
          << format_number(f.d2_sq) << ',' << format_number(f.x1_over_d1)
          << ',' << format_number(f.x2_over_d2) << ','
          << format_number(f.psi_hat) << ','
          << format_number(f.psi_hat_over_d2) << ','
          << format_number(f.psi_hat_over_d1) << ',' << (f.flagged ? 1 : 0)
          << ',' << CsvField(f.flag_reason) << '\n';
    }
  }

  {
    std::ofstream out = OpenOutput(dir / "assessments.csv");
    out << "primary_id,secondary_id,tca,scale,hbr,psi_hat,pc_foster,pc_chan,"
           "p_obs,r,w,ci_lower,ci_upper,ci_lower_truncated\n";
    for (const EventRecord& rec : result.events) {
      if (!rec.assessment) continue;
      const RiskAssessment& a = *rec.assessment;
      out << CsvField(rec.primary_id) << ',' << CsvField(rec.secondary_id)
          << ',' << format_timestamp(rec.selected.tca) << ','
          << format_number(cfg.scale) << ',' << format_number(rec.hbr) << ','
          << format_number(a.psi_hat) << ',' << format_probability(a.pc_foster)
          << ',' << format_probability(a.pc_chan) << ','
          << format_probability(a.p_obs) << ',' << format_number(a.r) << ','
          << (a.w ? format_number(*a.w) : std::string("nan")) << ','
          << format_number(a.ci.lower) << ',' << format_number(a.ci.upper)
          << ',' << (a.ci.lower_truncated ? 1 : 0) << '\n';
    }
  }

  {
    std::ofstream out = OpenOutput(dir / "rejects.csv");
    out << "line,reason,raw\n";
    for (const RowReject& r : result.rejects) {
      out << r.line << ',' << CsvField(r.reason) << ',' << CsvField(r.raw)
          << '\n';
    }
  }

  {
    nlohmann::json tables = nlohmann::json::array();
    for (const ConfusionTable& t : result.confusion) tables.push_back(to_json(t));
    std::ofstream out = OpenOutput(dir / "confusion.json");
    out << nlohmann::json{{"scale", cfg.scale}, {"tables", tables}}.dump(2)
        << '\n';
  }

  {
    std::size_t assessed = 0, skipped = 0;
    for (const EventRecord& rec : result.events) {
      rec.assessment ? ++assessed : ++skipped;
    }
    nlohmann::json doc = {{"messages", result.messages},
                          {"rejected_rows", result.rejects.size()},
                          {"events", result.events.size()},
                          {"assessed", assessed},
                          {"skipped", skipped},
                          {"scale", cfg.scale}};
    if (result.pc_summary) doc["pc_foster"] = SummaryJson(*result.pc_summary);
    if (result.p_obs_summary) doc["p_obs"] = SummaryJson(*result.p_obs_summary);
    for (const auto& [name, s] : result.catalog_summaries) {
      doc["catalog"][name] = SummaryJson(s);
    }
    std::ofstream out = OpenOutput(dir / "summary.json");
    out << doc.dump(2) << '\n';
  }
}

}  // namespace conjunction
