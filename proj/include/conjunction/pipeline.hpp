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

#ifndef CONJUNCTION_PIPELINE_HPP_
#define CONJUNCTION_PIPELINE_HPP_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "conjunction/dataset.hpp"
#include "conjunction/experiments.hpp"

namespace conjunction {

struct BatchConfig {
  std::optional<double> hbr;  // overrides the catalog's hbr column
  double scale = 1.0;         // covariance multiplier c
  std::vector<double> alphas = {1e-4, 1e-1};
  double pc_threshold = 1e-4;
  double level = 0.95;
  unsigned threads = 1;
  QuadratureConfig quadrature;

  void validate() const;
};

struct EventRecord {
  std::string primary_id;
  std::string secondary_id;
  Timestamp representative_tca{};
  std::size_t group_size = 0;
  ConjunctionMessage selected;
  double hbr = 0.0;
  FeatureRow features;  // of the unscaled frame
  std::optional<RiskAssessment> assessment;
  std::string skip_reason;
};

struct BatchResult {
  std::size_t messages = 0;
  std::vector<EventRecord> events;
  std::vector<RowReject> rejects;
  std::vector<ConfusionTable> confusion;  // one per alpha
  std::optional<CatalogSummary> pc_summary;
  std::optional<CatalogSummary> p_obs_summary;
  // Summaries of precomputed catalog columns (foster_1, ...), when present.
  std::map<std::string, CatalogSummary> catalog_summaries;
};

inline constexpr double kDecisionThresholds[] = {1e-7, 1e-4};

// parse -> group -> 12 h epoch -> project -> scale -> assess -> confusion.
// Throws EmptyCatalog when the catalog has no valid message.
BatchResult run_batch(const ParsedCatalog& catalog, const BatchConfig& cfg);

// Writes features.csv, assessments.csv, rejects.csv, confusion.json and
// summary.json into dir (created if needed).
void write_batch_outputs(const BatchResult& result, const BatchConfig& cfg,
                         const std::filesystem::path& dir);

}  // namespace conjunction

#endif  // CONJUNCTION_PIPELINE_HPP_
