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

#ifndef CONJUNCTION_DATASET_HPP_
#define CONJUNCTION_DATASET_HPP_

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "conjunction/geometry.hpp"

namespace conjunction {

using Microseconds = std::chrono::microseconds;
using Timestamp = std::chrono::sys_time<Microseconds>;

// ISO-8601 UTC: "YYYY-MM-DDTHH:MM:SS[.ffffff][Z|+00:00]" or the day-of-year
// form "YYYY-DDDTHH:MM:SS...". A space may replace the 'T'. Returns nullopt
// on malformed input.
std::optional<Timestamp> parse_timestamp(std::string_view text);
std::string format_timestamp(Timestamp t);

struct ConjunctionMessage {
  std::string primary_id;
  std::string secondary_id;
  Timestamp creation_time{};
  Timestamp tca{};
  StateVector primary_state;
  StateVector secondary_state;
  PositionCovariance primary_cov;
  PositionCovariance secondary_cov;
  std::optional<double> foster_1, foster_2, chan_1, chan_2;
  std::optional<double> hbr;

  Microseconds lead_time() const { return tca - creation_time; }
};

// Strict weak order over every field; used wherever a deterministic order
// must not depend on input row order.
bool message_less(const ConjunctionMessage& a, const ConjunctionMessage& b);

// Maps canonical column names to the header names found in a catalog.
// Canonical names: primary_id, secondary_id, creation_time, tca,
// {primary,secondary}_{r_x,r_y,r_z,v_x,v_y,v_z},
// {primary,secondary}_{c_xx,c_yx,c_yy,c_zx,c_zy,c_zz} (mandatory) and
// foster_1, foster_2, chan_1, chan_2, hbr (optional).
class SchemaConfig {
 public:
  SchemaConfig();  // identity mapping

  // JSON object {"canonical_name": "header_name", ...}. Unknown canonical
  // names raise SchemaError.
  static SchemaConfig FromJsonFile(const std::filesystem::path& path);

  static const std::vector<std::string>& mandatory_columns();
  static const std::vector<std::string>& optional_columns();

  const std::string& column(const std::string& canonical) const;
  void set_column(const std::string& canonical, std::string header);

 private:
  std::map<std::string, std::string> columns_;
};

struct RowReject {
  std::size_t line = 0;  // 1-based, header is line 1
  std::string reason;
  std::string raw;
};

struct ParsedCatalog {
  std::vector<ConjunctionMessage> messages;
  std::vector<RowReject> rejects;
};

// Comma-separated catalog with a header row. Missing mandatory columns throw
// SchemaError; rows that fail to parse or validate are collected as rejects.
ParsedCatalog parse_catalog(std::istream& in, const SchemaConfig& schema = {});
ParsedCatalog parse_catalog(const std::filesystem::path& path,
                            const SchemaConfig& schema = {});

// Writes messages with the default column names; round-trips through
// parse_catalog.
void write_catalog(std::ostream& out,
                   std::span<const ConjunctionMessage> messages);

struct EventGroup {
  std::string primary_id;
  std::string secondary_id;
  Timestamp representative_tca{};
  std::vector<ConjunctionMessage> messages;  // ordered by message_less
};

inline constexpr Microseconds kGroupingWindow = std::chrono::minutes(15);
inline constexpr Microseconds kDecisionHorizon = std::chrono::hours(12);

// Partitions by (primary_id, secondary_id), sorts each partition by TCA and
// cuts greedy clusters: a cluster is anchored at its earliest TCA and takes
// every following message whose TCA is within 15 minutes of the anchor.
// Groups are returned ordered by (primary_id, secondary_id, anchor).
std::vector<EventGroup> group_events(std::span<const ConjunctionMessage> msgs);

// Member whose lead time is closest to the horizon; ties go to the earlier
// creation time. Throws InvalidInput on an empty group.
const ConjunctionMessage& select_decision_epoch(
    const EventGroup& group, Microseconds horizon = kDecisionHorizon);

struct ThresholdCount {
  std::uint64_t count = 0;  // values strictly greater than the threshold
  double fraction = 0.0;
};

struct CatalogSummary {
  std::uint64_t count = 0;
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  // Nearest-rank quantiles at 25, 50, 75, 90, 95, 99 percent.
  std::vector<std::pair<double, double>> quantiles;
  std::map<double, ThresholdCount> threshold_counts;
};

inline constexpr double kSummaryQuantiles[] = {0.25, 0.50, 0.75,
                                               0.90, 0.95, 0.99};

// Throws EmptyCatalog on empty input.
CatalogSummary summarize(std::span<const double> values,
                         std::span<const double> thresholds);

// Nearest-rank quantile of an ascending sample: element ceil(q n) (1-based).
double nearest_rank_quantile(std::span<const double> sorted, double q);

struct FeatureRow {
  EncounterFrame frame;
  double d1_sq = 0.0;
  double d2_sq = 0.0;
  double x1_over_d1 = 0.0;
  double x2_over_d2 = 0.0;
  double psi_hat = 0.0;
  double psi_hat_over_d2 = 0.0;
  double psi_hat_over_d1 = 0.0;
  bool flagged = false;  // projection failed; excluded from plots
  std::string flag_reason;
};

FeatureRow features_from_frame(const EncounterFrame& frame);

// Projects the message to its encounter frame and derives the scatter and
// histogram features. Degenerate geometry or covariance flags the row.
FeatureRow derive_features(const ConjunctionMessage& message, double hbr);

// Encounter frame of a message (relative state, then projection).
EncounterFrame message_frame(const ConjunctionMessage& message, double hbr);

struct SyntheticCatalogConfig {
  std::uint64_t events = 100;
  std::uint64_t seed = 1;
  int max_messages_per_event = 6;
};

// Seeded synthetic catalog with LEO-like geometry. Consecutive event pairs
// share object IDs but sit days apart in TCA; every message carries a
// mission HBR and lead times spread over seven days.
std::vector<ConjunctionMessage> synthesize_catalog(
    const SyntheticCatalogConfig& cfg);

}  // namespace conjunction

#endif  // CONJUNCTION_DATASET_HPP_
