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

#include "conjunction/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <tuple>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "conjunction/error.hpp"
#include "conjunction/random.hpp"

namespace conjunction {
namespace {

using std::chrono::days;
using std::chrono::hours;
using std::chrono::minutes;
using std::chrono::seconds;

bool ParseInt(std::string_view s, int& out) {
  if (s.empty()) return false;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::optional<double> ParseDouble(std::string_view s) {
  s = Trim(s);
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    return std::nullopt;
  }
  if (!std::isfinite(v)) return std::nullopt;
  return v;
}

// Splits one CSV record; double quotes group commas and "" escapes a quote.
std::vector<std::string> SplitCsv(std::string_view line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(ch);
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.emplace_back(Trim(cur));
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  fields.emplace_back(Trim(cur));
  return fields;
}

std::string FormatNumber(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const char* kStateSuffixes[] = {"r_x", "r_y", "r_z", "v_x", "v_y", "v_z"};
const char* kCovSuffixes[] = {"c_xx", "c_yx", "c_yy", "c_zx", "c_zy", "c_zz"};

std::vector<std::string> BuildMandatory() {
  std::vector<std::string> cols = {"primary_id", "secondary_id",
                                   "creation_time", "tca"};
  for (const char* who : {"primary", "secondary"}) {
    for (const char* s : kStateSuffixes) cols.push_back(std::string(who) + "_" + s);
    for (const char* s : kCovSuffixes) cols.push_back(std::string(who) + "_" + s);
  }
  return cols;
}

auto MessageTuple(const ConjunctionMessage& m) {
  auto opt = [](const std::optional<double>& v) {
    return std::make_pair(v.has_value(), v.value_or(0.0));
  };
  auto state = [](const StateVector& s) {
    return std::make_tuple(s.position.x(), s.position.y(), s.position.z(),
                           s.velocity.x(), s.velocity.y(), s.velocity.z());
  };
  auto cov = [](const PositionCovariance& c) {
    const Eigen::Matrix3d& m = c.matrix();
    return std::make_tuple(m(0, 0), m(1, 0), m(1, 1), m(2, 0), m(2, 1),
                           m(2, 2));
  };
  return std::make_tuple(std::cref(m.primary_id), std::cref(m.secondary_id),
                         m.tca, m.creation_time, state(m.primary_state),
                         state(m.secondary_state), cov(m.primary_cov),
                         cov(m.secondary_cov), opt(m.hbr), opt(m.foster_1),
                         opt(m.foster_2), opt(m.chan_1), opt(m.chan_2));
}

Eigen::Matrix3d RandomRotation(const CounterRng& rng, std::uint64_t base) {
  double entries[10];
  for (int k = 0; k < 5; ++k) {
    std::tie(entries[2 * k], entries[2 * k + 1]) = rng.normal_pair(base + k);
  }
  const Eigen::Matrix3d g = Eigen::Map<const Eigen::Matrix3d>(entries);
  Eigen::HouseholderQR<Eigen::Matrix3d> qr(g);
  Eigen::Matrix3d q = qr.householderQ();
  if (q.determinant() < 0.0) q.col(2) = -q.col(2);
  return q;
}

Eigen::Vector3d RandomUnit(const CounterRng& rng, std::uint64_t base) {
  const auto [a, b] = rng.normal_pair(base);
  const auto [c, d] = rng.normal_pair(base + 1);
  (void)d;
  Eigen::Vector3d v(a, b, c);
  return v.normalized();
}

}  // namespace

std::optional<Timestamp> parse_timestamp(std::string_view text) {
  text = Trim(text);
  if (text.size() < 17) return std::nullopt;
  int year = 0, month = 0, day = 0, doy = 0;
  if (!ParseInt(text.substr(0, 4), year) || text[4] != '-') return std::nullopt;
  std::size_t pos;
  std::chrono::sys_days date;
  if (text.size() > 10 && text[7] == '-') {
    if (!ParseInt(text.substr(5, 2), month) ||
        !ParseInt(text.substr(8, 2), day)) {
      return std::nullopt;
    }
    const std::chrono::year_month_day ymd{
        std::chrono::year(year), std::chrono::month(month),
        std::chrono::day(day)};
    if (!ymd.ok()) return std::nullopt;
    date = std::chrono::sys_days(ymd);
    pos = 10;
  } else {
    if (!ParseInt(text.substr(5, 3), doy)) return std::nullopt;
    const std::chrono::year y(year);
    if (doy < 1 || doy > (y.is_leap() ? 366 : 365)) return std::nullopt;
    date = std::chrono::sys_days(y / std::chrono::January / 1) + days(doy - 1);
    pos = 8;
  }
  if (text.size() < pos + 9 || (text[pos] != 'T' && text[pos] != ' ')) {
    return std::nullopt;
  }
  int hh = 0, mm = 0, ss = 0;
  if (!ParseInt(text.substr(pos + 1, 2), hh) || text[pos + 3] != ':' ||
      !ParseInt(text.substr(pos + 4, 2), mm) || text[pos + 6] != ':' ||
      !ParseInt(text.substr(pos + 7, 2), ss)) {
    return std::nullopt;
  }
  if (hh > 23 || mm > 59 || ss > 60) return std::nullopt;
  pos += 9;
  std::int64_t micros = 0;
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    int digits = 0;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
      if (digits < 6) {
        micros = micros * 10 + (text[pos] - '0');
        ++digits;
      }
      ++pos;
    }
    if (digits == 0) return std::nullopt;
    for (; digits < 6; ++digits) micros *= 10;
  }
  const std::string_view zone = text.substr(pos);
  if (!(zone.empty() || zone == "Z" || zone == "+00:00" || zone == "+0000")) {
    return std::nullopt;
  }
  return Timestamp(date) + hours(hh) + minutes(mm) + seconds(ss) +
         Microseconds(micros);
}

std::string format_timestamp(Timestamp t) {
  const auto day = std::chrono::floor<days>(t);
  const std::chrono::year_month_day ymd(day);
  std::int64_t rest = (t - day).count();
  const std::int64_t micros = rest % 1000000;
  rest /= 1000000;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02lld:%02lld:%02lld.%06lldZ",
                static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()),
                static_cast<long long>(rest / 3600),
                static_cast<long long>(rest / 60 % 60),
                static_cast<long long>(rest % 60),
                static_cast<long long>(micros));
  return buf;
}

bool message_less(const ConjunctionMessage& a, const ConjunctionMessage& b) {
  return MessageTuple(a) < MessageTuple(b);
}

SchemaConfig::SchemaConfig() {
  for (const auto& c : mandatory_columns()) columns_[c] = c;
  for (const auto& c : optional_columns()) columns_[c] = c;
}

const std::vector<std::string>& SchemaConfig::mandatory_columns() {
  static const std::vector<std::string> cols = BuildMandatory();
  return cols;
}

const std::vector<std::string>& SchemaConfig::optional_columns() {
  static const std::vector<std::string> cols = {"foster_1", "foster_2",
                                                "chan_1", "chan_2", "hbr"};
  return cols;
}

const std::string& SchemaConfig::column(const std::string& canonical) const {
  const auto it = columns_.find(canonical);
  if (it == columns_.end()) {
    throw SchemaError("unknown canonical column '" + canonical + "'");
  }
  return it->second;
}

void SchemaConfig::set_column(const std::string& canonical,
                              std::string header) {
  if (columns_.find(canonical) == columns_.end()) {
    throw SchemaError("unknown canonical column '" + canonical + "'");
  }
  columns_[canonical] = std::move(header);
}

SchemaConfig SchemaConfig::FromJsonFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open schema file " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError("schema file is not valid JSON: " + std::string(e.what()));
  }
  if (!doc.is_object()) throw SchemaError("schema file must be a JSON object");
  SchemaConfig schema;
  for (const auto& [key, value] : doc.items()) {
    if (!value.is_string()) {
      throw SchemaError("schema entry '" + key + "' must be a string");
    }
    schema.set_column(key, value.get<std::string>());
  }
  return schema;
}

ParsedCatalog parse_catalog(std::istream& in, const SchemaConfig& schema) {
  ParsedCatalog out;
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!Trim(line).empty()) {
      header = SplitCsv(line);
      break;
    }
  }
  if (header.empty()) throw SchemaError("catalog has no header row");

  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < header.size(); ++i) index.emplace(header[i], i);
  auto locate = [&](const std::string& canonical) -> std::optional<std::size_t> {
    const auto it = index.find(schema.column(canonical));
    if (it == index.end()) return std::nullopt;
    return it->second;
  };
  std::unordered_map<std::string, std::size_t> col;
  for (const auto& c : SchemaConfig::mandatory_columns()) {
    const auto pos = locate(c);
    if (!pos) {
      throw SchemaError("catalog is missing mandatory column '" +
                        schema.column(c) + "' (" + c + ")");
    }
    col[c] = *pos;
  }
  std::unordered_map<std::string, std::size_t> opt_col;
  for (const auto& c : SchemaConfig::optional_columns()) {
    if (const auto pos = locate(c)) opt_col[c] = *pos;
  }

  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    const std::vector<std::string> f = SplitCsv(line);
    auto reject = [&](std::string reason) {
      out.rejects.push_back({line_no, std::move(reason), line});
    };
    if (f.size() != header.size()) {
      reject("expected " + std::to_string(header.size()) + " fields, found " +
             std::to_string(f.size()));
      continue;
    }
    ConjunctionMessage m;
    m.primary_id = f[col["primary_id"]];
    m.secondary_id = f[col["secondary_id"]];
    if (m.primary_id.empty() || m.secondary_id.empty()) {
      reject("empty object identifier");
      continue;
    }
    const auto created = parse_timestamp(f[col["creation_time"]]);
    const auto tca = parse_timestamp(f[col["tca"]]);
    if (!created || !tca) {
      reject("unparseable timestamp");
      continue;
    }
    m.creation_time = *created;
    m.tca = *tca;
    if (m.creation_time > m.tca) {
      reject("creation_time is after tca");
      continue;
    }

    bool ok = true;
    std::string bad;
    auto number = [&](const std::string& name) {
      const auto v = ParseDouble(f[col[name]]);
      if (!v) {
        if (ok) bad = name;
        ok = false;
        return 0.0;
      }
      return *v;
    };
    auto read_object = [&](const std::string& who, StateVector& state,
                           PositionCovariance& cov) {
      double s[6], c[6];
      for (int k = 0; k < 6; ++k) s[k] = number(who + "_" + kStateSuffixes[k]);
      for (int k = 0; k < 6; ++k) c[k] = number(who + "_" + kCovSuffixes[k]);
      if (!ok) return;
      state.position = {s[0], s[1], s[2]};
      state.velocity = {s[3], s[4], s[5]};
      cov = PositionCovariance::FromLowerTriangle(c[0], c[1], c[2], c[3], c[4],
                                                  c[5]);
    };
    try {
      read_object("primary", m.primary_state, m.primary_cov);
      read_object("secondary", m.secondary_state, m.secondary_cov);
    } catch (const InvalidInput& e) {
      reject(e.what());
      continue;
    }
    if (!ok) {
      reject("non-numeric value in column '" + schema.column(bad) + "'");
      continue;
    }

    std::optional<double>* optional_fields[] = {&m.foster_1, &m.foster_2,
                                                &m.chan_1, &m.chan_2, &m.hbr};
    for (std::size_t k = 0; k < SchemaConfig::optional_columns().size(); ++k) {
      const std::string& name = SchemaConfig::optional_columns()[k];
      const auto it = opt_col.find(name);
      if (it == opt_col.end() || Trim(f[it->second]).empty()) continue;
      const auto v = ParseDouble(f[it->second]);
      if (!v) {
        ok = false;
        bad = name;
        break;
      }
      *optional_fields[k] = *v;
    }
    if (!ok) {
      reject("non-numeric value in column '" + schema.column(bad) + "'");
      continue;
    }
    if (m.hbr && !(*m.hbr > 0.0)) {
      reject("hbr must be positive");
      continue;
    }
    out.messages.push_back(std::move(m));
  }
  return out;
}

ParsedCatalog parse_catalog(const std::filesystem::path& path,
                            const SchemaConfig& schema) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open catalog " + path.string());
  return parse_catalog(in, schema);
}

void write_catalog(std::ostream& out,
                   std::span<const ConjunctionMessage> messages) {
  const auto& mandatory = SchemaConfig::mandatory_columns();
  const auto& optional = SchemaConfig::optional_columns();
  for (std::size_t i = 0; i < mandatory.size(); ++i) {
    out << (i ? "," : "") << mandatory[i];
  }
  for (const auto& c : optional) out << ',' << c;
  out << '\n';
  auto opt = [](const std::optional<double>& v) {
    return v ? FormatNumber(*v) : std::string();
  };
  for (const ConjunctionMessage& m : messages) {
    out << m.primary_id << ',' << m.secondary_id << ','
        << format_timestamp(m.creation_time) << ','
        << format_timestamp(m.tca);
    auto object = [&](const StateVector& s, const PositionCovariance& c) {
      for (int k = 0; k < 3; ++k) out << ',' << FormatNumber(s.position(k));
      for (int k = 0; k < 3; ++k) out << ',' << FormatNumber(s.velocity(k));
      const Eigen::Matrix3d& v = c.matrix();
      for (double x : {v(0, 0), v(1, 0), v(1, 1), v(2, 0), v(2, 1), v(2, 2)}) {
        out << ',' << FormatNumber(x);
      }
    };
    object(m.primary_state, m.primary_cov);
    object(m.secondary_state, m.secondary_cov);
    out << ',' << opt(m.foster_1) << ',' << opt(m.foster_2) << ','
        << opt(m.chan_1) << ',' << opt(m.chan_2) << ',' << opt(m.hbr) << '\n';
  }
}

std::vector<EventGroup> group_events(std::span<const ConjunctionMessage> msgs) {
  std::map<std::pair<std::string, std::string>,
           std::vector<ConjunctionMessage>>
      partitions;
  for (const ConjunctionMessage& m : msgs) {
    partitions[{m.primary_id, m.secondary_id}].push_back(m);
  }
  std::vector<EventGroup> groups;
  for (auto& [ids, members] : partitions) {
    std::sort(members.begin(), members.end(), message_less);
    EventGroup* current = nullptr;
    for (ConjunctionMessage& m : members) {
      if (current == nullptr ||
          m.tca - current->representative_tca > kGroupingWindow) {
        groups.push_back({ids.first, ids.second, m.tca, {}});
        current = &groups.back();
      }
      current->messages.push_back(std::move(m));
    }
  }
  return groups;
}

const ConjunctionMessage& select_decision_epoch(const EventGroup& group,
                                                Microseconds horizon) {
  if (group.messages.empty()) {
    throw InvalidInput("cannot select a decision epoch from an empty group");
  }
  const ConjunctionMessage* best = &group.messages.front();
  auto gap = [horizon](const ConjunctionMessage& m) {
    const Microseconds d = m.lead_time() - horizon;
    return d < Microseconds::zero() ? -d : d;
  };
  for (const ConjunctionMessage& m : group.messages) {
    const Microseconds g = gap(m), g_best = gap(*best);
    if (g < g_best || (g == g_best && m.creation_time < best->creation_time)) {
      best = &m;
    }
  }
  return *best;
}

double nearest_rank_quantile(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw EmptyCatalog("quantile of an empty sample");
  const auto n = static_cast<double>(sorted.size());
  auto rank = static_cast<std::size_t>(std::ceil(q * n));
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  return sorted[rank - 1];
}

CatalogSummary summarize(std::span<const double> values,
                         std::span<const double> thresholds) {
  if (values.empty()) throw EmptyCatalog("cannot summarize an empty catalog");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  CatalogSummary s;
  s.count = sorted.size();
  double sum = 0.0;
  for (double v : sorted) sum += v;
  s.mean = sum / static_cast<double>(s.count);
  s.min = sorted.front();
  s.max = sorted.back();
  for (double q : kSummaryQuantiles) {
    s.quantiles.emplace_back(q, nearest_rank_quantile(sorted, q));
  }
  for (double t : thresholds) {
    const auto above = static_cast<std::uint64_t>(
        sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), t));
    s.threshold_counts[t] = {above, static_cast<double>(above) /
                                        static_cast<double>(s.count)};
  }
  return s;
}

EncounterFrame message_frame(const ConjunctionMessage& message, double hbr) {
  const RelativeState rel =
      relative_state(message.primary_state, message.primary_cov,
                     message.secondary_state, message.secondary_cov);
  return project_to_encounter_frame(rel, hbr);
}

FeatureRow features_from_frame(const EncounterFrame& frame) {
  FeatureRow row;
  row.frame = frame;
  row.d1_sq = frame.d1 * frame.d1;
  row.d2_sq = frame.d2 * frame.d2;
  row.x1_over_d1 = frame.x1 / frame.d1;
  row.x2_over_d2 = frame.x2 / frame.d2;
  row.psi_hat = frame.observed_distance();
  row.psi_hat_over_d2 = row.psi_hat / frame.d2;
  row.psi_hat_over_d1 = row.psi_hat / frame.d1;
  return row;
}

FeatureRow derive_features(const ConjunctionMessage& message, double hbr) {
  try {
    return features_from_frame(message_frame(message, hbr));
  } catch (const DegenerateGeometry& e) {
    FeatureRow row;
    row.flagged = true;
    row.flag_reason = e.what();
    return row;
  } catch (const DegenerateCovariance& e) {
    FeatureRow row;
    row.flagged = true;
    row.flag_reason = e.what();
    return row;
  }
}

std::vector<ConjunctionMessage> synthesize_catalog(
    const SyntheticCatalogConfig& cfg) {
  const Timestamp epoch = Timestamp(std::chrono::sys_days(
      std::chrono::year(2024) / std::chrono::January / 1));
  std::vector<ConjunctionMessage> out;
  for (std::uint64_t e = 0; e < cfg.events; ++e) {
    const CounterRng rng = CounterRng(cfg.seed, 10).substream(e);
    // Events 2k and 2k+1 share IDs and are ~3.5 days apart.
    const std::string primary = "P" + std::to_string(40000 + e % 37);
    const std::string secondary = "S" + std::to_string(80000 + e / 2);
    const Timestamp tca =
        epoch + hours(6 * (e / 2)) + hours(84 * (e % 2)) +
        Microseconds(static_cast<std::int64_t>(rng.uniform(0) * 3.6e9));

    const Eigen::Vector3d r_hat = RandomUnit(rng, 10);
    Eigen::Vector3d along = RandomUnit(rng, 20);
    along = (along - along.dot(r_hat) * r_hat).normalized();
    const double radius = 6778.0 + 800.0 * rng.uniform(1);
    const double speed = std::sqrt(398600.4418 / radius);
    const double crossing =
        (10.0 + 160.0 * rng.uniform(2)) * std::numbers::pi / 180.0;
    const Eigen::Vector3d v1 = speed * along;
    const Eigen::Vector3d v2 =
        speed * (std::cos(crossing) * along +
                 std::sin(crossing) * r_hat.cross(along).normalized());
    const Eigen::Vector3d nu = v2 - v1;
    Eigen::Vector3d miss_dir = RandomUnit(rng, 30);
    miss_dir = (miss_dir - miss_dir.dot(nu) / nu.squaredNorm() * nu).normalized();
    const double miss = std::pow(10.0, -2.3 + 3.6 * rng.uniform(3));  // km
    const double hbr = std::pow(10.0, -2.3 + 1.0 * rng.uniform(4));   // km

    const int count =
        1 + static_cast<int>(rng.uniform(5) * cfg.max_messages_per_event);
    for (int k = 0; k < count; ++k) {
      const CounterRng mr = rng.substream(100 + k);
      const double lead_h = 0.5 + 167.5 * mr.uniform(0);
      ConjunctionMessage m;
      m.primary_id = primary;
      m.secondary_id = secondary;
      m.tca = tca + Microseconds(static_cast<std::int64_t>(
                        (mr.uniform(1) - 0.5) * 6.0e8));  // +-5 min
      m.creation_time =
          m.tca - Microseconds(static_cast<std::int64_t>(lead_h * 3.6e9));
      const double sigma = 0.01 + 1.5 * std::pow(lead_h / 168.0, 0.8);
      auto covariance = [&](std::uint64_t base, double s) {
        const Eigen::Matrix3d q = RandomRotation(mr, base);
        const Eigen::Vector3d var(s * s, 0.09 * s * s, 0.01 * s * s);
        return PositionCovariance(q * var.asDiagonal() * q.transpose());
      };
      m.primary_cov = covariance(10, sigma);
      m.secondary_cov = covariance(20, 1.3 * sigma);
      const auto [n1, n2] = mr.normal_pair(30);
      const auto [n3, n4] = mr.normal_pair(31);
      (void)n4;
      const Eigen::Vector3d noise = 0.2 * sigma * Eigen::Vector3d(n1, n2, n3);
      m.primary_state.position = radius * r_hat;
      m.primary_state.velocity = v1;
      m.secondary_state.position =
          m.primary_state.position + miss * miss_dir + noise;
      m.secondary_state.velocity = v2;
      m.hbr = hbr;
      out.push_back(std::move(m));
    }
  }
  return out;
}

}  // namespace conjunction
