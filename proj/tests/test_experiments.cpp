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


#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "conjunction/error.hpp"
#include "conjunction/experiments.hpp"
#include "conjunction/normal.hpp"
#include "conjunction/pipeline.hpp"
#include "conjunction/report.hpp"
#include "doctest.h"

using namespace conjunction;
namespace fs = std::filesystem;

namespace {

const EncounterFrame kExample{4.0, 3.0, 1.5, 0.8, 1.0};

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path TempDir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("conjunction_tests_" + name);
  fs::remove_all(dir);
  return dir;
}

ParsedCatalog Catalog(std::uint64_t events, std::uint64_t seed) {
  ParsedCatalog c;
  c.messages = synthesize_catalog({events, seed, 6});
  return c;
}

}  // namespace

TEST_CASE("covariance scaling multiplies variances") {
  const EncounterFrame s = scale_covariance(kExample, 4.0);
  CHECK(s.d1 == 3.0);
  CHECK(s.d2 == 1.6);
  CHECK(s.x1 == kExample.x1);
  CHECK(s.hbr == kExample.hbr);
  const EncounterFrame ab = scale_covariance(scale_covariance(kExample, 0.3), 7.0);
  const EncounterFrame c = scale_covariance(kExample, 2.1);
  CHECK(ab.d1 == doctest::Approx(c.d1).epsilon(1e-15));
  CHECK(ab.d2 == doctest::Approx(c.d2).epsilon(1e-15));
  CHECK(scale_covariance(kExample, 1.0).d1 == kExample.d1);
  CHECK_THROWS_AS(scale_covariance(kExample, 0.0), InvalidInput);
  CHECK_THROWS_AS(scale_covariance(kExample, -1.0), InvalidInput);
  CHECK_THROWS_AS(scale_covariance(kExample, std::numeric_limits<double>::infinity()),
                  InvalidInput);
}

TEST_CASE("reference timeline shape") {
  const TimelineSeries t = reference_timeline();
  CHECK_NOTHROW(t.validate());
  REQUIRE(t.epochs.size() == 16);
  CHECK(t.epochs.front().lead_time_h == 168.0);
  CHECK(t.epochs.back().lead_time_h == 2.0);
  for (std::size_t i = 1; i < t.epochs.size(); ++i) {
    CHECK(t.epochs[i].frame.d1 < t.epochs[i - 1].frame.d1);
    CHECK(t.epochs[i].frame.d1 >= t.epochs[i].frame.d2);
  }
  TimelineSeries bad = t;
  std::swap(bad.epochs[0], bad.epochs[1]);
  CHECK_THROWS_AS(bad.validate(), InvalidInput);
  CHECK_THROWS_AS(TimelineSeries{}.validate(), InvalidInput);
}

TEST_CASE("hit and miss trajectories without noise") {
  const TimelineSeries base = reference_timeline();
  const auto [hit, miss] = synthesize_hit_miss(base, 0.0, 1);
  CHECK(hit.label == TrajectoryLabel::kHit);
  CHECK(miss.label == TrajectoryLabel::kMiss);
  const EncounterFrame& last = base.epochs.back().frame;
  for (std::size_t i = 0; i < base.epochs.size(); ++i) {
    CHECK(miss.epochs[i].frame.x1 == base.epochs[i].frame.x1);
    CHECK(miss.epochs[i].frame.x2 == base.epochs[i].frame.x2);
    CHECK(hit.epochs[i].frame.x1 == doctest::Approx(base.epochs[i].frame.x1 - last.x1));
    CHECK(hit.epochs[i].frame.x2 == doctest::Approx(base.epochs[i].frame.x2 - last.x2));
    CHECK(hit.epochs[i].frame.d1 == base.epochs[i].frame.d1);
    CHECK(hit.epochs[i].lead_time_h == base.epochs[i].lead_time_h);
  }
  CHECK(hit.epochs.back().frame.observed_distance() == 0.0);
  CHECK_THROWS_AS(synthesize_hit_miss(base, -0.1, 1), InvalidInput);
}

TEST_CASE("hit and miss trajectories share their noise") {
  const TimelineSeries base = reference_timeline();
  const auto [hit, miss] = synthesize_hit_miss(base, 0.1, 5);
  const auto [hit2, miss2] = synthesize_hit_miss(base, 0.1, 5);
  const auto [hit3, miss3] = synthesize_hit_miss(base, 0.1, 6);
  const EncounterFrame& last = base.epochs.back().frame;
  for (std::size_t i = 0; i < base.epochs.size(); ++i) {
    CHECK(miss.epochs[i].frame.x1 - hit.epochs[i].frame.x1 == doctest::Approx(last.x1));
    CHECK(miss.epochs[i].frame.x2 - hit.epochs[i].frame.x2 == doctest::Approx(last.x2));
    CHECK(hit.epochs[i].frame.x1 == hit2.epochs[i].frame.x1);
    CHECK(miss.epochs[i].frame.x2 == miss2.epochs[i].frame.x2);
    CHECK(miss.epochs[i].frame.x1 != miss3.epochs[i].frame.x1);
  }
}

TEST_CASE("hit and miss timelines diverge and respect the probability bound") {
  const auto [hit, miss] = synthesize_hit_miss(reference_timeline(), 0.1, 2026);
  const auto hit_rows = timeline_report(hit, 0.02);
  const auto miss_rows = timeline_report(miss, 0.02);
  REQUIRE(hit_rows.size() == miss_rows.size());
  CHECK(hit_rows.back().p_obs > 0.4);
  CHECK(miss_rows.back().p_obs < 1e-4);
  for (std::size_t i = 0; i < hit_rows.size(); ++i) {
    CAPTURE(i);
    CHECK(hit_rows[i].log10_pc <= hit_rows[i].log10_p_obs);
    CHECK(miss_rows[i].log10_pc <= miss_rows[i].log10_p_obs);
    if (hit_rows[i].lead_time_h <= 12.0) {
      CHECK(hit_rows[i].p_obs > miss_rows[i].p_obs);
    }
  }
}

TEST_CASE("timeline rows and log of zero") {
  TimelineSeries far;
  far.epochs.push_back({3.0, {1e4, 0.0, 1.0, 0.5, 1.0}});
  far.epochs.push_back({1.0, kExample});
  const auto rows = timeline_report(far, 1.0);
  CHECK(rows[0].pc == 0.0);
  CHECK(rows[0].log10_pc == -std::numeric_limits<double>::infinity());
  CHECK(rows[0].psi_hat == 1e4);
  CHECK(rows[1].p_obs == doctest::Approx(significance_probability(kExample, 1.0)));
  CHECK(rows[1].log10_pc == doctest::Approx(std::log10(rows[1].pc)));
  std::ostringstream out;
  write_timeline_csv(out, rows);
  const std::string csv = out.str();
  CHECK(csv.rfind("lead_time_h,psi_hat,log10_pc,log10_p_obs,pc,p_obs\n", 0) == 0);
  CHECK(csv.find(",-inf,") != std::string::npos);
}

TEST_CASE("number formatting") {
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(format_number(5.0) == "5");
  CHECK(format_number(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_number(std::nan("")) == "nan");
  CHECK(format_probability(0.5) == "5.0000000000000000e-01");
  CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
  CHECK(std::stod(format_probability(3.16712418331e-05)) == 3.16712418331e-05);
}

TEST_CASE("assessment of the example frame") {
  const RiskAssessment a = assess(kExample);
  CHECK(a.psi0 == 1.0);
  CHECK(a.psi_hat == 5.0);
  CHECK(a.pc_foster == doctest::Approx(pc_hat(kExample)).epsilon(1e-14));
  CHECK(a.p_obs == normal_cdf(-a.r));
  CHECK(a.pc_foster <= a.p_obs);
  CHECK(a.pc_chan > 0.0);
  REQUIRE(a.w.has_value());
  CHECK(*a.w == doctest::Approx(9.5786).epsilon(1e-4));
  CHECK(a.ci.level == 0.95);
  const RiskAssessment b = assess(kExample, 2.0, 0.9);
  CHECK(b.psi0 == 2.0);
  CHECK(b.p_obs > a.p_obs);
  CHECK(b.ci.level == 0.9);

  const nlohmann::json j = to_json(assess({0.0, 0.0, 1.0, 0.5, 1.0}));
  CHECK(j["w"].is_null());
  CHECK(j["wald_undefined"] == true);
  CHECK(j["ci"]["lower_truncated"] == true);
}

TEST_CASE("confusion table matches a direct recount") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-9.0, 0.0);
  std::vector<RiskAssessment> v(500);
  for (auto& a : v) {
    a.p_obs = std::pow(10.0, u(rng));
    a.pc_foster = std::pow(10.0, u(rng));
  }
  v[0].p_obs = 1e-4;
  v[1].pc_foster = 1e-4;
  for (double alpha : {1e-4, 1e-2, 0.1}) {
    const ConfusionTable t = confusion_matrix(v, alpha, 1e-4);
    std::uint64_t cells[2][2] = {{0, 0}, {0, 0}};
    for (const auto& a : v) ++cells[a.p_obs >= alpha][a.pc_foster >= 1e-4];
    CHECK(t.pobs_ge_pc_lt == cells[1][0]);
    CHECK(t.pobs_ge_pc_ge == cells[1][1]);
    CHECK(t.pobs_lt_pc_lt == cells[0][0]);
    CHECK(t.pobs_lt_pc_ge == cells[0][1]);
    CHECK(t.total() == v.size());
    CHECK(t.alpha == alpha);
  }
  CHECK_THROWS_AS(confusion_matrix(std::vector<RiskAssessment>{}, 0.1), InvalidInput);
  const nlohmann::json j = to_json(confusion_matrix(v, 0.1));
  CHECK(j["total"] == 500);
}

TEST_CASE("batch run over a synthetic catalog") {
  BatchConfig cfg;
  cfg.alphas = {1e-4, 1e-1};
  const ParsedCatalog cat = Catalog(120, 77);
  const BatchResult r = run_batch(cat, cfg);
  CHECK(r.messages == cat.messages.size());
  CHECK(r.events.size() == 120);
  std::size_t assessed = 0;
  for (const EventRecord& e : r.events) {
    if (!e.assessment) continue;
    ++assessed;
    CHECK(e.assessment->pc_foster <= e.assessment->p_obs + 1e-12);
    CHECK(e.hbr == e.selected.hbr.value());
  }
  CHECK(assessed == 120);
  REQUIRE(r.confusion.size() == 2);
  for (const ConfusionTable& t : r.confusion) CHECK(t.total() == assessed);
  REQUIRE(r.pc_summary.has_value());
  CHECK(r.pc_summary->count == assessed);

  BatchConfig strict = cfg;
  strict.alphas = {1e-4};
  strict.pc_threshold = 1e-4;
  CHECK(run_batch(cat, strict).confusion[0].pobs_lt_pc_ge == 0);

  BatchConfig override_hbr = cfg;
  override_hbr.hbr = 0.5;
  for (const EventRecord& e : run_batch(cat, override_hbr).events) CHECK(e.hbr == 0.5);

  CHECK_THROWS_AS(run_batch(ParsedCatalog{}, cfg), EmptyCatalog);
  BatchConfig bad = cfg;
  bad.scale = 0.0;
  CHECK_THROWS_AS(run_batch(cat, bad), InvalidInput);
  bad = cfg;
  bad.alphas = {1.0};
  CHECK_THROWS_AS(run_batch(cat, bad), InvalidInput);
}

TEST_CASE("batch outputs are identical across shuffles and thread counts") {
  const ParsedCatalog cat = Catalog(80, 13);
  BatchConfig one;
  BatchConfig four;
  four.threads = 4;
  const fs::path a = TempDir("a");
  const fs::path b = TempDir("b");
  const fs::path c = TempDir("c");
  write_batch_outputs(run_batch(cat, one), one, a);
  write_batch_outputs(run_batch(cat, four), four, b);
  ParsedCatalog shuffled = cat;
  std::mt19937_64 rng(2);
  std::shuffle(shuffled.messages.begin(), shuffled.messages.end(), rng);
  write_batch_outputs(run_batch(shuffled, four), four, c);
  for (const char* name : {"features.csv", "assessments.csv", "rejects.csv",
                           "confusion.json", "summary.json"}) {
    CAPTURE(name);
    const std::string ref = Slurp(a / name);
    CHECK_FALSE(ref.empty());
    CHECK(Slurp(b / name) == ref);
    CHECK(Slurp(c / name) == ref);
  }
  const nlohmann::json summary = nlohmann::json::parse(Slurp(a / "summary.json"));
  CHECK(summary["events"] == 80);
  CHECK(summary["assessed"] == 80);
  for (const fs::path& p : {a, b, c}) fs::remove_all(p);
}
