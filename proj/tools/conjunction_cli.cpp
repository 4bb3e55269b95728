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


#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "conjunction/collision_probability.hpp"
#include "conjunction/dataset.hpp"
#include "conjunction/error.hpp"
#include "conjunction/experiments.hpp"
#include "conjunction/mc_oracle.hpp"
#include "conjunction/pipeline.hpp"
#include "conjunction/report.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace conjunction;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;

struct FrameArgs {
  double x1 = 0.0, x2 = 0.0, d1 = 0.0, d2 = 0.0, hbr = 0.0;

  void add(CLI::App* cmd, bool need_hbr = true) {
    cmd->add_option("--x1", x1, "miss component along the major axis (km)")->required();
    cmd->add_option("--x2", x2, "miss component along the minor axis (km)")->required();
    cmd->add_option("--d1", d1, "major-axis standard deviation (km)")->required();
    cmd->add_option("--d2", d2, "minor-axis standard deviation (km)")->required();
    auto* h = cmd->add_option("--hbr", hbr, "hard-body radius (km)");
    if (need_hbr) h->required();
  }

  EncounterFrame frame() const {
    EncounterFrame f{x1, x2, d1, d2, hbr};
    f.validate();
    return f;
  }
};

void Emit(const json& doc) { std::cout << doc.dump(2) << '\n'; }

std::ofstream OpenFile(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write " + path.string());
  return out;
}

json SummaryJson(const CatalogSummary& s) {
  json q = json::array();
  for (const auto& [level, value] : s.quantiles) {
    q.push_back({{"quantile", level}, {"value", value}});
  }
  return {{"count", s.count}, {"mean", s.mean}, {"min", s.min},
          {"max", s.max}, {"quantiles", q}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conjunction risk assessment with collision and significance probabilities"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();

  // assess
  auto* assess_cmd = app.add_subcommand("assess", "assess one encounter");
  FrameArgs assess_frame;
  std::optional<double> assess_psi0;
  double assess_level = 0.95;
  double assess_scale = 1.0;
  std::uint64_t mc_samples = 0;
  std::uint64_t seed = 1;
  assess_frame.add(assess_cmd);
  assess_cmd->add_option("--psi0", assess_psi0, "null miss distance (km, default hbr)");
  assess_cmd->add_option("--level", assess_level, "confidence level");
  assess_cmd->add_option("--scale", assess_scale, "covariance multiplier");
  assess_cmd->add_option("--mc-samples", mc_samples, "Monte Carlo samples for a cross-check");
  assess_cmd->add_option("--seed", seed, "random seed");

  // batch
  auto* batch_cmd = app.add_subcommand("batch", "assess every event of a catalog");
  fs::path catalog_path, out_dir, schema_path;
  BatchConfig batch;
  std::optional<double> batch_hbr;
  batch_cmd->add_option("--catalog", catalog_path, "catalog CSV")->required();
  batch_cmd->add_option("--out", out_dir, "output directory")->required();
  batch_cmd->add_option("--schema", schema_path, "JSON column mapping");
  batch_cmd->add_option("--hbr", batch_hbr, "hard-body radius overriding the catalog (km)");
  batch_cmd->add_option("--scale", batch.scale, "covariance multiplier");
  batch_cmd->add_option("--alpha", batch.alphas, "significance levels");
  batch_cmd->add_option("--pc-threshold", batch.pc_threshold, "pc decision threshold");
  batch_cmd->add_option("--level", batch.level, "confidence level");
  batch_cmd->add_option("--threads", batch.threads, "worker threads");

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "hit and miss timelines");
  double kappa = 0.1;
  double sim_hbr = 0.02;
  fs::path sim_out;
  sim_cmd->add_option("--kappa", kappa, "noise scale relative to the final covariance");
  sim_cmd->add_option("--hbr", sim_hbr, "hard-body radius (km)");
  sim_cmd->add_option("--seed", seed, "random seed");
  sim_cmd->add_option("--out", sim_out, "directory for timeline CSV files");

  // dilution
  auto* dil_cmd = app.add_subcommand("dilution", "pc over a range of covariance scales");
  FrameArgs dil_frame;
  double log_min = -6.0, log_max = 6.0;
  int grid = 121;
  fs::path dil_out;
  dil_frame.add(dil_cmd);
  dil_cmd->add_option("--log10-min", log_min, "smallest log10 scale");
  dil_cmd->add_option("--log10-max", log_max, "largest log10 scale");
  dil_cmd->add_option("--grid", grid, "number of scales");
  dil_cmd->add_option("--out", dil_out, "curve CSV path");

  // theorem-check
  auto* thm_cmd = app.add_subcommand("theorem-check", "verify pc <= p_obs on random frames");
  std::uint64_t configs = 10000;
  unsigned threads = 1;
  thm_cmd->add_option("--configs", configs, "number of frames");
  thm_cmd->add_option("--seed", seed, "random seed");
  thm_cmd->add_option("--threads", threads, "worker threads");

  // calibrate
  auto* cal_cmd = app.add_subcommand("calibrate", "null distribution of p_obs and interval coverage");
  std::optional<double> cal_d, cal_d1, cal_d2;
  double psi0 = 1.0;
  std::uint64_t replicates = 10000;
  int lambda_grid = 36;
  double cal_level = 0.95;
  cal_cmd->add_option("--d", cal_d, "isotropic standard deviation (km)");
  cal_cmd->add_option("--d1", cal_d1, "major-axis standard deviation (km)");
  cal_cmd->add_option("--d2", cal_d2, "minor-axis standard deviation (km)");
  cal_cmd->add_option("--psi0", psi0, "true miss distance (km)");
  cal_cmd->add_option("--replicates", replicates, "replicates");
  cal_cmd->add_option("--lambda-grid", lambda_grid, "orientations on the circle");
  cal_cmd->add_option("--level", cal_level, "interval level for coverage");
  cal_cmd->add_option("--seed", seed, "random seed");

  // synth-catalog
  auto* syn_cmd = app.add_subcommand("synth-catalog", "write a synthetic catalog");
  SyntheticCatalogConfig syn;
  fs::path syn_out;
  syn_cmd->add_option("--events", syn.events, "number of events");
  syn_cmd->add_option("--seed", syn.seed, "random seed");
  syn_cmd->add_option("--max-messages", syn.max_messages_per_event, "messages per event");
  syn_cmd->add_option("--out", syn_out, "CSV path (default standard output)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*assess_cmd) {
      const EncounterFrame f = scale_covariance(assess_frame.frame(), assess_scale);
      const RiskAssessment a = assess(f, assess_psi0, assess_level);
      json doc = {{"frame", to_json(f)}, {"scale", assess_scale}, {"assessment", to_json(a)}};
      if (mc_samples > 0) doc["monte_carlo"] = to_json(mc_pc(f, f.position(), mc_samples, seed));
      Emit(doc);
    } else if (*batch_cmd) {
      batch.hbr = batch_hbr;
      batch.validate();
      const SchemaConfig schema =
          schema_path.empty() ? SchemaConfig() : SchemaConfig::FromJsonFile(schema_path);
      const ParsedCatalog catalog = parse_catalog(catalog_path, schema);
      const BatchResult result = run_batch(catalog, batch);
      write_batch_outputs(result, batch, out_dir);
      json tables = json::array();
      for (const ConfusionTable& t : result.confusion) tables.push_back(to_json(t));
      std::size_t assessed = 0;
      for (const EventRecord& e : result.events) assessed += e.assessment.has_value();
      json doc = {{"messages", result.messages},
                  {"rejected_rows", result.rejects.size()},
                  {"events", result.events.size()},
                  {"assessed", assessed},
                  {"scale", batch.scale},
                  {"confusion", tables},
                  {"out", out_dir.string()}};
      if (result.pc_summary) doc["pc_foster"] = SummaryJson(*result.pc_summary);
      if (result.p_obs_summary) doc["p_obs"] = SummaryJson(*result.p_obs_summary);
      Emit(doc);
    } else if (*sim_cmd) {
      const auto [hit, miss] = synthesize_hit_miss(reference_timeline(), kappa, seed);
      const auto hit_rows = timeline_report(hit, sim_hbr);
      const auto miss_rows = timeline_report(miss, sim_hbr);
      if (!sim_out.empty()) {
        fs::create_directories(sim_out);
        std::ofstream h = OpenFile(sim_out / "hit_timeline.csv");
        write_timeline_csv(h, hit_rows);
        std::ofstream m = OpenFile(sim_out / "miss_timeline.csv");
        write_timeline_csv(m, miss_rows);
      }
      auto rows = [](const std::vector<TimelineRow>& v) {
        json a = json::array();
        for (const TimelineRow& r : v) {
          a.push_back({{"lead_time_h", r.lead_time_h},
                       {"psi_hat", r.psi_hat},
                       {"pc", r.pc},
                       {"p_obs", r.p_obs},
                       {"log10_pc", format_number(r.log10_pc)},
                       {"log10_p_obs", format_number(r.log10_p_obs)}});
        }
        return a;
      };
      Emit({{"kappa", kappa}, {"seed", seed}, {"hbr", sim_hbr},
            {"hit", rows(hit_rows)}, {"miss", rows(miss_rows)}});
    } else if (*dil_cmd) {
      const EncounterFrame f = dil_frame.frame();
      if (grid < 2 || !(log_max > log_min)) {
        throw InvalidInput("dilution scan needs grid >= 2 and log10-max > log10-min");
      }
      std::vector<double> scales(grid);
      for (int i = 0; i < grid; ++i) {
        scales[i] = std::pow(10.0, log_min + (log_max - log_min) * i / (grid - 1));
      }
      const auto curve = dilution_curve(f, scales);
      const PcMax peak = pc_max(f, log_min, log_max, grid);
      if (!dil_out.empty()) {
        std::ofstream out = OpenFile(dil_out);
        write_dilution_csv(out, curve);
      }
      json points = json::array();
      for (const DilutionPoint& p : curve) {
        points.push_back({{"scale", p.scale}, {"pc", p.pc}});
      }
      Emit({{"frame", to_json(f)}, {"max", to_json(peak)}, {"curve", points}});
    } else if (*thm_cmd) {
      try {
        Emit(to_json(theorem_sweep(configs, seed, threads)));
      } catch (const TheoremViolation& e) {
        Emit(to_json(e.report()));
        std::cerr << "error: " << e.what() << '\n';
        return kExitViolation;
      }
    } else if (*cal_cmd) {
      double d1, d2;
      if (cal_d) {
        if (cal_d1 || cal_d2) throw InvalidInput("use either --d or --d1/--d2");
        d1 = d2 = *cal_d;
      } else if (cal_d1 && cal_d2) {
        d1 = *cal_d1;
        d2 = *cal_d2;
      } else {
        throw InvalidInput("calibrate needs --d or both --d1 and --d2");
      }
      const CalibrationResult cal =
          calibration_study(d1, d2, psi0, lambda_grid, replicates, seed);
      const CoverageResult cov =
          coverage_study(d1, d2, psi0, cal_level, replicates, seed);
      Emit({{"d1", d1}, {"d2", d2}, {"psi0", psi0}, {"seed", seed},
            {"calibration", to_json(cal)}, {"coverage", to_json(cov)}});
    } else if (*syn_cmd) {
      const auto messages = synthesize_catalog(syn);
      if (syn_out.empty()) {
        write_catalog(std::cout, messages);
      } else {
        std::ofstream out = OpenFile(syn_out);
        write_catalog(out, messages);
      }
    }
  } catch (const PropertyViolation& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitViolation;
  } catch (const QuadratureFailure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitViolation;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitOk;
}
