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

#ifndef CONJUNCTION_REPORT_HPP_
#define CONJUNCTION_REPORT_HPP_

#include <iosfwd>
#include <span>
#include <string>

#include <nlohmann/json.hpp>

#include "conjunction/collision_probability.hpp"
#include "conjunction/experiments.hpp"
#include "conjunction/inference.hpp"
#include "conjunction/mc_oracle.hpp"

namespace conjunction {

// 17 significant digits; infinities print as "inf" / "-inf".
std::string format_number(double v);
// Scientific notation with 17 significant digits (keeps subnormals).
std::string format_probability(double p);

nlohmann::json to_json(const EncounterFrame& f);
nlohmann::json to_json(const ConfidenceInterval& ci);
nlohmann::json to_json(const RiskAssessment& a);
nlohmann::json to_json(const ConfusionTable& t);
nlohmann::json to_json(const TheoremReport& r);
nlohmann::json to_json(const CalibrationResult& c);
nlohmann::json to_json(const CoverageResult& c);
nlohmann::json to_json(const PcMax& m);
nlohmann::json to_json(const McEstimate& m);

// Columns: lead_time_h,psi_hat,log10_pc,log10_p_obs,pc,p_obs
void write_timeline_csv(std::ostream& out, std::span<const TimelineRow> rows);
// Columns: scale,log10_scale,pc
void write_dilution_csv(std::ostream& out,
                        std::span<const DilutionPoint> curve);

}  // namespace conjunction

#endif  // CONJUNCTION_REPORT_HPP_
