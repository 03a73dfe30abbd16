// Copyright 2026 The coil-link Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>

#include "coillink/link_model.hpp"
#include "coillink/lsk_analysis.hpp"
#include "coillink/transient_sim.hpp"

namespace coillink {

/// Everything a scenario file can configure. Defaults are the flat preset
/// plus the standard sweep and transient settings.
struct ScenarioBundle {
  LinkScenario scenario;
  MismatchSpec mismatch;
  SweepSpec sweep;
  TransientConfig transient;
};

ScenarioBundle default_bundle();

/// Parses `text` in the line-oriented `[section]` / `key = value` format.
/// Numeric values accept SI suffixes n, p, u, m, k, M. Unset keys keep their
/// defaults; unknown sections or keys are rejected with the line number.
/// Throws std::invalid_argument on parse or validation failure.
ScenarioBundle parse_scenario_text(const std::string& text);

/// parse_scenario_text over a file's contents. Throws std::invalid_argument
/// when the file cannot be read.
ScenarioBundle parse_scenario_file(const std::string& path);

/// Emits a complete scenario file that parses back to an identical bundle
/// (numbers at full double precision).
std::string serialize(const ScenarioBundle& bundle);

/// Parses one number with an optional SI suffix (n, p, u, m, k, M).
/// Throws std::invalid_argument on malformed input.
double parse_si_number(const std::string& text);

}  // namespace coillink
