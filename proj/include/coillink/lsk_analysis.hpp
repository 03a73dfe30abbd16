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

#include <optional>
#include <vector>

#include "coillink/link_model.hpp"

namespace coillink {

/// Abscissa of a coupling sweep.
struct SweepSpec {
  enum class Scale { Linear, Log };
  double k_min = 0.01;
  double k_max = 0.2;
  int points = 200;
  Scale scale = Scale::Linear;
};

struct SweepRow {
  double k = 0.0;
  Complex delta_zpri;                  // zpri(light) - zpri(heavy), ohms
  double delta_zpri_magnitude = 0.0;   // |zpri_light| - |zpri_heavy|, ohms
  double delta_i1 = 0.0;               // |i1_light| - |i1_heavy|, amperes
};

struct SweepResult {
  std::vector<SweepRow> rows;  // ascending k
};

/// Component deviations layered onto a scenario before analysis. Unset
/// fields leave the scenario untouched; c_s1_relative_error is applied to
/// the designed capacitance (+0.01 = 1% above designed).
struct MismatchSpec {
  std::optional<double> c_p_override;         // farads, >= 0
  std::optional<double> c_s1_relative_error;  // dimensionless, |e| < 0.5
};

struct KRange {
  double k_min = 0.0;
  double k_max = 0.0;
};

struct FlipThreshold {
  double k_star = 0.0;
  bool multiple_crossings = false;  // k_star is the smallest when true
};

struct DetuneSolution {
  double c_s1_solved = 0.0;      // farads
  double relative_detune = 0.0;  // < 0: below the designed value
  KRange flip_free_range;
  double margin_achieved = 0.0;  // amperes, worst case over the range
};

void validate(const SweepSpec& spec);
void validate(const MismatchSpec& mismatch);

/// Designed c_s1 for a scenario: resonates the primary coil at the drive
/// frequency under the simplified condition.
double designed_c_s1(const LinkScenario& scenario);

/// Returns a copy of the scenario with the mismatch applied.
LinkScenario apply_mismatch(const LinkScenario& scenario, const MismatchSpec& mismatch);

/// Change in the primary impedance when backscattering releases the shunt:
/// zpri(light) - zpri(heavy) at the drive frequency.
Complex delta_zpri(const LinkScenario& scenario);

/// |zpri_light| - |zpri_heavy|, the scalar plotted against coupling.
double delta_zpri_magnitude(const LinkScenario& scenario);

/// |i1_light| - |i1_heavy|. Negative is the healthy LSK polarity (heavy load
/// raises the primary current); positive means the uplink bit is inverted.
double delta_i1(const LinkScenario& scenario);

/// Evaluates delta_zpri and delta_i1 across the coupling sweep. Deterministic;
/// rows come back sorted ascending in k.
SweepResult sweep_coupling(const LinkScenario& scenario_template,
                           const MismatchSpec& mismatch, const SweepSpec& spec);

/// Smallest coupling at which delta_i1 changes sign inside the range, found
/// by bracketing on `samples` points and bisecting to |dk| < 1e-5. Returns
/// nullopt when the sign never changes; multiple_crossings flags extra
/// brackets beyond the first.
std::optional<FlipThreshold> flip_threshold(const LinkScenario& scenario_template,
                                            const MismatchSpec& mismatch,
                                            KRange k_range, int samples = 200);

/// Searches relative detunes of c_s1 in [-5%, 0), on a 0.05% grid with
/// bisection refinement, for the smallest |detune| such that
/// delta_i1(k) <= -margin at every sampled k in the range. c_s1 is driven
/// from the designed value; any c_s1_relative_error in `mismatch` is
/// superseded by the solve. Throws when no detune in range suffices.
DetuneSolution detune_solve(const LinkScenario& scenario_template,
                            const MismatchSpec& mismatch, KRange k_range,
                            double margin_amperes, int samples = 200);

}  // namespace coillink
