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

#include "coillink/lsk_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace coillink {

namespace {

constexpr double kBisectTol = 1e-5;        // coupling units
constexpr double kDetuneGrid = 5e-4;       // relative detune grid step
constexpr double kDetuneFloor = -0.05;     // search floor, relative

double sweep_point(const SweepSpec& spec, int i) {
  if (spec.points == 1) return spec.k_min;
  const double t = static_cast<double>(i) / (spec.points - 1);
  if (spec.scale == SweepSpec::Scale::Log) {
    return spec.k_min * std::pow(spec.k_max / spec.k_min, t);
  }
  return spec.k_min + (spec.k_max - spec.k_min) * t;
}

}  // namespace

void validate(const SweepSpec& spec) {
  if (!(spec.k_min > 0.0) || !(spec.k_min < 1.0)) {
    throw std::invalid_argument("sweep k_min must lie in (0, 1)");
  }
  if (!(spec.k_max > 0.0) || !(spec.k_max < 1.0)) {
    throw std::invalid_argument("sweep k_max must lie in (0, 1)");
  }
  if (!(spec.k_min <= spec.k_max)) {
    throw std::invalid_argument("sweep k_min must not exceed k_max");
  }
  if (spec.points < 2 && !(spec.points == 1 && spec.k_min == spec.k_max)) {
    throw std::invalid_argument("sweep needs at least 2 points");
  }
}

void validate(const MismatchSpec& mismatch) {
  if (mismatch.c_p_override && !(*mismatch.c_p_override >= 0.0)) {
    throw std::invalid_argument("mismatch c_p override must be >= 0");
  }
  if (mismatch.c_s1_relative_error &&
      !(std::abs(*mismatch.c_s1_relative_error) < 0.5)) {
    throw std::invalid_argument("mismatch c_s1 relative error must satisfy |e| < 0.5");
  }
}

double designed_c_s1(const LinkScenario& scenario) {
  const double w = to_angular(scenario.primary_tank.drive_frequency);
  return designed_capacitance(w, scenario.primary_coil.inductance);
}

LinkScenario apply_mismatch(const LinkScenario& scenario, const MismatchSpec& mismatch) {
  validate(mismatch);
  LinkScenario out = scenario;
  if (mismatch.c_p_override) {
    out.secondary_tank.c_p = *mismatch.c_p_override;
  }
  if (mismatch.c_s1_relative_error) {
    out.primary_tank.c_s1 = designed_c_s1(scenario) * (1.0 + *mismatch.c_s1_relative_error);
  }
  return out;
}

Complex delta_zpri(const LinkScenario& scenario) {
  const double w = to_angular(scenario.primary_tank.drive_frequency);
  return zpri(w, scenario, LoadState::Light) - zpri(w, scenario, LoadState::Heavy);
}

double delta_zpri_magnitude(const LinkScenario& scenario) {
  const double w = to_angular(scenario.primary_tank.drive_frequency);
  return std::abs(zpri(w, scenario, LoadState::Light)) -
         std::abs(zpri(w, scenario, LoadState::Heavy));
}

double delta_i1(const LinkScenario& scenario) {
  return std::abs(primary_current(scenario, LoadState::Light)) -
         std::abs(primary_current(scenario, LoadState::Heavy));
}

SweepResult sweep_coupling(const LinkScenario& scenario_template,
                           const MismatchSpec& mismatch, const SweepSpec& spec) {
  validate(spec);
  LinkScenario scenario = apply_mismatch(scenario_template, mismatch);
  SweepResult result;
  result.rows.reserve(static_cast<size_t>(spec.points));
  for (int i = 0; i < spec.points; ++i) {
    scenario.coupling = sweep_point(spec, i);
    validate(scenario);
    SweepRow row;
    row.k = scenario.coupling;
    row.delta_zpri = delta_zpri(scenario);
    row.delta_zpri_magnitude = delta_zpri_magnitude(scenario);
    row.delta_i1 = delta_i1(scenario);
    result.rows.push_back(row);
  }
  return result;
}

namespace {

double delta_i1_at(LinkScenario& scenario, double k) {
  scenario.coupling = k;
  return delta_i1(scenario);
}

// Bisects delta_i1 to a sign change inside [lo, hi]; f(lo) and f(hi) have
// opposite signs on entry.
double bisect_crossing(LinkScenario& scenario, double lo, double hi, double f_lo) {
  while (hi - lo > kBisectTol) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = delta_i1_at(scenario, mid);
    if (f_mid == 0.0) return mid;
    if ((f_lo > 0.0) == (f_mid > 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::optional<FlipThreshold> flip_threshold(const LinkScenario& scenario_template,
                                            const MismatchSpec& mismatch,
                                            KRange k_range, int samples) {
  if (!(k_range.k_min > 0.0) || !(k_range.k_max < 1.0) ||
      !(k_range.k_min < k_range.k_max)) {
    throw std::invalid_argument("flip_threshold k range must satisfy 0 < k_min < k_max < 1");
  }
  if (samples < 2) {
    throw std::invalid_argument("flip_threshold needs at least 2 samples");
  }
  LinkScenario scenario = apply_mismatch(scenario_template, mismatch);
  scenario.coupling = k_range.k_min;
  validate(scenario);

  const double step = (k_range.k_max - k_range.k_min) / (samples - 1);
  double prev_k = k_range.k_min;
  double prev_f = delta_i1_at(scenario, prev_k);
  std::optional<FlipThreshold> found;
  for (int i = 1; i < samples; ++i) {
    const double k = k_range.k_min + step * i;
    const double f = delta_i1_at(scenario, k);
    const bool crossed = (prev_f > 0.0) != (f > 0.0) || prev_f == 0.0 || f == 0.0;
    if (crossed) {
      if (!found) {
        FlipThreshold t;
        t.k_star = bisect_crossing(scenario, prev_k, k, prev_f);
        found = t;
      } else {
        found->multiple_crossings = true;
        break;
      }
    }
    prev_k = k;
    prev_f = f;
  }
  return found;
}

namespace {

// Worst (largest) delta_i1 across the sampled coupling range, with c_s1 set
// to designed * (1 + detune).
double worst_delta_i1(LinkScenario& scenario, double c_s1_designed, double detune,
                      KRange k_range, int samples) {
  scenario.primary_tank.c_s1 = c_s1_designed * (1.0 + detune);
  const double step = (k_range.k_max - k_range.k_min) / (samples - 1);
  double worst = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    const double k = k_range.k_min + step * i;
    worst = std::max(worst, delta_i1_at(scenario, k));
  }
  return worst;
}

}  // namespace

DetuneSolution detune_solve(const LinkScenario& scenario_template,
                            const MismatchSpec& mismatch, KRange k_range,
                            double margin_amperes, int samples) {
  if (!(k_range.k_min > 0.0) || !(k_range.k_max < 1.0) ||
      !(k_range.k_min < k_range.k_max)) {
    throw std::invalid_argument("detune_solve k range must satisfy 0 < k_min < k_max < 1");
  }
  if (!(margin_amperes >= 0.0)) {
    throw std::invalid_argument("detune_solve margin must be >= 0");
  }
  if (samples < 2) {
    throw std::invalid_argument("detune_solve needs at least 2 samples");
  }
  samples = std::max(samples, 200);

  // The solver drives c_s1 itself; a c_s1 error in the mismatch would be
  // overwritten, so only the c_p override participates.
  MismatchSpec effective = mismatch;
  effective.c_s1_relative_error.reset();
  LinkScenario scenario = apply_mismatch(scenario_template, effective);
  scenario.coupling = k_range.k_min;
  validate(scenario);
  const double c_s1_designed = designed_c_s1(scenario_template);

  const auto passes = [&](double detune) {
    return worst_delta_i1(scenario, c_s1_designed, detune, k_range, samples) <=
           -margin_amperes;
  };

  const int grid_count = static_cast<int>(std::floor(-kDetuneFloor / kDetuneGrid + 0.5));
  int pass_index = -1;
  for (int i = 0; i <= grid_count; ++i) {
    if (passes(-kDetuneGrid * i)) {
      pass_index = i;
      break;
    }
  }
  if (pass_index < 0) {
    throw std::runtime_error("detune_solve: no detune in [-5%, 0] meets the margin; unsolvable in search range");
  }

  double detune = -kDetuneGrid * pass_index;
  if (pass_index > 0) {
    // Refine against the failing neighbour on the shallow side, keeping the
    // returned detune on the passing side.
    double fail = -kDetuneGrid * (pass_index - 1);
    double pass = detune;
    while (fail - pass > kDetuneGrid * 1e-3) {
      const double mid = 0.5 * (fail + pass);
      if (passes(mid)) {
        pass = mid;
      } else {
        fail = mid;
      }
    }
    detune = pass;
  } else {
    // Already healthy at the designed value; report one grid step of margin
    // so the caller still gets a strictly detuned capacitor.
    detune = -kDetuneGrid;
    if (!passes(detune)) {
      detune = 0.0;
    }
  }

  DetuneSolution solution;
  solution.c_s1_solved = c_s1_designed * (1.0 + detune);
  solution.relative_detune = detune;
  solution.flip_free_range = k_range;
  solution.margin_achieved =
      -worst_delta_i1(scenario, c_s1_designed, detune, k_range, samples);
  return solution;
}

}  // namespace coillink
