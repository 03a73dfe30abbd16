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

#include <cmath>
#include <cstring>
#include <stdexcept>

#include "coillink/lsk_analysis.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace coillink;
using coillink::testing::make_rng;
using coillink::testing::random_scenario;
using coillink::testing::uniform;

namespace {

constexpr double kDesignedCs1 = 1.7102332256751356e-11;

LinkScenario faulty_flat() {
  LinkScenario s = flat_preset();
  s.secondary_tank.c_p = 12e-12;
  return s;
}

}  // namespace

TEST_SUITE("lsk_analysis") {

TEST_CASE("mismatch application") {
  const LinkScenario base = flat_preset();
  CHECK(designed_c_s1(base) == doctest::Approx(kDesignedCs1).epsilon(1e-14));

  MismatchSpec mismatch;
  mismatch.c_p_override = 12e-12;
  mismatch.c_s1_relative_error = 0.01;
  const LinkScenario out = apply_mismatch(base, mismatch);
  CHECK(out.secondary_tank.c_p == 12e-12);
  CHECK(out.primary_tank.c_s1 ==
        doctest::Approx(kDesignedCs1 * 1.01).epsilon(1e-14));
  CHECK(base.secondary_tank.c_p == 0.0);

  MismatchSpec empty;
  const LinkScenario same = apply_mismatch(base, empty);
  CHECK(same.primary_tank.c_s1 == base.primary_tank.c_s1);
  CHECK(same.secondary_tank.c_p == base.secondary_tank.c_p);

  MismatchSpec bad;
  bad.c_p_override = -1e-12;
  CHECK_THROWS_AS(apply_mismatch(base, bad), std::invalid_argument);
  bad = MismatchSpec{};
  bad.c_s1_relative_error = 0.5;
  CHECK_THROWS_AS(apply_mismatch(base, bad), std::invalid_argument);
}

TEST_CASE("delta metrics vanish without coupling") {
  LinkScenario s = faulty_flat();
  s.coupling = 0.0;
  CHECK(delta_zpri(s) == Complex{0.0, 0.0});
  CHECK(delta_zpri_magnitude(s) == 0.0);
  CHECK(delta_i1(s) == 0.0);
}

TEST_CASE("matched link reflects more impedance at light load") {
  LinkScenario s = flat_preset();
  for (double k : {0.01, 0.05, 0.1, 0.2}) {
    s.coupling = k;
    CHECK(delta_zpri_magnitude(s) > 0.0);
    CHECK(delta_i1(s) < 0.0);
  }
}

TEST_CASE("parasitic mismatch inverts the sign at weak coupling") {
  LinkScenario s = faulty_flat();
  s.coupling = 0.03;
  CHECK(delta_zpri_magnitude(s) < 0.0);
  CHECK(delta_i1(s) == doctest::Approx(0.0516224699045158).epsilon(1e-12));

  s.coupling = 0.02;
  CHECK(delta_i1(s) == doctest::Approx(0.04478709961027838).epsilon(1e-12));

  s.coupling = 0.15;
  CHECK(delta_i1(s) == doctest::Approx(-0.00991636364252918).epsilon(1e-12));
}

TEST_CASE("sweep spec validation") {
  SweepSpec spec;
  CHECK_NOTHROW(validate(spec));
  spec.k_min = 0.0;
  CHECK_THROWS_AS(validate(spec), std::invalid_argument);
  spec = SweepSpec{};
  spec.k_max = 1.0;
  CHECK_THROWS_AS(validate(spec), std::invalid_argument);
  spec = SweepSpec{};
  spec.k_min = 0.3;
  spec.k_max = 0.2;
  CHECK_THROWS_AS(validate(spec), std::invalid_argument);
  spec = SweepSpec{};
  spec.points = 1;
  CHECK_THROWS_AS(validate(spec), std::invalid_argument);
  spec.k_max = spec.k_min;
  CHECK_NOTHROW(validate(spec));
}

TEST_CASE("sweep over a matched link never flips") {
  SweepSpec spec;
  spec.k_min = 0.01;
  spec.k_max = 0.2;
  spec.points = 100;
  const SweepResult result = sweep_coupling(flat_preset(), MismatchSpec{}, spec);
  REQUIRE(result.rows.size() == 100);
  for (size_t i = 0; i < result.rows.size(); ++i) {
    CHECK(result.rows[i].delta_i1 < 0.0);
    if (i) CHECK(result.rows[i].k > result.rows[i - 1].k);
  }
  CHECK(result.rows.front().k == doctest::Approx(0.01));
  CHECK(result.rows.back().k == doctest::Approx(0.2));
}

TEST_CASE("faulty sweep crosses zero exactly once near 0.05") {
  SweepSpec spec;
  MismatchSpec mismatch;
  mismatch.c_p_override = 12e-12;
  const SweepResult result = sweep_coupling(flat_preset(), mismatch, spec);
  int crossings = 0;
  double cross_lo = 0.0;
  double cross_hi = 0.0;
  for (size_t i = 1; i < result.rows.size(); ++i) {
    if ((result.rows[i - 1].delta_i1 > 0.0) != (result.rows[i].delta_i1 > 0.0)) {
      ++crossings;
      cross_lo = result.rows[i - 1].k;
      cross_hi = result.rows[i].k;
    }
  }
  CHECK(crossings == 1);
  CHECK(cross_lo < 0.05206438720080769);
  CHECK(cross_hi > 0.05206438720080769);
}

TEST_CASE("primary capacitor error moves the crossing to 0.09") {
  SweepSpec spec;
  MismatchSpec mismatch;
  mismatch.c_p_override = 12e-12;
  mismatch.c_s1_relative_error = 0.01;
  const SweepResult result = sweep_coupling(flat_preset(), mismatch, spec);
  int crossings = 0;
  double cross_at = 0.0;
  for (size_t i = 1; i < result.rows.size(); ++i) {
    if ((result.rows[i - 1].delta_i1 > 0.0) != (result.rows[i].delta_i1 > 0.0)) {
      ++crossings;
      cross_at = 0.5 * (result.rows[i - 1].k + result.rows[i].k);
    }
  }
  CHECK(crossings == 1);
  CHECK(cross_at == doctest::Approx(0.0865897922).epsilon(0.02));
}

TEST_CASE("sign coherence between impedance and current differences") {
  auto rng = make_rng(0x15CA11u);
  for (int trial = 0; trial < 200; ++trial) {
    LinkScenario s = random_scenario(rng, true);
    const double di = delta_i1(s);
    const double dz = delta_zpri_magnitude(s);
    if (di != 0.0 && dz != 0.0) {
      CHECK((di > 0.0) == (dz < 0.0));
    }
  }
}

TEST_CASE("sweep is deterministic") {
  SweepSpec spec;
  MismatchSpec mismatch;
  mismatch.c_p_override = 12e-12;
  const SweepResult a = sweep_coupling(flat_preset(), mismatch, spec);
  const SweepResult b = sweep_coupling(flat_preset(), mismatch, spec);
  REQUIRE(a.rows.size() == b.rows.size());
  CHECK(std::memcmp(a.rows.data(), b.rows.data(),
                    a.rows.size() * sizeof(SweepRow)) == 0);
}

TEST_CASE("flip threshold detection") {
  MismatchSpec none;
  CHECK_FALSE(flip_threshold(flat_preset(), none, KRange{0.01, 0.3}).has_value());

  MismatchSpec faulty;
  faulty.c_p_override = 12e-12;
  const auto designed = flip_threshold(flat_preset(), faulty, KRange{0.01, 0.2});
  REQUIRE(designed.has_value());
  CHECK(designed->k_star > 0.04);
  CHECK(designed->k_star < 0.06);
  CHECK(designed->k_star == doctest::Approx(0.05206438720080769).epsilon(1e-3));
  CHECK_FALSE(designed->multiple_crossings);

  MismatchSpec worse = faulty;
  worse.c_s1_relative_error = 0.01;
  const auto shifted = flip_threshold(flat_preset(), worse, KRange{0.01, 0.2});
  REQUIRE(shifted.has_value());
  CHECK(shifted->k_star > 0.08);
  CHECK(shifted->k_star < 0.10);
  CHECK(shifted->k_star == doctest::Approx(0.08658979225059737).epsilon(1e-3));
}

TEST_CASE("bisection brackets the sign change") {
  MismatchSpec faulty;
  faulty.c_p_override = 12e-12;
  const auto found = flip_threshold(flat_preset(), faulty, KRange{0.01, 0.2});
  REQUIRE(found.has_value());
  LinkScenario s = apply_mismatch(flat_preset(), faulty);
  s.coupling = found->k_star - 1e-5;
  const double below = delta_i1(s);
  s.coupling = found->k_star + 1e-5;
  const double above = delta_i1(s);
  CHECK(below * above < 0.0);
}

TEST_CASE("fixed 17.03 pF primary still flips at very weak coupling") {
  LinkScenario s = faulty_flat();
  s.primary_tank.c_s1 = 17.03e-12;
  const auto found = flip_threshold(s, MismatchSpec{}, KRange{0.01, 0.2});
  REQUIRE(found.has_value());
  CHECK(found->k_star == doctest::Approx(0.025634464958275205).epsilon(1e-3));
}

TEST_CASE("flip threshold argument validation") {
  CHECK_THROWS_AS(flip_threshold(flat_preset(), MismatchSpec{}, KRange{0.2, 0.1}),
                  std::invalid_argument);
  CHECK_THROWS_AS(flip_threshold(flat_preset(), MismatchSpec{}, KRange{0.0, 0.1}),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      flip_threshold(flat_preset(), MismatchSpec{}, KRange{0.01, 0.2}, 1),
      std::invalid_argument);
}

TEST_CASE("detune solver on an already healthy link") {
  const DetuneSolution sol =
      detune_solve(flat_preset(), MismatchSpec{}, KRange{0.01, 0.2}, 0.0);
  CHECK(sol.relative_detune < 0.0);
  CHECK(sol.relative_detune >= -5.5e-4);
  CHECK(sol.margin_achieved >= 0.0);
}

TEST_CASE("detune solver removes the parasitic flip") {
  MismatchSpec faulty;
  faulty.c_p_override = 12e-12;
  const KRange range{0.01, 0.2};
  const DetuneSolution sol = detune_solve(flat_preset(), faulty, range, 0.0);

  CHECK(sol.c_s1_solved < kDesignedCs1);
  CHECK(sol.c_s1_solved > 16.9e-12);
  CHECK(sol.c_s1_solved < 17.1e-12);
  CHECK(sol.c_s1_solved == doctest::Approx(1.701048196592234e-11).epsilon(1e-4));
  CHECK(sol.relative_detune < 0.0);
  CHECK(sol.margin_achieved >= 0.0);
  CHECK(sol.flip_free_range.k_min == range.k_min);
  CHECK(sol.flip_free_range.k_max == range.k_max);

  // Verification pass: the solved capacitor kills the flip.
  LinkScenario solved = apply_mismatch(flat_preset(), faulty);
  solved.primary_tank.c_s1 = sol.c_s1_solved;
  CHECK_FALSE(flip_threshold(solved, MismatchSpec{}, range).has_value());

  // Minimality: one grid step back toward zero re-introduces the flip.
  LinkScenario shallow = solved;
  shallow.primary_tank.c_s1 = kDesignedCs1 * (1.0 + sol.relative_detune + 5e-4);
  double worst = -1.0;
  for (int i = 0; i < 200; ++i) {
    shallow.coupling = range.k_min + (range.k_max - range.k_min) * i / 199.0;
    worst = std::max(worst, delta_i1(shallow));
  }
  CHECK(worst > 0.0);
}

TEST_CASE("detune solver supersedes a c_s1 error in the mismatch") {
  MismatchSpec faulty;
  faulty.c_p_override = 12e-12;
  MismatchSpec with_error = faulty;
  with_error.c_s1_relative_error = 0.01;
  const DetuneSolution a = detune_solve(flat_preset(), faulty, KRange{0.01, 0.2}, 0.0);
  const DetuneSolution b =
      detune_solve(flat_preset(), with_error, KRange{0.01, 0.2}, 0.0);
  CHECK(a.c_s1_solved == b.c_s1_solved);
  CHECK(a.relative_detune == b.relative_detune);
}

TEST_CASE("detune solver reports unsolvable margins") {
  MismatchSpec faulty;
  faulty.c_p_override = 12e-12;
  CHECK_THROWS_WITH_AS(
      detune_solve(flat_preset(), faulty, KRange{0.01, 0.2}, 10.0),
      doctest::Contains("unsolvable in search range"), std::runtime_error);
}

TEST_CASE("detune solver is deterministic") {
  MismatchSpec faulty;
  faulty.c_p_override = 12e-12;
  const DetuneSolution a = detune_solve(flat_preset(), faulty, KRange{0.01, 0.2}, 0.0);
  const DetuneSolution b = detune_solve(flat_preset(), faulty, KRange{0.01, 0.2}, 0.0);
  CHECK(a.c_s1_solved == b.c_s1_solved);
  CHECK(a.relative_detune == b.relative_detune);
  CHECK(a.margin_achieved == b.margin_achieved);
}

}  // TEST_SUITE
