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

#include <random>

#include "coillink/link_model.hpp"

namespace coillink::testing {

inline std::mt19937_64 make_rng(uint64_t seed = 0xC011D15Cull) {
  return std::mt19937_64{seed};
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// Physically plausible random link: coils in the hundreds of nH, tanks in
// the tens of pF, loads in the kilo-ohm range, drive a few tens of MHz.
// r_load/r_sw floors keep the exact parallel resonance real for both load
// states.
inline LinkScenario random_scenario(std::mt19937_64& rng, bool with_parasitic) {
  LinkScenario s;
  s.primary_coil = {uniform(rng, 200e-9, 1.5e-6), uniform(rng, 0.2, 10.0), "p"};
  s.secondary_coil = {uniform(rng, 200e-9, 1.5e-6), uniform(rng, 0.2, 10.0), "s"};
  s.primary_tank.drive_frequency = uniform(rng, 5e6, 60e6);
  s.primary_tank.source_amplitude = 1.0;
  s.primary_tank.c_s1 = designed_capacitance(
      to_angular(s.primary_tank.drive_frequency), s.primary_coil.inductance);
  s.secondary_tank.c_s2 = uniform(rng, 5e-12, 60e-12);
  s.secondary_tank.c_p = with_parasitic ? uniform(rng, 0.0, 15e-12) : 0.0;
  s.secondary_tank.r_load = uniform(rng, 2e3, 20e3);
  s.secondary_tank.r_sw = uniform(rng, 1.5e3, 10e3);
  s.coupling = uniform(rng, 0.001, 0.49);
  return s;
}

}  // namespace coillink::testing
