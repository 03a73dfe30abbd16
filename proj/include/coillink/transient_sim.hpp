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

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "coillink/link_model.hpp"

namespace coillink {

/// Switched time-domain run: the shunt follows sw_pattern (active high =
/// Heavy) at bit_period spacing once settle_time has elapsed.
struct TransientConfig {
  double time_step = 0.0;    // seconds
  double duration = 0.0;     // seconds
  double bit_period = 0.0;   // seconds
  std::vector<uint8_t> sw_pattern;
  double settle_time = 0.0;  // seconds, ignored prefix before decoding
};

/// Per-carrier-period peak magnitude of i1, stamped at period centers.
struct EnvelopeSeries {
  std::vector<double> t;        // seconds
  std::vector<double> i1_peak;  // amperes
};

/// Columnar, uniformly sampled waveforms plus the derived i1 envelope.
struct Trace {
  std::vector<double> t;     // seconds
  std::vector<double> i1;    // amperes
  std::vector<double> i2;    // amperes
  std::vector<double> v_c1;  // volts
  std::vector<double> v_c2;  // volts
  std::vector<uint8_t> sw;   // bit driving the shunt at each sample
  EnvelopeSeries envelope;
};

struct DecodeResult {
  std::vector<uint8_t> bits;
  bool polarity_flipped = false;
  double threshold = 0.0;  // amperes
  std::vector<double> per_bit_envelope_means;
};

/// Linear state equations dy/dt = a*y + b*vs with y = (i1, i2, v_c1, v_c2):
///   primary loop    vs = r_s1*i1 + v_c1 + l1*di1/dt + m*di2/dt
///   secondary loop   0 = r_s2*i2 + v_c2 + l2*di2/dt + m*di1/dt
///   c_s1*dv_c1/dt = i1
///   c2*dv_c2/dt   = i2 - v_c2/r_eff        (c2 = c_s2 + c_p)
struct StateSpace {
  std::array<std::array<double, 4>, 4> a{};
  std::array<double, 4> b{};  // per volt of source
};

using StateVector = std::array<double, 4>;

void validate(const LinkScenario& scenario, const TransientConfig& config);

/// Builds the 4-state system for one load condition. Throws on k >= 1
/// (singular inductance matrix).
StateSpace build_state_space(const LinkScenario& scenario, LoadState load);

/// Fixed-step trapezoidal integrator over the two load conditions. The load
/// in force during a step is the one at the step's start time.
class CoupledRlcSimulator {
 public:
  CoupledRlcSimulator(const LinkScenario& scenario, double time_step);

  void set_load(LoadState load);
  LoadState load() const { return load_; }
  void set_state(const StateVector& y) { state_ = y; }
  const StateVector& state() const { return state_; }
  double time_step() const { return h_; }

  /// Advances one step given the source voltage at the step ends.
  void step(double vs_begin, double vs_end);

 private:
  struct Discretized {
    std::array<std::array<double, 4>, 4> a;        // continuous-time a
    std::array<std::array<double, 4>, 4> inv_lhs;  // (I - h/2 a)^-1
  };

  Discretized discretize(const StateSpace& ss) const;

  double h_;
  std::array<double, 4> b_{};
  Discretized light_;
  Discretized heavy_;
  LoadState load_ = LoadState::Light;
  StateVector state_{};
};

/// Runs the switched simulation from a zero initial state with source
/// v_s(t) = amplitude * sin(2*pi*f*t). The load is Light until settle_time,
/// then follows sw_pattern. Throws std::invalid_argument when the config
/// invariants fail and std::runtime_error when the integration blows up
/// (any state's per-period peak exceeding 1e6x its running median).
Trace simulate(const LinkScenario& scenario, const TransientConfig& config);

/// Per-carrier-period peak of |i1|. Requires the trace to span at least two
/// full periods; throws std::runtime_error otherwise.
EnvelopeSeries envelope(const Trace& trace, double carrier_frequency);

/// Slices the envelope into bit windows after settle_time, thresholds the
/// per-bit means at the midpoint of their extremes, and compares the decoded
/// bits against sw_pattern and its complement. Throws std::runtime_error
/// ("indeterminate") when the envelope swing is below 1% of its mean or the
/// bits match neither pattern.
DecodeResult decode_lsk(const EnvelopeSeries& env, const TransientConfig& config);

/// Total stored energy of a state: 1/2 i^T L i + 1/2 c_s1 v_c1^2
/// + 1/2 c2 v_c2^2, with L the full inductance matrix including M.
double stored_energy(const LinkScenario& scenario, const StateVector& y);

/// Parses a string of '0'/'1' characters. Throws std::invalid_argument on
/// anything else or on an empty string.
std::vector<uint8_t> parse_bit_pattern(const std::string& text);

/// Defaults: step = carrier period / 200, bit period 5 us, settle 20 us,
/// duration = settle + bits * bit period.
TransientConfig default_transient_config(const LinkScenario& scenario,
                                         std::vector<uint8_t> sw_pattern);

}  // namespace coillink
