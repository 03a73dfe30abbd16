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

#include "coillink/transient_sim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace coillink {

namespace {

using Mat4 = std::array<std::array<double, 4>, 4>;

Mat4 identity() {
  Mat4 m{};
  for (int i = 0; i < 4; ++i) m[i][i] = 1.0;
  return m;
}

// Gauss-Jordan inverse with partial pivoting; the matrices here are small
// and far from singular (trapezoidal lhs of a passive network).
Mat4 invert(Mat4 m) {
  Mat4 inv = identity();
  for (int col = 0; col < 4; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 4; ++r) {
      if (std::abs(m[r][col]) > std::abs(m[pivot][col])) pivot = r;
    }
    if (m[pivot][col] == 0.0) throw std::runtime_error("singular system matrix");
    std::swap(m[col], m[pivot]);
    std::swap(inv[col], inv[pivot]);
    const double scale = 1.0 / m[col][col];
    for (int c = 0; c < 4; ++c) {
      m[col][c] *= scale;
      inv[col][c] *= scale;
    }
    for (int r = 0; r < 4; ++r) {
      if (r == col) continue;
      const double f = m[r][col];
      if (f == 0.0) continue;
      for (int c = 0; c < 4; ++c) {
        m[r][c] -= f * m[col][c];
        inv[r][c] -= f * inv[col][c];
      }
    }
  }
  return inv;
}

StateVector mat_vec(const Mat4& m, const StateVector& v) {
  StateVector out{};
  for (int r = 0; r < 4; ++r) {
    out[r] = m[r][0] * v[0] + m[r][1] * v[1] + m[r][2] * v[2] + m[r][3] * v[3];
  }
  return out;
}

}  // namespace

void validate(const LinkScenario& scenario, const TransientConfig& config) {
  validate(scenario);
  const double carrier_period = 1.0 / scenario.primary_tank.drive_frequency;
  if (!(config.time_step > 0.0) || !std::isfinite(config.time_step)) {
    throw std::invalid_argument("time_step must be > 0");
  }
  if (config.time_step > carrier_period / 100.0) {
    throw std::invalid_argument("time_step must be <= carrier_period / 100");
  }
  if (!(config.bit_period > 0.0) || !std::isfinite(config.bit_period)) {
    throw std::invalid_argument("bit_period must be > 0");
  }
  if (!(config.settle_time >= 0.0) || !std::isfinite(config.settle_time)) {
    throw std::invalid_argument("settle_time must be >= 0");
  }
  if (config.sw_pattern.empty()) {
    throw std::invalid_argument("sw_pattern must not be empty");
  }
  for (uint8_t bit : config.sw_pattern) {
    if (bit > 1) throw std::invalid_argument("sw_pattern bits must be 0 or 1");
  }
  const double needed = config.settle_time +
                        config.bit_period * static_cast<double>(config.sw_pattern.size());
  if (!(config.duration >= needed * (1.0 - 1e-12)) || !std::isfinite(config.duration)) {
    throw std::invalid_argument("duration must cover settle_time + bit_period * pattern length");
  }
}

StateSpace build_state_space(const LinkScenario& scenario, LoadState load) {
  validate(scenario);
  const double l1 = scenario.primary_coil.inductance;
  const double l2 = scenario.secondary_coil.inductance;
  const double k = scenario.coupling;
  if (k >= 1.0) throw std::domain_error("singular inductance matrix: k >= 1");
  const double m = k * std::sqrt(l1 * l2);
  const double det = l1 * l2 - m * m;

  // Inverse of [[l1, m], [m, l2]].
  const double li11 = l2 / det;
  const double li12 = -m / det;
  const double li22 = l1 / det;

  const double rs1 = scenario.primary_coil.series_resistance;
  const double rs2 = scenario.secondary_coil.series_resistance;
  const double c_s1 = scenario.primary_tank.c_s1;
  const double c2 = secondary_capacitance(scenario.secondary_tank);
  const double r_eff = effective_load(scenario.secondary_tank, load);

  StateSpace ss;
  // Loop equations solved for the current derivatives.
  ss.a[0] = {-li11 * rs1, -li12 * rs2, -li11, -li12};
  ss.a[1] = {-li12 * rs1, -li22 * rs2, -li12, -li22};
  ss.a[2] = {1.0 / c_s1, 0.0, 0.0, 0.0};
  ss.a[3] = {0.0, 1.0 / c2, 0.0, -1.0 / (r_eff * c2)};
  ss.b = {li11, li12, 0.0, 0.0};
  return ss;
}

CoupledRlcSimulator::CoupledRlcSimulator(const LinkScenario& scenario, double time_step)
    : h_(time_step) {
  if (!(time_step > 0.0) || !std::isfinite(time_step)) {
    throw std::invalid_argument("time_step must be > 0");
  }
  const StateSpace light = build_state_space(scenario, LoadState::Light);
  const StateSpace heavy = build_state_space(scenario, LoadState::Heavy);
  b_ = light.b;
  light_ = discretize(light);
  heavy_ = discretize(heavy);
}

CoupledRlcSimulator::Discretized CoupledRlcSimulator::discretize(const StateSpace& ss) const {
  Discretized d;
  d.a = ss.a;
  Mat4 lhs = identity();
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) lhs[r][c] -= 0.5 * h_ * ss.a[r][c];
  }
  d.inv_lhs = invert(lhs);
  return d;
}

void CoupledRlcSimulator::set_load(LoadState load) { load_ = load; }

void CoupledRlcSimulator::step(double vs_begin, double vs_end) {
  const Discretized& d = load_ == LoadState::Light ? light_ : heavy_;
  const StateVector ay = mat_vec(d.a, state_);
  const double h2 = 0.5 * h_;
  StateVector rhs;
  for (int i = 0; i < 4; ++i) {
    rhs[i] = state_[i] + h2 * ay[i] + h2 * b_[i] * (vs_begin + vs_end);
  }
  state_ = mat_vec(d.inv_lhs, rhs);
}

namespace {

// Instability watchdog: per-carrier-period peaks of each state, compared
// against the median of the peaks seen so far.
class PeakWatchdog {
 public:
  void accumulate(const StateVector& y) {
    for (int i = 0; i < 4; ++i) {
      period_peak_[i] = std::max(period_peak_[i], std::abs(y[i]));
    }
  }

  void close_period() {
    for (int i = 0; i < 4; ++i) {
      if (!std::isfinite(period_peak_[i])) {
        throw std::runtime_error("transient instability: non-finite state; reduce time_step");
      }
      if (history_[i].size() >= 4) {
        std::vector<double> scratch = history_[i];
        const size_t mid = scratch.size() / 2;
        std::nth_element(scratch.begin(), scratch.begin() + mid, scratch.end());
        const double median = scratch[mid];
        if (median > 0.0 && period_peak_[i] > 1e6 * median) {
          throw std::runtime_error("transient instability: state exceeded 1e6x its running median; reduce time_step");
        }
      }
      history_[i].push_back(period_peak_[i]);
      period_peak_[i] = 0.0;
    }
  }

 private:
  std::array<double, 4> period_peak_{};
  std::array<std::vector<double>, 4> history_;
};

}  // namespace

Trace simulate(const LinkScenario& scenario, const TransientConfig& config) {
  validate(scenario, config);
  const double f = scenario.primary_tank.drive_frequency;
  const double amplitude = scenario.primary_tank.source_amplitude;
  const double h = config.time_step;
  const double two_pi_f = 2.0 * std::numbers::pi * f;
  const size_t n_steps = static_cast<size_t>(std::ceil(config.duration / h - 1e-9));
  const size_t pattern_len = config.sw_pattern.size();

  const auto sw_at = [&](double t) -> uint8_t {
    if (t < config.settle_time) return 0;
    const auto bit = static_cast<size_t>((t - config.settle_time) / config.bit_period);
    return config.sw_pattern[std::min(bit, pattern_len - 1)];
  };

  CoupledRlcSimulator sim(scenario, h);
  Trace trace;
  trace.t.reserve(n_steps + 1);
  trace.i1.reserve(n_steps + 1);
  trace.i2.reserve(n_steps + 1);
  trace.v_c1.reserve(n_steps + 1);
  trace.v_c2.reserve(n_steps + 1);
  trace.sw.reserve(n_steps + 1);

  PeakWatchdog watchdog;
  const double carrier_period = 1.0 / f;
  size_t period_index = 0;

  const auto record = [&](double t, uint8_t sw) {
    const StateVector& y = sim.state();
    trace.t.push_back(t);
    trace.i1.push_back(y[0]);
    trace.i2.push_back(y[1]);
    trace.v_c1.push_back(y[2]);
    trace.v_c2.push_back(y[3]);
    trace.sw.push_back(sw);
    watchdog.accumulate(y);
    const auto period = static_cast<size_t>(t / carrier_period);
    if (period > period_index) {
      watchdog.close_period();
      period_index = period;
    }
  };

  record(0.0, sw_at(0.0));
  for (size_t n = 0; n < n_steps; ++n) {
    const double t_begin = static_cast<double>(n) * h;
    const double t_end = static_cast<double>(n + 1) * h;
    const uint8_t sw = sw_at(t_begin);
    sim.set_load(sw ? LoadState::Heavy : LoadState::Light);
    sim.step(amplitude * std::sin(two_pi_f * t_begin),
             amplitude * std::sin(two_pi_f * t_end));
    record(t_end, sw_at(t_end));
  }

  trace.envelope = envelope(trace, f);
  return trace;
}

EnvelopeSeries envelope(const Trace& trace, double carrier_frequency) {
  if (!(carrier_frequency > 0.0)) {
    throw std::invalid_argument("carrier_frequency must be > 0");
  }
  if (trace.t.size() < 2) {
    throw std::runtime_error("insufficient data: trace spans fewer than 2 carrier periods");
  }
  const double period = 1.0 / carrier_frequency;
  const double span = trace.t.back() - trace.t.front();
  if (span < 2.0 * period) {
    throw std::runtime_error("insufficient data: trace spans fewer than 2 carrier periods");
  }

  EnvelopeSeries env;
  const double t0 = trace.t.front();
  size_t bucket = 0;
  double peak = 0.0;
  bool seen = false;
  for (size_t i = 0; i < trace.t.size(); ++i) {
    const auto b = static_cast<size_t>((trace.t[i] - t0) / period);
    if (b != bucket) {
      if (seen) {
        env.t.push_back(t0 + (static_cast<double>(bucket) + 0.5) * period);
        env.i1_peak.push_back(peak);
      }
      bucket = b;
      peak = 0.0;
      seen = false;
    }
    peak = std::max(peak, std::abs(trace.i1[i]));
    seen = true;
  }
  // The trailing partial period is dropped; only complete periods count.
  return env;
}

DecodeResult decode_lsk(const EnvelopeSeries& env, const TransientConfig& config) {
  if (config.sw_pattern.empty()) {
    throw std::invalid_argument("sw_pattern must not be empty");
  }
  if (env.t.empty()) {
    throw std::runtime_error("insufficient data: empty envelope");
  }

  const size_t bits = config.sw_pattern.size();
  DecodeResult result;
  result.per_bit_envelope_means.resize(bits, 0.0);
  std::vector<size_t> counts(bits, 0);
  for (size_t i = 0; i < env.t.size(); ++i) {
    const double rel = env.t[i] - config.settle_time;
    if (rel < 0.0) continue;
    const auto bit = static_cast<size_t>(rel / config.bit_period);
    if (bit >= bits) break;
    result.per_bit_envelope_means[bit] += env.i1_peak[i];
    ++counts[bit];
  }
  for (size_t b = 0; b < bits; ++b) {
    if (counts[b] == 0) {
      throw std::runtime_error("insufficient data: no envelope samples in bit window");
    }
    result.per_bit_envelope_means[b] /= static_cast<double>(counts[b]);
  }

  const auto [min_it, max_it] = std::minmax_element(
      result.per_bit_envelope_means.begin(), result.per_bit_envelope_means.end());
  const double swing = *max_it - *min_it;
  double mean = 0.0;
  for (double v : result.per_bit_envelope_means) mean += v;
  mean /= static_cast<double>(bits);
  if (!(mean > 0.0) || swing < 0.01 * mean) {
    throw std::runtime_error("indeterminate: envelope swing below 1% of its mean, no modulation detected");
  }
  result.threshold = (*max_it + *min_it) / 2.0;

  result.bits.resize(bits);
  bool matches_pattern = true;
  bool matches_complement = true;
  for (size_t b = 0; b < bits; ++b) {
    result.bits[b] = result.per_bit_envelope_means[b] > result.threshold ? 1 : 0;
    if (result.bits[b] != config.sw_pattern[b]) matches_pattern = false;
    if (result.bits[b] != (config.sw_pattern[b] ^ 1)) matches_complement = false;
  }
  if (matches_pattern) {
    result.polarity_flipped = false;
  } else if (matches_complement) {
    result.polarity_flipped = true;
  } else {
    throw std::runtime_error("indeterminate: decoded bits match neither sw_pattern nor its complement");
  }
  return result;
}

double stored_energy(const LinkScenario& scenario, const StateVector& y) {
  const double l1 = scenario.primary_coil.inductance;
  const double l2 = scenario.secondary_coil.inductance;
  const double m =
      scenario.coupling * std::sqrt(l1 * l2);
  const double c_s1 = scenario.primary_tank.c_s1;
  const double c2 = secondary_capacitance(scenario.secondary_tank);
  return 0.5 * (l1 * y[0] * y[0] + 2.0 * m * y[0] * y[1] + l2 * y[1] * y[1]) +
         0.5 * c_s1 * y[2] * y[2] + 0.5 * c2 * y[3] * y[3];
}

std::vector<uint8_t> parse_bit_pattern(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("bit pattern must not be empty");
  std::vector<uint8_t> bits;
  bits.reserve(text.size());
  for (char c : text) {
    if (c == '0') {
      bits.push_back(0);
    } else if (c == '1') {
      bits.push_back(1);
    } else {
      throw std::invalid_argument("bit pattern may contain only '0' and '1'");
    }
  }
  return bits;
}

TransientConfig default_transient_config(const LinkScenario& scenario,
                                         std::vector<uint8_t> sw_pattern) {
  TransientConfig config;
  const double carrier_period = 1.0 / scenario.primary_tank.drive_frequency;
  config.time_step = carrier_period / 200.0;
  config.bit_period = 5e-6;
  config.settle_time = 20e-6;
  config.sw_pattern = std::move(sw_pattern);
  config.duration = config.settle_time +
                    config.bit_period * static_cast<double>(config.sw_pattern.size());
  return config;
}

}  // namespace coillink
