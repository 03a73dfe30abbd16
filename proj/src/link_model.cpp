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

#include "coillink/link_model.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace coillink {

namespace {

void require(bool ok, const char* message) {
  if (!ok) throw std::invalid_argument(message);
}

}  // namespace

void validate(const CoilParams& coil) {
  require(std::isfinite(coil.inductance) && coil.inductance > 0.0,
          "coil inductance must be > 0");
  require(std::isfinite(coil.series_resistance) && coil.series_resistance > 0.0,
          "coil series_resistance must be > 0");
}

void validate(const PrimaryTank& tank) {
  require(std::isfinite(tank.c_s1) && tank.c_s1 > 0.0, "c_s1 must be > 0");
  require(std::isfinite(tank.source_amplitude) && tank.source_amplitude > 0.0,
          "source_amplitude must be > 0");
  require(std::isfinite(tank.drive_frequency) && tank.drive_frequency > 0.0,
          "drive_frequency must be > 0");
}

void validate(const SecondaryTank& tank) {
  require(std::isfinite(tank.c_s2) && tank.c_s2 > 0.0, "c_s2 must be > 0");
  require(std::isfinite(tank.c_p) && tank.c_p >= 0.0, "c_p must be >= 0");
  require(std::isfinite(tank.r_load) && tank.r_load > 0.0, "r_load must be > 0");
  require(std::isfinite(tank.r_sw) && tank.r_sw > 0.0, "r_sw must be > 0");
}

void validate(const LinkScenario& scenario) {
  validate(scenario.primary_coil);
  validate(scenario.secondary_coil);
  validate(scenario.primary_tank);
  validate(scenario.secondary_tank);
  require(std::isfinite(scenario.coupling) && scenario.coupling >= 0.0 &&
              scenario.coupling < 1.0,
          "coupling must be in [0, 1)");
}

double parallel_resistance(double a, double b) { return a * b / (a + b); }

double effective_load(const SecondaryTank& tank, LoadState load) {
  return load == LoadState::Light ? tank.r_load
                                  : parallel_resistance(tank.r_load, tank.r_sw);
}

double secondary_capacitance(const SecondaryTank& tank, SecondaryCapacitance mode) {
  return mode == SecondaryCapacitance::EffectiveC2 ? tank.c_s2 + tank.c_p
                                                   : tank.c_s2;
}

double mutual_inductance(double k, double l1, double l2) {
  if (k < 0.0 || k >= 1.0) throw std::domain_error("coupling k must be in [0, 1)");
  if (l1 <= 0.0 || l2 <= 0.0) throw std::domain_error("inductances must be > 0");
  return k * std::sqrt(l1 * l2);
}

double quality_factor(double omega, double inductance, double resistance) {
  if (omega <= 0.0 || inductance <= 0.0 || resistance <= 0.0)
    throw std::domain_error("quality_factor requires positive omega, L and R");
  return omega * inductance / resistance;
}

double designed_capacitance(double omega, double inductance) {
  if (omega <= 0.0 || inductance <= 0.0)
    throw std::domain_error("designed_capacitance requires positive omega and L");
  return 1.0 / (omega * omega * inductance);
}

double resonant_frequency_exact(double l2, double c2, double r_load) {
  if (l2 <= 0.0 || c2 <= 0.0 || r_load <= 0.0)
    throw std::domain_error("resonant_frequency_exact requires positive L, C, R");
  const double correction = 1.0 - l2 / (c2 * r_load * r_load);
  if (correction <= 0.0)
    throw std::domain_error("no real resonance: c2 * r_load^2 must exceed l2");
  return std::sqrt(correction / (l2 * c2));
}

double pte(double k, double q1, double q2, double alpha) {
  if (q1 <= 0.0 || q2 <= 0.0 || alpha <= 0.0)
    throw std::domain_error("pte requires positive Q1, Q2 and alpha");
  if (k < 0.0 || k >= 1.0) throw std::domain_error("coupling k must be in [0, 1)");
  const double kk = k * k;
  return kk * q1 * q2 * q2 /
         ((1.0 + q2 / alpha + kk * q1 * q2) * (alpha + q2));
}

double pte_of_scenario(const LinkScenario& scenario, SecondaryCapacitance mode) {
  const LinkDerived d = derive_link(scenario, mode);
  return pte(scenario.coupling, d.q1, d.q2, d.alpha);
}

LinkDerived derive_link(const LinkScenario& scenario, SecondaryCapacitance mode) {
  const double w0 = to_angular(scenario.primary_tank.drive_frequency);
  LinkDerived d;
  d.q1 = quality_factor(w0, scenario.primary_coil.inductance,
                        scenario.primary_coil.series_resistance);
  d.q2 = quality_factor(w0, scenario.secondary_coil.inductance,
                        scenario.secondary_coil.series_resistance);
  d.alpha = w0 * secondary_capacitance(scenario.secondary_tank, mode) *
            scenario.secondary_tank.r_load;
  d.q_l = w0 * scenario.secondary_coil.inductance / scenario.secondary_tank.r_load;
  d.mutual_inductance =
      mutual_inductance(scenario.coupling, scenario.primary_coil.inductance,
                        scenario.secondary_coil.inductance);
  return d;
}

Complex z11(double omega, const LinkScenario& scenario) {
  const double reactance = omega * scenario.primary_coil.inductance -
                           1.0 / (omega * scenario.primary_tank.c_s1);
  return {scenario.primary_coil.series_resistance, reactance};
}

Complex zeq_rational(double omega, const LinkScenario& scenario, LoadState load) {
  const double l1 = scenario.primary_coil.inductance;
  const double l2 = scenario.secondary_coil.inductance;
  const double rs2 = scenario.secondary_coil.series_resistance;
  const double c2 = secondary_capacitance(scenario.secondary_tank);
  const double r = effective_load(scenario.secondary_tank, load);
  const double w2 = omega * omega;
  const double k = scenario.coupling;

  const double num_re = r + rs2 + w2 * c2 * c2 * r * r * rs2;
  const double num_im = -omega * (l2 - c2 * r * r + w2 * c2 * c2 * l2 * r * r);
  const double den = (r + rs2) * (r + rs2) +
                     w2 * (l2 * l2 + r * r * c2 * (rs2 * rs2 * c2 - 2.0 * l2)) +
                     w2 * w2 * l2 * l2 * c2 * c2 * r * r;
  const double scale = w2 * (k * k) * l1 * l2 / den;
  return {scale * num_re, scale * num_im};
}

Complex zeq_simplified(double omega, const LinkScenario& scenario, LoadState load) {
  const double m = mutual_inductance(scenario.coupling,
                                     scenario.primary_coil.inductance,
                                     scenario.secondary_coil.inductance);
  const double r = effective_load(scenario.secondary_tank, load);
  const Complex zc{0.0, -1.0 / (omega * scenario.secondary_tank.c_s2)};
  const Complex zpar = zc * r / (zc + r);
  const Complex branch =
      Complex{scenario.secondary_coil.series_resistance,
              omega * scenario.secondary_coil.inductance} +
      zpar;
  return omega * omega * m * m / branch;
}

ReqApprox req_approx(const LinkScenario& scenario, LoadState load) {
  const double w0 = to_angular(scenario.primary_tank.drive_frequency);
  const double l1 = scenario.primary_coil.inductance;
  const double l2 = scenario.secondary_coil.inductance;
  const double rs2 = scenario.secondary_coil.series_resistance;
  const double r = effective_load(scenario.secondary_tank, load);
  const double q2 = quality_factor(w0, l2, rs2);
  const double q_l = w0 * l2 / r;
  const double alpha = w0 * scenario.secondary_tank.c_s2 * r;
  const double k = scenario.coupling;
  ReqApprox out;
  out.resistance = w0 * w0 * (k * k) * l1 * l2 / ((1.0 + q2 * q_l) * rs2);
  out.weak_filtering = alpha < 10.0;
  return out;
}

Complex zpri(double omega, const LinkScenario& scenario, LoadState load) {
  return z11(omega, scenario) + zeq_rational(omega, scenario, load);
}

Complex primary_current(const LinkScenario& scenario, LoadState load) {
  const double omega = to_angular(scenario.primary_tank.drive_frequency);
  const Complex z = zpri(omega, scenario, load);
  if (std::abs(z) < std::numeric_limits<double>::min())
    throw std::runtime_error("degenerate primary impedance: |zpri| underflows");
  return scenario.primary_tank.source_amplitude / z;
}

namespace {

constexpr double kDesignFrequency = 40.68e6;  // Hz

LinkScenario make_preset(double l2, double k, const char* secondary_label) {
  const double w0 = to_angular(kDesignFrequency);
  LinkScenario s;
  s.primary_coil = {895e-9, 1.114, "primary"};
  s.secondary_coil = {l2, 2.333, secondary_label};
  s.primary_tank = {designed_capacitance(w0, s.primary_coil.inductance), 1.0,
                    kDesignFrequency};
  s.secondary_tank = {designed_capacitance(w0, l2), 0.0, 12.5e3, 500.0};
  s.coupling = k;
  return s;
}

}  // namespace

LinkScenario flat_preset() { return make_preset(564e-9, 0.05, "secondary-flat"); }

LinkScenario bended_preset() { return make_preset(562e-9, 0.042, "secondary-bended"); }

}  // namespace coillink
