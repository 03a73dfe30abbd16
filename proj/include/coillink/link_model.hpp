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

#include <complex>
#include <numbers>
#include <string>

namespace coillink {

using Complex = std::complex<double>;

// All internal math is in rad/s; files and CLI flags speak Hz.
inline double to_angular(double hertz) { return 2.0 * std::numbers::pi * hertz; }
inline double to_hertz(double omega) { return omega / (2.0 * std::numbers::pi); }

/// One physical coil: self-inductance and series loss resistance.
struct CoilParams {
  double inductance = 0.0;         // henries
  double series_resistance = 0.0;  // ohms
  std::string label;
};

/// Series-resonant primary tank and its drive source.
struct PrimaryTank {
  double c_s1 = 0.0;              // farads
  double source_amplitude = 0.0;  // volts, peak
  double drive_frequency = 0.0;   // hertz
};

/// Parallel-resonant secondary tank with the lumped implant load. c_p is the
/// parasitic capacitance contributed by the rectifier/OVP circuits; the tank
/// capacitance that matters is c2 = c_s2 + c_p.
struct SecondaryTank {
  double c_s2 = 0.0;    // farads
  double c_p = 0.0;     // farads, parasitic
  double r_load = 0.0;  // ohms
  double r_sw = 0.0;    // ohms, backscatter shunt
};

/// The full two-coil link. The mutual inductance is always derived from the
/// coupling coefficient, never stored.
struct LinkScenario {
  CoilParams primary_coil;
  CoilParams secondary_coil;
  PrimaryTank primary_tank;
  SecondaryTank secondary_tank;
  double coupling = 0.0;  // dimensionless k, 0 <= k < 1
};

/// Secondary load condition. Heavy is the backscatter state: the implant
/// shunts r_sw across r_load, so the tank sees r_load || r_sw.
enum class LoadState { Light, Heavy };

/// Derived link figures of merit at the drive frequency.
struct LinkDerived {
  double q1 = 0.0;                 // primary coil quality factor
  double q2 = 0.0;                 // secondary coil quality factor
  double alpha = 0.0;              // w0 * c2 * r_load
  double q_l = 0.0;                // w0 * l2 / r_load
  double mutual_inductance = 0.0;  // henries
};

/// Which capacitance enters alpha and the derived quantities when parasitics
/// exist: the effective tank capacitance c_s2 + c_p (default) or bare c_s2.
enum class SecondaryCapacitance { EffectiveC2, BareCs2 };

/// Reflected resistance approximation plus an advisory flag raised when the
/// output-filtering assumption (alpha >> 1) is weak, i.e. alpha < 10.
struct ReqApprox {
  double resistance = 0.0;  // ohms
  bool weak_filtering = false;
};

// Field validation. Throws std::invalid_argument naming the offending field.
void validate(const CoilParams& coil);
void validate(const PrimaryTank& tank);
void validate(const SecondaryTank& tank);
void validate(const LinkScenario& scenario);

double parallel_resistance(double a, double b);
double effective_load(const SecondaryTank& tank, LoadState load);
double secondary_capacitance(const SecondaryTank& tank,
                             SecondaryCapacitance mode = SecondaryCapacitance::EffectiveC2);

/// M = k * sqrt(l1 * l2). Domain error on negative inputs or k >= 1.
double mutual_inductance(double k, double l1, double l2);

/// Q = omega * l / r. Domain error on non-positive inputs.
double quality_factor(double omega, double inductance, double resistance);

/// Capacitance that resonates `inductance` at `omega` under the simplified
/// condition omega = 1/sqrt(L*C).
double designed_capacitance(double omega, double inductance);

/// Exact frequency (rad/s) at which the secondary branch impedance
/// r_s2 + jwL + (1/jwC || r_load) has zero imaginary part:
/// w0 = 1/sqrt(L*C) * sqrt(1 - L/(C*r_load^2)).
/// Domain error ("no real resonance") when c2 * r_load^2 <= l2.
double resonant_frequency_exact(double l2, double c2, double r_load);

/// Link power transfer efficiency
///   eta = k^2 Q1 Q2^2 / ((1 + Q2/alpha + k^2 Q1 Q2) (alpha + Q2)).
/// Always in [0, 1) and strictly increasing in k for fixed Q1, Q2, alpha.
double pte(double k, double q1, double q2, double alpha);

/// pte() evaluated on a scenario at its drive frequency with the light load.
double pte_of_scenario(const LinkScenario& scenario,
                       SecondaryCapacitance mode = SecondaryCapacitance::EffectiveC2);

LinkDerived derive_link(const LinkScenario& scenario,
                        SecondaryCapacitance mode = SecondaryCapacitance::EffectiveC2);

/// Primary resonator impedance z11 = r_s1 + jwL1 + 1/(jwC_s1).
Complex z11(double omega, const LinkScenario& scenario);

/// Reflected secondary impedance via the expanded rational form with the
/// effective tank capacitance c2 = c_s2 + c_p:
///
///   zeq = w^2 k^2 L1 L2 * (N_re + j*N_im) / D
///   N_re = r + r_s2 + w^2 c2^2 r^2 r_s2
///   N_im = -w (L2 - c2 r^2 + w^2 c2^2 L2 r^2)
///   D    = (r + r_s2)^2 + w^2 (L2^2 + r^2 c2 (r_s2^2 c2 - 2 L2))
///          + w^4 L2^2 c2^2 r^2
///
/// where r is the LoadState-effective load. Algebraically identical to
/// zeq_simplified when c_p = 0.
Complex zeq_rational(double omega, const LinkScenario& scenario, LoadState load);

/// Reflected secondary impedance by direct complex division,
/// zeq = w^2 M^2 / (r_s2 + jwL2 + (1/jwC_s2 || r)), ignoring c_p.
Complex zeq_simplified(double omega, const LinkScenario& scenario, LoadState load);

/// Real-valued reflected resistance approximation at the drive frequency,
///   req ~= w0^2 k^2 L1 L2 / ((1 + Q2 Ql) r_s2),  Ql = w0 L2 / r.
ReqApprox req_approx(const LinkScenario& scenario, LoadState load);

/// zpri = z11 + zeq (rational form).
Complex zpri(double omega, const LinkScenario& scenario, LoadState load);

/// Primary coil input current phasor i1 = v_s / zpri at the drive frequency.
/// Throws if |zpri| underflows.
Complex primary_current(const LinkScenario& scenario, LoadState load);

// Scenario presets. Coil values are the proposed coupled-coil parameters;
// tank capacitors are the designed values at 40.68 MHz, c_p = 0,
// r_load = 12.5 kOhm, r_sw = 500 Ohm, 1 V source.
LinkScenario flat_preset();    // L2 = 564 nH, k = 0.05
LinkScenario bended_preset();  // L2 = 562 nH, k = 0.042

}  // namespace coillink
