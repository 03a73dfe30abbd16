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

#include "coillink/scenario_io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace coillink {

namespace {

std::string trim(const std::string& s) {
  size_t begin = 0;
  size_t end = s.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
  return s.substr(begin, end - begin);
}

[[noreturn]] void fail(int line, const std::string& message) {
  throw std::invalid_argument("scenario line " + std::to_string(line) + ": " + message);
}

struct SiSuffix {
  int exponent;
  double multiplier;
};

bool lookup_si_suffix(char suffix, SiSuffix& out) {
  switch (suffix) {
    case 'n': out = {-9, 1e-9}; return true;
    case 'p': out = {-12, 1e-12}; return true;
    case 'u': out = {-6, 1e-6}; return true;
    case 'm': out = {-3, 1e-3}; return true;
    case 'k': out = {3, 1e3}; return true;
    case 'M': out = {6, 1e6}; return true;
    default: return false;
  }
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Marks which defaults get recomputed from the rest of the bundle when the
// file does not pin them.
struct Presence {
  bool time_step = false;
  bool duration = false;
};

}  // namespace

double parse_si_number(const std::string& text) {
  const std::string value = trim(text);
  if (value.empty()) throw std::invalid_argument("empty number");
  const char* begin = value.c_str();
  char* end = nullptr;
  const double base = std::strtod(begin, &end);
  if (end == begin) throw std::invalid_argument("malformed number '" + value + "'");
  if (*end == '\0') {
    if (!std::isfinite(base)) throw std::invalid_argument("non-finite number '" + value + "'");
    return base;
  }
  SiSuffix suffix{};
  if (!lookup_si_suffix(*end, suffix) || *(end + 1) != '\0') {
    throw std::invalid_argument("malformed number '" + value +
                                "' (allowed SI suffixes: n p u m k M)");
  }
  // Splice the suffix in as a decimal exponent so "5u" and "5e-6" parse to
  // the same bits; fall back to multiplication for exotic mantissas.
  const std::string numeric(begin, static_cast<size_t>(end - begin));
  double scaled = 0.0;
  if (numeric.find_first_not_of("0123456789.+-") == std::string::npos) {
    scaled = std::strtod((numeric + 'e' + std::to_string(suffix.exponent)).c_str(),
                         nullptr);
  } else {
    scaled = base * suffix.multiplier;
  }
  if (!std::isfinite(scaled)) throw std::invalid_argument("non-finite number '" + value + "'");
  return scaled;
}

ScenarioBundle default_bundle() {
  ScenarioBundle bundle;
  bundle.scenario = flat_preset();
  bundle.sweep = SweepSpec{};
  bundle.transient = default_transient_config(bundle.scenario, {1, 0, 1, 0});
  return bundle;
}

ScenarioBundle parse_scenario_text(const std::string& text) {
  ScenarioBundle bundle = default_bundle();
  Presence present;

  std::istringstream stream(text);
  std::string raw;
  std::string section;
  int line_no = 0;
  while (std::getline(stream, raw)) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;

    if (line.front() == '[') {
      if (line.back() != ']') fail(line_no, "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "primary_coil" && section != "secondary_coil" &&
          section != "primary_tank" && section != "secondary_tank" &&
          section != "link" && section != "mismatch" && section != "sweep" &&
          section != "transient") {
        fail(line_no, "unknown section [" + section + "]");
      }
      continue;
    }

    const size_t eq = line.find('=');
    if (eq == std::string::npos) fail(line_no, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) fail(line_no, "empty key");
    if (section.empty()) fail(line_no, "key '" + key + "' appears before any [section]");

    const auto num = [&]() {
      try {
        return parse_si_number(value);
      } catch (const std::invalid_argument& e) {
        fail(line_no, std::string(e.what()) + " for key '" + key + "'");
      }
    };
    const auto integer = [&]() {
      const double v = num();
      const double r = std::round(v);
      if (std::abs(v - r) > 1e-9 || std::abs(r) > 1e9) {
        fail(line_no, "key '" + key + "' expects an integer");
      }
      return static_cast<int>(r);
    };

    if (section == "primary_coil" || section == "secondary_coil") {
      CoilParams& coil = section == "primary_coil" ? bundle.scenario.primary_coil
                                                   : bundle.scenario.secondary_coil;
      if (key == "inductance") {
        coil.inductance = num();
      } else if (key == "series_resistance") {
        coil.series_resistance = num();
      } else if (key == "label") {
        coil.label = value;
      } else {
        fail(line_no, "unknown key '" + key + "' in [" + section + "]");
      }
    } else if (section == "primary_tank") {
      if (key == "c_s1") {
        bundle.scenario.primary_tank.c_s1 = num();
      } else if (key == "source_amplitude") {
        bundle.scenario.primary_tank.source_amplitude = num();
      } else if (key == "drive_frequency") {
        bundle.scenario.primary_tank.drive_frequency = num();
      } else {
        fail(line_no, "unknown key '" + key + "' in [primary_tank]");
      }
    } else if (section == "secondary_tank") {
      if (key == "c_s2") {
        bundle.scenario.secondary_tank.c_s2 = num();
      } else if (key == "c_p") {
        bundle.scenario.secondary_tank.c_p = num();
      } else if (key == "r_load") {
        bundle.scenario.secondary_tank.r_load = num();
      } else if (key == "r_sw") {
        bundle.scenario.secondary_tank.r_sw = num();
      } else {
        fail(line_no, "unknown key '" + key + "' in [secondary_tank]");
      }
    } else if (section == "link") {
      if (key == "coupling") {
        bundle.scenario.coupling = num();
      } else {
        fail(line_no, "unknown key '" + key + "' in [link]");
      }
    } else if (section == "mismatch") {
      if (key == "c_p_override") {
        bundle.mismatch.c_p_override = num();
      } else if (key == "c_s1_relative_error") {
        bundle.mismatch.c_s1_relative_error = num();
      } else {
        fail(line_no, "unknown key '" + key + "' in [mismatch]");
      }
    } else if (section == "sweep") {
      if (key == "k_min") {
        bundle.sweep.k_min = num();
      } else if (key == "k_max") {
        bundle.sweep.k_max = num();
      } else if (key == "points") {
        bundle.sweep.points = integer();
      } else if (key == "scale") {
        if (value == "linear") {
          bundle.sweep.scale = SweepSpec::Scale::Linear;
        } else if (value == "log") {
          bundle.sweep.scale = SweepSpec::Scale::Log;
        } else {
          fail(line_no, "key 'scale' expects linear or log");
        }
      } else {
        fail(line_no, "unknown key '" + key + "' in [sweep]");
      }
    } else if (section == "transient") {
      if (key == "time_step") {
        bundle.transient.time_step = num();
        present.time_step = true;
      } else if (key == "duration") {
        bundle.transient.duration = num();
        present.duration = true;
      } else if (key == "bit_period") {
        bundle.transient.bit_period = num();
      } else if (key == "settle_time") {
        bundle.transient.settle_time = num();
      } else if (key == "sw_pattern") {
        try {
          bundle.transient.sw_pattern = parse_bit_pattern(value);
        } catch (const std::invalid_argument& e) {
          fail(line_no, e.what());
        }
      } else {
        fail(line_no, "unknown key '" + key + "' in [transient]");
      }
    }
  }

  if (!present.time_step) {
    bundle.transient.time_step =
        1.0 / bundle.scenario.primary_tank.drive_frequency / 200.0;
  }
  if (!present.duration) {
    bundle.transient.duration =
        bundle.transient.settle_time +
        bundle.transient.bit_period *
            static_cast<double>(bundle.transient.sw_pattern.size());
  }

  validate(bundle.scenario);
  validate(bundle.mismatch);
  validate(bundle.sweep);
  validate(bundle.scenario, bundle.transient);
  return bundle;
}

ScenarioBundle parse_scenario_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot read scenario file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario_text(buffer.str());
}

std::string serialize(const ScenarioBundle& bundle) {
  std::ostringstream out;
  const auto coil = [&](const char* name, const CoilParams& c) {
    out << '[' << name << "]\n";
    out << "inductance = " << fmt(c.inductance) << '\n';
    out << "series_resistance = " << fmt(c.series_resistance) << '\n';
    out << "label = " << c.label << '\n';
    out << '\n';
  };
  coil("primary_coil", bundle.scenario.primary_coil);
  coil("secondary_coil", bundle.scenario.secondary_coil);

  out << "[primary_tank]\n";
  out << "c_s1 = " << fmt(bundle.scenario.primary_tank.c_s1) << '\n';
  out << "source_amplitude = " << fmt(bundle.scenario.primary_tank.source_amplitude) << '\n';
  out << "drive_frequency = " << fmt(bundle.scenario.primary_tank.drive_frequency) << '\n';
  out << '\n';

  out << "[secondary_tank]\n";
  out << "c_s2 = " << fmt(bundle.scenario.secondary_tank.c_s2) << '\n';
  out << "c_p = " << fmt(bundle.scenario.secondary_tank.c_p) << '\n';
  out << "r_load = " << fmt(bundle.scenario.secondary_tank.r_load) << '\n';
  out << "r_sw = " << fmt(bundle.scenario.secondary_tank.r_sw) << '\n';
  out << '\n';

  out << "[link]\n";
  out << "coupling = " << fmt(bundle.scenario.coupling) << '\n';
  out << '\n';

  out << "[mismatch]\n";
  if (bundle.mismatch.c_p_override) {
    out << "c_p_override = " << fmt(*bundle.mismatch.c_p_override) << '\n';
  }
  if (bundle.mismatch.c_s1_relative_error) {
    out << "c_s1_relative_error = " << fmt(*bundle.mismatch.c_s1_relative_error) << '\n';
  }
  out << '\n';

  out << "[sweep]\n";
  out << "k_min = " << fmt(bundle.sweep.k_min) << '\n';
  out << "k_max = " << fmt(bundle.sweep.k_max) << '\n';
  out << "points = " << bundle.sweep.points << '\n';
  out << "scale = " << (bundle.sweep.scale == SweepSpec::Scale::Log ? "log" : "linear")
      << '\n';
  out << '\n';

  out << "[transient]\n";
  out << "time_step = " << fmt(bundle.transient.time_step) << '\n';
  out << "duration = " << fmt(bundle.transient.duration) << '\n';
  out << "bit_period = " << fmt(bundle.transient.bit_period) << '\n';
  out << "settle_time = " << fmt(bundle.transient.settle_time) << '\n';
  out << "sw_pattern = ";
  for (uint8_t bit : bundle.transient.sw_pattern) out << (bit ? '1' : '0');
  out << '\n';
  return out.str();
}

}  // namespace coillink
