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

#include "coillink/cli.hpp"

#include <unistd.h>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "coillink/link_model.hpp"
#include "coillink/lsk_analysis.hpp"
#include "coillink/result_table.hpp"
#include "coillink/scenario_io.hpp"
#include "coillink/svg_chart.hpp"
#include "coillink/transient_sim.hpp"

namespace coillink {

namespace {

struct Options {
  std::string scenario_path;
  std::string preset;
  std::string cp;
  std::optional<double> cs1_error_pct;
  std::string k;
  std::string out_path;
  bool svg = false;
};

struct ChartData {
  std::string title;
  std::string x_label;
  std::vector<double> x;
  std::vector<ChartSeries> series;
};

struct CommandOutput {
  ResultTable table;
  std::optional<ChartData> chart;
};

void add_common_options(CLI::App* cmd, Options& opt) {
  cmd->add_option("--scenario", opt.scenario_path,
                  "Scenario file ([section] key = value, SI suffixes)");
  cmd->add_option("--preset", opt.preset, "Built-in scenario preset")
      ->check(CLI::IsMember({"flat", "bended"}));
  cmd->add_option("--cp", opt.cp,
                  "Parasitic capacitance override, farads (SI suffixes ok)");
  cmd->add_option("--cs1-error", opt.cs1_error_pct,
                  "Primary capacitor error in percent of the designed value");
  cmd->add_option("--k", opt.k, "Coupling VALUE or sweep range MIN:MAX[:POINTS]");
  cmd->add_option("--out", opt.out_path, "Write CSV to this path");
  cmd->add_flag("--svg", opt.svg, "Also write an SVG chart next to --out");
}

[[noreturn]] void usage_error(const std::string& message) {
  throw CLI::ValidationError("usage", message);
}

// Applies --k / sweep-range and mismatch flags on top of the parsed bundle.
void apply_flags(const Options& opt, ScenarioBundle& bundle) {
  if (!opt.cp.empty()) {
    bundle.mismatch.c_p_override = parse_si_number(opt.cp);
  }
  if (opt.cs1_error_pct) {
    bundle.mismatch.c_s1_relative_error = *opt.cs1_error_pct / 100.0;
  }
  if (!opt.k.empty()) {
    const size_t colon = opt.k.find(':');
    if (colon == std::string::npos) {
      bundle.scenario.coupling = parse_si_number(opt.k);
    } else {
      const size_t colon2 = opt.k.find(':', colon + 1);
      bundle.sweep.k_min = parse_si_number(opt.k.substr(0, colon));
      if (colon2 == std::string::npos) {
        bundle.sweep.k_max = parse_si_number(opt.k.substr(colon + 1));
      } else {
        bundle.sweep.k_max = parse_si_number(opt.k.substr(colon + 1, colon2 - colon - 1));
        const double points = parse_si_number(opt.k.substr(colon2 + 1));
        if (points < 1.0 || points != static_cast<int>(points)) {
          throw std::invalid_argument("--k POINTS must be a positive integer");
        }
        bundle.sweep.points = static_cast<int>(points);
      }
    }
  }
  validate(bundle.scenario);
  validate(bundle.mismatch);
  validate(bundle.sweep);
}

ScenarioBundle load_bundle(const Options& opt) {
  ScenarioBundle bundle;
  if (!opt.scenario_path.empty()) {
    bundle = parse_scenario_file(opt.scenario_path);
  } else {
    bundle = default_bundle();
    if (opt.preset == "bended") {
      bundle.scenario = bended_preset();
      bundle.transient = default_transient_config(bundle.scenario,
                                                  bundle.transient.sw_pattern);
    }
  }
  apply_flags(opt, bundle);
  return bundle;
}

std::string complex_cell(double v) { return format_double(v); }

CommandOutput cmd_pte(const Options& opt) {
  std::vector<std::pair<std::string, ScenarioBundle>> cases;
  if (opt.scenario_path.empty() && opt.preset.empty()) {
    Options flat = opt;
    flat.preset = "flat";
    Options bended = opt;
    bended.preset = "bended";
    cases.emplace_back("flat", load_bundle(flat));
    cases.emplace_back("bended", load_bundle(bended));
  } else {
    const std::string label = opt.scenario_path.empty() ? opt.preset : "scenario";
    cases.emplace_back(label, load_bundle(opt));
  }

  CommandOutput out;
  out.table.header = {"label", "coupling", "q1", "q2", "alpha", "q_l", "pte"};
  for (auto& [label, bundle] : cases) {
    const LinkScenario scenario = apply_mismatch(bundle.scenario, bundle.mismatch);
    const LinkDerived d = derive_link(scenario);
    const double eta = pte_of_scenario(scenario);
    out.table.rows.push_back({label, format_double(scenario.coupling),
                              format_double(d.q1), format_double(d.q2),
                              format_double(d.alpha), format_double(d.q_l),
                              format_double(eta)});
  }
  return out;
}

CommandOutput cmd_impedance(const Options& opt) {
  const ScenarioBundle bundle = load_bundle(opt);
  const LinkScenario scenario = apply_mismatch(bundle.scenario, bundle.mismatch);
  const double w = to_angular(scenario.primary_tank.drive_frequency);

  CommandOutput out;
  out.table.header = {"frequency", "load",    "z11_re", "z11_im",
                      "zeq_re",    "zeq_im",  "zpri_re", "zpri_im",
                      "i1_magnitude"};
  for (LoadState load : {LoadState::Light, LoadState::Heavy}) {
    const Complex z1 = z11(w, scenario);
    const Complex zeq = zeq_rational(w, scenario, load);
    const Complex zp = zpri(w, scenario, load);
    const Complex i1 = primary_current(scenario, load);
    out.table.rows.push_back({format_double(scenario.primary_tank.drive_frequency),
                              load == LoadState::Light ? "light" : "heavy",
                              complex_cell(z1.real()), complex_cell(z1.imag()),
                              complex_cell(zeq.real()), complex_cell(zeq.imag()),
                              complex_cell(zp.real()), complex_cell(zp.imag()),
                              format_double(std::abs(i1))});
  }
  return out;
}

CommandOutput cmd_sweep_k(const Options& opt) {
  const ScenarioBundle bundle = load_bundle(opt);
  const SweepResult sweep = sweep_coupling(bundle.scenario, bundle.mismatch, bundle.sweep);

  CommandOutput out;
  out.table.header = {"k", "delta_zpri_re", "delta_zpri_im", "delta_zpri_magnitude",
                      "delta_i1"};
  ChartData chart;
  chart.title = "LSK sweep";
  chart.x_label = "k";
  chart.series = {{"delta_zpri_magnitude", {}}, {"delta_i1", {}}};
  for (const SweepRow& row : sweep.rows) {
    out.table.rows.push_back({format_double(row.k), complex_cell(row.delta_zpri.real()),
                              complex_cell(row.delta_zpri.imag()),
                              format_double(row.delta_zpri_magnitude),
                              format_double(row.delta_i1)});
    chart.x.push_back(row.k);
    chart.series[0].y.push_back(row.delta_zpri_magnitude);
    chart.series[1].y.push_back(row.delta_i1);
  }
  out.chart = std::move(chart);
  return out;
}

CommandOutput cmd_flip_threshold(const Options& opt) {
  const ScenarioBundle bundle = load_bundle(opt);
  const KRange range{bundle.sweep.k_min, bundle.sweep.k_max};
  const auto result = flip_threshold(bundle.scenario, bundle.mismatch, range,
                                     std::max(bundle.sweep.points, 2));

  CommandOutput out;
  out.table.header = {"status", "k_star", "multiple_crossings", "k_min", "k_max"};
  if (result) {
    out.table.rows.push_back({"flip", format_double(result->k_star),
                              result->multiple_crossings ? "true" : "false",
                              format_double(range.k_min), format_double(range.k_max)});
  } else {
    out.table.rows.push_back({"no flip", "", "false", format_double(range.k_min),
                              format_double(range.k_max)});
  }
  return out;
}

CommandOutput cmd_detune(const Options& opt) {
  const ScenarioBundle bundle = load_bundle(opt);
  const KRange range{bundle.sweep.k_min, bundle.sweep.k_max};
  const DetuneSolution solution =
      detune_solve(bundle.scenario, bundle.mismatch, range, 0.0,
                   std::max(bundle.sweep.points, 2));

  CommandOutput out;
  out.table.header = {"c_s1_solved", "relative_detune", "k_min", "k_max",
                      "margin_achieved"};
  out.table.rows.push_back({format_double(solution.c_s1_solved),
                            format_double(solution.relative_detune),
                            format_double(solution.flip_free_range.k_min),
                            format_double(solution.flip_free_range.k_max),
                            format_double(solution.margin_achieved)});
  return out;
}

CommandOutput cmd_transient(const Options& opt) {
  const ScenarioBundle bundle = load_bundle(opt);
  const LinkScenario scenario = apply_mismatch(bundle.scenario, bundle.mismatch);
  const Trace trace = simulate(scenario, bundle.transient);

  CommandOutput out;
  out.table.header = {"t", "i1", "i2", "v_c1", "v_c2", "sw"};
  out.table.rows.reserve(trace.t.size());
  for (size_t i = 0; i < trace.t.size(); ++i) {
    out.table.rows.push_back({format_double(trace.t[i]), format_double(trace.i1[i]),
                              format_double(trace.i2[i]), format_double(trace.v_c1[i]),
                              format_double(trace.v_c2[i]),
                              trace.sw[i] ? "1" : "0"});
  }
  ChartData chart;
  chart.title = "i1 envelope";
  chart.x_label = "t (s)";
  chart.x = trace.envelope.t;
  chart.series = {{"i1_peak", trace.envelope.i1_peak}};
  out.chart = std::move(chart);
  return out;
}

CommandOutput cmd_decode(const Options& opt) {
  const ScenarioBundle bundle = load_bundle(opt);
  const LinkScenario scenario = apply_mismatch(bundle.scenario, bundle.mismatch);
  const Trace trace = simulate(scenario, bundle.transient);
  const DecodeResult decoded = decode_lsk(trace.envelope, bundle.transient);

  CommandOutput out;
  out.table.header = {"bit_index", "sw_bit", "decoded_bit", "envelope_mean",
                      "threshold", "polarity_flipped"};
  ChartData chart;
  chart.title = "per-bit envelope means";
  chart.x_label = "bit index";
  chart.series = {{"envelope_mean", {}}, {"threshold", {}}};
  for (size_t b = 0; b < decoded.bits.size(); ++b) {
    out.table.rows.push_back(
        {format_double(static_cast<double>(b)),
         bundle.transient.sw_pattern[b] ? "1" : "0", decoded.bits[b] ? "1" : "0",
         format_double(decoded.per_bit_envelope_means[b]),
         format_double(decoded.threshold),
         decoded.polarity_flipped ? "true" : "false"});
    chart.x.push_back(static_cast<double>(b));
    chart.series[0].y.push_back(decoded.per_bit_envelope_means[b]);
    chart.series[1].y.push_back(decoded.threshold);
  }
  if (chart.x.size() >= 2) out.chart = std::move(chart);
  return out;
}

std::string svg_path_for(const std::string& out_path) {
  const size_t slash = out_path.find_last_of('/');
  const size_t dot = out_path.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) {
    return out_path + ".svg";
  }
  return out_path.substr(0, dot) + ".svg";
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open output file '" + path + "'");
  file << content;
  if (!file) throw std::runtime_error("failed writing output file '" + path + "'");
}

void emit(const CommandOutput& result, const Options& opt, std::ostream& out) {
  if (opt.out_path.empty()) {
    out << to_text(result.table);
    return;
  }
  write_file(opt.out_path, to_csv(result.table));
  if (opt.svg) {
    if (!result.chart) {
      throw std::invalid_argument("this subcommand has no chartable series for --svg");
    }
    const ChartData& c = *result.chart;
    write_file(svg_path_for(opt.out_path),
               render_svg_chart(c.title, c.x_label, c.x, c.series));
  }
}

bool color_enabled(const std::ostream& err) {
  return &err == &std::cerr && std::getenv("NO_COLOR") == nullptr &&
         isatty(2) != 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"coil-link: series-parallel resonant inductive link simulator"};
  app.require_subcommand(1);

  Options opt;
  CLI::App* c_pte = app.add_subcommand("pte", "Power transfer efficiency table");
  CLI::App* c_imp = app.add_subcommand("impedance",
                                       "Z11 / Zeq / Zpri at the drive frequency");
  CLI::App* c_sweep = app.add_subcommand("sweep-k",
                                         "Delta Zpri and delta I1 versus coupling");
  CLI::App* c_flip = app.add_subcommand("flip-threshold",
                                        "Coupling at which delta I1 changes sign");
  CLI::App* c_detune = app.add_subcommand("detune",
                                          "Solve the primary detune that removes the flip");
  CLI::App* c_trans = app.add_subcommand("transient", "Time-domain trace CSV");
  CLI::App* c_decode = app.add_subcommand("decode",
                                          "Simulate and decode the LSK uplink");
  for (CLI::App* cmd :
       {c_pte, c_imp, c_sweep, c_flip, c_detune, c_trans, c_decode}) {
    add_common_options(cmd, opt);
  }

  std::vector<std::string> argv_storage;
  argv_storage.reserve(args.size() + 1);
  argv_storage.push_back("coil-link");
  for (const std::string& a : args) argv_storage.push_back(a);
  std::vector<char*> argv;
  argv.reserve(argv_storage.size());
  for (std::string& a : argv_storage) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  const std::string error_prefix =
      color_enabled(err) ? "\033[31merror:\033[0m " : "error: ";
  try {
    if (!opt.scenario_path.empty() && !opt.preset.empty()) {
      usage_error("--scenario and --preset are mutually exclusive");
    }
    if (opt.svg && opt.out_path.empty()) {
      usage_error("--svg requires --out");
    }

    CommandOutput result;
    if (c_pte->parsed()) {
      result = cmd_pte(opt);
    } else if (c_imp->parsed()) {
      result = cmd_impedance(opt);
    } else if (c_sweep->parsed()) {
      result = cmd_sweep_k(opt);
    } else if (c_flip->parsed()) {
      result = cmd_flip_threshold(opt);
    } else if (c_detune->parsed()) {
      result = cmd_detune(opt);
    } else if (c_trans->parsed()) {
      result = cmd_transient(opt);
    } else {
      result = cmd_decode(opt);
    }
    emit(result, opt, out);
    return 0;
  } catch (const CLI::ValidationError& e) {
    err << error_prefix << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    err << error_prefix << e.what() << '\n';
    return 2;
  } catch (const std::domain_error& e) {
    err << error_prefix << e.what() << '\n';
    return 2;
  } catch (const std::runtime_error& e) {
    err << error_prefix << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    err << error_prefix << e.what() << '\n';
    return 3;
  }
}

}  // namespace coillink
