// Copyright 2026 The qsw Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "qsw/scenario.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidationError = 1;
constexpr int kExitRuntimeError = 2;
constexpr int kExitUsageError = 64;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw qsw::ScenarioError(qsw::ScenarioErrorCategory::kSyntax, "cannot read file " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

struct CliOptions {
  std::string file;
  double tolerance = 1e-10;
  bool tolerance_set = false;
  int precision = 6;
  bool precision_set = false;
  std::string format = "human";
};

qsw::ScenarioDocument load(const CliOptions& opts) {
  qsw::SettingsOverrides overrides;
  if (opts.tolerance_set) overrides.tolerance = opts.tolerance;
  if (opts.precision_set) overrides.output_precision = opts.precision;
  return qsw::parse_scenario(read_file(opts.file), overrides);
}

int run_validate(const CliOptions& opts) {
  const qsw::ScenarioDocument doc = load(opts);
  std::cout << "OK: " << opts.file << " (" << doc.states.size() << " states, "
            << doc.channels.size() << " channels, " << doc.observables.size() << " observables, "
            << doc.pipeline.size() << " steps)\n";
  return kExitOk;
}

int run_run(const CliOptions& opts) {
  const qsw::ScenarioDocument doc = load(opts);
  const qsw::Report report = qsw::run_pipeline(doc);
  const auto mode = opts.format == "machine" ? qsw::ReportMode::kMachine : qsw::ReportMode::kHuman;
  std::cout << qsw::format_report(report, mode);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qsw - quantum signal workbench: run declarative scenarios of states,"
               " channels and measurements"};
  app.require_subcommand(1);

  CliOptions opts;

  CLI::App* validate = app.add_subcommand("validate", "Parse and validate a scenario file");
  validate->add_option("file", opts.file, "scenario JSON file")->required();
  CLI::Option* vtol = validate->add_option("--tolerance", opts.tolerance, "comparison tolerance");

  CLI::App* run = app.add_subcommand("run", "Run a scenario pipeline and print the report");
  run->add_option("file", opts.file, "scenario JSON file")->required();
  CLI::Option* rtol = run->add_option("--tolerance", opts.tolerance, "comparison tolerance");
  run->add_option("--format", opts.format, "report format")
      ->check(CLI::IsMember({"human", "machine"}));
  CLI::Option* rprec = run->add_option("--precision", opts.precision, "fractional digits in reports");

  CLI::App* examples = app.add_subcommand("examples", "Print the paths of the bundled scenarios");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsageError;
  }

  opts.tolerance_set = vtol->count() > 0 || rtol->count() > 0;
  opts.precision_set = rprec->count() > 0;

  try {
    if (examples->parsed()) {
      std::cout << QSW_BUNDLED_SCENARIO_DIR << "/binary_channel.json\n"
                << QSW_BUNDLED_SCENARIO_DIR << "/cnot_entangle.json\n";
      return kExitOk;
    }
    if (validate->parsed()) return run_validate(opts);
    return run_run(opts);
  } catch (const qsw::PipelineError& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return kExitRuntimeError;
  } catch (const qsw::ScenarioError& e) {
    std::cerr << e.what() << "\n";
    return kExitValidationError;
  } catch (const qsw::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntimeError;
  }
}
