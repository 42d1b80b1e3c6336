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

#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qsw/complex_linalg.hpp"

namespace qsw {

// A scenario is one JSON document:
//
//   {
//     "settings":    { "tolerance": 1e-10, "output_precision": 6 },
//     "states":      { name: {"kind": "pure",     "amplitudes": [[re,im], ...]}
//                    | name: {"kind": "ensemble", "members": [{"p": 0.5, "amplitudes": [...]}, ...]}
//                    | name: {"kind": "density",  "matrix": [[[re,im], ...], ...]} },
//     "channels":    { name: {"kind": "kraus",       "matrices": [matrix, ...]}
//                    | name: {"kind": "hamiltonian", "matrix": matrix, "delta_tau": t} },
//     "observables": { name: {"matrix": matrix} },
//     "pipeline":    [ step, ... ]
//   }
//
// Matrices are row-major arrays of rows; complex numbers are [re, im] pairs.
// Steps (op plus name references, "as" binds the produced signal):
//
//   {"op": "apply",        "channel": c, "state": s, "as": out}
//   {"op": "evolve",       "channel": h, "state": s, "as": out, "delta_tau": t?}
//   {"op": "tensor",       "a": s1, "b": s2, "as": out}
//   {"op": "ptrace",       "state": s, "over": "A"|"B", "as": out, "dims": [na, nb]?}
//   {"op": "measure",      "observable": q, "state": s, "as": out, "outcome": k?}
//   {"op": "gmeasure",     "state": s, "ancilla": sb, "interaction": c, "observable": q, "as": out}
//   {"op": "product_test", "state": s, "dims": [na, nb]?}
//   {"op": "validate",     "state": s}

enum class ScenarioErrorCategory {
  kSyntax,             // malformed JSON text
  kSchema,             // structurally valid JSON with wrong shapes, types or fields
  kUnknownOp,          // pipeline op outside the eight step kinds
  kUndefinedReference, // a step names a state/channel/observable that does not exist
  kDuplicateName,      // an "as" binding collides with an existing name
  kDimensionMismatch,  // referenced objects have inconsistent dimensions
  kInvariantViolation, // a payload violates a physical invariant (closure, trace, ...)
};

std::string_view to_string(ScenarioErrorCategory category);

class ScenarioError : public Error {
public:
  ScenarioError(ScenarioErrorCategory category, const std::string& message)
      : Error(std::string(to_string(category)) + ": " + message), category_(category) {}

  ScenarioErrorCategory category() const { return category_; }

private:
  ScenarioErrorCategory category_;
};

/// Raised when a step fails during execution (not during validation).
class PipelineError : public Error {
public:
  PipelineError(std::size_t step_index, const std::string& message)
      : Error("step " + std::to_string(step_index) + ": " + message), step_index_(step_index) {}

  std::size_t step_index() const { return step_index_; }

private:
  std::size_t step_index_;
};

struct ScenarioSettings {
  double tolerance = 1e-10;
  int output_precision = 6;

  friend bool operator==(const ScenarioSettings&, const ScenarioSettings&) = default;
};

struct StateDecl {
  enum class Kind { kPure, kEnsemble, kDensity };
  struct EnsembleMember {
    double probability;
    std::vector<Complex> amplitudes;
    friend bool operator==(const EnsembleMember&, const EnsembleMember&) = default;
  };

  Kind kind = Kind::kPure;
  std::vector<Complex> amplitudes;       // kPure
  std::vector<EnsembleMember> members;   // kEnsemble
  ComplexMatrix matrix;                  // kDensity

  std::size_t dim() const;

  friend bool operator==(const StateDecl&, const StateDecl&) = default;
};

struct ChannelDecl {
  enum class Kind { kKraus, kHamiltonian };

  Kind kind = Kind::kKraus;
  std::vector<ComplexMatrix> matrices;   // kKraus
  ComplexMatrix matrix;                  // kHamiltonian
  std::optional<double> delta_tau;       // kHamiltonian only

  std::size_t dim() const;

  friend bool operator==(const ChannelDecl&, const ChannelDecl&) = default;
};

struct ObservableDecl {
  ComplexMatrix matrix;

  friend bool operator==(const ObservableDecl&, const ObservableDecl&) = default;
};

enum class StepOp { kApply, kEvolve, kTensor, kPtrace, kMeasure, kGmeasure, kProductTest, kValidate };

std::string_view to_string(StepOp op);

struct PipelineStep {
  StepOp op = StepOp::kValidate;
  std::string state;        // primary input (all ops except tensor)
  std::string state_b;      // tensor: second input; field "b" (primary uses "a")
  std::string channel;      // apply, evolve; gmeasure interaction
  std::string observable;   // measure, gmeasure
  std::string ancilla;      // gmeasure
  std::string as;           // binding name; empty for report-only steps
  std::string over;         // ptrace: "A" or "B"
  std::optional<double> delta_tau;                          // evolve override
  std::optional<std::size_t> outcome;                       // measure: selective outcome
  std::optional<std::pair<std::size_t, std::size_t>> dims;  // ptrace/product_test split

  friend bool operator==(const PipelineStep&, const PipelineStep&) = default;
};

struct ScenarioDocument {
  ScenarioSettings settings;
  std::map<std::string, StateDecl> states;
  std::map<std::string, ChannelDecl> channels;
  std::map<std::string, ObservableDecl> observables;
  std::vector<PipelineStep> pipeline;

  friend bool operator==(const ScenarioDocument&, const ScenarioDocument&) = default;
};

struct ReportEntry {
  std::size_t id = 0;  // step index
  StepOp op = StepOp::kValidate;
  ComplexMatrix output;                              // produced (or inspected) signal
  double trace_value = 0.0;
  double purity_value = 0.0;
  std::optional<std::vector<double>> probabilities;  // measure, gmeasure
  std::optional<bool> verdict;                       // product_test, validate
};

struct Report {
  ScenarioSettings settings;
  std::vector<ReportEntry> entries;
};

enum class ReportMode { kHuman, kMachine };

/// Caller-side overrides of the document's own settings (e.g. from CLI
/// flags); applied before payload validation.
struct SettingsOverrides {
  std::optional<double> tolerance;
  std::optional<int> output_precision;
};

/// Parses and fully validates a scenario: payload invariants, name
/// resolution and dimension consistency are all checked here, so a returned
/// document is runnable. Throws ScenarioError otherwise.
ScenarioDocument parse_scenario(std::string_view text, const SettingsOverrides& overrides = {});

/// Executes the pipeline against a growing binding environment. Throws
/// PipelineError (with the step index) when a step fails at run time.
Report run_pipeline(const ScenarioDocument& doc);

/// Inverse of parse_scenario on valid documents: parse(serialize(d)) == d.
std::string serialize_scenario(const ScenarioDocument& doc);

std::string format_report(const Report& report, ReportMode mode);

}  // namespace qsw
