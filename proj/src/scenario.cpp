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

#include "qsw/scenario.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "qsw/composite.hpp"
#include "qsw/measurement.hpp"
#include "qsw/signals.hpp"
#include "qsw/systems.hpp"

namespace qsw {

using nlohmann::json;

std::string_view to_string(ScenarioErrorCategory category) {
  switch (category) {
    case ScenarioErrorCategory::kSyntax: return "syntax error";
    case ScenarioErrorCategory::kSchema: return "schema error";
    case ScenarioErrorCategory::kUnknownOp: return "unknown op";
    case ScenarioErrorCategory::kUndefinedReference: return "undefined reference";
    case ScenarioErrorCategory::kDuplicateName: return "duplicate name";
    case ScenarioErrorCategory::kDimensionMismatch: return "dimension mismatch";
    case ScenarioErrorCategory::kInvariantViolation: return "invariant violation";
  }
  return "unknown error";
}

std::string_view to_string(StepOp op) {
  switch (op) {
    case StepOp::kApply: return "apply";
    case StepOp::kEvolve: return "evolve";
    case StepOp::kTensor: return "tensor";
    case StepOp::kPtrace: return "ptrace";
    case StepOp::kMeasure: return "measure";
    case StepOp::kGmeasure: return "gmeasure";
    case StepOp::kProductTest: return "product_test";
    case StepOp::kValidate: return "validate";
  }
  return "?";
}

std::size_t StateDecl::dim() const {
  switch (kind) {
    case Kind::kPure: return amplitudes.size();
    case Kind::kEnsemble: return members.empty() ? 0 : members.front().amplitudes.size();
    case Kind::kDensity: return matrix.rows();
  }
  return 0;
}

std::size_t ChannelDecl::dim() const {
  switch (kind) {
    case Kind::kKraus: return matrices.empty() ? 0 : matrices.front().rows();
    case Kind::kHamiltonian: return matrix.rows();
  }
  return 0;
}

namespace {

[[noreturn]] void fail(ScenarioErrorCategory category, const std::string& message) {
  throw ScenarioError(category, message);
}

// ---- checked JSON access -------------------------------------------------

const json& expect_object(const json& j, const std::string& where) {
  if (!j.is_object()) fail(ScenarioErrorCategory::kSchema, where + " must be an object");
  return j;
}

const json& expect_array(const json& j, const std::string& where) {
  if (!j.is_array()) fail(ScenarioErrorCategory::kSchema, where + " must be an array");
  return j;
}

double expect_number(const json& j, const std::string& where) {
  if (!j.is_number()) fail(ScenarioErrorCategory::kSchema, where + " must be a number");
  return j.get<double>();
}

std::string expect_string(const json& j, const std::string& where) {
  if (!j.is_string()) fail(ScenarioErrorCategory::kSchema, where + " must be a string");
  return j.get<std::string>();
}

const json& expect_field(const json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end())
    fail(ScenarioErrorCategory::kSchema, where + " is missing required field \"" + key + "\"");
  return *it;
}

void reject_unknown_keys(const json& j, std::initializer_list<const char*> allowed,
                         const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* key : allowed)
      if (it.key() == key) known = true;
    if (!known)
      fail(ScenarioErrorCategory::kSchema, where + " has unknown field \"" + it.key() + "\"");
  }
}

Complex parse_complex(const json& j, const std::string& where) {
  expect_array(j, where);
  if (j.size() != 2)
    fail(ScenarioErrorCategory::kSchema, where + " must be a [re, im] pair");
  return {expect_number(j[0], where + "[0]"), expect_number(j[1], where + "[1]")};
}

std::vector<Complex> parse_amplitudes(const json& j, const std::string& where) {
  expect_array(j, where);
  if (j.empty()) fail(ScenarioErrorCategory::kSchema, where + " must not be empty");
  std::vector<Complex> amps;
  amps.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i)
    amps.push_back(parse_complex(j[i], where + "[" + std::to_string(i) + "]"));
  return amps;
}

ComplexMatrix parse_matrix(const json& j, const std::string& where) {
  expect_array(j, where);
  if (j.empty()) fail(ScenarioErrorCategory::kSchema, where + " must not be empty");
  const std::size_t rows = j.size();
  std::size_t cols = 0;
  std::vector<Complex> entries;
  for (std::size_t r = 0; r < rows; ++r) {
    const std::string row_ctx = where + "[" + std::to_string(r) + "]";
    expect_array(j[r], row_ctx);
    if (r == 0) {
      cols = j[r].size();
      if (cols == 0) fail(ScenarioErrorCategory::kSchema, row_ctx + " must not be empty");
      entries.reserve(rows * cols);
    } else if (j[r].size() != cols) {
      fail(ScenarioErrorCategory::kSchema, where + " has ragged rows");
    }
    for (std::size_t c = 0; c < j[r].size(); ++c)
      entries.push_back(parse_complex(j[r][c], row_ctx + "[" + std::to_string(c) + "]"));
  }
  return ComplexMatrix(rows, cols, std::move(entries));
}

ComplexMatrix parse_square_matrix(const json& j, const std::string& where) {
  ComplexMatrix m = parse_matrix(j, where);
  if (!m.is_square())
    fail(ScenarioErrorCategory::kDimensionMismatch,
         where + " is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
             ", expected square");
  return m;
}

// ---- payload parsing and physical validation -----------------------------

StateDecl parse_state(const json& j, const std::string& name) {
  const std::string where = "state \"" + name + "\"";
  expect_object(j, where);
  const std::string kind = expect_string(expect_field(j, "kind", where), where + ".kind");
  StateDecl decl;
  if (kind == "pure") {
    reject_unknown_keys(j, {"kind", "amplitudes"}, where);
    decl.kind = StateDecl::Kind::kPure;
    decl.amplitudes = parse_amplitudes(expect_field(j, "amplitudes", where), where + ".amplitudes");
  } else if (kind == "ensemble") {
    reject_unknown_keys(j, {"kind", "members"}, where);
    decl.kind = StateDecl::Kind::kEnsemble;
    const json& members = expect_array(expect_field(j, "members", where), where + ".members");
    if (members.empty()) fail(ScenarioErrorCategory::kSchema, where + ".members must not be empty");
    for (std::size_t i = 0; i < members.size(); ++i) {
      const std::string mctx = where + ".members[" + std::to_string(i) + "]";
      expect_object(members[i], mctx);
      reject_unknown_keys(members[i], {"p", "amplitudes"}, mctx);
      StateDecl::EnsembleMember member;
      member.probability = expect_number(expect_field(members[i], "p", mctx), mctx + ".p");
      member.amplitudes = parse_amplitudes(expect_field(members[i], "amplitudes", mctx), mctx + ".amplitudes");
      decl.members.push_back(std::move(member));
    }
  } else if (kind == "density") {
    reject_unknown_keys(j, {"kind", "matrix"}, where);
    decl.kind = StateDecl::Kind::kDensity;
    decl.matrix = parse_square_matrix(expect_field(j, "matrix", where), where + ".matrix");
  } else {
    fail(ScenarioErrorCategory::kSchema, where + ".kind must be pure, ensemble or density");
  }
  return decl;
}

ChannelDecl parse_channel(const json& j, const std::string& name) {
  const std::string where = "channel \"" + name + "\"";
  expect_object(j, where);
  const std::string kind = expect_string(expect_field(j, "kind", where), where + ".kind");
  ChannelDecl decl;
  if (kind == "kraus") {
    reject_unknown_keys(j, {"kind", "matrices"}, where);
    decl.kind = ChannelDecl::Kind::kKraus;
    const json& matrices = expect_array(expect_field(j, "matrices", where), where + ".matrices");
    if (matrices.empty())
      fail(ScenarioErrorCategory::kSchema, where + ".matrices must not be empty");
    for (std::size_t i = 0; i < matrices.size(); ++i)
      decl.matrices.push_back(
          parse_square_matrix(matrices[i], where + ".matrices[" + std::to_string(i) + "]"));
    for (const ComplexMatrix& m : decl.matrices)
      if (m.rows() != decl.matrices.front().rows())
        fail(ScenarioErrorCategory::kDimensionMismatch, where + " has operators of unequal size");
  } else if (kind == "hamiltonian") {
    reject_unknown_keys(j, {"kind", "matrix", "delta_tau"}, where);
    decl.kind = ChannelDecl::Kind::kHamiltonian;
    decl.matrix = parse_square_matrix(expect_field(j, "matrix", where), where + ".matrix");
    if (auto it = j.find("delta_tau"); it != j.end())
      decl.delta_tau = expect_number(*it, where + ".delta_tau");
  } else {
    fail(ScenarioErrorCategory::kSchema, where + ".kind must be kraus or hamiltonian");
  }
  return decl;
}

ObservableDecl parse_observable(const json& j, const std::string& name) {
  const std::string where = "observable \"" + name + "\"";
  expect_object(j, where);
  reject_unknown_keys(j, {"matrix"}, where);
  return ObservableDecl{parse_square_matrix(expect_field(j, "matrix", where), where + ".matrix")};
}

std::optional<std::pair<std::size_t, std::size_t>> parse_dims(const json& j, const std::string& where) {
  expect_array(j, where);
  if (j.size() != 2 || !j[0].is_number_unsigned() || !j[1].is_number_unsigned())
    fail(ScenarioErrorCategory::kSchema, where + " must be a [dim_a, dim_b] pair of positive integers");
  const auto a = j[0].get<std::size_t>();
  const auto b = j[1].get<std::size_t>();
  if (a == 0 || b == 0)
    fail(ScenarioErrorCategory::kSchema, where + " must be a [dim_a, dim_b] pair of positive integers");
  return std::make_pair(a, b);
}

PipelineStep parse_step(const json& j, std::size_t index) {
  const std::string where = "pipeline step " + std::to_string(index);
  expect_object(j, where);
  const std::string op = expect_string(expect_field(j, "op", where), where + ".op");
  PipelineStep step;
  auto ref = [&](const char* key) { return expect_string(expect_field(j, key, where), where + "." + key); };
  if (op == "apply") {
    reject_unknown_keys(j, {"op", "channel", "state", "as"}, where);
    step.op = StepOp::kApply;
    step.channel = ref("channel");
    step.state = ref("state");
    step.as = ref("as");
  } else if (op == "evolve") {
    reject_unknown_keys(j, {"op", "channel", "state", "as", "delta_tau"}, where);
    step.op = StepOp::kEvolve;
    step.channel = ref("channel");
    step.state = ref("state");
    step.as = ref("as");
    if (auto it = j.find("delta_tau"); it != j.end())
      step.delta_tau = expect_number(*it, where + ".delta_tau");
  } else if (op == "tensor") {
    reject_unknown_keys(j, {"op", "a", "b", "as"}, where);
    step.op = StepOp::kTensor;
    step.state = ref("a");
    step.state_b = ref("b");
    step.as = ref("as");
  } else if (op == "ptrace") {
    reject_unknown_keys(j, {"op", "state", "over", "as", "dims"}, where);
    step.op = StepOp::kPtrace;
    step.state = ref("state");
    step.over = ref("over");
    step.as = ref("as");
    if (step.over != "A" && step.over != "B")
      fail(ScenarioErrorCategory::kSchema, where + ".over must be \"A\" or \"B\"");
    if (auto it = j.find("dims"); it != j.end()) step.dims = parse_dims(*it, where + ".dims");
  } else if (op == "measure") {
    reject_unknown_keys(j, {"op", "observable", "state", "as", "outcome"}, where);
    step.op = StepOp::kMeasure;
    step.observable = ref("observable");
    step.state = ref("state");
    step.as = ref("as");
    if (auto it = j.find("outcome"); it != j.end()) {
      if (!it->is_number_unsigned())
        fail(ScenarioErrorCategory::kSchema, where + ".outcome must be a non-negative integer");
      step.outcome = it->get<std::size_t>();
    }
  } else if (op == "gmeasure") {
    reject_unknown_keys(j, {"op", "state", "ancilla", "interaction", "observable", "as"}, where);
    step.op = StepOp::kGmeasure;
    step.state = ref("state");
    step.ancilla = ref("ancilla");
    step.channel = ref("interaction");
    step.observable = ref("observable");
    step.as = ref("as");
  } else if (op == "product_test") {
    reject_unknown_keys(j, {"op", "state", "dims"}, where);
    step.op = StepOp::kProductTest;
    step.state = ref("state");
    if (auto it = j.find("dims"); it != j.end()) step.dims = parse_dims(*it, where + ".dims");
  } else if (op == "validate") {
    reject_unknown_keys(j, {"op", "state"}, where);
    step.op = StepOp::kValidate;
    step.state = ref("state");
  } else {
    fail(ScenarioErrorCategory::kUnknownOp, where + ": \"" + op + "\"");
  }
  return step;
}

// Constructs the domain object for a state declaration, converting
// construction failures into categorized scenario errors.
DensityMatrix realize_state(const StateDecl& decl, const std::string& name, double tol) {
  try {
    switch (decl.kind) {
      case StateDecl::Kind::kPure:
        return density_from_pure(PureState(decl.amplitudes));
      case StateDecl::Kind::kEnsemble: {
        std::vector<Ensemble::Member> members;
        members.reserve(decl.members.size());
        for (const StateDecl::EnsembleMember& m : decl.members)
          members.push_back({m.probability, PureState(m.amplitudes)});
        return density_from_ensemble(Ensemble(std::move(members)));
      }
      case StateDecl::Kind::kDensity:
        return DensityMatrix(decl.matrix, tol);
    }
  } catch (const Error& e) {
    fail(ScenarioErrorCategory::kInvariantViolation, "state \"" + name + "\": " + e.what());
  }
  fail(ScenarioErrorCategory::kSchema, "state \"" + name + "\": unreachable kind");
}

KrausChannel realize_kraus(const ChannelDecl& decl, const std::string& name) {
  try {
    return KrausChannel(decl.matrices);
  } catch (const Error& e) {
    fail(ScenarioErrorCategory::kInvariantViolation, "channel \"" + name + "\": " + e.what());
  }
}

Hamiltonian realize_hamiltonian(const ChannelDecl& decl, const std::string& name, double tol) {
  try {
    return Hamiltonian(decl.matrix, tol);
  } catch (const Error& e) {
    fail(ScenarioErrorCategory::kInvariantViolation, "channel \"" + name + "\": " + e.what());
  }
}

Observable realize_observable(const ObservableDecl& decl, const std::string& name, double tol) {
  try {
    return Observable(decl.matrix, tol);
  } catch (const Error& e) {
    fail(ScenarioErrorCategory::kInvariantViolation, "observable \"" + name + "\": " + e.what());
  }
}

// ---- static pipeline checking --------------------------------------------

struct StaticBinding {
  std::size_t dim;
  std::optional<std::pair<std::size_t, std::size_t>> split;
};

// Resolves the subsystem split a ptrace/product_test step works with.
std::pair<std::size_t, std::size_t> resolve_split(const PipelineStep& step, const StaticBinding& input,
                                                  const std::string& where) {
  if (step.dims) {
    if (step.dims->first * step.dims->second != input.dim)
      fail(ScenarioErrorCategory::kDimensionMismatch,
           where + ": dims " + std::to_string(step.dims->first) + "x" +
               std::to_string(step.dims->second) + " do not factor dimension " +
               std::to_string(input.dim));
    return *step.dims;
  }
  if (input.split) return *input.split;
  fail(ScenarioErrorCategory::kDimensionMismatch,
       where + ": \"" + step.state + "\" has no recorded subsystem split; give \"dims\"");
}

// Walks the pipeline once, checking name resolution, binding collisions and
// dimensional consistency. Returns nothing; throws on the first defect.
void check_pipeline(const ScenarioDocument& doc) {
  std::map<std::string, StaticBinding> env;
  for (const auto& [name, decl] : doc.states) env[name] = {decl.dim(), std::nullopt};

  for (std::size_t i = 0; i < doc.pipeline.size(); ++i) {
    const PipelineStep& step = doc.pipeline[i];
    const std::string where = "pipeline step " + std::to_string(i) + " (" +
                              std::string(to_string(step.op)) + ")";

    auto lookup_state = [&](const std::string& name) -> const StaticBinding& {
      auto it = env.find(name);
      if (it == env.end())
        fail(ScenarioErrorCategory::kUndefinedReference, where + ": undefined state \"" + name + "\"");
      return it->second;
    };
    auto lookup_channel = [&](const std::string& name) -> const ChannelDecl& {
      auto it = doc.channels.find(name);
      if (it == doc.channels.end())
        fail(ScenarioErrorCategory::kUndefinedReference,
             where + ": undefined channel \"" + name + "\"");
      return it->second;
    };
    auto lookup_observable = [&](const std::string& name) -> const ObservableDecl& {
      auto it = doc.observables.find(name);
      if (it == doc.observables.end())
        fail(ScenarioErrorCategory::kUndefinedReference,
             where + ": undefined observable \"" + name + "\"");
      return it->second;
    };
    auto bind = [&](const std::string& name, StaticBinding binding) {
      if (name.empty()) fail(ScenarioErrorCategory::kSchema, where + ": empty binding name");
      if (env.count(name))
        fail(ScenarioErrorCategory::kDuplicateName,
             where + ": binding \"" + name + "\" collides with an existing name");
      env.emplace(name, binding);
    };

    switch (step.op) {
      case StepOp::kApply: {
        const StaticBinding& in = lookup_state(step.state);
        const ChannelDecl& ch = lookup_channel(step.channel);
        if (ch.kind != ChannelDecl::Kind::kKraus)
          fail(ScenarioErrorCategory::kSchema,
               where + ": apply requires a kraus channel, \"" + step.channel + "\" is hamiltonian");
        if (ch.dim() != in.dim)
          fail(ScenarioErrorCategory::kDimensionMismatch,
               where + ": channel dimension " + std::to_string(ch.dim()) +
                   " vs state dimension " + std::to_string(in.dim));
        bind(step.as, {in.dim, in.split});
        break;
      }
      case StepOp::kEvolve: {
        const StaticBinding& in = lookup_state(step.state);
        const ChannelDecl& ch = lookup_channel(step.channel);
        if (ch.kind != ChannelDecl::Kind::kHamiltonian)
          fail(ScenarioErrorCategory::kSchema,
               where + ": evolve requires a hamiltonian channel, \"" + step.channel + "\" is kraus");
        if (!step.delta_tau && !ch.delta_tau)
          fail(ScenarioErrorCategory::kSchema,
               where + ": no delta_tau on the step or on channel \"" + step.channel + "\"");
        if (ch.dim() != in.dim)
          fail(ScenarioErrorCategory::kDimensionMismatch,
               where + ": channel dimension " + std::to_string(ch.dim()) +
                   " vs state dimension " + std::to_string(in.dim));
        bind(step.as, {in.dim, in.split});
        break;
      }
      case StepOp::kTensor: {
        const StaticBinding a = lookup_state(step.state);
        const StaticBinding b = lookup_state(step.state_b);
        bind(step.as, {a.dim * b.dim, std::make_pair(a.dim, b.dim)});
        break;
      }
      case StepOp::kPtrace: {
        const StaticBinding& in = lookup_state(step.state);
        const auto split = resolve_split(step, in, where);
        bind(step.as, {step.over == "B" ? split.first : split.second, std::nullopt});
        break;
      }
      case StepOp::kMeasure: {
        const StaticBinding& in = lookup_state(step.state);
        const ObservableDecl& q = lookup_observable(step.observable);
        if (q.matrix.rows() != in.dim)
          fail(ScenarioErrorCategory::kDimensionMismatch,
               where + ": observable dimension " + std::to_string(q.matrix.rows()) +
                   " vs state dimension " + std::to_string(in.dim));
        bind(step.as, {in.dim, in.split});
        break;
      }
      case StepOp::kGmeasure: {
        const StaticBinding& in = lookup_state(step.state);
        const StaticBinding& ancilla = lookup_state(step.ancilla);
        const ChannelDecl& interaction = lookup_channel(step.channel);
        const ObservableDecl& q = lookup_observable(step.observable);
        if (interaction.kind != ChannelDecl::Kind::kKraus || interaction.matrices.size() != 1)
          fail(ScenarioErrorCategory::kSchema,
               where + ": interaction \"" + step.channel + "\" must be a single-operator kraus channel");
        if (interaction.dim() != in.dim * ancilla.dim)
          fail(ScenarioErrorCategory::kDimensionMismatch,
               where + ": interaction dimension " + std::to_string(interaction.dim()) + " vs " +
                   std::to_string(in.dim) + "*" + std::to_string(ancilla.dim));
        if (q.matrix.rows() != ancilla.dim)
          fail(ScenarioErrorCategory::kDimensionMismatch,
               where + ": ancilla observable dimension " + std::to_string(q.matrix.rows()) +
                   " vs ancilla dimension " + std::to_string(ancilla.dim));
        bind(step.as, {in.dim, in.split});
        break;
      }
      case StepOp::kProductTest: {
        const StaticBinding& in = lookup_state(step.state);
        resolve_split(step, in, where);
        break;
      }
      case StepOp::kValidate:
        lookup_state(step.state);
        break;
    }
  }
}

// Physical validation of every payload; realized objects are discarded.
void check_payloads(const ScenarioDocument& doc) {
  for (const auto& [name, decl] : doc.states) realize_state(decl, name, doc.settings.tolerance);
  for (const auto& [name, decl] : doc.channels) {
    if (decl.kind == ChannelDecl::Kind::kKraus)
      realize_kraus(decl, name);
    else
      realize_hamiltonian(decl, name, doc.settings.tolerance);
  }
  for (const auto& [name, decl] : doc.observables)
    realize_observable(decl, name, doc.settings.tolerance);
}

ScenarioSettings parse_settings(const json& root) {
  ScenarioSettings settings;
  auto it = root.find("settings");
  if (it == root.end()) return settings;
  expect_object(*it, "settings");
  reject_unknown_keys(*it, {"tolerance", "output_precision"}, "settings");
  if (auto t = it->find("tolerance"); t != it->end()) {
    settings.tolerance = expect_number(*t, "settings.tolerance");
    if (!(settings.tolerance > 0.0) || !std::isfinite(settings.tolerance))
      fail(ScenarioErrorCategory::kSchema, "settings.tolerance must be positive and finite");
  }
  if (auto p = it->find("output_precision"); p != it->end()) {
    if (!p->is_number_integer())
      fail(ScenarioErrorCategory::kSchema, "settings.output_precision must be an integer");
    settings.output_precision = p->get<int>();
    if (settings.output_precision < 0 || settings.output_precision > 17)
      fail(ScenarioErrorCategory::kSchema, "settings.output_precision must be in [0, 17]");
  }
  return settings;
}

}  // namespace

ScenarioDocument parse_scenario(std::string_view text, const SettingsOverrides& overrides) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ScenarioErrorCategory::kSyntax, e.what());  // carries byte position
  }
  expect_object(root, "document");
  reject_unknown_keys(root, {"settings", "states", "channels", "observables", "pipeline"}, "document");

  ScenarioDocument doc;
  doc.settings = parse_settings(root);
  if (overrides.tolerance) doc.settings.tolerance = *overrides.tolerance;
  if (overrides.output_precision) doc.settings.output_precision = *overrides.output_precision;
  if (auto it = root.find("states"); it != root.end()) {
    expect_object(*it, "states");
    for (auto entry = it->begin(); entry != it->end(); ++entry)
      doc.states.emplace(entry.key(), parse_state(entry.value(), entry.key()));
  }
  if (auto it = root.find("channels"); it != root.end()) {
    expect_object(*it, "channels");
    for (auto entry = it->begin(); entry != it->end(); ++entry)
      doc.channels.emplace(entry.key(), parse_channel(entry.value(), entry.key()));
  }
  if (auto it = root.find("observables"); it != root.end()) {
    expect_object(*it, "observables");
    for (auto entry = it->begin(); entry != it->end(); ++entry)
      doc.observables.emplace(entry.key(), parse_observable(entry.value(), entry.key()));
  }
  if (auto it = root.find("pipeline"); it != root.end()) {
    expect_array(*it, "pipeline");
    for (std::size_t i = 0; i < it->size(); ++i) doc.pipeline.push_back(parse_step((*it)[i], i));
  }

  check_payloads(doc);
  check_pipeline(doc);
  return doc;
}

namespace {

struct Bound {
  DensityMatrix density;
  std::optional<std::pair<std::size_t, std::size_t>> split;
};

ReportEntry make_entry(std::size_t id, StepOp op, const DensityMatrix& subject) {
  ReportEntry entry;
  entry.id = id;
  entry.op = op;
  entry.output = subject.matrix();
  entry.trace_value = trace(subject.matrix()).real();
  entry.purity_value = purity(subject);
  return entry;
}

}  // namespace

Report run_pipeline(const ScenarioDocument& doc) {
  check_payloads(doc);
  check_pipeline(doc);

  const double tol = doc.settings.tolerance;
  std::map<std::string, Bound> env;
  for (const auto& [name, decl] : doc.states)
    env.emplace(name, Bound{realize_state(decl, name, tol), std::nullopt});

  Report report{doc.settings, {}};
  for (std::size_t i = 0; i < doc.pipeline.size(); ++i) {
    const PipelineStep& step = doc.pipeline[i];
    try {
      switch (step.op) {
        case StepOp::kApply: {
          const Bound& in = env.at(step.state);
          const KrausChannel ch = realize_kraus(doc.channels.at(step.channel), step.channel);
          Bound out{apply_channel(ch, in.density), in.split};
          report.entries.push_back(make_entry(i, step.op, out.density));
          env.emplace(step.as, std::move(out));
          break;
        }
        case StepOp::kEvolve: {
          const Bound& in = env.at(step.state);
          const ChannelDecl& decl = doc.channels.at(step.channel);
          const Hamiltonian h = realize_hamiltonian(decl, step.channel, tol);
          const double dt = step.delta_tau ? *step.delta_tau : *decl.delta_tau;
          Bound out{apply_channel(unitary_from_hamiltonian(h, dt), in.density), in.split};
          report.entries.push_back(make_entry(i, step.op, out.density));
          env.emplace(step.as, std::move(out));
          break;
        }
        case StepOp::kTensor: {
          const Bound& a = env.at(step.state);
          const Bound& b = env.at(step.state_b);
          const CompositeDensity composite = tensor_state(a.density, b.density);
          Bound out{composite.density(), std::make_pair(composite.dim_a(), composite.dim_b())};
          report.entries.push_back(make_entry(i, step.op, out.density));
          env.emplace(step.as, std::move(out));
          break;
        }
        case StepOp::kPtrace: {
          const Bound& in = env.at(step.state);
          const auto split = step.dims ? *step.dims : *in.split;
          const CompositeDensity composite(split.first, split.second, in.density);
          Bound out{partial_trace(composite, step.over == "B" ? Subsystem::B : Subsystem::A),
                    std::nullopt};
          report.entries.push_back(make_entry(i, step.op, out.density));
          env.emplace(step.as, std::move(out));
          break;
        }
        case StepOp::kMeasure: {
          const Bound& in = env.at(step.state);
          const Observable q =
              realize_observable(doc.observables.at(step.observable), step.observable, tol);
          const ProjectiveMeasurement m = projectors_from_observable(q);
          const std::vector<double> probs = outcome_probabilities(in.density, m);
          Bound out = step.outcome
                          ? Bound{measure_selective(in.density, m, *step.outcome).second, in.split}
                          : Bound{measure_nonselective(in.density, m), in.split};
          ReportEntry entry = make_entry(i, step.op, out.density);
          entry.probabilities = probs;
          report.entries.push_back(std::move(entry));
          env.emplace(step.as, std::move(out));
          break;
        }
        case StepOp::kGmeasure: {
          const Bound& in = env.at(step.state);
          const DensityMatrix ancilla =
              realize_state(doc.states.at(step.ancilla), step.ancilla, tol);
          const ComplexMatrix& interaction = doc.channels.at(step.channel).matrices.front();
          const Observable q =
              realize_observable(doc.observables.at(step.observable), step.observable, tol);
          const GeneralizedMeasurement gm(ancilla, interaction, q, tol);
          const MeasurementRecord record = generalized_measure(in.density, gm);
          std::vector<double> probs;
          probs.reserve(record.outcomes.size());
          for (const auto& outcome : record.outcomes) probs.push_back(outcome.probability);
          Bound out{record.nonselective_state, in.split};
          ReportEntry entry = make_entry(i, step.op, out.density);
          entry.probabilities = std::move(probs);
          report.entries.push_back(std::move(entry));
          env.emplace(step.as, std::move(out));
          break;
        }
        case StepOp::kProductTest: {
          const Bound& in = env.at(step.state);
          const auto split = step.dims ? *step.dims : *in.split;
          const CompositeDensity composite(split.first, split.second, in.density);
          const ProductCheck check = is_product_state(composite, tol);
          ReportEntry entry = make_entry(i, step.op, in.density);
          entry.verdict = check.is_product;
          report.entries.push_back(std::move(entry));
          break;
        }
        case StepOp::kValidate: {
          const Bound& in = env.at(step.state);
          const ValidationReport validation = validate_density(in.density.matrix(), tol);
          ReportEntry entry = make_entry(i, step.op, in.density);
          entry.verdict = validation.all_passed();
          report.entries.push_back(std::move(entry));
          break;
        }
      }
    } catch (const ScenarioError&) {
      throw;
    } catch (const Error& e) {
      throw PipelineError(i, std::string(to_string(step.op)) + ": " + e.what());
    }
  }
  return report;
}

// ---- serialization --------------------------------------------------------

namespace {

json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

json amplitudes_to_json(const std::vector<Complex>& amps) {
  json arr = json::array();
  for (Complex a : amps) arr.push_back(complex_to_json(a));
  return arr;
}

double round_to_precision(double v, int precision) {
  const double scale = std::pow(10.0, precision);
  const double r = std::round(v * scale) / scale;
  return r + 0.0;  // normalizes -0
}

json rounded_matrix_to_json(const ComplexMatrix& m, int precision) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c)
      row.push_back(json::array({round_to_precision(m(r, c).real(), precision),
                                 round_to_precision(m(r, c).imag(), precision)}));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string complex_to_human(Complex z, int precision) {
  std::ostringstream os;
  const double re = round_to_precision(z.real(), precision);
  const double im = round_to_precision(z.imag(), precision);
  os << std::fixed << std::setprecision(precision) << re << (im < 0 ? "-" : "+") << std::abs(im)
     << "i";
  return os.str();
}

}  // namespace

std::string serialize_scenario(const ScenarioDocument& doc) {
  json root;
  root["settings"] = {{"tolerance", doc.settings.tolerance},
                      {"output_precision", doc.settings.output_precision}};
  if (!doc.states.empty()) {
    json states;
    for (const auto& [name, decl] : doc.states) {
      json j;
      switch (decl.kind) {
        case StateDecl::Kind::kPure:
          j["kind"] = "pure";
          j["amplitudes"] = amplitudes_to_json(decl.amplitudes);
          break;
        case StateDecl::Kind::kEnsemble: {
          j["kind"] = "ensemble";
          json members = json::array();
          for (const auto& m : decl.members)
            members.push_back({{"p", m.probability}, {"amplitudes", amplitudes_to_json(m.amplitudes)}});
          j["members"] = std::move(members);
          break;
        }
        case StateDecl::Kind::kDensity:
          j["kind"] = "density";
          j["matrix"] = matrix_to_json(decl.matrix);
          break;
      }
      states[name] = std::move(j);
    }
    root["states"] = std::move(states);
  }
  if (!doc.channels.empty()) {
    json channels;
    for (const auto& [name, decl] : doc.channels) {
      json j;
      if (decl.kind == ChannelDecl::Kind::kKraus) {
        j["kind"] = "kraus";
        json matrices = json::array();
        for (const ComplexMatrix& m : decl.matrices) matrices.push_back(matrix_to_json(m));
        j["matrices"] = std::move(matrices);
      } else {
        j["kind"] = "hamiltonian";
        j["matrix"] = matrix_to_json(decl.matrix);
        if (decl.delta_tau) j["delta_tau"] = *decl.delta_tau;
      }
      channels[name] = std::move(j);
    }
    root["channels"] = std::move(channels);
  }
  if (!doc.observables.empty()) {
    json observables;
    for (const auto& [name, decl] : doc.observables)
      observables[name] = {{"matrix", matrix_to_json(decl.matrix)}};
    root["observables"] = std::move(observables);
  }
  json pipeline = json::array();
  for (const PipelineStep& step : doc.pipeline) {
    json j;
    j["op"] = std::string(to_string(step.op));
    switch (step.op) {
      case StepOp::kApply:
        j["channel"] = step.channel;
        j["state"] = step.state;
        j["as"] = step.as;
        break;
      case StepOp::kEvolve:
        j["channel"] = step.channel;
        j["state"] = step.state;
        j["as"] = step.as;
        if (step.delta_tau) j["delta_tau"] = *step.delta_tau;
        break;
      case StepOp::kTensor:
        j["a"] = step.state;
        j["b"] = step.state_b;
        j["as"] = step.as;
        break;
      case StepOp::kPtrace:
        j["state"] = step.state;
        j["over"] = step.over;
        j["as"] = step.as;
        if (step.dims) j["dims"] = {step.dims->first, step.dims->second};
        break;
      case StepOp::kMeasure:
        j["observable"] = step.observable;
        j["state"] = step.state;
        j["as"] = step.as;
        if (step.outcome) j["outcome"] = *step.outcome;
        break;
      case StepOp::kGmeasure:
        j["state"] = step.state;
        j["ancilla"] = step.ancilla;
        j["interaction"] = step.channel;
        j["observable"] = step.observable;
        j["as"] = step.as;
        break;
      case StepOp::kProductTest:
        j["state"] = step.state;
        if (step.dims) j["dims"] = {step.dims->first, step.dims->second};
        break;
      case StepOp::kValidate:
        j["state"] = step.state;
        break;
    }
    pipeline.push_back(std::move(j));
  }
  root["pipeline"] = std::move(pipeline);
  return root.dump(2) + "\n";
}

std::string format_report(const Report& report, ReportMode mode) {
  const int precision = report.settings.output_precision;
  if (mode == ReportMode::kMachine) {
    json root;
    root["settings"] = {{"tolerance", report.settings.tolerance},
                        {"output_precision", report.settings.output_precision}};
    json steps = json::array();
    for (const ReportEntry& entry : report.entries) {
      json j;
      j["id"] = entry.id;
      j["op"] = std::string(to_string(entry.op));
      j["output"] = rounded_matrix_to_json(entry.output, precision);
      j["trace"] = entry.trace_value;
      j["purity"] = entry.purity_value;
      if (entry.probabilities) j["probabilities"] = *entry.probabilities;
      if (entry.verdict) j["verdict"] = *entry.verdict;
      steps.push_back(std::move(j));
    }
    root["steps"] = std::move(steps);
    return root.dump() + "\n";
  }

  std::ostringstream os;
  os << "scenario report (tolerance " << report.settings.tolerance << ", precision " << precision
     << ", " << report.entries.size() << " steps)\n";
  for (const ReportEntry& entry : report.entries) {
    os << "\nstep " << entry.id << "  " << to_string(entry.op) << "\n";
    // "-0.123456-0.654321i" style entries: two fixed-point numbers plus signs.
    const std::size_t width = 2 * static_cast<std::size_t>(precision) + 8;
    for (std::size_t r = 0; r < entry.output.rows(); ++r) {
      os << "  [";
      for (std::size_t c = 0; c < entry.output.cols(); ++c)
        os << " " << std::setw(static_cast<int>(width)) << complex_to_human(entry.output(r, c), precision);
      os << " ]\n";
    }
    os << std::fixed << std::setprecision(precision);
    os << "  trace  " << entry.trace_value << "\n";
    os << "  purity " << entry.purity_value << "\n";
    if (entry.probabilities) {
      os << "  probabilities";
      for (double p : *entry.probabilities) os << "  " << p;
      os << "\n";
    }
    if (entry.verdict) os << "  verdict " << (*entry.verdict ? "yes" : "no") << "\n";
    os.unsetf(std::ios::fixed);
    os << std::setprecision(6);
  }
  return os.str();
}

}  // namespace qsw
