// Copyright 2026 The kbgeo Authors
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

#include "kbgeo/cli.h"

#include <algorithm>
#include <cstdlib>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "kbgeo/categories.h"
#include "kbgeo/equivalence.h"
#include "kbgeo/error.h"
#include "kbgeo/formula.h"
#include "kbgeo/lattice.h"
#include "kbgeo/model_io.h"

namespace kbgeo {

RunConfig DefaultRunConfig() {
  RunConfig config;
  if (const char* env = std::getenv("KBGEO_MAX_POINTS")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) config.max_points = v;
  }
  return config;
}

namespace {

std::string Trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> SplitCommas(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t at = s.find(',', start);
    out.push_back(Trim(s.substr(start, at - start)));
    if (at == std::string_view::npos) break;
    start = at + 1;
  }
  return out;
}

VarSet ParseVars(const std::string& text) {
  std::vector<std::string> names = SplitCommas(text);
  for (const std::string& n : names) {
    if (!IsIdentifier(n) || IsReservedWord(n)) {
      throw Error(ErrorKind::kVariable, "bad variable name '" + n + "'");
    }
  }
  return VarSet(std::move(names));
}

}  // namespace

PointSet ParsePointSet(std::string_view text, const SpacePtr& space) {
  std::string body = Trim(text);
  if (!body.empty() && body.front() == '{') {
    if (body.back() != '}') {
      throw Error(ErrorKind::kSyntax, "point set: missing '}'");
    }
    body = Trim(std::string_view(body).substr(1, body.size() - 2));
  }
  Bitset bits(space->size());
  const Model& model = *space->model();
  std::size_t pos = 0;
  while (true) {
    while (pos < body.size() && (body[pos] == ' ' || body[pos] == ',')) ++pos;
    if (pos >= body.size()) break;
    if (body[pos] != '(') {
      throw Error(ErrorKind::kSyntax,
                  "point set: expected '(' at offset " + std::to_string(pos));
    }
    const std::size_t close = body.find(')', pos);
    if (close == std::string::npos) {
      throw Error(ErrorKind::kSyntax, "point set: missing ')'");
    }
    const std::vector<std::string> labels =
        SplitCommas(std::string_view(body).substr(pos + 1, close - pos - 1));
    if (labels.size() != space->dim()) {
      throw Error(ErrorKind::kArity,
                  "point set: point with " + std::to_string(labels.size()) +
                      " coordinates in a space of dimension " +
                      std::to_string(space->dim()));
    }
    std::vector<Elem> values;
    for (const std::string& label : labels) {
      const auto e = model.find_element(label);
      if (!e) {
        throw Error(ErrorKind::kUnknownSymbol,
                    "point set: '" + label + "' is not a carrier element");
      }
      values.push_back(*e);
    }
    bits.set(space->index_of(values));
    pos = close + 1;
  }
  return PointSet(space, std::move(bits));
}

namespace {

struct Globals {
  std::string format = "text";
  bool no_equality = false;
  std::size_t max_points = 0;
};

ModelPtr Load(const std::string& path, const Globals& g) {
  ModelPtr m = LoadModel(path);
  return g.no_equality ? m->with_equality(false) : m;
}

ReportFormat FormatOf(const Globals& g) {
  return g.format == "machine" ? ReportFormat::kMachine : ReportFormat::kText;
}

int VerdictExit(const std::string& verdict) {
  if (verdict == "PASS") return kExitPass;
  if (verdict == "FAIL") return kExitFail;
  return kExitUnknown;
}

int EquivExit(Verdict v) {
  switch (v) {
    case Verdict::kWitnessed:
      return kExitPass;
    case Verdict::kInequivalent:
      return kExitFail;
    case Verdict::kUnknown:
      return kExitUnknown;
  }
  return kExitUnknown;
}

}  // namespace

int RunCommand(const std::vector<std::string>& args, const RunConfig& config,
               std::ostream& out, std::ostream& err) {
  CLI::App app{"kbgeo: knowledge-base geometry over finite models"};
  app.name("kbgeo");
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  g.format = config.format == ReportFormat::kMachine ? "machine" : "text";
  g.no_equality = !config.with_equality;
  g.max_points = config.max_points;
  app.add_option("--format", g.format, "Report format")
      ->check(CLI::IsMember({"text", "machine"}));
  app.add_flag("--no-equality", g.no_equality,
               "Switch off the built-in equality atom");
  app.add_option("--max-points", g.max_points,
                 "Largest point space to enumerate")
      ->check(CLI::PositiveNumber);

  std::string model_path, model2_path, vars_text, formula_text, points_text;
  std::string mode = "info", phi_text;
  int n_max = config.n_max;
  int depth = config.depth;
  int duality_depth = 1;
  std::size_t max_nodes = SearchOptions{}.max_nodes;

  auto* eval = app.add_subcommand("eval", "Print the point set of a formula");
  eval->add_option("model", model_path, "Model file")->required();
  eval->add_option("--vars", vars_text, "Variables, comma separated")
      ->required();
  eval->add_option("--formula", formula_text, "Formula text")->required();

  auto* closure =
      app.add_subcommand("closure", "Galois closure of a point set");
  closure->add_option("model", model_path, "Model file")->required();
  closure->add_option("--vars", vars_text, "Variables, comma separated")
      ->required();
  closure->add_option("--points", points_text, "Point set, e.g. {(1,0)}")
      ->required();

  auto* lattice =
      app.add_subcommand("lattice", "Dump the definable sets over X");
  lattice->add_option("model", model_path, "Model file")->required();
  lattice->add_option("--vars", vars_text, "Variables, comma separated")
      ->required();

  auto* duality =
      app.add_subcommand("duality", "Check the description/content duality");
  duality->add_option("model", model_path, "Model file")->required();
  duality->add_option("--max-vars", n_max, "Pool size")
      ->check(CLI::Range(1, 16));
  duality->add_option("--depth", duality_depth, "Substitution depth")
      ->check(CLI::NonNegativeNumber);

  auto* functor =
      app.add_subcommand("functor", "Check functoriality of Cl");
  functor->add_option("model", model_path, "Model file")->required();
  functor->add_option("--max-vars", n_max, "Pool size")
      ->check(CLI::Range(1, 16));
  functor->add_option("--depth", depth, "Substitution depth")
      ->check(CLI::NonNegativeNumber);

  auto* equiv = app.add_subcommand("equiv", "Compare two knowledge bases");
  equiv->add_option("model1", model_path, "First model file")->required();
  equiv->add_option("model2", model2_path, "Second model file")->required();
  equiv->add_option("--mode", mode, "iso, lae or info")
      ->check(CLI::IsMember({"iso", "lae", "info"}));
  equiv->add_option("--phi", phi_text,
                    "identity | swaprel P Q ... | permrel A:B,... | renamevars x:y,...");
  equiv->add_option("--max-vars", n_max, "Pool size")
      ->check(CLI::Range(1, 16));
  equiv->add_option("--depth", depth, "Substitution depth")
      ->check(CLI::NonNegativeNumber);
  equiv->add_option("--max-nodes", max_nodes, "Search node budget")
      ->check(CLI::PositiveNumber);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    const CLI::App* sub = nullptr;
    for (const CLI::App* s : app.get_subcommands()) sub = s;
    err << (sub ? sub->help() : app.help());
    return kExitUsage;
  }

  const ReportFormat format = FormatOf(g);
  try {
    if (eval->parsed()) {
      const ModelPtr model = Load(model_path, g);
      const VarSet vars = ParseVars(vars_text);
      const Formula f =
          ParseFormula(formula_text, FormulaContext{model->signature(), vars});
      const PointSet val =
          Val(f, AffineSpace::Create(model, vars, g.max_points));
      if (format == ReportFormat::kText) {
        out << val.to_string() << "\n";
      } else {
        Report r;
        r.add("vars", vars.to_string());
        r.add("formula", ToString(f));
        r.add("points", val.to_string());
        r.add("count", val.size());
        out << WriteReport(r, format);
      }
      return kExitPass;
    }
    if (closure->parsed()) {
      const ModelPtr model = Load(model_path, g);
      const VarSet vars = ParseVars(vars_text);
      const SpacePtr space = AffineSpace::Create(model, vars, g.max_points);
      const PointSet a = ParsePointSet(points_text, space);
      AlgebraOptions options;
      options.clone.max_points = g.max_points;
      const AlgebraPtr alg =
          GenerateDefinableAlgebra(model, vars, options, g.max_points);
      const DefinableSet c = alg->Closure(a);
      Report r;
      r.add("vars", vars.to_string());
      r.add("points", a.to_string());
      r.add("closure", c.points().to_string());
      r.add("closed", c.points() == a);
      r.add("witness", ToString(c.witness()));
      r.add("saturated", alg->saturated());
      out << WriteReport(r, format);
      return kExitPass;
    }
    if (lattice->parsed()) {
      const ModelPtr model = Load(model_path, g);
      const VarSet vars = ParseVars(vars_text);
      AlgebraOptions options;
      options.clone.max_points = g.max_points;
      const AlgebraPtr alg =
          GenerateDefinableAlgebra(model, vars, options, g.max_points);
      const std::vector<DefinableSet> members = alg->members();
      if (format == ReportFormat::kText) {
        for (const DefinableSet& d : members) {
          out << d.points().bits().to_hex() << " " << d.points().size() << " "
              << ToString(d.witness()) << "\n";
        }
      } else {
        Report r;
        r.add("vars", vars.to_string());
        r.add("atoms", alg->num_blocks());
        r.add("size", members.size());
        r.add("saturated", alg->saturated());
        for (std::size_t i = 0; i < members.size(); ++i) {
          r.add("member." + std::to_string(i + 1),
                members[i].points().bits().to_hex() + " " +
                    std::to_string(members[i].points().size()) + " " +
                    ToString(members[i].witness()));
        }
        out << WriteReport(r, format);
      }
      return kExitPass;
    }
    KnowledgeBaseOptions kb_options;
    kb_options.max_points = g.max_points;
    kb_options.algebra.clone.max_points = g.max_points;
    if (duality->parsed()) {
      const auto kb = KnowledgeBase::Build(Load(model_path, g), n_max,
                                           kb_options);
      DualityOptions options;
      options.depth = duality_depth;
      const Report r = CheckDuality(*kb, options);
      out << WriteReport(r, format);
      return VerdictExit(r.get("verdict"));
    }
    if (functor->parsed()) {
      const auto kb = KnowledgeBase::Build(Load(model_path, g), n_max,
                                           kb_options);
      const Report r = VerifyClFunctoriality(*kb, depth);
      out << WriteReport(r, format);
      return VerdictExit(r.get("verdict"));
    }
    if (equiv->parsed()) {
      const ModelPtr m1 = Load(model_path, g);
      const ModelPtr m2 = Load(model2_path, g);
      EquivOptions options;
      options.n_max = n_max;
      options.depth = depth;
      options.kb = kb_options;
      options.search.max_nodes = max_nodes;
      if (!phi_text.empty()) {
        options.phi = PhiAutomorphism::Parse(phi_text, m1->signature());
      }
      EquivReport rep;
      if (mode == "iso") {
        rep = CheckIsomorphic(m1, m2);
      } else if (mode == "lae") {
        rep = CheckLogicalAutomorphicEquivalence(m1, m2, options);
      } else {
        rep = CheckInformationalEquivalence(m1, m2, options);
      }
      out << WriteReport(rep.ToReport(), format);
      return EquivExit(rep.verdict);
    }
  } catch (const Error& e) {
    err << "error: " << ErrorKindName(e.kind()) << ": " << e.what() << "\n";
    return kExitUsage;
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace kbgeo
