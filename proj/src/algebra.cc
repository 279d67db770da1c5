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

#include "kbgeo/algebra.h"

#include <algorithm>
#include <cctype>
#include <limits>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "kbgeo/error.h"
#include "lexer.h"

namespace kbgeo {

const char* ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kSyntax: return "syntax";
    case ErrorKind::kUnknownSymbol: return "unknown-symbol";
    case ErrorKind::kArity: return "arity";
    case ErrorKind::kVariable: return "variable";
    case ErrorKind::kMismatch: return "mismatch";
    case ErrorKind::kBound: return "bound";
    case ErrorKind::kValidation: return "validation";
    case ErrorKind::kIo: return "io";
  }
  return "unknown";
}

bool IsIdentifier(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' ||
          c == '\'')) {
      return false;
    }
  }
  return s.front() != '\'';
}

bool IsReservedWord(std::string_view s) {
  return s == "true" || s == "false" || s == "exists" || s == "forall" ||
         s == "subst";
}

// ---------------------------------------------------------------- Signature

Signature::Signature(std::vector<OpSymbol> ops, std::vector<RelSymbol> rels,
                     bool with_equality)
    : ops_(std::move(ops)), rels_(std::move(rels)),
      with_equality_(with_equality) {
  std::set<std::string> seen;
  auto claim = [&](const std::string& name) {
    if (!IsIdentifier(name) || IsReservedWord(name)) {
      throw Error(ErrorKind::kValidation, "invalid symbol name '" + name + "'");
    }
    if (!seen.insert(name).second) {
      throw Error(ErrorKind::kValidation, "duplicate symbol '" + name + "'");
    }
  };
  for (const OpSymbol& op : ops_) {
    claim(op.name);
    if (op.arity < 0) {
      throw Error(ErrorKind::kValidation, "op " + op.name + " has negative arity");
    }
  }
  for (const RelSymbol& rel : rels_) {
    claim(rel.name);
    if (rel.arity < 1) {
      throw Error(ErrorKind::kValidation,
                  "rel " + rel.name + " must have arity >= 1");
    }
  }
}

std::optional<std::size_t> Signature::find_op(std::string_view name) const {
  for (std::size_t i = 0; i < ops_.size(); ++i) {
    if (ops_[i].name == name) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> Signature::find_rel(std::string_view name) const {
  for (std::size_t i = 0; i < rels_.size(); ++i) {
    if (rels_[i].name == name) return i;
  }
  return std::nullopt;
}

Signature Signature::with_equality(bool on) const {
  Signature out = *this;
  out.with_equality_ = on;
  return out;
}

// ------------------------------------------------------------------- VarSet

VarSet::VarSet(std::vector<std::string> names) : names_(std::move(names)) {
  std::set<std::string> seen;
  for (const std::string& n : names_) {
    if (!IsIdentifier(n) || IsReservedWord(n)) {
      throw Error(ErrorKind::kValidation, "invalid variable name '" + n + "'");
    }
    if (!seen.insert(n).second) {
      throw Error(ErrorKind::kValidation, "duplicate variable '" + n + "'");
    }
  }
}

std::optional<std::size_t> VarSet::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return i;
  }
  return std::nullopt;
}

std::string VarSet::to_string() const {
  std::string out = "{";
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (i) out += ',';
    out += names_[i];
  }
  return out + "}";
}

// --------------------------------------------------------------------- Term

Term Term::Var(std::string name) {
  auto node = std::make_shared<Node>();
  node->is_var = true;
  node->name = std::move(name);
  return Term(std::move(node));
}

Term Term::Apply(std::string op, std::vector<Term> args) {
  auto node = std::make_shared<Node>();
  node->is_var = false;
  node->name = std::move(op);
  int depth = 0;
  for (const Term& a : args) depth = std::max(depth, a.depth());
  node->depth = depth + 1;
  node->args = std::move(args);
  return Term(std::move(node));
}

namespace {
void CollectVars(const Term& t, std::vector<std::string>& out) {
  if (t.is_var()) {
    if (std::find(out.begin(), out.end(), t.name()) == out.end()) {
      out.push_back(t.name());
    }
    return;
  }
  for (const Term& a : t.args()) CollectVars(a, out);
}
}  // namespace

std::vector<std::string> Term::variables() const {
  std::vector<std::string> out;
  CollectVars(*this, out);
  return out;
}

bool Term::only_uses(const VarSet& vars) const {
  if (is_var()) return vars.contains(name());
  for (const Term& a : args()) {
    if (!a.only_uses(vars)) return false;
  }
  return true;
}

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  return a.is_var() == b.is_var() && a.name() == b.name() &&
         a.args() == b.args();
}

std::string ToString(const Term& t) {
  if (t.is_var() || t.args().empty()) return t.name();
  std::string out = t.name() + "(";
  for (std::size_t i = 0; i < t.args().size(); ++i) {
    if (i) out += ',';
    out += ToString(t.args()[i]);
  }
  return out + ")";
}

void ValidateTerm(const Term& t, const Signature& sig, const VarSet& vars) {
  if (t.is_var()) {
    if (!vars.contains(t.name())) {
      throw Error(ErrorKind::kVariable, "variable " + t.name() + " not in " +
                                            vars.to_string());
    }
    return;
  }
  const auto op = sig.find_op(t.name());
  if (!op) {
    throw Error(ErrorKind::kUnknownSymbol, "unknown operation " + t.name());
  }
  const int arity = sig.ops()[*op].arity;
  if (static_cast<int>(t.args().size()) != arity) {
    throw Error(ErrorKind::kArity,
                "operation " + t.name() + " expects " + std::to_string(arity) +
                    " argument(s), got " + std::to_string(t.args().size()));
  }
  for (const Term& a : t.args()) ValidateTerm(a, sig, vars);
}

// ------------------------------------------------------------- Substitution

Substitution::Substitution(VarSet source, VarSet target,
                           std::vector<Term> images)
    : source_(std::move(source)), target_(std::move(target)),
      images_(std::move(images)) {
  if (images_.size() != source_.size()) {
    throw Error(ErrorKind::kMismatch,
                "substitution must give an image for every variable of " +
                    source_.to_string());
  }
  for (const Term& t : images_) {
    if (!t.only_uses(target_)) {
      throw Error(ErrorKind::kVariable, "substitution image " + ToString(t) +
                                            " is not a term over " +
                                            target_.to_string());
    }
  }
}

Substitution Substitution::Identity(const VarSet& vars) {
  std::vector<Term> images;
  images.reserve(vars.size());
  for (const std::string& v : vars) images.push_back(Term::Var(v));
  return Substitution(vars, vars, std::move(images));
}

Substitution Substitution::Renaming(const VarSet& source, const VarSet& target,
                                    const std::vector<std::string>& renamed) {
  std::vector<Term> images;
  images.reserve(renamed.size());
  for (const std::string& v : renamed) images.push_back(Term::Var(v));
  return Substitution(source, target, std::move(images));
}

const Term* Substitution::image_of(std::string_view var) const {
  const auto i = source_.index_of(var);
  return i ? &images_[*i] : nullptr;
}

Term Substitution::apply(const Term& t) const {
  if (t.is_var()) {
    const Term* img = image_of(t.name());
    if (img == nullptr) {
      throw Error(ErrorKind::kVariable, "variable " + t.name() + " not in " +
                                            source_.to_string());
    }
    return *img;
  }
  std::vector<Term> args;
  args.reserve(t.args().size());
  for (const Term& a : t.args()) args.push_back(apply(a));
  return Term::Apply(t.name(), std::move(args));
}

bool Substitution::is_identity() const {
  if (source_ != target_) return false;
  for (std::size_t i = 0; i < images_.size(); ++i) {
    if (!images_[i].is_var() || images_[i].name() != source_[i]) return false;
  }
  return true;
}

int Substitution::depth() const {
  int d = 0;
  for (const Term& t : images_) d = std::max(d, t.depth());
  return d;
}

std::optional<Substitution> Substitution::inverse() const {
  if (source_.size() != target_.size()) return std::nullopt;
  std::vector<std::optional<std::string>> back(target_.size());
  for (std::size_t i = 0; i < images_.size(); ++i) {
    if (!images_[i].is_var()) return std::nullopt;
    const std::size_t j = *target_.index_of(images_[i].name());
    if (back[j]) return std::nullopt;
    back[j] = source_[i];
  }
  std::vector<Term> images;
  for (const auto& b : back) images.push_back(Term::Var(*b));
  return Substitution(target_, source_, std::move(images));
}

std::string ToString(const Substitution& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.source().size(); ++i) {
    if (i) out += ',';
    out += s.source()[i] + ":=" + ToString(s.image(i));
  }
  return out + "}";
}

Substitution ComposeSubst(const Substitution& s1, const Substitution& s2) {
  if (s1.target() != s2.source()) {
    throw Error(ErrorKind::kMismatch,
                "cannot compose: target " + s1.target().to_string() +
                    " differs from source " + s2.source().to_string());
  }
  std::vector<Term> images;
  images.reserve(s1.images().size());
  for (const Term& t : s1.images()) images.push_back(s2.apply(t));
  return Substitution(s1.source(), s2.target(), std::move(images));
}

// -------------------------------------------------------------------- Model

std::optional<Elem> Model::find_element(std::string_view label) const {
  for (std::size_t i = 0; i < carrier_.size(); ++i) {
    if (carrier_[i] == label) return static_cast<Elem>(i);
  }
  return std::nullopt;
}

std::size_t Model::tuple_index(std::span<const Elem> args) const {
  std::size_t idx = 0;
  for (Elem a : args) idx = idx * carrier_.size() + static_cast<std::size_t>(a);
  return idx;
}

namespace {
// Decodes a row-major tuple index into `out`.
void DecodeTuple(std::size_t idx, std::size_t n, std::span<Elem> out) {
  for (std::size_t i = out.size(); i-- > 0;) {
    out[i] = static_cast<Elem>(idx % n);
    idx /= n;
  }
}
}  // namespace

std::vector<std::vector<Elem>> Model::rel_tuples(std::size_t rel) const {
  const std::size_t arity = signature_.rels()[rel].arity;
  std::vector<std::vector<Elem>> out;
  for (std::size_t idx : rel_tables_[rel].indices()) {
    std::vector<Elem> t(arity);
    DecodeTuple(idx, carrier_.size(), t);
    out.push_back(std::move(t));
  }
  return out;
}

ModelPtr Model::with_equality(bool on) const {
  auto copy = std::shared_ptr<Model>(new Model(*this));
  copy->signature_ = signature_.with_equality(on);
  return copy;
}

ModelPtr Model::permuted(std::span<const Elem> perm,
                         std::vector<std::string> labels) const {
  const std::size_t n = carrier_.size();
  if (perm.size() != n || labels.size() != n) {
    throw Error(ErrorKind::kMismatch, "permutation size differs from carrier");
  }
  ModelBuilder b(signature_, std::move(labels));
  for (std::size_t op = 0; op < op_tables_.size(); ++op) {
    const std::size_t arity = signature_.ops()[op].arity;
    std::vector<Elem> args(arity);
    for (std::size_t idx = 0; idx < op_tables_[op].size(); ++idx) {
      DecodeTuple(idx, n, args);
      std::vector<Elem> mapped(arity);
      for (std::size_t i = 0; i < arity; ++i) mapped[i] = perm[args[i]];
      b.set_op(signature_.ops()[op].name, mapped, perm[op_tables_[op][idx]]);
    }
  }
  for (std::size_t rel = 0; rel < rel_tables_.size(); ++rel) {
    for (std::vector<Elem>& t : rel_tuples(rel)) {
      for (Elem& e : t) e = perm[e];
      b.add_tuple(signature_.rels()[rel].name, t);
    }
  }
  return b.build();
}

ModelBuilder::ModelBuilder(Signature sig, std::vector<std::string> carrier)
    : signature_(std::move(sig)), carrier_(std::move(carrier)) {
  if (carrier_.empty()) {
    throw Error(ErrorKind::kValidation, "carrier must be nonempty");
  }
  std::set<std::string> seen;
  for (const std::string& c : carrier_) {
    if (c.empty() || !seen.insert(c).second) {
      throw Error(ErrorKind::kValidation, "duplicate or empty carrier label '" +
                                              c + "'");
    }
  }
  const std::size_t n = carrier_.size();
  for (const OpSymbol& op : signature_.ops()) {
    op_rows_.emplace_back(CheckedPower(n, op.arity, 1u << 24));
  }
  for (const RelSymbol& rel : signature_.rels()) {
    rel_tables_.emplace_back(CheckedPower(n, rel.arity, 1u << 24));
  }
}

Elem ModelBuilder::element(const std::string& label) const {
  for (std::size_t i = 0; i < carrier_.size(); ++i) {
    if (carrier_[i] == label) return static_cast<Elem>(i);
  }
  throw Error(ErrorKind::kValidation, "element '" + label +
                                          "' is not in the carrier");
}

ModelBuilder& ModelBuilder::set_op(std::string_view op,
                                   std::vector<Elem> inputs, Elem output) {
  const auto idx = signature_.find_op(op);
  if (!idx) {
    throw Error(ErrorKind::kUnknownSymbol,
                "unknown operation " + std::string(op));
  }
  const OpSymbol& sym = signature_.ops()[*idx];
  if (static_cast<int>(inputs.size()) != sym.arity) {
    throw Error(ErrorKind::kArity, "op " + sym.name + " row has " +
                                       std::to_string(inputs.size()) +
                                       " inputs, expected " +
                                       std::to_string(sym.arity));
  }
  const auto n = static_cast<Elem>(carrier_.size());
  auto in_range = [n](Elem e) { return e >= 0 && e < n; };
  if (!in_range(output) || !std::all_of(inputs.begin(), inputs.end(), in_range)) {
    throw Error(ErrorKind::kValidation,
                "op " + sym.name + " row leaves the carrier");
  }
  std::size_t row = 0;
  for (Elem a : inputs) row = row * carrier_.size() + a;
  auto& slot = op_rows_[*idx][row];
  if (slot && *slot != output) {
    throw Error(ErrorKind::kValidation,
                "op " + sym.name + " has conflicting rows");
  }
  slot = output;
  return *this;
}

ModelBuilder& ModelBuilder::add_tuple(std::string_view rel,
                                      std::vector<Elem> tuple) {
  const auto idx = signature_.find_rel(rel);
  if (!idx) {
    throw Error(ErrorKind::kUnknownSymbol,
                "unknown relation " + std::string(rel));
  }
  const RelSymbol& sym = signature_.rels()[*idx];
  if (static_cast<int>(tuple.size()) != sym.arity) {
    throw Error(ErrorKind::kArity, "rel " + sym.name + " tuple has " +
                                       std::to_string(tuple.size()) +
                                       " entries, expected " +
                                       std::to_string(sym.arity));
  }
  std::size_t row = 0;
  for (Elem a : tuple) {
    if (a < 0 || a >= static_cast<Elem>(carrier_.size())) {
      throw Error(ErrorKind::kValidation,
                  "rel " + sym.name + " tuple lies outside the carrier");
    }
    row = row * carrier_.size() + a;
  }
  rel_tables_[*idx].set(row);
  return *this;
}

ModelBuilder& ModelBuilder::set_op(std::string_view op,
                                   const std::vector<std::string>& inputs,
                                   const std::string& output) {
  std::vector<Elem> in;
  for (const std::string& s : inputs) in.push_back(element(s));
  return set_op(op, std::move(in), element(output));
}

ModelBuilder& ModelBuilder::add_tuple(std::string_view rel,
                                      const std::vector<std::string>& tuple) {
  std::vector<Elem> t;
  for (const std::string& s : tuple) t.push_back(element(s));
  return add_tuple(rel, std::move(t));
}

ModelPtr ModelBuilder::build() const {
  auto model = std::shared_ptr<Model>(new Model());
  model->signature_ = signature_;
  model->carrier_ = carrier_;
  for (std::size_t op = 0; op < op_rows_.size(); ++op) {
    std::vector<Elem> table;
    table.reserve(op_rows_[op].size());
    for (const auto& v : op_rows_[op]) {
      if (!v) {
        throw Error(ErrorKind::kValidation,
                    "op " + signature_.ops()[op].name + " not total");
      }
      table.push_back(*v);
    }
    model->op_tables_.push_back(std::move(table));
  }
  model->rel_tables_ = rel_tables_;
  return model;
}

std::string ToString(const ModelMap& m) {
  std::string out;
  for (std::size_t i = 0; i < m.mapping.size(); ++i) {
    if (i) out += ',';
    out += m.source->label(static_cast<Elem>(i)) + "->" +
           m.target->label(m.mapping[i]);
  }
  return out;
}

std::size_t CheckedPower(std::size_t base, std::size_t exponent,
                         std::size_t bound) {
  std::size_t out = 1;
  for (std::size_t i = 0; i < exponent; ++i) {
    if (base != 0 && out > bound / base) {
      throw Error(ErrorKind::kBound,
                  std::to_string(base) + "^" + std::to_string(exponent) +
                      " exceeds the bound " + std::to_string(bound));
    }
    out *= base;
  }
  if (out > bound) {
    throw Error(ErrorKind::kBound, std::to_string(base) + "^" +
                                       std::to_string(exponent) +
                                       " exceeds the bound " +
                                       std::to_string(bound));
  }
  return out;
}

// ------------------------------------------------------------- Term parsing

namespace internal {

Term ParseTermFrom(TokenStream& ts, const Signature& sig, const VarSet& vars) {
  const Token head = ts.expect(Tok::kIdent, "a term");
  if (ts.at(Tok::kLParen)) {
    const auto op = sig.find_op(head.text);
    if (!op) {
      throw Error(ErrorKind::kUnknownSymbol,
                  "unknown operation '" + head.text + "' at position " +
                      std::to_string(head.pos));
    }
    ts.next();
    std::vector<Term> args;
    args.push_back(ParseTermFrom(ts, sig, vars));
    while (ts.accept(Tok::kComma)) args.push_back(ParseTermFrom(ts, sig, vars));
    ts.expect(Tok::kRParen, "')'");
    const int arity = sig.ops()[*op].arity;
    if (static_cast<int>(args.size()) != arity) {
      throw Error(ErrorKind::kArity,
                  "operation " + head.text + " expects " +
                      std::to_string(arity) + " argument(s), got " +
                      std::to_string(args.size()));
    }
    return Term::Apply(head.text, std::move(args));
  }
  if (vars.contains(head.text)) return Term::Var(head.text);
  if (const auto op = sig.find_op(head.text)) {
    const int arity = sig.ops()[*op].arity;
    if (arity != 0) {
      throw Error(ErrorKind::kArity, "operation " + head.text + " expects " +
                                         std::to_string(arity) +
                                         " argument(s), got 0");
    }
    return Term::Apply(head.text, {});
  }
  if (sig.find_rel(head.text)) {
    throw Error(ErrorKind::kUnknownSymbol,
                "'" + head.text + "' is a relation, not a term");
  }
  throw Error(ErrorKind::kVariable, "variable " + head.text + " not in " +
                                        vars.to_string());
}

}  // namespace internal

Term ParseTerm(std::string_view text, const Signature& sig,
               const VarSet& vars) {
  internal::TokenStream ts(text);
  Term t = internal::ParseTermFrom(ts, sig, vars);
  if (!ts.at(internal::Tok::kEnd)) {
    internal::SyntaxError(ts.peek().pos, "trailing input '" + ts.peek().text + "'");
  }
  return t;
}

Elem EvalTerm(const Term& w, const VarSet& vars, std::span<const Elem> point,
              const Model& model) {
  if (w.is_var()) {
    const auto i = vars.index_of(w.name());
    if (!i) {
      throw Error(ErrorKind::kVariable,
                  "variable " + w.name() + " not in " + vars.to_string());
    }
    return point[*i];
  }
  const auto op = model.signature().find_op(w.name());
  if (!op) throw Error(ErrorKind::kUnknownSymbol, "unknown operation " + w.name());
  std::vector<Elem> args;
  args.reserve(w.args().size());
  for (const Term& a : w.args()) args.push_back(EvalTerm(a, vars, point, model));
  return model.apply_op(*op, args);
}

// ------------------------------------------------------------ Term clone

namespace {

struct TableHash {
  std::size_t operator()(const std::vector<Elem>& v) const {
    std::uint64_t h = 1469598103934665603ull;
    for (Elem e : v) {
      h ^= static_cast<std::uint64_t>(e) + 1;
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

constexpr std::size_t kMaxTuplesPerRound = 100000000;

}  // namespace

TermClone TermFunctions(const Model& model, const VarSet& vars,
                        const CloneOptions& options) {
  const std::size_t n = model.carrier_size();
  const std::size_t k = vars.size();
  const std::size_t points = CheckedPower(n, k, options.max_points);

  TermClone clone;
  std::unordered_map<std::vector<Elem>, std::size_t, TableHash> index;
  auto add = [&](std::vector<Elem> table, Term witness) {
    if (index.count(table)) return;
    index.emplace(table, clone.functions.size());
    clone.functions.push_back({std::move(table), std::move(witness)});
  };

  std::size_t stride = points;
  for (std::size_t i = 0; i < k; ++i) {
    stride /= n;
    std::vector<Elem> table(points);
    for (std::size_t p = 0; p < points; ++p) {
      table[p] = static_cast<Elem>((p / stride) % n);
    }
    add(std::move(table), Term::Var(vars[i]));
  }

  const Signature& sig = model.signature();
  // One closure round: applies every op to every tuple of functions with
  // indices below `end` that uses at least one index >= `begin`. When
  // `commit` is false it only reports whether something new would appear.
  enum class RoundResult { kNothingNew, kAdded, kBudget };
  auto round = [&](std::size_t begin, std::size_t end, bool first,
                   bool commit) -> RoundResult {
    bool added = false;
    std::vector<Elem> args;
    for (std::size_t op = 0; op < sig.ops().size(); ++op) {
      const std::size_t arity = sig.ops()[op].arity;
      if (arity == 0 && !first) continue;
      std::size_t combos = 1;
      for (std::size_t a = 0; a < arity; ++a) {
        if (combos > kMaxTuplesPerRound / std::max<std::size_t>(end, 1)) {
          return RoundResult::kBudget;
        }
        combos *= end;
      }
      std::vector<std::size_t> tuple(arity, 0);
      for (std::size_t c = 0; c < combos; ++c) {
        std::size_t rest = c;
        bool fresh = arity == 0;
        for (std::size_t a = arity; a-- > 0;) {
          tuple[a] = rest % end;
          rest /= end;
          if (tuple[a] >= begin) fresh = true;
        }
        if (!fresh) continue;
        std::vector<Elem> table(points);
        args.resize(arity);
        for (std::size_t p = 0; p < points; ++p) {
          for (std::size_t a = 0; a < arity; ++a) {
            args[a] = clone.functions[tuple[a]].table[p];
          }
          table[p] = model.apply_op(op, args);
        }
        if (index.count(table)) continue;
        if (!commit) return RoundResult::kAdded;
        if (clone.functions.size() >= options.max_functions) {
          return RoundResult::kBudget;
        }
        std::vector<Term> wargs;
        for (std::size_t a = 0; a < arity; ++a) {
          wargs.push_back(clone.functions[tuple[a]].witness);
        }
        add(std::move(table), Term::Apply(sig.ops()[op].name, std::move(wargs)));
        added = true;
      }
    }
    return added ? RoundResult::kAdded : RoundResult::kNothingNew;
  };

  std::size_t begin = 0;
  std::size_t end = clone.functions.size();
  int depth = 0;
  while (true) {
    const bool first = depth == 0;
    if (options.max_term_depth && depth >= *options.max_term_depth) {
      const RoundResult probe = round(begin, end, first, /*commit=*/false);
      clone.saturated = probe == RoundResult::kNothingNew;
      break;
    }
    const RoundResult r = round(begin, end, first, /*commit=*/true);
    if (r == RoundResult::kBudget) {
      clone.saturated = false;
      break;
    }
    if (r == RoundResult::kNothingNew) break;
    begin = end;
    end = clone.functions.size();
    ++depth;
  }
  return clone;
}

// ------------------------------------------------------ Model isomorphisms

bool IsModelIsomorphism(const Model& m1, const Model& m2,
                        std::span<const Elem> mapping) {
  const std::size_t n = m1.carrier_size();
  const Signature& sig = m1.signature();
  std::vector<Elem> args;
  std::vector<Elem> mapped;
  for (std::size_t op = 0; op < sig.ops().size(); ++op) {
    const std::size_t arity = sig.ops()[op].arity;
    args.resize(arity);
    mapped.resize(arity);
    const std::vector<Elem>& table = m1.op_table(op);
    for (std::size_t idx = 0; idx < table.size(); ++idx) {
      DecodeTuple(idx, n, args);
      for (std::size_t i = 0; i < arity; ++i) mapped[i] = mapping[args[i]];
      if (m2.apply_op(op, mapped) != mapping[table[idx]]) return false;
    }
  }
  for (std::size_t rel = 0; rel < sig.rels().size(); ++rel) {
    const std::size_t arity = sig.rels()[rel].arity;
    args.resize(arity);
    mapped.resize(arity);
    const Bitset& table = m1.rel_table(rel);
    for (std::size_t idx = 0; idx < table.size(); ++idx) {
      DecodeTuple(idx, n, args);
      for (std::size_t i = 0; i < arity; ++i) mapped[i] = mapping[args[i]];
      if (m2.holds(rel, mapped) != table.test(idx)) return false;
    }
  }
  return true;
}

std::vector<ModelMap> ModelIsomorphisms(const ModelPtr& m1,
                                        const ModelPtr& m2) {
  if (m1->signature() != m2->signature()) {
    throw Error(ErrorKind::kMismatch, "models have different signatures");
  }
  std::vector<ModelMap> out;
  const std::size_t n = m1->carrier_size();
  if (n != m2->carrier_size()) return out;

  // Unary relations and nullary operations prune the bijection early.
  const Signature& sig = m1->signature();
  std::vector<std::size_t> unary_rels;
  for (std::size_t r = 0; r < sig.rels().size(); ++r) {
    if (sig.rels()[r].arity == 1) unary_rels.push_back(r);
  }
  auto compatible = [&](Elem a, Elem b) {
    for (std::size_t r : unary_rels) {
      if (m1->rel_table(r).test(a) != m2->rel_table(r).test(b)) return false;
    }
    return true;
  };

  std::vector<Elem> mapping(n, -1);
  std::vector<bool> used(n, false);
  auto search = [&](auto&& self, std::size_t i) -> void {
    if (i == n) {
      if (IsModelIsomorphism(*m1, *m2, mapping)) {
        out.push_back({m1, m2, mapping});
      }
      return;
    }
    for (std::size_t t = 0; t < n; ++t) {
      if (used[t] || !compatible(static_cast<Elem>(i), static_cast<Elem>(t))) {
        continue;
      }
      used[t] = true;
      mapping[i] = static_cast<Elem>(t);
      self(self, i + 1);
      used[t] = false;
    }
  };
  search(search, 0);
  return out;
}

// ------------------------------------------------------------ Enumeration

std::vector<Term> EnumerateTerms(const Signature& sig, const VarSet& vars,
                                 int depth, std::size_t max_count) {
  std::vector<Term> out;
  for (const std::string& v : vars) out.push_back(Term::Var(v));
  std::size_t begin = 0;
  for (int d = 1; d <= depth; ++d) {
    const std::size_t end = out.size();
    for (const OpSymbol& op : sig.ops()) {
      if (op.arity == 0) {
        if (d == 1) out.push_back(Term::Apply(op.name, {}));
        continue;
      }
      std::size_t combos = 1;
      for (int a = 0; a < op.arity; ++a) {
        if (combos > max_count / std::max<std::size_t>(end, 1)) {
          throw Error(ErrorKind::kBound, "term enumeration exceeds " +
                                             std::to_string(max_count));
        }
        combos *= end;
      }
      std::vector<std::size_t> tuple(op.arity);
      for (std::size_t c = 0; c < combos; ++c) {
        std::size_t rest = c;
        bool fresh = false;
        for (std::size_t a = op.arity; a-- > 0;) {
          tuple[a] = rest % end;
          rest /= end;
          if (tuple[a] >= begin && out[tuple[a]].depth() == d - 1) fresh = true;
        }
        if (!fresh) continue;
        std::vector<Term> args;
        for (std::size_t t : tuple) args.push_back(out[t]);
        out.push_back(Term::Apply(op.name, std::move(args)));
        if (out.size() > max_count) {
          throw Error(ErrorKind::kBound,
                      "term enumeration exceeds " + std::to_string(max_count));
        }
      }
    }
    begin = end;
  }
  return out;
}

std::vector<Substitution> EnumerateSubstitutions(const Signature& sig,
                                                 const VarSet& source,
                                                 const VarSet& target,
                                                 int depth,
                                                 std::size_t max_count) {
  const std::vector<Term> terms = EnumerateTerms(sig, target, depth);
  const std::size_t total = CheckedPower(terms.size(), source.size(), max_count);
  std::vector<Substitution> out;
  out.reserve(total);
  std::vector<Term> images(source.size(), terms.front());
  for (std::size_t c = 0; c < total; ++c) {
    std::size_t rest = c;
    for (std::size_t i = source.size(); i-- > 0;) {
      images[i] = terms[rest % terms.size()];
      rest /= terms.size();
    }
    out.emplace_back(source, target, images);
  }
  return out;
}

}  // namespace kbgeo
