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

#ifndef KBGEO_FORMULA_H_
#define KBGEO_FORMULA_H_

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kbgeo/algebra.h"

namespace kbgeo {

enum class FormulaKind {
  kTrue,
  kFalse,
  kAtom,
  kEqual,
  kNot,
  kAnd,
  kOr,
  kImplies,
  kExists,
  kForall,
  kSubst,
};

// Element of the formula algebra: an immutable AST. Equality is structural;
// semantic equality is model-relative and goes through Val.
class Formula {
 public:
  static Formula True();
  static Formula False();
  static Formula Atom(std::string rel, std::vector<Term> args);
  static Formula Equal(Term lhs, Term rhs);
  static Formula Not(Formula f);
  static Formula And(Formula f, Formula g);
  static Formula Or(Formula f, Formula g);
  static Formula Implies(Formula f, Formula g);
  static Formula Exists(std::string var, Formula f);
  static Formula Forall(std::string var, Formula f);
  // Formal s_* u: a formula over s.target() built from u over s.source().
  static Formula Subst(Substitution s, Formula f);

  FormulaKind kind() const { return node_->kind; }
  // Relation name (kAtom) or bound variable (kExists/kForall).
  const std::string& name() const { return node_->name; }
  const std::vector<Term>& terms() const { return node_->terms; }
  const Formula& child(std::size_t i = 0) const { return node_->children[i]; }
  std::size_t num_children() const { return node_->children.size(); }
  // Only for kSubst.
  const Substitution& substitution() const { return *node_->subst; }

  bool is_quantifier() const {
    return kind() == FormulaKind::kExists || kind() == FormulaKind::kForall;
  }
  int depth() const { return node_->depth; }

  friend bool operator==(const Formula& a, const Formula& b);
  friend bool operator!=(const Formula& a, const Formula& b) {
    return !(a == b);
  }

 private:
  struct Node {
    FormulaKind kind = FormulaKind::kTrue;
    std::string name;
    std::vector<Term> terms;
    std::vector<Formula> children;
    std::optional<Substitution> subst;
    int depth = 0;
  };
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Formula Make(Node node);

  std::shared_ptr<const Node> node_;
};

struct FormulaContext {
  Signature signature;
  VarSet vars;
};

// Checks arities, equality availability, variable membership and the
// source/target discipline of subst nodes against the ambient VarSet.
void ValidateFormula(const Formula& f, const Signature& sig,
                     const VarSet& vars);

// Grammar, loosest to tightest:
//   f := 'exists' v '.' f | 'forall' v '.' f | 'subst' '{' v ':=' t, ... '}' f
//      | f '->' f (right assoc) | f '|' f | f '&' f (left assoc)
//      | '!' f | 'true' | 'false' | R '(' t, ... ')' | t '=' t | '(' f ')'
// Quantifier and subst bodies extend as far right as possible. A subst node
// lists its whole source VarSet in order; its target is the enclosing
// context and its body is parsed over the listed variables.
Formula ParseFormula(std::string_view text, const FormulaContext& ctx);

// Prints with minimal parentheses such that ParseFormula(ToString(f)) == f.
std::string ToString(const Formula& f);

// Free variables in first-occurrence order. For a subst node these are the
// target variables occurring in the images of the body's free variables.
std::vector<std::string> FreeVars(const Formula& f);

bool ContainsQuantifier(const Formula& f);

// s_* on formulas. Quantifier-free formulas get the terms substituted into
// every atom; anything containing a quantifier becomes Subst(s, f). The
// identity substitution returns f unchanged.
Formula ApplySubstFormula(const Substitution& s, const Formula& f);

}  // namespace kbgeo

#endif  // KBGEO_FORMULA_H_
