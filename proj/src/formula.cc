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

#include "kbgeo/formula.h"

#include <algorithm>

#include "kbgeo/error.h"
#include "lexer.h"

namespace kbgeo {

Formula Formula::Make(Node node) {
  int depth = 0;
  for (const Formula& c : node.children) depth = std::max(depth, c.depth() + 1);
  node.depth = depth;
  return Formula(std::make_shared<const Node>(std::move(node)));
}

Formula Formula::True() {
  static const Formula kTrue = [] {
    Node n;
    n.kind = FormulaKind::kTrue;
    return Make(std::move(n));
  }();
  return kTrue;
}

Formula Formula::False() {
  static const Formula kFalse = [] {
    Node n;
    n.kind = FormulaKind::kFalse;
    return Make(std::move(n));
  }();
  return kFalse;
}

Formula Formula::Atom(std::string rel, std::vector<Term> args) {
  Node n;
  n.kind = FormulaKind::kAtom;
  n.name = std::move(rel);
  n.terms = std::move(args);
  return Make(std::move(n));
}

Formula Formula::Equal(Term lhs, Term rhs) {
  Node n;
  n.kind = FormulaKind::kEqual;
  n.terms = {std::move(lhs), std::move(rhs)};
  return Make(std::move(n));
}

Formula Formula::Not(Formula f) {
  Node n;
  n.kind = FormulaKind::kNot;
  n.children = {std::move(f)};
  return Make(std::move(n));
}

Formula Formula::And(Formula f, Formula g) {
  Node n;
  n.kind = FormulaKind::kAnd;
  n.children = {std::move(f), std::move(g)};
  return Make(std::move(n));
}

Formula Formula::Or(Formula f, Formula g) {
  Node n;
  n.kind = FormulaKind::kOr;
  n.children = {std::move(f), std::move(g)};
  return Make(std::move(n));
}

Formula Formula::Implies(Formula f, Formula g) {
  Node n;
  n.kind = FormulaKind::kImplies;
  n.children = {std::move(f), std::move(g)};
  return Make(std::move(n));
}

Formula Formula::Exists(std::string var, Formula f) {
  Node n;
  n.kind = FormulaKind::kExists;
  n.name = std::move(var);
  n.children = {std::move(f)};
  return Make(std::move(n));
}

Formula Formula::Forall(std::string var, Formula f) {
  Node n;
  n.kind = FormulaKind::kForall;
  n.name = std::move(var);
  n.children = {std::move(f)};
  return Make(std::move(n));
}

Formula Formula::Subst(Substitution s, Formula f) {
  Node n;
  n.kind = FormulaKind::kSubst;
  n.subst = std::move(s);
  n.children = {std::move(f)};
  return Make(std::move(n));
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  return a.kind() == b.kind() && a.name() == b.name() &&
         a.terms() == b.terms() && a.node_->children == b.node_->children &&
         a.node_->subst == b.node_->subst;
}

// --------------------------------------------------------------- Validation

void ValidateFormula(const Formula& f, const Signature& sig,
                     const VarSet& vars) {
  switch (f.kind()) {
    case FormulaKind::kTrue:
    case FormulaKind::kFalse:
      return;
    case FormulaKind::kAtom: {
      const auto rel = sig.find_rel(f.name());
      if (!rel) {
        throw Error(ErrorKind::kUnknownSymbol, "unknown relation " + f.name());
      }
      const int arity = sig.rels()[*rel].arity;
      if (static_cast<int>(f.terms().size()) != arity) {
        throw Error(ErrorKind::kArity,
                    "relation " + f.name() + " expects " +
                        std::to_string(arity) + " argument(s), got " +
                        std::to_string(f.terms().size()));
      }
      for (const Term& t : f.terms()) ValidateTerm(t, sig, vars);
      return;
    }
    case FormulaKind::kEqual:
      if (!sig.with_equality()) {
        throw Error(ErrorKind::kUnknownSymbol,
                    "equality is disabled for this signature");
      }
      for (const Term& t : f.terms()) ValidateTerm(t, sig, vars);
      return;
    case FormulaKind::kNot:
    case FormulaKind::kAnd:
    case FormulaKind::kOr:
    case FormulaKind::kImplies:
      for (std::size_t i = 0; i < f.num_children(); ++i) {
        ValidateFormula(f.child(i), sig, vars);
      }
      return;
    case FormulaKind::kExists:
    case FormulaKind::kForall:
      if (!vars.contains(f.name())) {
        throw Error(ErrorKind::kVariable, "quantified variable " + f.name() +
                                              " not in " + vars.to_string());
      }
      ValidateFormula(f.child(), sig, vars);
      return;
    case FormulaKind::kSubst: {
      const Substitution& s = f.substitution();
      for (const std::string& v : s.target()) {
        if (!vars.contains(v)) {
          throw Error(ErrorKind::kMismatch,
                      "subst target " + s.target().to_string() +
                          " is not contained in " + vars.to_string());
        }
      }
      for (const Term& t : s.images()) ValidateTerm(t, sig, s.target());
      ValidateFormula(f.child(), sig, s.source());
      return;
    }
  }
}

// ------------------------------------------------------------------ Parsing

namespace {

using internal::Tok;
using internal::TokenStream;

class FormulaParser {
 public:
  FormulaParser(std::string_view text, const Signature& sig)
      : ts_(text), sig_(sig) {}

  Formula parse(const VarSet& vars) {
    Formula f = parse_implies(vars);
    if (!ts_.at(Tok::kEnd)) {
      internal::SyntaxError(ts_.peek().pos,
                            "unexpected '" + ts_.peek().text + "'");
    }
    return f;
  }

 private:
  Formula parse_implies(const VarSet& vars) {
    Formula lhs = parse_or(vars);
    if (ts_.accept(Tok::kArrow)) {
      return Formula::Implies(std::move(lhs), parse_implies(vars));
    }
    return lhs;
  }

  Formula parse_or(const VarSet& vars) {
    Formula lhs = parse_and(vars);
    while (ts_.accept(Tok::kPipe)) {
      lhs = Formula::Or(std::move(lhs), parse_and(vars));
    }
    return lhs;
  }

  Formula parse_and(const VarSet& vars) {
    Formula lhs = parse_unary(vars);
    while (ts_.accept(Tok::kAmp)) {
      lhs = Formula::And(std::move(lhs), parse_unary(vars));
    }
    return lhs;
  }

  bool at_keyword(std::string_view kw) const {
    return ts_.at(Tok::kIdent) && ts_.peek().text == kw;
  }

  Formula parse_unary(const VarSet& vars) {
    if (ts_.accept(Tok::kBang)) return Formula::Not(parse_unary(vars));
    if (ts_.accept(Tok::kLParen)) {
      Formula f = parse_implies(vars);
      ts_.expect(Tok::kRParen, "')'");
      return f;
    }
    if (at_keyword("exists") || at_keyword("forall")) {
      const bool exists = ts_.next().text == "exists";
      const internal::Token v = ts_.expect(Tok::kIdent, "a variable");
      if (!vars.contains(v.text)) {
        throw Error(ErrorKind::kVariable,
                    "quantified variable " + v.text + " not in " +
                        vars.to_string() + " (position " +
                        std::to_string(v.pos) + ")");
      }
      ts_.expect(Tok::kDot, "'.'");
      Formula body = parse_implies(vars);
      return exists ? Formula::Exists(v.text, std::move(body))
                    : Formula::Forall(v.text, std::move(body));
    }
    if (at_keyword("subst")) return parse_subst(vars);
    if (at_keyword("true")) {
      ts_.next();
      return Formula::True();
    }
    if (at_keyword("false")) {
      ts_.next();
      return Formula::False();
    }
    if (!ts_.at(Tok::kIdent)) {
      const internal::Token& t = ts_.peek();
      internal::SyntaxError(t.pos, t.kind == Tok::kEnd
                                       ? std::string("unexpected end of input")
                                       : "unexpected '" + t.text + "'");
    }
    if (const auto rel = sig_.find_rel(ts_.peek().text)) {
      const internal::Token name = ts_.next();
      ts_.expect(Tok::kLParen, "'(' after relation name");
      std::vector<Term> args;
      args.push_back(internal::ParseTermFrom(ts_, sig_, vars));
      while (ts_.accept(Tok::kComma)) {
        args.push_back(internal::ParseTermFrom(ts_, sig_, vars));
      }
      ts_.expect(Tok::kRParen, "')'");
      const int arity = sig_.rels()[*rel].arity;
      if (static_cast<int>(args.size()) != arity) {
        throw Error(ErrorKind::kArity,
                    "relation " + name.text + " expects " +
                        std::to_string(arity) + " argument(s), got " +
                        std::to_string(args.size()));
      }
      return Formula::Atom(name.text, std::move(args));
    }
    Term lhs = internal::ParseTermFrom(ts_, sig_, vars);
    const internal::Token eq = ts_.expect(Tok::kEq, "'=' or a relation");
    if (!sig_.with_equality()) {
      throw Error(ErrorKind::kUnknownSymbol,
                  "equality is disabled for this signature (position " +
                      std::to_string(eq.pos) + ")");
    }
    Term rhs = internal::ParseTermFrom(ts_, sig_, vars);
    return Formula::Equal(std::move(lhs), std::move(rhs));
  }

  Formula parse_subst(const VarSet& target) {
    ts_.next();
    ts_.expect(Tok::kLBrace, "'{'");
    std::vector<std::string> source;
    std::vector<Term> images;
    do {
      const internal::Token v = ts_.expect(Tok::kIdent, "a variable");
      if (std::find(source.begin(), source.end(), v.text) != source.end()) {
        throw Error(ErrorKind::kVariable, "variable " + v.text +
                                              " listed twice in subst");
      }
      ts_.expect(Tok::kAssign, "':='");
      source.push_back(v.text);
      images.push_back(internal::ParseTermFrom(ts_, sig_, target));
    } while (ts_.accept(Tok::kComma));
    ts_.expect(Tok::kRBrace, "'}'");
    VarSet src(std::move(source));
    Formula body = parse_implies(src);
    return Formula::Subst(Substitution(src, target, std::move(images)),
                          std::move(body));
  }

  TokenStream ts_;
  const Signature& sig_;
};

int Precedence(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::kExists:
    case FormulaKind::kForall:
    case FormulaKind::kSubst:
      return 0;
    case FormulaKind::kImplies: return 1;
    case FormulaKind::kOr: return 2;
    case FormulaKind::kAnd: return 3;
    case FormulaKind::kNot: return 4;
    default: return 5;
  }
}

void Print(const Formula& f, std::string& out);

void PrintOperand(const Formula& f, bool parens, std::string& out) {
  if (parens) out += '(';
  Print(f, out);
  if (parens) out += ')';
}

void PrintTerms(const std::vector<Term>& terms, std::string& out) {
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (i) out += ',';
    out += ToString(terms[i]);
  }
}

void Print(const Formula& f, std::string& out) {
  const int p = Precedence(f);
  switch (f.kind()) {
    case FormulaKind::kTrue: out += "true"; return;
    case FormulaKind::kFalse: out += "false"; return;
    case FormulaKind::kAtom:
      out += f.name() + "(";
      PrintTerms(f.terms(), out);
      out += ')';
      return;
    case FormulaKind::kEqual:
      out += ToString(f.terms()[0]) + " = " + ToString(f.terms()[1]);
      return;
    case FormulaKind::kNot:
      out += '!';
      PrintOperand(f.child(), Precedence(f.child()) < p, out);
      return;
    case FormulaKind::kAnd:
    case FormulaKind::kOr: {
      PrintOperand(f.child(0), Precedence(f.child(0)) < p, out);
      out += f.kind() == FormulaKind::kAnd ? " & " : " | ";
      PrintOperand(f.child(1), Precedence(f.child(1)) <= p, out);
      return;
    }
    case FormulaKind::kImplies:
      PrintOperand(f.child(0), Precedence(f.child(0)) <= p, out);
      out += " -> ";
      PrintOperand(f.child(1), Precedence(f.child(1)) < p, out);
      return;
    case FormulaKind::kExists:
    case FormulaKind::kForall:
      out += f.kind() == FormulaKind::kExists ? "exists " : "forall ";
      out += f.name() + ". ";
      Print(f.child(), out);
      return;
    case FormulaKind::kSubst: {
      const Substitution& s = f.substitution();
      out += "subst {";
      for (std::size_t i = 0; i < s.source().size(); ++i) {
        if (i) out += ", ";
        out += s.source()[i] + " := " + ToString(s.image(i));
      }
      out += "} ";
      Print(f.child(), out);
      return;
    }
  }
}

void CollectFree(const Formula& f, std::vector<std::string>& bound,
                 std::vector<std::string>& out) {
  auto note = [&](const std::string& v) {
    if (std::find(bound.begin(), bound.end(), v) != bound.end()) return;
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  };
  switch (f.kind()) {
    case FormulaKind::kTrue:
    case FormulaKind::kFalse:
      return;
    case FormulaKind::kAtom:
    case FormulaKind::kEqual:
      for (const Term& t : f.terms()) {
        for (const std::string& v : t.variables()) note(v);
      }
      return;
    case FormulaKind::kNot:
    case FormulaKind::kAnd:
    case FormulaKind::kOr:
    case FormulaKind::kImplies:
      for (std::size_t i = 0; i < f.num_children(); ++i) {
        CollectFree(f.child(i), bound, out);
      }
      return;
    case FormulaKind::kExists:
    case FormulaKind::kForall:
      bound.push_back(f.name());
      CollectFree(f.child(), bound, out);
      bound.pop_back();
      return;
    case FormulaKind::kSubst: {
      const Substitution& s = f.substitution();
      for (const std::string& v : FreeVars(f.child())) {
        const Term* img = s.image_of(v);
        if (img == nullptr) {
          throw Error(ErrorKind::kVariable, "variable " + v + " not in " +
                                                s.source().to_string());
        }
        for (const std::string& w : img->variables()) note(w);
      }
      return;
    }
  }
}

Formula PushSubst(const Substitution& s, const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::kTrue:
    case FormulaKind::kFalse:
      return f;
    case FormulaKind::kAtom: {
      std::vector<Term> args;
      for (const Term& t : f.terms()) args.push_back(s.apply(t));
      return Formula::Atom(f.name(), std::move(args));
    }
    case FormulaKind::kEqual:
      return Formula::Equal(s.apply(f.terms()[0]), s.apply(f.terms()[1]));
    case FormulaKind::kNot:
      return Formula::Not(PushSubst(s, f.child()));
    case FormulaKind::kAnd:
      return Formula::And(PushSubst(s, f.child(0)), PushSubst(s, f.child(1)));
    case FormulaKind::kOr:
      return Formula::Or(PushSubst(s, f.child(0)), PushSubst(s, f.child(1)));
    case FormulaKind::kImplies:
      return Formula::Implies(PushSubst(s, f.child(0)),
                              PushSubst(s, f.child(1)));
    case FormulaKind::kSubst:
      return PushSubst(s, PushSubst(f.substitution(), f.child()));
    case FormulaKind::kExists:
    case FormulaKind::kForall:
      break;
  }
  throw std::logic_error("PushSubst reached a quantifier");
}

// Quantified variables of the outer scope (subst bodies have their own).
void CheckBoundVars(const Formula& f, const VarSet& vars) {
  if (f.is_quantifier() && !vars.contains(f.name())) {
    throw Error(ErrorKind::kMismatch, "quantified variable " + f.name() +
                                          " not in " + vars.to_string());
  }
  if (f.kind() == FormulaKind::kSubst) return;
  for (std::size_t i = 0; i < f.num_children(); ++i) {
    CheckBoundVars(f.child(i), vars);
  }
}

}  // namespace

Formula ParseFormula(std::string_view text, const FormulaContext& ctx) {
  FormulaParser parser(text, ctx.signature);
  return parser.parse(ctx.vars);
}

std::string ToString(const Formula& f) {
  std::string out;
  Print(f, out);
  return out;
}

std::vector<std::string> FreeVars(const Formula& f) {
  std::vector<std::string> bound;
  std::vector<std::string> out;
  CollectFree(f, bound, out);
  return out;
}

bool ContainsQuantifier(const Formula& f) {
  if (f.is_quantifier()) return true;
  for (std::size_t i = 0; i < f.num_children(); ++i) {
    if (ContainsQuantifier(f.child(i))) return true;
  }
  return false;
}

Formula ApplySubstFormula(const Substitution& s, const Formula& f) {
  for (const std::string& v : FreeVars(f)) {
    if (!s.source().contains(v)) {
      throw Error(ErrorKind::kMismatch, "free variable " + v + " of " +
                                            ToString(f) + " not in " +
                                            s.source().to_string());
    }
  }
  if (s.is_identity()) return f;
  if (ContainsQuantifier(f)) {
    CheckBoundVars(f, s.source());
    return Formula::Subst(s, f);
  }
  return PushSubst(s, f);
}

}  // namespace kbgeo
