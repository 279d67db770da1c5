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

#ifndef KBGEO_ALGEBRA_H_
#define KBGEO_ALGEBRA_H_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kbgeo/bitset.h"

namespace kbgeo {

// A carrier element, identified by its position in the model's carrier order.
using Elem = std::int32_t;

struct OpSymbol {
  std::string name;
  int arity = 0;
  friend bool operator==(const OpSymbol&, const OpSymbol&) = default;
};

struct RelSymbol {
  std::string name;
  int arity = 1;
  friend bool operator==(const RelSymbol&, const RelSymbol&) = default;
};

// Operation and relation symbols of a finite signature. Equality is a
// built-in atom (never a declared relation) and can be switched off.
class Signature {
 public:
  Signature() = default;
  Signature(std::vector<OpSymbol> ops, std::vector<RelSymbol> rels,
            bool with_equality = true);

  const std::vector<OpSymbol>& ops() const { return ops_; }
  const std::vector<RelSymbol>& rels() const { return rels_; }
  bool with_equality() const { return with_equality_; }

  std::optional<std::size_t> find_op(std::string_view name) const;
  std::optional<std::size_t> find_rel(std::string_view name) const;

  Signature with_equality(bool on) const;

  friend bool operator==(const Signature&, const Signature&) = default;

 private:
  std::vector<OpSymbol> ops_;
  std::vector<RelSymbol> rels_;
  bool with_equality_ = true;
};

bool IsIdentifier(std::string_view s);
bool IsReservedWord(std::string_view s);

// Ordered finite set of variable names; the order fixes point coordinates.
class VarSet {
 public:
  VarSet() = default;
  explicit VarSet(std::vector<std::string> names);
  VarSet(std::initializer_list<std::string> names)
      : VarSet(std::vector<std::string>(names)) {}

  std::size_t size() const { return names_.size(); }
  const std::string& operator[](std::size_t i) const { return names_[i]; }
  const std::vector<std::string>& names() const { return names_; }
  auto begin() const { return names_.begin(); }
  auto end() const { return names_.end(); }

  std::optional<std::size_t> index_of(std::string_view name) const;
  bool contains(std::string_view name) const {
    return index_of(name).has_value();
  }

  // "{x,y}"
  std::string to_string() const;

  friend bool operator==(const VarSet&, const VarSet&) = default;
  friend auto operator<=>(const VarSet&, const VarSet&) = default;

 private:
  std::vector<std::string> names_;
};

// Element of the absolutely free term algebra W(X). Immutable, cheap to copy.
class Term {
 public:
  static Term Var(std::string name);
  static Term Apply(std::string op, std::vector<Term> args);

  bool is_var() const { return node_->is_var; }
  // Variable name or operation name.
  const std::string& name() const { return node_->name; }
  const std::vector<Term>& args() const { return node_->args; }
  int depth() const { return node_->depth; }

  // Variables in first-occurrence order.
  std::vector<std::string> variables() const;
  bool only_uses(const VarSet& vars) const;

  friend bool operator==(const Term& a, const Term& b);
  friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }

 private:
  struct Node {
    bool is_var = true;
    std::string name;
    std::vector<Term> args;
    int depth = 0;
  };
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

std::string ToString(const Term& t);

// Checks arities and variable membership; throws Error on violation.
void ValidateTerm(const Term& t, const Signature& sig, const VarSet& vars);

// Homomorphism s : W(source) -> W(target), given by the images of the source
// variables.
class Substitution {
 public:
  Substitution(VarSet source, VarSet target, std::vector<Term> images);

  static Substitution Identity(const VarSet& vars);
  // Variable renaming x_i -> renamed[i]; target is the given VarSet.
  static Substitution Renaming(const VarSet& source, const VarSet& target,
                               const std::vector<std::string>& renamed);

  const VarSet& source() const { return source_; }
  const VarSet& target() const { return target_; }
  const std::vector<Term>& images() const { return images_; }
  const Term& image(std::size_t i) const { return images_[i]; }
  const Term* image_of(std::string_view var) const;

  // Textual substitution of a term over source() into a term over target().
  Term apply(const Term& t) const;

  bool is_identity() const;
  int depth() const;

  // Two-sided inverse when the substitution is a variable bijection (the only
  // invertible homomorphisms between absolutely free algebras).
  std::optional<Substitution> inverse() const;

  friend bool operator==(const Substitution&, const Substitution&) = default;

 private:
  VarSet source_;
  VarSet target_;
  std::vector<Term> images_;
};

// "{x:=y,y:=neg(y)}"
std::string ToString(const Substitution& s);

// s2 after s1: x -> s2(s1(x)). Requires s1.target() == s2.source().
Substitution ComposeSubst(const Substitution& s1, const Substitution& s2);

class Model;
using ModelPtr = std::shared_ptr<const Model>;

// Finite model (H, Psi, f): carrier, total operation tables and relation
// tables, indexed row-major over carrier positions.
class Model {
 public:
  const Signature& signature() const { return signature_; }
  std::size_t carrier_size() const { return carrier_.size(); }
  const std::vector<std::string>& carrier() const { return carrier_; }
  const std::string& label(Elem e) const { return carrier_[e]; }
  std::optional<Elem> find_element(std::string_view label) const;

  const std::vector<Elem>& op_table(std::size_t op) const {
    return op_tables_[op];
  }
  const Bitset& rel_table(std::size_t rel) const { return rel_tables_[rel]; }

  Elem apply_op(std::size_t op, std::span<const Elem> args) const {
    return op_tables_[op][tuple_index(args)];
  }
  bool holds(std::size_t rel, std::span<const Elem> args) const {
    return rel_tables_[rel].test(tuple_index(args));
  }
  std::vector<std::vector<Elem>> rel_tuples(std::size_t rel) const;

  std::size_t tuple_index(std::span<const Elem> args) const;

  ModelPtr with_equality(bool on) const;
  // Isomorphic copy: old element e becomes element perm[e] of the copy, whose
  // carrier is `labels` in order.
  ModelPtr permuted(std::span<const Elem> perm,
                    std::vector<std::string> labels) const;

 private:
  friend class ModelBuilder;
  Model() = default;

  Signature signature_;
  std::vector<std::string> carrier_;
  std::vector<std::vector<Elem>> op_tables_;
  std::vector<Bitset> rel_tables_;
};

class ModelBuilder {
 public:
  ModelBuilder(Signature sig, std::vector<std::string> carrier);

  ModelBuilder& set_op(std::string_view op, std::vector<Elem> inputs,
                       Elem output);
  ModelBuilder& add_tuple(std::string_view rel, std::vector<Elem> tuple);
  // Label-based variants used by the file loader.
  ModelBuilder& set_op(std::string_view op,
                       const std::vector<std::string>& inputs,
                       const std::string& output);
  ModelBuilder& add_tuple(std::string_view rel,
                          const std::vector<std::string>& tuple);

  // Throws Error(kValidation) naming the offending op when a table is not
  // total.
  ModelPtr build() const;

 private:
  Elem element(const std::string& label) const;

  Signature signature_;
  std::vector<std::string> carrier_;
  std::vector<std::vector<std::optional<Elem>>> op_rows_;
  std::vector<Bitset> rel_tables_;
};

// Carrier bijection preserving every table in both directions.
struct ModelMap {
  ModelPtr source;
  ModelPtr target;
  std::vector<Elem> mapping;
};

// "0->1,1->0" using carrier labels.
std::string ToString(const ModelMap& m);

// |H|^k with an overflow-safe bound check; throws Error(kBound).
std::size_t CheckedPower(std::size_t base, std::size_t exponent,
                         std::size_t bound);

Term ParseTerm(std::string_view text, const Signature& sig,
               const VarSet& vars);

// Homomorphic extension of the point to W(X).
Elem EvalTerm(const Term& w, const VarSet& vars, std::span<const Elem> point,
              const Model& model);

struct TermFunction {
  // Values at every point of H^X, lexicographic point order.
  std::vector<Elem> table;
  Term witness;
};

struct TermClone {
  std::vector<TermFunction> functions;
  bool saturated = true;
};

struct CloneOptions {
  std::optional<int> max_term_depth;
  std::size_t max_functions = 65536;
  std::size_t max_points = 1000000;
};

// Least set of functions H^X -> H containing the projections and closed
// under every operation table, each with a witness term of minimal depth.
TermClone TermFunctions(const Model& model, const VarSet& vars,
                        const CloneOptions& options = {});

// All carrier bijections that are isomorphisms, in lexicographic order of
// the mapping vector. Throws Error(kMismatch) on signature mismatch.
std::vector<ModelMap> ModelIsomorphisms(const ModelPtr& m1,
                                        const ModelPtr& m2);

bool IsModelIsomorphism(const Model& m1, const Model& m2,
                        std::span<const Elem> mapping);

// Syntactic terms over `vars` of depth <= depth, ordered by depth, then
// operation order, then argument indices. Throws Error(kBound) past
// max_count.
std::vector<Term> EnumerateTerms(const Signature& sig, const VarSet& vars,
                                 int depth, std::size_t max_count = 100000);

// All substitutions source -> target whose images have depth <= depth;
// first source variable varies slowest.
std::vector<Substitution> EnumerateSubstitutions(
    const Signature& sig, const VarSet& source, const VarSet& target,
    int depth, std::size_t max_count = 1000000);

}  // namespace kbgeo

#endif  // KBGEO_ALGEBRA_H_
