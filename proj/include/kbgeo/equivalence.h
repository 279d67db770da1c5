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

#ifndef KBGEO_EQUIVALENCE_H_
#define KBGEO_EQUIVALENCE_H_

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kbgeo/algebra.h"
#include "kbgeo/categories.h"
#include "kbgeo/formula.h"
#include "kbgeo/lattice.h"
#include "kbgeo/report.h"

namespace kbgeo {

enum class Verdict { kWitnessed, kInequivalent, kUnknown };

// "EQUIVALENT_WITNESSED", "INEQUIVALENT", "UNKNOWN".
const char* VerdictName(Verdict v);

// Automorphism of the formula category from the supported class: a relation
// permutation rho together with a permutation beta of the variable pool.
// On objects X -> beta(X); the free-algebra isomorphism u_X is the renaming
// induced by beta, and a substitution s : X -> Y goes to u_Y s u_X^-1.
class PhiAutomorphism {
 public:
  static PhiAutomorphism Identity() { return PhiAutomorphism(); }

  // "identity" | "swaprel P Q [R S ...]" | "permrel P:Q,Q:R,R:P"
  // | "renamevars x1:x2,x2:x1", several parts joined by ';'. The display
  // forms "swap ..." and "rename ..." are accepted as well. Throws
  // Error(kValidation) for a map that is not an arity-preserving
  // permutation.
  static PhiAutomorphism Parse(std::string_view text, const Signature& sig);

  static PhiAutomorphism FromRelations(const Signature& sig,
                                       const std::vector<std::size_t>& perm);
  static PhiAutomorphism FromVariables(
      const std::vector<std::pair<std::string, std::string>>& pairs);

  bool is_identity() const { return rels_.empty() && vars_.empty(); }

  const std::string& rel(const std::string& name) const;
  const std::string& var(const std::string& name) const;

  // Image object, in pool order (x1 < x2 < ... by index).
  VarSet apply(const VarSet& x) const;
  // u_X : W(X) -> W(apply(X)).
  Substitution u(const VarSet& x) const;
  Substitution apply(const Substitution& s) const;
  Formula apply(const Formula& f) const;
  PhiAutomorphism inverse() const;

  // Throws Error(kValidation) unless every renamed variable is in the pool
  // and every relation exists in sig with a matching arity.
  void validate(const Signature& sig, const VariablePool& pool) const;

  // "identity", "swap P Q", "rename x1:x2,x2:x1", parts joined by "; ".
  std::string ToString() const;

  friend bool operator==(const PhiAutomorphism&,
                         const PhiAutomorphism&) = default;

 private:
  Term rename(const Term& t) const;

  // Non-fixed points only, sorted by key.
  std::map<std::string, std::string> rels_;
  std::map<std::string, std::string> vars_;
};

// identity; arity-preserving relation permutations in lexicographic order;
// pool permutations in lexicographic order.
std::vector<PhiAutomorphism> EnumeratePhiCandidates(const Signature& sig,
                                                    const VariablePool& pool);

// Per-object lattice bijections alpha_X : F^X(H1) -> F^phi(X)(H2) that come
// from a bijection of the blocks of the two definable algebras.
class FunctorIso {
 public:
  FunctorIso(KnowledgeBasePtr kb1, KnowledgeBasePtr kb2, PhiAutomorphism phi,
             int depth, std::map<VarSet, std::vector<std::size_t>> blocks);

  const KnowledgeBasePtr& source() const { return kb1_; }
  const KnowledgeBasePtr& target() const { return kb2_; }
  const PhiAutomorphism& phi() const { return phi_; }
  int depth() const { return depth_; }
  int n_max() const { return kb1_->n_max(); }
  const std::vector<std::size_t>& block_map(const VarSet& x) const;

  // alpha_X(T) for T over X in H1; the result is over phi(X) in H2.
  ClosedFilter apply(const ClosedFilter& t) const;
  // alpha_X^-1 for T over phi(X) in H2.
  ClosedFilter apply_inverse(const ClosedFilter& t) const;

  // Copy whose alpha_X exchanges the images of two filters over x. Used as a
  // negative control: the result is no longer a lattice isomorphism.
  FunctorIso with_swapped(const VarSet& x, const PointSet& a,
                          const PointSet& b) const;

  // "1->1,2->2" in block order, using each block's smallest point.
  std::string describe(const VarSet& x) const;

 private:
  struct Swap {
    VarSet x;
    Bitset a, b;
  };

  KnowledgeBasePtr kb1_, kb2_;
  PhiAutomorphism phi_;
  int depth_;
  std::map<VarSet, std::vector<std::size_t>> blocks_;
  std::vector<Swap> swaps_;
};

struct SearchOptions {
  std::size_t max_nodes = 2000000;
};

struct SearchStats {
  std::size_t nodes = 0;
  bool budget_exhausted = false;
};

// The alpha induced by phi: block witness w over X goes to the block of H2
// equal to Val(phi(w)). Returns nothing when some image is not a single
// block or diagram (4) fails.
std::optional<FunctorIso> InducedFunctorIso(const KnowledgeBasePtr& kb1,
                                            const KnowledgeBasePtr& kb2,
                                            const PhiAutomorphism& phi,
                                            int depth);

// alpha for phi = identity transported through a model isomorphism: a set of
// points goes to its pointwise image.
std::optional<FunctorIso> TransportedFunctorIso(const KnowledgeBasePtr& kb1,
                                                const KnowledgeBasePtr& kb2,
                                                const ModelMap& h, int depth);

// Backtracking search over block bijections of all objects at once,
// constrained by diagram (4) for every substitution of image depth <= depth.
// Values are tried in increasing order, so an identity bijection is found
// first when it works.
std::optional<FunctorIso> FindFunctorIso(const KnowledgeBasePtr& kb1,
                                         const KnowledgeBasePtr& kb2,
                                         const PhiAutomorphism& phi, int depth,
                                         const SearchOptions& options = {},
                                         SearchStats* stats = nullptr);

// Model-level entry point: builds both knowledge bases at n_max, tries the
// induced alpha, then the general search.
std::optional<FunctorIso> FindFunctorIso(const ModelPtr& m1,
                                         const ModelPtr& m2,
                                         const PhiAutomorphism& phi, int n_max,
                                         int depth);

// alpha_Y Cl1(s) (T) = Cl2(phi s) alpha_X (T) for every s up to the iso's
// depth and every T. verdict PASS or FAIL.
Report VerifyDiagram(const FunctorIso& iso);

// (s, T1, T2) admissible over H1 iff (phi s, alpha T1, alpha T2) is over H2,
// exhaustively for objects of size <= n_max and s of depth <= depth.
Report VerifyAdmissibilityTransfer(const FunctorIso& iso, int n_max,
                                   int depth);

// The isomorphism of description categories built from the witness and its
// inverse: object bijectivity and order, identities, composites, and both
// round trips. verdict PASS or FAIL.
Report BuildDescriptionIso(const FunctorIso& iso);

struct Refutation {
  std::string invariant;
  VarSet vars;
  long long left = 0;
  long long right = 0;
};

struct EquivReport {
  Verdict verdict = Verdict::kUnknown;
  std::string mode;
  int n_max = 0;
  int depth = 0;
  bool saturated = true;
  std::optional<ModelMap> model_map;
  std::optional<FunctorIso> iso;
  std::optional<Refutation> refutation;
  // Laws checked on the witness, search statistics, notes.
  Report details;

  Report ToReport() const;
};

struct EquivOptions {
  int n_max = 2;
  int depth = 2;
  // Restricts the automorphism class to this single phi.
  std::optional<PhiAutomorphism> phi;
  SearchOptions search;
  KnowledgeBaseOptions kb;
};

// Exact; throws Error(kMismatch) on differing signatures.
EquivReport CheckIsomorphic(const ModelPtr& m1, const ModelPtr& m2);

EquivReport CheckLogicalAutomorphicEquivalence(const ModelPtr& m1,
                                               const ModelPtr& m2,
                                               const EquivOptions& options);

EquivReport CheckInformationalEquivalence(const ModelPtr& m1,
                                          const ModelPtr& m2,
                                          const EquivOptions& options);

}  // namespace kbgeo

#endif  // KBGEO_EQUIVALENCE_H_
