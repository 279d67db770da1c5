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

#ifndef KBGEO_CATEGORIES_H_
#define KBGEO_CATEGORIES_H_

#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "kbgeo/algebra.h"
#include "kbgeo/lattice.h"
#include "kbgeo/report.h"
#include "kbgeo/semantics.h"

namespace kbgeo {

// Variable sets available to a knowledge base: every nonempty subset of
// {x1, ..., x_n}. The canonical set of size k is {x1, ..., xk}.
class VariablePool {
 public:
  explicit VariablePool(int n_max);

  int n_max() const { return n_max_; }
  VarSet canonical(int k) const;
  // Nonempty subsets ordered by size, then lexicographically by index.
  const std::vector<VarSet>& subsets() const { return subsets_; }

 private:
  int n_max_;
  std::vector<VarSet> subsets_;
};

using LatticePtr = std::shared_ptr<const FilterLattice>;

struct DescriptionObject {
  ModelPtr model;
  VarSet vars;
  LatticePtr lattice;
};

struct ContentObject {
  ModelPtr model;
  VarSet vars;
  AlgebraPtr algebra;
};

// A substitution with a filter assignment T1 -> T2.
struct AdmissibleDescMorphism {
  Substitution s;
  std::vector<std::pair<ClosedFilter, ClosedFilter>> assignment;
};

// A substitution with a definable-set assignment A2 -> A1 (note the
// direction: from the target side back to the source side).
struct AdmissibleContMorphism {
  Substitution s;
  std::vector<std::pair<DefinableSet, DefinableSet>> assignment;
};

// s_* T1 inside T2, decided on dual point sets: points(T2) is inside the
// preimage of points(T1).
bool IsAdmissibleDesc(const Substitution& s, const ClosedFilter& t1,
                      const ClosedFilter& t2);
// Same question asked syntactically: the s-image of T1's generator is in T2.
bool IsAdmissibleDescByFormula(const Substitution& s, const ClosedFilter& t1,
                               const ClosedFilter& t2);
// s~ A2 inside A1.
bool IsAdmissibleCont(const Substitution& s, const DefinableSet& a2,
                      const DefinableSet& a1);

ContentObject CtObject(const DescriptionObject& f);
// The knowledge functor on elements: a filter goes to its dual set.
DefinableSet CtElement(const ClosedFilter& t);
// Reverse direction of CtElement; throws if a is not a member of `lattice`.
ClosedFilter CtInverse(const DefinableSet& a, const FilterLattice& lattice);

// Content morphism of a description morphism: each (T1, T2) becomes
// (dual T2, dual T1). Throws std::logic_error if the result is not
// admissible.
AdmissibleContMorphism CtMorphism(const AdmissibleDescMorphism& m);

// The least admissible target of a filter: its dual is the s-preimage of
// points(t). Throws Error(kValidation) if the preimage is not definable in
// y_lattice.
ClosedFilter ClMorphism(const Substitution& s, const ClosedFilter& t,
                        const FilterLattice& y_lattice);

// s together with T1 -> ClMorphism(s, T1) for every T1 of x_lattice.
AdmissibleDescMorphism LeastDescMorphism(const Substitution& s,
                                         const FilterLattice& x_lattice,
                                         const FilterLattice& y_lattice);

// Composite m2 after m1; every target of m1 must be assigned by m2.
AdmissibleDescMorphism ComposeDesc(const AdmissibleDescMorphism& m1,
                                   const AdmissibleDescMorphism& m2);
// Composite of content morphisms for s2 after s1, c1 over s1 and c2 over s2.
// Each pair (A2, A1) of c1 is extended by the pair (A3, A2) of c2 that ends
// at A2, giving (A3, A1). Every A2 must be reached by c2.
AdmissibleContMorphism ComposeCont(const AdmissibleContMorphism& c1,
                                   const AdmissibleContMorphism& c2);

struct KnowledgeBaseOptions {
  AlgebraOptions algebra;
  std::size_t max_points = kDefaultMaxPoints;
};

// A model with its description and content objects over a variable pool.
class KnowledgeBase {
 public:
  static std::shared_ptr<const KnowledgeBase> Build(
      ModelPtr model, int n_max, const KnowledgeBaseOptions& options = {});

  const ModelPtr& model() const { return model_; }
  const VariablePool& pool() const { return pool_; }
  int n_max() const { return pool_.n_max(); }
  // Every algebra came from a saturated term clone.
  bool saturated() const { return saturated_; }

  // Throws Error(kVariable) for a VarSet outside the pool.
  DescriptionObject description(const VarSet& vars) const;
  ContentObject content(const VarSet& vars) const;
  const FilterLattice& lattice(const VarSet& vars) const;

 private:
  KnowledgeBase(ModelPtr model, int n_max) : model_(std::move(model)),
                                             pool_(n_max) {}

  ModelPtr model_;
  VariablePool pool_;
  bool saturated_ = true;
  std::map<VarSet, LatticePtr> lattices_;
};

using KnowledgeBasePtr = std::shared_ptr<const KnowledgeBase>;

struct DualityOptions {
  int depth = 1;
  // Upper bound on (s, T1, T2) hom-set checks per pair of objects.
  std::size_t max_hom_checks = 200000;
};

// Ct is a bijection F^X -> D^X reversing order, functorial on the least
// morphisms of all substitutions up to `depth`, and bijective on hom-sets.
// verdict is PASS or FAIL.
Report CheckDuality(const KnowledgeBase& kb,
                    const DualityOptions& options = {});

// Cl(s2 after s1) = Cl(s2) after Cl(s1) on every filter, for all
// substitution pairs between pool subsets with image depth <= depth.
Report VerifyClFunctoriality(const KnowledgeBase& kb, int depth,
                             std::size_t max_triples = 20000000);

}  // namespace kbgeo

#endif  // KBGEO_CATEGORIES_H_
