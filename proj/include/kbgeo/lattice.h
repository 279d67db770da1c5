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

#ifndef KBGEO_LATTICE_H_
#define KBGEO_LATTICE_H_

#include <cstddef>
#include <memory>
#include <vector>

#include "kbgeo/algebra.h"
#include "kbgeo/bitset.h"
#include "kbgeo/formula.h"
#include "kbgeo/semantics.h"

namespace kbgeo {

// A point set together with a formula whose value is exactly that set.
class DefinableSet {
 public:
  // Throws Error(kValidation) unless Val(witness) == points.
  DefinableSet(PointSet points, Formula witness);

  const PointSet& points() const { return points_; }
  const Formula& witness() const { return witness_; }
  const SpacePtr& space() const { return points_.space(); }

  friend bool operator==(const DefinableSet& a, const DefinableSet& b) {
    return a.points_ == b.points_;
  }

 private:
  friend class DefinableAlgebra;
  // Used by the algebra, whose witnesses are unions of checked block
  // witnesses.
  struct Unchecked {};
  DefinableSet(PointSet points, Formula witness, Unchecked)
      : points_(std::move(points)), witness_(std::move(witness)) {}

  PointSet points_;
  Formula witness_;
};

struct AlgebraOptions {
  CloneOptions clone;
  // Upper bound on the number of atomic formula values evaluated.
  std::size_t max_atoms = 1 << 22;
};

class DefinableAlgebra;
using AlgebraPtr = std::shared_ptr<const DefinableAlgebra>;

// All definable subsets of H^X. A finite boolean algebra is determined by its
// atoms, so the family is stored as a partition of the space into blocks;
// members are unions of blocks. The partition is the coarsest one that
// separates every atomic value and whose blocks have cylinders (for every
// variable) that are unions of blocks.
class DefinableAlgebra {
 public:
  const SpacePtr& space() const { return space_; }
  const ModelPtr& model() const { return space_->model(); }
  const VarSet& vars() const { return space_->vars(); }

  // false when the term clone was capped: the family is then a subfamily of
  // the true one.
  bool saturated() const { return saturated_; }

  std::size_t num_blocks() const { return blocks_.size(); }
  const Bitset& block(std::size_t i) const { return blocks_[i]; }
  const Formula& block_witness(std::size_t i) const { return witnesses_[i]; }
  // Index of the block containing the point.
  std::size_t block_of(std::size_t point) const { return block_of_[point]; }

  // 2^num_blocks; throws Error(kBound) if that does not fit in 63 bits.
  std::size_t size() const;

  bool contains(const PointSet& a) const;
  // Smallest member containing a.
  DefinableSet Closure(const PointSet& a) const;
  // The member given by a block mask (bit i selects block i).
  DefinableSet FromBlocks(const std::vector<bool>& mask) const;
  // Blocks meeting a, as a mask.
  std::vector<bool> BlockMask(const PointSet& a) const;
  // Witness formula for a union of blocks.
  Formula WitnessOf(const std::vector<bool>& mask) const;

  // Every member, sorted by bitset value. Throws Error(kBound) past
  // max_members.
  std::vector<DefinableSet> members(std::size_t max_members = 1 << 20) const;

 private:
  friend AlgebraPtr GenerateDefinableAlgebra(ModelPtr, VarSet,
                                             const AlgebraOptions&,
                                             std::size_t);
  DefinableAlgebra() = default;

  SpacePtr space_;
  bool saturated_ = true;
  std::vector<Bitset> blocks_;
  std::vector<Formula> witnesses_;
  std::vector<std::size_t> block_of_;
};

AlgebraPtr GenerateDefinableAlgebra(ModelPtr model, VarSet vars,
                                    const AlgebraOptions& options = {},
                                    std::size_t max_points = kDefaultMaxPoints);

// Free-function form of DefinableAlgebra::Closure.
DefinableSet Closure(const PointSet& a, const DefinableAlgebra& alg);

// A closed filter, represented by its dual definable set (the points where
// every formula of the filter holds). The witness generates the filter.
class ClosedFilter {
 public:
  explicit ClosedFilter(DefinableSet dual) : dual_(std::move(dual)) {}

  const DefinableSet& dual() const { return dual_; }
  const PointSet& points() const { return dual_.points(); }
  const Formula& generator() const { return dual_.witness(); }
  bool improper() const { return dual_.points().empty(); }

  // Formula membership: f in T iff points(T) is inside Val(f).
  bool contains(const Formula& f) const {
    return FilterContains(dual_.points(), f);
  }

  friend bool operator==(const ClosedFilter& a, const ClosedFilter& b) {
    return a.dual_ == b.dual_;
  }

 private:
  DefinableSet dual_;
};

// F^X(H): closed filters ordered by inclusion. Inclusion of filters is
// reverse inclusion of dual point sets.
class FilterLattice {
 public:
  explicit FilterLattice(AlgebraPtr algebra);

  const AlgebraPtr& algebra() const { return algebra_; }
  const SpacePtr& space() const { return algebra_->space(); }
  const VarSet& vars() const { return algebra_->vars(); }
  std::size_t size() const { return algebra_->size(); }

  // Throws Error(kValidation) if the point set is not definable.
  ClosedFilter filter(const PointSet& points) const;
  // The closed filter generated by an arbitrary point set's formulas.
  ClosedFilter filter_of_points(const PointSet& points) const;

  // Filter of valid formulas (dual: whole space).
  ClosedFilter bottom() const;
  // Improper filter (dual: empty set).
  ClosedFilter top() const;

  bool leq(const ClosedFilter& a, const ClosedFilter& b) const;
  // T1 intersect T2: dual is the union.
  ClosedFilter meet(const ClosedFilter& a, const ClosedFilter& b) const;
  // Closure of T1 union T2: dual is the intersection.
  ClosedFilter join(const ClosedFilter& a, const ClosedFilter& b) const;

  // Every filter, in the order of their dual sets' bitset values.
  std::vector<ClosedFilter> elements(std::size_t max_elements = 1 << 20) const;

 private:
  void require_ambient(const ClosedFilter& f) const;

  AlgebraPtr algebra_;
};

// s~ on filters: the filter over X whose dual is the closure of the image of
// the dual of t. `x_lattice` must be the lattice over s.source().
ClosedFilter STildeFilter(const Substitution& s, const ClosedFilter& t,
                          const FilterLattice& x_lattice);

}  // namespace kbgeo

#endif  // KBGEO_LATTICE_H_
