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

#ifndef KBGEO_SEMANTICS_H_
#define KBGEO_SEMANTICS_H_

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "kbgeo/algebra.h"
#include "kbgeo/bitset.h"
#include "kbgeo/formula.h"

namespace kbgeo {

inline constexpr std::size_t kDefaultMaxPoints = 1000000;

// An assignment X -> H stored in VarSet order.
struct Point {
  std::vector<Elem> values;
  friend bool operator==(const Point&, const Point&) = default;
};

// "(1,0)" using carrier labels.
std::string ToString(const Point& p, const Model& model);

class AffineSpace;
using SpacePtr = std::shared_ptr<const AffineSpace>;

// Hom(W(X), H) = H^X. Points are indexed lexicographically: the first
// variable is the most significant coordinate, carrier order within it.
class AffineSpace {
 public:
  static SpacePtr Create(ModelPtr model, VarSet vars,
                         std::size_t max_points = kDefaultMaxPoints);

  const ModelPtr& model() const { return model_; }
  const VarSet& vars() const { return vars_; }
  std::size_t size() const { return size_; }
  std::size_t base() const { return model_->carrier_size(); }
  std::size_t dim() const { return vars_.size(); }
  std::size_t max_points() const { return max_points_; }
  std::size_t stride(std::size_t coord) const { return strides_[coord]; }

  Elem coordinate(std::size_t index, std::size_t coord) const {
    return static_cast<Elem>((index / strides_[coord]) % base());
  }
  Point point(std::size_t index) const;
  std::size_t index_of(std::span<const Elem> values) const;
  // The full enumerated point list in index order.
  std::vector<Point> points() const;

  // Same model object and same VarSet.
  bool same_as(const AffineSpace& other) const {
    return model_ == other.model_ && vars_ == other.vars_;
  }
  // Space over the same model for another VarSet.
  SpacePtr with_vars(VarSet vars) const {
    return Create(model_, std::move(vars), max_points_);
  }

 private:
  AffineSpace() = default;

  ModelPtr model_;
  VarSet vars_;
  std::size_t size_ = 0;
  std::size_t max_points_ = kDefaultMaxPoints;
  std::vector<std::size_t> strides_;
};

// Enumerates Hom(W(X), H); throws Error(kBound) when |H|^|X| > max_points.
SpacePtr EnumeratePoints(ModelPtr model, VarSet vars,
                         std::size_t max_points = kDefaultMaxPoints);

// Subset of an affine space.
class PointSet {
 public:
  PointSet(SpacePtr space, Bitset bits);
  static PointSet Empty(SpacePtr space);
  static PointSet Full(SpacePtr space);
  static PointSet FromIndices(SpacePtr space,
                              std::span<const std::size_t> indices);

  const SpacePtr& space() const { return space_; }
  const Bitset& bits() const { return bits_; }
  std::size_t size() const { return bits_.count(); }
  bool empty() const { return bits_.none(); }
  bool contains(std::size_t index) const { return bits_.test(index); }
  bool contains(const Point& p) const {
    return bits_.test(space_->index_of(p.values));
  }

  PointSet complement() const;
  bool is_subset_of(const PointSet& other) const;

  // "{(1,0),(1,1)}"
  std::string to_string() const;

  friend PointSet operator&(const PointSet& a, const PointSet& b);
  friend PointSet operator|(const PointSet& a, const PointSet& b);
  friend bool operator==(const PointSet& a, const PointSet& b);
  friend bool operator!=(const PointSet& a, const PointSet& b) {
    return !(a == b);
  }

 private:
  SpacePtr space_;
  Bitset bits_;
};

// Throws Error(kMismatch) unless both sets live in the same space.
void RequireSameSpace(const AffineSpace& a, const AffineSpace& b);

// Val: the set of points satisfying f. Throws Error(kVariable) when a free
// or quantified variable is outside the space's VarSet.
PointSet Val(const Formula& f, const SpacePtr& space);
PointSet Val(const Formula& f, ModelPtr model, const VarSet& vars);

// Cylindrification along `var`: the semantic value of exists var.
PointSet Cylindrify(const PointSet& a, const std::string& var);

// mu in LKer(f) iff mu is in Val(f).
bool LKerContains(const Point& mu, const Formula& f, const SpacePtr& space);

// Intersection of the values of all formulas; the whole space for an empty
// list.
PointSet PointsOfFormulas(std::span<const Formula> formulas,
                          const SpacePtr& space);

// Membership of f in the filter of formulas true on every point of A.
bool FilterContains(const PointSet& a, const Formula& f);

// s_* A = { mu over target(s) : mu s in A } for A over source(s).
PointSet SStarPoints(const Substitution& s, const PointSet& a);
// Same, into an explicit ambient space whose VarSet contains target(s).
PointSet SStarPoints(const Substitution& s, const PointSet& a,
                     const SpacePtr& target_space);

// s~ A = { mu s : mu in A } for A over target(s); result over source(s).
PointSet STildePoints(const Substitution& s, const PointSet& a);

}  // namespace kbgeo

#endif  // KBGEO_SEMANTICS_H_
