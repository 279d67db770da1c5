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

#include "kbgeo/semantics.h"

#include <string>
#include <utility>

#include "kbgeo/error.h"
#include "kbgeo/kernels.h"

namespace kbgeo {

std::string ToString(const Point& p, const Model& model) {
  std::string out = "(";
  for (std::size_t i = 0; i < p.values.size(); ++i) {
    if (i > 0) out += ",";
    out += model.label(p.values[i]);
  }
  return out + ")";
}

SpacePtr AffineSpace::Create(ModelPtr model, VarSet vars,
                             std::size_t max_points) {
  if (!model) throw std::logic_error("AffineSpace: null model");
  if (vars.size() == 0) {
    throw Error(ErrorKind::kVariable, "variable set must be nonempty");
  }
  const std::size_t n =
      CheckedPower(model->carrier_size(), vars.size(), max_points);
  std::shared_ptr<AffineSpace> space(new AffineSpace());
  space->model_ = std::move(model);
  space->vars_ = std::move(vars);
  space->size_ = n;
  space->max_points_ = max_points;
  space->strides_.assign(space->vars_.size(), 1);
  for (std::size_t i = space->vars_.size(); i-- > 1;) {
    space->strides_[i - 1] = space->strides_[i] * space->base();
  }
  return space;
}

SpacePtr EnumeratePoints(ModelPtr model, VarSet vars, std::size_t max_points) {
  return AffineSpace::Create(std::move(model), std::move(vars), max_points);
}

Point AffineSpace::point(std::size_t index) const {
  Point p;
  p.values.resize(dim());
  for (std::size_t c = 0; c < dim(); ++c) p.values[c] = coordinate(index, c);
  return p;
}

std::size_t AffineSpace::index_of(std::span<const Elem> values) const {
  if (values.size() != dim()) {
    throw Error(ErrorKind::kMismatch, "point has " +
                                          std::to_string(values.size()) +
                                          " coordinates, space has " +
                                          std::to_string(dim()));
  }
  std::size_t index = 0;
  for (std::size_t c = 0; c < dim(); ++c) {
    if (values[c] < 0 || static_cast<std::size_t>(values[c]) >= base()) {
      throw Error(ErrorKind::kMismatch, "point coordinate outside carrier");
    }
    index += static_cast<std::size_t>(values[c]) * strides_[c];
  }
  return index;
}

std::vector<Point> AffineSpace::points() const {
  std::vector<Point> out;
  out.reserve(size_);
  for (std::size_t i = 0; i < size_; ++i) out.push_back(point(i));
  return out;
}

void RequireSameSpace(const AffineSpace& a, const AffineSpace& b) {
  if (!a.same_as(b)) {
    throw Error(ErrorKind::kMismatch, "point sets over different spaces " +
                                          a.vars().to_string() + " and " +
                                          b.vars().to_string());
  }
}

PointSet::PointSet(SpacePtr space, Bitset bits)
    : space_(std::move(space)), bits_(std::move(bits)) {
  if (bits_.size() != space_->size()) {
    throw std::logic_error("PointSet: bitset size differs from space size");
  }
}

PointSet PointSet::Empty(SpacePtr space) {
  const std::size_t n = space->size();
  return PointSet(std::move(space), Bitset(n));
}

PointSet PointSet::Full(SpacePtr space) {
  const std::size_t n = space->size();
  return PointSet(std::move(space), Bitset::Full(n));
}

PointSet PointSet::FromIndices(SpacePtr space,
                               std::span<const std::size_t> indices) {
  Bitset bits(space->size());
  for (std::size_t i : indices) {
    if (i >= bits.size()) {
      throw Error(ErrorKind::kMismatch, "point index out of range");
    }
    bits.set(i);
  }
  return PointSet(std::move(space), std::move(bits));
}

PointSet PointSet::complement() const {
  return PointSet(space_, bits_.complement());
}

bool PointSet::is_subset_of(const PointSet& other) const {
  RequireSameSpace(*space_, *other.space_);
  return bits_.is_subset_of(other.bits_);
}

std::string PointSet::to_string() const {
  std::string out = "{";
  bool first = true;
  for (std::size_t i : bits_.indices()) {
    if (!first) out += ",";
    first = false;
    out += ToString(space_->point(i), *space_->model());
  }
  return out + "}";
}

PointSet operator&(const PointSet& a, const PointSet& b) {
  RequireSameSpace(*a.space_, *b.space_);
  return PointSet(a.space_, a.bits_ & b.bits_);
}

PointSet operator|(const PointSet& a, const PointSet& b) {
  RequireSameSpace(*a.space_, *b.space_);
  return PointSet(a.space_, a.bits_ | b.bits_);
}

bool operator==(const PointSet& a, const PointSet& b) {
  return a.space_->same_as(*b.space_) && a.bits_ == b.bits_;
}

namespace {

std::size_t CoordOf(const AffineSpace& space, const std::string& var) {
  auto c = space.vars().index_of(var);
  if (!c) {
    throw Error(ErrorKind::kVariable,
                "variable " + var + " not in " + space.vars().to_string());
  }
  return *c;
}

void RequireVarsIn(const VarSet& inner, const AffineSpace& space) {
  for (const std::string& v : inner) CoordOf(space, v);
}

Bitset ValBits(const Formula& f, const SpacePtr& space) {
  const std::size_t n = space->size();
  const Model& model = *space->model();
  switch (f.kind()) {
    case FormulaKind::kTrue:
      return Bitset::Full(n);
    case FormulaKind::kFalse:
      return Bitset(n);
    case FormulaKind::kAtom: {
      auto rel = model.signature().find_rel(f.name());
      if (!rel) {
        throw Error(ErrorKind::kUnknownSymbol, "unknown relation " + f.name());
      }
      if (static_cast<std::size_t>(model.signature().rels()[*rel].arity) !=
          f.terms().size()) {
        throw Error(ErrorKind::kArity, "relation " + f.name() + " expects " +
                                           std::to_string(
                                               model.signature()
                                                   .rels()[*rel]
                                                   .arity) +
                                           " arguments");
      }
      std::vector<std::vector<Elem>> cols;
      cols.reserve(f.terms().size());
      for (const Term& t : f.terms()) {
        cols.push_back(kernels::TermTable(t, *space));
      }
      return kernels::AtomTable(model, *rel, cols);
    }
    case FormulaKind::kEqual: {
      if (!model.signature().with_equality()) {
        throw Error(ErrorKind::kUnknownSymbol,
                    "equality is disabled for this model");
      }
      const auto lhs = kernels::TermTable(f.terms()[0], *space);
      const auto rhs = kernels::TermTable(f.terms()[1], *space);
      return kernels::EqualTable(lhs, rhs);
    }
    case FormulaKind::kNot:
      return ValBits(f.child(0), space).complement();
    case FormulaKind::kAnd: {
      Bitset out = ValBits(f.child(0), space);
      out &= ValBits(f.child(1), space);
      return out;
    }
    case FormulaKind::kOr: {
      Bitset out = ValBits(f.child(0), space);
      out |= ValBits(f.child(1), space);
      return out;
    }
    case FormulaKind::kImplies: {
      Bitset out = ValBits(f.child(0), space).complement();
      out |= ValBits(f.child(1), space);
      return out;
    }
    case FormulaKind::kExists: {
      const std::size_t c = CoordOf(*space, f.name());
      return kernels::Cylindrify(ValBits(f.child(0), space), *space, c);
    }
    case FormulaKind::kForall: {
      const std::size_t c = CoordOf(*space, f.name());
      Bitset inner = ValBits(f.child(0), space).complement();
      return kernels::Cylindrify(inner, *space, c).complement();
    }
    case FormulaKind::kSubst: {
      const Substitution& s = f.substitution();
      RequireVarsIn(s.target(), *space);
      SpacePtr source = space->with_vars(s.source());
      const Bitset inner = ValBits(f.child(0), source);
      const auto map = kernels::TransportMap(s.images(), *space, *source);
      return kernels::Preimage(inner, map);
    }
  }
  throw std::logic_error("unhandled formula kind");
}

}  // namespace

PointSet Val(const Formula& f, const SpacePtr& space) {
  return PointSet(space, ValBits(f, space));
}

PointSet Val(const Formula& f, ModelPtr model, const VarSet& vars) {
  return Val(f, EnumeratePoints(std::move(model), vars));
}

PointSet Cylindrify(const PointSet& a, const std::string& var) {
  const std::size_t c = CoordOf(*a.space(), var);
  return PointSet(a.space(), kernels::Cylindrify(a.bits(), *a.space(), c));
}

bool LKerContains(const Point& mu, const Formula& f, const SpacePtr& space) {
  return Val(f, space).contains(mu);
}

PointSet PointsOfFormulas(std::span<const Formula> formulas,
                          const SpacePtr& space) {
  Bitset bits = Bitset::Full(space->size());
  for (const Formula& f : formulas) {
    bits &= ValBits(f, space);
    if (bits.none()) break;
  }
  return PointSet(space, std::move(bits));
}

bool FilterContains(const PointSet& a, const Formula& f) {
  if (a.empty()) return true;
  return a.bits().is_subset_of(ValBits(f, a.space()));
}

namespace {

void RequireSource(const Substitution& s, const PointSet& a) {
  if (a.space()->vars() != s.source()) {
    throw Error(ErrorKind::kMismatch,
                "point set over " + a.space()->vars().to_string() +
                    " but substitution source is " + s.source().to_string());
  }
}

}  // namespace

PointSet SStarPoints(const Substitution& s, const PointSet& a) {
  return SStarPoints(s, a, a.space()->with_vars(s.target()));
}

PointSet SStarPoints(const Substitution& s, const PointSet& a,
                     const SpacePtr& target_space) {
  RequireSource(s, a);
  if (target_space->model() != a.space()->model()) {
    throw Error(ErrorKind::kMismatch, "substitution maps between models");
  }
  RequireVarsIn(s.target(), *target_space);
  const auto map = kernels::TransportMap(s.images(), *target_space, *a.space());
  return PointSet(target_space, kernels::Preimage(a.bits(), map));
}

PointSet STildePoints(const Substitution& s, const PointSet& a) {
  if (a.space()->vars() != s.target()) {
    throw Error(ErrorKind::kMismatch,
                "point set over " + a.space()->vars().to_string() +
                    " but substitution target is " + s.target().to_string());
  }
  SpacePtr source = a.space()->with_vars(s.source());
  const auto map = kernels::TransportMap(s.images(), *a.space(), *source);
  return PointSet(source, kernels::Image(a.bits(), map, source->size()));
}

}  // namespace kbgeo
