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

#include "kbgeo/lattice.h"

#include <algorithm>
#include <map>
#include <numeric>
#include <string>
#include <unordered_set>
#include <utility>

#include "kbgeo/error.h"
#include "kbgeo/kernels.h"

namespace kbgeo {

DefinableSet::DefinableSet(PointSet points, Formula witness)
    : points_(std::move(points)), witness_(std::move(witness)) {
  if (Val(witness_, points_.space()).bits() != points_.bits()) {
    throw Error(ErrorKind::kValidation,
                "witness " + ToString(witness_) + " does not define " +
                    points_.to_string());
  }
}

namespace {

// Working partition during generation.
struct Partition {
  std::vector<Bitset> blocks;
  std::vector<Formula> witnesses;

  // Splits every block that g cuts properly. Returns whether anything split.
  bool refine(const Bitset& g, const Formula& phi) {
    bool split = false;
    const std::size_t n = blocks.size();
    for (std::size_t i = 0; i < n; ++i) {
      Bitset inside = blocks[i] & g;
      if (inside.none() || inside == blocks[i]) continue;
      Bitset outside = blocks[i];
      outside.subtract(g);
      const Formula w = witnesses[i];
      const bool top = w.kind() == FormulaKind::kTrue;
      blocks[i] = std::move(inside);
      witnesses[i] = top ? phi : Formula::And(w, phi);
      blocks.push_back(std::move(outside));
      witnesses.push_back(top ? Formula::Not(phi)
                              : Formula::And(w, Formula::Not(phi)));
      split = true;
    }
    return split;
  }

  bool discrete(std::size_t points) const { return blocks.size() == points; }
};

class AtomFeeder {
 public:
  AtomFeeder(Partition& partition, std::size_t points, std::size_t budget)
      : partition_(partition), points_(points), budget_(budget) {}

  // Returns false once the partition is discrete, after which further atoms
  // cannot split anything.
  bool feed(const Bitset& value, const Formula& phi) {
    if (++evaluated_ > budget_) {
      throw Error(ErrorKind::kBound,
                  "atomic formula budget of " + std::to_string(budget_) +
                      " exceeded");
    }
    if (value.none() || value.all()) return true;
    if (!seen_.insert(value).second) return true;
    partition_.refine(value, phi);
    return !partition_.discrete(points_);
  }

  std::size_t evaluated() const { return evaluated_; }

 private:
  Partition& partition_;
  std::size_t points_;
  std::size_t budget_;
  std::size_t evaluated_ = 0;
  std::unordered_set<Bitset, BitsetHash> seen_;
};

// Iterates all k-tuples over [0, n) in lexicographic order, k >= 1. Stops
// early when fn returns false.
template <typename Fn>
bool ForEachTuple(std::size_t n, std::size_t k, Fn fn) {
  if (n == 0) return true;
  std::vector<std::size_t> idx(k, 0);
  while (true) {
    if (!fn(idx)) return false;
    std::size_t pos = k;
    while (true) {
      if (pos == 0) return true;
      --pos;
      if (++idx[pos] < n) break;
      idx[pos] = 0;
    }
  }
}

bool FeedAtoms(const Model& model, const TermClone& clone,
               AtomFeeder& feeder) {
  const Signature& sig = model.signature();
  const std::size_t nf = clone.functions.size();
  for (std::size_t r = 0; r < sig.rels().size(); ++r) {
    const RelSymbol& rel = sig.rels()[r];
    const std::size_t k = static_cast<std::size_t>(rel.arity);
    std::vector<std::vector<Elem>> cols(k);
    const bool more = ForEachTuple(nf, k, [&](const std::vector<std::size_t>& t) {
      std::vector<Term> args;
      args.reserve(k);
      for (std::size_t i = 0; i < k; ++i) {
        cols[i] = clone.functions[t[i]].table;
        args.push_back(clone.functions[t[i]].witness);
      }
      const Bitset value = kernels::AtomTable(model, r, cols);
      return feeder.feed(value, Formula::Atom(rel.name, std::move(args)));
    });
    if (!more) return false;
  }
  if (sig.with_equality()) {
    for (std::size_t i = 0; i < nf; ++i) {
      for (std::size_t j = i + 1; j < nf; ++j) {
        const Bitset value = kernels::EqualTable(clone.functions[i].table,
                                                 clone.functions[j].table);
        if (!feeder.feed(value, Formula::Equal(clone.functions[i].witness,
                                               clone.functions[j].witness))) {
          return false;
        }
      }
    }
  }
  return true;
}

// True when c is a union of blocks of the partition.
bool IsUnionOfBlocks(const Bitset& c, const Partition& p) {
  for (const Bitset& b : p.blocks) {
    if (b.intersects(c) && !b.is_subset_of(c)) return false;
  }
  return true;
}

void CloseUnderCylinders(const SpacePtr& space, Partition& p) {
  const VarSet& vars = space->vars();
  bool changed = true;
  while (changed && !p.discrete(space->size())) {
    changed = false;
    for (std::size_t i = 0; i < p.blocks.size(); ++i) {
      for (std::size_t c = 0; c < vars.size(); ++c) {
        const Bitset cyl = kernels::Cylindrify(p.blocks[i], *space, c);
        if (IsUnionOfBlocks(cyl, p)) continue;
        p.refine(cyl, Formula::Exists(vars[c], p.witnesses[i]));
        changed = true;
      }
    }
  }
}

Partition CylindricPartition(const Model& model, const SpacePtr& space,
                             const TermClone& clone, std::size_t max_atoms) {
  Partition p;
  p.blocks.push_back(Bitset::Full(space->size()));
  p.witnesses.push_back(Formula::True());
  AtomFeeder feeder(p, space->size(), max_atoms);
  if (!p.discrete(space->size())) {
    FeedAtoms(model, clone, feeder);
  }
  CloseUnderCylinders(space, p);
  return p;
}

// Largest equivalence on the carrier that every operation respects and every
// relation is a union of classes of. Identity when equality is available.
std::vector<std::size_t> IndiscernibleClasses(const Model& model) {
  const std::size_t n = model.carrier_size();
  std::vector<std::size_t> cls(n, 0);
  if (model.signature().with_equality()) {
    std::iota(cls.begin(), cls.end(), 0);
    return cls;
  }
  const Signature& sig = model.signature();
  std::size_t count = 1;
  while (true) {
    std::map<std::vector<std::size_t>, std::size_t> ids;
    std::vector<std::size_t> next(n);
    for (std::size_t a = 0; a < n; ++a) {
      std::vector<std::size_t> key{cls[a]};
      std::vector<Elem> args;
      for (std::size_t r = 0; r < sig.rels().size(); ++r) {
        const std::size_t k = static_cast<std::size_t>(sig.rels()[r].arity);
        for (std::size_t pos = 0; pos < k; ++pos) {
          ForEachTuple(n, k, [&](const std::vector<std::size_t>& t) {
            if (t[pos] != 0) return true;
            args.assign(t.begin(), t.end());
            args[pos] = static_cast<Elem>(a);
            key.push_back(model.holds(r, args) ? 1 : 0);
            return true;
          });
        }
      }
      for (std::size_t o = 0; o < sig.ops().size(); ++o) {
        const std::size_t k = static_cast<std::size_t>(sig.ops()[o].arity);
        for (std::size_t pos = 0; pos < k; ++pos) {
          ForEachTuple(n, k, [&](const std::vector<std::size_t>& t) {
            if (t[pos] != 0) return true;
            args.assign(t.begin(), t.end());
            args[pos] = static_cast<Elem>(a);
            key.push_back(cls[model.apply_op(o, args)]);
            return true;
          });
        }
      }
      next[a] = ids.emplace(std::move(key), ids.size()).first->second;
    }
    cls = std::move(next);
    if (ids.size() == count) return cls;
    count = ids.size();
  }
}

// Quotient of the model by its indiscernibility classes, with equality.
ModelPtr ReducedModel(const Model& model, const std::vector<std::size_t>& cls,
                      std::size_t classes) {
  const Signature& sig = model.signature();
  std::vector<std::string> labels(classes);
  std::vector<Elem> rep(classes);
  for (std::size_t a = model.carrier_size(); a-- > 0;) {
    rep[cls[a]] = static_cast<Elem>(a);
    labels[cls[a]] = model.label(static_cast<Elem>(a));
  }
  ModelBuilder b(sig, labels);
  std::vector<Elem> args;
  for (std::size_t r = 0; r < sig.rels().size(); ++r) {
    const auto k = static_cast<std::size_t>(sig.rels()[r].arity);
    ForEachTuple(classes, k, [&](const std::vector<std::size_t>& t) {
      args.clear();
      for (std::size_t c : t) args.push_back(rep[c]);
      if (model.holds(r, args)) {
        b.add_tuple(sig.rels()[r].name, std::vector<Elem>(t.begin(), t.end()));
      }
      return true;
    });
  }
  for (std::size_t o = 0; o < sig.ops().size(); ++o) {
    const auto k = static_cast<std::size_t>(sig.ops()[o].arity);
    ForEachTuple(classes, k, [&](const std::vector<std::size_t>& t) {
      args.clear();
      for (std::size_t c : t) args.push_back(rep[c]);
      b.set_op(sig.ops()[o].name, std::vector<Elem>(t.begin(), t.end()),
               static_cast<Elem>(cls[model.apply_op(o, args)]));
      return true;
    });
  }
  return b.build();
}

// Type class of every point: two points share a class iff no first-order
// formula over the model separates them. On a finite model these are the
// orbits of the automorphism group of the reduced model.
std::vector<std::size_t> TypeClasses(const ModelPtr& model,
                                     const AffineSpace& space) {
  const std::vector<std::size_t> cls = IndiscernibleClasses(*model);
  const std::size_t classes =
      *std::max_element(cls.begin(), cls.end()) + 1;
  const ModelPtr reduced = ReducedModel(*model, cls, classes);
  const std::vector<ModelMap> autos = ModelIsomorphisms(reduced, reduced);
  std::map<std::vector<Elem>, std::size_t> ids;
  std::vector<std::size_t> out(space.size());
  std::vector<Elem> image;
  for (std::size_t pt = 0; pt < space.size(); ++pt) {
    std::vector<Elem> key;
    for (Elem e : space.point(pt).values) {
      key.push_back(static_cast<Elem>(cls[e]));
    }
    std::vector<Elem> best = key;
    for (const ModelMap& g : autos) {
      image.clear();
      for (Elem c : key) image.push_back(g.mapping[c]);
      if (image < best) best = image;
    }
    out[pt] = ids.emplace(std::move(best), ids.size()).first->second;
  }
  return out;
}

VarSet WithAuxiliary(const VarSet& vars, std::size_t m,
                     std::vector<std::string>& aux) {
  std::string prefix = "y";
  auto clashes = [&] {
    for (std::size_t i = 1; i <= m; ++i) {
      if (vars.contains(prefix + std::to_string(i))) return true;
    }
    return false;
  };
  while (clashes()) prefix += "y";
  std::vector<std::string> names = vars.names();
  aux.clear();
  for (std::size_t i = 1; i <= m; ++i) {
    aux.push_back(prefix + std::to_string(i));
    names.push_back(aux.back());
  }
  return VarSet(std::move(names));
}

// Splits the partition down to type classes. The separating sets are
// projections of definable sets over X plus m auxiliary variables, each
// expressed over X through a substitution node that sends the auxiliary
// variables to the first variable of X.
void RefineToTypes(const ModelPtr& model, const SpacePtr& space,
                   const AlgebraOptions& options, std::size_t max_points,
                   Partition& p) {
  const std::vector<std::size_t> type = TypeClasses(model, *space);
  const std::size_t types =
      type.empty() ? 0 : *std::max_element(type.begin(), type.end()) + 1;
  const VarSet& vars = space->vars();
  std::vector<std::string> aux;
  for (std::size_t m = 1; p.blocks.size() < types; ++m) {
    if (m > model->carrier_size() + vars.size()) {
      throw std::logic_error("type classes over " + vars.to_string() +
                             " not separated by auxiliary variables");
    }
    const VarSet z = WithAuxiliary(vars, m, aux);
    const SpacePtr zspace = EnumeratePoints(model, z, max_points);
    CloneOptions clone_options = options.clone;
    clone_options.max_points = max_points;
    const TermClone clone = TermFunctions(*model, z, clone_options);
    const Partition zp =
        CylindricPartition(*model, zspace, clone, options.max_atoms);

    std::vector<Term> images;
    for (const std::string& v : vars) images.push_back(Term::Var(v));
    for (std::size_t i = 0; i < m; ++i) images.push_back(Term::Var(vars[0]));
    const Substitution collapse(z, vars, std::move(images));
    for (std::size_t b = 0; b < zp.blocks.size(); ++b) {
      Bitset proj(space->size());
      for (std::size_t pt : zp.blocks[b].indices()) {
        const auto& v = zspace->point(pt).values;
        proj.set(space->index_of(std::span<const Elem>(v.data(), vars.size())));
      }
      if (IsUnionOfBlocks(proj, p)) continue;
      Formula w = zp.witnesses[b];
      for (std::size_t i = m; i-- > 0;) w = Formula::Exists(aux[i], w);
      p.refine(proj, Formula::Subst(collapse, std::move(w)));
    }
  }
  if (p.blocks.size() != types) {
    throw std::logic_error("definable atoms over " + vars.to_string() +
                           " are finer than type classes");
  }
}

Formula OrChain(const std::vector<const Formula*>& parts) {
  Formula out = *parts[0];
  for (std::size_t i = 1; i < parts.size(); ++i) {
    out = Formula::Or(out, *parts[i]);
  }
  return out;
}

}  // namespace

AlgebraPtr GenerateDefinableAlgebra(ModelPtr model, VarSet vars,
                                    const AlgebraOptions& options,
                                    std::size_t max_points) {
  SpacePtr space = EnumeratePoints(model, vars, max_points);
  CloneOptions clone_options = options.clone;
  clone_options.max_points = max_points;
  const TermClone clone = TermFunctions(*model, vars, clone_options);

  Partition p = CylindricPartition(*model, space, clone, options.max_atoms);
  if (clone.saturated) {
    RefineToTypes(model, space, options, max_points, p);
  }

  // Canonical block order: by smallest point index.
  std::vector<std::size_t> order(p.blocks.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<std::size_t> first(p.blocks.size());
  for (std::size_t i = 0; i < p.blocks.size(); ++i) {
    first[i] = p.blocks[i].indices().front();
  }
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return first[a] < first[b]; });

  std::shared_ptr<DefinableAlgebra> alg(new DefinableAlgebra());
  alg->space_ = space;
  alg->saturated_ = clone.saturated;
  alg->block_of_.assign(space->size(), 0);
  for (std::size_t i : order) {
    const std::size_t id = alg->blocks_.size();
    for (std::size_t pt : p.blocks[i].indices()) alg->block_of_[pt] = id;
    alg->blocks_.push_back(std::move(p.blocks[i]));
    alg->witnesses_.push_back(std::move(p.witnesses[i]));
  }
  for (std::size_t i = 0; i < alg->blocks_.size(); ++i) {
    if (Val(alg->witnesses_[i], space).bits() != alg->blocks_[i]) {
      throw std::logic_error("block witness " + ToString(alg->witnesses_[i]) +
                             " does not define its block");
    }
  }
  return alg;
}

std::size_t DefinableAlgebra::size() const {
  if (blocks_.size() > 62) {
    throw Error(ErrorKind::kBound, "definable algebra has 2^" +
                                       std::to_string(blocks_.size()) +
                                       " members");
  }
  return std::size_t{1} << blocks_.size();
}

bool DefinableAlgebra::contains(const PointSet& a) const {
  RequireSameSpace(*space_, *a.space());
  for (const Bitset& b : blocks_) {
    if (b.intersects(a.bits()) && !b.is_subset_of(a.bits())) return false;
  }
  return true;
}

std::vector<bool> DefinableAlgebra::BlockMask(const PointSet& a) const {
  RequireSameSpace(*space_, *a.space());
  std::vector<bool> mask(blocks_.size(), false);
  for (std::size_t pt : a.bits().indices()) mask[block_of_[pt]] = true;
  return mask;
}

Formula DefinableAlgebra::WitnessOf(const std::vector<bool>& mask) const {
  std::vector<const Formula*> in, out;
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    (mask[i] ? in : out).push_back(&witnesses_[i]);
  }
  if (in.empty()) return Formula::False();
  if (out.empty()) return Formula::True();
  if (in.size() <= out.size()) return OrChain(in);
  if (out.size() == 1 && out[0]->kind() == FormulaKind::kNot) {
    return out[0]->child();
  }
  return Formula::Not(OrChain(out));
}

DefinableSet DefinableAlgebra::FromBlocks(const std::vector<bool>& mask) const {
  if (mask.size() != blocks_.size()) {
    throw std::logic_error("FromBlocks: mask size differs from block count");
  }
  Bitset bits(space_->size());
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    if (mask[i]) bits |= blocks_[i];
  }
  return DefinableSet(PointSet(space_, std::move(bits)), WitnessOf(mask),
                      DefinableSet::Unchecked{});
}

DefinableSet DefinableAlgebra::Closure(const PointSet& a) const {
  return FromBlocks(BlockMask(a));
}

std::vector<DefinableSet> DefinableAlgebra::members(
    std::size_t max_members) const {
  const std::size_t total = size();
  if (total > max_members) {
    throw Error(ErrorKind::kBound, "definable algebra has " +
                                       std::to_string(total) +
                                       " members, limit is " +
                                       std::to_string(max_members));
  }
  std::vector<std::pair<Bitset, std::size_t>> sets;
  sets.reserve(total);
  for (std::size_t m = 0; m < total; ++m) {
    Bitset bits(space_->size());
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
      if ((m >> i) & 1u) bits |= blocks_[i];
    }
    sets.emplace_back(std::move(bits), m);
  }
  std::sort(sets.begin(), sets.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<DefinableSet> out;
  out.reserve(total);
  for (auto& [bits, m] : sets) {
    std::vector<bool> mask(blocks_.size());
    for (std::size_t i = 0; i < blocks_.size(); ++i) mask[i] = (m >> i) & 1u;
    out.push_back(DefinableSet(PointSet(space_, std::move(bits)),
                               WitnessOf(mask), DefinableSet::Unchecked{}));
  }
  return out;
}

DefinableSet Closure(const PointSet& a, const DefinableAlgebra& alg) {
  return alg.Closure(a);
}

FilterLattice::FilterLattice(AlgebraPtr algebra)
    : algebra_(std::move(algebra)) {
  if (!algebra_) throw std::logic_error("FilterLattice: null algebra");
}

void FilterLattice::require_ambient(const ClosedFilter& f) const {
  RequireSameSpace(*space(), *f.points().space());
}

ClosedFilter FilterLattice::filter(const PointSet& points) const {
  if (!algebra_->contains(points)) {
    throw Error(ErrorKind::kValidation,
                points.to_string() + " is not a definable set");
  }
  return ClosedFilter(algebra_->Closure(points));
}

ClosedFilter FilterLattice::filter_of_points(const PointSet& points) const {
  return ClosedFilter(algebra_->Closure(points));
}

ClosedFilter FilterLattice::bottom() const {
  return ClosedFilter(
      DefinableSet(PointSet::Full(space()), Formula::True()));
}

ClosedFilter FilterLattice::top() const {
  return ClosedFilter(
      DefinableSet(PointSet::Empty(space()), Formula::False()));
}

bool FilterLattice::leq(const ClosedFilter& a, const ClosedFilter& b) const {
  require_ambient(a);
  require_ambient(b);
  return b.points().is_subset_of(a.points());
}

ClosedFilter FilterLattice::meet(const ClosedFilter& a,
                                 const ClosedFilter& b) const {
  require_ambient(a);
  require_ambient(b);
  return ClosedFilter(DefinableSet(a.points() | b.points(),
                                   Formula::Or(a.generator(), b.generator())));
}

ClosedFilter FilterLattice::join(const ClosedFilter& a,
                                 const ClosedFilter& b) const {
  require_ambient(a);
  require_ambient(b);
  return ClosedFilter(DefinableSet(a.points() & b.points(),
                                   Formula::And(a.generator(), b.generator())));
}

std::vector<ClosedFilter> FilterLattice::elements(
    std::size_t max_elements) const {
  std::vector<ClosedFilter> out;
  for (DefinableSet& d : algebra_->members(max_elements)) {
    out.emplace_back(std::move(d));
  }
  return out;
}

ClosedFilter STildeFilter(const Substitution& s, const ClosedFilter& t,
                          const FilterLattice& x_lattice) {
  if (x_lattice.vars() != s.source()) {
    throw Error(ErrorKind::kMismatch,
                "lattice over " + x_lattice.vars().to_string() +
                    " but substitution source is " + s.source().to_string());
  }
  if (x_lattice.space()->model() != t.points().space()->model()) {
    throw Error(ErrorKind::kMismatch, "filters over different models");
  }
  const PointSet image = STildePoints(s, t.points());
  const PointSet rehomed(x_lattice.space(), image.bits());
  return x_lattice.filter_of_points(rehomed);
}

}  // namespace kbgeo
