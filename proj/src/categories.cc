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

#include "kbgeo/categories.h"

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "kbgeo/error.h"
#include "kbgeo/formula.h"
#include "kbgeo/kernels.h"
#include "parallel.h"

namespace kbgeo {

VariablePool::VariablePool(int n_max) : n_max_(n_max) {
  if (n_max < 1 || n_max > 16) {
    throw Error(ErrorKind::kBound, "variable bound must be in [1, 16], got " +
                                       std::to_string(n_max));
  }
  std::vector<std::vector<std::string>> sets;
  for (unsigned mask = 1; mask < (1u << n_max); ++mask) {
    std::vector<std::string> names;
    for (int i = 0; i < n_max; ++i) {
      if (mask & (1u << i)) names.push_back("x" + std::to_string(i + 1));
    }
    sets.push_back(std::move(names));
  }
  // Lexicographic by variable index, not by name text (x10 after x9).
  auto index_key = [](const std::vector<std::string>& names) {
    std::vector<int> key;
    for (const auto& n : names) key.push_back(std::stoi(n.substr(1)));
    return key;
  };
  std::stable_sort(sets.begin(), sets.end(), [&](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return index_key(a) < index_key(b);
  });
  for (auto& names : sets) subsets_.emplace_back(std::move(names));
}

VarSet VariablePool::canonical(int k) const {
  if (k < 1 || k > n_max_) {
    throw Error(ErrorKind::kBound, "no canonical variable set of size " +
                                       std::to_string(k));
  }
  std::vector<std::string> names;
  for (int i = 1; i <= k; ++i) names.push_back("x" + std::to_string(i));
  return VarSet(std::move(names));
}

bool IsAdmissibleDesc(const Substitution& s, const ClosedFilter& t1,
                      const ClosedFilter& t2) {
  const PointSet pre = SStarPoints(s, t1.points(), t2.points().space());
  return t2.points().is_subset_of(pre);
}

bool IsAdmissibleDescByFormula(const Substitution& s, const ClosedFilter& t1,
                               const ClosedFilter& t2) {
  const Formula image = ApplySubstFormula(s, t1.generator());
  return t2.contains(image);
}

bool IsAdmissibleCont(const Substitution& s, const DefinableSet& a2,
                      const DefinableSet& a1) {
  const PointSet image = STildePoints(s, a2.points());
  if (image.space()->model() != a1.space()->model() ||
      image.space()->vars() != a1.space()->vars()) {
    throw Error(ErrorKind::kMismatch, "content morphism between mismatched "
                                      "objects");
  }
  return image.bits().is_subset_of(a1.points().bits());
}

ContentObject CtObject(const DescriptionObject& f) {
  return ContentObject{f.model, f.vars, f.lattice->algebra()};
}

DefinableSet CtElement(const ClosedFilter& t) { return t.dual(); }

ClosedFilter CtInverse(const DefinableSet& a, const FilterLattice& lattice) {
  return lattice.filter(a.points());
}

AdmissibleContMorphism CtMorphism(const AdmissibleDescMorphism& m) {
  AdmissibleContMorphism out{m.s, {}};
  out.assignment.reserve(m.assignment.size());
  for (const auto& [t1, t2] : m.assignment) {
    DefinableSet a2 = CtElement(t2);
    DefinableSet a1 = CtElement(t1);
    if (!IsAdmissibleCont(m.s, a2, a1)) {
      throw std::logic_error("content image of an admissible description "
                             "morphism is not admissible");
    }
    out.assignment.emplace_back(std::move(a2), std::move(a1));
  }
  return out;
}

ClosedFilter ClMorphism(const Substitution& s, const ClosedFilter& t,
                        const FilterLattice& y_lattice) {
  return y_lattice.filter(SStarPoints(s, t.points(), y_lattice.space()));
}

AdmissibleDescMorphism LeastDescMorphism(const Substitution& s,
                                         const FilterLattice& x_lattice,
                                         const FilterLattice& y_lattice) {
  AdmissibleDescMorphism m{s, {}};
  for (ClosedFilter& t1 : x_lattice.elements()) {
    ClosedFilter t2 = ClMorphism(s, t1, y_lattice);
    m.assignment.emplace_back(std::move(t1), std::move(t2));
  }
  return m;
}

namespace {

template <typename Pairs>
std::unordered_map<Bitset, std::size_t, BitsetHash> IndexByFirst(
    const Pairs& pairs) {
  std::unordered_map<Bitset, std::size_t, BitsetHash> index;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    index.emplace(pairs[i].first.points().bits(), i);
  }
  return index;
}

}  // namespace

AdmissibleDescMorphism ComposeDesc(const AdmissibleDescMorphism& m1,
                                   const AdmissibleDescMorphism& m2) {
  AdmissibleDescMorphism out{ComposeSubst(m1.s, m2.s), {}};
  const auto index = IndexByFirst(m2.assignment);
  for (const auto& [t1, t2] : m1.assignment) {
    auto it = index.find(t2.points().bits());
    if (it == index.end()) {
      throw Error(ErrorKind::kMismatch,
                  "second morphism does not assign " +
                      t2.points().to_string());
    }
    out.assignment.emplace_back(t1, m2.assignment[it->second].second);
  }
  return out;
}

AdmissibleContMorphism ComposeCont(const AdmissibleContMorphism& c1,
                                   const AdmissibleContMorphism& c2) {
  AdmissibleContMorphism out{ComposeSubst(c1.s, c2.s), {}};
  std::unordered_map<Bitset, std::size_t, BitsetHash> by_second;
  for (std::size_t i = 0; i < c2.assignment.size(); ++i) {
    by_second.emplace(c2.assignment[i].second.points().bits(), i);
  }
  for (const auto& [a2, a1] : c1.assignment) {
    auto it = by_second.find(a2.points().bits());
    if (it == by_second.end()) {
      throw Error(ErrorKind::kMismatch,
                  "second morphism does not reach " + a2.points().to_string());
    }
    out.assignment.emplace_back(c2.assignment[it->second].first, a1);
  }
  return out;
}

std::shared_ptr<const KnowledgeBase> KnowledgeBase::Build(
    ModelPtr model, int n_max, const KnowledgeBaseOptions& options) {
  std::shared_ptr<KnowledgeBase> kb(new KnowledgeBase(std::move(model), n_max));
  const auto& subsets = kb->pool_.subsets();
  std::vector<LatticePtr> lattices(subsets.size());
  internal::ParallelFor(subsets.size(), [&](std::size_t i) {
    lattices[i] = std::make_shared<const FilterLattice>(
        GenerateDefinableAlgebra(kb->model_, subsets[i], options.algebra,
                                 options.max_points));
  });
  for (std::size_t i = 0; i < subsets.size(); ++i) {
    kb->saturated_ = kb->saturated_ && lattices[i]->algebra()->saturated();
    kb->lattices_.emplace(subsets[i], std::move(lattices[i]));
  }
  return kb;
}

const FilterLattice& KnowledgeBase::lattice(const VarSet& vars) const {
  auto it = lattices_.find(vars);
  if (it == lattices_.end()) {
    throw Error(ErrorKind::kVariable, "variable set " + vars.to_string() +
                                          " is outside the pool of " +
                                          std::to_string(n_max()));
  }
  return *it->second;
}

DescriptionObject KnowledgeBase::description(const VarSet& vars) const {
  lattice(vars);
  return DescriptionObject{model_, vars, lattices_.at(vars)};
}

ContentObject KnowledgeBase::content(const VarSet& vars) const {
  return CtObject(description(vars));
}

namespace {

constexpr std::size_t kMaxListedFailures = 20;

class FailureLog {
 public:
  void add(std::string what) {
    ++count_;
    if (listed_.size() < kMaxListedFailures) listed_.push_back(std::move(what));
  }
  void merge(const FailureLog& other) {
    count_ += other.count_;
    for (const auto& f : other.listed_) {
      if (listed_.size() < kMaxListedFailures) listed_.push_back(f);
    }
  }
  std::size_t count() const { return count_; }

  void write(Report& r) const {
    r.add("failures.count", count_);
    for (std::size_t i = 0; i < listed_.size(); ++i) {
      r.add("failures." + std::to_string(i + 1), listed_[i]);
    }
  }

 private:
  std::size_t count_ = 0;
  std::vector<std::string> listed_;
};

std::string SizesList(const KnowledgeBase& kb) {
  std::string out;
  for (int k = 1; k <= kb.n_max(); ++k) {
    if (k > 1) out += ",";
    out += std::to_string(kb.lattice(kb.pool().canonical(k)).size());
  }
  return out;
}

template <typename Pairs>
bool SameAssignment(Pairs a, Pairs b) {
  if (a.size() != b.size()) return false;
  auto by_pair = [](const auto& p, const auto& q) {
    const Bitset& p1 = p.first.points().bits();
    const Bitset& q1 = q.first.points().bits();
    if (p1 != q1) return p1 < q1;
    return p.second.points().bits() < q.second.points().bits();
  };
  std::sort(a.begin(), a.end(), by_pair);
  std::sort(b.begin(), b.end(), by_pair);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!(a[i].first == b[i].first) || !(a[i].second == b[i].second)) {
      return false;
    }
  }
  return true;
}

}  // namespace

Report CheckDuality(const KnowledgeBase& kb, const DualityOptions& options) {
  const Signature& sig = kb.model()->signature();
  const auto& subsets = kb.pool().subsets();
  FailureLog failures;
  std::size_t order_pairs = 0, morphisms = 0, hom_pairs = 0, composites = 0;

  // Objects: Ct is a bijection on elements and reverses the order.
  for (const VarSet& x : subsets) {
    const FilterLattice& lx = kb.lattice(x);
    const ContentObject content = kb.content(x);
    const std::vector<ClosedFilter> elems = lx.elements();
    if (elems.size() != content.algebra->size()) {
      failures.add("object " + x.to_string() + ": " +
                   std::to_string(elems.size()) + " filters vs " +
                   std::to_string(content.algebra->size()) + " sets");
    }
    for (std::size_t i = 0; i < elems.size(); ++i) {
      const DefinableSet a = CtElement(elems[i]);
      if (!content.algebra->contains(a.points())) {
        failures.add("object " + x.to_string() + ": Ct image " +
                     a.points().to_string() + " is not definable");
      }
      if (i > 0 && !(CtElement(elems[i - 1]).points().bits() <
                     a.points().bits())) {
        failures.add("object " + x.to_string() + ": Ct not injective");
      }
      if (!(CtInverse(a, lx) == elems[i])) {
        failures.add("object " + x.to_string() + ": Ct inverse mismatch");
      }
    }
    const std::size_t limit = std::min<std::size_t>(elems.size(), 256);
    for (std::size_t i = 0; i < limit; ++i) {
      for (std::size_t j = 0; j < limit; ++j) {
        ++order_pairs;
        const bool by_lattice = lx.leq(elems[i], elems[j]);
        const bool by_formula = elems[j].contains(elems[i].generator());
        const bool by_content = CtElement(elems[j]).points().is_subset_of(
            CtElement(elems[i]).points());
        if (by_lattice != by_formula || by_lattice != by_content) {
          failures.add("object " + x.to_string() + ": order disagrees at " +
                       elems[i].points().to_string() + " <= " +
                       elems[j].points().to_string());
        }
      }
    }
  }

  // Morphisms between every pair of objects.
  for (const VarSet& x : subsets) {
    const FilterLattice& lx = kb.lattice(x);
    const std::vector<ClosedFilter> fx = lx.elements();
    for (const VarSet& y : subsets) {
      const FilterLattice& ly = kb.lattice(y);
      const std::vector<ClosedFilter> fy = ly.elements();
      std::size_t budget = options.max_hom_checks;
      for (const Substitution& s :
           EnumerateSubstitutions(sig, x, y, options.depth)) {
        ++morphisms;
        const std::string tag = ToString(s);
        std::optional<AdmissibleDescMorphism> m;
        try {
          m = LeastDescMorphism(s, lx, ly);
        } catch (const Error& e) {
          failures.add("morphism " + tag + ": " + e.what());
          continue;
        }
        for (const auto& [t1, t2] : m->assignment) {
          if (!IsAdmissibleDesc(s, t1, t2) ||
              !IsAdmissibleDescByFormula(s, t1, t2)) {
            failures.add("morphism " + tag + ": least target not admissible");
          }
        }
        try {
          const AdmissibleContMorphism c = CtMorphism(*m);
          if (s.is_identity()) {
            for (const auto& [a2, a1] : c.assignment) {
              if (!(a2 == a1)) failures.add("Ct(id) is not the identity");
            }
          }
        } catch (const std::logic_error& e) {
          failures.add("morphism " + tag + ": " + e.what());
        }
        // Hom-set bijection: T1 -> T2 admissible iff Ct T2 -> Ct T1 is.
        for (const ClosedFilter& t1 : fx) {
          for (const ClosedFilter& t2 : fy) {
            if (budget == 0) break;
            --budget;
            ++hom_pairs;
            const bool desc = IsAdmissibleDesc(s, t1, t2);
            const bool cont = IsAdmissibleCont(s, CtElement(t2), CtElement(t1));
            if (desc != cont) {
              failures.add("hom-set " + tag + ": " + t1.points().to_string() +
                           " -> " + t2.points().to_string());
            }
          }
        }
      }
    }
  }

  // Functoriality of Ct on composites, over the canonical chain.
  for (int a = 1; a <= kb.n_max(); ++a) {
    for (int b = 1; b <= kb.n_max(); ++b) {
      for (int c = 1; c <= kb.n_max(); ++c) {
        const VarSet x = kb.pool().canonical(a);
        const VarSet y = kb.pool().canonical(b);
        const VarSet z = kb.pool().canonical(c);
        auto s1s = EnumerateSubstitutions(sig, x, y, options.depth);
        auto s2s = EnumerateSubstitutions(sig, y, z, options.depth);
        if (s1s.size() > 6) s1s.erase(s1s.begin() + 6, s1s.end());
        if (s2s.size() > 6) s2s.erase(s2s.begin() + 6, s2s.end());
        for (const Substitution& s1 : s1s) {
          for (const Substitution& s2 : s2s) {
            ++composites;
            try {
              const auto m1 = LeastDescMorphism(s1, kb.lattice(x), kb.lattice(y));
              const auto m2 = LeastDescMorphism(s2, kb.lattice(y), kb.lattice(z));
              const auto m12 = ComposeDesc(m1, m2);
              const auto lhs = CtMorphism(m12);
              const auto rhs = ComposeCont(CtMorphism(m1), CtMorphism(m2));
              if (!(lhs.s == rhs.s) ||
                  !SameAssignment(lhs.assignment, rhs.assignment)) {
                failures.add("Ct not functorial on " + ToString(s1) + " then " +
                             ToString(s2));
              }
            } catch (const std::exception& e) {
              failures.add("composite " + ToString(s1) + " then " +
                           ToString(s2) + ": " + e.what());
            }
          }
        }
      }
    }
  }

  Report r;
  r.add("verdict", failures.count() == 0 ? "PASS" : "FAIL");
  r.add("object", "duality");
  r.add("bounds.n_max", kb.n_max());
  r.add("bounds.depth", options.depth);
  r.add("sizes", SizesList(kb));
  r.add("saturated", kb.saturated());
  r.add("checked.objects", subsets.size());
  r.add("checked.order_pairs", order_pairs);
  r.add("checked.morphisms", morphisms);
  r.add("checked.hom_pairs", hom_pairs);
  r.add("checked.composites", composites);
  failures.write(r);
  r.add("scope", "least assignments of substitutions with image depth <= " +
                     std::to_string(options.depth));
  return r;
}

Report VerifyClFunctoriality(const KnowledgeBase& kb, int depth,
                             std::size_t max_triples) {
  const Signature& sig = kb.model()->signature();
  const auto& subsets = kb.pool().subsets();
  const std::size_t n = subsets.size();

  // Substitutions and their transport maps, per ordered pair of objects.
  struct Arrow {
    Substitution s;
    std::vector<std::size_t> map;
  };
  std::vector<std::vector<Arrow>> arrows(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const AffineSpace& from = *kb.lattice(subsets[j]).space();
      const AffineSpace& to = *kb.lattice(subsets[i]).space();
      for (Substitution& s :
           EnumerateSubstitutions(sig, subsets[i], subsets[j], depth)) {
        auto map = kernels::TransportMap(s.images(), from, to);
        arrows[i * n + j].push_back(Arrow{std::move(s), std::move(map)});
      }
    }
  }
  std::vector<std::vector<Bitset>> filters(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (const ClosedFilter& t : kb.lattice(subsets[i]).elements()) {
      filters[i].push_back(t.points().bits());
    }
  }

  struct Job {
    std::size_t x, y, z, first;
  };
  std::vector<Job> jobs;
  std::size_t planned = 0;
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      for (std::size_t z = 0; z < n; ++z) {
        const auto& a1 = arrows[x * n + y];
        const auto& a2 = arrows[y * n + z];
        planned += a1.size() * a2.size() * filters[x].size();
        if (planned > max_triples) {
          throw Error(ErrorKind::kBound,
                      "functoriality sweep exceeds " +
                          std::to_string(max_triples) + " triples");
        }
        for (std::size_t k = 0; k < a1.size(); ++k) jobs.push_back({x, y, z, k});
      }
    }
  }

  struct Outcome {
    std::size_t triples = 0;
    FailureLog failures;
  };
  std::vector<Outcome> outcomes(jobs.size());
  internal::ParallelFor(jobs.size(), [&](std::size_t j) {
    const Job& job = jobs[j];
    const Arrow& s1 = arrows[job.x * n + job.y][job.first];
    const AlgebraPtr& alg_y = kb.lattice(subsets[job.y]).algebra();
    const AlgebraPtr& alg_z = kb.lattice(subsets[job.z]).algebra();
    Outcome& out = outcomes[j];
    for (const Arrow& s2 : arrows[job.y * n + job.z]) {
      const Substitution s12 = ComposeSubst(s1.s, s2.s);
      const auto map12 = kernels::TransportMap(
          s12.images(), *alg_z->space(), *kb.lattice(subsets[job.x]).space());
      for (const Bitset& t : filters[job.x]) {
        ++out.triples;
        const Bitset mid = kernels::Preimage(t, s1.map);
        const Bitset two_step = kernels::Preimage(mid, s2.map);
        const Bitset one_step = kernels::Preimage(t, map12);
        const bool mid_ok = alg_y->contains(PointSet(alg_y->space(), mid));
        const bool end_ok =
            alg_z->contains(PointSet(alg_z->space(), one_step));
        if (two_step != one_step || !mid_ok || !end_ok) {
          out.failures.add("s1=" + ToString(s1.s) + " s2=" + ToString(s2.s) +
                           " T=" + PointSet(kb.lattice(subsets[job.x]).space(),
                                            t)
                                       .to_string());
        }
      }
    }
  });

  std::size_t triples = 0;
  FailureLog failures;
  for (const Outcome& o : outcomes) {
    triples += o.triples;
    failures.merge(o.failures);
  }

  // Identity law and preservation of the bottom filter.
  std::size_t identities = 0;
  for (const VarSet& x : subsets) {
    const FilterLattice& lx = kb.lattice(x);
    const Substitution id = Substitution::Identity(x);
    for (const ClosedFilter& t : lx.elements()) {
      ++identities;
      if (!(ClMorphism(id, t, lx) == t)) {
        failures.add("Cl(id) moves " + t.points().to_string());
      }
    }
    for (const VarSet& y : subsets) {
      for (const Substitution& s : EnumerateSubstitutions(sig, x, y, depth)) {
        if (!(ClMorphism(s, lx.bottom(), kb.lattice(y)) ==
              kb.lattice(y).bottom())) {
          failures.add("Cl(" + ToString(s) + ") does not preserve bottom");
        }
      }
    }
  }

  Report r;
  r.add("verdict", failures.count() == 0 ? "PASS" : "FAIL");
  r.add("object", "cl-functoriality");
  r.add("bounds.n_max", kb.n_max());
  r.add("bounds.depth", depth);
  r.add("sizes", SizesList(kb));
  r.add("saturated", kb.saturated());
  r.add("checked.triples", triples);
  r.add("checked.identities", identities);
  failures.write(r);
  r.add("scope", "least assignments of substitutions with image depth <= " +
                     std::to_string(depth));
  return r;
}

}  // namespace kbgeo
