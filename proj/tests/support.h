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

// Shared helpers for the test suites: fixture loading, seeded generators for
// models, terms, formulas and substitutions, and brute-force oracles that do
// not go through the library's algebra generation.
#ifndef KBGEO_TESTS_SUPPORT_H_
#define KBGEO_TESTS_SUPPORT_H_

#include <algorithm>
#include <cstddef>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "kbgeo/algebra.h"
#include "kbgeo/bitset.h"
#include "kbgeo/formula.h"
#include "kbgeo/model_io.h"
#include "kbgeo/semantics.h"

namespace kbgeo::testing {

inline std::string FixturePath(const std::string& name) {
  return std::string(KBGEO_FIXTURE_DIR) + "/" + name + ".kbm";
}

inline ModelPtr Fixture(const std::string& name) {
  return LoadModel(FixturePath(name));
}

inline const std::vector<std::string>& AllFixtures() {
  static const std::vector<std::string> names = {
      "m_eq", "m_eq_noeq", "m_p",       "m_p0",   "m_pq1",
      "m_pq2", "m_neg",    "m_p_relabeled", "m_cycle3", "m_succ3"};
  return names;
}

inline VarSet Vars(int k) {
  std::vector<std::string> names;
  for (int i = 1; i <= k; ++i) names.push_back("x" + std::to_string(i));
  return VarSet(std::move(names));
}

using Rng = std::mt19937_64;

inline std::size_t Pick(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

inline bool Coin(Rng& rng, double p = 0.5) {
  return std::bernoulli_distribution(p)(rng);
}

// Signature with up to one unary and one nullary op and one or two
// relations of arity 1 or 2.
inline Signature RandomSignature(Rng& rng) {
  std::vector<OpSymbol> ops;
  if (Coin(rng)) ops.push_back({"f", 1});
  if (Coin(rng, 0.3)) ops.push_back({"c", 0});
  std::vector<RelSymbol> rels{{"P", 1 + static_cast<int>(Pick(rng, 2))}};
  if (Coin(rng)) rels.push_back({"Q", 1});
  return Signature(ops, rels, Coin(rng, 0.8));
}

// Random tables over `sig` on a carrier of n elements. Ops here have arity
// at most 1 and relations at most 2.
inline ModelPtr RandomModelOver(Rng& rng, const Signature& sig,
                                std::size_t n) {
  std::vector<std::string> carrier;
  for (std::size_t i = 0; i < n; ++i) carrier.push_back(std::to_string(i));
  ModelBuilder b(sig, carrier);
  for (const OpSymbol& op : sig.ops()) {
    if (op.arity == 0) {
      b.set_op(op.name, std::vector<Elem>{}, static_cast<Elem>(Pick(rng, n)));
    } else {
      for (std::size_t x = 0; x < n; ++x) {
        b.set_op(op.name, std::vector<Elem>{static_cast<Elem>(x)},
                 static_cast<Elem>(Pick(rng, n)));
      }
    }
  }
  for (const RelSymbol& r : sig.rels()) {
    const std::size_t tuples = r.arity == 1 ? n : n * n;
    for (std::size_t t = 0; t < tuples; ++t) {
      if (!Coin(rng, 0.4)) continue;
      if (r.arity == 1) {
        b.add_tuple(r.name, std::vector<Elem>{static_cast<Elem>(t)});
      } else {
        b.add_tuple(r.name, std::vector<Elem>{static_cast<Elem>(t / n),
                                              static_cast<Elem>(t % n)});
      }
    }
  }
  return b.build();
}

// Small random model with 2 or 3 elements.
inline ModelPtr RandomModel(Rng& rng) {
  const Signature sig = RandomSignature(rng);
  return RandomModelOver(rng, sig, 2 + Pick(rng, 2));
}

inline Term RandomTerm(Rng& rng, const Signature& sig, const VarSet& vars,
                       int depth) {
  if (depth == 0 || sig.ops().empty() || Coin(rng, 0.5)) {
    std::vector<std::size_t> nullary;
    for (std::size_t i = 0; i < sig.ops().size(); ++i) {
      if (sig.ops()[i].arity == 0) nullary.push_back(i);
    }
    if (!nullary.empty() && Coin(rng, 0.15)) {
      return Term::Apply(sig.ops()[nullary[Pick(rng, nullary.size())]].name,
                         {});
    }
    return Term::Var(vars[Pick(rng, vars.size())]);
  }
  const OpSymbol& op = sig.ops()[Pick(rng, sig.ops().size())];
  std::vector<Term> args;
  for (int i = 0; i < op.arity; ++i) {
    args.push_back(RandomTerm(rng, sig, vars, depth - 1));
  }
  return Term::Apply(op.name, std::move(args));
}

inline Substitution RandomSubstitution(Rng& rng, const Signature& sig,
                                       const VarSet& source,
                                       const VarSet& target, int depth) {
  std::vector<Term> images;
  for (std::size_t i = 0; i < source.size(); ++i) {
    images.push_back(RandomTerm(rng, sig, target, depth));
  }
  return Substitution(source, target, std::move(images));
}

// Formula of connective depth <= depth over `vars`. Quantified variables are
// drawn from vars; subst nodes rename within vars.
inline Formula RandomFormula(Rng& rng, const Signature& sig,
                             const VarSet& vars, int depth) {
  const bool leaf = depth == 0 || Coin(rng, 0.25);
  if (leaf) {
    const std::size_t choices =
        sig.rels().size() + (sig.with_equality() ? 1 : 0) + 1;
    const std::size_t c = Pick(rng, choices);
    if (c < sig.rels().size()) {
      const RelSymbol& r = sig.rels()[c];
      std::vector<Term> args;
      for (int i = 0; i < r.arity; ++i) {
        args.push_back(RandomTerm(rng, sig, vars, 1));
      }
      return Formula::Atom(r.name, std::move(args));
    }
    if (sig.with_equality() && c == sig.rels().size()) {
      return Formula::Equal(RandomTerm(rng, sig, vars, 1),
                            RandomTerm(rng, sig, vars, 1));
    }
    return Coin(rng) ? Formula::True() : Formula::False();
  }
  const auto sub = [&] { return RandomFormula(rng, sig, vars, depth - 1); };
  switch (Pick(rng, 8)) {
    case 0:
      return Formula::Not(sub());
    case 1:
      return Formula::And(sub(), sub());
    case 2:
      return Formula::Or(sub(), sub());
    case 3:
      return Formula::Implies(sub(), sub());
    case 4:
      return Formula::Exists(vars[Pick(rng, vars.size())], sub());
    case 5:
      return Formula::Forall(vars[Pick(rng, vars.size())], sub());
    case 6:
      return Formula::Subst(RandomSubstitution(rng, sig, vars, vars, 1),
                            sub());
    default:
      return Formula::And(Formula::Not(sub()), sub());
  }
}

// Every term function H^X -> H as a value table, by closing the projections
// under the operation tables until nothing new appears.
inline std::set<std::vector<Elem>> BruteTermFunctions(const Model& model,
                                                      const AffineSpace& sp) {
  std::set<std::vector<Elem>> fns;
  for (std::size_t c = 0; c < sp.dim(); ++c) {
    std::vector<Elem> t(sp.size());
    for (std::size_t p = 0; p < sp.size(); ++p) t[p] = sp.coordinate(p, c);
    fns.insert(t);
  }
  const Signature& sig = model.signature();
  bool grew = true;
  while (grew) {
    grew = false;
    const std::vector<std::vector<Elem>> current(fns.begin(), fns.end());
    for (std::size_t op = 0; op < sig.ops().size(); ++op) {
      const int k = sig.ops()[op].arity;
      std::vector<std::size_t> pick(k, 0);
      while (true) {
        std::vector<Elem> t(sp.size());
        for (std::size_t p = 0; p < sp.size(); ++p) {
          std::vector<Elem> args;
          for (int i = 0; i < k; ++i) args.push_back(current[pick[i]][p]);
          t[p] = model.apply_op(op, args);
        }
        grew = fns.insert(t).second || grew;
        int i = 0;
        while (i < k && ++pick[i] == current.size()) pick[i++] = 0;
        if (i == k) break;
      }
    }
  }
  return fns;
}

// Points of H^X where `coord` may vary: the cylinder of a along coord.
inline Bitset BruteCylinder(const Bitset& a, const AffineSpace& sp,
                            std::size_t coord) {
  Bitset out(sp.size());
  for (std::size_t p : a.indices()) {
    const std::size_t base = p - sp.coordinate(p, coord) * sp.stride(coord);
    for (std::size_t v = 0; v < sp.base(); ++v) {
      out.set(base + v * sp.stride(coord));
    }
  }
  return out;
}

// Atomic values over all term functions: every relation on every tuple of
// term functions, and equality of every pair when enabled.
inline std::vector<Bitset> BruteAtomicValues(const Model& model,
                                             const AffineSpace& sp) {
  const auto fns_set = BruteTermFunctions(model, sp);
  const std::vector<std::vector<Elem>> fns(fns_set.begin(), fns_set.end());
  const Signature& sig = model.signature();
  std::set<Bitset> values;
  for (std::size_t r = 0; r < sig.rels().size(); ++r) {
    const int k = sig.rels()[r].arity;
    std::vector<std::size_t> pick(k, 0);
    while (true) {
      Bitset v(sp.size());
      for (std::size_t p = 0; p < sp.size(); ++p) {
        std::vector<Elem> args;
        for (int i = 0; i < k; ++i) args.push_back(fns[pick[i]][p]);
        v.assign(p, model.holds(r, args));
      }
      values.insert(v);
      int i = 0;
      while (i < k && ++pick[i] == fns.size()) pick[i++] = 0;
      if (i == k) break;
    }
  }
  if (sig.with_equality()) {
    for (const auto& f : fns) {
      for (const auto& g : fns) {
        Bitset v(sp.size());
        for (std::size_t p = 0; p < sp.size(); ++p) v.assign(p, f[p] == g[p]);
        values.insert(v);
      }
    }
  }
  return {values.begin(), values.end()};
}

// The definable family as an explicit set of subsets: start from the atomic
// values, close under complement, binary union and every cylindrification
// until a fixpoint. Only for small spaces.
inline std::set<Bitset> WorklistDefinableFamily(const Model& model,
                                                const AffineSpace& sp) {
  std::set<Bitset> family{Bitset(sp.size()), Bitset::Full(sp.size())};
  std::vector<Bitset> work;
  for (const Bitset& v : BruteAtomicValues(model, sp)) {
    if (family.insert(v).second) work.push_back(v);
  }
  while (!work.empty()) {
    const Bitset a = work.back();
    work.pop_back();
    std::vector<Bitset> fresh{a.complement()};
    for (std::size_t c = 0; c < sp.dim(); ++c) {
      fresh.push_back(BruteCylinder(a, sp, c));
    }
    for (const Bitset& b : family) fresh.push_back(a | b);
    for (const Bitset& f : fresh) {
      if (family.insert(f).second) work.push_back(f);
    }
  }
  return family;
}

// Atoms of the definable algebra computed by membership signatures: points
// are equivalent when they lie in the same generators; cylinders of the
// atoms are added as generators until the signature partition stabilizes.
inline std::vector<Bitset> SignatureAtoms(const Model& model,
                                          const AffineSpace& sp) {
  std::vector<Bitset> gens = BruteAtomicValues(model, sp);
  std::size_t last = 0;
  while (true) {
    std::map<std::vector<bool>, Bitset> classes;
    for (std::size_t p = 0; p < sp.size(); ++p) {
      std::vector<bool> sig;
      for (const Bitset& g : gens) sig.push_back(g.test(p));
      auto [it, fresh] = classes.try_emplace(sig, Bitset(sp.size()));
      it->second.set(p);
    }
    std::vector<Bitset> atoms;
    for (auto& [sig, b] : classes) atoms.push_back(b);
    if (atoms.size() == last) {
      std::sort(atoms.begin(), atoms.end(), [](const Bitset& a, const Bitset& b) {
        return a.indices().front() < b.indices().front();
      });
      return atoms;
    }
    last = atoms.size();
    for (const Bitset& a : atoms) {
      for (std::size_t c = 0; c < sp.dim(); ++c) {
        gens.push_back(BruteCylinder(a, sp, c));
      }
    }
  }
}

// Full correspondences of the model with itself: relations B on the carrier,
// total in both directions, such that related argument tuples give related
// operation results and equal relation values. With equality B must also be
// a bijection. Enumerates every B, so only for carriers of at most 4.
inline std::vector<std::vector<bool>> BruteCorrespondences(const Model& m) {
  const std::size_t n = m.carrier_size();
  const Signature& sig = m.signature();
  std::vector<std::vector<bool>> out;
  auto tuples = [n](std::size_t k) {
    std::vector<std::vector<Elem>> all{{}};
    for (std::size_t i = 0; i < k; ++i) {
      std::vector<std::vector<Elem>> next;
      for (const auto& t : all) {
        for (std::size_t e = 0; e < n; ++e) {
          next.push_back(t);
          next.back().push_back(static_cast<Elem>(e));
        }
      }
      all = std::move(next);
    }
    return all;
  };
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << (n * n)); ++code) {
    std::vector<bool> b(n * n);
    for (std::size_t i = 0; i < n * n; ++i) b[i] = (code >> i) & 1u;
    auto rel = [&](Elem u, Elem v) { return b[u * n + v]; };
    bool ok = true;
    for (std::size_t u = 0; u < n && ok; ++u) {
      std::size_t row = 0, col = 0;
      for (std::size_t v = 0; v < n; ++v) {
        row += rel(static_cast<Elem>(u), static_cast<Elem>(v));
        col += rel(static_cast<Elem>(v), static_cast<Elem>(u));
      }
      ok = row > 0 && col > 0;
      if (sig.with_equality()) ok = ok && row == 1 && col == 1;
    }
    auto related = [&](const std::vector<Elem>& s, const std::vector<Elem>& t) {
      for (std::size_t i = 0; i < s.size(); ++i) {
        if (!rel(s[i], t[i])) return false;
      }
      return true;
    };
    for (std::size_t r = 0; r < sig.rels().size() && ok; ++r) {
      const auto all = tuples(static_cast<std::size_t>(sig.rels()[r].arity));
      for (const auto& s : all) {
        for (const auto& t : all) {
          if (related(s, t) && m.holds(r, s) != m.holds(r, t)) ok = false;
        }
      }
    }
    for (std::size_t o = 0; o < sig.ops().size() && ok; ++o) {
      const auto all = tuples(static_cast<std::size_t>(sig.ops()[o].arity));
      for (const auto& s : all) {
        for (const auto& t : all) {
          if (related(s, t) && !rel(m.apply_op(o, s), m.apply_op(o, t))) {
            ok = false;
          }
        }
      }
    }
    if (ok) out.push_back(std::move(b));
  }
  return out;
}

// Atoms of the full first-order definable family: points p, q share an atom
// iff some full correspondence relates p coordinatewise to q. Sorted by
// smallest point.
inline std::vector<Bitset> TypeAtoms(const Model& model, const AffineSpace& sp) {
  const auto corr = BruteCorrespondences(model);
  const std::size_t n = model.carrier_size();
  std::vector<Bitset> atoms;
  Bitset placed(sp.size());
  for (std::size_t p = 0; p < sp.size(); ++p) {
    if (placed.test(p)) continue;
    Bitset atom(sp.size());
    const auto& pv = sp.point(p).values;
    for (std::size_t q = p; q < sp.size(); ++q) {
      const auto& qv = sp.point(q).values;
      for (const auto& b : corr) {
        bool all = true;
        for (std::size_t i = 0; i < pv.size() && all; ++i) {
          all = b[pv[i] * n + qv[i]];
        }
        if (all) {
          atom.set(q);
          break;
        }
      }
    }
    placed |= atom;
    atoms.push_back(std::move(atom));
  }
  return atoms;
}

// Smallest member of `family` containing a.
inline Bitset BruteClosure(const std::set<Bitset>& family, const Bitset& a) {
  Bitset best = Bitset::Full(a.size());
  for (const Bitset& f : family) {
    if (a.is_subset_of(f) && f.count() < best.count()) best = f;
  }
  return best;
}

inline Bitset FromMask(std::size_t size, std::uint64_t mask) {
  Bitset b(size);
  for (std::size_t i = 0; i < size; ++i) {
    if ((mask >> i) & 1u) b.set(i);
  }
  return b;
}

}  // namespace kbgeo::testing

#endif  // KBGEO_TESTS_SUPPORT_H_
