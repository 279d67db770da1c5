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

#include "kbgeo/equivalence.h"

#include <algorithm>
#include <bit>
#include <functional>
#include <cstdint>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "kbgeo/error.h"
#include "kbgeo/kernels.h"

namespace kbgeo {

const char* VerdictName(Verdict v) {
  switch (v) {
    case Verdict::kWitnessed:
      return "EQUIVALENT_WITNESSED";
    case Verdict::kInequivalent:
      return "INEQUIVALENT";
    case Verdict::kUnknown:
      return "UNKNOWN";
  }
  return "UNKNOWN";
}

// ---------------------------------------------------------------------------
// PhiAutomorphism

namespace {

// Pool variables (x<digits>) sort by index, anything else after them by name.
std::tuple<int, long, std::string> PoolKey(const std::string& name) {
  if (name.size() > 1 && name[0] == 'x' &&
      std::all_of(name.begin() + 1, name.end(),
                  [](char c) { return c >= '0' && c <= '9'; })) {
    return {0, std::stol(name.substr(1)), ""};
  }
  return {1, 0, name};
}

std::string Trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> SplitOn(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t at = s.find(sep, start);
    out.push_back(Trim(s.substr(start, at - start)));
    if (at == std::string_view::npos) break;
    start = at + 1;
  }
  return out;
}

[[noreturn]] void IllFormed(const std::string& what) {
  throw Error(ErrorKind::kValidation, "ill-formed phi: " + what);
}

void AddPair(std::map<std::string, std::string>& m, const std::string& a,
             const std::string& b) {
  if (a.empty() || b.empty()) IllFormed("empty name in a pair");
  if (!m.emplace(a, b).second) IllFormed(a + " is mapped twice");
}

// The map must permute its own key set; fixed points are dropped.
void RequirePermutation(std::map<std::string, std::string>& m,
                        const char* what) {
  std::set<std::string> keys, values;
  for (const auto& [k, v] : m) {
    keys.insert(k);
    values.insert(v);
  }
  if (keys != values || values.size() != m.size()) {
    IllFormed(std::string(what) + " map is not a permutation");
  }
  std::erase_if(m, [](const auto& kv) { return kv.first == kv.second; });
}

std::vector<std::pair<std::string, std::string>> ColonPairs(
    std::string_view list) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const std::string& item : SplitOn(list, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) IllFormed("expected a:b, got '" + item + "'");
    out.emplace_back(Trim(std::string_view(item).substr(0, colon)),
                     Trim(std::string_view(item).substr(colon + 1)));
  }
  return out;
}

}  // namespace

PhiAutomorphism PhiAutomorphism::Parse(std::string_view text,
                                       const Signature& sig) {
  PhiAutomorphism phi;
  for (const std::string& part : SplitOn(text, ';')) {
    std::istringstream in(part);
    std::string head;
    in >> head;
    std::string rest;
    std::getline(in, rest);
    rest = Trim(rest);
    if (head == "identity") {
      if (!rest.empty()) IllFormed("'identity' takes no arguments");
    } else if (head == "swaprel" || head == "swap") {
      std::istringstream names(rest);
      std::vector<std::string> list;
      for (std::string n; names >> n;) list.push_back(n);
      if (list.empty() || list.size() % 2 != 0) {
        IllFormed("swaprel needs pairs of relation names");
      }
      for (std::size_t i = 0; i < list.size(); i += 2) {
        AddPair(phi.rels_, list[i], list[i + 1]);
        AddPair(phi.rels_, list[i + 1], list[i]);
      }
    } else if (head == "permrel") {
      for (const auto& [a, b] : ColonPairs(rest)) AddPair(phi.rels_, a, b);
    } else if (head == "renamevars" || head == "rename") {
      for (const auto& [a, b] : ColonPairs(rest)) AddPair(phi.vars_, a, b);
    } else {
      IllFormed("unknown form '" + head + "'");
    }
  }
  RequirePermutation(phi.rels_, "relation");
  RequirePermutation(phi.vars_, "variable");
  for (const auto& [a, b] : phi.rels_) {
    const auto ia = sig.find_rel(a);
    const auto ib = sig.find_rel(b);
    if (!ia || !ib) IllFormed("unknown relation " + (ia ? b : a));
    if (sig.rels()[*ia].arity != sig.rels()[*ib].arity) {
      IllFormed("relations " + a + " and " + b + " differ in arity");
    }
  }
  for (const auto& [a, b] : phi.vars_) {
    if (!IsIdentifier(a) || !IsIdentifier(b)) IllFormed("bad variable name");
  }
  return phi;
}

PhiAutomorphism PhiAutomorphism::FromRelations(
    const Signature& sig, const std::vector<std::size_t>& perm) {
  PhiAutomorphism phi;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    if (perm[i] != i) phi.rels_[sig.rels()[i].name] = sig.rels()[perm[i]].name;
  }
  return phi;
}

PhiAutomorphism PhiAutomorphism::FromVariables(
    const std::vector<std::pair<std::string, std::string>>& pairs) {
  PhiAutomorphism phi;
  for (const auto& [a, b] : pairs) AddPair(phi.vars_, a, b);
  RequirePermutation(phi.vars_, "variable");
  return phi;
}

const std::string& PhiAutomorphism::rel(const std::string& name) const {
  auto it = rels_.find(name);
  return it == rels_.end() ? name : it->second;
}

const std::string& PhiAutomorphism::var(const std::string& name) const {
  auto it = vars_.find(name);
  return it == vars_.end() ? name : it->second;
}

VarSet PhiAutomorphism::apply(const VarSet& x) const {
  std::vector<std::string> names;
  for (const std::string& v : x) names.push_back(var(v));
  std::sort(names.begin(), names.end(), [](const auto& a, const auto& b) {
    return PoolKey(a) < PoolKey(b);
  });
  return VarSet(std::move(names));
}

Substitution PhiAutomorphism::u(const VarSet& x) const {
  std::vector<std::string> renamed;
  for (const std::string& v : x) renamed.push_back(var(v));
  return Substitution::Renaming(x, apply(x), renamed);
}

Substitution PhiAutomorphism::apply(const Substitution& s) const {
  const auto u_inv = u(s.source()).inverse();
  if (!u_inv) throw std::logic_error("renaming without inverse");
  return ComposeSubst(ComposeSubst(*u_inv, s), u(s.target()));
}

Term PhiAutomorphism::rename(const Term& t) const {
  if (t.is_var()) return Term::Var(var(t.name()));
  std::vector<Term> args;
  for (const Term& a : t.args()) args.push_back(rename(a));
  return Term::Apply(t.name(), std::move(args));
}

Formula PhiAutomorphism::apply(const Formula& f) const {
  switch (f.kind()) {
    case FormulaKind::kTrue:
    case FormulaKind::kFalse:
      return f;
    case FormulaKind::kAtom: {
      std::vector<Term> args;
      for (const Term& t : f.terms()) args.push_back(rename(t));
      return Formula::Atom(rel(f.name()), std::move(args));
    }
    case FormulaKind::kEqual:
      return Formula::Equal(rename(f.terms()[0]), rename(f.terms()[1]));
    case FormulaKind::kNot:
      return Formula::Not(apply(f.child(0)));
    case FormulaKind::kAnd:
      return Formula::And(apply(f.child(0)), apply(f.child(1)));
    case FormulaKind::kOr:
      return Formula::Or(apply(f.child(0)), apply(f.child(1)));
    case FormulaKind::kImplies:
      return Formula::Implies(apply(f.child(0)), apply(f.child(1)));
    case FormulaKind::kExists:
      return Formula::Exists(var(f.name()), apply(f.child(0)));
    case FormulaKind::kForall:
      return Formula::Forall(var(f.name()), apply(f.child(0)));
    case FormulaKind::kSubst: {
      // Listing order of the node's variable sets is kept.
      const Substitution& s = f.substitution();
      auto rename_set = [&](const VarSet& vs) {
        std::vector<std::string> names;
        for (const std::string& v : vs) names.push_back(var(v));
        return VarSet(std::move(names));
      };
      std::vector<Term> images;
      for (const Term& t : s.images()) images.push_back(rename(t));
      return Formula::Subst(Substitution(rename_set(s.source()),
                                         rename_set(s.target()),
                                         std::move(images)),
                            apply(f.child(0)));
    }
  }
  throw std::logic_error("unhandled formula kind");
}

PhiAutomorphism PhiAutomorphism::inverse() const {
  PhiAutomorphism inv;
  for (const auto& [a, b] : rels_) inv.rels_[b] = a;
  for (const auto& [a, b] : vars_) inv.vars_[b] = a;
  return inv;
}

void PhiAutomorphism::validate(const Signature& sig,
                               const VariablePool& pool) const {
  const VarSet all = pool.canonical(pool.n_max());
  for (const auto& [a, b] : vars_) {
    if (!all.contains(a) || !all.contains(b)) {
      IllFormed("variable " + (all.contains(a) ? b : a) +
                " is outside the pool " + all.to_string());
    }
  }
  for (const auto& [a, b] : rels_) {
    const auto ia = sig.find_rel(a);
    const auto ib = sig.find_rel(b);
    if (!ia || !ib) IllFormed("unknown relation " + (ia ? b : a));
    if (sig.rels()[*ia].arity != sig.rels()[*ib].arity) {
      IllFormed("relations " + a + " and " + b + " differ in arity");
    }
  }
}

std::string PhiAutomorphism::ToString() const {
  if (is_identity()) return "identity";
  std::vector<std::string> parts;
  if (!rels_.empty()) {
    const bool involution = std::all_of(
        rels_.begin(), rels_.end(),
        [&](const auto& kv) { return rel(kv.second) == kv.first; });
    std::string part;
    if (involution) {
      part = "swap";
      for (const auto& [a, b] : rels_) {
        if (a < b) part += " " + a + " " + b;
      }
    } else {
      part = "permrel ";
      bool first = true;
      for (const auto& [a, b] : rels_) {
        part += (first ? "" : ",") + a + ":" + b;
        first = false;
      }
    }
    parts.push_back(part);
  }
  if (!vars_.empty()) {
    std::vector<std::pair<std::string, std::string>> pairs(vars_.begin(),
                                                           vars_.end());
    std::sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) {
      return PoolKey(a.first) < PoolKey(b.first);
    });
    std::string part = "rename ";
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      part += (i ? "," : "") + pairs[i].first + ":" + pairs[i].second;
    }
    parts.push_back(part);
  }
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    out += (i ? "; " : "") + parts[i];
  }
  return out;
}

std::vector<PhiAutomorphism> EnumeratePhiCandidates(const Signature& sig,
                                                    const VariablePool& pool) {
  std::vector<PhiAutomorphism> out{PhiAutomorphism::Identity()};
  std::vector<std::size_t> perm(sig.rels().size());
  std::iota(perm.begin(), perm.end(), 0);
  while (std::next_permutation(perm.begin(), perm.end())) {
    bool arity_ok = true;
    for (std::size_t i = 0; i < perm.size(); ++i) {
      arity_ok = arity_ok && sig.rels()[i].arity == sig.rels()[perm[i]].arity;
    }
    if (arity_ok) out.push_back(PhiAutomorphism::FromRelations(sig, perm));
  }
  const VarSet all = pool.canonical(pool.n_max());
  std::vector<std::size_t> vperm(all.size());
  std::iota(vperm.begin(), vperm.end(), 0);
  while (std::next_permutation(vperm.begin(), vperm.end())) {
    std::vector<std::pair<std::string, std::string>> pairs;
    for (std::size_t i = 0; i < vperm.size(); ++i) {
      pairs.emplace_back(all[i], all[vperm[i]]);
    }
    out.push_back(PhiAutomorphism::FromVariables(pairs));
  }
  return out;
}

// ---------------------------------------------------------------------------
// FunctorIso

FunctorIso::FunctorIso(KnowledgeBasePtr kb1, KnowledgeBasePtr kb2,
                       PhiAutomorphism phi, int depth,
                       std::map<VarSet, std::vector<std::size_t>> blocks)
    : kb1_(std::move(kb1)),
      kb2_(std::move(kb2)),
      phi_(std::move(phi)),
      depth_(depth),
      blocks_(std::move(blocks)) {}

const std::vector<std::size_t>& FunctorIso::block_map(const VarSet& x) const {
  auto it = blocks_.find(x);
  if (it == blocks_.end()) {
    throw Error(ErrorKind::kVariable,
                "no lattice bijection for " + x.to_string());
  }
  return it->second;
}

namespace {

// Image of a union of blocks under a block bijection.
Bitset MapBlocks(const DefinableAlgebra& from, const DefinableAlgebra& to,
                 const std::vector<std::size_t>& map, const Bitset& bits) {
  Bitset out(to.space()->size());
  const std::vector<bool> mask =
      from.BlockMask(PointSet(from.space(), bits));
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i]) out |= to.block(map[i]);
  }
  return out;
}

ClosedFilter FilterFromBits(const FilterLattice& lattice, const Bitset& bits) {
  return lattice.filter(PointSet(lattice.space(), bits));
}

}  // namespace

ClosedFilter FunctorIso::apply(const ClosedFilter& t) const {
  const VarSet& x = t.points().space()->vars();
  const FilterLattice& l1 = kb1_->lattice(x);
  const FilterLattice& l2 = kb2_->lattice(phi_.apply(x));
  Bitset bits = t.points().bits();
  for (const Swap& s : swaps_) {
    if (s.x != x) continue;
    if (bits == s.a) {
      bits = s.b;
    } else if (bits == s.b) {
      bits = s.a;
    }
  }
  return FilterFromBits(
      l2, MapBlocks(*l1.algebra(), *l2.algebra(), block_map(x), bits));
}

ClosedFilter FunctorIso::apply_inverse(const ClosedFilter& t) const {
  const VarSet& x2 = t.points().space()->vars();
  const VarSet x = phi_.inverse().apply(x2);
  const FilterLattice& l1 = kb1_->lattice(x);
  const FilterLattice& l2 = kb2_->lattice(x2);
  const std::vector<std::size_t>& fwd = block_map(x);
  std::vector<std::size_t> back(fwd.size());
  for (std::size_t i = 0; i < fwd.size(); ++i) back[fwd[i]] = i;
  Bitset bits =
      MapBlocks(*l2.algebra(), *l1.algebra(), back, t.points().bits());
  for (auto it = swaps_.rbegin(); it != swaps_.rend(); ++it) {
    if (it->x != x) continue;
    if (bits == it->a) {
      bits = it->b;
    } else if (bits == it->b) {
      bits = it->a;
    }
  }
  return FilterFromBits(l1, bits);
}

FunctorIso FunctorIso::with_swapped(const VarSet& x, const PointSet& a,
                                    const PointSet& b) const {
  const FilterLattice& l1 = kb1_->lattice(x);
  l1.filter(a);
  l1.filter(b);
  FunctorIso copy = *this;
  copy.swaps_.push_back(Swap{x, a.bits(), b.bits()});
  return copy;
}

std::string FunctorIso::describe(const VarSet& x) const {
  const std::vector<std::size_t>& m = block_map(x);
  std::string out;
  for (std::size_t i = 0; i < m.size(); ++i) {
    out += (i ? "," : "") + std::to_string(i) + "->" + std::to_string(m[i]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Diagram (4) as a constraint system over blocks.

namespace {

using Mask = std::uint64_t;
constexpr std::size_t kMaxBlocks = 64;

struct ObjectPair {
  VarSet x1, x2;  // x2 = phi(x1)
  const DefinableAlgebra* a1;
  const DefinableAlgebra* a2;
  std::size_t blocks;
};

// For one substitution class s : X -> Y: s1[j] is the set of Y-blocks whose
// union is the H1-preimage of block j; s2[v] the same in H2 for phi(s).
// Diagram (4) on blocks: k in s1[j] iff pi_Y(k) in s2[pi_X(j)].
struct Constraint {
  std::size_t src, dst;
  std::vector<Mask> s1, s2;
  // t2[v] = { v' : v in s2[v'] }, the transpose of s2.
  std::vector<Mask> t2;
  // t1[k] = { j : k in s1[j] }.
  std::vector<Mask> t1;
};

struct System {
  std::vector<ObjectPair> objects;
  std::vector<Constraint> constraints;
  // False when block counts differ or a preimage was not a union of blocks.
  bool feasible = true;
};

Mask Bit(std::size_t i) { return Mask{1} << i; }
Mask Low(std::size_t n) { return n == 64 ? ~Mask{0} : Bit(n) - 1; }

std::vector<Mask> PreimageMasks(const DefinableAlgebra& from_alg,
                                const DefinableAlgebra& to_alg,
                                const std::vector<std::size_t>& map,
                                bool& exact) {
  std::vector<Mask> out(from_alg.num_blocks(), 0);
  for (std::size_t j = 0; j < from_alg.num_blocks(); ++j) {
    const Bitset pre = kernels::Preimage(from_alg.block(j), map);
    Mask m = 0;
    Bitset covered(pre.size());
    for (std::size_t p : pre.indices()) {
      const std::size_t k = to_alg.block_of(p);
      if (!(m & Bit(k))) {
        m |= Bit(k);
        covered |= to_alg.block(k);
      }
    }
    if (covered != pre) exact = false;
    out[j] = m;
  }
  return out;
}

std::vector<Mask> Transpose(const std::vector<Mask>& rows, std::size_t cols) {
  std::vector<Mask> out(cols, 0);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (rows[r] & Bit(c)) out[c] |= Bit(r);
    }
  }
  return out;
}

System BuildSystem(const KnowledgeBase& kb1, const KnowledgeBase& kb2,
                   const PhiAutomorphism& phi, int depth) {
  if (kb1.n_max() != kb2.n_max()) {
    throw std::logic_error("knowledge bases over different pools");
  }
  const Signature& sig = kb1.model()->signature();
  phi.validate(sig, kb1.pool());
  System sys;
  const auto& subsets = kb1.pool().subsets();
  std::map<VarSet, std::size_t> index;
  for (const VarSet& x : subsets) {
    const VarSet x2 = phi.apply(x);
    const DefinableAlgebra* a1 = kb1.lattice(x).algebra().get();
    const DefinableAlgebra* a2 = kb2.lattice(x2).algebra().get();
    if (a1->num_blocks() > kMaxBlocks || a2->num_blocks() > kMaxBlocks) {
      throw Error(ErrorKind::kBound, "more than 64 atoms over " +
                                         x.to_string());
    }
    if (a1->num_blocks() != a2->num_blocks()) sys.feasible = false;
    index.emplace(x, sys.objects.size());
    sys.objects.push_back(ObjectPair{x, x2, a1, a2, a1->num_blocks()});
  }
  if (!sys.feasible) return sys;

  std::set<std::tuple<std::size_t, std::size_t, std::vector<Mask>,
                      std::vector<Mask>>>
      seen;
  for (std::size_t o = 0; o < sys.objects.size(); ++o) {
    for (std::size_t p = 0; p < sys.objects.size(); ++p) {
      const ObjectPair& X = sys.objects[o];
      const ObjectPair& Y = sys.objects[p];
      for (const Substitution& s :
           EnumerateSubstitutions(sig, X.x1, Y.x1, depth)) {
        const Substitution s_phi = phi.apply(s);
        const auto map1 =
            kernels::TransportMap(s.images(), *Y.a1->space(), *X.a1->space());
        const auto map2 = kernels::TransportMap(
            s_phi.images(), *Y.a2->space(), *X.a2->space());
        bool exact = true;
        auto s1 = PreimageMasks(*X.a1, *Y.a1, map1, exact);
        auto s2 = PreimageMasks(*X.a2, *Y.a2, map2, exact);
        if (!exact) {
          sys.feasible = false;
          return sys;
        }
        if (!seen.emplace(o, p, s1, s2).second) continue;
        Constraint c{o, p, std::move(s1), std::move(s2), {}, {}};
        c.t2 = Transpose(c.s2, Y.blocks);
        c.t1 = Transpose(c.s1, Y.blocks);
        sys.constraints.push_back(std::move(c));
      }
    }
  }
  return sys;
}

Mask ImageMask(Mask m, const std::vector<std::size_t>& pi) {
  Mask out = 0;
  while (m) {
    const int k = std::countr_zero(m);
    out |= Bit(pi[k]);
    m &= m - 1;
  }
  return out;
}

bool SatisfiesAll(const System& sys,
                  const std::vector<std::vector<std::size_t>>& pi) {
  for (std::size_t o = 0; o < sys.objects.size(); ++o) {
    Mask used = 0;
    for (std::size_t v : pi[o]) {
      if (v >= sys.objects[o].blocks || (used & Bit(v))) return false;
      used |= Bit(v);
    }
  }
  for (const Constraint& c : sys.constraints) {
    for (std::size_t j = 0; j < c.s1.size(); ++j) {
      if (ImageMask(c.s1[j], pi[c.dst]) != c.s2[pi[c.src][j]]) return false;
    }
  }
  return true;
}

// Per-block profile: preimage sizes along outgoing constraints and in-degree
// counts along incoming ones. Equal profiles are necessary for pi(j) = v.
std::vector<std::vector<std::vector<std::uint32_t>>> Profiles(
    const System& sys, bool second) {
  std::vector<std::vector<std::vector<std::uint32_t>>> prof(sys.objects.size());
  for (std::size_t o = 0; o < sys.objects.size(); ++o) {
    prof[o].resize(sys.objects[o].blocks);
  }
  for (const Constraint& c : sys.constraints) {
    const auto& s = second ? c.s2 : c.s1;
    const auto& t = second ? c.t2 : c.t1;
    for (std::size_t j = 0; j < s.size(); ++j) {
      prof[c.src][j].push_back(std::popcount(s[j]));
    }
    for (std::size_t k = 0; k < t.size(); ++k) {
      prof[c.dst][k].push_back(0x10000u + std::popcount(t[k]));
    }
  }
  return prof;
}

class BlockSearch {
 public:
  BlockSearch(const System& sys, const SearchOptions& options)
      : sys_(sys), options_(options) {
    for (std::size_t o = 0; o < sys.objects.size(); ++o) {
      for (std::size_t j = 0; j < sys.objects[o].blocks; ++j) {
        order_.emplace_back(o, j);
      }
    }
    for (std::size_t i = 0; i < sys.constraints.size(); ++i) {
      out_[sys.constraints[i].src].push_back(i);
      in_[sys.constraints[i].dst].push_back(i);
    }
  }

  std::optional<std::vector<std::vector<std::size_t>>> run(SearchStats& st) {
    Domains dom(sys_.objects.size());
    const auto p1 = Profiles(sys_, false);
    const auto p2 = Profiles(sys_, true);
    for (std::size_t o = 0; o < sys_.objects.size(); ++o) {
      const std::size_t b = sys_.objects[o].blocks;
      dom[o].assign(b, 0);
      for (std::size_t j = 0; j < b; ++j) {
        for (std::size_t v = 0; v < b; ++v) {
          if (p1[o][j] == p2[o][v]) dom[o][j] |= Bit(v);
        }
        if (dom[o][j] == 0) return std::nullopt;
      }
    }
    if (!solve(0, dom, st)) return std::nullopt;
    return solution_;
  }

 private:
  using Domains = std::vector<std::vector<Mask>>;

  bool assign(Domains& dom, std::size_t o, std::size_t j, std::size_t v) {
    const Mask bit = Bit(v);
    if (!(dom[o][j] & bit)) return false;
    for (std::size_t k = 0; k < dom[o].size(); ++k) {
      dom[o][k] = k == j ? bit : dom[o][k] & ~bit;
      if (dom[o][k] == 0) return false;
    }
    for (std::size_t ci : out_[o]) {
      const Constraint& c = sys_.constraints[ci];
      const Mask full = Low(sys_.objects[c.dst].blocks);
      for (std::size_t k = 0; k < dom[c.dst].size(); ++k) {
        dom[c.dst][k] &= (c.s1[j] & Bit(k)) ? c.s2[v] : (full & ~c.s2[v]);
        if (dom[c.dst][k] == 0) return false;
      }
    }
    for (std::size_t ci : in_[o]) {
      const Constraint& c = sys_.constraints[ci];
      const Mask full = Low(sys_.objects[c.src].blocks);
      for (std::size_t i = 0; i < dom[c.src].size(); ++i) {
        dom[c.src][i] &= (c.s1[i] & Bit(j)) ? c.t2[v] : (full & ~c.t2[v]);
        if (dom[c.src][i] == 0) return false;
      }
    }
    return true;
  }

  bool solve(std::size_t at, const Domains& dom, SearchStats& st) {
    if (at == order_.size()) {
      std::vector<std::vector<std::size_t>> pi(dom.size());
      for (std::size_t o = 0; o < dom.size(); ++o) {
        for (Mask m : dom[o]) pi[o].push_back(std::countr_zero(m));
      }
      if (!SatisfiesAll(sys_, pi)) return false;
      solution_ = std::move(pi);
      return true;
    }
    const auto [o, j] = order_[at];
    Mask candidates = dom[o][j];
    while (candidates) {
      if (st.nodes >= options_.max_nodes) {
        st.budget_exhausted = true;
        return false;
      }
      ++st.nodes;
      const std::size_t v = std::countr_zero(candidates);
      candidates &= candidates - 1;
      Domains next = dom;
      if (assign(next, o, j, v) && solve(at + 1, next, st)) return true;
      if (st.budget_exhausted) return false;
    }
    return false;
  }

  const System& sys_;
  SearchOptions options_;
  std::vector<std::pair<std::size_t, std::size_t>> order_;
  std::map<std::size_t, std::vector<std::size_t>> out_, in_;
  std::vector<std::vector<std::size_t>> solution_;
};

FunctorIso MakeIso(const KnowledgeBasePtr& kb1, const KnowledgeBasePtr& kb2,
                   const PhiAutomorphism& phi, int depth, const System& sys,
                   std::vector<std::vector<std::size_t>> pi) {
  std::map<VarSet, std::vector<std::size_t>> blocks;
  for (std::size_t o = 0; o < sys.objects.size(); ++o) {
    blocks.emplace(sys.objects[o].x1, std::move(pi[o]));
  }
  return FunctorIso(kb1, kb2, phi, depth, std::move(blocks));
}

// Block of `alg` equal to bits, if any.
std::optional<std::size_t> WholeBlock(const DefinableAlgebra& alg,
                                      const Bitset& bits) {
  if (bits.none()) return std::nullopt;
  const std::size_t k = alg.block_of(bits.indices().front());
  if (alg.block(k) != bits) return std::nullopt;
  return k;
}

}  // namespace

std::optional<FunctorIso> InducedFunctorIso(const KnowledgeBasePtr& kb1,
                                            const KnowledgeBasePtr& kb2,
                                            const PhiAutomorphism& phi,
                                            int depth) {
  const System sys = BuildSystem(*kb1, *kb2, phi, depth);
  if (!sys.feasible) return std::nullopt;
  std::vector<std::vector<std::size_t>> pi;
  for (const ObjectPair& obj : sys.objects) {
    std::vector<std::size_t> row;
    for (std::size_t j = 0; j < obj.blocks; ++j) {
      const Formula image = phi.apply(obj.a1->block_witness(j));
      const PointSet val = Val(image, obj.a2->space());
      const auto k = WholeBlock(*obj.a2, val.bits());
      if (!k) return std::nullopt;
      row.push_back(*k);
    }
    pi.push_back(std::move(row));
  }
  if (!SatisfiesAll(sys, pi)) return std::nullopt;
  return MakeIso(kb1, kb2, phi, depth, sys, std::move(pi));
}

std::optional<FunctorIso> TransportedFunctorIso(const KnowledgeBasePtr& kb1,
                                                const KnowledgeBasePtr& kb2,
                                                const ModelMap& h, int depth) {
  if (!IsModelIsomorphism(*kb1->model(), *kb2->model(), h.mapping)) {
    throw Error(ErrorKind::kValidation, "map is not a model isomorphism");
  }
  const PhiAutomorphism phi = PhiAutomorphism::Identity();
  const System sys = BuildSystem(*kb1, *kb2, phi, depth);
  if (!sys.feasible) return std::nullopt;
  std::vector<std::vector<std::size_t>> pi;
  for (const ObjectPair& obj : sys.objects) {
    const AffineSpace& sp1 = *obj.a1->space();
    const AffineSpace& sp2 = *obj.a2->space();
    std::vector<std::size_t> row;
    for (std::size_t j = 0; j < obj.blocks; ++j) {
      Bitset image(sp2.size());
      for (std::size_t p : obj.a1->block(j).indices()) {
        Point mu = sp1.point(p);
        for (Elem& e : mu.values) e = h.mapping[e];
        image.set(sp2.index_of(mu.values));
      }
      const auto k = WholeBlock(*obj.a2, image);
      if (!k) return std::nullopt;
      row.push_back(*k);
    }
    pi.push_back(std::move(row));
  }
  if (!SatisfiesAll(sys, pi)) return std::nullopt;
  return MakeIso(kb1, kb2, phi, depth, sys, std::move(pi));
}

std::optional<FunctorIso> FindFunctorIso(const KnowledgeBasePtr& kb1,
                                         const KnowledgeBasePtr& kb2,
                                         const PhiAutomorphism& phi, int depth,
                                         const SearchOptions& options,
                                         SearchStats* stats) {
  SearchStats local;
  SearchStats& st = stats ? *stats : local;
  const System sys = BuildSystem(*kb1, *kb2, phi, depth);
  if (!sys.feasible) return std::nullopt;
  BlockSearch search(sys, options);
  auto pi = search.run(st);
  if (!pi) return std::nullopt;
  return MakeIso(kb1, kb2, phi, depth, sys, std::move(*pi));
}

std::optional<FunctorIso> FindFunctorIso(const ModelPtr& m1,
                                         const ModelPtr& m2,
                                         const PhiAutomorphism& phi, int n_max,
                                         int depth) {
  if (m1->signature() != m2->signature()) {
    throw Error(ErrorKind::kMismatch, "models have different signatures");
  }
  const auto kb1 = KnowledgeBase::Build(m1, n_max);
  const auto kb2 = KnowledgeBase::Build(m2, n_max);
  if (auto iso = InducedFunctorIso(kb1, kb2, phi, depth)) return iso;
  return FindFunctorIso(kb1, kb2, phi, depth);
}

// ---------------------------------------------------------------------------
// Verification of witnesses

namespace {

constexpr std::size_t kListed = 20;

struct Tally {
  std::size_t checked = 0;
  std::size_t failed = 0;
  std::vector<std::string> listed;

  void check(bool ok, const std::function<std::string()>& what) {
    ++checked;
    if (ok) return;
    ++failed;
    if (listed.size() < kListed) listed.push_back(what());
  }
};

void WriteFailures(Report& r, const std::vector<const Tally*>& tallies) {
  std::size_t total = 0;
  for (const Tally* t : tallies) total += t->failed;
  r.add("failures.count", total);
  std::size_t n = 0;
  for (const Tally* t : tallies) {
    for (const std::string& s : t->listed) {
      if (n >= kListed) return;
      r.add("failures." + std::to_string(++n), s);
    }
  }
}

const Signature& Sig(const FunctorIso& iso) {
  return iso.source()->model()->signature();
}

std::string PairText(const ClosedFilter& a, const ClosedFilter& b) {
  return a.points().to_string() + " -> " + b.points().to_string();
}

}  // namespace

Report VerifyDiagram(const FunctorIso& iso) {
  const KnowledgeBase& kb1 = *iso.source();
  const KnowledgeBase& kb2 = *iso.target();
  const PhiAutomorphism& phi = iso.phi();
  Tally t;
  for (const VarSet& x : kb1.pool().subsets()) {
    const std::vector<ClosedFilter> elems = kb1.lattice(x).elements();
    for (const VarSet& y : kb1.pool().subsets()) {
      const FilterLattice& ly1 = kb1.lattice(y);
      const FilterLattice& ly2 = kb2.lattice(phi.apply(y));
      for (const Substitution& s :
           EnumerateSubstitutions(Sig(iso), x, y, iso.depth())) {
        const Substitution s2 = phi.apply(s);
        for (const ClosedFilter& f : elems) {
          const ClosedFilter lhs = iso.apply(ClMorphism(s, f, ly1));
          const ClosedFilter rhs = ClMorphism(s2, iso.apply(f), ly2);
          t.check(lhs == rhs, [&] {
            return "square fails for s=" + ToString(s) + " at " +
                   f.points().to_string();
          });
        }
      }
    }
  }
  Report r;
  r.add("verdict", t.failed == 0 ? "PASS" : "FAIL");
  r.add("checked.squares", t.checked);
  WriteFailures(r, {&t});
  return r;
}

Report VerifyAdmissibilityTransfer(const FunctorIso& iso, int n_max,
                                   int depth) {
  if (n_max > iso.n_max()) {
    throw Error(ErrorKind::kBound, "sample bound " + std::to_string(n_max) +
                                       " exceeds the witness bound " +
                                       std::to_string(iso.n_max()));
  }
  const KnowledgeBase& kb1 = *iso.source();
  std::vector<VarSet> objects;
  for (const VarSet& x : kb1.pool().subsets()) {
    if (static_cast<int>(x.size()) <= n_max) objects.push_back(x);
  }
  std::map<VarSet, std::vector<std::pair<ClosedFilter, ClosedFilter>>> images;
  for (const VarSet& x : objects) {
    for (ClosedFilter& f : kb1.lattice(x).elements()) {
      ClosedFilter g = iso.apply(f);
      images[x].emplace_back(std::move(f), std::move(g));
    }
  }
  Tally t;
  for (const VarSet& x : objects) {
    for (const VarSet& y : objects) {
      for (const Substitution& s :
           EnumerateSubstitutions(Sig(iso), x, y, depth)) {
        const Substitution s2 = iso.phi().apply(s);
        for (const auto& [t1, a1] : images[x]) {
          for (const auto& [t2, a2] : images[y]) {
            const bool h1 = IsAdmissibleDesc(s, t1, t2);
            const bool h2 = IsAdmissibleDesc(s2, a1, a2);
            t.check(h1 == h2, [&] {
              return "s=" + ToString(s) + " T1=" + t1.points().to_string() +
                     " T2=" + t2.points().to_string() + ": " +
                     (h1 ? "admissible" : "not admissible") + " vs " +
                     (h2 ? "admissible" : "not admissible");
            });
          }
        }
      }
    }
  }
  Report r;
  r.add("verdict", t.failed == 0 ? "PASS" : "FAIL");
  r.add("bounds.n_max", n_max);
  r.add("bounds.depth", depth);
  r.add("checked.triples", t.checked);
  WriteFailures(r, {&t});
  return r;
}

namespace {

using DescPairs = std::vector<std::pair<ClosedFilter, ClosedFilter>>;

bool SamePairs(DescPairs a, DescPairs b) {
  if (a.size() != b.size()) return false;
  auto key = [](const auto& p, const auto& q) {
    const Bitset& p1 = p.first.points().bits();
    const Bitset& q1 = q.first.points().bits();
    if (p1 != q1) return p1 < q1;
    return p.second.points().bits() < q.second.points().bits();
  };
  std::sort(a.begin(), a.end(), key);
  std::sort(b.begin(), b.end(), key);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!(a[i].first == b[i].first) || !(a[i].second == b[i].second)) {
      return false;
    }
  }
  return true;
}

// The functor F (forward) or F' (backward) applied to a description morphism.
AdmissibleDescMorphism MapMorphism(const FunctorIso& iso,
                                   const AdmissibleDescMorphism& m,
                                   bool forward) {
  const PhiAutomorphism phi = forward ? iso.phi() : iso.phi().inverse();
  AdmissibleDescMorphism out{phi.apply(m.s), {}};
  for (const auto& [t1, t2] : m.assignment) {
    if (forward) {
      out.assignment.emplace_back(iso.apply(t1), iso.apply(t2));
    } else {
      out.assignment.emplace_back(iso.apply_inverse(t1),
                                  iso.apply_inverse(t2));
    }
  }
  return out;
}

}  // namespace

Report BuildDescriptionIso(const FunctorIso& iso) {
  const KnowledgeBase& kb1 = *iso.source();
  const KnowledgeBase& kb2 = *iso.target();
  const PhiAutomorphism& phi = iso.phi();
  const PhiAutomorphism phi_inv = phi.inverse();
  const Signature& sig = Sig(iso);
  const auto& subsets = kb1.pool().subsets();
  Tally objects, morphisms, identities, composites, round_trips;

  // Objects: alpha_X is an order isomorphism with inverse alpha_X^-1.
  for (const VarSet& x : subsets) {
    const VarSet x2 = phi.apply(x);
    objects.check(phi_inv.apply(x2) == x, [&] {
      return "object map not invertible at " + x.to_string();
    });
    const std::vector<ClosedFilter> e1 = kb1.lattice(x).elements();
    const std::vector<ClosedFilter> e2 = kb2.lattice(x2).elements();
    objects.check(e1.size() == e2.size(), [&] {
      return "lattice sizes differ at " + x.to_string();
    });
    std::vector<ClosedFilter> img;
    img.reserve(e1.size());
    for (const ClosedFilter& f : e1) img.push_back(iso.apply(f));
    std::set<Bitset> distinct;
    for (const ClosedFilter& g : img) distinct.insert(g.points().bits());
    objects.check(distinct.size() == e2.size(), [&] {
      return "alpha not bijective at " + x.to_string();
    });
    const std::size_t limit = std::min<std::size_t>(e1.size(), 256);
    for (std::size_t i = 0; i < limit; ++i) {
      objects.check(iso.apply_inverse(img[i]) == e1[i], [&] {
        return "inverse fails at " + e1[i].points().to_string();
      });
      for (std::size_t j = 0; j < limit; ++j) {
        const bool before = kb1.lattice(x).leq(e1[i], e1[j]);
        const bool after = kb2.lattice(x2).leq(img[i], img[j]);
        objects.check(before == after, [&] {
          return "order not preserved at " + PairText(e1[i], e1[j]);
        });
      }
    }
    for (std::size_t i = 0; i < std::min<std::size_t>(e2.size(), 256); ++i) {
      objects.check(iso.apply(iso.apply_inverse(e2[i])) == e2[i], [&] {
        return "alpha alpha^-1 moves " + e2[i].points().to_string();
      });
    }
  }

  // Morphisms: F and F' on least morphisms, identities, round trips.
  for (const VarSet& x : subsets) {
    const Substitution id = Substitution::Identity(x);
    identities.check(phi.apply(id) == Substitution::Identity(phi.apply(x)),
                     [&] { return "phi(id) at " + x.to_string(); });
    const auto m_id = LeastDescMorphism(id, kb1.lattice(x), kb1.lattice(x));
    const auto f_id = MapMorphism(iso, m_id, true);
    for (const auto& [a, b] : f_id.assignment) {
      identities.check(a == b, [&] { return "F(id) moves " + PairText(a, b); });
    }
    for (const VarSet& y : subsets) {
      const VarSet x2 = phi.apply(x), y2 = phi.apply(y);
      for (const Substitution& s :
           EnumerateSubstitutions(sig, x, y, iso.depth())) {
        const auto m = LeastDescMorphism(s, kb1.lattice(x), kb1.lattice(y));
        const auto fm = MapMorphism(iso, m, true);
        for (const auto& [a, b] : fm.assignment) {
          morphisms.check(IsAdmissibleDesc(fm.s, a, b), [&] {
            return "F(" + ToString(s) + ") not admissible at " + PairText(a, b);
          });
        }
        const auto least2 =
            LeastDescMorphism(fm.s, kb2.lattice(x2), kb2.lattice(y2));
        morphisms.check(SamePairs(fm.assignment, least2.assignment), [&] {
          return "F(" + ToString(s) + ") is not the least morphism of phi(s)";
        });
        const auto back = MapMorphism(iso, fm, false);
        round_trips.check(
            back.s == m.s && SamePairs(back.assignment, m.assignment),
            [&] { return "F'F moves " + ToString(s); });
      }
      for (const Substitution& s2 :
           EnumerateSubstitutions(sig, x2, y2, iso.depth())) {
        const auto m2 = LeastDescMorphism(s2, kb2.lattice(x2), kb2.lattice(y2));
        const auto back = MapMorphism(iso, m2, false);
        const auto there = MapMorphism(iso, back, true);
        round_trips.check(
            there.s == m2.s && SamePairs(there.assignment, m2.assignment),
            [&] { return "FF' moves " + ToString(s2); });
      }
    }
  }

  // Composites over the canonical chain, first few substitutions each way.
  for (int a = 1; a <= kb1.n_max(); ++a) {
    for (int b = 1; b <= kb1.n_max(); ++b) {
      for (int c = 1; c <= kb1.n_max(); ++c) {
        const VarSet x = kb1.pool().canonical(a);
        const VarSet y = kb1.pool().canonical(b);
        const VarSet z = kb1.pool().canonical(c);
        auto s1s = EnumerateSubstitutions(sig, x, y, iso.depth());
        auto s2s = EnumerateSubstitutions(sig, y, z, iso.depth());
        if (s1s.size() > 6) s1s.erase(s1s.begin() + 6, s1s.end());
        if (s2s.size() > 6) s2s.erase(s2s.begin() + 6, s2s.end());
        for (const Substitution& s1 : s1s) {
          const auto m1 = LeastDescMorphism(s1, kb1.lattice(x), kb1.lattice(y));
          const auto f1 = MapMorphism(iso, m1, true);
          for (const Substitution& s2 : s2s) {
            const auto m2 =
                LeastDescMorphism(s2, kb1.lattice(y), kb1.lattice(z));
            const auto f2 = MapMorphism(iso, m2, true);
            const auto lhs = MapMorphism(iso, ComposeDesc(m1, m2), true);
            const auto rhs = ComposeDesc(f1, f2);
            composites.check(
                lhs.s == rhs.s && SamePairs(lhs.assignment, rhs.assignment),
                [&] {
                  return "F not functorial on " + ToString(s1) + " then " +
                         ToString(s2);
                });
            const auto back_l = MapMorphism(iso, rhs, false);
            const auto back_r = ComposeDesc(MapMorphism(iso, f1, false),
                                            MapMorphism(iso, f2, false));
            composites.check(back_l.s == back_r.s &&
                                 SamePairs(back_l.assignment,
                                           back_r.assignment),
                             [&] {
                               return "F' not functorial on " + ToString(s1) +
                                      " then " + ToString(s2);
                             });
          }
        }
      }
    }
  }

  const std::vector<const Tally*> all = {&objects, &morphisms, &identities,
                                         &composites, &round_trips};
  std::size_t failed = 0;
  for (const Tally* t : all) failed += t->failed;
  Report r;
  r.add("verdict", failed == 0 ? "PASS" : "FAIL");
  r.add("phi", phi.ToString());
  r.add("checked.objects", objects.checked);
  r.add("checked.morphisms", morphisms.checked);
  r.add("checked.identities", identities.checked);
  r.add("checked.composites", composites.checked);
  r.add("checked.round_trips", round_trips.checked);
  WriteFailures(r, all);
  return r;
}

// ---------------------------------------------------------------------------
// Deciders

Report EquivReport::ToReport() const {
  Report r;
  r.add("verdict", VerdictName(verdict));
  r.add("mode", mode);
  if (mode != "iso") {
    r.add("bounds.n_max", n_max);
    r.add("bounds.depth", depth);
    r.add("saturated", saturated);
  }
  if (verdict == Verdict::kWitnessed) {
    if (model_map) {
      r.add("witness.kind", iso ? "model_map+functor_iso" : "model_map");
    } else {
      r.add("witness.kind", "functor_iso");
    }
    r.add("witness.phi", iso ? iso->phi().ToString() : "identity");
    if (model_map) r.add("witness.model_map", ToString(*model_map));
    if (iso) {
      for (const VarSet& x : iso->source()->pool().subsets()) {
        std::string key;
        for (const std::string& v : x) key += (key.empty() ? "" : "_") + v;
        r.add("witness.alpha." + key, iso->describe(x));
      }
    }
  }
  if (refutation) {
    const std::string left = std::to_string(refutation->left);
    const std::string right = std::to_string(refutation->right);
    const std::string k = std::to_string(refutation->vars.size());
    r.add("refutation.invariant", refutation->invariant);
    r.add("refutation.vars", refutation->vars.to_string());
    r.add("refutation.size", refutation->vars.size());
    r.add("refutation.left", left);
    r.add("refutation.right", right);
    r.add("refutation.text", refutation->invariant + " " + left + " vs " +
                                 right + " at X=" +
                                 refutation->vars.to_string());
    r.add("refutation.summary", left + " vs " + right + " at |X|=" + k);
  }
  if (mode != "iso") {
    r.add("class", "identity, relation permutations, variable renamings");
  }
  for (const auto& [k, v] : details.entries()) r.add(k, v);
  return r;
}

EquivReport CheckIsomorphic(const ModelPtr& m1, const ModelPtr& m2) {
  EquivReport rep;
  rep.mode = "iso";
  const auto maps = ModelIsomorphisms(m1, m2);
  rep.details.add("details.isomorphisms", maps.size());
  if (maps.empty()) {
    rep.verdict = Verdict::kInequivalent;
  } else {
    rep.verdict = Verdict::kWitnessed;
    rep.model_map = maps.front();
  }
  return rep;
}

namespace {

// Lattice size, height and Hasse degree of F^X are 2^b, b and b for b atoms.
std::optional<Refutation> CompareInvariants(const KnowledgeBase& kb1,
                                            const KnowledgeBase& kb2,
                                            Report& details) {
  for (int k = 1; k <= kb1.n_max(); ++k) {
    const VarSet x = kb1.pool().canonical(k);
    const auto b1 = static_cast<long long>(kb1.lattice(x).algebra()->num_blocks());
    const auto b2 = static_cast<long long>(kb2.lattice(x).algebra()->num_blocks());
    const std::string key = "invariants.k" + std::to_string(k);
    details.add(key + ".size", std::to_string(kb1.lattice(x).size()) + " vs " +
                                   std::to_string(kb2.lattice(x).size()));
    if (b1 != b2) {
      return Refutation{"lattice size", x,
                        static_cast<long long>(kb1.lattice(x).size()),
                        static_cast<long long>(kb2.lattice(x).size())};
    }
    details.add(key + ".height", std::to_string(b1) + " vs " +
                                     std::to_string(b2));
    details.add(key + ".hasse_degree", std::to_string(b1) + " vs " +
                                           std::to_string(b2));
  }
  return std::nullopt;
}

// Shared pipeline. With `laws`, a witness must also pass the full functor
// construction; otherwise diagram (4) suffices.
EquivReport Decide(const ModelPtr& m1, const ModelPtr& m2,
                   const EquivOptions& options, const std::string& mode,
                   bool laws) {
  if (m1->signature() != m2->signature()) {
    throw Error(ErrorKind::kMismatch, "models have different signatures");
  }
  EquivReport rep;
  rep.mode = mode;
  rep.n_max = options.n_max;
  rep.depth = options.depth;
  const auto kb1 = KnowledgeBase::Build(m1, options.n_max, options.kb);
  const auto kb2 = KnowledgeBase::Build(m2, options.n_max, options.kb);
  rep.saturated = kb1->saturated() && kb2->saturated();
  if (options.phi) options.phi->validate(m1->signature(), kb1->pool());

  if (auto ref = CompareInvariants(*kb1, *kb2, rep.details)) {
    rep.refutation = std::move(ref);
    rep.verdict = rep.saturated ? Verdict::kInequivalent : Verdict::kUnknown;
    if (!rep.saturated) {
      rep.details.add("note", "term clone capped; refutation not exact");
    }
    return rep;
  }

  auto accept = [&](FunctorIso iso, const char* how) {
    const Report diagram = VerifyDiagram(iso);
    if (diagram.get("verdict") != "PASS") return false;
    rep.details.add("search.found_by", how);
    rep.details.append("diagram", diagram);
    if (laws) {
      const Report functor = BuildDescriptionIso(iso);
      rep.details.append("functor_laws", functor);
      if (functor.get("verdict") != "PASS") return false;
    }
    rep.iso = std::move(iso);
    rep.verdict = rep.saturated ? Verdict::kWitnessed : Verdict::kUnknown;
    if (!rep.saturated) {
      rep.details.add("note", "term clone capped; witness not exact");
    }
    return true;
  };

  const bool identity_allowed = !options.phi || options.phi->is_identity();
  if (identity_allowed) {
    const auto maps = ModelIsomorphisms(m1, m2);
    if (!maps.empty()) {
      if (auto iso = TransportedFunctorIso(kb1, kb2, maps.front(),
                                           options.depth)) {
        if (accept(std::move(*iso), "model isomorphism")) {
          rep.model_map = maps.front();
          return rep;
        }
      }
    }
  }

  const std::vector<PhiAutomorphism> candidates =
      options.phi ? std::vector<PhiAutomorphism>{*options.phi}
                  : EnumeratePhiCandidates(m1->signature(), kb1->pool());
  rep.details.add("search.candidates", candidates.size());
  for (const PhiAutomorphism& phi : candidates) {
    if (auto iso = InducedFunctorIso(kb1, kb2, phi, options.depth)) {
      if (accept(std::move(*iso), "induced alpha")) return rep;
    }
  }
  SearchStats total;
  for (const PhiAutomorphism& phi : candidates) {
    SearchStats st;
    auto iso = FindFunctorIso(kb1, kb2, phi, options.depth, options.search, &st);
    total.nodes += st.nodes;
    total.budget_exhausted = total.budget_exhausted || st.budget_exhausted;
    if (iso && accept(std::move(*iso), "block search")) {
      rep.details.add("search.nodes", total.nodes);
      return rep;
    }
  }
  rep.details.add("search.nodes", total.nodes);
  rep.details.add("search.budget_exhausted", total.budget_exhausted);
  rep.verdict = Verdict::kUnknown;
  return rep;
}

}  // namespace

EquivReport CheckLogicalAutomorphicEquivalence(const ModelPtr& m1,
                                               const ModelPtr& m2,
                                               const EquivOptions& options) {
  return Decide(m1, m2, options, "lae", false);
}

EquivReport CheckInformationalEquivalence(const ModelPtr& m1,
                                          const ModelPtr& m2,
                                          const EquivOptions& options) {
  return Decide(m1, m2, options, "info", true);
}

}  // namespace kbgeo
