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

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "kbgeo/algebra.h"
#include "kbgeo/error.h"
#include "kbgeo/semantics.h"
#include "support.h"

namespace kbgeo {
namespace {

using testing::Fixture;
using testing::Rng;

Signature NegSig() { return Signature({{"neg", 1}, {"c", 0}}, {{"P", 1}}); }

TEST(BitsetTest, CanonicalTailAndOrdering) {
  Bitset a(70, true);
  EXPECT_EQ(a.count(), 70u);
  EXPECT_EQ(a.complement().count(), 0u);
  Bitset b(70);
  b.set(3);
  b.set(69);
  EXPECT_EQ(b.indices(), (std::vector<std::size_t>{3, 69}));
  Bitset c(70);
  c.set(4);
  EXPECT_TRUE(c < b);  // bit 69 dominates
  EXPECT_TRUE(b.is_subset_of(a));
  EXPECT_FALSE(a.is_subset_of(b));
  EXPECT_EQ(Bitset(5).to_hex(), "00");
  Bitset d(5);
  d.set(0);
  d.set(4);
  EXPECT_EQ(d.to_hex(), "11");
}

TEST(TermTest, ParsePrintRoundTrip) {
  const Signature sig = NegSig();
  const VarSet vars{"x", "y"};
  for (const char* text : {"x", "neg(x)", "neg(neg(y))", "c", "neg(c)"}) {
    const Term t = ParseTerm(text, sig, vars);
    EXPECT_EQ(ToString(t), text);
    EXPECT_EQ(ParseTerm(ToString(t), sig, vars), t);
  }
  EXPECT_EQ(ParseTerm("neg(neg(x))", sig, vars).depth(), 2);
}

TEST(TermTest, Errors) {
  const Signature sig = NegSig();
  const VarSet vars{"x"};
  auto kind_of = [&](const char* text) {
    try {
      ParseTerm(text, sig, vars);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::kIo;  // sentinel: no error
  };
  EXPECT_EQ(kind_of("z"), ErrorKind::kVariable);
  EXPECT_EQ(kind_of("foo(x)"), ErrorKind::kUnknownSymbol);
  EXPECT_EQ(kind_of("neg(x,x)"), ErrorKind::kArity);
}

TEST(SubstitutionTest, CompositionIsAssociativeAndHasUnits) {
  Rng rng(11);
  const Signature sig = NegSig();
  const VarSet a{"x", "y"}, b{"u"}, c{"p", "q"}, d{"z"};
  for (int trial = 0; trial < 200; ++trial) {
    const auto s1 = testing::RandomSubstitution(rng, sig, a, b, 2);
    const auto s2 = testing::RandomSubstitution(rng, sig, b, c, 2);
    const auto s3 = testing::RandomSubstitution(rng, sig, c, d, 2);
    EXPECT_EQ(ComposeSubst(ComposeSubst(s1, s2), s3),
              ComposeSubst(s1, ComposeSubst(s2, s3)));
    EXPECT_EQ(ComposeSubst(Substitution::Identity(a), s1), s1);
    EXPECT_EQ(ComposeSubst(s1, Substitution::Identity(b)), s1);
  }
}

TEST(SubstitutionTest, CompositionMatchesPointwiseEvaluation) {
  // (s2 after s1)(x) evaluated at mu equals s1(x) evaluated at mu s2.
  Rng rng(5);
  const ModelPtr m = Fixture("m_neg");
  const Signature& sig = m->signature();
  const VarSet a{"x", "y"}, b{"u", "v"}, c{"w"};
  for (int trial = 0; trial < 100; ++trial) {
    const auto s1 = testing::RandomSubstitution(rng, sig, a, b, 2);
    const auto s2 = testing::RandomSubstitution(rng, sig, b, c, 2);
    const auto s21 = ComposeSubst(s1, s2);
    for (Elem w = 0; w < 2; ++w) {
      const std::vector<Elem> mu{w};
      std::vector<Elem> mid;
      for (const Term& t : s2.images()) mid.push_back(EvalTerm(t, c, mu, *m));
      for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(EvalTerm(s21.image(i), c, mu, *m),
                  EvalTerm(s1.image(i), b, mid, *m));
      }
    }
  }
}

TEST(SubstitutionTest, RenamingInverse) {
  const VarSet x{"x1", "x2"}, y{"x2", "x1"};
  const auto r = Substitution::Renaming(x, y, {"x2", "x1"});
  const auto inv = r.inverse();
  ASSERT_TRUE(inv.has_value());
  EXPECT_TRUE(ComposeSubst(r, *inv).is_identity());
  EXPECT_TRUE(ComposeSubst(*inv, r).is_identity());
  const Substitution collapse(x, VarSet{"z"}, {Term::Var("z"), Term::Var("z")});
  EXPECT_FALSE(collapse.inverse().has_value());
}

TEST(EnumerateTest, CountsMatchCombinatorics) {
  const Signature sig({{"f", 1}}, {});
  // depth <= 2 over one variable: x, f(x), f(f(x)).
  EXPECT_EQ(EnumerateTerms(sig, VarSet{"x"}, 2).size(), 3u);
  // Two variables, binary op g, depth <= 1: 2 + 4.
  const Signature sig2({{"g", 2}}, {});
  EXPECT_EQ(EnumerateTerms(sig2, VarSet{"x", "y"}, 1).size(), 6u);
  // Substitutions {x,y} -> {u} at depth 1 under f: 2 choices each.
  EXPECT_EQ(
      EnumerateSubstitutions(sig, VarSet{"x", "y"}, VarSet{"u"}, 1).size(),
      4u);
  EXPECT_THROW(EnumerateTerms(sig2, VarSet{"x", "y"}, 4, 100), Error);
}

class TermCloneTest : public ::testing::TestWithParam<std::string> {};

TEST_P(TermCloneTest, MatchesBruteForceClosure) {
  const ModelPtr m = Fixture(GetParam());
  for (int k = 1; k <= 2; ++k) {
    const VarSet vars = testing::Vars(k);
    const SpacePtr sp = AffineSpace::Create(m, vars);
    const TermClone clone = TermFunctions(*m, vars);
    EXPECT_TRUE(clone.saturated);
    std::set<std::vector<Elem>> got;
    for (const TermFunction& f : clone.functions) {
      got.insert(f.table);
      for (std::size_t p = 0; p < sp->size(); ++p) {
        EXPECT_EQ(EvalTerm(f.witness, vars, sp->point(p).values, *m),
                  f.table[p]);
      }
    }
    EXPECT_EQ(got.size(), clone.functions.size());
    EXPECT_EQ(got, testing::BruteTermFunctions(*m, *sp));
  }
}

INSTANTIATE_TEST_SUITE_P(Fixtures, TermCloneTest,
                         ::testing::ValuesIn(testing::AllFixtures()));

TEST(ModelTest, IsomorphismsMatchBruteForce) {
  Rng rng(3);
  for (int trial = 0; trial < 60; ++trial) {
    const ModelPtr m = testing::RandomModel(rng);
    std::vector<Elem> perm(m->carrier_size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    const ModelPtr copy = m->permuted(perm, m->carrier());
    std::vector<std::vector<Elem>> brute;
    std::vector<Elem> cand(m->carrier_size());
    std::iota(cand.begin(), cand.end(), 0);
    do {
      if (IsModelIsomorphism(*m, *copy, cand)) brute.push_back(cand);
    } while (std::next_permutation(cand.begin(), cand.end()));
    const auto maps = ModelIsomorphisms(m, copy);
    ASSERT_EQ(maps.size(), brute.size());
    for (std::size_t i = 0; i < maps.size(); ++i) {
      EXPECT_EQ(maps[i].mapping, brute[i]);
    }
    EXPECT_TRUE(std::find(brute.begin(), brute.end(), perm) != brute.end());
  }
}

TEST(ModelTest, BuilderRejectsPartialTable) {
  ModelBuilder b(Signature({{"neg", 1}}, {}), {"0", "1"});
  b.set_op("neg", std::vector<Elem>{0}, 1);
  try {
    b.build();
    FAIL() << "expected a validation error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kValidation);
    EXPECT_NE(std::string(e.what()).find("op neg not total"), std::string::npos);
  }
}

TEST(ModelTest, CheckedPowerBound) {
  EXPECT_EQ(CheckedPower(3, 4, 100), 81u);
  EXPECT_THROW(CheckedPower(3, 5, 100), Error);
  EXPECT_THROW(CheckedPower(1u << 20, 4, 1000000), Error);
}

}  // namespace
}  // namespace kbgeo
