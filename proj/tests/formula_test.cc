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

#include "kbgeo/error.h"
#include "kbgeo/formula.h"
#include "kbgeo/semantics.h"
#include "support.h"

namespace kbgeo {
namespace {

using testing::Fixture;
using testing::Rng;

FormulaContext Ctx(const ModelPtr& m, VarSet vars) {
  return FormulaContext{m->signature(), std::move(vars)};
}

TEST(FormulaParseTest, PrecedenceAndAssociativity) {
  const ModelPtr m = Fixture("m_neg");
  const auto ctx = Ctx(m, VarSet{"x", "y"});
  const Formula f = ParseFormula("P(x) | P(y) & !P(neg(x))", ctx);
  ASSERT_EQ(f.kind(), FormulaKind::kOr);
  EXPECT_EQ(f.child(1).kind(), FormulaKind::kAnd);
  const Formula g = ParseFormula("P(x) -> P(y) -> P(x)", ctx);
  ASSERT_EQ(g.kind(), FormulaKind::kImplies);
  EXPECT_EQ(g.child(1).kind(), FormulaKind::kImplies);
  const Formula h = ParseFormula("exists x. P(x) & P(y)", ctx);
  ASSERT_EQ(h.kind(), FormulaKind::kExists);
  EXPECT_EQ(h.child(0).kind(), FormulaKind::kAnd);
  const Formula e = ParseFormula("neg(x) = y", ctx);
  EXPECT_EQ(e.kind(), FormulaKind::kEqual);
}

TEST(FormulaParseTest, SubstNodeListsWholeSource) {
  const ModelPtr m = Fixture("m_p");
  const Formula f =
      ParseFormula("subst {x := y} P(x)", Ctx(m, VarSet{"x", "y"}));
  ASSERT_EQ(f.kind(), FormulaKind::kSubst);
  EXPECT_EQ(f.substitution().source(), VarSet{"x"});
  EXPECT_EQ(ToString(f), "subst {x := y} P(x)");
}

TEST(FormulaParseTest, ErrorKinds) {
  const ModelPtr m = Fixture("m_neg");
  const auto ctx = Ctx(m, VarSet{"x"});
  auto kind_of = [&](const char* text) {
    try {
      ParseFormula(text, ctx);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::kIo;  // sentinel: parsed fine
  };
  EXPECT_EQ(kind_of("P(x"), ErrorKind::kSyntax);
  EXPECT_EQ(kind_of("P(x) &"), ErrorKind::kSyntax);
  EXPECT_EQ(kind_of("R(x)"), ErrorKind::kUnknownSymbol);
  EXPECT_EQ(kind_of("P(x, x)"), ErrorKind::kArity);
  EXPECT_EQ(kind_of("P(z)"), ErrorKind::kVariable);
  const auto noeq = Ctx(Fixture("m_eq_noeq"), VarSet{"x", "y"});
  EXPECT_THROW(ParseFormula("x = y", noeq), Error);
}

TEST(FormulaParseTest, RandomRoundTrip) {
  Rng rng(2024);
  for (const std::string& name : {"m_neg", "m_pq1", "m_cycle3", "m_succ3"}) {
    const ModelPtr m = Fixture(name);
    const VarSet vars{"x1", "x2"};
    for (int i = 0; i < 300; ++i) {
      const Formula f = testing::RandomFormula(rng, m->signature(), vars, 4);
      const std::string text = ToString(f);
      const Formula back = ParseFormula(text, Ctx(m, vars));
      EXPECT_EQ(back, f) << text;
      EXPECT_EQ(ToString(back), text);
    }
  }
}

TEST(FormulaTest, FreeVariables) {
  const ModelPtr m = Fixture("m_neg");
  const auto ctx = Ctx(m, VarSet{"x", "y", "z"});
  EXPECT_EQ(FreeVars(ParseFormula("P(y) & exists y. P(x)", ctx)),
            (std::vector<std::string>{"y", "x"}));
  EXPECT_EQ(FreeVars(ParseFormula("forall x. P(neg(x))", ctx)),
            std::vector<std::string>{});
  EXPECT_EQ(FreeVars(ParseFormula("subst {x := z, y := z} P(x)", ctx)),
            std::vector<std::string>{"z"});
}

// s_* on syntax agrees with the preimage rule on values.
TEST(FormulaTest, ApplySubstMatchesPreimage) {
  Rng rng(77);
  for (const std::string& name : {"m_neg", "m_p", "m_succ3", "m_cycle3"}) {
    const ModelPtr m = Fixture(name);
    const Signature& sig = m->signature();
    const VarSet x{"x1", "x2"}, y{"y1", "y2"};
    for (int i = 0; i < 150; ++i) {
      const Formula f = testing::RandomFormula(rng, sig, x, 3);
      const auto s = testing::RandomSubstitution(rng, sig, x, y, 2);
      const Formula g = ApplySubstFormula(s, f);
      const PointSet lhs = Val(g, m, y);
      const PointSet rhs = SStarPoints(s, Val(f, m, x));
      EXPECT_EQ(lhs, rhs) << ToString(f) << " under " << ToString(s);
      if (!ContainsQuantifier(f)) EXPECT_NE(g.kind(), FormulaKind::kSubst);
    }
    const Formula p = testing::RandomFormula(rng, sig, x, 2);
    EXPECT_EQ(ApplySubstFormula(Substitution::Identity(x), p), p);
  }
}

}  // namespace
}  // namespace kbgeo
