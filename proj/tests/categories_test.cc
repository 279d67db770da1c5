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

#include "kbgeo/categories.h"
#include "kbgeo/error.h"
#include "support.h"

namespace kbgeo {
namespace {

using testing::Fixture;
using testing::Rng;

TEST(VariablePoolTest, SubsetOrder) {
  const VariablePool pool(3);
  const auto& s = pool.subsets();
  ASSERT_EQ(s.size(), 7u);
  EXPECT_EQ(s[0], (VarSet{"x1"}));
  EXPECT_EQ(s[3], (VarSet{"x1", "x2"}));
  EXPECT_EQ(s[5], (VarSet{"x2", "x3"}));
  EXPECT_EQ(s[6], (VarSet{"x1", "x2", "x3"}));
  EXPECT_EQ(pool.canonical(2), (VarSet{"x1", "x2"}));
  EXPECT_THROW(VariablePool(0), Error);
  EXPECT_THROW(VariablePool(17), Error);
}

TEST(KnowledgeBaseTest, LatticeSizes) {
  const auto kb_eq = KnowledgeBase::Build(Fixture("m_eq"), 2);
  EXPECT_EQ(kb_eq->lattice(VarSet{"x1"}).size(), 2u);
  EXPECT_EQ(kb_eq->lattice(VarSet{"x1", "x2"}).size(), 4u);
  const auto kb_p = KnowledgeBase::Build(Fixture("m_p"), 2);
  EXPECT_EQ(kb_p->lattice(VarSet{"x2"}).size(), 4u);
  EXPECT_EQ(kb_p->lattice(VarSet{"x1", "x2"}).size(), 16u);
  EXPECT_TRUE(kb_p->saturated());
  EXPECT_THROW(kb_p->lattice(VarSet{"y"}), Error);
  EXPECT_THROW(kb_p->lattice(VarSet{"x1", "x2", "x3"}), Error);
}

class DualityTest : public ::testing::TestWithParam<std::string> {};

TEST_P(DualityTest, PassesAtTwoVariables) {
  const auto kb = KnowledgeBase::Build(Fixture(GetParam()), 2);
  const Report r = CheckDuality(*kb);
  EXPECT_EQ(r.get("verdict"), "PASS") << WriteReport(r, ReportFormat::kText);
  EXPECT_EQ(r.get("failures.count"), "0");
}

TEST_P(DualityTest, ClFunctorialityAtDepthTwo) {
  const auto kb = KnowledgeBase::Build(Fixture(GetParam()), 2);
  const Report r = VerifyClFunctoriality(*kb, 2);
  EXPECT_EQ(r.get("verdict"), "PASS") << WriteReport(r, ReportFormat::kText);
  EXPECT_GT(std::stoll(r.get("checked.triples")), 0);
}

INSTANTIATE_TEST_SUITE_P(Fixtures, DualityTest,
                         ::testing::ValuesIn(testing::AllFixtures()));

// The two admissibility tests (on points and on generator formulas) agree,
// and admissibility is upward closed in T2's dual.
TEST(AdmissibilityTest, PointAndFormulaFormsAgree) {
  Rng rng(6);
  for (const std::string& name : {"m_neg", "m_p", "m_succ3"}) {
    const auto kb = KnowledgeBase::Build(Fixture(name), 2);
    const Signature& sig = kb->model()->signature();
    for (const VarSet& x : kb->pool().subsets()) {
      for (const VarSet& y : kb->pool().subsets()) {
        const auto e1 = kb->lattice(x).elements();
        const auto e2 = kb->lattice(y).elements();
        for (int trial = 0; trial < 6; ++trial) {
          const auto s = testing::RandomSubstitution(rng, sig, x, y, 2);
          for (int i = 0; i < 20; ++i) {
            const ClosedFilter& t1 = e1[testing::Pick(rng, e1.size())];
            const ClosedFilter& t2 = e2[testing::Pick(rng, e2.size())];
            EXPECT_EQ(IsAdmissibleDesc(s, t1, t2),
                      IsAdmissibleDescByFormula(s, t1, t2));
          }
          // The least admissible target is admissible and below every other.
          for (const ClosedFilter& t1 : e1) {
            const ClosedFilter least = ClMorphism(s, t1, kb->lattice(y));
            EXPECT_TRUE(IsAdmissibleDesc(s, t1, least));
            for (const ClosedFilter& t2 : e2) {
              EXPECT_EQ(IsAdmissibleDesc(s, t1, t2),
                        kb->lattice(y).leq(least, t2));
            }
          }
        }
      }
    }
  }
}

TEST(CtTest, ReversesOrderAndRoundTrips) {
  const auto kb = KnowledgeBase::Build(Fixture("m_neg"), 2);
  const FilterLattice& lat = kb->lattice(VarSet{"x1", "x2"});
  const auto elems = lat.elements();
  for (const ClosedFilter& a : elems) {
    EXPECT_EQ(CtInverse(CtElement(a), lat), a);
    for (const ClosedFilter& b : elems) {
      EXPECT_EQ(lat.leq(a, b),
                CtElement(b).points().is_subset_of(CtElement(a).points()));
    }
  }
  const ContentObject c = CtObject(kb->description(VarSet{"x1"}));
  EXPECT_EQ(c.algebra->num_blocks(), 2u);
}

TEST(CtTest, MorphismsAreAdmissibleContent) {
  const auto kb = KnowledgeBase::Build(Fixture("m_p"), 2);
  const Signature& sig = kb->model()->signature();
  const VarSet x{"x1"}, y{"x1", "x2"};
  for (const Substitution& s : EnumerateSubstitutions(sig, x, y, 1)) {
    const auto m = LeastDescMorphism(s, kb->lattice(x), kb->lattice(y));
    const AdmissibleContMorphism c = CtMorphism(m);
    ASSERT_EQ(c.assignment.size(), m.assignment.size());
    for (const auto& [a2, a1] : c.assignment) {
      EXPECT_TRUE(IsAdmissibleCont(s, a2, a1));
    }
  }
}

TEST(ComposeTest, DescCompositionIsAssociative) {
  const auto kb = KnowledgeBase::Build(Fixture("m_neg"), 2);
  const Signature& sig = kb->model()->signature();
  const VarSet a{"x1"}, b{"x1", "x2"}, c{"x2"};
  const auto s1s = EnumerateSubstitutions(sig, a, b, 1);
  const auto s2s = EnumerateSubstitutions(sig, b, c, 1);
  const auto s3s = EnumerateSubstitutions(sig, c, a, 1);
  for (const auto& s1 : s1s) {
    const auto m1 = LeastDescMorphism(s1, kb->lattice(a), kb->lattice(b));
    for (const auto& s2 : s2s) {
      const auto m2 = LeastDescMorphism(s2, kb->lattice(b), kb->lattice(c));
      const auto m21 = ComposeDesc(m1, m2);
      EXPECT_EQ(m21.s, ComposeSubst(s1, s2));
      // Composite of least morphisms is the least morphism of the composite.
      const auto least =
          LeastDescMorphism(m21.s, kb->lattice(a), kb->lattice(c));
      ASSERT_EQ(m21.assignment.size(), least.assignment.size());
      for (std::size_t i = 0; i < least.assignment.size(); ++i) {
        EXPECT_EQ(m21.assignment[i].first, least.assignment[i].first);
        EXPECT_EQ(m21.assignment[i].second, least.assignment[i].second);
      }
      for (const auto& s3 : s3s) {
        const auto m3 = LeastDescMorphism(s3, kb->lattice(c), kb->lattice(a));
        const auto lhs = ComposeDesc(ComposeDesc(m1, m2), m3);
        const auto rhs = ComposeDesc(m1, ComposeDesc(m2, m3));
        EXPECT_EQ(lhs.s, rhs.s);
        ASSERT_EQ(lhs.assignment.size(), rhs.assignment.size());
        for (std::size_t i = 0; i < lhs.assignment.size(); ++i) {
          EXPECT_EQ(lhs.assignment[i].second, rhs.assignment[i].second);
        }
      }
    }
  }
}

TEST(KnowledgeBaseTest, BuildIsDeterministic) {
  const ModelPtr m = Fixture("m_cycle3");
  const auto a = KnowledgeBase::Build(m, 2);
  const auto b = KnowledgeBase::Build(m, 2);
  EXPECT_EQ(CheckDuality(*a), CheckDuality(*b));
  EXPECT_EQ(VerifyClFunctoriality(*a, 1), VerifyClFunctoriality(*b, 1));
}

}  // namespace
}  // namespace kbgeo
