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

#include <numeric>

#include "kbgeo/equivalence.h"
#include "kbgeo/error.h"
#include "support.h"

namespace kbgeo {
namespace {

using testing::Fixture;
using testing::Rng;

Signature PQ() { return Signature({}, {{"P", 1}, {"Q", 1}}); }

TEST(PhiTest, ParseAndPrint) {
  const Signature sig = PQ();
  EXPECT_EQ(PhiAutomorphism::Parse("identity", sig).ToString(), "identity");
  EXPECT_EQ(PhiAutomorphism::Parse("swaprel P Q", sig).ToString(), "swap P Q");
  EXPECT_EQ(PhiAutomorphism::Parse("swap Q P", sig).ToString(), "swap P Q");
  EXPECT_EQ(PhiAutomorphism::Parse("renamevars x2:x1,x1:x2", sig).ToString(),
            "rename x1:x2,x2:x1");
  EXPECT_EQ(
      PhiAutomorphism::Parse("swaprel P Q; renamevars x1:x2,x2:x1", sig),
      PhiAutomorphism::Parse("rename x1:x2,x2:x1; swap P Q", sig));
  const Signature three({}, {{"A", 1}, {"B", 1}, {"C", 1}});
  const auto cyc = PhiAutomorphism::Parse("permrel A:B,B:C,C:A", three);
  EXPECT_EQ(cyc.ToString(), "permrel A:B,B:C,C:A");
  EXPECT_EQ(PhiAutomorphism::Parse(cyc.ToString(), three), cyc);
  EXPECT_EQ(cyc.inverse().rel("A"), "C");
}

TEST(PhiTest, RejectsNonPermutations) {
  const Signature sig({}, {{"P", 1}, {"R", 2}});
  EXPECT_THROW(PhiAutomorphism::Parse("swaprel P R", sig), Error);
  EXPECT_THROW(PhiAutomorphism::Parse("swaprel P", sig), Error);
  EXPECT_THROW(PhiAutomorphism::Parse("swaprel P Z", sig), Error);
  EXPECT_THROW(PhiAutomorphism::Parse("renamevars x1:x2", sig), Error);
  EXPECT_THROW(PhiAutomorphism::Parse("rotate P", sig), Error);
  const auto phi = PhiAutomorphism::Parse("renamevars x1:x3,x3:x1", sig);
  EXPECT_THROW(phi.validate(sig, VariablePool(2)), Error);
  EXPECT_NO_THROW(phi.validate(sig, VariablePool(3)));
}

TEST(PhiTest, ActionOnSubstitutionsIsAFunctor) {
  Rng rng(12);
  const Signature sig({{"f", 1}}, {{"P", 1}});
  const auto phi = PhiAutomorphism::Parse("rename x1:x3,x2:x1,x3:x2", sig);
  const VariablePool pool(3);
  const auto& objs = pool.subsets();
  for (int trial = 0; trial < 200; ++trial) {
    const VarSet& a = objs[testing::Pick(rng, objs.size())];
    const VarSet& b = objs[testing::Pick(rng, objs.size())];
    const VarSet& c = objs[testing::Pick(rng, objs.size())];
    const auto s1 = testing::RandomSubstitution(rng, sig, a, b, 2);
    const auto s2 = testing::RandomSubstitution(rng, sig, b, c, 2);
    EXPECT_EQ(phi.apply(ComposeSubst(s1, s2)),
              ComposeSubst(phi.apply(s1), phi.apply(s2)));
    EXPECT_EQ(phi.apply(Substitution::Identity(a)),
              Substitution::Identity(phi.apply(a)));
    EXPECT_EQ(phi.inverse().apply(phi.apply(s1)), s1);
  }
}

// phi(f) evaluated over phi(X) in the relation-permuted model equals f over X.
TEST(PhiTest, FormulaActionMatchesSemantics) {
  Rng rng(21);
  const ModelPtr m1 = Fixture("m_pq1"), m2 = Fixture("m_pq2");
  const auto phi = PhiAutomorphism::Parse("swap P Q; rename x1:x2,x2:x1",
                                          m1->signature());
  const VarSet x{"x1", "x2"};
  for (int i = 0; i < 200; ++i) {
    const Formula f = testing::RandomFormula(rng, m1->signature(), x, 4);
    const PointSet a = Val(f, m1, x);
    const PointSet b = Val(phi.apply(f), m2, x);
    // Renaming swaps the coordinates: (u,v) over x1,x2 becomes (v,u).
    Bitset swapped(4);
    for (std::size_t p : a.bits().indices()) swapped.set((p % 2) * 2 + p / 2);
    EXPECT_EQ(b.bits(), swapped) << ToString(f);
  }
}

TEST(PhiTest, CandidateEnumerationOrder) {
  const Signature sig({}, {{"P", 1}, {"Q", 1}, {"R", 2}});
  const auto c = EnumeratePhiCandidates(sig, VariablePool(2));
  ASSERT_EQ(c.size(), 3u);
  EXPECT_TRUE(c[0].is_identity());
  EXPECT_EQ(c[1].ToString(), "swap P Q");
  EXPECT_EQ(c[2].ToString(), "rename x1:x2,x2:x1");
}

TEST(InfoEquivalenceTest, SwapWitnessForPQ) {
  EquivOptions o;
  const auto r =
      CheckInformationalEquivalence(Fixture("m_pq1"), Fixture("m_pq2"), o);
  ASSERT_EQ(r.verdict, Verdict::kWitnessed);
  ASSERT_TRUE(r.iso.has_value());
  EXPECT_EQ(r.iso->phi().ToString(), "swap P Q");
  EXPECT_EQ(BuildDescriptionIso(*r.iso).get("verdict"), "PASS");
  const Report rep = r.ToReport();
  EXPECT_EQ(rep.get("witness.phi"), "swap P Q");
  EXPECT_EQ(rep.get("functor_laws.verdict"), "PASS");
}

TEST(InfoEquivalenceTest, LatticeSizeRefutation) {
  EquivOptions o;
  o.n_max = 1;
  const auto r =
      CheckInformationalEquivalence(Fixture("m_p"), Fixture("m_p0"), o);
  EXPECT_EQ(r.verdict, Verdict::kInequivalent);
  ASSERT_TRUE(r.refutation.has_value());
  EXPECT_EQ(r.refutation->left, 4);
  EXPECT_EQ(r.refutation->right, 2);
  EXPECT_EQ(r.ToReport().get("refutation.summary"), "4 vs 2 at |X|=1");
  EXPECT_EQ(r.ToReport().get("refutation.text"),
            "lattice size 4 vs 2 at X={x1}");
}

TEST(InfoEquivalenceTest, RelabeledCopiesWitnessedByIdentity) {
  Rng rng(1);
  for (int trial = 0; trial < 12; ++trial) {
    const ModelPtr m = testing::RandomModel(rng);
    std::vector<Elem> perm(m->carrier_size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < perm.size(); ++i) {
      labels.push_back("e" + std::to_string(i));
    }
    const ModelPtr copy = m->permuted(perm, labels);
    EquivOptions o;
    o.depth = 1;
    const auto r = CheckInformationalEquivalence(m, copy, o);
    ASSERT_EQ(r.verdict, Verdict::kWitnessed) << PrintModel(*m);
    EXPECT_TRUE(r.model_map.has_value());
    EXPECT_EQ(r.ToReport().get("witness.phi"), "identity");
    EXPECT_EQ(CheckIsomorphic(m, copy).verdict, Verdict::kWitnessed);
    EXPECT_EQ(CheckLogicalAutomorphicEquivalence(m, copy, o).verdict,
              Verdict::kWitnessed);
  }
}

// Soundness on random pairs: isomorphic models are never refuted, and a
// refutation always comes with differing lattice sizes.
TEST(InfoEquivalenceTest, RandomPairsNeverContradictIsomorphism) {
  Rng rng(404);
  for (int trial = 0; trial < 25; ++trial) {
    const Signature sig = testing::RandomSignature(rng);
    const ModelPtr m1 = testing::RandomModelOver(rng, sig, 2);
    const ModelPtr m2 = testing::RandomModelOver(rng, sig, 2);
    EquivOptions o;
    o.depth = 1;
    const auto r = CheckInformationalEquivalence(m1, m2, o);
    if (CheckIsomorphic(m1, m2).verdict == Verdict::kWitnessed) {
      EXPECT_NE(r.verdict, Verdict::kInequivalent);
    }
    if (r.verdict == Verdict::kInequivalent) {
      ASSERT_TRUE(r.refutation.has_value());
      EXPECT_NE(r.refutation->left, r.refutation->right);
    }
    if (r.verdict == Verdict::kWitnessed && r.iso) {
      EXPECT_EQ(VerifyAdmissibilityTransfer(*r.iso, 1, 1).get("verdict"),
                "PASS");
    }
  }
  const ModelPtr a = testing::RandomModelOver(rng, Signature({}, {{"P", 1}}), 2);
  const ModelPtr b =
      testing::RandomModelOver(rng, Signature({}, {{"Q", 1}}), 2);
  EXPECT_THROW(CheckInformationalEquivalence(a, b, EquivOptions{}), Error);
}

TEST(InfoEquivalenceTest, NegativeControlsNeverWitnessed) {
  for (int n = 1; n <= 3; ++n) {
    for (int d = 0; d <= 2; ++d) {
      EquivOptions o;
      o.n_max = n;
      o.depth = d;
      EXPECT_NE(CheckInformationalEquivalence(Fixture("m_p"), Fixture("m_p0"),
                                              o).verdict,
                Verdict::kWitnessed);
      EXPECT_NE(CheckLogicalAutomorphicEquivalence(Fixture("m_p"),
                                                   Fixture("m_p0"), o)
                    .verdict,
                Verdict::kWitnessed);
      o.phi = PhiAutomorphism::Identity();
      EXPECT_NE(CheckInformationalEquivalence(Fixture("m_pq1"),
                                              Fixture("m_pq2"), o)
                    .verdict,
                Verdict::kInequivalent);
    }
  }
}

TEST(FunctorIsoTest, CorruptedAlphaIsDetected) {
  const auto kb = KnowledgeBase::Build(Fixture("m_p"), 2);
  auto iso = FindFunctorIso(kb, kb, PhiAutomorphism::Identity(), 2);
  ASSERT_TRUE(iso.has_value());
  EXPECT_EQ(VerifyAdmissibilityTransfer(*iso, 2, 1).get("verdict"), "PASS");
  EXPECT_EQ(VerifyDiagram(*iso).get("verdict"), "PASS");
  const SpacePtr sp = kb->lattice(VarSet{"x1"}).space();
  const std::vector<std::size_t> i0{0}, i1{1};
  const FunctorIso bad = iso->with_swapped(
      VarSet{"x1"}, PointSet::FromIndices(sp, i0), PointSet::FromIndices(sp, i1));
  const Report r = VerifyAdmissibilityTransfer(bad, 2, 1);
  EXPECT_EQ(r.get("verdict"), "FAIL");
  EXPECT_GE(std::stoll(r.get("failures.count")), 1);
  EXPECT_EQ(VerifyDiagram(bad).get("verdict"), "FAIL");
  EXPECT_EQ(BuildDescriptionIso(bad).get("verdict"), "FAIL");
}

TEST(FunctorIsoTest, InverseRoundTrip) {
  const auto kb1 = KnowledgeBase::Build(Fixture("m_succ3"), 2);
  const ModelPtr copy = kb1->model()->permuted(std::vector<Elem>{1, 2, 0},
                                               {"p", "q", "r"});
  const auto kb2 = KnowledgeBase::Build(copy, 2);
  const auto maps = ModelIsomorphisms(kb1->model(), copy);
  ASSERT_FALSE(maps.empty());
  const auto iso = TransportedFunctorIso(kb1, kb2, maps.front(), 1);
  ASSERT_TRUE(iso.has_value());
  for (const VarSet& x : kb1->pool().subsets()) {
    for (const ClosedFilter& t : kb1->lattice(x).elements()) {
      EXPECT_EQ(iso->apply_inverse(iso->apply(t)), t);
    }
  }
  EXPECT_EQ(BuildDescriptionIso(*iso).get("verdict"), "PASS");
}

TEST(SearchTest, BudgetExhaustionIsReported) {
  const auto kb1 = KnowledgeBase::Build(Fixture("m_eq"), 3);
  SearchOptions tiny;
  tiny.max_nodes = 1;
  SearchStats st;
  const auto r =
      FindFunctorIso(kb1, kb1, PhiAutomorphism::Identity(), 1, tiny, &st);
  EXPECT_FALSE(r.has_value());
  EXPECT_TRUE(st.budget_exhausted);
}

TEST(ReportTest, DeterministicAcrossRuns) {
  EquivOptions o;
  const auto a =
      CheckInformationalEquivalence(Fixture("m_pq1"), Fixture("m_pq2"), o);
  const auto b =
      CheckInformationalEquivalence(Fixture("m_pq1"), Fixture("m_pq2"), o);
  EXPECT_EQ(WriteReport(a.ToReport(), ReportFormat::kMachine),
            WriteReport(b.ToReport(), ReportFormat::kMachine));
}

TEST(ReportTest, UnknownCarriesBounds) {
  EquivReport r;
  r.mode = "info";
  r.n_max = 3;
  r.depth = 1;
  r.saturated = false;
  const std::string text = WriteReport(r.ToReport(), ReportFormat::kText);
  EXPECT_NE(text.find("verdict: UNKNOWN"), std::string::npos);
  EXPECT_NE(text.find("  n_max: 3"), std::string::npos);
  EXPECT_NE(text.find("  depth: 1"), std::string::npos);
  const std::string machine =
      WriteReport(r.ToReport(), ReportFormat::kMachine);
  EXPECT_NE(machine.find("bounds.n_max=3\n"), std::string::npos);
}

}  // namespace
}  // namespace kbgeo
