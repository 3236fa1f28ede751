#include <gtest/gtest.h>

#include "cnc/cnf.hpp"
#include "oracle.hpp"

using namespace cnc;

TEST(Literal, ZeroIsRejected) { EXPECT_THROW(Literal(0), std::invalid_argument); }

TEST(Literal, CodeRoundTrip) {
  for (int v : {1, -1, 7, -7, 123456, -123456}) {
    Literal l(v);
    EXPECT_EQ(Literal::from_code(l.code()), l);
    EXPECT_EQ((-l).var(), l.var());
    EXPECT_NE((-l).code(), l.code());
    EXPECT_EQ(-(-l), l);
  }
  EXPECT_EQ(Literal(5).code(), 10u);
  EXPECT_EQ(Literal(-5).code(), 11u);
}

TEST(Clause, DeduplicatesAndKeepsOrder) {
  Clause c{3, -1, 3, 2, -1};
  ASSERT_EQ(c.size(), 3u);
  EXPECT_EQ(c[0], Literal(3));
  EXPECT_EQ(c[1], Literal(-1));
  EXPECT_EQ(c[2], Literal(2));
  EXPECT_FALSE(c.tautological());
  EXPECT_EQ(c.max_var(), 3u);
}

TEST(Clause, TautologyFlag) {
  Clause c{1, 2, -1};
  EXPECT_TRUE(c.tautological());
  EXPECT_EQ(c.size(), 3u);
}

TEST(Clause, SetEqualityIgnoresOrder) {
  EXPECT_TRUE(Clause({1, -2, 3}).same_set(Clause{3, 1, -2}));
  EXPECT_FALSE(Clause({1, -2, 3}) == Clause({3, 1, -2}));
  EXPECT_EQ(Clause({1, -2}).flipped(), Clause({-1, 2}));
  EXPECT_TRUE(Clause{}.empty());
}

TEST(Formula, AddChecksVarBound) {
  Formula f(3);
  f.add(Clause{1, -3});
  EXPECT_THROW(f.add(Clause{4}), std::out_of_range);
  EXPECT_EQ(f.size(), 1u);
  EXPECT_EQ(f.occurring_variables(), 2u);
  EXPECT_FALSE(f.contains_empty_clause());
  f.add(Clause{});
  EXPECT_TRUE(f.contains_empty_clause());
}

TEST(PartialAssignment, ConsistentByConstruction) {
  PartialAssignment t(4);
  t.assign(Literal(-2));
  EXPECT_TRUE(t.is_false(Literal(2)));
  EXPECT_TRUE(t.is_true(Literal(-2)));
  EXPECT_EQ(t(Literal(3)), std::nullopt);
  EXPECT_THROW(t.assign(Literal(2)), std::logic_error);
  t.assign(Literal(-2));  // same value again is fine
  t.set(Literal(2));
  EXPECT_TRUE(t.is_true(Literal(2)));
  t.unassign(2);
  EXPECT_EQ(t.assigned_count(), 0u);
}

TEST(UnitPropagate, ChainAndConflict) {
  Formula f(3, {Clause{-1, 2}, Clause{-2, 3}});
  std::vector<Literal> a{Literal(1)};
  auto r = unit_propagate(f, a);
  EXPECT_FALSE(r.conflict);
  EXPECT_TRUE(r.assignment.is_true(Literal(3)));

  Formula g(2, {Clause{1}, Clause{-1, 2}, Clause{-2}});
  EXPECT_TRUE(unit_propagate(g, {}).conflict);

  std::vector<Literal> contradictory{Literal(1), Literal(-1)};
  EXPECT_TRUE(unit_propagate(Formula(1), contradictory).conflict);
}

TEST(UnitPropagate, AgreesWithNaiveFixpoint) {
  oracle::Rng rng(11);
  for (int iter = 0; iter < 400; ++iter) {
    int vars = rng.uniform(2, 12);
    auto f = oracle::random_cnf(rng, vars, rng.uniform(1, 30), 1, 4);
    std::vector<Literal> assume;
    std::vector<int> value(vars + 1, 0);
    for (int k = rng.uniform(0, 2); k > 0; --k) {
      Literal l(rng.coin() ? rng.uniform(1, vars) : -rng.uniform(1, vars));
      if (value[l.var()] != 0) continue;
      value[l.var()] = l.is_positive() ? 1 : -1;
      assume.push_back(l);
    }
    auto r = unit_propagate(f, assume);
    bool ok = oracle::naive_propagate(f, value);
    ASSERT_EQ(r.conflict, !ok) << "iteration " << iter;
    if (!ok) continue;
    for (int v = 1; v <= vars; ++v) {
      auto got = r.assignment(Literal(v));
      int want = value[v];
      if (want == 0) EXPECT_FALSE(got.has_value());
      else EXPECT_EQ(got, std::optional<bool>(want > 0));
    }
  }
}

TEST(Resolve, Basic) {
  auto r = resolve(Clause{1, 2}, Clause{-1, 3}, Literal(1));
  EXPECT_TRUE(r.same_set(Clause{2, 3}));
  EXPECT_THROW(resolve(Clause{1, 2}, Clause{1, 3}, Literal(1)), std::invalid_argument);
  EXPECT_THROW(resolve(Clause{2}, Clause{-1}, Literal(1)), std::invalid_argument);
  EXPECT_TRUE(resolve(Clause{1, 2}, Clause{-1, -2}, Literal(1)).tautological());
}

TEST(Evaluate, ThreeValued) {
  Formula f(2, {Clause{1, 2}, Clause{-1}});
  PartialAssignment t(2);
  EXPECT_EQ(evaluate(f, t), Evaluation::undetermined);
  t.assign(Literal(-1));
  EXPECT_EQ(evaluate(f, t), Evaluation::undetermined);
  t.assign(Literal(2));
  EXPECT_EQ(evaluate(f, t), Evaluation::satisfied);
  t.set(Literal(1));
  EXPECT_EQ(evaluate(f, t), Evaluation::falsified);
  EXPECT_EQ(evaluate(Clause{}, t), Evaluation::falsified);
}

TEST(FlipSymmetry, MultisetInvariance) {
  EXPECT_TRUE(is_flip_symmetric(Formula(2, {Clause{1, 2}, Clause{-1, -2}})));
  EXPECT_FALSE(is_flip_symmetric(Formula(2, {Clause{1, 2}})));
  // multiplicities matter
  EXPECT_FALSE(is_flip_symmetric(Formula(2, {Clause{1, 2}, Clause{1, 2}, Clause{-1, -2}})));
  EXPECT_TRUE(is_flip_symmetric(Formula(2)));
}
