#include <gtest/gtest.h>

#include <algorithm>

#include "cnc/cdcl.hpp"
#include "cnc/dimacs.hpp"
#include "cnc/encoder.hpp"
#include "oracle.hpp"

using namespace cnc;

namespace {

Formula php(int pigeons) {
  int holes = pigeons - 1;
  Formula f(static_cast<Var>(pigeons * holes));
  auto x = [&](int p, int h) { return p * holes + h + 1; };
  for (int p = 0; p < pigeons; ++p) {
    std::vector<Literal> c;
    for (int h = 0; h < holes; ++h) c.emplace_back(x(p, h));
    f.add(Clause(c));
  }
  for (int h = 0; h < holes; ++h)
    for (int p = 0; p < pigeons; ++p)
      for (int q = p + 1; q < pigeons; ++q) f.add(Clause{-x(p, h), -x(q, h)});
  return f;
}

Formula with_unit(const Formula& f, Literal l) {
  Formula g(f.var_bound(), std::vector<Clause>(f.begin(), f.end()));
  g.add(Clause(std::vector<Literal>{l}));
  return g;
}

// Backbone by enumeration over the occurring variables.
std::vector<Literal> brute_backbone(const Formula& f) {
  std::vector<Var> vars;
  for (const auto& c : f)
    for (Literal l : c) vars.push_back(l.var());
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  std::vector<Literal> out;
  for (Var v : vars) {
    for (Literal l : {Literal::positive(v), Literal::negative(v)}) {
      Formula g(f.var_bound(), std::vector<Clause>(f.begin(), f.end()));
      g.add(Clause(std::vector<Literal>{-l}));
      if (!oracle::satisfiable(g)) out.push_back(l);
    }
  }
  return out;
}

}  // namespace

TEST(Cdcl, TrivialFormulas) {
  EXPECT_EQ(solve(Formula(0)).verdict, Verdict::sat);
  EXPECT_EQ(solve(Formula(3)).verdict, Verdict::sat);
  ProofRecorder rec;
  EXPECT_EQ(solve(Formula(1, {Clause{}}), &rec).verdict, Verdict::unsat);
  ASSERT_FALSE(rec.proof().empty());
  EXPECT_TRUE(rec.proof().back().clause.empty());
  ProofRecorder rec2;
  EXPECT_EQ(solve(Formula(1, {Clause{1}, Clause{-1}}), &rec2).verdict, Verdict::unsat);
  EXPECT_TRUE(check_proof(Formula(1, {Clause{1}, Clause{-1}}), rec2.proof()).accepted);
}

TEST(Cdcl, SmallProofSelfChecks) {
  auto f = parse_dimacs(oracle::kSmallCnf);
  SolverOptions o;
  o.self_check = true;
  ProofRecorder rec;
  EXPECT_EQ(solve(f, &rec, o).verdict, Verdict::unsat);
  auto r = check_proof(f, rec.proof());
  EXPECT_TRUE(r.accepted) << r.reason;
}

TEST(Cdcl, AgreesWithBruteForce) {
  oracle::Rng rng(101);
  int unsat = 0;
  for (int i = 0; i < 500; ++i) {
    int vars = rng.uniform(1, 20);
    int ratio_pct = rng.uniform(100, 700);
    auto f = oracle::random_cnf(rng, vars, vars * ratio_pct / 100 + 1, 1, 4);
    ProofRecorder rec;
    SolverOptions o;
    o.self_check = i % 10 == 0;
    auto res = solve(f, &rec, o);
    bool expect = oracle::satisfiable(f);
    ASSERT_EQ(res.verdict, expect ? Verdict::sat : Verdict::unsat) << write_dimacs(f);
    if (expect) {
      ASSERT_TRUE(oracle::satisfies(f, res.model));
    } else {
      ++unsat;
      auto r = check_proof(f, rec.proof());
      ASSERT_TRUE(r.accepted) << r.reason << "\n" << write_dimacs(f);
    }
  }
  EXPECT_GT(unsat, 50);
}

TEST(Cdcl, ReduceDbDeletionsStayValid) {
  auto f = php(8);
  ProofRecorder rec;
  SolverOptions o;
  auto res = solve(f, &rec, o);
  ASSERT_EQ(res.verdict, Verdict::unsat);
  EXPECT_GT(res.stats.conflicts, 0u);
  std::size_t deletions = std::count_if(rec.proof().begin(), rec.proof().end(),
                                        [](const ProofLine& l) { return !l.is_addition(); });
  EXPECT_EQ(deletions, res.stats.deleted);
  EXPECT_GT(deletions, 0u);
  auto r = check_proof(f, rec.proof());
  EXPECT_TRUE(r.accepted) << r.reason;
  EXPECT_TRUE(r.warnings.empty());
}

TEST(Cdcl, ConflictBudget) {
  SolverOptions o;
  o.conflict_budget = 5;
  auto res = solve(php(9), nullptr, o);
  EXPECT_EQ(res.verdict, Verdict::indeterminate);
  EXPECT_LE(res.stats.conflicts, 5u);
}

TEST(Cdcl, EncodedTriplesAreSatisfiableAtSmallScale) {
  auto f = encode(500);
  auto res = solve(f);
  ASSERT_EQ(res.verdict, Verdict::sat);
  auto p = Partition::from_assignment(500, res.model);
  EXPECT_TRUE(std::holds_alternative<PartitionValid>(check_partition(500, p)));
}

TEST(Incremental, CubeVerdictsMatchBruteForce) {
  oracle::Rng rng(102);
  for (int i = 0; i < 100; ++i) {
    int vars = rng.uniform(4, 14);
    auto f = oracle::random_3cnf(rng, vars, vars * 4);
    std::vector<Cube> cubes;
    for (int k = 0; k < 6; ++k) {
      Cube c;
      int len = rng.uniform(0, 3);
      for (int j = 0; j < len; ++j) c.emplace_back(rng.uniform(1, vars) * (rng.coin() ? 1 : -1));
      cubes.push_back(c);
    }
    ProofRecorder rec;
    auto res = solve_incremental(f, cubes, &rec);
    ASSERT_EQ(res.size(), cubes.size());
    for (std::size_t k = 0; k < cubes.size(); ++k) {
      Formula g(f.var_bound(), std::vector<Clause>(f.begin(), f.end()));
      for (Literal l : cubes[k]) g.add(Clause(std::vector<Literal>{l}));
      bool sat = oracle::satisfiable(g);
      ASSERT_EQ(res[k].verdict, sat ? Verdict::sat : Verdict::unsat);
      if (sat) {
        EXPECT_TRUE(oracle::satisfies(g, res[k].model));
      }
    }
    // every logged lemma, including ¬cube clauses, is sound against F alone
    CheckOptions o;
    o.refutation = false;
    auto r = check_proof(f, rec.proof(), o);
    ASSERT_TRUE(r.accepted) << r.reason;
  }
}

TEST(Incremental, SmallFormulaCubesAndEdgeCases) {
  auto f = parse_dimacs(oracle::kSmallCnf);
  EXPECT_TRUE(solve_incremental(f, {}).empty());
  ProofRecorder rec;
  auto res = solve_incremental(f, {{Literal(1)}, {Literal(-1)}}, &rec);
  ASSERT_EQ(res.size(), 2u);
  EXPECT_EQ(res[0].verdict, Verdict::unsat);
  EXPECT_EQ(res[1].verdict, Verdict::unsat);
  // (¬1) and (1) are both in the proof, so the empty clause follows
  auto p = rec.take();
  p.push_back(ProofLine::addition(Clause{}));
  EXPECT_TRUE(check_proof(f, p).accepted);
}

TEST(Incremental, BudgetIsPerCube) {
  auto f = php(8);
  SolverOptions o;
  o.conflict_budget = 3;
  // the first cube is hard, the second is refuted by propagation alone
  auto res = solve_incremental(f, {{}, {Literal(1), Literal(8)}}, nullptr, o);
  ASSERT_EQ(res.size(), 2u);
  EXPECT_EQ(res[0].verdict, Verdict::indeterminate);
  EXPECT_EQ(res[1].verdict, Verdict::unsat);
}

TEST(Incremental, AssumptionsNeverLoggedAndInputNeverDeleted) {
  oracle::Rng rng(104);
  for (int i = 0; i < 50; ++i) {
    auto f = oracle::random_3cnf(rng, 30, 125);
    std::vector<Cube> cubes;
    for (int k = 0; k < 8; ++k)
      cubes.push_back({Literal(rng.uniform(1, 15) * (rng.coin() ? 1 : -1)),
                       Literal(rng.uniform(16, 30) * (rng.coin() ? 1 : -1))});
    ProofRecorder rec;
    auto res = solve_incremental(f, cubes, &rec);
    for (const auto& line : rec.proof()) {
      if (line.is_addition()) {
        // a logged unit must follow from F alone
        if (line.clause.size() == 1) {
          EXPECT_TRUE(check_rup(f, line.clause) || !oracle::satisfiable(with_unit(f, -line.clause[0])));
        }
        continue;
      }
      for (const auto& c : f) EXPECT_FALSE(c.same_set(line.clause)) << line.clause.to_string();
    }
  }
}

TEST(Incremental, ExtendedLemmasMentionTheCube) {
  auto f = php(6);
  ProofRecorder rec;
  Solver s(f, {}, &rec);
  std::vector<Literal> cube{Literal(1), Literal(-7)};
  ASSERT_EQ(s.solve(cube, true).verdict, Verdict::unsat);
  const auto& p = rec.proof();
  ASSERT_FALSE(p.empty());
  EXPECT_TRUE(p.back().clause.same_set(Clause{-1, 7}));
  for (const auto& line : p) {
    if (!line.is_addition()) continue;
    // each lemma is either subsumed by ¬cube or contains all of it
    bool has_all = line.clause.contains(Literal(-1)) && line.clause.contains(Literal(7));
    bool within = std::all_of(line.clause.begin(), line.clause.end(), [](Literal l) {
      return l == Literal(-1) || l == Literal(7);
    });
    EXPECT_TRUE(has_all || within) << line.clause.to_string();
  }
  // the solver is still usable afterwards
  EXPECT_EQ(s.solve().verdict, Verdict::unsat);
}

TEST(Incremental, FalseAssumptionIsUnsatWithoutLemmas) {
  Formula f(2, {Clause{-1}, Clause{1, 2}});
  ProofRecorder rec;
  Solver s(f, {}, &rec);
  std::vector<Literal> a{Literal(1)};
  EXPECT_EQ(s.solve(a, true).verdict, Verdict::unsat);
  ASSERT_EQ(rec.proof().size(), 1u);
  EXPECT_EQ(rec.proof()[0].clause, (Clause{-1}));
  std::vector<Literal> b{Literal(2)};
  auto r = s.solve(b, true);
  EXPECT_EQ(r.verdict, Verdict::sat);
  EXPECT_TRUE(r.model.is_true(Literal(2)));
}

TEST(Backbone, Examples) {
  auto f = parse_dimacs("p cnf 3 3\n1 2 0\n1 -2 0\n2 3 0\n");
  auto b = backbone(f);
  EXPECT_EQ(b, std::vector<Literal>{Literal(1)});
  EXPECT_TRUE(backbone(Formula(2, {Clause{1, 2}})).empty());
  EXPECT_EQ(backbone(Formula(2, {Clause{1}, Clause{1, 2}})), std::vector<Literal>{Literal(1)});
  auto units = backbone(Formula(3, {Clause{-3}, Clause{3, 1}}));
  EXPECT_EQ(units, (std::vector<Literal>{Literal(1), Literal(-3)}));
  EXPECT_THROW(backbone(Formula(1, {Clause{1}, Clause{-1}})), Error);
  SolverOptions tight;
  tight.conflict_budget = 1;
  EXPECT_THROW(backbone(php(7), tight), BudgetExhausted);
}

TEST(Backbone, MatchesEnumeration) {
  oracle::Rng rng(103);
  int checked = 0;
  for (int i = 0; i < 2000 && checked < 100; ++i) {
    int vars = rng.uniform(3, 12);
    auto f = oracle::random_cnf(rng, vars, vars * 2, 1, 3);
    if (!oracle::satisfiable(f)) continue;
    ++checked;
    ASSERT_EQ(backbone(f), brute_backbone(f)) << write_dimacs(f);
  }
  EXPECT_EQ(checked, 100);
}

TEST(Witness, ArithmeticIdentitiesAndForcing) {
  EXPECT_EQ(5180ull * 5180 + 5865ull * 5865, 7825ull * 7825);
  EXPECT_EQ(625ull * 625 + 7800ull * 7800, 7825ull * 7825);
  auto ts = oracle::triples_by_euclid(7825);
  auto has = [&](std::uint64_t a, std::uint64_t b) {
    return std::find(ts.begin(), ts.end(), std::array<std::uint64_t, 3>{a, b, 7825}) != ts.end();
  };
  EXPECT_TRUE(has(5180, 5865));
  EXPECT_TRUE(has(625, 7800));
  EXPECT_TRUE(is_pythagorean(5180, 5865, 7825));
  EXPECT_TRUE(is_pythagorean(625, 7800, 7825));
  EXPECT_FALSE(is_pythagorean(3, 4, 6));
  auto w = arithmetic_witness_check();
  EXPECT_TRUE(w.first_identity);
  EXPECT_TRUE(w.second_identity);
  EXPECT_TRUE(w.triples_enumerated);
  EXPECT_TRUE(w.forcings_conflict);
  EXPECT_TRUE(w.ok());
}

TEST(Verdicts, Names) {
  EXPECT_EQ(to_string(Verdict::sat), "sat");
  EXPECT_EQ(to_string(Verdict::unsat), "unsat");
  EXPECT_EQ(to_string(Verdict::indeterminate), "indeterminate");
}
