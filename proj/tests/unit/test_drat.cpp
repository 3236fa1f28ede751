#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <iostream>
#include <sstream>

#include "cnc/cdcl.hpp"
#include "cnc/dimacs.hpp"
#include "cnc/drat.hpp"
#include "oracle.hpp"

using namespace cnc;

namespace {

// RAT on the first literal, written against the oracle's propagation.
bool naive_rat(const Formula& f, const Clause& c) {
  if (oracle::naive_rup(f, c)) return true;
  if (c.empty()) return false;
  Literal p = c[0];
  for (const auto& d : f) {
    if (!d.contains(-p)) continue;
    std::vector<Literal> r(c.begin(), c.end());
    for (Literal l : d)
      if (l != -p) r.push_back(l);
    if (!oracle::naive_rup(f, Clause(r))) return false;
  }
  return true;
}

// Current formula after applying proof lines [0, upto).
Formula state_at(const Formula& f, const Proof& p, std::size_t upto) {
  std::vector<Clause> cs(f.begin(), f.end());
  Var bound = f.var_bound();
  for (std::size_t i = 0; i < upto; ++i) {
    const auto& line = p[i];
    if (line.is_addition()) {
      cs.push_back(line.clause);
      bound = std::max(bound, line.clause.max_var());
    } else {
      for (auto it = cs.begin(); it != cs.end(); ++it)
        if (it->same_set(line.clause)) {
          cs.erase(it);
          break;
        }
    }
  }
  return Formula(bound, std::move(cs));
}

struct Instance {
  Formula f;
  Proof proof;
};

// UNSAT random 3-CNFs with their solver proofs.
std::vector<Instance> unsat_corpus(std::size_t want, std::uint64_t seed, int min_vars = 8,
                                   int max_vars = 16, double ratio = 5.0) {
  oracle::Rng rng(seed);
  std::vector<Instance> out;
  while (out.size() < want) {
    int vars = rng.uniform(min_vars, max_vars);
    auto f = oracle::random_3cnf(rng, vars, static_cast<int>(vars * ratio));
    ProofRecorder rec;
    if (solve(f, &rec).verdict != Verdict::unsat) continue;
    out.push_back({f, rec.take()});
  }
  return out;
}

}  // namespace

TEST(Rup, Examples) {
  Formula f(2, {Clause{1, 2}, Clause{1, -2}});
  EXPECT_TRUE(check_rup(f, Clause{1}));
  EXPECT_FALSE(check_rup(f, Clause{2}));
  EXPECT_TRUE(check_rup(f, Clause{2, -2}));
  Formula g(1, {Clause{1}, Clause{-1}});
  EXPECT_TRUE(check_rup(g, Clause{}));
  EXPECT_FALSE(check_rup(f, Clause{}));
}

TEST(Rat, Examples) {
  Formula f(2, {Clause{1, 2}});
  Formula f3(3, {Clause{1, 2}});
  EXPECT_FALSE(check_rup(f3, Clause{3}));
  EXPECT_TRUE(check_rat(f3, Clause{3}, Literal(3)));  // nothing contains x̄₃
  // resolvent (x̄₁ ∨ x₂) is not RUP
  EXPECT_FALSE(check_rat(f, Clause{-1}, Literal(-1)));
  // once x₂ is implied the resolvent becomes RUP
  Formula g(3, {Clause{1, 2}, Clause{2, 3}, Clause{2, -3}});
  EXPECT_FALSE(check_rup(g, Clause{-1}));
  EXPECT_TRUE(check_rat(g, Clause{-1}, Literal(-1)));
  EXPECT_THROW(check_rat(f, Clause{1}, Literal(2)), std::invalid_argument);
}

TEST(SmallProof, RupAndRatExamples) {
  auto f = parse_dimacs(oracle::kSmallCnf);
  EXPECT_FALSE(check_rup(f, Clause{}));
  EXPECT_TRUE(check_rup(Formula(1, {Clause{1}}), Clause{1}));
  EXPECT_TRUE(check_rat(f, Clause{1}, Literal(1)));
  // after "-1 0" and "d -1 2 4 0" the unit (2) is RUP
  DratChecker c(f);
  c.add(Clause{-1});
  ASSERT_TRUE(c.remove(Clause{-1, 2, 4}));
  EXPECT_TRUE(c.rup(Clause{2}));
  EXPECT_TRUE(check_proof(Formula(1, {Clause{1}, Clause{-1}}), parse_drat("0\n")).accepted);
}

TEST(SmallProof, AcceptedAndAlternativesRejected) {
  auto f = parse_dimacs(oracle::kSmallCnf);
  auto p = parse_drat(oracle::kSmallDrat);
  ASSERT_EQ(p.size(), 4u);
  auto r = check_proof(f, p);
  EXPECT_TRUE(r.accepted) << r.reason;
  EXPECT_TRUE(r.refuted);
  EXPECT_EQ(r.rat_additions, 1u);  // only x̄₁ needs RAT
  EXPECT_FALSE(check_rup(f, Clause{-1}));
  EXPECT_TRUE(check_rat(f, Clause{-1}, Literal(-1)));

  auto only_empty = check_proof(f, parse_drat("0\n"));
  EXPECT_FALSE(only_empty.accepted);
  EXPECT_EQ(only_empty.failed_line, 1u);

  Proof no_empty(p.begin(), p.end() - 1);
  EXPECT_FALSE(check_proof(f, no_empty).accepted);
  CheckOptions partial;
  partial.refutation = false;
  EXPECT_TRUE(check_proof(f, no_empty, partial).accepted);
}

TEST(Checker, DeletionsAreSetEqualAndAbsentOnesWarn) {
  Formula f(2, {Clause{1, 2}, Clause{-1, 2}, Clause{1, -2}, Clause{-1, -2}});
  // the second deletion finds nothing; without (1 ∨ 2) the refutation fails
  auto p = parse_drat("d 2 1 0\nd 1 2 0\n-1 0\n-2 0\n");
  CheckOptions partial;
  partial.refutation = false;
  auto r = check_proof(f, p, partial);
  EXPECT_TRUE(r.accepted) << r.reason;
  ASSERT_EQ(r.warnings.size(), 1u);
  EXPECT_NE(r.warnings[0].find("line 2"), std::string::npos);
  p.push_back(ProofLine::addition(Clause{}));
  auto full = check_proof(f, p);
  EXPECT_FALSE(full.accepted);
  EXPECT_EQ(full.failed_line, 5u);
}

TEST(Checker, UnitDeletionsAreHonored) {
  Formula f(2, {Clause{1}, Clause{-1, 2}, Clause{-2, -1}});
  EXPECT_TRUE(check_proof(f, parse_drat("0\n")).accepted);
  auto r = check_proof(f, parse_drat("d 1 0\n0\n"));
  EXPECT_FALSE(r.accepted);
  EXPECT_EQ(r.failed_line, 2u);
}

TEST(Checker, IncrementalSegments) {
  auto f = parse_dimacs(oracle::kSmallCnf);
  auto p = parse_drat(oracle::kSmallDrat);
  DratChecker c(f);
  CheckOptions seg;
  seg.refutation = false;
  EXPECT_TRUE(c.check(Proof(p.begin(), p.begin() + 2), seg).accepted);
  EXPECT_TRUE(c.check(Proof(p.begin() + 2, p.end())).accepted);
}

TEST(Checker, SymmetryUnitOption) {
  Formula f(3, {Clause{1, 2, 3}, Clause{-1, -2, -3}});
  Proof p{ProofLine::addition(Clause{2})};
  CheckOptions o;
  o.refutation = false;
  EXPECT_FALSE(check_proof(f, p, o).accepted);
  o.symmetry_units = {2};
  auto r = check_proof(f, p, o);
  EXPECT_TRUE(r.accepted);
  EXPECT_EQ(r.symmetry_additions, 1u);
  // not flip-symmetric any more once an extra clause is present
  Formula g(3, {Clause{1, 2, 3}, Clause{-1, -2, -3}, Clause{1, 3}});
  EXPECT_FALSE(check_proof(g, p, o).accepted);
}

TEST(Checker, AnyPivot) {
  // (2 ∨ 3) with pivot 2 fails, pivot 3 succeeds: 3 is fresh
  Formula f(3, {Clause{1, -2}, Clause{-1, -2}});
  Proof p{ProofLine::addition(Clause{2, 3})};
  CheckOptions o;
  o.refutation = false;
  EXPECT_FALSE(check_proof(f, p, o).accepted);
  o.any_pivot = true;
  EXPECT_TRUE(check_proof(f, p, o).accepted);
}

TEST(DratText, RoundTrip) {
  auto p = parse_drat(oracle::kSmallDrat);
  EXPECT_EQ(write_drat(p), "-1 0\nd -1 2 4 0\n2 0\n0\n");
  EXPECT_EQ(parse_drat(write_drat(p)), p);
  EXPECT_THROW(parse_drat("1 2\n"), ParseError);
  EXPECT_THROW(parse_drat("1 x 0\n"), ParseError);
  EXPECT_TRUE(parse_drat("c comment\n\n").empty());
}

TEST(Extension, ThreeClausesAllRat) {
  Formula f(2, {Clause{1, 2}});
  auto ext = extension_clauses(f, 3, Literal(1), Literal(2));
  ASSERT_EQ(ext.size(), 3u);
  EXPECT_EQ(ext[0], (Clause{3, -1, -2}));
  EXPECT_EQ(ext[1], (Clause{-3, 1}));
  EXPECT_EQ(ext[2], (Clause{-3, 2}));
  Proof p;
  for (const auto& c : ext) p.push_back(ProofLine::addition(c));
  CheckOptions o;
  o.refutation = false;
  auto g = f;
  g.set_var_bound(3);
  EXPECT_TRUE(check_proof(g, p, o).accepted);
  EXPECT_THROW(extension_clauses(f, 1, Literal(1), Literal(2)), Error);
}

TEST(Extension, DegenerateSameLiteral) {
  auto ext = extension_clauses(Formula(1), 2, Literal(1), Literal(1));
  ASSERT_EQ(ext.size(), 2u);
  EXPECT_TRUE(ext[0].same_set(Clause{2, -1}));
  EXPECT_TRUE(ext[1].same_set(Clause{-2, 1}));
}

TEST(Extension, PreservesSatisfiability) {
  oracle::Rng rng(21);
  for (int i = 0; i < 300; ++i) {
    int vars = rng.uniform(3, 10);
    auto f = oracle::random_cnf(rng, vars, rng.uniform(3, 45), 1, 3);
    Var x = static_cast<Var>(vars + 1);
    Literal a(rng.uniform(1, vars) * (rng.coin() ? 1 : -1));
    Literal b(rng.uniform(1, vars) * (rng.coin() ? 1 : -1));
    if (a == -b) continue;
    Formula g(x, std::vector<Clause>(f.begin(), f.end()));
    for (auto& c : extension_clauses(f, x, a, b)) g.add(c);
    EXPECT_EQ(oracle::satisfiable(f), oracle::satisfiable(g));
  }
}

TEST(Merge, ConcatenationOrder) {
  Proof t{ProofLine::addition(Clause{1})};
  std::vector<std::optional<Proof>> cubes{Proof{ProofLine::addition(Clause{2})},
                                          Proof{ProofLine::deletion(Clause{3}),
                                                ProofLine::addition(Clause{4})}};
  Proof taut{ProofLine::addition(Clause{})};
  auto m = merge_proofs(t, cubes, taut);
  ASSERT_EQ(m.size(), 5u);
  EXPECT_EQ(m[0], t[0]);
  EXPECT_EQ(m[1].clause, (Clause{2}));
  EXPECT_FALSE(m[2].is_addition());
  EXPECT_EQ(m[4], taut[0]);
  EXPECT_EQ(merge_proofs(t, {}, taut).size(), 2u);
  cubes[1].reset();
  try {
    merge_proofs(t, cubes, taut);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find('1'), std::string::npos);
  }
}

TEST(Merge, SmallFormulaSplitOnFirstVariable) {
  auto f = parse_dimacs(oracle::kSmallCnf);
  std::vector<Cube> cs{{Literal(1)}, {Literal(-1)}};
  std::vector<std::optional<Proof>> parts;
  for (const auto& c : cs) {
    ProofRecorder rec;
    Solver s(f, {}, &rec);
    ASSERT_EQ(s.solve(c, true).verdict, Verdict::unsat);
    parts.emplace_back(rec.take());
  }
  ProofRecorder taut;
  ASSERT_EQ(solve(negate_cubes(cs), &taut).verdict, Verdict::unsat);
  auto m = merge_proofs({}, parts, taut.proof());
  auto r = check_proof(f, m);
  EXPECT_TRUE(r.accepted) << r.reason;
}

TEST(Property, RatAdditionPreservesSatisfiability) {
  oracle::Rng rng(31);
  int tested = 0;
  while (tested < 500) {
    int vars = rng.uniform(3, 12);
    auto f = oracle::random_cnf(rng, vars, rng.uniform(2, 50), 1, 3);
    auto c = oracle::random_cnf(rng, vars, 1, 1, 3)[0];
    if (!check_rat(f, c, c[0])) continue;
    ++tested;
    Formula g(f.var_bound(), std::vector<Clause>(f.begin(), f.end()));
    g.add(c);
    ASSERT_EQ(oracle::satisfiable(f), oracle::satisfiable(g)) << c.to_string();
  }
}

TEST(Property, RupImpliesRatForEveryPivot) {
  oracle::Rng rng(32);
  int tested = 0;
  for (int i = 0; i < 3000 && tested < 300; ++i) {
    int vars = rng.uniform(3, 10);
    auto f = oracle::random_cnf(rng, vars, rng.uniform(5, 40), 1, 3);
    auto c = oracle::random_cnf(rng, vars, 1, 1, 4)[0];
    if (!check_rup(f, c)) continue;
    ++tested;
    for (Literal p : c) EXPECT_TRUE(check_rat(f, c, p));
  }
  EXPECT_GT(tested, 100);
}

TEST(Property, RupAgreesWithNaivePropagation) {
  oracle::Rng rng(33);
  for (int i = 0; i < 1000; ++i) {
    int vars = rng.uniform(2, 12);
    auto f = oracle::random_cnf(rng, vars, rng.uniform(1, 40), 1, 3);
    auto c = rng.uniform(0, 9) == 0 ? Clause{} : oracle::random_cnf(rng, vars, 1, 1, 3)[0];
    ASSERT_EQ(check_rup(f, c), oracle::naive_rup(f, c)) << c.to_string();
    if (!c.empty()) {
      ASSERT_EQ(check_rat(f, c, c[0]), naive_rat(f, c)) << c.to_string();
    }
  }
}

TEST(Property, SolverProofsAccepted) {
  for (auto& inst : unsat_corpus(150, 41)) {
    auto r = check_proof(inst.f, inst.proof);
    ASSERT_TRUE(r.accepted) << r.reason << " at line " << r.failed_line;
  }
}

TEST(Property, MutatedProofsRejected) {
  oracle::Rng rng(51);
  std::size_t total = 0, rejected = 0, tolerated = 0, tolerated_rejected = 0;
  for (auto& inst : unsat_corpus(400, 52, 20, 35, 4.6)) {
    std::vector<std::size_t> lines;
    for (std::size_t i = 0; i < inst.proof.size(); ++i)
      if (inst.proof[i].is_addition() && !inst.proof[i].clause.empty()) lines.push_back(i);
    if (lines.empty()) continue;
    for (int k = 0; k < 5; ++k) {
      std::size_t i = lines[rng.uniform(0, static_cast<int>(lines.size()) - 1)];
      auto lits = std::vector<Literal>(inst.proof[i].clause.begin(), inst.proof[i].clause.end());
      std::size_t j = static_cast<std::size_t>(rng.uniform(0, static_cast<int>(lits.size()) - 1));
      lits[j] = -lits[j];
      Proof mutated = inst.proof;
      mutated[i].clause = Clause(lits);
      bool still_valid = naive_rat(state_at(inst.f, inst.proof, i), mutated[i].clause);
      bool rej = !check_proof(inst.f, mutated).accepted;
      ++total;
      if (still_valid) {
        ++tolerated;
        if (rej) ++tolerated_rejected;
      } else if (rej) {
        ++rejected;
      }
    }
  }
  const std::size_t counted = total - tolerated;
  double rate = static_cast<double>(rejected) / static_cast<double>(counted);
  double raw = static_cast<double>(rejected + tolerated_rejected) / static_cast<double>(total);
  std::cout << "mutations " << total << ", still RUP/RAT " << tolerated << " (" << tolerated_rejected
            << " of them rejected later), rejection rate " << rate << ", raw " << raw << '\n';
  ASSERT_GT(counted, 500u);
  EXPECT_GE(rate, 0.99);
}

TEST(Property, CheckTimeGrowsPolynomially) {
  // PHP(k): k pigeons, k-1 holes
  auto php = [](int k) {
    int holes = k - 1;
    Formula f(static_cast<Var>(k * holes));
    auto x = [&](int p, int h) { return p * holes + h + 1; };
    for (int p = 0; p < k; ++p) {
      std::vector<Literal> c;
      for (int h = 0; h < holes; ++h) c.emplace_back(x(p, h));
      f.add(Clause(c));
    }
    for (int h = 0; h < holes; ++h)
      for (int p = 0; p < k; ++p)
        for (int q = p + 1; q < k; ++q) f.add(Clause{-x(p, h), -x(q, h)});
    return f;
  };
  std::vector<std::pair<double, double>> pts;  // (L·m, seconds)
  for (int k = 5; k <= 8; ++k) {
    auto f = php(k);
    ProofRecorder rec;
    ASSERT_EQ(solve(f, &rec).verdict, Verdict::unsat);
    auto t0 = std::chrono::steady_clock::now();
    ASSERT_TRUE(check_proof(f, rec.proof()).accepted);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    pts.emplace_back(static_cast<double>(rec.proof().size()) * static_cast<double>(f.size()), secs);
    std::cout << "php" << k << ": lines " << rec.proof().size() << ", clauses " << f.size()
              << ", check " << secs << " s\n";
  }
  // cubic envelope fitted on the smallest instance, generous slack for timer noise
  double c = std::max(pts[0].second, 1e-4) / std::pow(pts[0].first, 3.0);
  for (auto [size, secs] : pts) EXPECT_LE(secs, 100.0 * c * std::pow(size, 3.0) + 0.5);
}
