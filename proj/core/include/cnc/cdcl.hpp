// The conquer solver: CDCL with two watched literals, first-UIP learning,
// recursive minimization, Luby restarts and VSIDS. Supports incremental
// solving under cube assumptions with lemma extension and DRAT logging.
#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "cnc/cnf.hpp"
#include "cnc/cube_tree.hpp"
#include "cnc/drat.hpp"

namespace cnc {

enum class Verdict { sat, unsat, indeterminate };

std::string_view to_string(Verdict v);

struct SolverOptions {
  double var_decay = 0.95;
  double clause_decay = 0.999;
  std::uint64_t restart_base = 100;   ///< conflicts per Luby unit
  std::uint64_t conflict_budget = 0;  ///< per solve call; 0 = unlimited
  /// Re-checks every emitted lemma with a naive RUP test against the clause
  /// database. Slow; meant for tests.
  bool self_check = false;
};

struct SolveStats {
  std::uint64_t conflicts = 0;
  std::uint64_t decisions = 0;
  std::uint64_t propagations = 0;
  std::uint64_t learned = 0;
  std::uint64_t deleted = 0;
  std::uint64_t restarts = 0;
};

struct SolveResult {
  Verdict verdict = Verdict::indeterminate;
  PartialAssignment model;  ///< total over 1..var_bound when verdict is sat
  SolveStats stats;         ///< counters of this call only
};

/// Thrown in self-check mode when a lemma fails its RUP check.
class SelfCheckError : public Error {
 public:
  using Error::Error;
};

/// Thrown by backbone() when the conflict budget runs out.
class BudgetExhausted : public Error {
 public:
  using Error::Error;
};

class Solver {
 public:
  /// `proof` (optional) must outlive the solver.
  explicit Solver(const Formula& f, SolverOptions opts = {}, ProofSink* proof = nullptr);
  ~Solver();
  Solver(const Solver&) = delete;
  Solver& operator=(const Solver&) = delete;

  /// Solves under the assumptions. With extend_lemmas, every learned clause is
  /// extended with the negated assumptions before it is stored and logged,
  /// and an unsat answer logs the negated assumptions as a clause.
  SolveResult solve(std::span<const Literal> assumptions = {}, bool extend_lemmas = false);

  /// Adds a unit at the root; not logged.
  void add_unit(Literal l);

  Var var_bound() const;
  const SolveStats& total_stats() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

SolveResult solve(const Formula& f, ProofSink* proof = nullptr, SolverOptions opts = {});

/// Solves F under each cube in order with one solver; learned clauses and
/// heuristic state carry over between cubes.
std::vector<SolveResult> solve_incremental(const Formula& f, const std::vector<Cube>& cubes,
                                           ProofSink* proof = nullptr, SolverOptions opts = {});

/// Literals true in every model. Throws cnc::Error if F is unsatisfiable and
/// BudgetExhausted if the conflict budget runs out.
std::vector<Literal> backbone(const Formula& f, SolverOptions opts = {});

struct WitnessCheck {
  bool first_identity = false;   ///< 5180² + 5865² = 7825²
  bool second_identity = false;  ///< 625² + 7800² = 7825²
  bool triples_enumerated = false;
  /// Unit propagation on F₇₈₂₅ with x₅₁₈₀, x₅₈₆₅, x̄₆₂₅, x̄₇₈₀₀ conflicts on x₇₈₂₅.
  bool forcings_conflict = false;
  bool ok() const { return first_identity && second_identity && triples_enumerated && forcings_conflict; }
};

WitnessCheck arithmetic_witness_check();

}  // namespace cnc
