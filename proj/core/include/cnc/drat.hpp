// DRAT proofs: representation, ASCII I/O, RUP/RAT checks, forward proof
// checking, extension-rule helper and proof merging.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "cnc/cnf.hpp"
#include "cnc/error.hpp"

namespace cnc {

struct ProofLine {
  enum class Kind : std::uint8_t { add, remove };
  Kind kind = Kind::add;
  Clause clause;

  static ProofLine addition(Clause c) { return {Kind::add, std::move(c)}; }
  static ProofLine deletion(Clause c) { return {Kind::remove, std::move(c)}; }
  bool is_addition() const { return kind == Kind::add; }

  friend bool operator==(const ProofLine&, const ProofLine&) = default;
};

using Proof = std::vector<ProofLine>;

/// Receiver of proof steps emitted by a solver.
class ProofSink {
 public:
  virtual ~ProofSink() = default;
  virtual void add(std::span<const Literal> clause) = 0;
  virtual void remove(std::span<const Literal> clause) = 0;
};

/// Collects emitted steps in memory.
class ProofRecorder final : public ProofSink {
 public:
  void add(std::span<const Literal> clause) override {
    proof_.push_back(ProofLine::addition(Clause(clause)));
  }
  void remove(std::span<const Literal> clause) override {
    proof_.push_back(ProofLine::deletion(Clause(clause)));
  }
  const Proof& proof() const { return proof_; }
  Proof take() { return std::move(proof_); }

 private:
  Proof proof_;
};

/// Streams ASCII DRAT to an ostream.
class DratWriter final : public ProofSink {
 public:
  explicit DratWriter(std::ostream& out) : out_(out) {}
  void add(std::span<const Literal> clause) override;
  void remove(std::span<const Literal> clause) override;

 private:
  std::ostream& out_;
};

/// ASCII DRAT: one clause per line, `d ` prefix for deletions, 0-terminated.
void write_drat(std::ostream& out, const Proof& p);
std::string write_drat(const Proof& p);
Proof parse_drat(std::istream& in);
Proof parse_drat(std::string_view text);
Proof read_drat_file(const std::string& path);
void write_drat_file(const std::string& path, const Proof& p);

/// F ∧ ¬C ⊢₁ ⊥.
bool check_rup(const Formula& f, const Clause& c);

/// RAT on pivot w.r.t. F. Throws std::invalid_argument if pivot ∉ C.
bool check_rat(const Formula& f, const Clause& c, Literal pivot);

struct CheckOptions {
  /// Accept only if the empty clause is added.
  bool refutation = true;
  /// Try every literal of a non-RUP addition as pivot instead of only the first.
  bool any_pivot = false;
  /// Unit additions accepted when the current formula is flip-symmetric.
  std::set<std::int32_t> symmetry_units;
};

struct CheckResult {
  bool accepted = false;
  bool refuted = false;          ///< the empty clause was added and verified
  std::size_t failed_line = 0;   ///< 1-based; 0 when accepted
  std::string reason;
  std::size_t lines_checked = 0;
  std::size_t rat_additions = 0;       ///< additions that needed the RAT check
  std::size_t symmetry_additions = 0;  ///< units accepted via flip symmetry
  std::vector<std::string> warnings;
};

/// Forward DRAT checker with two watched literals. The current formula
/// starts as F and evolves with the accepted additions and deletions.
class DratChecker {
 public:
  explicit DratChecker(const Formula& f);
  ~DratChecker();
  DratChecker(const DratChecker&) = delete;
  DratChecker& operator=(const DratChecker&) = delete;

  bool rup(const Clause& c);
  bool rat(const Clause& c, Literal pivot);
  bool flip_symmetric() const;

  void add(const Clause& c);
  /// Removes one clause that equals c as a set; false if none is present.
  bool remove(const Clause& c);

  CheckResult check(const Proof& p, const CheckOptions& opts = {});

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

CheckResult check_proof(const Formula& f, const Proof& p, const CheckOptions& opts = {});

/// Definition x := a ∧ b: (x ∨ ā ∨ b̄), (x̄ ∨ a), (x̄ ∨ b), duplicates dropped.
/// Throws cnc::Error if x occurs in F.
std::vector<Clause> extension_clauses(const Formula& f, Var x, Literal a, Literal b);

/// transform ++ cube proofs (in cube order) ++ tautology proof. Throws
/// cnc::Error naming the first missing cube index.
Proof merge_proofs(const Proof& transform_proof, std::span<const std::optional<Proof>> cube_proofs,
                   const Proof& tautology_proof);

}  // namespace cnc
