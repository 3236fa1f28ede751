// Satisfiability-preserving preprocessing: blocked clause elimination and
// flip-symmetry breaking, with a DRAT transformation proof and model
// reconstruction.
#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cnc/cnf.hpp"
#include "cnc/drat.hpp"

namespace cnc {

struct EliminationRecord {
  Clause clause;
  Literal blocking;
  std::size_t order_index = 0;  ///< position of the clause in the input formula

  friend bool operator==(const EliminationRecord&, const EliminationRecord&) = default;
};

struct BceResult {
  Formula reduced;
  std::vector<EliminationRecord> stack;  ///< in elimination order
};

/// Clause C is blocked on l ∈ C w.r.t. F if every resolvent of C on l with a
/// clause of F \ {C} is tautological.
bool is_blocked(const Formula& f, std::size_t clause_index, Literal l);

/// Removes blocked clauses until fixpoint. Candidates are scanned in formula
/// order; clauses that may have become blocked are re-queued and the lowest
/// pending index is always examined next.
BceResult bce(const Formula& f);

/// Walks the stack backwards and makes the blocking literal true whenever its
/// clause is not satisfied.
PartialAssignment reconstruct(const PartialAssignment& reduced_model,
                              std::span<const EliminationRecord> stack);

/// As above, but first verifies that the model satisfies the reduced formula
/// and throws cnc::Error if it does not.
PartialAssignment reconstruct(const Formula& reduced, const PartialAssignment& reduced_model,
                              std::span<const EliminationRecord> stack);

struct SymmetryBreak {
  Formula formula;            ///< F ∧ (x_pivot), or F when no variable occurs
  std::optional<Var> pivot;   ///< the most frequent variable
};

/// Requires a flip-symmetric formula; throws cnc::Error otherwise.
SymmetryBreak symmetry_break(const Formula& f);

/// Deletion of every eliminated clause (stack order), then the pivot unit.
Proof emit_transform_proof(const Formula& original, std::span<const EliminationRecord> stack,
                           std::optional<Var> pivot);

/// Text stack file: one `<blocking-literal> <clause literals> 0` line per record.
void write_stack(std::ostream& out, std::span<const EliminationRecord> stack);
std::vector<EliminationRecord> parse_stack(std::istream& in);

}  // namespace cnc
