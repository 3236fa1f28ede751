// The split phase: recursive weight heuristics, look-ahead measurements,
// branching variable selection and cube-tree construction.
#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cnc/cnf.hpp"
#include "cnc/cube_tree.hpp"

namespace cnc {

enum class BranchMode { ptn3sat, rnd3sat, count_bin, count_var };

std::string_view to_string(BranchMode m);
/// Accepts ptn3sat, rnd3sat, count_bin (or #bin, bin), count_var (or #var, var).
BranchMode parse_branch_mode(std::string_view s);

/// Clamped recursive weight heuristic parameters.
struct HeuristicParams {
  double alpha = 8.0;    ///< minimum heuristic value
  double beta = 550.0;   ///< maximum heuristic value
  double gamma = 25.0;   ///< weight of binary clauses
  int iterations = 4;    ///< h := h_iterations

  static HeuristicParams pythagorean() { return {}; }
  static HeuristicParams random_3sat() { return {0.1, 25.0, 3.3, 4}; }
  /// Throws std::invalid_argument unless 0 < alpha ≤ beta, gamma > 0, iterations ≥ 1.
  void validate() const;
};

/// Per-literal heuristic values of the last round plus the mean of each round.
struct HTable {
  std::vector<double> values;  ///< indexed by Literal::code()
  std::vector<double> means;   ///< means[i] = μ_i, i = 0 .. iterations-1

  double operator()(Literal l) const {
    return l.code() < values.size() ? values[l.code()] : 1.0;
  }
};

struct LookaheadMeasure {
  double weight = 0.0;          ///< Σ h(ȳ)·h(z̄) over new binary clauses (y ∨ z)
  std::size_t assigned = 0;     ///< variables assigned, including the look-ahead literal
  std::size_t new_binaries = 0;
  bool refuted = false;
};

/// Leaf condition for split(). At least one of the thresholds may be set;
/// the depth bound always applies.
struct CutoffPolicy {
  std::optional<std::size_t> min_binaries;    ///< leaf once binaries ≥ this
  std::optional<std::size_t> max_unassigned;  ///< leaf once free variables ≤ this
  std::size_t max_depth = 64;

  /// "bin:<k>", "var:<k>" or "depth:<k>"; comma-separated combinations allowed.
  static CutoffPolicy parse(std::string_view spec);
  std::string to_string() const;
};

struct SplitOptions {
  BranchMode mode = BranchMode::ptn3sat;
  HeuristicParams ptn_params = HeuristicParams::pythagorean();
  HeuristicParams rnd_params = HeuristicParams::random_3sat();
  CutoffPolicy cutoff;
  /// Fraction of candidates (ranked by h(x)·h(x̄)) that get a look-ahead.
  double preselection = 1.0;
};

enum class NodeOutcome : std::uint8_t {
  branched,
  cutoff_binaries,
  cutoff_unassigned,
  cutoff_depth,
  exhausted,  ///< every clause satisfied, nothing to branch on
  refuted
};

struct NodeStats {
  std::size_t binaries = 0;    ///< residual binary clauses on entry
  std::size_t unassigned = 0;  ///< unassigned occurring variables on entry
  std::size_t depth = 0;
  std::size_t failed_literals = 0;
  double seconds = 0.0;  ///< time spent selecting at this node
  NodeOutcome outcome = NodeOutcome::branched;
};

struct SplitResult {
  CubeTree tree;
  std::vector<NodeStats> stats;  ///< parallel to tree.nodes() (preorder)
};

/// Look-ahead state over one formula: an assignment with trail-based undo and
/// per-clause true/false literal counters.
class LookaheadSolver {
 public:
  explicit LookaheadSolver(const Formula& f);
  ~LookaheadSolver();
  LookaheadSolver(LookaheadSolver&&) noexcept;
  LookaheadSolver& operator=(LookaheadSolver&&) noexcept;

  /// Assigns l and propagates; returns false (state left in conflict) on a
  /// conflict. Call backtrack() to recover.
  bool assign(Literal l);
  bool in_conflict() const;
  std::size_t trail_size() const;
  void backtrack(std::size_t trail_size);

  Truth value(Literal l) const;
  PartialAssignment assignment() const;

  std::size_t residual_binaries() const;
  std::size_t unassigned_occurring() const;
  /// Unassigned variables occurring in some unsatisfied clause.
  std::vector<Var> candidates() const;

  /// Throws cnc::Error if an unsatisfied clause has more than three free
  /// literals.
  HTable compute_h(const HeuristicParams& p) const;

  /// Tentative assignment of l; the state is restored before returning.
  LookaheadMeasure look_ahead(Literal l, const HTable& h);

  struct Selection {
    std::optional<Var> variable;  ///< empty if the node is refuted or exhausted
    bool refuted = false;
    std::size_t failed_literals = 0;
  };
  /// Runs look-aheads to fixpoint, fixing the complements of failed literals
  /// in the current state, and returns the variable maximizing the mode's
  /// score product (ties to the smallest index).
  Selection select(const SplitOptions& opts);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

HTable compute_h(const Formula& f, const PartialAssignment& tau, const HeuristicParams& p);
LookaheadMeasure look_ahead(const Formula& f, const PartialAssignment& tau, Literal l,
                            const HTable& h);
/// Throws cnc::Error when there is no candidate variable (including when
/// failed literals refute the node).
Var select_branch(const Formula& f, const PartialAssignment& tau, const SplitOptions& opts);

/// Depth-first cube-tree construction. Branches on the positive literal
/// first. `assumptions` restrict the root (second-level splitting).
SplitResult split(const Formula& f, const SplitOptions& opts,
                  std::span<const Literal> assumptions = {});

}  // namespace cnc
