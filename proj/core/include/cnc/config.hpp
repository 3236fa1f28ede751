// Run configuration: every tunable with its default, and the key=value file
// format used by the CLI.
#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "cnc/cdcl.hpp"
#include "cnc/lookahead.hpp"

namespace cnc {

struct PipelineConfig {
  // Input: exactly one of these.
  std::optional<std::uint64_t> n;    ///< encode the triples problem up to n
  std::optional<std::string> input;  ///< generic DIMACS file

  BranchMode mode = BranchMode::ptn3sat;
  HeuristicParams ptn_params = HeuristicParams::pythagorean();
  HeuristicParams rnd_params = HeuristicParams::random_3sat();
  double preselection = 1.0;

  CutoffPolicy cutoff = CutoffPolicy::parse("bin:3000");
  bool two_level = false;
  CutoffPolicy sub_cutoff = CutoffPolicy::parse("var:3450");

  /// BCE on generic DIMACS input (encoder input always gets BCE).
  bool generic_bce = false;

  SolverOptions solver;  ///< var_decay 0.95, restart_base 100, no budget
  std::size_t workers = 1;

  /// Skip checking of cube proofs and the merged proof.
  bool skip_validation = false;

  /// Output directory for cubes, proofs and CSV reports; empty = none.
  std::string output_dir;

  /// Throws cnc::Error describing the first violated constraint.
  void validate() const;

  SplitOptions split_options(const CutoffPolicy& c) const;
};

/// Lines are `key = value`; `#` starts a comment. Keys:
///   n, input, mode, alpha, beta, gamma, iterations, rnd_alpha, rnd_beta,
///   rnd_gamma, preselection, cutoff, two_level, sub_cutoff, bce, var_decay,
///   clause_decay, restart_base, conflict_budget, workers, skip_validation,
///   output_dir
/// Unknown keys and malformed values raise ParseError with the line number.
void apply_config(std::istream& in, PipelineConfig& cfg);
void apply_config_file(const std::filesystem::path& path, PipelineConfig& cfg);
/// Applies a single key/value pair (line used for error messages).
void apply_setting(PipelineConfig& cfg, std::string_view key, std::string_view value,
                   std::size_t line = 0);
/// Writes every key with its current value; apply_config() reads it back.
void write_config(std::ostream& out, const PipelineConfig& cfg);

}  // namespace cnc
