// End-to-end run: encode (or read), transform, split, solve, validate.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cnc/cdcl.hpp"
#include "cnc/config.hpp"
#include "cnc/drat.hpp"
#include "cnc/transform.hpp"

namespace cnc {

struct CubeReport {
  std::size_t index = 0;
  std::size_t size = 0;  ///< literals in the cube
  double split_time = 0.0;
  double solve_time = 0.0;
  double validate_time = 0.0;
  Verdict verdict = Verdict::indeterminate;
  bool solved = false;  ///< false when skipped after a SAT cube was found
};

struct PhaseReport {
  double encode_time = 0.0;
  double transform_time = 0.0;
  double split_time = 0.0;
  double solve_time = 0.0;
  double validate_time = 0.0;
  std::size_t top_cubes = 0;
  std::vector<CubeReport> cubes;  ///< final (second level when two-level) cubes
  std::map<std::size_t, std::size_t> histogram;  ///< cube size -> count
};

struct PipelineResult {
  Verdict verdict = Verdict::indeterminate;
  Formula original;
  Formula transformed;
  std::vector<EliminationRecord> stack;
  std::optional<Var> pivot;
  std::vector<Cube> cubes;  ///< top-level cubes
  /// UNSAT: transform ++ cube proofs ++ tautology proof.
  std::optional<Proof> proof;
  /// Set when validation ran on the merged proof.
  std::optional<CheckResult> proof_check;
  /// SAT: model of the original formula.
  std::optional<PartialAssignment> model;
  PhaseReport report;
};

/// Failure inside a phase; phase() names it.
class PhaseError : public Error {
 public:
  PhaseError(std::string phase, const std::string& what)
      : Error(phase + ": " + what), phase_(std::move(phase)) {}
  const std::string& phase() const { return phase_; }

 private:
  std::string phase_;
};

PipelineResult run(const PipelineConfig& cfg);
/// As run(), with an already loaded generic formula (cfg.input is ignored).
PipelineResult run(const PipelineConfig& cfg, const Formula& generic);

/// Header `index,size,split_time,solve_time,validate_time`; one row per cube.
void write_cube_csv(std::ostream& out, const PhaseReport& r);
/// Header `size,count`, ascending size.
void write_histogram_csv(std::ostream& out, const PhaseReport& r);
/// Header `phase,seconds`.
void write_phase_csv(std::ostream& out, const PhaseReport& r);

std::map<std::size_t, std::size_t> cube_size_histogram(const std::vector<Cube>& cubes);

}  // namespace cnc
