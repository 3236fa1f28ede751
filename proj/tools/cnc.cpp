// cnc: command line front end for the cube-and-conquer pipeline.
//
// Exit codes: 0 SAT (or success), 20 UNSAT, 30 indeterminate, 1 error.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cnc/cdcl.hpp"
#include "cnc/config.hpp"
#include "cnc/cube_codec.hpp"
#include "cnc/cube_tree.hpp"
#include "cnc/dimacs.hpp"
#include "cnc/drat.hpp"
#include "cnc/encoder.hpp"
#include "cnc/lookahead.hpp"
#include "cnc/pipeline.hpp"
#include "cnc/transform.hpp"

namespace {

using namespace cnc;

constexpr int kSat = 0;
constexpr int kUnsat = 20;
constexpr int kUnknown = 30;
constexpr int kError = 1;

int exit_code(Verdict v) {
  switch (v) {
    case Verdict::sat: return kSat;
    case Verdict::unsat: return kUnsat;
    case Verdict::indeterminate: return kUnknown;
  }
  return kError;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path + " for writing");
  return out;
}

// Writes to a file, or to stdout when the path is empty or "-".
template <class F>
void emit(const std::string& path, F&& write) {
  if (path.empty() || path == "-") {
    write(std::cout);
  } else {
    auto out = open_out(path);
    write(out);
  }
}

void print_model(std::ostream& out, const PartialAssignment& m) {
  out << 'v';
  for (Literal l : m.true_literals()) out << ' ' << l.value();
  out << " 0\n";
}

void print_status(Verdict v) {
  switch (v) {
    case Verdict::sat: std::cout << "s SATISFIABLE\n"; break;
    case Verdict::unsat: std::cout << "s UNSATISFIABLE\n"; break;
    case Verdict::indeterminate: std::cout << "s UNKNOWN\n"; break;
  }
}

struct SplitArgs {
  std::string in, out, tree, nodes_csv, mode = "ptn3sat", cutoff = "bin:3000";
  std::optional<double> alpha, beta, gamma, preselection;
  std::optional<int> iterations;
};

int cmd_split(const SplitArgs& a) {
  auto f = read_dimacs_file(a.in);
  SplitOptions o;
  o.mode = parse_branch_mode(a.mode);
  o.cutoff = CutoffPolicy::parse(a.cutoff);
  auto& p = o.mode == BranchMode::rnd3sat ? o.rnd_params : o.ptn_params;
  if (a.alpha) p.alpha = *a.alpha;
  if (a.beta) p.beta = *a.beta;
  if (a.gamma) p.gamma = *a.gamma;
  if (a.iterations) p.iterations = *a.iterations;
  if (a.preselection) o.preselection = *a.preselection;
  auto r = split(f, o);
  auto cs = cubes(r.tree);
  emit(a.out, [&](std::ostream& out) { write_inccnf(out, f, cs); });
  if (!a.tree.empty()) {
    auto out = open_out(a.tree);
    write_tree(out, r.tree);
  }
  if (!a.nodes_csv.empty()) {
    auto out = open_out(a.nodes_csv);
    out << "node,depth,binaries,unassigned,failed_literals,seconds,outcome\n";
    static const char* names[] = {"branched", "cutoff_binaries", "cutoff_unassigned",
                                  "cutoff_depth", "exhausted", "refuted"};
    for (std::size_t i = 0; i < r.stats.size(); ++i) {
      const auto& s = r.stats[i];
      out << i << ',' << s.depth << ',' << s.binaries << ',' << s.unassigned << ','
          << s.failed_literals << ',' << s.seconds << ','
          << names[static_cast<int>(s.outcome)] << '\n';
    }
  }
  std::cerr << "c " << cs.size() << " cubes, " << r.tree.size() << " nodes\n";
  return 0;
}

struct SolveArgs {
  std::string in, cubes, proof, results_csv;
  std::uint64_t budget = 0;
  double decay = 0.95;
  bool self_check = false, quiet = false;
};

int cmd_solve(const SolveArgs& a) {
  auto f = read_dimacs_file(a.in);
  SolverOptions o;
  o.conflict_budget = a.budget;
  o.var_decay = a.decay;
  o.self_check = a.self_check;
  std::optional<std::ofstream> proof_file;
  std::optional<DratWriter> writer;
  if (!a.proof.empty()) {
    proof_file = open_out(a.proof);
    writer.emplace(*proof_file);
  }
  ProofSink* sink = writer ? &*writer : nullptr;

  if (a.cubes.empty()) {
    auto r = solve(f, sink, o);
    print_status(r.verdict);
    if (r.verdict == Verdict::sat && !a.quiet) print_model(std::cout, r.model);
    std::cerr << "c conflicts " << r.stats.conflicts << " decisions " << r.stats.decisions
              << " propagations " << r.stats.propagations << '\n';
    return exit_code(r.verdict);
  }

  std::ifstream cin_(a.cubes);
  if (!cin_) throw Error("cannot open " + a.cubes);
  auto icnf = parse_inccnf(cin_);
  if (icnf.formula.var_bound() > f.var_bound()) f.set_var_bound(icnf.formula.var_bound());
  auto results = solve_incremental(f, icnf.cubes, sink, o);
  std::optional<std::ofstream> csv;
  if (!a.results_csv.empty()) {
    csv = open_out(a.results_csv);
    *csv << "index,size,verdict,conflicts,decisions\n";
  }
  bool any_sat = false, all_unsat = true;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    std::cout << "c cube " << i << ' ' << to_string(r.verdict) << '\n';
    if (csv)
      *csv << i << ',' << icnf.cubes[i].size() << ',' << to_string(r.verdict) << ','
           << r.stats.conflicts << ',' << r.stats.decisions << '\n';
    if (r.verdict == Verdict::sat && !any_sat) {
      any_sat = true;
      if (!a.quiet) print_model(std::cout, r.model);
    }
    if (r.verdict != Verdict::unsat) all_unsat = false;
  }
  Verdict v = any_sat ? Verdict::sat : all_unsat ? Verdict::unsat : Verdict::indeterminate;
  // All cubes refuted only shows F ∧ φᵢ is UNSAT for each i; whether the
  // cubes cover the space is the tautology check's job.
  print_status(v);
  return exit_code(v);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cube-and-conquer SAT pipeline for the Pythagorean triples problem"};
  app.require_subcommand(1);
  int rc = 0;

  // encode
  auto* enc = app.add_subcommand("encode", "write the partition formula for 1..n as DIMACS");
  std::uint64_t enc_n = 0;
  std::string enc_out;
  enc->add_option("--n", enc_n, "upper bound n")->required()->check(CLI::PositiveNumber);
  enc->add_option("--out", enc_out, "output .cnf (default stdout)");
  enc->callback([&] {
    auto f = encode(enc_n);
    emit(enc_out, [&](std::ostream& out) { write_dimacs(out, f); });
    auto st = occurrence_stats(f);
    std::cerr << "c " << st.occurring << " occurring variables, " << f.size() << " clauses\n";
  });

  // transform
  auto* tr = app.add_subcommand("transform", "blocked clause elimination and symmetry breaking");
  std::string tr_in, tr_out, tr_proof, tr_stack;
  bool tr_no_bce = false, tr_no_sym = false;
  tr->add_option("--in", tr_in, "input .cnf")->required();
  tr->add_option("--out", tr_out, "transformed .cnf (default stdout)");
  tr->add_option("--proof", tr_proof, "transformation proof (DRAT)");
  tr->add_option("--stack", tr_stack, "elimination stack for model reconstruction");
  tr->add_flag("--no-bce", tr_no_bce, "skip blocked clause elimination");
  tr->add_flag("--no-symmetry", tr_no_sym, "skip symmetry breaking");
  tr->callback([&] {
    auto f = read_dimacs_file(tr_in);
    BceResult b{f, {}};
    if (!tr_no_bce) b = bce(f);
    std::optional<Var> pivot;
    Formula out_f = b.reduced;
    if (!tr_no_sym) {
      auto sb = symmetry_break(b.reduced);
      out_f = std::move(sb.formula);
      pivot = sb.pivot;
    }
    emit(tr_out, [&](std::ostream& out) { write_dimacs(out, out_f); });
    if (!tr_proof.empty()) {
      auto out = open_out(tr_proof);
      write_drat(out, emit_transform_proof(f, b.stack, pivot));
    }
    if (!tr_stack.empty()) {
      auto out = open_out(tr_stack);
      write_stack(out, b.stack);
    }
    auto st = occurrence_stats(b.reduced);
    std::cerr << "c eliminated " << b.stack.size() << " clauses; " << st.occurring
              << " occurring variables, " << b.reduced.size() << " clauses remain";
    if (pivot) std::cerr << "; pivot " << *pivot;
    std::cerr << '\n';
  });

  // split
  auto* sp = app.add_subcommand("split", "look-ahead splitting into cubes");
  SplitArgs sa;
  sp->add_option("--in", sa.in, "input .cnf")->required();
  sp->add_option("--out", sa.out, "output .icnf (default stdout)");
  sp->add_option("--tree", sa.tree, "write the cube tree");
  sp->add_option("--nodes-csv", sa.nodes_csv, "per-node statistics");
  sp->add_option("--mode", sa.mode, "ptn3sat, rnd3sat, count_bin (#bin), count_var (#var)");
  sp->add_option("--cutoff", sa.cutoff, "bin:<k>, var:<k>, depth:<k>, comma separated");
  sp->add_option("--alpha", sa.alpha);
  sp->add_option("--beta", sa.beta);
  sp->add_option("--gamma", sa.gamma);
  sp->add_option("--iterations", sa.iterations);
  sp->add_option("--preselection", sa.preselection, "fraction of candidates looked ahead");
  sp->callback([&] { rc = cmd_split(sa); });

  // solve
  auto* so = app.add_subcommand("solve", "CDCL solving, optionally under cubes");
  SolveArgs sv;
  so->add_option("--in", sv.in, "input .cnf")->required();
  so->add_option("--cubes", sv.cubes, "inccnf file whose cubes are solved incrementally");
  so->add_option("--proof", sv.proof, "DRAT output");
  so->add_option("--conflict-budget", sv.budget, "conflicts per solve call, 0 = unlimited");
  so->add_option("--decay", sv.decay, "variable activity decay");
  so->add_option("--results-csv", sv.results_csv, "per-cube results");
  so->add_flag("--self-check", sv.self_check, "RUP-check every lemma when it is learned");
  so->add_flag("--quiet", sv.quiet, "omit the model line");
  so->callback([&] { rc = cmd_solve(sv); });

  // check
  auto* ck = app.add_subcommand("check", "DRAT proof checking");
  std::string ck_formula, ck_proof;
  bool ck_refutation = false, ck_any_pivot = false;
  std::vector<int> ck_sym;
  ck->add_option("--formula", ck_formula, "input .cnf")->required();
  ck->add_option("--proof", ck_proof, "DRAT proof")->required();
  ck->add_flag("--refutation", ck_refutation, "require the empty clause");
  ck->add_flag("--any-pivot", ck_any_pivot, "try every literal as RAT pivot");
  ck->add_option("--symmetry-unit", ck_sym, "unit accepted when the formula is flip-symmetric");
  ck->callback([&] {
    auto f = read_dimacs_file(ck_formula);
    auto p = read_drat_file(ck_proof);
    CheckOptions o;
    o.refutation = ck_refutation;
    o.any_pivot = ck_any_pivot;
    o.symmetry_units.insert(ck_sym.begin(), ck_sym.end());
    auto r = check_proof(f, p, o);
    for (const auto& w : r.warnings) std::cerr << "c warning: " << w << '\n';
    std::cerr << "c " << r.lines_checked << " lines checked, " << r.rat_additions
              << " needed RAT, " << r.symmetry_additions << " symmetry units\n";
    if (r.accepted) {
      std::cout << "s VERIFIED\n";
      rc = 0;
    } else {
      std::cout << "s NOT VERIFIED\n"
                << "c line " << r.failed_line << ": " << r.reason << '\n';
      rc = kError;
    }
  });

  // pack-cubes / unpack-cubes
  auto* pk = app.add_subcommand("pack-cubes", "compress a cube tree to .ptct");
  std::string pk_tree, pk_out;
  pk->add_option("--tree", pk_tree, "tree file from split --tree")->required();
  pk->add_option("--out", pk_out, "output .ptct")->required();
  pk->callback([&] {
    std::ifstream in(pk_tree);
    if (!in) throw Error("cannot open " + pk_tree);
    auto t = parse_tree(in);
    write_ptct_file(pk_out, t);
    std::cerr << "c " << t.size() << " nodes, " << t.leaf_count() << " cubes, "
              << encode_tree(t).size() << " bytes\n";
  });
  auto* up = app.add_subcommand("unpack-cubes", "expand a .ptct file into inccnf");
  std::string up_in, up_formula, up_out;
  up->add_option("--in", up_in, "input .ptct")->required();
  up->add_option("--formula", up_formula, "formula to prepend")->required();
  up->add_option("--out", up_out, "output .icnf (default stdout)");
  up->callback([&] {
    auto t = read_ptct_file(up_in);
    auto f = read_dimacs_file(up_formula);
    emit(up_out, [&](std::ostream& out) { write_inccnf(out, f, cubes(t)); });
  });

  // pipeline
  auto* pl = app.add_subcommand("pipeline", "encode/read, transform, split, solve, validate");
  std::string pl_config, pl_in, pl_mode, pl_cutoff, pl_sub, pl_outdir;
  std::optional<std::uint64_t> pl_n, pl_budget;
  std::optional<std::size_t> pl_workers;
  bool pl_two = false, pl_bce = false, pl_skip = false;
  std::vector<std::string> pl_set;
  pl->add_option("--config", pl_config, "key=value configuration file");
  auto* opt_n = pl->add_option("--n", pl_n, "encode 1..n");
  pl->add_option("--in", pl_in, "generic DIMACS input")->excludes(opt_n);
  pl->add_option("--mode", pl_mode);
  pl->add_option("--cutoff", pl_cutoff);
  pl->add_flag("--two-level", pl_two, "re-split every cube with sub_cutoff");
  pl->add_option("--sub-cutoff", pl_sub);
  pl->add_flag("--bce", pl_bce, "blocked clause elimination on generic input");
  pl->add_option("--workers", pl_workers);
  pl->add_option("--conflict-budget", pl_budget);
  pl->add_flag("--skip-validation", pl_skip);
  pl->add_option("--out-dir", pl_outdir, "write cubes, proof and CSV reports here");
  pl->add_option("--set", pl_set, "extra key=value settings");
  pl->callback([&] {
    PipelineConfig cfg;
    if (!pl_config.empty()) apply_config_file(pl_config, cfg);
    for (const auto& kv : pl_set) {
      auto eq = kv.find('=');
      if (eq == std::string::npos) throw Error("--set expects key=value, got " + kv);
      apply_setting(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (pl_n) apply_setting(cfg, "n", std::to_string(*pl_n));
    if (!pl_in.empty()) apply_setting(cfg, "input", pl_in);
    if (!pl_mode.empty()) apply_setting(cfg, "mode", pl_mode);
    if (!pl_cutoff.empty()) apply_setting(cfg, "cutoff", pl_cutoff);
    if (!pl_sub.empty()) apply_setting(cfg, "sub_cutoff", pl_sub);
    if (pl_two) cfg.two_level = true;
    if (pl_bce) cfg.generic_bce = true;
    if (pl_skip) cfg.skip_validation = true;
    if (pl_workers) cfg.workers = *pl_workers;
    if (pl_budget) cfg.solver.conflict_budget = *pl_budget;
    if (!pl_outdir.empty()) cfg.output_dir = pl_outdir;
    auto r = run(cfg);
    const auto& rep = r.report;
    std::cerr << "c phases: encode " << rep.encode_time << "s, transform " << rep.transform_time
              << "s, split " << rep.split_time << "s, solve " << rep.solve_time
              << "s, validate " << rep.validate_time << "s\n"
              << "c " << rep.top_cubes << " top-level cubes, " << rep.cubes.size() << " cubes in total\n";
    if (r.proof_check) std::cerr << "c merged proof: " << r.proof->size() << " lines, accepted\n";
    print_status(r.verdict);
    rc = exit_code(r.verdict);
  });

  // backbone
  auto* bb = app.add_subcommand("backbone", "literals true in every model");
  std::string bb_in;
  std::uint64_t bb_budget = 0;
  bb->add_option("--in", bb_in, "input .cnf")->required();
  bb->add_option("--conflict-budget", bb_budget);
  bb->callback([&] {
    auto f = read_dimacs_file(bb_in);
    SolverOptions o;
    o.conflict_budget = bb_budget;
    if (solve(f, nullptr, o).verdict == Verdict::unsat) {
      std::cerr << "c formula is unsatisfiable; no backbone\n";
      print_status(Verdict::unsat);
      rc = kUnsat;
      return;
    }
    std::vector<Literal> b;
    try {
      b = backbone(f, o);
    } catch (const BudgetExhausted& e) {
      std::cerr << "c " << e.what() << '\n';
      print_status(Verdict::indeterminate);
      rc = exit_code(Verdict::indeterminate);
      return;
    }
    std::cout << "c backbone size " << b.size() << "\nb";
    for (Literal l : b) std::cout << ' ' << l.value();
    std::cout << " 0\n";
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kError;
  } catch (const PhaseError& e) {
    std::cerr << "error [" << e.phase() << "]: " << e.what() << '\n';
    return kError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kError;
  }
  return rc;
}
