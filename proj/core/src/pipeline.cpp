#include "cnc/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <ostream>
#include <thread>

#include "cnc/cube_codec.hpp"
#include "cnc/dimacs.hpp"
#include "cnc/encoder.hpp"

namespace cnc {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Clause negation(std::span<const Literal> cube) {
  std::vector<Literal> out;
  out.reserve(cube.size());
  for (Literal l : cube) out.push_back(-l);
  return Clause(out);
}

// Leaf cubes of a split together with the selection time summed along each
// root-to-leaf path.
struct TimedLeaf {
  Cube cube;
  double split_time = 0.0;
};

std::vector<TimedLeaf> timed_leaves(const SplitResult& s) {
  std::vector<TimedLeaf> out;
  const auto& t = s.tree;
  struct Frame {
    std::uint32_t node;
    Cube path;
    double time;
  };
  std::vector<Frame> stack{{CubeTree::root, {}, 0.0}};
  while (!stack.empty()) {
    auto f = std::move(stack.back());
    stack.pop_back();
    const auto& n = t.node(f.node);
    double time = f.time + s.stats[f.node].seconds;
    if (n.is_leaf()) {
      out.push_back({std::move(f.path), time});
      continue;
    }
    Cube second = f.path;
    second.push_back(-n.decision);
    f.path.push_back(n.decision);
    stack.push_back({n.second, std::move(second), time});
    stack.push_back({n.first, std::move(f.path), time});
  }
  return out;
}

struct TopOutcome {
  Verdict verdict = Verdict::indeterminate;
  Proof proof;
  std::optional<PartialAssignment> model;
  std::vector<CubeReport> reports;  // one per second-level cube, index filled later
  bool proof_ok = true;
  std::string error;
};

// Resolves the per-leaf clauses ¬(top ∧ path) of a subtree bottom-up into ¬top.
void collapse(const CubeTree& t, std::uint32_t node, const Cube& top, Cube& path, ProofSink& sink) {
  const auto& n = t.node(node);
  if (n.is_leaf()) return;
  path.push_back(n.decision);
  collapse(t, n.first, top, path, sink);
  path.back() = -n.decision;
  collapse(t, n.second, top, path, sink);
  path.pop_back();
  Cube full = top;
  full.insert(full.end(), path.begin(), path.end());
  auto c = negation(full);
  sink.add(c.literals());
}

class Runner {
 public:
  Runner(const PipelineConfig& cfg, const Formula& f, std::atomic<bool>& stop)
      : cfg_(cfg), f_(f), stop_(stop) {}

  TopOutcome operator()(const TimedLeaf& top) const {
    TopOutcome out;
    std::vector<TimedLeaf> subs;
    std::optional<SplitResult> sub_split;
    if (cfg_.two_level) {
      sub_split = split(f_, cfg_.split_options(cfg_.sub_cutoff), top.cube);
      for (auto& leaf : timed_leaves(*sub_split)) {
        Cube full = top.cube;
        full.insert(full.end(), leaf.cube.begin(), leaf.cube.end());
        subs.push_back({std::move(full), top.split_time + leaf.split_time});
      }
    } else {
      subs.push_back(top);
    }

    ProofRecorder rec;
    Solver solver(f_, cfg_.solver, &rec);
    std::vector<std::size_t> segment_end;
    bool all_unsat = true;
    for (const auto& sub : subs) {
      CubeReport rep;
      rep.size = sub.cube.size();
      rep.split_time = sub.split_time;
      if (stop_.load()) {
        out.reports.push_back(rep);
        all_unsat = false;
        segment_end.push_back(rec.proof().size());
        continue;
      }
      auto t0 = Clock::now();
      auto r = solver.solve(sub.cube, true);
      rep.solve_time = since(t0);
      rep.verdict = r.verdict;
      rep.solved = true;
      out.reports.push_back(rep);
      segment_end.push_back(rec.proof().size());
      if (r.verdict == Verdict::sat) {
        out.verdict = Verdict::sat;
        out.model = std::move(r.model);
        stop_.store(true);
        all_unsat = false;
        // Remaining sub-cubes are reported as not solved.
        for (std::size_t k = out.reports.size(); k < subs.size(); ++k) {
          CubeReport skipped;
          skipped.size = subs[k].cube.size();
          skipped.split_time = subs[k].split_time;
          out.reports.push_back(skipped);
          segment_end.push_back(rec.proof().size());
        }
        break;
      }
      if (r.verdict != Verdict::unsat) all_unsat = false;
    }
    if (out.verdict == Verdict::sat) return out;
    if (!all_unsat) {
      out.verdict = Verdict::indeterminate;
      return out;
    }
    out.verdict = Verdict::unsat;
    if (sub_split && sub_split->tree.size() > 1) {
      Cube path;
      collapse(sub_split->tree, CubeTree::root, top.cube, path, rec);
    }
    out.proof = rec.take();

    if (!cfg_.skip_validation) {
      // Check the proof segment of each sub-cube in order against one checker.
      DratChecker checker(f_);
      CheckOptions opts;
      opts.refutation = false;
      std::size_t begin = 0;
      for (std::size_t k = 0; k <= subs.size(); ++k) {
        std::size_t end = k < subs.size() ? segment_end[k] : out.proof.size();
        Proof segment(out.proof.begin() + static_cast<std::ptrdiff_t>(begin),
                      out.proof.begin() + static_cast<std::ptrdiff_t>(end));
        auto t0 = Clock::now();
        auto res = checker.check(segment, opts);
        double dt = since(t0);
        if (k < subs.size()) out.reports[k].validate_time = dt;
        else if (!subs.empty()) out.reports.back().validate_time += dt;
        if (!res.accepted) {
          out.proof_ok = false;
          out.error = "cube proof rejected: " + res.reason;
          return out;
        }
        begin = end;
      }
      // The proof must end up containing ¬top (or ⊥).
      auto goal = negation(top.cube);
      auto key = goal.sorted_key();
      bool found = std::any_of(out.proof.begin(), out.proof.end(), [&](const ProofLine& l) {
        return l.is_addition() && (l.clause.empty() || l.clause.sorted_key() == key);
      });
      if (!found) {
        out.proof_ok = false;
        out.error = "cube proof does not derive the negated cube";
      }
    }
    return out;
  }

 private:
  const PipelineConfig& cfg_;
  const Formula& f_;
  std::atomic<bool>& stop_;
};

std::vector<TopOutcome> solve_all(const PipelineConfig& cfg, const Formula& f,
                                  const std::vector<TimedLeaf>& tops) {
  std::vector<TopOutcome> results(tops.size());
  std::atomic<bool> stop{false};
  std::atomic<std::size_t> next{0};
  Runner runner(cfg, f, stop);
  auto work = [&] {
    for (;;) {
      auto i = next.fetch_add(1);
      if (i >= tops.size()) return;
      try {
        results[i] = runner(tops[i]);
      } catch (const std::exception& e) {
        results[i].error = e.what();
        results[i].proof_ok = false;
        stop.store(true);
      }
    }
  };
  auto nworkers = std::min<std::size_t>(cfg.workers, std::max<std::size_t>(tops.size(), 1));
  if (nworkers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t k = 0; k < nworkers; ++k) pool.emplace_back(work);
  }
  return results;
}

void write_outputs(const PipelineConfig& cfg, const PipelineResult& r, const SplitResult& top) {
  namespace fs = std::filesystem;
  fs::path dir(cfg.output_dir);
  fs::create_directories(dir);
  auto open = [&](const char* name) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw Error("cannot write " + (dir / name).string());
    return out;
  };
  {
    auto out = open("config.conf");
    write_config(out, cfg);
  }
  {
    auto out = open("transformed.cnf");
    write_dimacs(out, r.transformed);
  }
  {
    auto out = open("cubes.icnf");
    write_inccnf(out, r.transformed, r.cubes);
  }
  {
    auto out = open("cubes.tree");
    write_tree(out, top.tree);
  }
  write_ptct_file((dir / "cubes.ptct").string(), top.tree);
  {
    auto out = open("stack.txt");
    write_stack(out, r.stack);
  }
  if (r.proof) {
    auto out = open("proof.drat");
    write_drat(out, *r.proof);
  }
  if (r.model) {
    auto out = open("model.txt");
    out << 'v';
    for (Literal l : r.model->true_literals()) out << ' ' << l.value();
    out << " 0\n";
  }
  {
    auto out = open("cubes.csv");
    write_cube_csv(out, r.report);
  }
  {
    auto out = open("histogram.csv");
    write_histogram_csv(out, r.report);
  }
  {
    auto out = open("phases.csv");
    write_phase_csv(out, r.report);
  }
}

PipelineResult run_impl(const PipelineConfig& cfg, const Formula* generic) {
  try {
    cfg.validate();
  } catch (const Error& e) {
    throw PhaseError("config", e.what());
  }
  PipelineResult r;
  const bool encoder_input = cfg.n.has_value();

  // Encode.
  auto t0 = Clock::now();
  try {
    if (encoder_input) r.original = encode(*cfg.n);
    else if (generic) r.original = *generic;
    else r.original = read_dimacs_file(*cfg.input);
  } catch (const std::exception& e) {
    throw PhaseError("encode", e.what());
  }
  r.report.encode_time = since(t0);

  // Transform.
  t0 = Clock::now();
  Proof transform_proof;
  Formula reduced;
  try {
    if (encoder_input || cfg.generic_bce) {
      auto b = bce(r.original);
      reduced = std::move(b.reduced);
      r.stack = std::move(b.stack);
    } else {
      reduced = r.original;
    }
    if (encoder_input) {
      auto sb = symmetry_break(reduced);
      r.transformed = std::move(sb.formula);
      r.pivot = sb.pivot;
    } else {
      r.transformed = reduced;
    }
    transform_proof = emit_transform_proof(r.original, r.stack, r.pivot);
  } catch (const std::exception& e) {
    throw PhaseError("transform", e.what());
  }
  r.report.transform_time = since(t0);

  // Split.
  t0 = Clock::now();
  SplitResult top;
  std::vector<TimedLeaf> tops;
  try {
    top = split(r.transformed, cfg.split_options(cfg.cutoff));
    tops = timed_leaves(top);
  } catch (const std::exception& e) {
    throw PhaseError("split", e.what());
  }
  for (const auto& t : tops) r.cubes.push_back(t.cube);
  r.report.top_cubes = tops.size();
  r.report.split_time = since(t0);

  // Solve (cube proofs are checked by the workers).
  t0 = Clock::now();
  auto outcomes = solve_all(cfg, r.transformed, tops);
  r.report.solve_time = since(t0);

  std::size_t index = 0;
  for (auto& o : outcomes) {
    for (auto& rep : o.reports) {
      rep.index = index++;
      r.report.histogram[rep.size]++;
      r.report.cubes.push_back(rep);
    }
  }
  for (std::size_t i = 0; i < outcomes.size(); ++i)
    if (!outcomes[i].error.empty() && outcomes[i].verdict != Verdict::unsat)
      throw PhaseError("solve", "cube " + std::to_string(i) + ": " + outcomes[i].error);

  auto sat = std::find_if(outcomes.begin(), outcomes.end(),
                          [](const TopOutcome& o) { return o.verdict == Verdict::sat; });
  bool all_unsat = std::all_of(outcomes.begin(), outcomes.end(),
                               [](const TopOutcome& o) { return o.verdict == Verdict::unsat; });

  t0 = Clock::now();
  if (sat != outcomes.end()) {
    r.verdict = Verdict::sat;
    try {
      auto model = reconstruct(reduced, *sat->model, r.stack);
      if (encoder_input) {
        auto check = check_partition(*cfg.n, Partition::from_assignment(*cfg.n, model));
        if (!std::holds_alternative<PartitionValid>(check))
          throw Error("model contains a monochromatic triple");
      } else if (evaluate(r.original, model) != Evaluation::satisfied) {
        throw Error("model does not satisfy the input formula");
      }
      r.model = std::move(model);
    } catch (const std::exception& e) {
      throw PhaseError("validate", e.what());
    }
  } else if (all_unsat) {
    r.verdict = Verdict::unsat;
    for (std::size_t i = 0; i < outcomes.size(); ++i)
      if (!outcomes[i].proof_ok)
        throw PhaseError("validate", "cube " + std::to_string(i) + ": " + outcomes[i].error);

    auto taut = negate_cubes(r.cubes);
    taut.set_var_bound(std::max(taut.var_bound(), r.transformed.var_bound()));
    ProofRecorder taut_rec;
    SolverOptions taut_opts = cfg.solver;
    taut_opts.conflict_budget = 0;
    if (solve(taut, &taut_rec, taut_opts).verdict != Verdict::unsat)
      throw PhaseError("split", "cubes do not cover the search space");

    std::vector<std::optional<Proof>> cube_proofs;
    for (auto& o : outcomes) cube_proofs.emplace_back(std::move(o.proof));
    r.proof = merge_proofs(transform_proof, cube_proofs, taut_rec.proof());
    if (!cfg.skip_validation) {
      CheckOptions opts;
      opts.refutation = true;
      if (r.pivot) opts.symmetry_units.insert(static_cast<std::int32_t>(*r.pivot));
      r.proof_check = check_proof(r.original, *r.proof, opts);
      if (!r.proof_check->accepted)
        throw PhaseError("validate", "merged proof rejected at line " +
                                         std::to_string(r.proof_check->failed_line) + ": " +
                                         r.proof_check->reason);
    }
  } else {
    r.verdict = Verdict::indeterminate;
  }
  r.report.validate_time = since(t0);

  if (!cfg.output_dir.empty()) {
    try {
      write_outputs(cfg, r, top);
    } catch (const std::exception& e) {
      throw PhaseError("output", e.what());
    }
  }
  return r;
}

}  // namespace

PipelineResult run(const PipelineConfig& cfg) { return run_impl(cfg, nullptr); }

PipelineResult run(const PipelineConfig& cfg, const Formula& generic) {
  PipelineConfig c = cfg;
  if (!c.n) c.input = std::string("<memory>");
  return run_impl(c, c.n ? nullptr : &generic);
}

void write_cube_csv(std::ostream& out, const PhaseReport& r) {
  out << "index,size,split_time,solve_time,validate_time\n";
  for (const auto& c : r.cubes)
    out << c.index << ',' << c.size << ',' << c.split_time << ',' << c.solve_time << ','
        << c.validate_time << '\n';
}

void write_histogram_csv(std::ostream& out, const PhaseReport& r) {
  out << "size,count\n";
  for (auto [size, count] : r.histogram) out << size << ',' << count << '\n';
}

void write_phase_csv(std::ostream& out, const PhaseReport& r) {
  out << "phase,seconds\n"
      << "encode," << r.encode_time << '\n'
      << "transform," << r.transform_time << '\n'
      << "split," << r.split_time << '\n'
      << "solve," << r.solve_time << '\n'
      << "validate," << r.validate_time << '\n';
}

std::map<std::size_t, std::size_t> cube_size_histogram(const std::vector<Cube>& cubes) {
  std::map<std::size_t, std::size_t> h;
  for (const auto& c : cubes) h[c.size()]++;
  return h;
}

}  // namespace cnc
