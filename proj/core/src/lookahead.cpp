#include "cnc/lookahead.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <sstream>

#include "cnc/error.hpp"
#include "text_util.hpp"

namespace cnc {

std::string_view to_string(BranchMode m) {
  switch (m) {
    case BranchMode::ptn3sat: return "ptn3sat";
    case BranchMode::rnd3sat: return "rnd3sat";
    case BranchMode::count_bin: return "count_bin";
    case BranchMode::count_var: return "count_var";
  }
  return "?";
}

BranchMode parse_branch_mode(std::string_view s) {
  if (s == "ptn3sat" || s == "ptn") return BranchMode::ptn3sat;
  if (s == "rnd3sat" || s == "rnd") return BranchMode::rnd3sat;
  if (s == "count_bin" || s == "#bin" || s == "bin") return BranchMode::count_bin;
  if (s == "count_var" || s == "#var" || s == "var") return BranchMode::count_var;
  throw Error("unknown heuristic mode '" + std::string(s) + "'");
}

void HeuristicParams::validate() const {
  if (!(alpha > 0.0) || !(alpha <= beta))
    throw std::invalid_argument("heuristic params need 0 < alpha <= beta");
  if (!(gamma > 0.0)) throw std::invalid_argument("heuristic params need gamma > 0");
  if (iterations < 1) throw std::invalid_argument("heuristic params need iterations >= 1");
}

CutoffPolicy CutoffPolicy::parse(std::string_view spec) {
  CutoffPolicy p;
  std::size_t start = 0;
  bool any = false;
  while (start <= spec.size()) {
    auto end = spec.find(',', start);
    if (end == std::string_view::npos) end = spec.size();
    auto part = spec.substr(start, end - start);
    auto colon = part.find(':');
    if (colon == std::string_view::npos) throw Error("cutoff '" + std::string(part) + "' lacks ':'");
    auto key = part.substr(0, colon);
    auto v = detail::parse_int(part.substr(colon + 1), 0);
    if (v < 0) throw Error("cutoff threshold must be non-negative");
    auto value = static_cast<std::size_t>(v);
    if (key == "bin") p.min_binaries = value;
    else if (key == "var") p.max_unassigned = value;
    else if (key == "depth") p.max_depth = value;
    else throw Error("unknown cutoff kind '" + std::string(key) + "' (use bin, var or depth)");
    any = true;
    start = end + 1;
  }
  if (!any) throw Error("empty cutoff specification");
  return p;
}

std::string CutoffPolicy::to_string() const {
  std::ostringstream os;
  if (min_binaries) os << "bin:" << *min_binaries << ',';
  if (max_unassigned) os << "var:" << *max_unassigned << ',';
  os << "depth:" << max_depth;
  return os.str();
}

struct LookaheadSolver::Impl {
  Var var_bound = 0;
  std::vector<std::vector<Literal>> clauses;
  std::vector<std::vector<std::uint32_t>> occ;  // by literal code
  std::vector<std::uint32_t> true_count, false_count;
  std::vector<std::int8_t> values;  // by literal code
  std::vector<bool> occurring;      // by variable
  std::vector<Literal> trail;
  std::size_t qhead = 0;
  bool conflict = false;
  bool root_conflict = false;

  // Look-ahead bookkeeping.
  std::vector<std::uint32_t> touch_stamp;
  std::vector<std::uint32_t> false_before;
  std::vector<std::uint32_t> touched;
  std::uint32_t stamp = 0;
  bool recording = false;

  explicit Impl(const Formula& f) : var_bound(f.var_bound()) {
    std::size_t codes = 2 * (static_cast<std::size_t>(var_bound) + 1);
    occ.resize(codes);
    values.assign(codes, 0);
    occurring.assign(static_cast<std::size_t>(var_bound) + 1, false);
    for (const auto& c : f) {
      if (c.empty()) root_conflict = true;
      if (c.tautological()) continue;
      auto id = static_cast<std::uint32_t>(clauses.size());
      clauses.emplace_back(c.begin(), c.end());
      for (Literal l : c) {
        occ[l.code()].push_back(id);
        occurring[l.var()] = true;
      }
    }
    true_count.assign(clauses.size(), 0);
    false_count.assign(clauses.size(), 0);
    touch_stamp.assign(clauses.size(), 0);
    false_before.assign(clauses.size(), 0);
    conflict = root_conflict;
    if (!conflict)
      for (const auto& c : clauses)
        if (c.size() == 1 && !enqueue(c[0])) break;
    if (!conflict) propagate();
    root_conflict = conflict;
  }

  Truth val(Literal l) const {
    auto v = values[l.code()];
    return v > 0 ? Truth::true_ : v < 0 ? Truth::false_ : Truth::unassigned;
  }

  bool enqueue(Literal l) {
    auto v = values[l.code()];
    if (v > 0) return true;
    if (v < 0) {
      conflict = true;
      return false;
    }
    values[l.code()] = 1;
    values[(-l).code()] = -1;
    trail.push_back(l);
    return true;
  }

  void propagate() {
    while (!conflict && qhead < trail.size()) {
      Literal p = trail[qhead++];
      for (auto id : occ[p.code()]) ++true_count[id];
      for (auto id : occ[(-p).code()]) {
        if (recording && touch_stamp[id] != stamp) {
          touch_stamp[id] = stamp;
          false_before[id] = false_count[id];
          touched.push_back(id);
        }
        ++false_count[id];
        if (conflict || true_count[id] > 0) continue;
        const auto& c = clauses[id];
        if (c.size() - false_count[id] > 1) continue;
        // Counters of queued-but-unprocessed literals lag; scan the values.
        Literal unit{};
        std::size_t open = 0;
        bool sat = false;
        for (Literal l : c) {
          auto t = val(l);
          if (t == Truth::true_) {
            sat = true;
            break;
          }
          if (t == Truth::unassigned) {
            unit = l;
            ++open;
          }
        }
        if (sat || open > 1) continue;
        if (open == 0) conflict = true;
        else enqueue(unit);
      }
    }
  }

  bool assign(Literal l) {
    if (conflict) return false;
    if (!enqueue(l)) return false;
    propagate();
    return !conflict;
  }

  void backtrack(std::size_t size) {
    while (trail.size() > size) {
      Literal l = trail.back();
      trail.pop_back();
      if (trail.size() < qhead) {
        for (auto id : occ[l.code()]) --true_count[id];
        for (auto id : occ[(-l).code()]) --false_count[id];
      }
      values[l.code()] = 0;
      values[(-l).code()] = 0;
    }
    qhead = std::min(qhead, trail.size());
    conflict = root_conflict;
  }

  bool satisfied(std::uint32_t id) const { return true_count[id] > 0; }
  std::size_t free_size(std::uint32_t id) const { return clauses[id].size() - false_count[id]; }

  std::size_t residual_binaries() const {
    std::size_t n = 0;
    for (std::uint32_t id = 0; id < clauses.size(); ++id)
      if (!satisfied(id) && free_size(id) == 2) ++n;
    return n;
  }

  std::size_t unassigned_occurring() const {
    std::size_t n = 0;
    for (Var v = 1; v <= var_bound; ++v)
      if (occurring[v] && values[Literal::positive(v).code()] == 0) ++n;
    return n;
  }

  std::vector<bool> residual_vars() const {
    std::vector<bool> in(static_cast<std::size_t>(var_bound) + 1, false);
    for (std::uint32_t id = 0; id < clauses.size(); ++id) {
      if (satisfied(id)) continue;
      for (Literal l : clauses[id])
        if (val(l) == Truth::unassigned) in[l.var()] = true;
    }
    return in;
  }

  std::vector<Var> candidates() const {
    auto in = residual_vars();
    std::vector<Var> out;
    for (Var v = 1; v <= var_bound; ++v)
      if (in[v]) out.push_back(v);
    return out;
  }

  HTable compute_h(const HeuristicParams& p) const {
    p.validate();
    const std::size_t codes = 2 * (static_cast<std::size_t>(var_bound) + 1);
    // Residual clauses as lists of free literals.
    std::vector<std::array<Literal, 3>> ternary;
    std::vector<std::array<Literal, 2>> binary;
    std::vector<bool> in_var(static_cast<std::size_t>(var_bound) + 1, false);
    for (std::uint32_t id = 0; id < clauses.size(); ++id) {
      if (satisfied(id)) continue;
      Literal free[3];
      std::size_t k = 0;
      for (Literal l : clauses[id]) {
        if (val(l) != Truth::unassigned) continue;
        if (k == 3)
          throw Error("heuristic undefined: residual clause with more than three free literals");
        free[k++] = l;
      }
      for (std::size_t i = 0; i < k; ++i) in_var[free[i].var()] = true;
      if (k == 3) ternary.push_back({free[0], free[1], free[2]});
      else if (k == 2) binary.push_back({free[0], free[1]});
    }
    std::size_t nvars = 0;
    for (Var v = 1; v <= var_bound; ++v)
      if (in_var[v]) ++nvars;

    HTable t;
    t.values.assign(codes, 1.0);
    std::vector<double> next(codes, 0.0);
    for (int round = 0; round < p.iterations; ++round) {
      double sum = 0.0;
      for (Var v = 1; v <= var_bound; ++v)
        if (in_var[v])
          sum += t.values[Literal::positive(v).code()] + t.values[Literal::negative(v).code()];
      const double mu = nvars ? sum / (2.0 * static_cast<double>(nvars)) : 1.0;
      t.means.push_back(mu);
      std::fill(next.begin(), next.end(), 0.0);
      auto w = [&](Literal y) { return t.values[(-y).code()] / mu; };
      for (const auto& c : ternary) {
        next[c[0].code()] += w(c[1]) * w(c[2]);
        next[c[1].code()] += w(c[0]) * w(c[2]);
        next[c[2].code()] += w(c[0]) * w(c[1]);
      }
      for (const auto& c : binary) {
        next[c[0].code()] += p.gamma * w(c[1]);
        next[c[1].code()] += p.gamma * w(c[0]);
      }
      for (Var v = 1; v <= var_bound; ++v) {
        if (!in_var[v]) continue;
        for (Literal l : {Literal::positive(v), Literal::negative(v)})
          t.values[l.code()] = std::max(p.alpha, std::min(p.beta, next[l.code()]));
      }
    }
    return t;
  }

  LookaheadMeasure look_ahead(Literal l, const HTable& h) {
    LookaheadMeasure m;
    if (conflict) {
      m.refuted = true;
      return m;
    }
    if (val(l) != Truth::unassigned) throw std::logic_error("look_ahead on an assigned literal");
    const std::size_t mark = trail.size();
    ++stamp;
    if (stamp == 0) {
      std::fill(touch_stamp.begin(), touch_stamp.end(), 0);
      stamp = 1;
    }
    touched.clear();
    recording = true;
    bool ok = assign(l);
    recording = false;
    m.assigned = trail.size() - mark;
    if (!ok) {
      m.refuted = true;
    } else {
      for (auto id : touched) {
        if (satisfied(id)) continue;
        if (free_size(id) != 2) continue;
        if (clauses[id].size() - false_before[id] <= 2) continue;  // was already binary
        ++m.new_binaries;
        Literal pair[2];
        std::size_t k = 0;
        for (Literal x : clauses[id])
          if (val(x) == Truth::unassigned) pair[k++] = x;
        m.weight += h(-pair[0]) * h(-pair[1]);
      }
    }
    backtrack(mark);
    return m;
  }

  static double score(BranchMode mode, const LookaheadMeasure& m) {
    switch (mode) {
      case BranchMode::ptn3sat:
      case BranchMode::rnd3sat: return m.weight;
      case BranchMode::count_bin: return static_cast<double>(m.new_binaries);
      case BranchMode::count_var: return static_cast<double>(m.assigned);
    }
    return 0.0;
  }

  Selection select(const SplitOptions& opts) {
    Selection sel;
    const bool weighted = opts.mode == BranchMode::ptn3sat || opts.mode == BranchMode::rnd3sat;
    const HeuristicParams& params =
        opts.mode == BranchMode::rnd3sat ? opts.rnd_params : opts.ptn_params;
    while (true) {
      if (conflict) {
        sel.refuted = true;
        sel.variable.reset();
        return sel;
      }
      auto cands = candidates();
      if (cands.empty()) return sel;
      HTable h;
      if (weighted || opts.preselection < 1.0) h = compute_h(params);
      if (opts.preselection < 1.0) {
        std::stable_sort(cands.begin(), cands.end(), [&](Var a, Var b) {
          return h(Literal::positive(a)) * h(Literal::negative(a)) >
                 h(Literal::positive(b)) * h(Literal::negative(b));
        });
        auto keep = static_cast<std::size_t>(
            std::ceil(opts.preselection * static_cast<double>(cands.size())));
        cands.resize(std::clamp<std::size_t>(keep, 1, cands.size()));
        std::sort(cands.begin(), cands.end());
      }
      bool forced = false;
      double best = -1.0;
      std::optional<Var> best_var;
      for (Var v : cands) {
        Literal pos = Literal::positive(v), neg = Literal::negative(v);
        if (val(pos) != Truth::unassigned) continue;
        auto mp = look_ahead(pos, h);
        if (mp.refuted) {
          ++sel.failed_literals;
          forced = true;
          if (!assign(neg)) break;
          continue;
        }
        auto mn = look_ahead(neg, h);
        if (mn.refuted) {
          ++sel.failed_literals;
          forced = true;
          if (!assign(pos)) break;
          continue;
        }
        double s = score(opts.mode, mp) * score(opts.mode, mn);
        if (s > best) {
          best = s;
          best_var = v;
        }
      }
      if (conflict) continue;
      if (forced) continue;  // re-evaluate under the strengthened assignment
      sel.variable = best_var;
      return sel;
    }
  }
};

LookaheadSolver::LookaheadSolver(const Formula& f) : impl_(std::make_unique<Impl>(f)) {}
LookaheadSolver::~LookaheadSolver() = default;
LookaheadSolver::LookaheadSolver(LookaheadSolver&&) noexcept = default;
LookaheadSolver& LookaheadSolver::operator=(LookaheadSolver&&) noexcept = default;

bool LookaheadSolver::assign(Literal l) {
  if (l.var() > impl_->var_bound) throw std::out_of_range("literal exceeds the formula's var bound");
  return impl_->assign(l);
}
bool LookaheadSolver::in_conflict() const { return impl_->conflict; }
std::size_t LookaheadSolver::trail_size() const { return impl_->trail.size(); }
void LookaheadSolver::backtrack(std::size_t size) { impl_->backtrack(size); }
Truth LookaheadSolver::value(Literal l) const { return impl_->val(l); }

PartialAssignment LookaheadSolver::assignment() const {
  PartialAssignment tau(impl_->var_bound);
  for (Literal l : impl_->trail) tau.set(l);
  return tau;
}

std::size_t LookaheadSolver::residual_binaries() const { return impl_->residual_binaries(); }
std::size_t LookaheadSolver::unassigned_occurring() const { return impl_->unassigned_occurring(); }
std::vector<Var> LookaheadSolver::candidates() const { return impl_->candidates(); }
HTable LookaheadSolver::compute_h(const HeuristicParams& p) const { return impl_->compute_h(p); }
LookaheadMeasure LookaheadSolver::look_ahead(Literal l, const HTable& h) {
  return impl_->look_ahead(l, h);
}
LookaheadSolver::Selection LookaheadSolver::select(const SplitOptions& opts) {
  return impl_->select(opts);
}

namespace {

LookaheadSolver prepared(const Formula& f, const PartialAssignment& tau) {
  LookaheadSolver s(f);
  for (Literal l : tau.true_literals()) {
    if (l.var() > f.var_bound()) continue;
    if (s.value(l) == Truth::true_) continue;
    if (!s.assign(l)) break;
  }
  return s;
}

}  // namespace

HTable compute_h(const Formula& f, const PartialAssignment& tau, const HeuristicParams& p) {
  return prepared(f, tau).compute_h(p);
}

LookaheadMeasure look_ahead(const Formula& f, const PartialAssignment& tau, Literal l,
                            const HTable& h) {
  auto s = prepared(f, tau);
  return s.look_ahead(l, h);
}

Var select_branch(const Formula& f, const PartialAssignment& tau, const SplitOptions& opts) {
  auto s = prepared(f, tau);
  auto sel = s.select(opts);
  if (!sel.variable)
    throw Error(sel.refuted ? "select_branch: node is refuted by failed literals"
                            : "select_branch: no candidate variable");
  return *sel.variable;
}

namespace {

class Splitter {
 public:
  Splitter(const Formula& f, const SplitOptions& opts) : solver_(f), opts_(opts) {
    opts_.ptn_params.validate();
    opts_.rnd_params.validate();
    if (!(opts_.preselection > 0.0 && opts_.preselection <= 1.0))
      throw Error("preselection fraction must lie in (0, 1]");
  }

  SplitResult run(std::span<const Literal> assumptions) {
    bool ok = !solver_.in_conflict();
    for (Literal a : assumptions)
      if (ok) ok = solver_.assign(a);
    node(0, ok);
    SplitResult r;
    r.tree = CubeTree::from_preorder(seq_);
    r.stats = std::move(stats_);
    return r;
  }

 private:
  void node(std::size_t depth, bool consistent) {
    const std::size_t slot = seq_.size();
    seq_.emplace_back(Literal{}, LeafStatus::cutoff);
    stats_.emplace_back();
    NodeStats st;
    st.depth = depth;
    if (!consistent) {
      st.outcome = NodeOutcome::refuted;
      seq_[slot].second = LeafStatus::refuted;
      stats_[slot] = st;
      return;
    }
    st.binaries = solver_.residual_binaries();
    st.unassigned = solver_.unassigned_occurring();
    const auto& cut = opts_.cutoff;
    if (cut.min_binaries && st.binaries >= *cut.min_binaries) {
      st.outcome = NodeOutcome::cutoff_binaries;
    } else if (cut.max_unassigned && st.unassigned <= *cut.max_unassigned) {
      st.outcome = NodeOutcome::cutoff_unassigned;
    } else if (depth >= cut.max_depth) {
      st.outcome = NodeOutcome::cutoff_depth;
    }
    if (st.outcome != NodeOutcome::branched) {
      stats_[slot] = st;
      return;
    }
    const std::size_t mark = solver_.trail_size();
    auto t0 = std::chrono::steady_clock::now();
    auto sel = solver_.select(opts_);
    st.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    st.failed_literals = sel.failed_literals;
    if (!sel.variable) {
      st.outcome = sel.refuted ? NodeOutcome::refuted : NodeOutcome::exhausted;
      if (sel.refuted) seq_[slot].second = LeafStatus::refuted;
      stats_[slot] = st;
      solver_.backtrack(mark);
      return;
    }
    Literal decision = Literal::positive(*sel.variable);
    seq_[slot].first = decision;
    stats_[slot] = st;
    for (Literal branch : {decision, -decision}) {
      const std::size_t before = solver_.trail_size();
      bool ok = solver_.assign(branch);
      node(depth + 1, ok);
      solver_.backtrack(before);
    }
    solver_.backtrack(mark);
  }

  LookaheadSolver solver_;
  SplitOptions opts_;
  std::vector<std::pair<Literal, LeafStatus>> seq_;
  std::vector<NodeStats> stats_;
};

}  // namespace

SplitResult split(const Formula& f, const SplitOptions& opts, std::span<const Literal> assumptions) {
  return Splitter(f, opts).run(assumptions);
}

}  // namespace cnc
