#include "cnc/cdcl.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cnc/encoder.hpp"

namespace cnc {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::sat: return "sat";
    case Verdict::unsat: return "unsat";
    case Verdict::indeterminate: return "indeterminate";
  }
  return "?";
}

namespace {

constexpr std::uint32_t kNoReason = std::numeric_limits<std::uint32_t>::max();

// Luby sequence with base 2: 1 1 2 1 1 2 4 ...
double luby(std::uint64_t i) {
  std::uint64_t size = 1;
  int seq = 0;
  while (size < i + 1) {
    ++seq;
    size = 2 * size + 1;
  }
  while (size - 1 != i) {
    size = (size - 1) >> 1;
    --seq;
    i %= size;
  }
  return std::pow(2.0, seq);
}

struct StoredClause {
  std::vector<Literal> lits;
  double activity = 0.0;
  bool learnt = false;
  bool removed = false;
};

struct Watcher {
  std::uint32_t cref;
  Literal blocker;
};

// Binary max-heap of variables keyed by activity.
class VarHeap {
 public:
  explicit VarHeap(const std::vector<double>& act) : act_(act) {}

  void reserve(Var n) { pos_.assign(static_cast<std::size_t>(n) + 1, -1); }
  bool contains(Var v) const { return pos_[v] >= 0; }
  bool empty() const { return heap_.empty(); }

  void insert(Var v) {
    if (contains(v)) return;
    pos_[v] = static_cast<int>(heap_.size());
    heap_.push_back(v);
    up(heap_.size() - 1);
  }
  void increased(Var v) {
    if (contains(v)) up(static_cast<std::size_t>(pos_[v]));
  }
  Var pop() {
    Var top = heap_.front();
    heap_.front() = heap_.back();
    pos_[heap_.front()] = 0;
    heap_.pop_back();
    pos_[top] = -1;
    if (!heap_.empty()) down(0);
    return top;
  }

 private:
  bool less(Var a, Var b) const { return act_[a] > act_[b] || (act_[a] == act_[b] && a < b); }
  void up(std::size_t i) {
    Var v = heap_[i];
    while (i > 0) {
      std::size_t p = (i - 1) / 2;
      if (!less(v, heap_[p])) break;
      heap_[i] = heap_[p];
      pos_[heap_[i]] = static_cast<int>(i);
      i = p;
    }
    heap_[i] = v;
    pos_[v] = static_cast<int>(i);
  }
  void down(std::size_t i) {
    Var v = heap_[i];
    for (;;) {
      std::size_t c = 2 * i + 1;
      if (c >= heap_.size()) break;
      if (c + 1 < heap_.size() && less(heap_[c + 1], heap_[c])) ++c;
      if (!less(heap_[c], v)) break;
      heap_[i] = heap_[c];
      pos_[heap_[i]] = static_cast<int>(i);
      i = c;
    }
    heap_[i] = v;
    pos_[v] = static_cast<int>(i);
  }

  const std::vector<double>& act_;
  std::vector<Var> heap_;
  std::vector<int> pos_;
};

}  // namespace

struct Solver::Impl {
  SolverOptions opts;
  ProofSink* proof;
  Var n;

  std::vector<StoredClause> db;
  std::vector<std::uint32_t> learnts;
  std::vector<Literal> input_units;    // for self-check
  std::vector<Literal> learned_units;  // for self-check
  std::vector<std::vector<Watcher>> watches;  // by code of the literal that became true

  std::vector<std::int8_t> val;  // by literal code: 1 true, -1 false, 0 free
  std::vector<int> level;
  std::vector<std::uint32_t> reason;
  std::vector<bool> phase;  // saved polarity, true = positive
  std::vector<Literal> trail;
  std::vector<std::size_t> trail_lim;
  std::size_t qhead = 0;

  std::vector<double> activity;
  VarHeap heap{activity};
  double var_inc = 1.0;
  double cla_inc = 1.0;
  double max_learnts = 0;

  std::vector<std::uint8_t> seen;
  std::vector<Literal> analyze_stack, analyze_clear;

  bool root_unsat = false;
  SolveStats total;
  SolveStats* cur = nullptr;

  Impl(const Formula& f, SolverOptions o, ProofSink* p) : opts(o), proof(p), n(f.var_bound()) {
    auto codes = 2 * static_cast<std::size_t>(n) + 2;
    watches.resize(codes);
    val.assign(codes, 0);
    level.assign(n + 1, 0);
    reason.assign(n + 1, kNoReason);
    phase.assign(n + 1, false);
    activity.assign(n + 1, 0.0);
    seen.assign(n + 1, 0);
    heap.reserve(n);
    for (Var v = 1; v <= n; ++v) heap.insert(v);

    std::vector<Literal> units;
    std::size_t nclauses = 0;
    for (const auto& c : f) {
      if (c.tautological()) continue;
      if (c.empty()) {
        root_unsat = true;
        continue;
      }
      if (c.size() == 1) {
        units.push_back(c[0]);
        continue;
      }
      attach(store(std::vector<Literal>(c.begin(), c.end()), false));
      ++nclauses;
    }
    input_units = units;
    for (Literal u : units) {
      if (value(u) < 0) root_unsat = true;
      else if (value(u) == 0) enqueue(u, kNoReason);
    }
    max_learnts = std::max(2000.0, static_cast<double>(nclauses) / 3.0);
  }

  int decision_level() const { return static_cast<int>(trail_lim.size()); }
  std::int8_t value(Literal l) const { return val[l.code()]; }

  std::uint32_t store(std::vector<Literal> lits, bool learnt) {
    auto id = static_cast<std::uint32_t>(db.size());
    db.push_back(StoredClause{std::move(lits), 0.0, learnt, false});
    return id;
  }
  void attach(std::uint32_t id) {
    const auto& c = db[id].lits;
    watches[(-c[0]).code()].push_back({id, c[1]});
    watches[(-c[1]).code()].push_back({id, c[0]});
  }

  void enqueue(Literal l, std::uint32_t why) {
    val[l.code()] = 1;
    val[(-l).code()] = -1;
    level[l.var()] = decision_level();
    reason[l.var()] = why;
    trail.push_back(l);
  }

  std::uint32_t propagate() {
    std::uint32_t confl = kNoReason;
    while (qhead < trail.size()) {
      Literal p = trail[qhead++];
      if (cur) ++cur->propagations;
      auto& ws = watches[p.code()];
      Literal false_lit = -p;
      std::size_t i = 0, j = 0;
      while (i < ws.size()) {
        Watcher w = ws[i];
        if (db[w.cref].removed) {
          ++i;
          continue;
        }
        if (value(w.blocker) > 0) {
          ws[j++] = ws[i++];
          continue;
        }
        auto& c = db[w.cref].lits;
        if (c[0] == false_lit) std::swap(c[0], c[1]);
        ++i;
        Literal first = c[0];
        if (first != w.blocker && value(first) > 0) {
          ws[j++] = {w.cref, first};
          continue;
        }
        bool moved = false;
        for (std::size_t k = 2; k < c.size(); ++k) {
          if (value(c[k]) >= 0) {
            std::swap(c[1], c[k]);
            watches[(-c[1]).code()].push_back({w.cref, first});
            moved = true;
            break;
          }
        }
        if (moved) continue;
        ws[j++] = {w.cref, first};
        if (value(first) < 0) {
          confl = w.cref;
          qhead = trail.size();
          while (i < ws.size()) ws[j++] = ws[i++];
        } else {
          enqueue(first, w.cref);
        }
      }
      ws.resize(j);
      if (confl != kNoReason) break;
    }
    return confl;
  }

  void cancel_until(int lvl) {
    if (decision_level() <= lvl) return;
    for (std::size_t k = trail.size(); k-- > trail_lim[static_cast<std::size_t>(lvl)];) {
      Literal l = trail[k];
      Var v = l.var();
      val[l.code()] = 0;
      val[(-l).code()] = 0;
      reason[v] = kNoReason;
      phase[v] = l.is_positive();
      heap.insert(v);
    }
    trail.resize(trail_lim[static_cast<std::size_t>(lvl)]);
    trail_lim.resize(static_cast<std::size_t>(lvl));
    qhead = trail.size();
  }

  void bump_var(Var v) {
    if ((activity[v] += var_inc) > 1e100) {
      for (auto& a : activity) a *= 1e-100;
      var_inc *= 1e-100;
    }
    heap.increased(v);
  }
  void bump_clause(std::uint32_t id) {
    if ((db[id].activity += cla_inc) > 1e20) {
      for (auto lid : learnts) db[lid].activity *= 1e-20;
      cla_inc *= 1e-20;
    }
  }

  std::uint32_t abstract_level(Var v) const { return 1u << (level[v] & 31); }

  bool redundant(Literal p, std::uint32_t levels) {
    analyze_stack.clear();
    analyze_stack.push_back(p);
    std::size_t top = analyze_clear.size();
    while (!analyze_stack.empty()) {
      Literal q = analyze_stack.back();
      analyze_stack.pop_back();
      const auto& c = db[reason[q.var()]].lits;
      for (std::size_t k = 1; k < c.size(); ++k) {
        Literal l = c[k];
        Var v = l.var();
        if (seen[v] || level[v] == 0) continue;
        if (reason[v] != kNoReason && (abstract_level(v) & levels)) {
          seen[v] = 1;
          analyze_stack.push_back(l);
          analyze_clear.push_back(l);
        } else {
          for (std::size_t m = top; m < analyze_clear.size(); ++m) seen[analyze_clear[m].var()] = 0;
          analyze_clear.resize(top);
          return false;
        }
      }
    }
    return true;
  }

  // First-UIP learning; returns the learnt clause (asserting literal first)
  // and the backjump level.
  std::pair<std::vector<Literal>, int> analyze(std::uint32_t confl) {
    std::vector<Literal> out{Literal{}};
    int pending = 0;
    Literal p{};
    std::size_t index = trail.size();
    do {
      auto& cl = db[confl];
      if (cl.learnt) bump_clause(confl);
      for (std::size_t k = p.valid() ? 1 : 0; k < cl.lits.size(); ++k) {
        Literal q = cl.lits[k];
        Var v = q.var();
        if (seen[v] || level[v] == 0) continue;
        seen[v] = 1;
        bump_var(v);
        if (level[v] >= decision_level()) ++pending;
        else out.push_back(q);
      }
      while (!seen[trail[--index].var()]) {
      }
      p = trail[index];
      confl = reason[p.var()];
      seen[p.var()] = 0;
      --pending;
    } while (pending > 0);
    out[0] = -p;

    // Recursive minimization.
    analyze_clear.assign(out.begin(), out.end());
    std::uint32_t levels = 0;
    for (std::size_t k = 1; k < out.size(); ++k) levels |= abstract_level(out[k].var());
    std::size_t j = 1;
    for (std::size_t k = 1; k < out.size(); ++k) {
      Var v = out[k].var();
      if (reason[v] == kNoReason || !redundant(out[k], levels)) out[j++] = out[k];
    }
    out.resize(j);
    for (Literal l : analyze_clear) seen[l.var()] = 0;

    int bt = 0;
    if (out.size() > 1) {
      std::size_t mx = 1;
      for (std::size_t k = 2; k < out.size(); ++k)
        if (level[out[k].var()] > level[out[mx].var()]) mx = k;
      std::swap(out[1], out[mx]);
      bt = level[out[1].var()];
    }
    return {std::move(out), bt};
  }

  void self_check(std::span<const Literal> lemma) {
    Formula f(n);
    for (const auto& c : db)
      if (!c.removed) f.add(Clause(c.lits));
    for (Literal u : input_units) f.add(Clause(std::vector<Literal>{u}));
    for (Literal u : learned_units) f.add(Clause(std::vector<Literal>{u}));
    Clause c(lemma);
    if (!check_rup(f, c)) throw SelfCheckError("self-check: lemma " + c.to_string() + " is not RUP");
  }

  void emit_add(std::span<const Literal> lits) {
    if (opts.self_check) self_check(lits);
    if (proof) proof->add(lits);
  }

  void reduce_db() {
    std::vector<std::uint32_t> cand;
    for (auto id : learnts) {
      const auto& c = db[id];
      bool locked = reason[c.lits[0].var()] == id && value(c.lits[0]) > 0;
      if (c.lits.size() > 2 && !locked) cand.push_back(id);
    }
    std::sort(cand.begin(), cand.end(),
              [&](auto a, auto b) { return db[a].activity < db[b].activity; });
    std::size_t drop = cand.size() / 2;
    for (std::size_t k = 0; k < drop; ++k) {
      auto& c = db[cand[k]];
      c.removed = true;
      if (proof) proof->remove(c.lits);
      ++cur->deleted;
    }
    learnts.erase(std::remove_if(learnts.begin(), learnts.end(),
                                 [&](auto id) { return db[id].removed; }),
                  learnts.end());
    // Watches of removed clauses are dropped lazily in propagate(); free the
    // literal storage now.
    for (std::size_t k = 0; k < drop; ++k) {
      db[cand[k]].lits.clear();
      db[cand[k]].lits.shrink_to_fit();
    }
    max_learnts *= 1.1;
  }

  Literal pick_branch() {
    while (!heap.empty()) {
      Var v = heap.pop();
      if (val[Literal::positive(v).code()] == 0)
        return phase[v] ? Literal::positive(v) : Literal::negative(v);
    }
    return Literal{};
  }

  void emit_refutation(std::span<const Literal> ext, bool extend) {
    if (extend) emit_add(ext);
    else emit_add({});
  }

  SolveResult solve(std::span<const Literal> assumptions, bool extend) {
    SolveResult res;
    cur = &res.stats;
    cancel_until(0);
    for (Literal a : assumptions)
      if (a.var() > n) throw std::out_of_range("assumption literal exceeds the variable bound");

    std::vector<Literal> ext;
    if (extend) {
      for (Literal a : assumptions)
        if (std::find(ext.begin(), ext.end(), -a) == ext.end()) ext.push_back(-a);
    }
    auto finish = [&](Verdict v) {
      res.verdict = v;
      if (v == Verdict::unsat) emit_refutation(ext, extend);
      cancel_until(0);
      total.conflicts += res.stats.conflicts;
      total.decisions += res.stats.decisions;
      total.propagations += res.stats.propagations;
      total.learned += res.stats.learned;
      total.deleted += res.stats.deleted;
      total.restarts += res.stats.restarts;
      cur = nullptr;
      return res;
    };

    if (root_unsat) return finish(Verdict::unsat);
    if (decision_level() == 0 && propagate() != kNoReason) {
      root_unsat = true;
      return finish(Verdict::unsat);
    }

    const int assume_level = assumptions.empty() ? 0 : 1;
    std::uint64_t restart_no = 0;
    std::uint64_t next_restart = static_cast<std::uint64_t>(luby(restart_no) * static_cast<double>(opts.restart_base));
    std::uint64_t since_restart = 0;

    for (;;) {
      std::uint32_t confl = propagate();
      if (confl != kNoReason) {
        ++res.stats.conflicts;
        ++since_restart;
        if (decision_level() == 0) {
          root_unsat = true;
          return finish(Verdict::unsat);
        }
        if (decision_level() <= assume_level) return finish(Verdict::unsat);

        auto [learnt, bt] = analyze(confl);
        if (extend && !ext.empty()) {
          for (Literal e : ext)
            if (std::find(learnt.begin(), learnt.end(), e) == learnt.end()) learnt.push_back(e);
          // ext literals sit at level 1; keep the highest level literal at 1.
          std::size_t mx = 1;
          for (std::size_t k = 2; k < learnt.size(); ++k)
            if (level[learnt[k].var()] > level[learnt[mx].var()]) mx = k;
          std::swap(learnt[1], learnt[mx]);
          bt = level[learnt[1].var()];
        }
        cancel_until(bt);
        emit_add(learnt);
        ++res.stats.learned;
        if (learnt.size() == 1) {
          learned_units.push_back(learnt[0]);
          enqueue(learnt[0], kNoReason);
        } else {
          auto id = store(learnt, true);
          learnts.push_back(id);
          attach(id);
          bump_clause(id);
          enqueue(learnt[0], id);
        }
        var_inc /= opts.var_decay;
        cla_inc /= opts.clause_decay;
        if (opts.conflict_budget && res.stats.conflicts >= opts.conflict_budget)
          return finish(Verdict::indeterminate);
        continue;
      }

      if (since_restart >= next_restart) {
        ++res.stats.restarts;
        ++restart_no;
        since_restart = 0;
        next_restart = static_cast<std::uint64_t>(luby(restart_no) * static_cast<double>(opts.restart_base));
        cancel_until(0);
        continue;
      }
      if (static_cast<double>(learnts.size()) - static_cast<double>(trail.size()) >= max_learnts) reduce_db();

      if (decision_level() == 0 && assume_level == 1) {
        trail_lim.push_back(trail.size());
        bool failed = false;
        for (Literal a : assumptions) {
          auto v = value(a);
          if (v < 0) {
            failed = true;
            break;
          }
          if (v == 0) enqueue(a, kNoReason);
        }
        if (failed) return finish(Verdict::unsat);
        continue;
      }

      Literal next = pick_branch();
      if (!next.valid()) {
        res.model = PartialAssignment(n);
        for (Var v = 1; v <= n; ++v)
          res.model.set(val[Literal::positive(v).code()] > 0 ? Literal::positive(v) : Literal::negative(v));
        return finish(Verdict::sat);
      }
      ++res.stats.decisions;
      trail_lim.push_back(trail.size());
      enqueue(next, kNoReason);
    }
  }
};

Solver::Solver(const Formula& f, SolverOptions opts, ProofSink* proof)
    : impl_(std::make_unique<Impl>(f, opts, proof)) {}
Solver::~Solver() = default;

SolveResult Solver::solve(std::span<const Literal> assumptions, bool extend_lemmas) {
  return impl_->solve(assumptions, extend_lemmas);
}

void Solver::add_unit(Literal l) {
  auto& s = *impl_;
  s.cancel_until(0);
  if (l.var() > s.n) throw std::out_of_range("unit literal exceeds the variable bound");
  s.input_units.push_back(l);
  if (s.value(l) < 0) s.root_unsat = true;
  else if (s.value(l) == 0) s.enqueue(l, kNoReason);
}

Var Solver::var_bound() const { return impl_->n; }
const SolveStats& Solver::total_stats() const { return impl_->total; }

SolveResult solve(const Formula& f, ProofSink* proof, SolverOptions opts) {
  Solver s(f, opts, proof);
  return s.solve();
}

std::vector<SolveResult> solve_incremental(const Formula& f, const std::vector<Cube>& cubes,
                                           ProofSink* proof, SolverOptions opts) {
  Solver s(f, opts, proof);
  std::vector<SolveResult> out;
  out.reserve(cubes.size());
  for (const auto& c : cubes) out.push_back(s.solve(c, true));
  return out;
}

std::vector<Literal> backbone(const Formula& f, SolverOptions opts) {
  Solver s(f, opts);
  auto first = s.solve();
  if (first.verdict == Verdict::unsat) throw Error("backbone: formula is unsatisfiable");
  if (first.verdict == Verdict::indeterminate) throw BudgetExhausted("backbone: conflict budget exhausted");

  // Only variables that occur can be forced.
  std::vector<bool> occurs(static_cast<std::size_t>(f.var_bound()) + 1, false);
  for (const auto& c : f)
    for (Literal l : c) occurs[l.var()] = true;

  std::vector<Literal> cand;
  for (Literal l : first.model.true_literals())
    if (occurs[l.var()]) cand.push_back(l);
  std::vector<bool> dropped(static_cast<std::size_t>(f.var_bound()) + 1, false);
  std::vector<Literal> out;
  for (Literal l : cand) {
    if (dropped[l.var()]) continue;
    Literal neg = -l;
    auto r = s.solve(std::span<const Literal>(&neg, 1));
    if (r.verdict == Verdict::indeterminate) throw BudgetExhausted("backbone: conflict budget exhausted");
    if (r.verdict == Verdict::unsat) {
      out.push_back(l);
      s.add_unit(l);
      continue;
    }
    for (Literal m : cand)
      if (r.model.is_false(m)) dropped[m.var()] = true;
  }
  std::sort(out.begin(), out.end(), [](Literal a, Literal b) { return a.var() < b.var(); });
  return out;
}

WitnessCheck arithmetic_witness_check() {
  WitnessCheck w;
  auto sq = [](std::uint64_t x) { return x * x; };
  w.first_identity = sq(5180) + sq(5865) == sq(7825);
  w.second_identity = sq(625) + sq(7800) == sq(7825);
  auto triples = enumerate_triples(7825);
  auto has = [&](Var a, Var b, Var c) {
    return std::find(triples.begin(), triples.end(), Triple{a, b, c}) != triples.end();
  };
  w.triples_enumerated = has(5180, 5865, 7825) && has(625, 7800, 7825);
  std::vector<Literal> units{Literal(5180), Literal(5865), Literal(-625), Literal(-7800)};
  w.forcings_conflict = unit_propagate(encode(7825), units).conflict;
  return w;
}

}  // namespace cnc
