#include "cnc/cnf.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace cnc {

Clause::Clause(std::span<const Literal> lits) {
  lits_.reserve(lits.size());
  for (Literal l : lits) {
    if (!l.valid()) throw std::invalid_argument("clause contains literal 0");
    if (std::find(lits_.begin(), lits_.end(), l) != lits_.end()) continue;
    if (std::find(lits_.begin(), lits_.end(), -l) != lits_.end()) tautological_ = true;
    lits_.push_back(l);
  }
}

Clause::Clause(std::initializer_list<std::int32_t> dimacs)
    : Clause(from_dimacs(std::span<const std::int32_t>(dimacs.begin(), dimacs.size()))) {}

Clause Clause::from_dimacs(std::span<const std::int32_t> dimacs) {
  std::vector<Literal> lits;
  lits.reserve(dimacs.size());
  for (auto v : dimacs) lits.emplace_back(v);
  return Clause(lits);
}

bool Clause::contains(Literal l) const {
  return std::find(lits_.begin(), lits_.end(), l) != lits_.end();
}

Var Clause::max_var() const {
  Var m = 0;
  for (Literal l : lits_) m = std::max(m, l.var());
  return m;
}

std::vector<std::int32_t> Clause::sorted_key() const {
  std::vector<std::int32_t> key;
  key.reserve(lits_.size());
  for (Literal l : lits_) key.push_back(l.value());
  std::sort(key.begin(), key.end());
  return key;
}

Clause Clause::flipped() const {
  std::vector<Literal> lits;
  lits.reserve(lits_.size());
  for (Literal l : lits_) lits.push_back(-l);
  return Clause(lits);
}

std::string Clause::to_string() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < lits_.size(); ++i) {
    if (i) os << ' ';
    os << lits_[i].value();
  }
  os << ')';
  return os.str();
}

Formula::Formula(Var var_bound, std::vector<Clause> clauses) : var_bound_(var_bound) {
  clauses_.reserve(clauses.size());
  for (auto& c : clauses) add(std::move(c));
}

void Formula::set_var_bound(Var v) {
  for (const auto& c : clauses_)
    if (c.max_var() > v) throw std::out_of_range("var_bound below an occurring variable");
  var_bound_ = v;
}

void Formula::add(Clause c) {
  if (c.max_var() > var_bound_)
    throw std::out_of_range("literal " + std::to_string(c.max_var()) + " exceeds var bound " +
                            std::to_string(var_bound_));
  clauses_.push_back(std::move(c));
}

bool Formula::contains_empty_clause() const {
  return std::any_of(clauses_.begin(), clauses_.end(), [](const Clause& c) { return c.empty(); });
}

std::size_t Formula::occurring_variables() const {
  std::vector<bool> seen(static_cast<std::size_t>(var_bound_) + 1, false);
  std::size_t count = 0;
  for (const auto& c : clauses_)
    for (Literal l : c)
      if (!seen[l.var()]) {
        seen[l.var()] = true;
        ++count;
      }
  return count;
}

Truth PartialAssignment::value(Literal l) const {
  Var v = l.var();
  if (v >= values_.size()) return Truth::unassigned;
  Truth t = values_[v];
  if (t == Truth::unassigned || l.is_positive()) return t;
  return t == Truth::true_ ? Truth::false_ : Truth::true_;
}

std::optional<bool> PartialAssignment::operator()(Literal l) const {
  switch (value(l)) {
    case Truth::true_: return true;
    case Truth::false_: return false;
    default: return std::nullopt;
  }
}

void PartialAssignment::grow(Var v) {
  if (v >= values_.size()) values_.resize(static_cast<std::size_t>(v) + 1, Truth::unassigned);
}

void PartialAssignment::assign(Literal l) {
  if (is_false(l))
    throw std::logic_error("assigning literal " + std::to_string(l.value()) +
                           " contradicts the assignment");
  set(l);
}

void PartialAssignment::set(Literal l) {
  grow(l.var());
  values_[l.var()] = l.is_positive() ? Truth::true_ : Truth::false_;
}

void PartialAssignment::unassign(Var v) {
  if (v < values_.size()) values_[v] = Truth::unassigned;
}

std::vector<Literal> PartialAssignment::true_literals() const {
  std::vector<Literal> out;
  for (Var v = 1; v < values_.size(); ++v) {
    if (values_[v] == Truth::true_) out.push_back(Literal::positive(v));
    else if (values_[v] == Truth::false_) out.push_back(Literal::negative(v));
  }
  return out;
}

std::size_t PartialAssignment::assigned_count() const {
  return static_cast<std::size_t>(std::count_if(
      values_.begin(), values_.end(), [](Truth t) { return t != Truth::unassigned; }));
}

PropagationResult unit_propagate(const Formula& f, std::span<const Literal> assumptions) {
  Var bound = f.var_bound();
  for (Literal a : assumptions) bound = std::max(bound, a.var());
  PropagationResult result{PartialAssignment(bound), false};
  auto& tau = result.assignment;

  std::vector<Literal> queue;
  auto enqueue = [&](Literal l) {
    if (tau.is_true(l)) return true;
    if (tau.is_false(l)) return false;
    tau.set(l);
    queue.push_back(l);
    return true;
  };

  for (Literal a : assumptions)
    if (!enqueue(a)) {
      result.conflict = true;
      return result;
    }

  // Two watched literals per clause of size >= 2; units are enqueued directly.
  std::vector<std::vector<std::size_t>> watches(2 * (static_cast<std::size_t>(bound) + 1));
  std::vector<std::vector<Literal>> lits;
  lits.reserve(f.size());
  for (const auto& c : f) {
    if (c.empty()) {
      result.conflict = true;
      return result;
    }
    if (c.tautological()) continue;
    lits.emplace_back(c.begin(), c.end());
  }
  for (std::size_t i = 0; i < lits.size(); ++i) {
    auto& c = lits[i];
    if (c.size() == 1) {
      if (!enqueue(c[0])) {
        result.conflict = true;
        return result;
      }
      continue;
    }
    // Move two non-false literals to the front if possible.
    for (std::size_t w = 0; w < 2; ++w)
      for (std::size_t k = w; k < c.size(); ++k)
        if (!tau.is_false(c[k])) {
          std::swap(c[w], c[k]);
          break;
        }
    watches[(-c[0]).code()].push_back(i);
    watches[(-c[1]).code()].push_back(i);
    if (tau.is_false(c[0])) {
      result.conflict = true;
      return result;
    }
    if (tau.is_false(c[1]) && !enqueue(c[0])) {
      result.conflict = true;
      return result;
    }
  }

  for (std::size_t head = 0; head < queue.size(); ++head) {
    Literal p = queue[head];  // p became true; clauses watching -p need attention
    auto& ws = watches[p.code()];
    std::size_t keep = 0;
    for (std::size_t wi = 0; wi < ws.size(); ++wi) {
      std::size_t ci = ws[wi];
      auto& c = lits[ci];
      if (c[0] == -p) std::swap(c[0], c[1]);
      // c[1] == -p now
      if (tau.is_true(c[0])) {
        ws[keep++] = ci;
        continue;
      }
      bool moved = false;
      for (std::size_t k = 2; k < c.size(); ++k)
        if (!tau.is_false(c[k])) {
          std::swap(c[1], c[k]);
          watches[(-c[1]).code()].push_back(ci);
          moved = true;
          break;
        }
      if (moved) continue;
      ws[keep++] = ci;
      if (!enqueue(c[0])) {
        result.conflict = true;
        for (std::size_t r = wi + 1; r < ws.size(); ++r) ws[keep++] = ws[r];
        ws.resize(keep);
        return result;
      }
    }
    ws.resize(keep);
  }
  return result;
}

Clause resolve(const Clause& c1, const Clause& c2, Literal pivot) {
  if (!c1.contains(pivot))
    throw std::invalid_argument("resolve: pivot " + std::to_string(pivot.value()) +
                                " missing from first clause");
  if (!c2.contains(-pivot))
    throw std::invalid_argument("resolve: complement of pivot " + std::to_string(pivot.value()) +
                                " missing from second clause");
  std::vector<Literal> out;
  out.reserve(c1.size() + c2.size());
  for (Literal l : c1)
    if (l != pivot) out.push_back(l);
  for (Literal l : c2)
    if (l != -pivot) out.push_back(l);
  return Clause(out);
}

Evaluation evaluate(const Clause& c, const PartialAssignment& tau) {
  bool open = false;
  for (Literal l : c) {
    Truth t = tau.value(l);
    if (t == Truth::true_) return Evaluation::satisfied;
    if (t == Truth::unassigned) open = true;
  }
  return open ? Evaluation::undetermined : Evaluation::falsified;
}

Evaluation evaluate(const Formula& f, const PartialAssignment& tau) {
  bool open = false;
  for (const auto& c : f) {
    switch (evaluate(c, tau)) {
      case Evaluation::falsified: return Evaluation::falsified;
      case Evaluation::undetermined: open = true; break;
      case Evaluation::satisfied: break;
    }
  }
  return open ? Evaluation::undetermined : Evaluation::satisfied;
}

bool is_flip_symmetric(const Formula& f) {
  std::map<std::vector<std::int32_t>, long> balance;
  for (const auto& c : f) {
    auto key = c.sorted_key();
    ++balance[key];
    std::vector<std::int32_t> flipped(key.rbegin(), key.rend());
    for (auto& v : flipped) v = -v;
    --balance[flipped];
  }
  return std::all_of(balance.begin(), balance.end(), [](const auto& kv) { return kv.second == 0; });
}

}  // namespace cnc
