#include "cnc/transform.hpp"

#include <istream>
#include <ostream>
#include <set>

#include "cnc/encoder.hpp"
#include "cnc/error.hpp"
#include "text_util.hpp"

namespace cnc {
namespace {

class BlockedClauseEliminator {
 public:
  explicit BlockedClauseEliminator(const Formula& f)
      : f_(f), alive_(f.size(), true), occurs_(2 * (static_cast<std::size_t>(f.var_bound()) + 1)),
        mark_(occurs_.size(), false) {
    for (std::size_t i = 0; i < f.size(); ++i)
      for (Literal l : f[i]) occurs_[l.code()].push_back(i);
  }

  bool blocked_on(std::size_t ci, Literal l) {
    const Clause& c = f_[ci];
    for (Literal k : c) mark_[k.code()] = true;
    bool blocked = true;
    for (std::size_t di : occurs_[(-l).code()]) {
      if (!alive_[di] || di == ci) continue;
      bool taut = false;
      for (Literal k : f_[di])
        if (k != -l && mark_[(-k).code()]) {
          taut = true;
          break;
        }
      if (!taut) {
        blocked = false;
        break;
      }
    }
    for (Literal k : c) mark_[k.code()] = false;
    return blocked;
  }

  BceResult run() {
    BceResult result;
    std::set<std::size_t> pending;
    for (std::size_t i = 0; i < f_.size(); ++i) pending.insert(i);
    while (!pending.empty()) {
      std::size_t ci = *pending.begin();
      pending.erase(pending.begin());
      if (!alive_[ci]) continue;
      for (Literal l : f_[ci]) {
        if (!blocked_on(ci, l)) continue;
        alive_[ci] = false;
        result.stack.push_back({f_[ci], l, ci});
        // Clauses containing the complement of one of C's literals lost a
        // resolution partner.
        for (Literal k : f_[ci])
          for (std::size_t di : occurs_[(-k).code()])
            if (alive_[di]) pending.insert(di);
        break;
      }
    }
    result.reduced = Formula(f_.var_bound());
    for (std::size_t i = 0; i < f_.size(); ++i)
      if (alive_[i]) result.reduced.add(f_[i]);
    return result;
  }

 private:
  const Formula& f_;
  std::vector<bool> alive_;
  std::vector<std::vector<std::size_t>> occurs_;
  std::vector<bool> mark_;
};

}  // namespace

bool is_blocked(const Formula& f, std::size_t clause_index, Literal l) {
  if (!f[clause_index].contains(l)) return false;
  BlockedClauseEliminator e(f);
  return e.blocked_on(clause_index, l);
}

BceResult bce(const Formula& f) { return BlockedClauseEliminator(f).run(); }

PartialAssignment reconstruct(const PartialAssignment& reduced_model,
                              std::span<const EliminationRecord> stack) {
  PartialAssignment tau = reduced_model;
  for (auto it = stack.rbegin(); it != stack.rend(); ++it)
    if (evaluate(it->clause, tau) != Evaluation::satisfied) tau.set(it->blocking);
  return tau;
}

PartialAssignment reconstruct(const Formula& reduced, const PartialAssignment& reduced_model,
                              std::span<const EliminationRecord> stack) {
  if (evaluate(reduced, reduced_model) != Evaluation::satisfied)
    throw Error("reconstruct: assignment does not satisfy the reduced formula");
  return reconstruct(reduced_model, stack);
}

SymmetryBreak symmetry_break(const Formula& f) {
  if (!is_flip_symmetric(f))
    throw Error("symmetry_break: formula is not invariant under complementing all literals");
  SymmetryBreak out{f, std::nullopt};
  auto stats = occurrence_stats(f);
  if (stats.most_frequent != 0) {
    out.pivot = stats.most_frequent;
    out.formula.add(Clause{static_cast<std::int32_t>(stats.most_frequent)});
  }
  return out;
}

Proof emit_transform_proof(const Formula& original, std::span<const EliminationRecord> stack,
                           std::optional<Var> pivot) {
  Proof p;
  for (const auto& r : stack) {
    if (r.order_index >= original.size() || !original[r.order_index].same_set(r.clause))
      throw Error("emit_transform_proof: stack does not match the original formula");
    p.push_back(ProofLine::deletion(r.clause));
  }
  if (pivot) p.push_back(ProofLine::addition(Clause{static_cast<std::int32_t>(*pivot)}));
  return p;
}

void write_stack(std::ostream& out, std::span<const EliminationRecord> stack) {
  for (const auto& r : stack) {
    out << r.blocking.value();
    for (Literal l : r.clause) out << ' ' << l.value();
    out << " 0\n";
  }
}

std::vector<EliminationRecord> parse_stack(std::istream& in) {
  std::vector<EliminationRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto toks = detail::split_ws(line);
    if (toks.empty()) continue;
    if (toks.back() != "0") throw ParseError(lineno, "stack line missing terminating 0");
    std::vector<Literal> lits;
    for (std::size_t i = 0; i + 1 < toks.size(); ++i) {
      auto v = detail::parse_literal(toks[i], lineno);
      if (v == 0) throw ParseError(lineno, "unexpected 0 inside stack line");
      lits.emplace_back(v);
    }
    if (lits.size() < 2) throw ParseError(lineno, "stack line needs a blocking literal and a clause");
    Literal blocking = lits.front();
    Clause c(std::span<const Literal>(lits).subspan(1));
    if (!c.contains(blocking)) throw ParseError(lineno, "blocking literal not in its clause");
    out.push_back({std::move(c), blocking, out.size()});
  }
  return out;
}

}  // namespace cnc
