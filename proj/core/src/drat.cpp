#include "cnc/drat.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "cnc/dimacs.hpp"
#include "text_util.hpp"

namespace cnc {

void DratWriter::add(std::span<const Literal> clause) {
  for (Literal l : clause) out_ << l.value() << ' ';
  out_ << "0\n";
}

void DratWriter::remove(std::span<const Literal> clause) {
  out_ << "d ";
  for (Literal l : clause) out_ << l.value() << ' ';
  out_ << "0\n";
}

void write_drat(std::ostream& out, const Proof& p) {
  for (const auto& line : p) {
    if (!line.is_addition()) out << "d ";
    write_clause_line(out, line.clause);
  }
}

std::string write_drat(const Proof& p) {
  std::ostringstream os;
  write_drat(os, p);
  return os.str();
}

Proof parse_drat(std::istream& in) {
  Proof p;
  std::string line;
  std::size_t lineno = 0;
  std::vector<Literal> pending;
  bool deletion = false;
  bool open = false;
  while (std::getline(in, line)) {
    ++lineno;
    auto toks = detail::split_ws(line);
    if (!open && !toks.empty() && toks.front() == "c") continue;
    for (auto tok : toks) {
      if (tok == "d") {
        if (open) throw ParseError(lineno, "'d' inside a clause");
        deletion = true;
        open = true;
        continue;
      }
      auto v = detail::parse_literal(tok, lineno);
      if (v == 0) {
        Clause c(pending);
        p.push_back(deletion ? ProofLine::deletion(std::move(c)) : ProofLine::addition(std::move(c)));
        pending.clear();
        deletion = false;
        open = false;
        continue;
      }
      open = true;
      pending.emplace_back(v);
    }
  }
  if (open) throw ParseError(lineno, "proof line missing terminating 0");
  return p;
}

Proof parse_drat(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_drat(in);
}

Proof read_drat_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return parse_drat(in);
}

void write_drat_file(const std::string& path, const Proof& p) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  write_drat(out, p);
}

namespace {

struct KeyHash {
  std::size_t operator()(const std::vector<std::int32_t>& k) const {
    std::size_t h = k.size() * 0x9e3779b97f4a7c15ULL;
    for (auto v : k) h ^= static_cast<std::size_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }
};

}  // namespace

struct DratChecker::Impl {
  struct StoredClause {
    std::vector<Literal> lits;  // watched literals at positions 0 and 1
    bool alive = true;
    bool tautological = false;
  };

  std::vector<StoredClause> clauses;
  std::unordered_map<std::vector<std::int32_t>, std::vector<std::size_t>, KeyHash> by_key;
  std::vector<std::vector<std::size_t>> watches;  // indexed by code of the literal that falsifies
  std::vector<std::size_t> units;                 // ids of alive unit clauses (lazily pruned)
  std::size_t empty_clauses = 0;
  std::vector<std::int8_t> value;                 // per literal code: 1 true, -1 false
  std::vector<Literal> trail;

  void ensure(Var v) {
    std::size_t need = 2 * (static_cast<std::size_t>(v) + 1);
    if (watches.size() < need) {
      watches.resize(need);
      value.resize(need, 0);
    }
  }

  void insert(const Clause& c) {
    ensure(c.max_var());
    std::size_t id = clauses.size();
    clauses.push_back({std::vector<Literal>(c.begin(), c.end()), true, c.tautological()});
    by_key[c.sorted_key()].push_back(id);
    if (c.empty()) {
      ++empty_clauses;
    } else if (c.size() == 1) {
      units.push_back(id);
    } else {
      auto& lits = clauses.back().lits;
      watches[(-lits[0]).code()].push_back(id);
      watches[(-lits[1]).code()].push_back(id);
    }
  }

  bool erase(const Clause& c) {
    auto it = by_key.find(c.sorted_key());
    if (it == by_key.end() || it->second.empty()) return false;
    std::size_t id = it->second.back();
    it->second.pop_back();
    if (it->second.empty()) by_key.erase(it);
    auto& sc = clauses[id];
    sc.alive = false;
    if (sc.lits.empty()) --empty_clauses;
    // Watch and unit lists are pruned lazily.
    return true;
  }

  // Returns false on a contradiction.
  bool assign(Literal l) {
    std::int8_t v = value[l.code()];
    if (v == 1) return true;
    if (v == -1) return false;
    value[l.code()] = 1;
    value[(-l).code()] = -1;
    trail.push_back(l);
    return true;
  }

  void reset() {
    for (Literal l : trail) {
      value[l.code()] = 0;
      value[(-l).code()] = 0;
    }
    trail.clear();
  }

  bool propagate_conflict() {
    for (std::size_t head = 0; head < trail.size(); ++head) {
      Literal p = trail[head];
      auto& ws = watches[p.code()];
      std::size_t keep = 0;
      bool conflict = false;
      std::size_t wi = 0;
      for (; wi < ws.size(); ++wi) {
        std::size_t id = ws[wi];
        auto& sc = clauses[id];
        if (!sc.alive) continue;  // drop stale watch
        auto& c = sc.lits;
        if (c[0] == -p) std::swap(c[0], c[1]);
        if (value[c[0].code()] == 1) {
          ws[keep++] = id;
          continue;
        }
        bool moved = false;
        for (std::size_t k = 2; k < c.size(); ++k)
          if (value[c[k].code()] != -1) {
            std::swap(c[1], c[k]);
            watches[(-c[1]).code()].push_back(id);
            moved = true;
            break;
          }
        if (moved) continue;
        ws[keep++] = id;
        if (!assign(c[0])) {
          conflict = true;
          ++wi;
          break;
        }
      }
      for (; wi < ws.size(); ++wi) ws[keep++] = ws[wi];
      ws.resize(keep);
      if (conflict) return true;
    }
    return false;
  }

  bool rup(std::span<const Literal> c) {
    if (empty_clauses > 0) return true;
    for (Literal l : c) ensure(l.var());
    bool conflict = false;
    for (Literal l : c)
      if (!assign(-l)) {
        conflict = true;
        break;
      }
    if (!conflict) {
      std::size_t keep = 0;
      for (std::size_t id : units) {
        if (!clauses[id].alive) continue;
        units[keep++] = id;
        if (!conflict && !assign(clauses[id].lits[0])) conflict = true;
      }
      units.resize(keep);
    }
    if (!conflict) conflict = propagate_conflict();
    reset();
    return conflict;
  }

  bool rat(const Clause& c, Literal pivot) {
    if (rup(c.literals())) return true;
    if (c.empty()) return false;
    std::vector<Literal> resolvent;
    for (std::size_t id = 0; id < clauses.size(); ++id) {
      const auto& d = clauses[id];
      if (!d.alive) continue;
      if (std::find(d.lits.begin(), d.lits.end(), -pivot) == d.lits.end()) continue;
      resolvent.assign(c.begin(), c.end());
      for (Literal l : d.lits)
        if (l != -pivot) resolvent.push_back(l);
      if (!rup(resolvent)) return false;
    }
    return true;
  }

  bool flip_symmetric() const {
    std::map<std::vector<std::int32_t>, long> balance;
    for (const auto& [key, ids] : by_key) {
      if (ids.empty()) continue;
      std::vector<std::int32_t> flipped(key.rbegin(), key.rend());
      for (auto& v : flipped) v = -v;
      balance[key] += static_cast<long>(ids.size());
      balance[flipped] -= static_cast<long>(ids.size());
    }
    return std::all_of(balance.begin(), balance.end(), [](const auto& kv) { return kv.second == 0; });
  }
};

DratChecker::DratChecker(const Formula& f) : impl_(std::make_unique<Impl>()) {
  impl_->ensure(f.var_bound());
  impl_->clauses.reserve(f.size());
  for (const auto& c : f) impl_->insert(c);
}

DratChecker::~DratChecker() = default;

bool DratChecker::rup(const Clause& c) { return impl_->rup(c.literals()); }

bool DratChecker::rat(const Clause& c, Literal pivot) {
  if (!c.contains(pivot)) throw std::invalid_argument("check_rat: pivot not in clause");
  return impl_->rat(c, pivot);
}

bool DratChecker::flip_symmetric() const { return impl_->flip_symmetric(); }

void DratChecker::add(const Clause& c) { impl_->insert(c); }

bool DratChecker::remove(const Clause& c) { return impl_->erase(c); }

CheckResult DratChecker::check(const Proof& p, const CheckOptions& opts) {
  CheckResult r;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto& line = p[i];
    const std::size_t lineno = i + 1;
    r.lines_checked = lineno;
    if (!line.is_addition()) {
      if (!impl_->erase(line.clause))
        r.warnings.push_back("line " + std::to_string(lineno) + ": deleted clause " +
                             line.clause.to_string() + " not present, ignored");
      continue;
    }
    const Clause& c = line.clause;
    bool ok = impl_->rup(c.literals());
    if (!ok && !c.empty()) {
      ++r.rat_additions;
      if (opts.any_pivot) {
        for (Literal l : c)
          if (impl_->rat(c, l)) {
            ok = true;
            break;
          }
      } else {
        ok = impl_->rat(c, c[0]);
      }
      if (!ok && c.size() == 1 && opts.symmetry_units.count(c[0].value()) &&
          impl_->flip_symmetric()) {
        ok = true;
        ++r.symmetry_additions;
      }
    }
    if (!ok) {
      r.failed_line = lineno;
      r.reason = c.empty() ? "empty clause is not implied by unit propagation"
                           : "clause " + c.to_string() + " has no RAT on its first literal";
      return r;
    }
    impl_->insert(c);
    if (c.empty()) {
      r.refuted = true;
      break;
    }
  }
  if (opts.refutation && !r.refuted) {
    r.failed_line = p.size();
    r.reason = "proof does not derive the empty clause";
    return r;
  }
  r.accepted = true;
  return r;
}

bool check_rup(const Formula& f, const Clause& c) { return DratChecker(f).rup(c); }

bool check_rat(const Formula& f, const Clause& c, Literal pivot) {
  return DratChecker(f).rat(c, pivot);
}

CheckResult check_proof(const Formula& f, const Proof& p, const CheckOptions& opts) {
  return DratChecker(f).check(p, opts);
}

std::vector<Clause> extension_clauses(const Formula& f, Var x, Literal a, Literal b) {
  for (const auto& c : f)
    for (Literal l : c)
      if (l.var() == x)
        throw Error("extension_clauses: variable " + std::to_string(x) + " is not fresh");
  if (a.var() == x || b.var() == x) throw Error("extension_clauses: definition refers to itself");
  Literal lx = Literal::positive(x);
  std::vector<Clause> out;
  auto push_unique = [&](Clause c) {
    for (const auto& o : out)
      if (o.same_set(c)) return;
    out.push_back(std::move(c));
  };
  push_unique(Clause(std::vector<Literal>{lx, -a, -b}));
  push_unique(Clause(std::vector<Literal>{-lx, a}));
  push_unique(Clause(std::vector<Literal>{-lx, b}));
  return out;
}

Proof merge_proofs(const Proof& transform_proof, std::span<const std::optional<Proof>> cube_proofs,
                   const Proof& tautology_proof) {
  Proof merged;
  std::size_t total = transform_proof.size() + tautology_proof.size();
  for (std::size_t i = 0; i < cube_proofs.size(); ++i) {
    if (!cube_proofs[i]) throw Error("merge_proofs: missing proof for cube " + std::to_string(i));
    total += cube_proofs[i]->size();
  }
  merged.reserve(total);
  merged.insert(merged.end(), transform_proof.begin(), transform_proof.end());
  for (const auto& cp : cube_proofs) merged.insert(merged.end(), cp->begin(), cp->end());
  merged.insert(merged.end(), tautology_proof.begin(), tautology_proof.end());
  return merged;
}

}  // namespace cnc
