#include "cnc/dimacs.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "text_util.hpp"

namespace cnc {

Formula parse_dimacs(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  std::int64_t declared_vars = 0, declared_clauses = 0;
  Formula f;
  std::vector<Literal> pending;
  std::size_t pending_line = 0;

  while (std::getline(in, line)) {
    ++lineno;
    auto toks = detail::split_ws(line);
    if (toks.empty()) continue;
    if (toks[0] == "c" || toks[0].front() == 'c') continue;
    if (toks[0] == "p") {
      if (have_header) throw ParseError(lineno, "duplicate header");
      if (toks.size() != 4 || toks[1] != "cnf")
        throw ParseError(lineno, "malformed header, expected 'p cnf <vars> <clauses>'");
      declared_vars = detail::parse_int(toks[2], lineno);
      declared_clauses = detail::parse_int(toks[3], lineno);
      if (declared_vars < 0 || declared_clauses < 0 || declared_vars > INT32_MAX)
        throw ParseError(lineno, "malformed header, negative or oversized counts");
      have_header = true;
      f = Formula(static_cast<Var>(declared_vars));
      continue;
    }
    if (!have_header) throw ParseError(lineno, "clause data before 'p cnf' header");
    for (auto tok : toks) {
      auto v = detail::parse_literal(tok, lineno);
      if (v == 0) {
        if (static_cast<std::int64_t>(f.size()) >= declared_clauses)
          throw ParseError(lineno, "more clauses than declared in header (" +
                                       std::to_string(declared_clauses) + ")");
        f.add(Clause(pending));
        pending.clear();
        continue;
      }
      Literal l(v);
      if (static_cast<std::int64_t>(l.var()) > declared_vars)
        throw ParseError(lineno, "literal " + std::string(tok) + " exceeds declared variable count " +
                                     std::to_string(declared_vars));
      if (pending.empty()) pending_line = lineno;
      pending.push_back(l);
    }
  }
  if (!have_header) throw ParseError(lineno, "missing 'p cnf' header");
  if (!pending.empty()) throw ParseError(pending_line, "clause missing terminating 0");
  if (static_cast<std::int64_t>(f.size()) != declared_clauses)
    throw ParseError(lineno, "header declares " + std::to_string(declared_clauses) +
                                 " clauses, found " + std::to_string(f.size()));
  return f;
}

Formula parse_dimacs(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_dimacs(in);
}

Formula read_dimacs_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return parse_dimacs(in);
}

void write_clause_line(std::ostream& out, const Clause& c) {
  for (Literal l : c) out << l.value() << ' ';
  out << "0\n";
}

void write_dimacs(std::ostream& out, const Formula& f) {
  out << "p cnf " << f.var_bound() << ' ' << f.size() << '\n';
  for (const auto& c : f) write_clause_line(out, c);
}

std::string write_dimacs(const Formula& f) {
  std::ostringstream os;
  write_dimacs(os, f);
  return os.str();
}

void write_dimacs_file(const std::string& path, const Formula& f) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  write_dimacs(out, f);
}

}  // namespace cnc
