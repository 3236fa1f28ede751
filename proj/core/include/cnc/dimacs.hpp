// DIMACS CNF reading and writing.
#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "cnc/cnf.hpp"
#include "cnc/error.hpp"

namespace cnc {

/// Parses `c` comments, a `p cnf V C` header and 0-terminated clauses.
/// Throws ParseError (with line number) on a malformed header, a literal
/// exceeding V, a missing terminator, a non-integer token, or a clause count
/// that disagrees with the header.
Formula parse_dimacs(std::istream& in);
Formula parse_dimacs(std::string_view text);
Formula read_dimacs_file(const std::string& path);

void write_dimacs(std::ostream& out, const Formula& f);
std::string write_dimacs(const Formula& f);
void write_dimacs_file(const std::string& path, const Formula& f);

/// Writes one clause as space-separated literals followed by " 0\n".
void write_clause_line(std::ostream& out, const Clause& c);

}  // namespace cnc
