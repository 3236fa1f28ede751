// Internal helpers shared by the text-format readers.
#pragma once

#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "cnc/error.hpp"

namespace cnc::detail {

inline std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

inline std::int64_t parse_int(std::string_view tok, std::size_t line) {
  std::int64_t v = 0;
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  if (!tok.empty() && tok.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || first == last)
    throw ParseError(line, "expected an integer, got '" + std::string(tok) + "'");
  return v;
}

inline std::int32_t parse_literal(std::string_view tok, std::size_t line) {
  auto v = parse_int(tok, line);
  if (v > INT32_MAX || v < -INT32_MAX)
    throw ParseError(line, "literal out of range: " + std::string(tok));
  return static_cast<std::int32_t>(v);
}

}  // namespace cnc::detail
