// Compact binary form of cube trees (.ptct).
//
// Layout: "PTCT", version byte (1), varint node count, varint leaf count,
// then the preorder node stream. A leaf is one byte, 0x00 for cutoff and
// 0x01 for refuted. An internal node is varint(zigzag(literal) + 1), which
// is always >= 2. Varints are little-endian base 128.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cnc/cube_tree.hpp"

namespace cnc {

using EncodedTree = std::vector<std::uint8_t>;

inline constexpr std::uint8_t kPtctVersion = 1;

EncodedTree encode_tree(const CubeTree& t);
/// Throws ParseError on bad magic or version, a truncated stream, count
/// mismatches or trailing bytes.
CubeTree decode_tree(const EncodedTree& bytes);

void write_ptct_file(const std::string& path, const CubeTree& t);
CubeTree read_ptct_file(const std::string& path);

}  // namespace cnc
