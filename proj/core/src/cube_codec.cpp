#include "cnc/cube_codec.hpp"

#include <climits>
#include <fstream>
#include <iterator>

#include "cnc/error.hpp"

namespace cnc {

namespace {

void put_varint(EncodedTree& out, std::uint64_t v) {
  while (v >= 0x80) {
    out.push_back(static_cast<std::uint8_t>(v | 0x80));
    v >>= 7;
  }
  out.push_back(static_cast<std::uint8_t>(v));
}

std::uint64_t zigzag(std::int32_t v) {
  auto u = static_cast<std::uint32_t>(v);
  return static_cast<std::uint32_t>(u << 1) ^ static_cast<std::uint32_t>(v >> 31);
}

class Reader {
 public:
  explicit Reader(const EncodedTree& b) : b_(b) {}

  std::uint8_t byte() {
    if (pos_ >= b_.size()) throw ParseError(0, "ptct: truncated stream at byte " + std::to_string(pos_));
    return b_[pos_++];
  }
  std::uint64_t varint() {
    std::uint64_t v = 0;
    for (int shift = 0; shift < 64; shift += 7) {
      auto c = byte();
      v |= static_cast<std::uint64_t>(c & 0x7f) << shift;
      if (!(c & 0x80)) return v;
    }
    throw ParseError(0, "ptct: varint too long at byte " + std::to_string(pos_));
  }
  bool done() const { return pos_ == b_.size(); }
  std::size_t pos() const { return pos_; }

 private:
  const EncodedTree& b_;
  std::size_t pos_ = 0;
};

}  // namespace

EncodedTree encode_tree(const CubeTree& t) {
  EncodedTree out{'P', 'T', 'C', 'T', kPtctVersion};
  put_varint(out, t.size());
  put_varint(out, t.leaf_count());
  std::vector<std::uint32_t> stack{CubeTree::root};
  while (!stack.empty()) {
    auto i = stack.back();
    stack.pop_back();
    const auto& n = t.node(i);
    if (n.is_leaf()) {
      out.push_back(static_cast<std::uint8_t>(n.status));
      continue;
    }
    put_varint(out, zigzag(n.decision.value()) + 1);
    stack.push_back(n.second);
    stack.push_back(n.first);
  }
  return out;
}

CubeTree decode_tree(const EncodedTree& bytes) {
  Reader r(bytes);
  for (char m : {'P', 'T', 'C', 'T'})
    if (r.byte() != static_cast<std::uint8_t>(m)) throw ParseError(0, "ptct: bad magic");
  auto version = r.byte();
  if (version != kPtctVersion)
    throw ParseError(0, "ptct: unsupported version " + std::to_string(version));
  auto nodes = r.varint();
  auto leaf_total = r.varint();
  if (nodes == 0 || nodes % 2 == 0 || leaf_total != (nodes + 1) / 2)
    throw ParseError(0, "ptct: inconsistent node/leaf counts");
  if (nodes > bytes.size()) throw ParseError(0, "ptct: truncated stream");

  std::vector<std::pair<Literal, LeafStatus>> seq;
  seq.reserve(nodes);
  // Open slots still to be filled; a complete tree leaves none.
  std::uint64_t open = 1;
  while (open > 0) {
    if (seq.size() == nodes) throw ParseError(0, "ptct: more nodes than declared");
    auto v = r.varint();
    if (v <= 1) {
      seq.emplace_back(Literal{}, static_cast<LeafStatus>(v));
      --open;
    } else {
      auto z = v - 1;
      auto mag = static_cast<std::int64_t>(z >> 1);
      std::int64_t lit = (z & 1) ? -mag - 1 : mag;
      if (lit == 0 || lit > INT32_MAX || lit < -INT32_MAX)
        throw ParseError(0, "ptct: invalid literal at byte " + std::to_string(r.pos()));
      seq.emplace_back(Literal(static_cast<std::int32_t>(lit)), LeafStatus::cutoff);
      ++open;
    }
  }
  if (seq.size() != nodes) throw ParseError(0, "ptct: node count mismatch");
  if (!r.done()) throw ParseError(0, "ptct: trailing bytes after tree");
  return CubeTree::from_preorder(seq);
}

void write_ptct_file(const std::string& path, const CubeTree& t) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path + " for writing");
  auto bytes = encode_tree(t);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

CubeTree read_ptct_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  EncodedTree bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_tree(bytes);
}

}  // namespace cnc
