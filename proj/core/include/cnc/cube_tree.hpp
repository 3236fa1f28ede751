// Binary branching trees produced by the splitter, the cubes they define,
// and the inccnf / tree text formats.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cnc/cnf.hpp"

namespace cnc {

using Cube = std::vector<Literal>;

enum class LeafStatus : std::uint8_t { cutoff = 0, refuted = 1 };

/// Nodes are stored in preorder. An internal node carries the literal of its
/// first branch; its first child extends the cube with that literal, its
/// second child with the complement. Leaves carry a status.
class CubeTree {
 public:
  struct Node {
    Literal decision;  ///< invalid (0) for leaves
    LeafStatus status = LeafStatus::cutoff;
    std::uint32_t first = 0, second = 0;
    bool is_leaf() const { return !decision.valid(); }
    friend bool operator==(const Node&, const Node&) = default;
  };

  /// A tree consisting of a single cutoff leaf.
  CubeTree() : nodes_{Node{}} {}

  static constexpr std::uint32_t root = 0;

  const std::vector<Node>& nodes() const { return nodes_; }
  const Node& node(std::uint32_t i) const { return nodes_[i]; }
  std::size_t size() const { return nodes_.size(); }
  std::size_t leaf_count() const;
  std::size_t internal_count() const { return size() - leaf_count(); }

  /// Builder interface: converts leaf i into an internal node with two fresh
  /// cutoff leaves and returns their indices. Nodes must be expanded in
  /// depth-first order for the preorder layout to hold; finalize() restores
  /// it otherwise.
  std::pair<std::uint32_t, std::uint32_t> expand(std::uint32_t leaf, Literal decision);
  void set_status(std::uint32_t leaf, LeafStatus s) { nodes_[leaf].status = s; }

  /// Rebuilds the node vector in preorder.
  void finalize();

  /// Assembles a tree from preorder node records (decision, status); the
  /// children of internal nodes are implied by the order.
  static CubeTree from_preorder(const std::vector<std::pair<Literal, LeafStatus>>& seq);

  /// Checks that no variable repeats on a root-to-leaf path.
  bool valid() const;

  friend bool operator==(const CubeTree& a, const CubeTree& b);

 private:
  std::vector<Node> nodes_;
};

struct CubeWithStatus {
  Cube cube;
  LeafStatus status;
};

/// Root-to-leaf decision conjunctions, depth-first, first branch first.
std::vector<Cube> cubes(const CubeTree& t);
std::vector<CubeWithStatus> leaves(const CubeTree& t);

/// One clause per cube, complementing each literal. The empty cube yields ⊥.
Formula negate_cubes(const std::vector<Cube>& cubes);

struct IncrementalCnf {
  Formula formula;
  std::vector<Cube> cubes;
};

/// `p inccnf`, the clauses of F, then one `a <literals> 0` line per cube.
void write_inccnf(std::ostream& out, const Formula& f, const std::vector<Cube>& cubes);
std::string write_inccnf(const Formula& f, const std::vector<Cube>& cubes);
/// var_bound of the parsed formula is the largest variable mentioned.
IncrementalCnf parse_inccnf(std::istream& in);
IncrementalCnf parse_inccnf(std::string_view text);

/// Tree text format: a `p cubetree <nodes> <leaves>` header followed by the
/// preorder token stream, literals for internal nodes and `c` / `r` for
/// cutoff / refuted leaves.
void write_tree(std::ostream& out, const CubeTree& t);
CubeTree parse_tree(std::istream& in);

}  // namespace cnc
