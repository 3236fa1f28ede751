#include "cnc/cube_tree.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

#include "cnc/dimacs.hpp"
#include "cnc/error.hpp"
#include "text_util.hpp"

namespace cnc {

std::size_t CubeTree::leaf_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes_.begin(), nodes_.end(), [](const Node& n) { return n.is_leaf(); }));
}

std::pair<std::uint32_t, std::uint32_t> CubeTree::expand(std::uint32_t leaf, Literal decision) {
  if (!nodes_.at(leaf).is_leaf()) throw std::logic_error("expand: node is not a leaf");
  if (!decision.valid()) throw std::invalid_argument("expand: invalid decision literal");
  auto a = static_cast<std::uint32_t>(nodes_.size());
  nodes_.push_back(Node{});
  auto b = static_cast<std::uint32_t>(nodes_.size());
  nodes_.push_back(Node{});
  nodes_[leaf].decision = decision;
  nodes_[leaf].first = a;
  nodes_[leaf].second = b;
  return {a, b};
}

void CubeTree::finalize() {
  std::vector<std::pair<Literal, LeafStatus>> seq;
  seq.reserve(nodes_.size());
  std::vector<std::uint32_t> stack{root};
  while (!stack.empty()) {
    auto i = stack.back();
    stack.pop_back();
    const auto& n = nodes_[i];
    seq.emplace_back(n.decision, n.status);
    if (!n.is_leaf()) {
      stack.push_back(n.second);
      stack.push_back(n.first);
    }
  }
  *this = from_preorder(seq);
}

CubeTree CubeTree::from_preorder(const std::vector<std::pair<Literal, LeafStatus>>& seq) {
  if (seq.empty()) throw Error("cube tree: empty node sequence");
  CubeTree t;
  t.nodes_.clear();
  t.nodes_.reserve(seq.size());
  // Pending internal nodes whose second child has not been placed yet.
  std::vector<std::uint32_t> open;
  for (std::size_t k = 0; k < seq.size(); ++k) {
    auto idx = static_cast<std::uint32_t>(k);
    if (k > 0) {
      if (open.empty()) throw Error("cube tree: trailing nodes after a complete tree");
      auto& parent = t.nodes_[open.back()];
      if (parent.first == 0) {
        parent.first = idx;
      } else {
        parent.second = idx;
        open.pop_back();
      }
    }
    Node n;
    n.decision = seq[k].first;
    n.status = seq[k].second;
    t.nodes_.push_back(n);
    if (!n.is_leaf()) open.push_back(idx);
  }
  if (!open.empty()) throw Error("cube tree: node sequence ends inside the tree");
  return t;
}

bool CubeTree::valid() const {
  // Depth-first with the set of variables on the current path.
  struct Frame {
    std::uint32_t node;
    std::size_t depth;
  };
  std::vector<Var> path;
  std::vector<Frame> stack{{root, 0}};
  while (!stack.empty()) {
    auto [i, depth] = stack.back();
    stack.pop_back();
    path.resize(depth);
    const auto& n = nodes_[i];
    if (n.is_leaf()) continue;
    if (std::find(path.begin(), path.end(), n.decision.var()) != path.end()) return false;
    path.push_back(n.decision.var());
    stack.push_back({n.second, depth + 1});
    stack.push_back({n.first, depth + 1});
  }
  return true;
}

bool operator==(const CubeTree& a, const CubeTree& b) {
  // Compare structure in preorder, independent of storage layout.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> stack{{CubeTree::root, CubeTree::root}};
  while (!stack.empty()) {
    auto [i, j] = stack.back();
    stack.pop_back();
    const auto& x = a.nodes_[i];
    const auto& y = b.nodes_[j];
    if (x.decision != y.decision) return false;
    if (x.is_leaf()) {
      if (x.status != y.status) return false;
      continue;
    }
    stack.emplace_back(x.second, y.second);
    stack.emplace_back(x.first, y.first);
  }
  return a.nodes_.size() == b.nodes_.size();
}

std::vector<CubeWithStatus> leaves(const CubeTree& t) {
  std::vector<CubeWithStatus> out;
  Cube path;
  struct Frame {
    std::uint32_t node;
    std::size_t depth;
    Literal edge;
  };
  std::vector<Frame> stack{{CubeTree::root, 0, Literal{}}};
  while (!stack.empty()) {
    auto f = stack.back();
    stack.pop_back();
    path.resize(f.depth > 0 ? f.depth - 1 : 0);
    if (f.edge.valid()) path.push_back(f.edge);
    const auto& n = t.node(f.node);
    if (n.is_leaf()) {
      out.push_back({path, n.status});
      continue;
    }
    stack.push_back({n.second, f.depth + 1, -n.decision});
    stack.push_back({n.first, f.depth + 1, n.decision});
  }
  return out;
}

std::vector<Cube> cubes(const CubeTree& t) {
  std::vector<Cube> out;
  for (auto& l : leaves(t)) out.push_back(std::move(l.cube));
  return out;
}

Formula negate_cubes(const std::vector<Cube>& cubes) {
  Var bound = 0;
  for (const auto& c : cubes)
    for (Literal l : c) bound = std::max(bound, l.var());
  Formula f(bound);
  for (const auto& c : cubes) {
    std::vector<Literal> neg;
    neg.reserve(c.size());
    for (Literal l : c) neg.push_back(-l);
    f.add(Clause(neg));
  }
  return f;
}

void write_inccnf(std::ostream& out, const Formula& f, const std::vector<Cube>& cubes) {
  out << "p inccnf\n";
  for (const auto& c : f) write_clause_line(out, c);
  for (const auto& cube : cubes) {
    out << "a ";
    for (Literal l : cube) out << l.value() << ' ';
    out << "0\n";
  }
}

std::string write_inccnf(const Formula& f, const std::vector<Cube>& cubes) {
  std::ostringstream os;
  write_inccnf(os, f, cubes);
  return os.str();
}

IncrementalCnf parse_inccnf(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  std::vector<Clause> clauses;
  std::vector<Cube> cube_list;
  std::vector<Literal> pending;
  bool in_cube = false;
  bool open = false;
  Var bound = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto toks = detail::split_ws(line);
    if (toks.empty()) continue;
    if (toks[0] == "c") continue;
    if (toks[0] == "p") {
      if (have_header || toks.size() != 2 || toks[1] != "inccnf")
        throw ParseError(lineno, "malformed header, expected 'p inccnf'");
      have_header = true;
      continue;
    }
    if (!have_header) throw ParseError(lineno, "data before 'p inccnf' header");
    for (auto tok : toks) {
      if (tok == "a") {
        if (open) throw ParseError(lineno, "'a' inside a clause");
        in_cube = true;
        open = true;
        continue;
      }
      auto v = detail::parse_literal(tok, lineno);
      if (v == 0) {
        if (in_cube) {
          cube_list.push_back(pending);
        } else {
          clauses.emplace_back(pending);
        }
        pending.clear();
        in_cube = false;
        open = false;
        continue;
      }
      open = true;
      Literal l(v);
      bound = std::max(bound, l.var());
      pending.push_back(l);
    }
  }
  if (!have_header) throw ParseError(lineno, "missing 'p inccnf' header");
  if (open) throw ParseError(lineno, "line missing terminating 0");
  return {Formula(bound, std::move(clauses)), std::move(cube_list)};
}

IncrementalCnf parse_inccnf(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_inccnf(in);
}

void write_tree(std::ostream& out, const CubeTree& t) {
  out << "p cubetree " << t.size() << ' ' << t.leaf_count() << '\n';
  std::vector<std::uint32_t> stack{CubeTree::root};
  std::size_t on_line = 0;
  while (!stack.empty()) {
    auto i = stack.back();
    stack.pop_back();
    const auto& n = t.node(i);
    if (on_line) out << ' ';
    if (n.is_leaf()) {
      out << (n.status == LeafStatus::refuted ? 'r' : 'c');
    } else {
      out << n.decision.value();
      stack.push_back(n.second);
      stack.push_back(n.first);
    }
    if (++on_line == 32) {
      out << '\n';
      on_line = 0;
    }
  }
  if (on_line) out << '\n';
}

CubeTree parse_tree(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  std::int64_t nodes = 0, leaf_total = 0;
  std::vector<std::pair<Literal, LeafStatus>> seq;
  while (std::getline(in, line)) {
    ++lineno;
    auto toks = detail::split_ws(line);
    if (toks.empty()) continue;
    if (!have_header) {
      if (toks.size() != 4 || toks[0] != "p" || toks[1] != "cubetree")
        throw ParseError(lineno, "malformed header, expected 'p cubetree <nodes> <leaves>'");
      nodes = detail::parse_int(toks[2], lineno);
      leaf_total = detail::parse_int(toks[3], lineno);
      have_header = true;
      continue;
    }
    for (auto tok : toks) {
      if (tok == "c") seq.emplace_back(Literal{}, LeafStatus::cutoff);
      else if (tok == "r") seq.emplace_back(Literal{}, LeafStatus::refuted);
      else {
        auto v = detail::parse_literal(tok, lineno);
        if (v == 0) throw ParseError(lineno, "0 is not a valid decision literal");
        seq.emplace_back(Literal(v), LeafStatus::cutoff);
      }
    }
  }
  if (!have_header) throw ParseError(lineno, "missing 'p cubetree' header");
  if (static_cast<std::int64_t>(seq.size()) != nodes)
    throw ParseError(lineno, "header declares " + std::to_string(nodes) + " nodes, found " +
                                 std::to_string(seq.size()));
  auto t = CubeTree::from_preorder(seq);
  if (static_cast<std::int64_t>(t.leaf_count()) != leaf_total)
    throw ParseError(lineno, "leaf count mismatch");
  return t;
}

}  // namespace cnc
