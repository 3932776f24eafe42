#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "ext_rational.hpp"

namespace berkdisc {

enum class PointType { T1, T2, T3, T4 };

std::string to_string(PointType t);
PointType parse_point_type(const std::string& s);

class TreeError : public std::runtime_error {
 public:
  explicit TreeError(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

// Raw scene topology as read from a file, before validation.
struct NodeSpec {
  std::string id;
  PointType type = PointType::T2;
  long mult = 1;
};

struct EdgeSpec {
  std::string id;
  std::string parent;
  std::string child;
  ExtRat a_length;
  long mult = 1;
};

struct TopologySpec {
  std::vector<NodeSpec> nodes;
  std::vector<EdgeSpec> edges;
  std::string root;
};

struct Node {
  std::string id;
  PointType type = PointType::T2;
  long mult = 1;
  int parent = -1;
  ExtRat a_length{0};  // length of the parent edge
  std::string edge_id;
  std::vector<int> children;
  int split_of = -1;  // set when the node was created by subdividing the parent edge of split_of
  bool descent = false;  // rigid leaf hung below a node by descend_multiplicity
};

// A node, or a point strictly inside the parent edge of `node` at A-offset `offset` below the parent.
struct TreePoint {
  int node = 0;
  std::optional<Rational> offset;

  static TreePoint at(int n) { return TreePoint{n, std::nullopt}; }
  static TreePoint on_edge(int child, Rational off) { return TreePoint{child, std::move(off)}; }
  bool is_node() const { return !offset.has_value(); }
  friend bool operator==(const TreePoint&, const TreePoint&) = default;
};

struct Coords {
  ExtRat A;
  ExtRat alpha;
  long m = 1;
};

class DiscTree;
using TreePtr = std::shared_ptr<const DiscTree>;

// A closed connected subtree containing the root, stored as the A-length of each parent edge that
// is covered from the top. A node belongs to the subtree when its whole parent edge is covered.
struct Subtree {
  bool empty = false;
  std::vector<ExtRat> reach;

  static Subtree whole(const DiscTree& t);
  static Subtree root_only(const DiscTree& t);
  static Subtree none(const DiscTree& t);
  bool contains_node(const DiscTree& t, int n) const;
  bool contains(const DiscTree& t, const TreePoint& p) const;
  // Adds the segment from `p` up to the root.
  void add_path(const DiscTree& t, const TreePoint& p);
};

struct Insertion {
  TreePtr tree;
  int node = -1;
};

class DiscTree {
 public:
  // Throws TreeError listing every violated invariant.
  static TreePtr build(const TopologySpec& spec);

  std::size_t size() const { return nodes_.size(); }
  int root() const { return root_; }
  const Node& node(int i) const { return nodes_.at(static_cast<std::size_t>(i)); }
  const std::vector<Node>& nodes() const { return nodes_; }

  std::optional<int> find_node(const std::string& id) const;
  // Edges are addressed by their child node.
  std::optional<int> find_edge(const std::string& edge_id) const;

  const ExtRat& A(int n) const { return A_.at(static_cast<std::size_t>(n)); }
  const ExtRat& alpha(int n) const { return alpha_.at(static_cast<std::size_t>(n)); }
  int depth(int n) const { return depth_.at(static_cast<std::size_t>(n)); }
  long mult(int n) const { return node(n).mult; }

  bool is_ancestor(int a, int b) const;  // a lies on the path from b to the root (a == b allowed)
  int lca(int a, int b) const;
  std::vector<int> path_from_root(int n) const;  // root first

  void check_point(const TreePoint& p) const;  // throws std::out_of_range
  ExtRat depth_A(const TreePoint& p) const;
  Coords coords(const TreePoint& p) const;
  TreePoint join(const TreePoint& p, const TreePoint& q) const;
  TreePoint retraction(const Subtree& s, const TreePoint& p) const;
  // Point on the path from the root to `n` at A-depth `a`.
  TreePoint point_on_path(int n, const ExtRat& a) const;

  Insertion insert_point(const TreePoint& p, PointType type, const std::string& new_id = "") const;
  Insertion descend_multiplicity(int x, const std::string& new_id = "") const;

  // True when this tree was obtained from `coarse` by insertions and descents.
  bool refines(const DiscTree& coarse) const;
  // Re-expresses a point of `coarse` in this refinement.
  TreePoint transfer(const DiscTree& coarse, const TreePoint& p) const;

  std::string fresh_id(const std::string& base) const;
  std::string point_str(const TreePoint& p) const;

 private:
  void finalize();

  std::vector<Node> nodes_;
  int root_ = 0;
  std::vector<ExtRat> A_, alpha_;
  std::vector<int> depth_;
  std::unordered_map<std::string, int> by_id_, by_edge_;
};

}  // namespace berkdisc
