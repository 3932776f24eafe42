#include "disc_tree.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace berkdisc {

std::string to_string(PointType t) {
  switch (t) {
    case PointType::T1: return "T1";
    case PointType::T2: return "T2";
    case PointType::T3: return "T3";
    case PointType::T4: return "T4";
  }
  return "?";
}

PointType parse_point_type(const std::string& s) {
  if (s == "T1" || s == "1") return PointType::T1;
  if (s == "T2" || s == "2") return PointType::T2;
  if (s == "T3" || s == "3") return PointType::T3;
  if (s == "T4" || s == "4") return PointType::T4;
  throw std::invalid_argument("unknown point type '" + s + "'");
}

namespace {

std::string join_lines(const std::vector<std::string>& v) {
  std::string out;
  for (const auto& s : v) out += (out.empty() ? "" : "; ") + s;
  return out;
}

}  // namespace

TreeError::TreeError(std::vector<std::string> violations)
    : std::runtime_error(join_lines(violations)), violations_(std::move(violations)) {}

Subtree Subtree::whole(const DiscTree& t) {
  Subtree s;
  s.reach.resize(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) s.reach[i] = t.node(static_cast<int>(i)).a_length;
  return s;
}

Subtree Subtree::root_only(const DiscTree& t) {
  Subtree s;
  s.reach.assign(t.size(), ExtRat(0));
  return s;
}

Subtree Subtree::none(const DiscTree& t) {
  Subtree s = root_only(t);
  s.empty = true;
  return s;
}

bool Subtree::contains_node(const DiscTree& t, int n) const {
  if (empty) return false;
  if (n == t.root()) return true;
  return reach.at(static_cast<std::size_t>(n)) == t.node(n).a_length;
}

bool Subtree::contains(const DiscTree& t, const TreePoint& p) const {
  if (p.is_node()) return contains_node(t, p.node);
  if (empty) return false;
  return reach.at(static_cast<std::size_t>(p.node)) >= ExtRat(*p.offset);
}

void Subtree::add_path(const DiscTree& t, const TreePoint& p) {
  empty = false;
  int c = p.node;
  if (c == t.root()) return;
  ExtRat want = p.is_node() ? t.node(c).a_length : ExtRat(*p.offset);
  auto& r = reach.at(static_cast<std::size_t>(c));
  r = max(r, want);
  for (c = t.node(c).parent; c != t.root(); c = t.node(c).parent) reach[static_cast<std::size_t>(c)] = t.node(c).a_length;
}

TreePtr DiscTree::build(const TopologySpec& spec) {
  std::vector<std::string> errs;
  auto tree = std::make_shared<DiscTree>();
  auto& nodes = tree->nodes_;
  std::unordered_map<std::string, int> idx;
  for (const auto& ns : spec.nodes) {
    if (idx.count(ns.id)) {
      errs.push_back("duplicate node id '" + ns.id + "'");
      continue;
    }
    if (ns.mult < 1) errs.push_back("node '" + ns.id + "' has nonpositive multiplicity");
    idx[ns.id] = static_cast<int>(nodes.size());
    Node n;
    n.id = ns.id;
    n.type = ns.type;
    n.mult = ns.mult;
    nodes.push_back(n);
  }
  auto rit = idx.find(spec.root);
  if (rit == idx.end()) {
    errs.push_back("root '" + spec.root + "' is not a node");
    throw TreeError(errs);
  }
  tree->root_ = rit->second;
  const Node& rootn = nodes[static_cast<std::size_t>(tree->root_)];
  if (rootn.type != PointType::T2 || rootn.mult != 1) errs.push_back("root must be T2 with multiplicity 1");

  std::vector<long> edge_mult(nodes.size(), 0);
  std::unordered_map<std::string, int> edge_ids;
  for (const auto& es : spec.edges) {
    auto pi = idx.find(es.parent), ci = idx.find(es.child);
    std::string label = "edge " + es.parent + "->" + es.child;
    if (pi == idx.end() || ci == idx.end()) {
      errs.push_back(label + " references an unknown node");
      continue;
    }
    Node& child = nodes[static_cast<std::size_t>(ci->second)];
    std::string eid = es.id.empty() ? "e_" + es.child : es.id;
    if (edge_ids.count(eid)) errs.push_back("duplicate edge id '" + eid + "'");
    edge_ids[eid] = ci->second;
    if (ci->second == tree->root_) {
      errs.push_back(label + " points into the root");
      continue;
    }
    if (child.parent != -1) {
      errs.push_back("node '" + es.child + "' has more than one parent edge");
      continue;
    }
    if (!(es.a_length > ExtRat(0))) errs.push_back(label + " has nonpositive length");
    if (es.mult < 1) errs.push_back(label + " has nonpositive multiplicity");
    if (child.type == PointType::T1 && es.a_length.finite()) errs.push_back("T1 requires infinite edge (" + label + ")");
    if (child.type != PointType::T1 && es.a_length.is_pos_inf())
      errs.push_back("infinite edge requires a T1 child (" + label + ")");
    child.parent = pi->second;
    child.a_length = es.a_length;
    child.edge_id = eid;
    edge_mult[static_cast<std::size_t>(ci->second)] = es.mult;
    nodes[static_cast<std::size_t>(pi->second)].children.push_back(ci->second);
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const Node& n = nodes[i];
    if (static_cast<int>(i) == tree->root_) continue;
    if (n.parent == -1) {
      errs.push_back("node '" + n.id + "' has no parent edge");
      continue;
    }
    if (edge_mult[i] != n.mult)
      errs.push_back("node '" + n.id + "' multiplicity differs from its parent edge multiplicity");
    if (edge_mult[i] < nodes[static_cast<std::size_t>(n.parent)].mult)
      errs.push_back("edge into '" + n.id + "' has multiplicity below its parent node");
    if ((n.type == PointType::T1 || n.type == PointType::T4) && !n.children.empty())
      errs.push_back(to_string(n.type) + " node '" + n.id + "' must be a leaf");
  }
  // Reachability from the root detects cycles among the parent links.
  std::vector<char> seen(nodes.size(), 0);
  std::vector<int> stack{tree->root_};
  while (!stack.empty()) {
    int c = stack.back();
    stack.pop_back();
    if (seen[static_cast<std::size_t>(c)]) continue;
    seen[static_cast<std::size_t>(c)] = 1;
    for (int ch : nodes[static_cast<std::size_t>(c)].children) stack.push_back(ch);
  }
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (!seen[i] && nodes[i].parent != -1) errs.push_back("cycle detected through node '" + nodes[i].id + "'");
  if (!errs.empty()) throw TreeError(errs);
  tree->finalize();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const ExtRat& A = tree->A_[i];
    if (!A.finite()) continue;
    const ExtRat& al = tree->alpha_[i];
    if (!(A / Rational(nodes[i].mult) <= al && al <= A)) errs.push_back("coordinate sandwich fails at '" + nodes[i].id + "'");
  }
  if (!errs.empty()) throw TreeError(errs);
  return tree;
}

void DiscTree::finalize() {
  std::size_t n = nodes_.size();
  A_.assign(n, ExtRat(0));
  alpha_.assign(n, ExtRat(0));
  depth_.assign(n, 0);
  by_id_.clear();
  by_edge_.clear();
  for (std::size_t i = 0; i < n; ++i) {
    by_id_[nodes_[i].id] = static_cast<int>(i);
    if (static_cast<int>(i) != root_) by_edge_[nodes_[i].edge_id] = static_cast<int>(i);
  }
  std::vector<int> stack{root_};
  while (!stack.empty()) {
    int c = stack.back();
    stack.pop_back();
    for (int ch : nodes_[static_cast<std::size_t>(c)].children) {
      auto ci = static_cast<std::size_t>(ch);
      const Node& nd = nodes_[ci];
      A_[ci] = A_[static_cast<std::size_t>(c)] + nd.a_length;
      alpha_[ci] = alpha_[static_cast<std::size_t>(c)] + nd.a_length / Rational(nd.mult);
      depth_[ci] = depth_[static_cast<std::size_t>(c)] + 1;
      stack.push_back(ch);
    }
  }
}

std::optional<int> DiscTree::find_node(const std::string& id) const {
  auto it = by_id_.find(id);
  if (it == by_id_.end()) return std::nullopt;
  return it->second;
}

std::optional<int> DiscTree::find_edge(const std::string& edge_id) const {
  auto it = by_edge_.find(edge_id);
  if (it == by_edge_.end()) return std::nullopt;
  return it->second;
}

bool DiscTree::is_ancestor(int a, int b) const {
  while (depth(b) > depth(a)) b = node(b).parent;
  return a == b;
}

int DiscTree::lca(int a, int b) const {
  while (depth(a) > depth(b)) a = node(a).parent;
  while (depth(b) > depth(a)) b = node(b).parent;
  while (a != b) {
    a = node(a).parent;
    b = node(b).parent;
  }
  return a;
}

std::vector<int> DiscTree::path_from_root(int n) const {
  std::vector<int> p;
  for (int c = n; c != -1; c = node(c).parent) p.push_back(c);
  std::reverse(p.begin(), p.end());
  return p;
}

void DiscTree::check_point(const TreePoint& p) const {
  if (p.node < 0 || static_cast<std::size_t>(p.node) >= size()) throw std::out_of_range("unknown point");
  if (p.is_node()) return;
  if (p.node == root_) throw std::out_of_range("the root has no parent edge");
  ExtRat off(*p.offset);
  if (!(off > ExtRat(0) && off < node(p.node).a_length))
    throw std::out_of_range("edge offset must lie strictly inside the edge");
}

ExtRat DiscTree::depth_A(const TreePoint& p) const {
  if (p.is_node()) return A(p.node);
  return A(node(p.node).parent) + ExtRat(*p.offset);
}

Coords DiscTree::coords(const TreePoint& p) const {
  check_point(p);
  if (p.is_node()) return {A(p.node), alpha(p.node), mult(p.node)};
  const Node& c = node(p.node);
  return {A(c.parent) + ExtRat(*p.offset), alpha(c.parent) + ExtRat(Rational(*p.offset / c.mult)), c.mult};
}

TreePoint DiscTree::join(const TreePoint& p, const TreePoint& q) const {
  check_point(p);
  check_point(q);
  int w = lca(p.node, q.node);
  if (w != p.node && w != q.node) return TreePoint::at(w);
  return depth_A(p) <= depth_A(q) ? p : q;
}

TreePoint DiscTree::retraction(const Subtree& s, const TreePoint& p) const {
  check_point(p);
  if (s.empty) throw std::invalid_argument("retraction onto an empty subtree");
  if (s.reach.size() != size()) throw std::invalid_argument("subtree does not match the tree");
  int c = p.node;
  ExtRat t = p.is_node() ? node(c).a_length : ExtRat(*p.offset);
  while (c != root_) {
    const ExtRat& r = s.reach[static_cast<std::size_t>(c)];
    if (t <= r) return t == node(c).a_length ? TreePoint::at(c) : TreePoint::on_edge(c, t.value());
    if (r > ExtRat(0)) return TreePoint::on_edge(c, r.value());
    c = node(c).parent;
    t = node(c).a_length;
  }
  return TreePoint::at(root_);
}

TreePoint DiscTree::point_on_path(int n, const ExtRat& a) const {
  if (a > A(n) || a < ExtRat(0)) throw std::out_of_range("depth outside the path");
  int c = n;
  while (c != root_ && A(node(c).parent) >= a) c = node(c).parent;
  if (A(c) == a) return TreePoint::at(c);
  return TreePoint::on_edge(c, (a - A(node(c).parent)).value());
}

std::string DiscTree::fresh_id(const std::string& base) const {
  std::string id = base;
  while (by_id_.count(id) || by_edge_.count("e_" + id)) id += "'";
  return id;
}

Insertion DiscTree::insert_point(const TreePoint& p, PointType type, const std::string& new_id) const {
  check_point(p);
  if (p.is_node()) throw std::invalid_argument("point is already a node");
  if (type != PointType::T2 && type != PointType::T3) throw std::invalid_argument("inserted points must be T2 or T3");
  auto t = std::make_shared<DiscTree>(*this);
  int c = p.node;
  int w = static_cast<int>(t->nodes_.size());
  Node nw;
  nw.id = new_id.empty() ? fresh_id(node(c).id + "_s") : new_id;
  if (by_id_.count(nw.id)) throw std::invalid_argument("node id '" + nw.id + "' already used");
  nw.type = type;
  nw.mult = node(c).mult;
  nw.parent = node(c).parent;
  nw.a_length = ExtRat(*p.offset);
  nw.edge_id = fresh_id("e_" + nw.id);
  nw.children = {c};
  nw.split_of = c;
  auto& siblings = t->nodes_[static_cast<std::size_t>(nw.parent)].children;
  std::replace(siblings.begin(), siblings.end(), c, w);
  Node& nc = t->nodes_[static_cast<std::size_t>(c)];
  nc.parent = w;
  nc.a_length = nc.a_length - ExtRat(*p.offset);
  t->nodes_.push_back(nw);
  t->finalize();
  return {t, w};
}

Insertion DiscTree::descend_multiplicity(int x, const std::string& new_id) const {
  check_point(TreePoint::at(x));
  PointType ty = node(x).type;
  if (ty == PointType::T1) throw std::invalid_argument("node '" + node(x).id + "' is already type 1");
  if (ty == PointType::T4) throw std::invalid_argument("node '" + node(x).id + "' is type 4");
  auto t = std::make_shared<DiscTree>(*this);
  Node leaf;
  leaf.id = new_id.empty() ? fresh_id(node(x).id + "'") : new_id;
  if (by_id_.count(leaf.id)) throw std::invalid_argument("node id '" + leaf.id + "' already used");
  leaf.type = PointType::T1;
  leaf.mult = node(x).mult;
  leaf.parent = x;
  leaf.a_length = ExtRat::pos_inf();
  leaf.descent = true;
  leaf.edge_id = fresh_id("e_" + leaf.id);
  int w = static_cast<int>(t->nodes_.size());
  t->nodes_[static_cast<std::size_t>(x)].children.push_back(w);
  t->nodes_.push_back(leaf);
  t->finalize();
  return {t, w};
}

bool DiscTree::refines(const DiscTree& coarse) const {
  if (&coarse == this) return true;
  if (size() < coarse.size() || root_ != coarse.root_) return false;
  for (std::size_t i = 0; i < coarse.size(); ++i) {
    const Node &a = nodes_[i], &b = coarse.nodes_[i];
    if (a.id != b.id || a.type != b.type || a.mult != b.mult || A_[i] != coarse.A_[i]) return false;
    if (b.parent >= 0 && !is_ancestor(b.parent, static_cast<int>(i))) return false;
  }
  for (std::size_t i = coarse.size(); i < size(); ++i)
    if (nodes_[i].split_of < 0 && !nodes_[i].descent) return false;
  return true;
}

TreePoint DiscTree::transfer(const DiscTree& coarse, const TreePoint& p) const {
  coarse.check_point(p);
  if (&coarse == this) return p;
  return point_on_path(p.node, coarse.depth_A(p));
}

std::string DiscTree::point_str(const TreePoint& p) const {
  if (p.is_node()) return "node:" + node(p.node).id;
  return "edge:" + node(p.node).edge_id + ":" + to_string(*p.offset);
}

}  // namespace berkdisc
