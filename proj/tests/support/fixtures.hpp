#pragma once

// Hand-built scenes and brute-force oracles shared by the unit and acceptance tests.
// The oracles walk parent pointers and sample points themselves; they only borrow the
// tree's raw node records (ids, parents, lengths, multiplicities) from the library.

#include <map>
#include <random>
#include <string>
#include <vector>

#include "demailly.hpp"
#include "random_scene.hpp"
#include "scene_io.hpp"

namespace fx {

using namespace berkdisc;

inline Rational q(const std::string& s) { return parse_rational(s); }
inline Rational q(long n, long d = 1) { return make_rational(n, d); }
inline ExtRat inf() { return ExtRat::pos_inf(); }
inline ExtRat ninf() { return ExtRat::neg_inf(); }

inline TreePtr build(std::vector<NodeSpec> nodes, std::vector<EdgeSpec> edges, std::string root = "root") {
  return DiscTree::build({std::move(nodes), std::move(edges), std::move(root)});
}

// root -> rigid a on an infinite edge e1.
inline TreePtr scene_a() {
  return build({{"root", PointType::T2, 1}, {"a", PointType::T1, 1}}, {{"e1", "root", "a", inf(), 1}});
}

// root with infinite branches ea, eb to rigid a, b.
inline TreePtr scene_b() {
  return build({{"root", PointType::T2, 1}, {"a", PointType::T1, 1}, {"b", PointType::T1, 1}},
               {{"ea", "root", "a", inf(), 1}, {"eb", "root", "b", inf(), 1}});
}

// root -ey(len 4, m 2)-> y -ea(inf, m 2)-> rigid a.
inline TreePtr scene_c() {
  return build({{"root", PointType::T2, 1}, {"y", PointType::T2, 2}, {"a", PointType::T1, 2}},
               {{"ey", "root", "y", ExtRat(4), 2}, {"ea", "y", "a", inf(), 2}});
}

// root -ex(len 1)-> type-4 leaf x.
inline TreePtr scene_d() {
  return build({{"root", PointType::T2, 1}, {"x", PointType::T4, 1}}, {{"ex", "root", "x", ExtRat(1), 1}});
}

inline int node(const DiscTree& t, const std::string& id) { return *t.find_node(id); }

inline QshFunction fn(const TreePtr& t, std::map<std::string, Rational> slopes, Rational root_value = 0) {
  std::vector<Rational> s(t->size(), Rational(0));
  for (const auto& [edge, v] : slopes) s[static_cast<std::size_t>(*t->find_edge(edge))] = v;
  return QshFunction(t, root_value, std::move(s));
}

inline FormalPoly poly(const TreePtr& t, std::map<std::string, long> roots, Rational c = 0) {
  std::map<int, long> r;
  for (const auto& [id, e] : roots) r[node(*t, id)] = e;
  return FormalPoly(t, c, std::move(r));
}

inline TreePoint at(const TreePtr& t, const std::string& id) { return TreePoint::at(node(*t, id)); }
inline TreePoint on(const TreePtr& t, const std::string& edge, Rational off) {
  return TreePoint::on_edge(*t->find_edge(edge), std::move(off));
}

// ---- oracles -------------------------------------------------------------

// Ancestor chain of a node, the node first.
inline std::vector<int> chain(const DiscTree& t, int n) {
  std::vector<int> out;
  for (int c = n; c >= 0; c = t.node(c).parent) out.push_back(c);
  return out;
}

struct RawCoords {
  ExtRat A{0};
  ExtRat alpha{0};
};

inline RawCoords raw_coords(const DiscTree& t, const TreePoint& p) {
  RawCoords c;
  auto ch = chain(t, p.node);
  for (std::size_t i = p.is_node() ? 0 : 1; i + 1 < ch.size(); ++i) {
    const Node& nd = t.node(ch[i]);
    c.A += nd.a_length;
    c.alpha += nd.a_length.finite() ? ExtRat(Rational(nd.a_length.value() / nd.mult)) : inf();
  }
  if (!p.is_node()) {
    c.A += ExtRat(*p.offset);
    c.alpha += ExtRat(Rational(*p.offset / t.node(p.node).mult));
  }
  return c;
}

// phi at p by summing slope times alpha-length over the edges crossed on the way down.
inline ExtRat raw_eval(const QshFunction& f, const TreePoint& p) {
  const DiscTree& t = f.tree();
  ExtRat v(f.root_value());
  auto ch = chain(t, p.node);
  for (std::size_t i = ch.size() - 1; i-- > 0;) {
    int c = ch[i];
    const Node& nd = t.node(c);
    bool last = i == 0;
    ExtRat len = last && !p.is_node() ? ExtRat(*p.offset) : nd.a_length;
    Rational s = f.slope(c);
    if (s == 0) continue;
    if (!len.finite()) return s < 0 ? ninf() : inf();
    v += ExtRat(Rational(s * len.value() / nd.mult));
  }
  return v;
}

// Join of two points: the one nearer the root when they share a chain, else the deepest common node.
inline TreePoint raw_join(const DiscTree& t, const TreePoint& p, const TreePoint& q) {
  auto cp = chain(t, p.node), cq = chain(t, q.node);
  if (p.node == q.node) return raw_coords(t, p).A <= raw_coords(t, q).A ? p : q;
  for (int a : cp)
    if (a == q.node) return q;  // q is a node above p, or an edge point on p's chain
  for (int b : cq)
    if (b == p.node) return p;
  for (int a : cp)
    for (int b : cq)
      if (a == b) return TreePoint::at(a);
  return TreePoint::at(t.root());
}

inline ExtRat raw_log_norm(const FormalPoly& f, const TreePoint& p) {
  const DiscTree& t = f.tree();
  ExtRat v(f.const_log());
  for (const auto& [x, e] : f.roots()) {
    TreePoint j = raw_join(t, p, TreePoint::at(x));
    // an edge point above x on x's chain is handled by the chain loops in raw_join
    ExtRat a = raw_coords(t, j).alpha;
    if (a == ExtRat(0)) continue;
    v -= ExtRat(Rational(e * t.node(x).mult)) * a;
  }
  return v;
}

inline std::map<int, Rational> raw_atoms(const QshFunction& f) {
  const DiscTree& t = f.tree();
  std::map<int, Rational> mu;
  for (std::size_t i = 0; i < t.size(); ++i) {
    int n = static_cast<int>(i);
    Rational a = n == t.root() ? Rational(0) : Rational(-f.slope(n));
    for (int c : t.node(n).children) a += f.slope(c);
    if (a != 0) mu[n] = a;
  }
  return mu;
}

// Sampled sup of log|f| - (1+eps) phi - A: nodes, eighths of finite edges, and a geometric
// walk down infinite edges that reports +inf when the values keep growing.
inline ExtRat sampled_sup(const FormalPoly& f, const QshFunction& phi, const Rational& eps) {
  const DiscTree& t = phi.tree();
  ExtRat best = ninf();
  auto F = [&](const TreePoint& p) {
    return raw_log_norm(f, p) - ExtRat(Rational(1 + eps)) * raw_eval(phi, p) - raw_coords(t, p).A;
  };
  for (std::size_t i = 0; i < t.size(); ++i) {
    int n = static_cast<int>(i);
    const Node& nd = t.node(n);
    if (nd.a_length.finite()) best = max(best, F(TreePoint::at(n)));
    if (n == t.root()) continue;
    if (nd.a_length.finite()) {
      for (long k = 1; k < 8; ++k) best = max(best, F(TreePoint::on_edge(n, nd.a_length.value() * q(k, 8))));
      continue;
    }
    ExtRat prev = ninf();
    for (long off = 1; off <= (1L << 12); off *= 2) {
      ExtRat v = F(TreePoint::on_edge(n, Rational(off)));
      best = max(best, v);
      if (off == (1L << 12) && v > prev) return inf();
      prev = v;
    }
  }
  return best;
}

inline std::vector<Scene> random_scenes(std::uint64_t first_seed, int count, int max_nodes = 10) {
  std::vector<Scene> out;
  for (int i = 0; i < count; ++i) out.push_back(random_scene(first_seed + static_cast<std::uint64_t>(i), max_nodes));
  return out;
}

inline TreePoint query(const Scene& s, std::size_t i) { return parse_point(*s.tree, s.queries.at(i)); }

}  // namespace fx
