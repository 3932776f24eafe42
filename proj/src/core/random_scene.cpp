#include "random_scene.hpp"

#include <algorithm>

namespace berkdisc {

namespace {

long uniform(std::mt19937_64& rng, long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }

bool coin(std::mt19937_64& rng, long num, long den) { return uniform(rng, 1, den) <= num; }

Rational small_rational(std::mt19937_64& rng, long max_num) {
  static const long dens[] = {1, 2, 3, 4, 6};
  long d = dens[uniform(rng, 0, 4)];
  return make_rational(uniform(rng, 1, max_num * d), d);
}

}  // namespace

QshFunction random_qsh(const TreePtr& tp, std::mt19937_64& rng) {
  const DiscTree& t = *tp;
  std::vector<Rational> atom(t.size(), Rational(0));
  long weight = uniform(rng, 1, 3);  // scales how much mass lands in the scene
  for (std::size_t i = 0; i < t.size(); ++i)
    if (static_cast<int>(i) != t.root() && coin(rng, 1, 2)) atom[i] = small_rational(rng, weight);
  std::vector<Rational> slopes(t.size(), Rational(0));
  std::vector<int> order(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return t.depth(a) > t.depth(b); });
  std::vector<Rational> below = atom;
  for (int n : order) {
    auto i = static_cast<std::size_t>(n);
    if (n == t.root()) continue;
    below[static_cast<std::size_t>(t.node(n).parent)] += below[i];
    slopes[i] = -below[i];
  }
  Rational root_value = make_rational(uniform(rng, -8, 8), 4);
  return QshFunction(tp, root_value, std::move(slopes));
}

FormalPoly random_poly(const TreePtr& tp, std::mt19937_64& rng, long max_exponent) {
  std::map<int, long> roots;
  for (std::size_t i = 0; i < tp->size(); ++i)
    if (tp->node(static_cast<int>(i)).type == PointType::T1) roots[static_cast<int>(i)] = uniform(rng, 0, max_exponent);
  return FormalPoly(tp, Rational(0), std::move(roots));
}

TreePoint random_point(const DiscTree& t, std::mt19937_64& rng, bool finite_only) {
  for (;;) {
    int n = static_cast<int>(uniform(rng, 0, static_cast<long>(t.size()) - 1));
    if (n == t.root() || coin(rng, 1, 2)) {
      if (finite_only && !t.A(n).finite()) continue;
      return TreePoint::at(n);
    }
    const ExtRat& len = t.node(n).a_length;
    Rational cap = len.finite() ? len.value() : Rational(4);
    long den = uniform(rng, 2, 6);
    Rational off = cap * make_rational(uniform(rng, 1, den - 1), den);
    return TreePoint::on_edge(n, off);
  }
}

Scene random_scene(std::uint64_t seed, int max_nodes) {
  std::mt19937_64 rng(seed);
  bool unit = coin(rng, 1, 2);
  int count = static_cast<int>(uniform(rng, 2, std::max(2, max_nodes)));
  TopologySpec top;
  top.root = "r";
  top.nodes.push_back({"r", PointType::T2, 1});
  std::vector<int> open = {0};  // nodes that may receive children
  std::vector<long> mult = {1};
  for (int i = 1; i < count; ++i) {
    int parent = open[static_cast<std::size_t>(uniform(rng, 0, static_cast<long>(open.size()) - 1))];
    long m = mult[static_cast<std::size_t>(parent)];
    if (!unit && coin(rng, 1, 3)) m = std::min<long>(m * uniform(rng, 2, 3), 6);
    long kind = uniform(rng, 0, unit ? 3 : 2);
    PointType ty = kind == 0 ? PointType::T1 : kind == 1 ? PointType::T2 : kind == 2 ? PointType::T3 : PointType::T4;
    std::string id = "n" + std::to_string(i);
    top.nodes.push_back({id, ty, m});
    ExtRat len = ty == PointType::T1 ? ExtRat::pos_inf() : ExtRat(small_rational(rng, 2));
    top.edges.push_back({"e" + std::to_string(i), top.nodes[static_cast<std::size_t>(parent)].id, id, len, m});
    mult.push_back(m);
    if (ty == PointType::T2 || ty == PointType::T3) open.push_back(i);
  }
  Scene s = make_scene(std::move(top));
  s.functions.emplace_back("phi", random_qsh(s.tree, rng));
  s.functions.emplace_back("psi", random_qsh(s.tree, rng));
  s.polys.emplace_back("f", random_poly(s.tree, rng));
  s.queries.push_back(format_point(*s.tree, random_point(*s.tree, rng, false)));
  for (int i = 0; i < 5; ++i) s.queries.push_back(format_point(*s.tree, random_point(*s.tree, rng, true)));
  return s;
}

}  // namespace berkdisc
