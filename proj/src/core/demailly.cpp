#include "demailly.hpp"

#include <functional>
#include <stdexcept>

namespace berkdisc {

MultiplierData multiplier_exponents(const QshFunction& phi) {
  MultiplierData out;
  const DiscTree& t = phi.tree();
  for (std::size_t i = 0; i < t.size(); ++i) {
    int n = static_cast<int>(i);
    if (t.node(n).type != PointType::T1) continue;
    Rational c = lelong_number(phi, n);
    if (c > 0) out[n] = {c, floor_to_long(c)};
  }
  return out;
}

QshFunction demailly_exact_single_pole(const QshFunction& phi, long level) {
  if (level < 1) throw std::invalid_argument("level must be a positive integer");
  const DiscTree& t = phi.tree();
  if (phi.root_value() != 0) throw std::invalid_argument("single-pole formula needs root value 0");
  int pole = -1;
  for (std::size_t i = 0; i < t.size(); ++i) {
    int n = static_cast<int>(i);
    if (n == t.root() || phi.slope(n) == 0) continue;
    // the deepest nonzero edge decides the branch
    if (pole < 0 || t.is_ancestor(pole, n)) pole = n;
  }
  if (pole < 0) return phi;
  if (t.node(pole).type != PointType::T1)
    throw std::invalid_argument("function is not a multiple of log|g_a| for a rigid leaf a");
  auto path = t.path_from_root(pole);
  const Rational s = phi.slope(pole);
  std::vector<Rational> slopes(t.size(), Rational(0));
  for (std::size_t i = 1; i < path.size(); ++i) slopes[static_cast<std::size_t>(path[i])] = s;
  for (std::size_t i = 0; i < t.size(); ++i)
    if (slopes[i] != phi.slopes()[i])
      throw std::invalid_argument("function is not a multiple of log|g_a| for a rigid leaf a");
  Rational c = -s / t.mult(pole);
  if (c < 0) throw std::invalid_argument("negative multiple of log|g_a|");
  Rational k(level);
  Rational ck = floor_of(Rational(k * c)) / k;
  for (std::size_t i = 1; i < path.size(); ++i) slopes[static_cast<std::size_t>(path[i])] = -ck * t.mult(pole);
  return QshFunction(phi.tree_ptr(), Rational(0), std::move(slopes));
}

ExtRat demailly_candidate(const FormalPoly& f, const QshFunction& scaled_phi, long level, const TreePoint& y) {
  PlusNorm pn = plus_norm(f, scaled_phi);
  if (pn.value.is_pos_inf()) return ExtRat::neg_inf();
  TreePtr t = finer_tree(f.tree_ptr(), scaled_phi.tree_ptr());
  FormalPoly ff = f.lift(t);
  TreePoint yy = t->transfer(scaled_phi.tree(), y);
  return (ff.log_norm(yy) - pn.raw()) / Rational(level);
}

DemaillyBound demailly_bounds(const QshFunction& phi_in, long level, const TreePoint& y,
                              const std::vector<FormalPoly>& extra) {
  if (level < 1) throw std::invalid_argument("level must be a positive integer");
  phi_in.tree().check_point(y);
  DemaillyBound b;
  b.query = y;
  b.level = level;
  ExtRat s = phi_in.sup();
  b.shift = s > ExtRat(0) ? s.value() : Rational(0);
  QshFunction phi = phi_in.shifted(-b.shift);
  const DiscTree& t = phi.tree();
  b.value = phi.eval(y);
  ExtRat a = t.coords(y).A;
  b.upper = a.finite() ? b.value + a / Rational(level) : ExtRat::pos_inf();

  QshFunction scaled = phi.scaled(Rational(level));
  b.lower = ExtRat::neg_inf();
  auto consider = [&](const FormalPoly& f, const char* source) {
    ExtRat v = demailly_candidate(f, scaled, level, y);
    if (b.witness_source.empty() || v > b.lower) {
      b.lower = v;
      b.witness = f;
      b.witness_source = source;
    }
  };
  consider(h_generator(scaled), "generator");
  consider(extend(scaled, y).f, "extension");
  for (const FormalPoly& f : extra) consider(f, "user");
  return b;
}

ExtRat demailly_bruteforce(const QshFunction& phi, long level, const TreePoint& y, long degree_bound) {
  if (level < 1 || degree_bound < 0) throw std::invalid_argument("level must be positive and degree bound nonnegative");
  const DiscTree& t = phi.tree();
  std::vector<int> rigid;
  for (std::size_t i = 0; i < t.size(); ++i)
    if (t.node(static_cast<int>(i)).type == PointType::T1) rigid.push_back(static_cast<int>(i));
  QshFunction scaled = phi.scaled(Rational(level));
  ExtRat best = ExtRat::neg_inf();
  std::map<int, long> exps;
  std::function<void(std::size_t, long)> walk = [&](std::size_t k, long left) {
    if (k == rigid.size()) {
      best = max(best, demailly_candidate(FormalPoly(phi.tree_ptr(), Rational(0), exps), scaled, level, y));
      return;
    }
    for (long e = 0; e <= left; ++e) {
      exps[rigid[k]] = e;
      walk(k + 1, left - e);
    }
    exps.erase(rigid[k]);
  };
  walk(0, degree_bound);
  return best;
}

SubadditivityReport subadditivity_check(const QshFunction& phi0, const QshFunction& psi0) {
  TreePtr t = finer_tree(phi0.tree_ptr(), psi0.tree_ptr());
  QshFunction phi = phi0.lift(t), psi = psi0.lift(t);
  QshFunction sum = phi.plus(psi);
  SubadditivityReport r;
  for (std::size_t i = 0; i < t->size(); ++i) {
    int n = static_cast<int>(i);
    if (t->node(n).type != PointType::T1) continue;
    SubadditivityRow row;
    row.node = n;
    row.sum = floor_to_long(lelong_number(sum, n));
    row.first = floor_to_long(lelong_number(phi, n));
    row.second = floor_to_long(lelong_number(psi, n));
    row.ok = row.sum >= row.first + row.second;
    r.ok = r.ok && row.ok;
    r.rows.push_back(row);
  }
  return r;
}

}  // namespace berkdisc
