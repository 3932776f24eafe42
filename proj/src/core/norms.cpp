#include "norms.hpp"

#include <stdexcept>

namespace berkdisc {

namespace {

struct Common {
  FormalPoly f;
  QshFunction phi;
};

Common on_common_tree(const FormalPoly& f, const QshFunction& phi) {
  TreePtr t = finer_tree(f.tree_ptr(), phi.tree_ptr());
  return {f.lift(t), phi.lift(t)};
}

}  // namespace

ExtRat twisted_value(const FormalPoly& f0, const QshFunction& phi0, const Rational& eps, const TreePoint& p0) {
  auto [f, phi] = on_common_tree(f0, phi0);
  TreePoint p = phi.tree().transfer(phi0.tree(), p0);
  Coords c = phi.tree().coords(p);
  if (!c.A.finite()) return ExtRat::neg_inf();
  return f.log_norm(p) - ExtRat(Rational(1 + eps)) * phi.eval(p) - c.A;
}

ExtRat sup_norm(const FormalPoly& f0, const QshFunction& phi0, const Rational& eps) {
  if (eps < 0) throw std::invalid_argument("eps must be nonnegative");
  auto [f, phi] = on_common_tree(f0, phi0);
  const DiscTree& t = phi.tree();
  Rational k = 1 + eps;
  ExtRat best = ExtRat::neg_inf();
  for (std::size_t i = 0; i < t.size(); ++i) {
    int n = static_cast<int>(i);
    if (t.A(n).finite()) {
      TreePoint p = TreePoint::at(n);
      best = max(best, f.log_norm(p) - ExtRat(k) * phi.eval(p) - t.A(n));
      continue;
    }
    // Infinite edge: the twisted function is affine in alpha; a positive slope sends it to +inf.
    Rational slope = f.edge_slope(n) - k * phi.slope(n) - t.mult(n);
    if (slope > 0) return ExtRat::pos_inf();
  }
  return best;
}

PlusNorm plus_norm(const FormalPoly& f0, const QshFunction& phi0) {
  auto [f, phi] = on_common_tree(f0, phi0);
  const DiscTree& t = phi.tree();
  PlusNorm r;
  ExtRat s = phi.sup();
  r.shift = s > ExtRat(0) ? s.value() : Rational(0);
  QshFunction psi = phi.shifted(-r.shift);
  for (std::size_t i = 0; i < t.size(); ++i) {
    int n = static_cast<int>(i);
    if (t.node(n).type != PointType::T1 || t.A(n).finite()) continue;
    // Tail slope (1+eps) c m - e m - m stays <= 0 for small eps > 0 exactly when e >= floor(c).
    Rational c = -psi.slope(n) / t.mult(n);
    if (c > 0 && f.exponent(n) < floor_to_long(c)) {
      r.value = ExtRat::pos_inf();
      return r;
    }
  }
  r.value = sup_norm(f, psi, Rational(0));
  return r;
}

Rational lelong_number(const QshFunction& phi, int x) {
  const DiscTree& t = phi.tree();
  if (t.node(x).type != PointType::T1) throw std::invalid_argument("node '" + t.node(x).id + "' is not rigid");
  return phi.atom(x) / t.mult(x);
}

FormalPoly h_generator(const QshFunction& phi) {
  const DiscTree& t = phi.tree();
  std::map<int, long> roots;
  for (std::size_t i = 0; i < t.size(); ++i) {
    int n = static_cast<int>(i);
    if (t.node(n).type != PointType::T1) continue;
    long e = floor_to_long(lelong_number(phi, n));
    if (e >= 1) roots[n] = e;
  }
  return FormalPoly(phi.tree_ptr(), Rational(0), std::move(roots));
}

bool h_membership(const FormalPoly& f0, const QshFunction& phi0) {
  auto [f, phi] = on_common_tree(f0, phi0);
  return f.divisible_by(h_generator(phi));
}

}  // namespace berkdisc
