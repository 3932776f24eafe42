#include "extension.hpp"

#include <algorithm>
#include <sstream>

namespace berkdisc {

namespace {

struct Budget {
  int depth = 0;
  int limit = 0;
};

// One level of the reduction: phi normalized, z a node, phi truncated to the hull of Gamma and z.
struct Level {
  QshFunction phi;
  int z = -1;
  Rational mass{0};
  long n = 0;
  Subtree gamma;
  Subtree hull;
  QshFunction phi_r;
  int z_ret = -1;
  std::vector<int> ends;
};

QshFunction normalized(const QshFunction& phi) { return phi.shifted(-phi.root_value()); }

std::string q(const Rational& r) { return to_string(r); }

Level prepare(const QshFunction& phi_in, const TreePoint& z_in) {
  Level L;
  QshFunction phi = normalized(phi_in);
  phi.tree().check_point(z_in);
  if (z_in.is_node()) {
    L.z = z_in.node;
  } else {
    Insertion ins = phi.tree().insert_point(z_in, PointType::T2, phi.tree().fresh_id("z"));
    phi = phi.lift(ins.tree);
    L.z = ins.node;
  }
  QshValidation v = phi.validate();
  if (!v.ok) throw std::invalid_argument("function is not quasisubharmonic: " + v.violations.front());
  L.mass = v.mass;
  L.phi = phi;
  const DiscTree& t = phi.tree();
  if (L.mass < 1) {
    L.gamma = Subtree::none(t);
    L.hull = Subtree::root_only(t);
  } else {
    L.n = choose_truncation(phi);
    L.gamma = gamma_tree(phi, std::nullopt);
    L.hull = L.gamma;
    L.z_ret = t.retraction(L.gamma, TreePoint::at(L.z)).node;
    for (std::size_t i = 0; i < t.size(); ++i) {
      int c = static_cast<int>(i);
      if (!L.gamma.contains_node(t, c)) continue;
      bool leaf = std::none_of(t.node(c).children.begin(), t.node(c).children.end(),
                               [&](int ch) { return L.gamma.contains_node(t, ch); });
      if (leaf) L.ends.push_back(c);
    }
  }
  L.hull.add_path(t, TreePoint::at(L.z));
  L.phi_r = retract_pullback(phi, L.hull);
  return L;
}

Certificate solve(const QshFunction& phi, const TreePoint& z, Budget& budget);

Certificate finish(const Level& L, Certificate c, TraceStep step) {
  if (L.mass >= 1) {
    c.eps0 = std::min(c.eps0, Rational(make_rational(1, L.n)));
  } else if (step.kind == "segment") {
    // Below unit mass the truncation is justified by the base-case slope bound instead of 1/n.
    Rational b = L.mass == 0 ? Rational(1) : Rational((1 - L.mass) / L.mass);
    c.eps0 = std::min(c.eps0, b);
  }
  if (c.eps0 <= 0) throw ExtensionDefect(step.kind + " step produced a nonpositive eps0");
  step.mass = L.mass;
  step.n = L.n;
  step.eps0 = c.eps0;
  TreePoint z = TreePoint::at(L.z);
  for (const Rational& e : {c.eps0, Rational(c.eps0 / 2)}) {
    if (!verify_certificate(L.phi, z, c.f, e)) {
      std::ostringstream os;
      os << step.kind << " step" << (step.node.empty() ? "" : " at '" + step.node + "'") << " produced f = " << c.f.str()
         << " that fails verification at eps = " << q(e) << " (sup = " << sup_norm(c.f, L.phi, e)
         << ", " << step.detail << ")";
      throw ExtensionDefect(os.str());
    }
  }
  c.trace.insert(c.trace.begin(), std::move(step));
  return c;
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

bool is_end(const Level& L, int x) { return std::find(L.ends.begin(), L.ends.end(), x) != L.ends.end(); }

int child_toward(const DiscTree& t, int top, int target) {
  int c = target;
  while (t.node(c).parent != top) c = t.node(c).parent;
  return c;
}

Certificate base_impl(const Level& L) {
  require(L.mass < 1, "base step requires mass below 1");
  Certificate c;
  c.f = FormalPoly::one(L.phi.tree_ptr());
  c.eps0 = L.mass == 0 ? Rational(1) : std::min(Rational(1), Rational((1 - L.mass) / L.mass));
  return finish(L, std::move(c), {"base", "", 0, 0, 0, "mass " + q(L.mass)});
}

Certificate type1_impl(const Level& L, int x, Budget& budget) {
  const DiscTree& t = L.phi.tree();
  require(t.node(x).type == PointType::T1 && is_end(L, x), "type-1 step requires a rigid end of the Gamma tree");
  Rational c = lelong_number(L.phi_r, x);
  long g = floor_to_long(c);
  long mx = t.mult(x);
  std::vector<Rational> s = L.phi_r.slopes();
  auto path = t.path_from_root(x);
  for (std::size_t i = 1; i < path.size(); ++i) s[static_cast<std::size_t>(path[i])] += Rational(g * mx);
  QshFunction reduced(L.phi_r.tree_ptr(), Rational(0), std::move(s));

  Subtree gt = gamma_tree(reduced, L.n);
  int xt = t.root();
  for (std::size_t i = 1; i < path.size(); ++i)
    if (gt.contains_node(t, path[i])) xt = path[i];

  Certificate sub = solve(reduced, TreePoint::at(L.z), budget);
  Certificate out;
  out.f = sub.f.times(FormalPoly::factor(sub.tree(), x, g));
  out.trace = std::move(sub.trace);
  const Rational& e1 = sub.eps0;
  std::ostringstream detail;
  detail << "c = " << q(c) << ", gamma = " << g;
  Rational n(L.n);
  if (is_integer(c)) {
    Rational eps = e1;
    eps = std::min(eps, Rational(e1 * n / (mx * c * (n + 1) + n)));
    int vx = child_toward(t, xt, x);
    eps = std::min(eps, Rational(Rational(t.mult(vx)) / ((c * (n + 1) + n) * mx)));
    if (L.z_ret != L.z) {
      int vz = child_toward(t, L.z_ret, L.z);
      eps = std::min(eps, Rational(Rational(t.mult(vz)) / (n * t.mult(L.z_ret))));
    }
    out.eps0 = eps;
    detail << ", case 1";
  } else {
    out.eps0 = e1 * (c - g) / c;
    detail << ", case 2";
  }
  return finish(L, std::move(out), {"type1", t.node(x).id, 0, 0, 0, detail.str()});
}

Certificate type23_impl(const Level& L, int x, Budget& budget) {
  const DiscTree& t = L.phi.tree();
  PointType ty = t.node(x).type;
  require((ty == PointType::T2 || ty == PointType::T3) && is_end(L, x) && x != t.root(),
          "type-2/3 step requires a type-2 or type-3 end of the Gamma tree");
  require(x != L.z_ret, "type-2/3 step requires an end different from the retraction of z");
  Rational atom = L.phi_r.atom(x);
  Insertion ins = t.descend_multiplicity(x);
  QshFunction extended = L.phi_r.lift(ins.tree).with_slope(ins.node, -atom);
  Certificate sub = solve(extended, TreePoint::at(L.z), budget);
  std::string detail = "c = " + q(atom / t.mult(x)) + ", rigid point '" + ins.tree->node(ins.node).id + "'";
  return finish(L, std::move(sub), {"type23", t.node(x).id, 0, 0, 0, detail});
}

Certificate type4_impl(const Level& L, int x, Budget& budget) {
  const DiscTree& t = L.phi.tree();
  require(t.node(x).type == PointType::T4 && is_end(L, x), "type-4 step requires a type-4 end of the Gamma tree");
  require(x != L.z, "type-4 step requires the end to differ from z");
  for (const Node& nd : t.nodes()) require(nd.mult == 1, "type-4 step requires all multiplicities equal to 1");

  // Lowest point above x where another branch of the hull (or z itself) meets the path.
  auto hull_children = [&](int w) {
    long k = 0;
    for (int ch : t.node(w).children) k += L.hull.contains_node(t, ch) ? 1 : 0;
    return k;
  };
  int xt = t.node(x).parent;
  while (xt != t.root() && xt != L.z && hull_children(xt) < 2) xt = t.node(xt).parent;
  auto path = t.path_from_root(x);
  auto top = std::find(path.begin(), path.end(), xt);
  std::vector<int> segment(top + 1, path.end());

  Rational c = -L.phi_r.slope(segment.front());
  long g = floor_to_long(c);
  std::vector<Rational> s = L.phi_r.slopes();
  for (int p : segment) s[static_cast<std::size_t>(p)] = -c;
  QshFunction linear(L.phi_r.tree_ptr(), Rational(0), s);
  for (std::size_t i = 1; i < path.size(); ++i) s[static_cast<std::size_t>(path[i])] += g;
  QshFunction reduced(L.phi_r.tree_ptr(), Rational(0), std::move(s));

  Certificate sub = solve(reduced, TreePoint::at(L.z), budget);
  const Rational& e1 = sub.eps0;
  Rational red_x = reduced.eval_node(x).value();
  Rational lin_x = linear.eval_node(x).value();
  Rational ax = t.A(x).value();  // equals alpha(x) with unit multiplicities

  Rational eta_bound = ax / c;
  if (red_x < 0) eta_bound = std::min(eta_bound, Rational(-e1 * red_x / c));
  Rational eta = eta_bound / 2;
  Rational delta = std::min(eta, Rational(ax - t.A(xt).value())) / 2;

  TreePtr tr = sub.tree();
  TreePoint up = tr->point_on_path(x, ExtRat(Rational(ax - delta)));
  int u = up.node;
  if (!up.is_node()) {
    Insertion ins = tr->insert_point(up, PointType::T2, tr->fresh_id("u"));
    tr = ins.tree;
    u = ins.node;
  }
  Insertion rigid = tr->descend_multiplicity(u);
  tr = rigid.tree;

  Certificate out;
  out.f = sub.f.lift(tr).times(FormalPoly::factor(tr, rigid.node, g));
  out.trace = std::move(sub.trace);
  Rational n(L.n);
  Rational eps = e1;
  std::ostringstream detail;
  detail << "c = " << q(c) << ", gamma = " << g << ", eta = " << q(eta) << ", u at alpha " << q(ax - delta);
  if (is_integer(c) && red_x == 0) {
    eps = std::min(eps, Rational((ax - c * eta) / (c * ax)));
    detail << ", case 1";
  } else if (is_integer(c)) {
    eps = std::min(eps, Rational(e1 * n / (n + c * (n + 1))));
    eps = std::min(eps, Rational((-e1 * red_x - c * eta) / (-red_x + c * ax)));
    eps = std::min(eps, Rational(1 / ((n + 1) * g + n)));
    detail << ", case 2";
  } else {
    eps = std::min(eps, Rational(e1 * n / (g * (n + 1) + n)));
    eps = std::min(eps, Rational(1 / ((n + 1) * g + n)));
    eps = std::min(eps, Rational((-red_x * e1 - g * eta) / (-lin_x)));
    detail << ", case 3";
  }
  out.eps0 = eps;
  return finish(L, std::move(out), {"type4", t.node(x).id, 0, 0, 0, detail.str()});
}

Certificate segment_impl(const Level& L) {
  const DiscTree& t = L.phi.tree();
  for (int e : L.ends) {
    PointType ty = t.node(e).type;
    require(ty != PointType::T1, "segment step is not applicable: the Gamma tree has a rigid end");
    require(ty != PointType::T4 || e == L.z, "segment step is not applicable: the Gamma tree has a type-4 end");
    require(ty == PointType::T4 || e == L.z_ret, "segment step is not applicable: an end differs from the retraction of z");
  }
  for (std::size_t i = 0; i < t.size(); ++i)
    require(!L.hull.contains_node(t, static_cast<int>(i)) || t.is_ancestor(static_cast<int>(i), L.z),
            "segment step is not applicable: the hull is not the segment from z to the root");
  Certificate c;
  c.f = FormalPoly::one(L.phi.tree_ptr());
  c.eps0 = 1;
  std::string detail = "z at the root";
  if (L.z != t.root()) {
    int v = child_toward(t, t.root(), L.z);
    const Rational& sl = L.phi_r.slope(v);
    if (sl != 0) c.eps0 = Rational(t.mult(v)) / (-sl);
    detail = "root slope " + q(sl);
  }
  return finish(L, std::move(c), {"segment", "", 0, 0, 0, detail});
}

Certificate solve(const QshFunction& phi, const TreePoint& z, Budget& budget) {
  Level L = prepare(phi, z);
  if (++budget.depth > budget.limit)
    throw ExtensionDefect("reduction exceeded its depth bound of " + std::to_string(budget.limit));
  if (L.mass < 1) return base_impl(L);
  const DiscTree& t = L.phi.tree();
  for (int e : L.ends)
    if (t.node(e).type == PointType::T1) return type1_impl(L, e, budget);
  for (int e : L.ends) {
    PointType ty = t.node(e).type;
    if ((ty == PointType::T2 || ty == PointType::T3) && e != L.z_ret && e != t.root()) return type23_impl(L, e, budget);
  }
  for (int e : L.ends)
    if (t.node(e).type == PointType::T4 && e != L.z) return type4_impl(L, e, budget);
  return segment_impl(L);
}

Budget budget_for(const QshFunction& phi) {
  QshValidation v = phi.validate();
  if (!v.ok) throw std::invalid_argument("function is not quasisubharmonic: " + v.violations.front());
  return Budget{0, static_cast<int>(floor_to_long(v.mass)) + static_cast<int>(phi.tree().size())};
}

void final_check(const QshFunction& phi, const TreePoint& z, const Certificate& c) {
  QshFunction ph = normalized(phi);
  if (!verify_certificate(ph, z, c.f, c.eps0) || !verify_certificate(ph, z, c.f, Rational(c.eps0 / 2)))
    throw ExtensionDefect("assembled certificate fails verification");
}

}  // namespace

long choose_truncation(const QshFunction& phi) {
  const DiscTree& t = phi.tree();
  auto S = phi.below_masses();
  Rational worst = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    Rational r = S[i] / t.mult(static_cast<int>(i));
    if (r > 0 && r < 1) worst = std::max(worst, r);
  }
  return floor_to_long(Rational(worst / (1 - worst))) + 1;
}

bool verify_certificate(const QshFunction& phi, const TreePoint& z, const FormalPoly& f0, const Rational& eps) {
  TreePtr t = finer_tree(f0.tree_ptr(), phi.tree_ptr());
  QshFunction ph = phi.lift(t);
  FormalPoly f = f0.lift(t);
  TreePoint zz = t->transfer(phi.tree(), z);
  ExtRat lhs = sup_norm(f, ph, eps);
  ExtRat phz = ph.eval(zz);
  if (phz.is_neg_inf()) return lhs < ExtRat::pos_inf();
  return lhs <= f.log_norm(zz) - phz;
}

bool verify_certificate(const QshFunction& phi, const TreePoint& z, const Certificate& cert) {
  return verify_certificate(phi, z, cert.f, cert.eps0);
}

Certificate extend(const QshFunction& phi, const TreePoint& z) {
  Budget b = budget_for(phi);
  Certificate c = solve(phi, z, b);
  final_check(phi, z, c);
  return c;
}

namespace {

template <class Fn>
Certificate run_step(const QshFunction& phi, const TreePoint& z, Fn&& fn) {
  Budget b = budget_for(phi);
  Level L = prepare(phi, z);
  b.depth = 1;
  Certificate c = fn(L, b);
  final_check(phi, z, c);
  return c;
}

}  // namespace

Certificate step_base(const QshFunction& phi, const TreePoint& z) {
  return run_step(phi, z, [](const Level& L, Budget&) { return base_impl(L); });
}

Certificate step_type1(const QshFunction& phi, const TreePoint& z, int x) {
  return run_step(phi, z, [x](const Level& L, Budget& b) { return type1_impl(L, x, b); });
}

Certificate step_type23(const QshFunction& phi, const TreePoint& z, int x) {
  return run_step(phi, z, [x](const Level& L, Budget& b) {
    require(L.mass >= 1, "type-2/3 step requires mass at least 1");
    return type23_impl(L, x, b);
  });
}

Certificate step_type4(const QshFunction& phi, const TreePoint& z, int x) {
  return run_step(phi, z, [x](const Level& L, Budget& b) {
    require(L.mass >= 1, "type-4 step requires mass at least 1");
    return type4_impl(L, x, b);
  });
}

Certificate step_segment(const QshFunction& phi, const TreePoint& z) {
  return run_step(phi, z, [](const Level& L, Budget&) { return segment_impl(L); });
}

}  // namespace berkdisc
