// Acceptance suite: one line per criterion, exact arithmetic throughout.
// Exit status is nonzero when any criterion fails or exceeds its time budget.

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>

#include "fixtures.hpp"

using namespace fx;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects the first few failures so a FAIL line says what went wrong.
struct Tally {
  long checks = 0;
  long failures = 0;
  std::ostringstream first;

  void expect(bool ok, const std::string& what) {
    ++checks;
    if (ok) return;
    if (failures++ < 3) first << (failures > 1 ? "; " : "") << what;
  }
  Outcome done(const std::string& summary) const {
    if (failures == 0) return {true, summary + ", " + std::to_string(checks) + " checks"};
    return {false, std::to_string(failures) + "/" + std::to_string(checks) + " failed: " + first.str()};
  }
};

std::string str(const ExtRat& v) { return v.str(); }

// ---- 1 ----
Outcome single_pole_example() {
  Tally t;
  TreePtr a = scene_a();
  int pole = node(*a, "a");
  QshFunction phi = fn(a, {{"e1", q(-3, 2)}});
  std::map<long, Rational> want{{1, q(1)},    {2, q(3, 2)}, {3, q(4, 3)},  {4, q(3, 2)},
                                {5, q(7, 5)}, {6, q(3, 2)}, {7, q(10, 7)}, {8, q(3, 2)}};
  std::vector<TreePoint> ys{at(a, "root"), on(a, "e1", q(1, 2)), on(a, "e1", q(1)), on(a, "e1", q(3)),
                            on(a, "e1", q(10))};
  for (const auto& [m, c] : want) {
    QshFunction pm = demailly_exact_single_pole(phi, m);
    Rational got = -pm.slope(pole);
    t.expect(got == c, "m=" + std::to_string(m) + " slope " + got.get_str());
    long degree = 3 * m / 2 + 1;
    for (const TreePoint& y : ys) {
      ExtRat bf = demailly_bruteforce(phi, m, y, degree);
      t.expect(bf == pm.eval(y), "m=" + std::to_string(m) + " brute force " + str(bf) + " vs " + str(pm.eval(y)) +
                                     " at " + a->point_str(y));
    }
  }
  return t.done("slopes for m=1..8 and brute force at 5 points");
}

// ---- 2 ----
Outcome integrability_threshold() {
  Tally t;
  TreePtr a = scene_a();
  for (Rational al : {q(1, 2), q(9, 10), q(1), q(3, 2)}) {
    PlusNorm pn = plus_norm(FormalPoly::one(a), fn(a, {{"e1", Rational(-al)}}));
    t.expect(pn.value.finite() == (al < 1), "alpha=" + al.get_str() + " gives " + str(pn.value));
  }
  return t.done("finite exactly below 1");
}

// ---- 3 ----
Outcome extension_soundness() {
  Tally t;
  int scenes = 0, poles = 0, type4 = 0;
  std::map<std::string, long> kinds;
  for (const Scene& s : random_scenes(1, 250)) {
    ++scenes;
    const QshFunction& phi = s.function("phi");
    TreePoint z = query(s, 0);
    if (z.is_node() && s.tree->node(z.node).type == PointType::T1) ++poles;
    if (z.is_node() && s.tree->node(z.node).type == PointType::T4) ++type4;
    std::string tag = "scene " + std::to_string(scenes) + " z=" + s.queries[0];
    try {
      Certificate c = extend(phi, z);
      QshFunction norm = phi.shifted(-phi.root_value());
      t.expect(c.eps0 > 0, tag + " eps0 <= 0");
      t.expect(verify_certificate(norm, z, c.f, c.eps0), tag + " fails at eps0");
      t.expect(verify_certificate(norm, z, c.f, Rational(c.eps0 / 2)), tag + " fails at eps0/2");
      long limit = floor_to_long(phi.validate().mass) + static_cast<long>(s.tree->size());
      t.expect(static_cast<long>(c.trace.size()) <= limit, tag + " depth " + std::to_string(c.trace.size()));
      for (const TraceStep& st : c.trace) ++kinds[st.kind];
    } catch (const std::exception& e) {
      t.expect(false, tag + " threw " + e.what());
    }
  }
  t.expect(poles > 0 && type4 > 0, "z never hit a pole or a type-4 leaf");
  std::ostringstream os;
  os << scenes << " scenes (z: " << poles << " poles, " << type4 << " type-4 leaves); steps";
  for (const auto& [k, n] : kinds) os << " " << k << "=" << n;
  return t.done(os.str());
}

// ---- 4 ----
Outcome sharpness() {
  Tally t;
  long equal = 0;
  for (const Scene& s : random_scenes(5001, 60)) {
    QshFunction zero = QshFunction::zero(s.tree);
    for (std::size_t i = 0; i < s.queries.size(); ++i) {
      TreePoint z = query(s, i);
      Certificate c = extend(zero, z);
      QshFunction lifted = zero.lift(c.tree());
      ExtRat slack = sup_norm(c.f, lifted, c.eps0) - c.f.log_norm(c.tree()->transfer(*s.tree, z));
      t.expect(slack >= ExtRat(0), "negative slack " + str(slack) + " at " + s.queries[i]);
      if (slack == ExtRat(0)) ++equal;
    }
  }
  t.expect(equal > 0, "equality never attained");
  return t.done("equality at " + std::to_string(equal) + " points");
}

// ---- 5 ----
Outcome sandwich() {
  Tally t;
  for (const Scene& s : random_scenes(7001, 50)) {
    const QshFunction& phi = s.function("phi");
    for (long m : {1L, 2L, 3L}) {
      for (std::size_t i = 1; i <= 5; ++i) {
        TreePoint y = query(s, i);
        ExtRat A = s.tree->coords(y).A;
        t.expect(A.finite(), "query with infinite A");
        DemaillyBound b = demailly_bounds(phi, m, y);
        std::string tag = "m=" + std::to_string(m) + " y=" + s.queries[i];
        t.expect(b.value == phi.eval(y) - ExtRat(b.shift), tag + " value");
        t.expect(b.value <= b.lower, tag + " lower " + str(b.lower) + " below " + str(b.value));
        t.expect(b.lower <= b.upper, tag + " lower above upper");
        t.expect(b.upper == b.value + A / Rational(m), tag + " upper");
      }
    }
  }
  return t.done("50 scenes x 3 levels x 5 points");
}

// ---- 6 ----
Outcome coherence() {
  Tally t;
  long members = 0, pairs = 0;
  std::mt19937_64 rng(606);
  for (const Scene& s : random_scenes(9001, 80)) {
    for (const auto& [name, phi] : s.functions) {
      FormalPoly h = h_generator(phi);
      MultiplierData md = multiplier_exponents(phi);
      for (std::size_t i = 0; i < s.tree->size(); ++i) {
        int x = static_cast<int>(i);
        long want = md.count(x) ? md.at(x).exponent : 0;
        t.expect(h.exponent(x) == want, "generator exponent differs from multiplier exponent");
      }
      std::vector<FormalPoly> fs{s.poly("f"), h, FormalPoly::one(s.tree)};
      for (int k = 0; k < 6; ++k) fs.push_back(random_poly(s.tree, rng, 4));
      for (const FormalPoly& f : fs) {
        ++pairs;
        bool in = h_membership(f, phi);
        bool finite = plus_norm(f, phi).value.finite();
        bool divisible = f.divisible_by(h);
        members += in;
        t.expect(in == finite && finite == divisible, "disagreement for " + f.str() + " / " + name);
      }
    }
  }
  return t.done(std::to_string(pairs) + " pairs, " + std::to_string(members) + " members");
}

// ---- 7 ----
Outcome structure() {
  Tally t;
  std::mt19937_64 rng(707);
  int subadd = 0;
  for (const Scene& s : random_scenes(11001, 100)) {
    const DiscTree& tr = *s.tree;
    for (const auto& [name, phi] : s.functions) t.expect(total_mass(phi.laplacian()) == 0, name + " mass");
    for (std::size_t i = 0; i < tr.size(); ++i) {
      Coords c = tr.coords(TreePoint::at(static_cast<int>(i)));
      if (!c.A.finite()) continue;
      t.expect(c.A / Rational(c.m) <= c.alpha && c.alpha <= c.A, "sandwich at " + tr.node(static_cast<int>(i)).id);
    }

    // subdivision at a random finite point leaves every coordinate where it was
    TreePoint cut = random_point(tr, rng, true);
    if (!cut.is_node()) {
      TreePtr fine = tr.insert_point(cut, PointType::T2).tree;
      for (std::size_t i = 0; i < tr.size(); ++i) {
        TreePoint p = TreePoint::at(static_cast<int>(i));
        Coords a = tr.coords(p), b = fine->coords(fine->transfer(tr, p));
        t.expect(a.A == b.A && a.alpha == b.alpha && a.m == b.m, "subdivision moved " + tr.node(p.node).id);
      }
      for (int k = 0; k < 5; ++k) {
        TreePoint p = random_point(tr, rng, false);
        Coords a = tr.coords(p), b = fine->coords(fine->transfer(tr, p));
        t.expect(a.A == b.A && a.alpha == b.alpha, "subdivision moved " + tr.point_str(p));
      }
    }

    t.expect(subadditivity_check(s.function("phi"), s.function("psi")).ok, "subadditivity");
    ++subadd;

    // regularization: decreasing in n, above phi, equal to phi from some index on
    const QshFunction& phi = s.function("phi");
    std::vector<TreePoint> pts;
    for (std::size_t i = 0; i < tr.size(); ++i)
      if (tr.coords(TreePoint::at(static_cast<int>(i))).alpha.finite()) pts.push_back(TreePoint::at(static_cast<int>(i)));
    for (int k = 0; k < 6; ++k) pts.push_back(random_point(tr, rng, true));
    std::vector<ExtRat> prev;
    long settled = -1;
    for (long n = 0; n <= 40; ++n) {
      QshFunction r = regularize_seq(phi, n);
      std::vector<ExtRat> cur;
      bool equal = true;
      for (const TreePoint& p : pts) {
        ExtRat v = r.eval(r.tree().transfer(tr, p)), base = phi.eval(p);
        t.expect(v >= base, "regularization below phi at n=" + std::to_string(n));
        equal = equal && v == base;
        cur.push_back(v);
      }
      for (std::size_t j = 0; j < prev.size(); ++j) t.expect(cur[j] <= prev[j], "regularization increased");
      if (equal && settled < 0) settled = n;
      if (!equal && settled >= 0) t.expect(false, "regularization left phi again");
      prev = std::move(cur);
    }
    t.expect(settled >= 0, "regularization never reached phi");
  }
  return t.done("100 scenes, " + std::to_string(subadd) + " subadditivity pairs");
}

// ---- 8 ----
Outcome type4_witness() {
  Tally t;
  TreePtr d = scene_d();
  QshFunction phi = fn(d, {{"ex", q(-1)}});
  TreePoint root = at(d, "root");
  for (Rational eps : {q(1, 10), q(1, 100)})
    t.expect(!verify_certificate(phi, root, FormalPoly::one(d), eps), "(1, " + eps.get_str() + ") verified");
  Certificate c = step_type4(phi, root, node(*d, "x"));
  t.expect(c.eps0 > 0, "eps0 not positive");
  t.expect(verify_certificate(phi, root, c), "type-4 certificate fails at eps0");
  t.expect(verify_certificate(phi, root, c.f, Rational(c.eps0 / 2)), "type-4 certificate fails at eps0/2");
  return t.done("f = " + c.f.str() + ", eps0 = " + c.eps0.get_str());
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  std::vector<Criterion> all{
      {1, "single-pole approximation example", 5, single_pole_example},
      {2, "integrability threshold", 1, integrability_threshold},
      {3, "extension soundness", 30, extension_soundness},
      {4, "sharpness of the constant", 5, sharpness},
      {5, "approximation sandwich", 60, sandwich},
      {6, "ideal coherence", 10, coherence},
      {7, "structural invariants", 10, structure},
      {8, "type-4 necessity witness", 1, type4_witness},
  };
  int failed = 0;
  for (const Criterion& c : all) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.budget_s) {
      o.pass = false;
      o.detail += " (over the " + std::to_string(static_cast<int>(c.budget_s)) + " s budget)";
    }
    failed += !o.pass;
    std::printf("%s %d %-36s %8.3f s  %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, secs, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(all.size()) - failed, all.size());
  return failed == 0 ? 0 : 1;
}
