#include "doctest.h"
#include "fixtures.hpp"

using namespace fx;

namespace {

Rational pole_coefficient(const QshFunction& f) {
  const DiscTree& t = f.tree();
  return -f.slope(node(t, "a")) / t.mult(node(t, "a"));
}

}  // namespace

TEST_CASE("Lelong numbers and multiplier exponents") {
  TreePtr a = scene_a();
  CHECK(lelong_number(fn(a, {{"e1", q(-3, 2)}}), node(*a, "a")) == q(3, 2));
  CHECK(lelong_number(QshFunction::zero(a), node(*a, "a")) == 0);
  TreePtr c = scene_c();
  CHECK(lelong_number(fn(c, {{"ey", q(-2)}, {"ea", q(-2)}}), node(*c, "a")) == 1);

  MultiplierData md = multiplier_exponents(fn(a, {{"e1", q(-7, 2)}}));
  CHECK(md.at(node(*a, "a")).exponent == 3);
  CHECK(multiplier_exponents(fn(scene_d(), {{"ex", q(-2)}})).empty());
  TreePtr b = scene_b();
  MultiplierData mb = multiplier_exponents(fn(b, {{"ea", q(-3, 2)}, {"eb", q(-5, 4)}}));
  CHECK(mb.at(node(*b, "a")).exponent == 1);
  CHECK(mb.at(node(*b, "b")).exponent == 1);
}

TEST_CASE("single-pole closed form") {
  TreePtr a = scene_a();
  QshFunction phi = fn(a, {{"e1", q(-3, 2)}});
  CHECK(pole_coefficient(demailly_exact_single_pole(phi, 2)) == q(3, 2));
  CHECK(pole_coefficient(demailly_exact_single_pole(phi, 3)) == q(4, 3));
  CHECK(pole_coefficient(demailly_exact_single_pole(phi, 1)) == 1);

  TreePtr b = scene_b();
  CHECK_THROWS_AS(demailly_exact_single_pole(fn(b, {{"ea", q(-1)}, {"eb", q(-1)}}), 2), std::invalid_argument);
  CHECK_THROWS_AS(demailly_exact_single_pole(fn(a, {{"e1", q(-1)}}, q(1)), 2), std::invalid_argument);
  CHECK_THROWS_AS(demailly_exact_single_pole(phi, 0), std::invalid_argument);
}

TEST_CASE("the exact sequence is not monotone but its odd terms decrease") {
  TreePtr a = scene_a();
  QshFunction phi = fn(a, {{"e1", q(-3, 2)}});
  TreePoint y = on(a, "e1", q(1));
  std::vector<ExtRat> v;
  for (long m = 1; m <= 9; ++m) v.push_back(demailly_exact_single_pole(phi, m).eval(y));
  bool monotone = true;
  for (std::size_t i = 1; i < v.size(); ++i) monotone = monotone && v[i] <= v[i - 1];
  CHECK_FALSE(monotone);
  for (std::size_t i = 2; i < v.size(); i += 2) CHECK(v[i] < v[i - 2]);
}

TEST_CASE("sandwich bounds on the single-pole example") {
  TreePtr a = scene_a();
  QshFunction phi = fn(a, {{"e1", q(-3, 2)}});
  for (Rational t : {q(1, 3), q(1), q(5, 2)}) {
    TreePoint y = on(a, "e1", t);
    DemaillyBound b2 = demailly_bounds(phi, 2, y);
    CHECK(b2.lower == ExtRat(Rational(-q(3, 2) * t)));
    CHECK(b2.upper == ExtRat(Rational(-q(3, 2) * t + t / 2)));
    DemaillyBound b1 = demailly_bounds(phi, 1, y);
    CHECK(b1.lower == ExtRat(Rational(-t)));
    CHECK(b1.lower == demailly_exact_single_pole(phi, 1).eval(y));
  }
  TreePtr d = scene_d();
  DemaillyBound z = demailly_bounds(QshFunction::zero(d), 3, on(d, "ex", q(1, 2)));
  CHECK(z.lower == ExtRat(0));
  CHECK(z.upper == ExtRat(q(1, 6)));
}

TEST_CASE("brute force") {
  TreePtr a = scene_a();
  QshFunction phi = fn(a, {{"e1", q(-3, 2)}});
  TreePoint y = on(a, "e1", q(1));
  CHECK(demailly_bruteforce(phi, 2, y, 3) == ExtRat(q(-3, 2)));
  CHECK(demailly_bruteforce(phi, 2, y, 7) == ExtRat(q(-3, 2)));
  CHECK(demailly_bruteforce(phi, 3, y, 4) == ExtRat(q(-4, 3)));
  CHECK(demailly_bruteforce(phi, 2, y, 0) == ninf());  // 1 is outside the ideal
  QshFunction half = fn(a, {{"e1", q(-1, 2)}});
  CHECK(demailly_bruteforce(half, 1, y, 0) ==
        (ExtRat(0) - plus_norm(FormalPoly::one(a), half).raw()) / Rational(1));
}

TEST_CASE("subadditivity examples") {
  TreePtr a = scene_a();
  QshFunction quarter3 = fn(a, {{"e1", q(-3, 4)}});
  SubadditivityReport r = subadditivity_check(quarter3, quarter3);
  CHECK(r.ok);
  REQUIRE(r.rows.size() == 1);
  CHECK(r.rows[0].sum == 1);
  CHECK(r.rows[0].first == 0);
  CHECK(subadditivity_check(QshFunction::zero(a), QshFunction::zero(a)).ok);
  SubadditivityReport r2 = subadditivity_check(fn(a, {{"e1", q(-1)}}), fn(a, {{"e1", q(-1, 2)}}));
  CHECK(r2.ok);
  CHECK(r2.rows[0].sum == 1);
  CHECK_THROWS_AS(subadditivity_check(quarter3, QshFunction::zero(scene_b())), std::invalid_argument);
}

TEST_CASE("property: sandwich, brute force below the upper bound, coherence") {
  std::mt19937_64 rng(51);
  for (const Scene& s : random_scenes(1600, 40, 7)) {
    const QshFunction& raw = s.function("phi");
    QshFunction phi = raw.shifted(-raw.sup().value());
    MultiplierData md = multiplier_exponents(phi);
    FormalPoly h = h_generator(phi);
    for (const auto& [x, e] : h.roots()) CHECK(md.at(x).exponent == e);
    for (const auto& [x, e] : md)
      if (e.exponent > 0) CHECK(h.exponent(x) == e.exponent);
    for (long m : {1L, 2L}) {
      TreePoint y = query(s, 1 + static_cast<std::size_t>(rng() % 5));
      DemaillyBound b = demailly_bounds(phi, m, y);
      CHECK(phi.eval(y) <= b.lower);
      CHECK(b.lower <= b.upper);
      CHECK(b.upper == phi.eval(y) + s.tree->coords(y).A / Rational(m));
      ExtRat prev = ninf();
      for (long d = 0; d <= 3; ++d) {
        ExtRat v = demailly_bruteforce(phi, m, y, d);
        CHECK(v >= prev);
        CHECK(v <= b.upper);
        prev = v;
      }
    }
    CHECK(subadditivity_check(phi, s.function("psi")).ok);
  }
}

TEST_CASE("property: brute force matches the closed form on single poles") {
  TreePtr a = scene_a();
  for (Rational c : {q(1, 2), q(3, 2), q(7, 3), q(5, 4)}) {
    QshFunction phi = fn(a, {{"e1", -c}});
    for (long m = 1; m <= 5; ++m) {
      long need = floor_to_long(Rational(c * m));
      for (Rational t : {q(1, 2), q(2)}) {
        TreePoint y = on(a, "e1", t);
        CHECK(demailly_bruteforce(phi, m, y, need) == demailly_exact_single_pole(phi, m).eval(y));
        CHECK(demailly_bruteforce(phi, m, y, need + 2) == demailly_exact_single_pole(phi, m).eval(y));
      }
    }
  }
}
