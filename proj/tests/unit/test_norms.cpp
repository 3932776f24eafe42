#include "doctest.h"
#include "fixtures.hpp"

using namespace fx;

TEST_CASE("twisted sup-norms") {
  TreePtr a = scene_a();
  FormalPoly g = poly(a, {{"a", 1}});
  QshFunction phi = fn(a, {{"e1", q(-3, 2)}});
  CHECK(sup_norm(g, phi, q(1, 3)) == ExtRat(0));
  CHECK(sup_norm(g, phi, q(1, 2)) == inf());
  CHECK(sup_norm(FormalPoly::one(a), QshFunction::zero(a), q(5)) == ExtRat(0));
  CHECK(sampled_sup(g, phi, q(1, 3)) == ExtRat(0));
  CHECK(sampled_sup(g, phi, q(1, 2)) == inf());
  CHECK_THROWS_AS(sup_norm(g, phi, q(-1)), std::invalid_argument);
}

TEST_CASE("limit norms") {
  TreePtr a = scene_a();
  CHECK(plus_norm(FormalPoly::one(a), fn(a, {{"e1", q(-3, 2)}})).value == inf());
  CHECK(plus_norm(FormalPoly::one(a), fn(a, {{"e1", q(-1, 2)}})).value == ExtRat(0));
  CHECK(plus_norm(poly(a, {{"a", 1}}), fn(a, {{"e1", q(-3, 2)}})).value == ExtRat(0));

  // positive sup is shifted away and reported
  PlusNorm shifted = plus_norm(FormalPoly::one(a), fn(a, {{"e1", q(-1, 2)}}, q(2)));
  CHECK(shifted.shift == 2);
  CHECK(shifted.value == ExtRat(0));
  CHECK(shifted.raw() == ExtRat(-2));
}

TEST_CASE("ideal generator and membership") {
  TreePtr a = scene_a();
  CHECK(h_generator(fn(a, {{"e1", q(-7, 3)}}, q(-1))) == poly(a, {{"a", 2}}));
  CHECK(h_generator(QshFunction::zero(a)) == FormalPoly::one(a));
  TreePtr d = scene_d();
  CHECK(h_generator(fn(d, {{"ex", q(-2)}})) == FormalPoly::one(d));
  TreePtr b = scene_b();
  CHECK(h_generator(fn(b, {{"ea", q(-3, 2)}, {"eb", q(-5, 4)}})) == poly(b, {{"a", 1}, {"b", 1}}));
  CHECK(fn(b, {{"ea", q(-3, 2)}, {"eb", q(-5, 4)}}).validate().mass == q(11, 4));

  QshFunction phi = fn(a, {{"e1", q(-3, 2)}});
  CHECK_FALSE(h_membership(FormalPoly::one(a), phi));
  CHECK(h_membership(poly(a, {{"a", 1}}), phi));
  CHECK(h_membership(poly(a, {{"a", 3}}), QshFunction::zero(a)));
  CHECK_THROWS_AS(lelong_number(phi, a->root()), std::invalid_argument);
}

TEST_CASE("property: exact sup-norm agrees with sampling") {
  std::mt19937_64 rng(31);
  for (const Scene& s : random_scenes(900, 80)) {
    const QshFunction& phi = s.function("phi");
    FormalPoly f = random_poly(s.tree, rng);
    for (Rational eps : {q(0), q(1, 5), q(1, 2), q(2)}) CHECK(sup_norm(f, phi, eps) == sampled_sup(f, phi, eps));
  }
}

TEST_CASE("property: monotone in eps, Gauss-point bound, openness, shift invariance") {
  std::mt19937_64 rng(37);
  for (const Scene& s : random_scenes(1000, 80)) {
    const QshFunction& raw = s.function("phi");
    QshFunction phi = raw.shifted(-raw.sup().value());  // sup = 0
    FormalPoly f = random_poly(s.tree, rng);
    ExtRat prev = ninf();
    for (Rational eps : {q(0), q(1, 8), q(1, 4), q(1), q(3)}) {
      ExtRat v = sup_norm(f, phi, eps);
      CHECK(v >= prev);
      CHECK(v >= f.log_norm(TreePoint::at(s.tree->root())) - ExtRat(Rational((1 + eps) * phi.root_value())));
      prev = v;
    }
    PlusNorm pn = plus_norm(f, phi);
    bool member = h_membership(f, phi);
    CHECK(member == pn.value.finite());
    CHECK(member == f.divisible_by(h_generator(phi)));
    // openness: a member stays finite for some small eps, a non-member never does
    bool some_eps = false;
    for (long k = 1; k <= 64; k *= 2) some_eps = some_eps || sup_norm(f, phi, q(1, 64 * k)).finite();
    CHECK(some_eps == member);
    if (member) CHECK(pn.value <= sup_norm(f, phi, q(1, 1024)));

    Rational c = q(static_cast<long>(rng() % 9) - 8, 3);  // C <= 0 keeps sup <= 0
    PlusNorm moved = plus_norm(f, phi.shifted(c));
    if (member) CHECK(moved.raw() == ExtRat(Rational(pn.raw().value() - c)));
    CHECK(h_generator(phi.shifted(c)) == h_generator(phi));
  }
}
