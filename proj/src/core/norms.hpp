#pragma once

#include "divisor.hpp"

namespace berkdisc {

// log of sup |f| e^{-(1+eps) phi - A} over the tree minus the poles of phi.
ExtRat sup_norm(const FormalPoly& f, const QshFunction& phi, const Rational& eps);

// log|f| - (1+eps) phi - A at a point; -inf at points with A = +inf unless a pole makes it undefined.
ExtRat twisted_value(const FormalPoly& f, const QshFunction& phi, const Rational& eps, const TreePoint& p);

struct PlusNorm {
  ExtRat value;      // limit norm for the normalized function phi - shift
  Rational shift{0};  // max(0, sup phi)
  ExtRat raw() const { return value.finite() ? ExtRat(value.value() - shift) : value; }
};

PlusNorm plus_norm(const FormalPoly& f, const QshFunction& phi);

// Lelong number at a rigid node: atom / multiplicity.
Rational lelong_number(const QshFunction& phi, int x);
FormalPoly h_generator(const QshFunction& phi);
bool h_membership(const FormalPoly& f, const QshFunction& phi);

}  // namespace berkdisc
