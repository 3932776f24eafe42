#pragma once

#include <map>
#include <string>

#include "potential.hpp"

namespace berkdisc {

// A polynomial up to units: log of the constant factor and exponents of normalized
// irreducible factors g_x, one per rigid node x.
class FormalPoly {
 public:
  FormalPoly() = default;
  FormalPoly(TreePtr tree, Rational const_log, std::map<int, long> roots);
  static FormalPoly one(TreePtr tree) { return FormalPoly(std::move(tree), Rational(0), {}); }
  static FormalPoly factor(TreePtr tree, int x, long e = 1);

  const TreePtr& tree_ptr() const { return tree_; }
  const DiscTree& tree() const { return *tree_; }
  const Rational& const_log() const { return const_log_; }
  const std::map<int, long>& roots() const { return roots_; }
  long exponent(int x) const;
  long degree() const;

  ExtRat log_norm(const TreePoint& p) const;
  AtomicMeasure laplacian() const;
  // Slope of log|f| along the parent edge of n, per unit alpha.
  Rational edge_slope(int n) const;
  QshFunction as_qsh() const;

  FormalPoly times(const FormalPoly& g) const;
  FormalPoly power(long k) const;
  FormalPoly with_const_log(const Rational& c) const;
  FormalPoly lift(const TreePtr& fine) const;
  bool divisible_by(const FormalPoly& h) const;

  std::string str() const;  // "g_a^1 * g_b^2", "1", with a constant prefix when nonzero

  friend bool operator==(const FormalPoly& a, const FormalPoly& b);

 private:
  TreePtr tree_;
  Rational const_log_{0};
  std::map<int, long> roots_;
};

}  // namespace berkdisc
