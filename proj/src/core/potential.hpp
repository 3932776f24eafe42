#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "disc_tree.hpp"

namespace berkdisc {

// Signed point masses keyed by node index; zero atoms are omitted.
using AtomicMeasure = std::map<int, Rational>;

Rational total_mass(const AtomicMeasure& mu);

struct QshValidation {
  bool ok = true;
  Rational mass{0};  // minimal rho_0 mass, max(0, -atom at the root)
  std::vector<std::string> violations;
};

// Piecewise-affine function: value at the root plus a d/d(alpha) slope per edge (edges keyed by child).
class QshFunction {
 public:
  QshFunction() = default;
  QshFunction(TreePtr tree, Rational root_value, std::vector<Rational> slopes);
  static QshFunction zero(TreePtr tree);

  const TreePtr& tree_ptr() const { return tree_; }
  const DiscTree& tree() const { return *tree_; }
  const Rational& root_value() const { return root_value_; }
  const Rational& slope(int edge_child) const { return slope_.at(static_cast<std::size_t>(edge_child)); }
  const std::vector<Rational>& slopes() const { return slope_; }

  ExtRat eval(const TreePoint& p) const;
  ExtRat eval_node(int n) const { return eval(TreePoint::at(n)); }
  AtomicMeasure laplacian() const;
  Rational atom(int n) const;
  QshValidation validate() const;
  // Mass of rho_0 + Laplacian on the subtree below n (rho_0 counted at the root).
  Rational below_mass(int n) const;
  std::vector<Rational> below_masses() const;
  ExtRat sup() const;

  QshFunction shifted(const Rational& c) const;
  QshFunction scaled(const Rational& k) const;
  QshFunction plus(const QshFunction& other) const;  // same tree required
  // Same function expressed on a refinement of its tree.
  QshFunction lift(const TreePtr& fine) const;
  QshFunction with_slope(int edge_child, const Rational& s) const;

 private:
  TreePtr tree_;
  Rational root_value_{0};
  std::vector<Rational> slope_;
};

// n = nullopt means n = infinity.
Subtree gamma_tree(const QshFunction& phi, std::optional<long> n);
// The function phi composed with the retraction onto `sub`; cut points inside edges become nodes.
QshFunction retract_pullback(const QshFunction& phi, const Subtree& sub);
Subtree regularization_subtree(const QshFunction& phi, long n);
QshFunction regularize_seq(const QshFunction& phi, long n);

// Brings two objects living on comparable trees onto the finer one; throws on mismatched trees.
TreePtr finer_tree(const TreePtr& a, const TreePtr& b);

}  // namespace berkdisc
