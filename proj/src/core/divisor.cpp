#include "divisor.hpp"

#include <stdexcept>

namespace berkdisc {

FormalPoly::FormalPoly(TreePtr tree, Rational const_log, std::map<int, long> roots)
    : tree_(std::move(tree)), const_log_(std::move(const_log)) {
  if (!tree_) throw std::invalid_argument("polynomial without a tree");
  for (const auto& [x, e] : roots) {
    if (x < 0 || static_cast<std::size_t>(x) >= tree_->size()) throw std::invalid_argument("root at unknown node");
    if (tree_->node(x).type != PointType::T1)
      throw std::invalid_argument("root at non-rigid node '" + tree_->node(x).id + "'");
    if (e < 0) throw std::invalid_argument("negative exponent");
    if (e > 0) roots_[x] = e;
  }
}

FormalPoly FormalPoly::factor(TreePtr tree, int x, long e) {
  return FormalPoly(std::move(tree), Rational(0), {{x, e}});
}

long FormalPoly::exponent(int x) const {
  auto it = roots_.find(x);
  return it == roots_.end() ? 0 : it->second;
}

long FormalPoly::degree() const {
  long d = 0;
  for (const auto& [x, e] : roots_) d += e;
  return d;
}

ExtRat FormalPoly::log_norm(const TreePoint& p) const {
  const DiscTree& t = *tree_;
  ExtRat v(const_log_);
  for (const auto& [x, e] : roots_) {
    ExtRat a = t.coords(t.join(p, TreePoint::at(x))).alpha;
    if (a == ExtRat(0)) continue;
    v -= ExtRat(Rational(e * t.mult(x))) * a;
  }
  return v;
}

AtomicMeasure FormalPoly::laplacian() const {
  AtomicMeasure mu;
  Rational total = 0;
  for (const auto& [x, e] : roots_) {
    Rational w = Rational(e) * tree_->mult(x);
    mu[x] += w;
    total += w;
  }
  if (total != 0) mu[tree_->root()] -= total;
  return mu;
}

Rational FormalPoly::edge_slope(int n) const {
  Rational s = 0;
  for (const auto& [x, e] : roots_)
    if (tree_->is_ancestor(n, x)) s -= Rational(e) * tree_->mult(x);
  return s;
}

QshFunction FormalPoly::as_qsh() const {
  std::vector<Rational> s(tree_->size(), Rational(0));
  for (std::size_t i = 0; i < s.size(); ++i)
    if (static_cast<int>(i) != tree_->root()) s[i] = edge_slope(static_cast<int>(i));
  return QshFunction(tree_, const_log_, std::move(s));
}

FormalPoly FormalPoly::times(const FormalPoly& g) const {
  TreePtr t = finer_tree(tree_, g.tree_);
  std::map<int, long> r = roots_;
  for (const auto& [x, e] : g.roots_) r[x] += e;
  return FormalPoly(t, Rational(const_log_ + g.const_log_), std::move(r));
}

FormalPoly FormalPoly::power(long k) const {
  if (k < 0) throw std::invalid_argument("negative power");
  std::map<int, long> r;
  for (const auto& [x, e] : roots_) r[x] = e * k;
  return FormalPoly(tree_, Rational(const_log_ * k), std::move(r));
}

FormalPoly FormalPoly::with_const_log(const Rational& c) const { return FormalPoly(tree_, c, roots_); }

FormalPoly FormalPoly::lift(const TreePtr& fine) const {
  if (fine.get() == tree_.get()) return *this;
  if (!fine->refines(*tree_)) throw std::invalid_argument("target tree does not refine the polynomial's tree");
  return FormalPoly(fine, const_log_, roots_);
}

bool FormalPoly::divisible_by(const FormalPoly& h) const {
  for (const auto& [x, e] : h.roots_)
    if (exponent(x) < e) return false;
  return true;
}

std::string FormalPoly::str() const {
  std::string out;
  if (const_log_ != 0) out = "exp(" + to_string(const_log_) + ")";
  for (const auto& [x, e] : roots_) {
    if (!out.empty()) out += " * ";
    out += "g_" + tree_->node(x).id + "^" + std::to_string(e);
  }
  return out.empty() ? "1" : out;
}

bool operator==(const FormalPoly& a, const FormalPoly& b) {
  return a.const_log_ == b.const_log_ && a.roots_ == b.roots_;
}

}  // namespace berkdisc
