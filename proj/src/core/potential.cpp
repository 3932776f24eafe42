#include "potential.hpp"

#include <algorithm>
#include <stdexcept>

namespace berkdisc {

Rational total_mass(const AtomicMeasure& mu) {
  Rational s = 0;
  for (const auto& [n, a] : mu) s += a;
  return s;
}

QshFunction::QshFunction(TreePtr tree, Rational root_value, std::vector<Rational> slopes)
    : tree_(std::move(tree)), root_value_(std::move(root_value)), slope_(std::move(slopes)) {
  if (!tree_) throw std::invalid_argument("function without a tree");
  if (slope_.size() != tree_->size()) throw std::invalid_argument("slope table does not match the tree");
  slope_[static_cast<std::size_t>(tree_->root())] = 0;
}

QshFunction QshFunction::zero(TreePtr tree) {
  std::size_t n = tree->size();
  return QshFunction(std::move(tree), Rational(0), std::vector<Rational>(n, Rational(0)));
}

ExtRat QshFunction::eval(const TreePoint& p) const {
  const DiscTree& t = *tree_;
  t.check_point(p);
  ExtRat v(root_value_);
  auto path = t.path_from_root(p.node);
  for (std::size_t i = 1; i < path.size(); ++i) {
    int c = path[i];
    const Rational& s = slope_[static_cast<std::size_t>(c)];
    if (s == 0) continue;
    const Node& nd = t.node(c);
    bool last_partial = (i + 1 == path.size()) && !p.is_node();
    ExtRat len = last_partial ? ExtRat(*p.offset) : nd.a_length;
    v += ExtRat(s) * (len / Rational(nd.mult));
  }
  return v;
}

Rational QshFunction::atom(int n) const {
  const DiscTree& t = *tree_;
  Rational a = 0;
  for (int ch : t.node(n).children) a += slope_[static_cast<std::size_t>(ch)];
  if (n != t.root()) a -= slope_[static_cast<std::size_t>(n)];
  return a;
}

AtomicMeasure QshFunction::laplacian() const {
  AtomicMeasure mu;
  for (std::size_t i = 0; i < tree_->size(); ++i) {
    Rational a = atom(static_cast<int>(i));
    if (a != 0) mu[static_cast<int>(i)] = a;
  }
  return mu;
}

QshValidation QshFunction::validate() const {
  QshValidation r;
  const DiscTree& t = *tree_;
  for (std::size_t i = 0; i < t.size(); ++i) {
    int n = static_cast<int>(i);
    if (n == t.root()) continue;
    Rational a = atom(n);
    if (a < 0) {
      r.ok = false;
      r.violations.push_back("negative atom " + to_string(a) + " at node '" + t.node(n).id + "'");
    }
  }
  Rational ra = atom(t.root());
  r.mass = ra < 0 ? Rational(-ra) : Rational(0);
  return r;
}

std::vector<Rational> QshFunction::below_masses() const {
  const DiscTree& t = *tree_;
  std::vector<Rational> S(t.size(), Rational(0));
  // Children always sit deeper than parents, so a depth-sorted sweep accumulates bottom-up.
  std::vector<int> order(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return t.depth(a) > t.depth(b); });
  for (int n : order) {
    S[static_cast<std::size_t>(n)] += atom(n);
    if (n != t.root()) S[static_cast<std::size_t>(t.node(n).parent)] += S[static_cast<std::size_t>(n)];
  }
  Rational ra = atom(t.root());
  S[static_cast<std::size_t>(t.root())] += ra < 0 ? Rational(-ra) : Rational(0);
  return S;
}

Rational QshFunction::below_mass(int n) const { return below_masses().at(static_cast<std::size_t>(n)); }

ExtRat QshFunction::sup() const {
  ExtRat best = ExtRat::neg_inf();
  for (std::size_t i = 0; i < tree_->size(); ++i) best = max(best, eval_node(static_cast<int>(i)));
  return best;
}

QshFunction QshFunction::shifted(const Rational& c) const {
  return QshFunction(tree_, Rational(root_value_ + c), slope_);
}

QshFunction QshFunction::scaled(const Rational& k) const {
  std::vector<Rational> s = slope_;
  for (auto& v : s) v *= k;
  return QshFunction(tree_, Rational(root_value_ * k), std::move(s));
}

QshFunction QshFunction::plus(const QshFunction& other) const {
  TreePtr t = finer_tree(tree_, other.tree_);
  QshFunction a = lift(t), b = other.lift(t);
  std::vector<Rational> s = a.slope_;
  for (std::size_t i = 0; i < s.size(); ++i) s[i] += b.slope_[i];
  return QshFunction(t, Rational(a.root_value_ + b.root_value_), std::move(s));
}

QshFunction QshFunction::lift(const TreePtr& fine) const {
  if (fine.get() == tree_.get()) return *this;
  if (!fine->refines(*tree_)) throw std::invalid_argument("target tree does not refine the function's tree");
  std::vector<Rational> s(fine->size(), Rational(0));
  for (std::size_t i = 0; i < fine->size(); ++i) {
    if (i < slope_.size()) {
      s[i] = slope_[i];
    } else {
      int from = fine->node(static_cast<int>(i)).split_of;
      if (from >= 0) s[i] = s[static_cast<std::size_t>(from)];
    }
  }
  return QshFunction(fine, root_value_, std::move(s));
}

QshFunction QshFunction::with_slope(int edge_child, const Rational& v) const {
  std::vector<Rational> s = slope_;
  s.at(static_cast<std::size_t>(edge_child)) = v;
  return QshFunction(tree_, root_value_, std::move(s));
}

TreePtr finer_tree(const TreePtr& a, const TreePtr& b) {
  if (a.get() == b.get()) return a;
  if (a->refines(*b)) return a;
  if (b->refines(*a)) return b;
  throw std::invalid_argument("mismatched trees");
}

Subtree gamma_tree(const QshFunction& phi, std::optional<long> n) {
  const DiscTree& t = phi.tree();
  Rational thr = n ? Rational(make_rational(*n, *n + 1)) : Rational(1);
  auto S = phi.below_masses();
  if (S[static_cast<std::size_t>(t.root())] < thr) return Subtree::none(t);
  Subtree g = Subtree::root_only(t);
  std::vector<int> stack{t.root()};
  while (!stack.empty()) {
    int c = stack.back();
    stack.pop_back();
    for (int ch : t.node(c).children) {
      if (S[static_cast<std::size_t>(ch)] >= thr * t.mult(ch)) {
        g.reach[static_cast<std::size_t>(ch)] = t.node(ch).a_length;
        stack.push_back(ch);
      }
    }
  }
  return g;
}

namespace {

void check_subtree(const DiscTree& t, const Subtree& s) {
  if (s.empty) throw std::invalid_argument("invalid subtree: empty");
  if (s.reach.size() != t.size()) throw std::invalid_argument("invalid subtree: size mismatch");
  for (std::size_t i = 0; i < t.size(); ++i) {
    int c = static_cast<int>(i);
    if (c == t.root()) continue;
    const ExtRat& r = s.reach[i];
    if (r < ExtRat(0) || r > t.node(c).a_length) throw std::invalid_argument("invalid subtree: reach outside edge");
    if (r > ExtRat(0) && !s.contains_node(t, t.node(c).parent))
      throw std::invalid_argument("invalid subtree: not connected to the root");
  }
}

}  // namespace

QshFunction retract_pullback(const QshFunction& phi, const Subtree& sub) {
  const DiscTree& t0 = phi.tree();
  check_subtree(t0, sub);
  TreePtr t = phi.tree_ptr();
  std::vector<char> keep(t0.size(), 0);
  for (std::size_t i = 0; i < t0.size(); ++i) keep[i] = sub.contains_node(t0, static_cast<int>(i));
  for (std::size_t i = 0; i < t0.size(); ++i) {
    int c = static_cast<int>(i);
    if (c == t0.root()) continue;
    const ExtRat& r = sub.reach[i];
    if (r > ExtRat(0) && r < t0.node(c).a_length) {
      // The lower endpoint keeps its index, so the offset from the current parent is still valid.
      t = t->insert_point(TreePoint::on_edge(c, r.value()), PointType::T2).tree;
      keep.push_back(1);
    }
  }
  QshFunction lifted = phi.lift(t);
  std::vector<Rational> s = lifted.slopes();
  for (std::size_t i = 0; i < s.size(); ++i)
    if (!keep[i]) s[i] = 0;
  return QshFunction(t, phi.root_value(), std::move(s));
}

Subtree regularization_subtree(const QshFunction& phi, long n) {
  const DiscTree& t = phi.tree();
  if (n < 0) throw std::invalid_argument("regularization index must be nonnegative");
  mpz_class two_n;
  mpz_ui_pow_ui(two_n.get_mpz_t(), 2, static_cast<unsigned long>(n));
  Rational mass_thr(mpz_class(1), two_n), radius(two_n);
  auto S = phi.below_masses();
  Subtree g = Subtree::root_only(t);
  if (S[static_cast<std::size_t>(t.root())] < mass_thr) return g;
  std::vector<int> stack{t.root()};
  while (!stack.empty()) {
    int c = stack.back();
    stack.pop_back();
    for (int ch : t.node(c).children) {
      if (S[static_cast<std::size_t>(ch)] < mass_thr) continue;
      ExtRat room = ExtRat(radius) - t.alpha(c);
      if (!(room > ExtRat(0))) continue;
      ExtRat allowed = min(t.node(ch).a_length, room * ExtRat(Rational(t.mult(ch))));
      g.reach[static_cast<std::size_t>(ch)] = allowed;
      if (allowed == t.node(ch).a_length) stack.push_back(ch);
    }
  }
  return g;
}

QshFunction regularize_seq(const QshFunction& phi, long n) {
  return retract_pullback(phi, regularization_subtree(phi, n));
}

}  // namespace berkdisc
