#include "ext_rational.hpp"

#include <cctype>
#include <ostream>

namespace berkdisc {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool valid_integer(std::string_view s) {
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

Rational make_rational(long num, long den) {
  if (den == 0) throw ArithmeticError("zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

Rational parse_rational(std::string_view text) {
  std::string_view s = trim(text);
  auto slash = s.find('/');
  std::string_view num = s.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view("1") : s.substr(slash + 1);
  if (!valid_integer(num) || !valid_integer(den))
    throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
  std::string n(num), d(den);
  if (n.front() == '+') n.erase(0, 1);
  if (d.front() == '+') d.erase(0, 1);
  mpz_class zn(n, 10), zd(d, 10);
  if (zd == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
  Rational q(zn, zd);
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational floor_of(const Rational& q) {
  mpz_class r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return Rational(r);
}

long floor_to_long(const Rational& q) {
  Rational f = floor_of(q);
  if (!f.get_num().fits_slong_p()) throw ArithmeticError("floor out of range");
  return f.get_num().get_si();
}

bool is_integer(const Rational& q) { return q.get_den() == 1; }

ExtRat ExtRat::parse(std::string_view text) {
  std::string_view s = trim(text);
  if (s == "inf" || s == "+inf") return pos_inf();
  if (s == "-inf") return neg_inf();
  return ExtRat(parse_rational(s));
}

const Rational& ExtRat::value() const {
  if (!finite()) throw ArithmeticError("value() of an infinite quantity");
  return value_;
}

ExtRat ExtRat::operator-() const {
  switch (kind_) {
    case Kind::PosInf: return neg_inf();
    case Kind::NegInf: return pos_inf();
    default: return ExtRat(Rational(-value_));
  }
}

ExtRat& ExtRat::operator+=(const ExtRat& o) {
  if (finite() && o.finite()) {
    value_ += o.value_;
    return *this;
  }
  if (!finite() && !o.finite() && kind_ != o.kind_) throw ArithmeticError("(+inf) + (-inf) is undefined");
  if (finite()) {
    kind_ = o.kind_;
    value_ = 0;
  }
  return *this;
}

ExtRat& ExtRat::operator-=(const ExtRat& o) { return *this += -o; }

ExtRat operator*(const ExtRat& a, const ExtRat& b) {
  if (a.finite() && b.finite()) return ExtRat(Rational(a.value_ * b.value_));
  auto sign = [](const ExtRat& x) {
    if (x.is_pos_inf()) return 1;
    if (x.is_neg_inf()) return -1;
    return sgn(x.value_);
  };
  int s = sign(a) * sign(b);
  if (s == 0) throw ArithmeticError("0 * inf is undefined");
  return s > 0 ? ExtRat::pos_inf() : ExtRat::neg_inf();
}

ExtRat operator/(const ExtRat& a, const Rational& b) {
  if (b == 0) throw ArithmeticError("division by zero");
  if (a.finite()) return ExtRat(Rational(a.value_ / b));
  return b > 0 ? a : -a;
}

bool operator==(const ExtRat& a, const ExtRat& b) {
  if (a.kind_ != b.kind_) return false;
  return !a.finite() || a.value_ == b.value_;
}

std::strong_ordering operator<=>(const ExtRat& a, const ExtRat& b) {
  if (a.kind_ != b.kind_) return a.kind_ <=> b.kind_;
  if (!a.finite()) return std::strong_ordering::equal;
  int c = cmp(a.value_, b.value_);
  return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
}

std::string ExtRat::str() const {
  if (is_pos_inf()) return "inf";
  if (is_neg_inf()) return "-inf";
  return to_string(value_);
}

ExtRat min(const ExtRat& a, const ExtRat& b) { return b < a ? b : a; }
ExtRat max(const ExtRat& a, const ExtRat& b) { return a < b ? b : a; }

std::ostream& operator<<(std::ostream& os, const ExtRat& x) { return os << x.str(); }

}  // namespace berkdisc
