#pragma once

#include <gmpxx.h>

#include <compare>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>

namespace berkdisc {

using Rational = mpq_class;

// Thrown for undefined arithmetic such as (+inf) + (-inf).
class ArithmeticError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

Rational make_rational(long num, long den = 1);
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);
Rational floor_of(const Rational& q);
long floor_to_long(const Rational& q);
bool is_integer(const Rational& q);

// Exact rational number or one of the two infinities.
class ExtRat {
 public:
  enum class Kind : unsigned char { NegInf, Finite, PosInf };

  ExtRat() = default;
  ExtRat(const Rational& q) : kind_(Kind::Finite), value_(q) {}  // NOLINT
  ExtRat(long v) : kind_(Kind::Finite), value_(v) {}              // NOLINT
  ExtRat(int v) : kind_(Kind::Finite), value_(v) {}               // NOLINT

  static ExtRat pos_inf() { return ExtRat(Kind::PosInf); }
  static ExtRat neg_inf() { return ExtRat(Kind::NegInf); }
  static ExtRat parse(std::string_view text);

  Kind kind() const { return kind_; }
  bool finite() const { return kind_ == Kind::Finite; }
  bool is_pos_inf() const { return kind_ == Kind::PosInf; }
  bool is_neg_inf() const { return kind_ == Kind::NegInf; }
  // Throws if infinite.
  const Rational& value() const;

  ExtRat operator-() const;
  ExtRat& operator+=(const ExtRat& o);
  ExtRat& operator-=(const ExtRat& o);

  friend ExtRat operator+(ExtRat a, const ExtRat& b) { return a += b; }
  friend ExtRat operator-(ExtRat a, const ExtRat& b) { return a -= b; }
  // Products with an infinite factor require the other factor to be nonzero.
  friend ExtRat operator*(const ExtRat& a, const ExtRat& b);
  friend ExtRat operator/(const ExtRat& a, const Rational& b);

  friend bool operator==(const ExtRat& a, const ExtRat& b);
  friend std::strong_ordering operator<=>(const ExtRat& a, const ExtRat& b);

  std::string str() const;

 private:
  explicit ExtRat(Kind k) : kind_(k) {}
  Kind kind_ = Kind::Finite;
  Rational value_{0};
};

ExtRat min(const ExtRat& a, const ExtRat& b);
ExtRat max(const ExtRat& a, const ExtRat& b);
std::ostream& operator<<(std::ostream& os, const ExtRat& x);

}  // namespace berkdisc
