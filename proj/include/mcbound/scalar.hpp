#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <utility>

namespace mcb {

using BigInt = mpz_class;
using Rational = mpq_class;

// mpq_class(n, d) does not canonicalize on its own; route all raw
// numerator/denominator construction through here.
Rational make_rational(const BigInt& num, const BigInt& den);
Rational make_rational(long num, long den = 1);

// Parse "p", "p/q" or "k*2^-e" (dyadic) into a rational. Throws on junk.
Rational parse_rational(const std::string& text);

// Decimal expansion truncated toward zero to `digits` fractional digits.
// Deterministic, no locale, used by every text emitter.
std::string decimal_string(const Rational& value, unsigned digits);

// d = core * root^2 with core as small as bounded trial division (primes up
// to 10^4) plus perfect-square extraction can make it. core = 1 iff d is a
// perfect square.
std::pair<BigInt, BigInt> split_square_part(const BigInt& d);

class Interval;

// One scalar tower for everything exact: either a rational or a + b*sqrt(d)
// with a, b rational and d a fixed positive non-square integer. Values are
// kept normalized: b == 0 <=> d == 0, and the square part of d is folded
// into b. Arithmetic between different radicands throws (the engine never
// needs it); comparisons work across radicands by iterated squaring.
class ExactScalar {
 public:
  ExactScalar() : a_(0), b_(0), d_(0) {}
  ExactScalar(long v) : a_(v, 1), b_(0), d_(0) {}  // NOLINT(google-explicit-constructor)
  ExactScalar(const Rational& v) : a_(v), b_(0), d_(0) {}  // NOLINT
  ExactScalar(Rational a, Rational b, BigInt d);

  // sqrt(r) for rational r >= 0, as an exact element of Q(sqrt(core)).
  static ExactScalar sqrt_of(const Rational& r);

  bool is_rational() const { return d_ == 0; }
  bool is_zero() const { return b_ == 0 && a_ == 0; }
  const Rational& rational_part() const { return a_; }
  const Rational& radical_coeff() const { return b_; }
  const BigInt& radicand() const { return d_; }

  // Exact rational value; throws if irrational.
  const Rational& as_rational() const;

  int sign() const;
  ExactScalar abs() const { return sign() < 0 ? -*this : *this; }

  ExactScalar operator-() const;
  ExactScalar& operator+=(const ExactScalar& o);
  ExactScalar& operator-=(const ExactScalar& o);
  ExactScalar& operator*=(const ExactScalar& o);
  ExactScalar& operator/=(const ExactScalar& o);

  friend ExactScalar operator+(ExactScalar l, const ExactScalar& r) { return l += r; }
  friend ExactScalar operator-(ExactScalar l, const ExactScalar& r) { return l -= r; }
  friend ExactScalar operator*(ExactScalar l, const ExactScalar& r) { return l *= r; }
  friend ExactScalar operator/(ExactScalar l, const ExactScalar& r) { return l /= r; }

  // -1 / 0 / +1 of (l - r); exact even when the radicands differ.
  static int compare(const ExactScalar& l, const ExactScalar& r);

  friend bool operator==(const ExactScalar& l, const ExactScalar& r) { return compare(l, r) == 0; }
  friend bool operator!=(const ExactScalar& l, const ExactScalar& r) { return compare(l, r) != 0; }
  friend bool operator<(const ExactScalar& l, const ExactScalar& r) { return compare(l, r) < 0; }
  friend bool operator<=(const ExactScalar& l, const ExactScalar& r) { return compare(l, r) <= 0; }
  friend bool operator>(const ExactScalar& l, const ExactScalar& r) { return compare(l, r) > 0; }
  friend bool operator>=(const ExactScalar& l, const ExactScalar& r) { return compare(l, r) >= 0; }

  Interval enclosure(unsigned bits) const;
  double to_double() const;

  // "p/q" or "p/q+r/s*sqrt(d)" (lowest terms, '-' folded into numerators).
  std::string str() const;

 private:
  Rational a_, b_;
  BigInt d_;

  void normalize();
  // sign of r + s*sqrt(d) within one field
  static int field_sign(const Rational& r, const Rational& s, const BigInt& d);
};

// Closed interval with exact rational endpoints. +,-,* are exact (no
// rounding is ever needed); sqrt rounds outward at a precision in bits.
class Interval {
 public:
  Interval() : lo_(0), hi_(0) {}
  Interval(Rational lo, Rational hi);
  static Interval point(const Rational& v) { return Interval(v, v); }

  const Rational& lo() const { return lo_; }
  const Rational& hi() const { return hi_; }
  Rational width() const { return hi_ - lo_; }
  Rational mid() const { return (hi_ + lo_) / 2; }
  bool contains(const Rational& v) const { return lo_ <= v && v <= hi_; }
  bool contains_zero() const { return sgn(lo_) <= 0 && sgn(hi_) >= 0; }

  Interval operator-() const { return Interval(-hi_, -lo_); }
  friend Interval operator+(const Interval& l, const Interval& r);
  friend Interval operator-(const Interval& l, const Interval& r);
  friend Interval operator*(const Interval& l, const Interval& r);
  friend Interval operator/(const Interval& l, const Interval& r);  // throws if 0 in r

  Interval abs() const;
  Interval sqrt(unsigned bits) const;  // lower end clamped at 0

  // sqrt enclosure of a nonnegative rational at `bits` of precision
  static Interval sqrt_of(const Rational& x, unsigned bits);

  std::string str(unsigned digits = 20) const;

 private:
  Rational lo_, hi_;
};

}  // namespace mcb
