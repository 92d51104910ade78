#include "mcbound/scalar.hpp"

#include <algorithm>
#include <sstream>
#include <vector>

namespace mcb {

Rational make_rational(const BigInt& num, const BigInt& den) {
  if (den == 0) throw std::domain_error("make_rational: zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

Rational make_rational(long num, long den) {
  return make_rational(BigInt(num), BigInt(den));
}

Rational parse_rational(const std::string& text) {
  std::string s = text;
  s.erase(std::remove_if(s.begin(), s.end(), [](char c) { return c == ' '; }), s.end());
  if (s.empty()) throw std::domain_error("parse_rational: empty string");

  // dyadic form k*2^-e or 2^-e
  auto caret = s.find("2^");
  if (caret != std::string::npos && (caret == 0 || s[caret - 1] == '*')) {
    std::string head = caret == 0 ? "1" : s.substr(0, caret - 1);
    std::string expo = s.substr(caret + 2);
    if (expo.empty()) throw std::domain_error("parse_rational: bad dyadic '" + text + "'");
    long e = std::stol(expo);
    BigInt k(head);
    BigInt pow2 = 1;
    mpz_mul_2exp(pow2.get_mpz_t(), pow2.get_mpz_t(), static_cast<unsigned long>(e < 0 ? -e : e));
    return e < 0 ? make_rational(k, pow2) : make_rational(k * pow2, 1);
  }

  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return make_rational(BigInt(s), 1);
    return make_rational(BigInt(s.substr(0, slash)), BigInt(s.substr(slash + 1)));
  } catch (const std::invalid_argument&) {
    throw std::domain_error("parse_rational: cannot parse '" + text + "'");
  }
}

std::string decimal_string(const Rational& value, unsigned digits) {
  const bool neg = sgn(value) < 0;
  Rational v = neg ? Rational(-value) : value;
  BigInt scale = 1;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, digits);
  BigInt scaled;
  // truncate toward zero
  mpz_tdiv_q(scaled.get_mpz_t(), BigInt(v.get_num() * scale).get_mpz_t(), v.get_den().get_mpz_t());
  BigInt ip = scaled / scale;
  BigInt fp = scaled % scale;
  std::string out = (neg && (ip != 0 || fp != 0)) ? "-" : "";
  out += ip.get_str();
  if (digits > 0) {
    std::string frac = fp.get_str();
    frac.insert(frac.begin(), digits - frac.size(), '0');
    out += "." + frac;
  }
  return out;
}

std::pair<BigInt, BigInt> split_square_part(const BigInt& d) {
  if (d <= 0) throw std::domain_error("split_square_part: nonpositive radicand");
  BigInt core = d;
  BigInt root = 1;
  // trial division by small primes, pulling out p^2 factors
  static const unsigned long kLimit = 10000;
  for (unsigned long p = 2; p <= kLimit; p = (p == 2 ? 3 : p + 2)) {
    BigInt p2 = BigInt(p) * p;
    if (p2 > core) break;
    while (mpz_divisible_p(core.get_mpz_t(), p2.get_mpz_t())) {
      core /= p2;
      root *= p;
    }
  }
  if (mpz_perfect_square_p(core.get_mpz_t())) {
    BigInt r;
    mpz_sqrt(r.get_mpz_t(), core.get_mpz_t());
    root *= r;
    core = 1;
  }
  return {core, root};
}

ExactScalar::ExactScalar(Rational a, Rational b, BigInt d) : a_(std::move(a)), b_(std::move(b)), d_(std::move(d)) {
  if (sgn(b_) != 0 && d_ <= 1) throw std::domain_error("ExactScalar: radicand must be > 1");
  normalize();
}

ExactScalar ExactScalar::sqrt_of(const Rational& r) {
  if (sgn(r) < 0) throw std::domain_error("ExactScalar::sqrt_of: negative argument");
  if (sgn(r) == 0) return ExactScalar();
  // sqrt(p/q) = sqrt(p*q)/q
  BigInt pq = r.get_num() * r.get_den();
  auto [core, root] = split_square_part(pq);
  if (core == 1) return ExactScalar(make_rational(root, r.get_den()));
  return ExactScalar(Rational(0), make_rational(root, r.get_den()), core);
}

void ExactScalar::normalize() {
  if (sgn(b_) == 0) {
    d_ = 0;
    b_ = 0;
    return;
  }
  auto [core, root] = split_square_part(d_);
  if (root != 1) {
    b_ *= Rational(root);
    d_ = core;
  }
  if (d_ == 1) {
    a_ += b_;
    b_ = 0;
    d_ = 0;
  }
}

const Rational& ExactScalar::as_rational() const {
  if (!is_rational()) throw std::domain_error("ExactScalar: irrational value where rational required");
  return a_;
}

int ExactScalar::field_sign(const Rational& r, const Rational& s, const BigInt& d) {
  const int sr = sgn(r), ss = sgn(s);
  if (ss == 0) return sr;
  if (sr == 0) return ss;
  if (sr == ss) return sr;
  // opposite signs: value has the sign of r iff r^2 > s^2 d
  const int c = cmp(Rational(r * r), Rational(s * s * Rational(d)));
  return c == 0 ? 0 : (c > 0 ? sr : ss);
}

int ExactScalar::sign() const {
  if (is_rational()) return sgn(a_);
  return field_sign(a_, b_, d_);
}

ExactScalar ExactScalar::operator-() const {
  ExactScalar out;
  out.a_ = -a_;
  out.b_ = -b_;
  out.d_ = d_;
  return out;
}

ExactScalar& ExactScalar::operator+=(const ExactScalar& o) {
  if (!is_rational() && !o.is_rational() && d_ != o.d_)
    throw std::domain_error("ExactScalar: mixed quadratic fields sqrt(" + d_.get_str() + ") vs sqrt(" + o.d_.get_str() + ")");
  a_ += o.a_;
  b_ += o.b_;
  if (d_ == 0) d_ = o.d_;
  normalize();
  return *this;
}

ExactScalar& ExactScalar::operator-=(const ExactScalar& o) { return *this += -o; }

ExactScalar& ExactScalar::operator*=(const ExactScalar& o) {
  if (!is_rational() && !o.is_rational() && d_ != o.d_)
    throw std::domain_error("ExactScalar: mixed quadratic fields sqrt(" + d_.get_str() + ") vs sqrt(" + o.d_.get_str() + ")");
  const BigInt d = d_ != 0 ? d_ : o.d_;
  Rational a = a_ * o.a_ + b_ * o.b_ * Rational(d);
  Rational b = a_ * o.b_ + b_ * o.a_;
  a_ = a;
  b_ = b;
  d_ = d;
  normalize();
  return *this;
}

ExactScalar& ExactScalar::operator/=(const ExactScalar& o) {
  if (o.is_zero()) throw std::domain_error("ExactScalar: division by zero");
  if (o.is_rational()) {
    a_ /= o.a_;
    b_ /= o.a_;
    normalize();
    return *this;
  }
  // multiply by conjugate / field norm
  Rational nrm = o.a_ * o.a_ - o.b_ * o.b_ * Rational(o.d_);
  ExactScalar conj;
  conj.a_ = o.a_ / nrm;
  conj.b_ = -o.b_ / nrm;
  conj.d_ = o.d_;
  return *this *= conj;
}

int ExactScalar::compare(const ExactScalar& l, const ExactScalar& r) {
  // same field (or rational): subtract and read the sign
  if (l.d_ == r.d_ || l.is_rational() || r.is_rational()) {
    const BigInt d = l.d_ != 0 ? l.d_ : r.d_;
    return field_sign(l.a_ - r.a_, l.b_ - r.b_, d == 0 ? BigInt(2) : d);
  }
  // different radicands: sign of (x + b1 sqrt(D1)) - b2 sqrt(D2)
  const Rational x = l.a_ - r.a_;
  const int s1 = field_sign(x, l.b_, l.d_);
  const int s2 = sgn(r.b_);
  if (s1 <= 0 && s2 >= 0) return (s1 == 0 && s2 == 0) ? 0 : -1;
  if (s1 >= 0 && s2 <= 0) return (s1 == 0 && s2 == 0) ? 0 : 1;
  // both sides share a sign: compare squares, which lands in Q(sqrt(D1))
  // (x + b1 sqrt(D1))^2 vs b2^2 D2
  Rational sq_rat = x * x + l.b_ * l.b_ * Rational(l.d_) - r.b_ * r.b_ * Rational(r.d_);
  Rational sq_rad = 2 * x * l.b_;
  int square_cmp = field_sign(sq_rat, sq_rad, l.d_);
  return s1 > 0 ? square_cmp : -square_cmp;
}

Interval ExactScalar::enclosure(unsigned bits) const {
  Interval res = Interval::point(a_);
  if (!is_rational()) {
    Interval rad = Interval::sqrt_of(Rational(d_), bits);
    res = res + Interval::point(b_) * rad;
  }
  return res;
}

double ExactScalar::to_double() const {
  if (is_rational()) return a_.get_d();
  return enclosure(64).mid().get_d();
}

std::string ExactScalar::str() const {
  std::ostringstream os;
  if (is_rational()) {
    os << a_;
    return os.str();
  }
  os << a_ << (sgn(b_) < 0 ? "-" : "+");
  Rational ab = ::abs(b_);
  if (ab != 1) os << ab << "*";
  os << "sqrt(" << d_ << ")";
  return os.str();
}

Interval::Interval(Rational lo, Rational hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
  if (lo_ > hi_) throw std::domain_error("Interval: lo > hi");
}

Interval operator+(const Interval& l, const Interval& r) { return Interval(l.lo_ + r.lo_, l.hi_ + r.hi_); }
Interval operator-(const Interval& l, const Interval& r) { return Interval(l.lo_ - r.hi_, l.hi_ - r.lo_); }

Interval operator*(const Interval& l, const Interval& r) {
  const Rational cands[4] = {l.lo_ * r.lo_, l.lo_ * r.hi_, l.hi_ * r.lo_, l.hi_ * r.hi_};
  return Interval(*std::min_element(cands, cands + 4), *std::max_element(cands, cands + 4));
}

Interval operator/(const Interval& l, const Interval& r) {
  if (r.contains_zero()) throw std::domain_error("Interval: division by interval containing zero");
  const Rational cands[4] = {l.lo_ / r.lo_, l.lo_ / r.hi_, l.hi_ / r.lo_, l.hi_ / r.hi_};
  return Interval(*std::min_element(cands, cands + 4), *std::max_element(cands, cands + 4));
}

Interval Interval::abs() const {
  if (sgn(lo_) >= 0) return *this;
  if (sgn(hi_) <= 0) return -*this;
  return Interval(Rational(0), std::max(Rational(-lo_), hi_));
}

Interval Interval::sqrt_of(const Rational& x, unsigned bits) {
  if (sgn(x) < 0) throw std::domain_error("Interval::sqrt_of: negative argument");
  if (sgn(x) == 0) return Interval::point(Rational(0));
  // sqrt(p/q) = sqrt(p q)/q, bounded by floor/ceil of 2^bits sqrt(p q)
  BigInt pq = x.get_num() * x.get_den();
  BigInt scaled = pq;
  mpz_mul_2exp(scaled.get_mpz_t(), scaled.get_mpz_t(), 2 * bits);
  BigInt root;
  mpz_sqrt(root.get_mpz_t(), scaled.get_mpz_t());
  BigInt two_k = 1;
  mpz_mul_2exp(two_k.get_mpz_t(), two_k.get_mpz_t(), bits);
  BigInt den = x.get_den() * two_k;
  return Interval(make_rational(root, den), make_rational(root + 1, den));
}

Interval Interval::sqrt(unsigned bits) const {
  if (sgn(hi_) < 0) throw std::domain_error("Interval::sqrt: negative interval");
  Rational lo = sgn(lo_) < 0 ? Rational(0) : lo_;
  return Interval(sqrt_of(lo, bits).lo(), sqrt_of(hi_, bits).hi());
}

std::string Interval::str(unsigned digits) const {
  return "[" + decimal_string(lo_, digits) + "," + decimal_string(hi_, digits) + "]";
}

}  // namespace mcb
