#pragma once

#include <array>
#include <optional>
#include <string>

#include "mcbound/scalar.hpp"

namespace mcb {

// The two complexity-one surfaces. Curve classes are rational slopes, the
// pairing is multiplier * |det|, and the mapping class action factors
// through PSL(2,Z) in both cases.
enum class SurfaceKind { OncePuncturedTorus, FourPuncturedSphere };

SurfaceKind parse_surface(const std::string& token);  // "t11" | "s04"
std::string surface_name(SurfaceKind kind);

inline int pairing_multiplier(SurfaceKind kind) {
  return kind == SurfaceKind::OncePuncturedTorus ? 1 : 2;
}

// A measured foliation in slope coordinates, identified with its negative.
// Canonical form: first nonzero coordinate positive. The zero vector is the
// zero foliation; projective operations reject it.
class FoliationVec {
 public:
  FoliationVec() = default;
  FoliationVec(ExactScalar p, ExactScalar q);

  const ExactScalar& p() const { return p_; }
  const ExactScalar& q() const { return q_; }
  bool is_zero() const { return p_.is_zero() && q_.is_zero(); }

  FoliationVec scaled(const ExactScalar& t) const;

  friend bool operator==(const FoliationVec& l, const FoliationVec& r) {
    return l.p_ == r.p_ && l.q_ == r.q_;
  }
  friend bool operator!=(const FoliationVec& l, const FoliationVec& r) { return !(l == r); }

  std::string str() const;

 private:
  ExactScalar p_, q_;
};

// A weighted isotopy class of an essential simple closed curve: a primitive
// integer slope modulo sign, with an optional positive weight.
class CurveClass {
 public:
  CurveClass(BigInt p, BigInt q, std::optional<Rational> weight = std::nullopt);

  const BigInt& p() const { return p_; }
  const BigInt& q() const { return q_; }
  const std::optional<Rational>& weight() const { return weight_; }

  FoliationVec foliation() const;  // weight folded in (1 if absent)
  std::string slope_str() const;   // "p/q"

  friend bool operator==(const CurveClass& l, const CurveClass& r) {
    return l.p_ == r.p_ && l.q_ == r.q_ && l.weight_ == r.weight_;
  }

 private:
  BigInt p_, q_;
  std::optional<Rational> weight_;
};

// det(x, y) = p_x q_y - q_x p_y, the signed form under the pairing.
ExactScalar slope_det(const FoliationVec& x, const FoliationVec& y);

// Geometric intersection number: multiplier * |det|. Bi-homogeneous,
// symmetric, zero iff the slopes are projectively equal (or a side is 0).
ExactScalar intersection(const FoliationVec& x, const FoliationVec& y, SurfaceKind s);

}  // namespace mcb
