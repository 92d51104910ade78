#include "mcbound/surface.hpp"

namespace mcb {

SurfaceKind parse_surface(const std::string& token) {
  if (token == "t11") return SurfaceKind::OncePuncturedTorus;
  if (token == "s04") return SurfaceKind::FourPuncturedSphere;
  throw std::domain_error("unknown surface '" + token + "' (expected t11 or s04)");
}

std::string surface_name(SurfaceKind kind) {
  return kind == SurfaceKind::OncePuncturedTorus ? "t11" : "s04";
}

FoliationVec::FoliationVec(ExactScalar p, ExactScalar q) : p_(std::move(p)), q_(std::move(q)) {
  // force compatible fields up front (throws on mixed radicands)
  ExactScalar probe = p_ + q_;
  (void)probe;
  const int lead = p_.is_zero() ? q_.sign() : p_.sign();
  if (lead < 0) {
    p_ = -p_;
    q_ = -q_;
  }
}

FoliationVec FoliationVec::scaled(const ExactScalar& t) const {
  return FoliationVec(p_ * t, q_ * t);
}

std::string FoliationVec::str() const { return "(" + p_.str() + "," + q_.str() + ")"; }

CurveClass::CurveClass(BigInt p, BigInt q, std::optional<Rational> weight)
    : p_(std::move(p)), q_(std::move(q)), weight_(std::move(weight)) {
  if (p_ == 0 && q_ == 0) throw std::domain_error("CurveClass: zero slope");
  BigInt g;
  mpz_gcd(g.get_mpz_t(), p_.get_mpz_t(), q_.get_mpz_t());
  if (g != 1) throw std::domain_error("CurveClass: slope (" + p_.get_str() + "," + q_.get_str() + ") is not primitive");
  const int lead = p_ != 0 ? sgn(p_) : sgn(q_);
  if (lead < 0) {
    p_ = -p_;
    q_ = -q_;
  }
  if (weight_ && sgn(*weight_) <= 0) throw std::domain_error("CurveClass: weight must be positive");
}

FoliationVec CurveClass::foliation() const {
  const Rational w = weight_ ? *weight_ : Rational(1);
  return FoliationVec(ExactScalar(Rational(p_) * w), ExactScalar(Rational(q_) * w));
}

std::string CurveClass::slope_str() const { return p_.get_str() + "/" + q_.get_str(); }

ExactScalar slope_det(const FoliationVec& x, const FoliationVec& y) {
  return x.p() * y.q() - x.q() * y.p();
}

ExactScalar intersection(const FoliationVec& x, const FoliationVec& y, SurfaceKind s) {
  return slope_det(x, y).abs() * ExactScalar(pairing_multiplier(s));
}

}  // namespace mcb
