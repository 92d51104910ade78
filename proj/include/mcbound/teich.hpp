#pragma once

#include "mcbound/boundary.hpp"

namespace mcb {

// A marked flat structure: tau = x + y i in the upper half-plane, exact
// coordinates (rational or quadratic).
class TeichPoint {
 public:
  TeichPoint(ExactScalar x, ExactScalar y);

  const ExactScalar& x() const { return x_; }
  const ExactScalar& y() const { return y_; }

  friend bool operator==(const TeichPoint& l, const TeichPoint& r) {
    return l.x_ == r.x_ && l.y_ == r.y_;
  }
  friend bool operator!=(const TeichPoint& l, const TeichPoint& r) { return !(l == r); }

  std::string str() const;                         // "x + y*i", exact fractions
  static TeichPoint parse(const std::string& text);  // inverse of str, rationals

 private:
  ExactScalar x_, y_;
};

// |p + q tau|^2 / y: exact square of the flat length of the slope (p,q).
// The same functional serves the hyperbolic-length and the sqrt-extremal
// sides of the model; on these surfaces the two compactifications agree.
ExactScalar flat_length_squared(const TeichPoint& tau, const FoliationVec& v);
Distance flat_length(const TeichPoint& tau, const FoliationVec& v, unsigned bits = 128);

// Action on the upper half-plane, oriented so that
//   flat_length(moebius_act(w, tau), v) = flat_length(tau, act(invert(w), v))
// holds identically (the defining convention; property-tested, not assumed).
TeichPoint moebius_act(const Mat2z& m, const TeichPoint& tau);
TeichPoint moebius_act(const MappingClassWord& w, const TeichPoint& tau);

// A projective homogeneous functional on MF: either the length functional
// of an interior point, or intersection with a boundary ray (directions are
// kept l-normalized so equality is canonical).
class BoundaryFunctional {
 public:
  enum class Kind { Interior, Ray };

  static BoundaryFunctional interior(TeichPoint tau);
  static BoundaryFunctional ray(const FoliationVec& direction, SurfaceKind s);

  Kind kind() const { return kind_; }
  const TeichPoint& point() const;
  const FoliationVec& direction() const;

  friend bool operator==(const BoundaryFunctional& l, const BoundaryFunctional& r);
  friend bool operator!=(const BoundaryFunctional& l, const BoundaryFunctional& r) {
    return !(l == r);
  }

  std::string str() const;

 private:
  explicit BoundaryFunctional(Kind k, TeichPoint tau) : kind_(k), tau_(std::move(tau)) {}
  explicit BoundaryFunctional(Kind k, FoliationVec dir) : kind_(k), dir_(std::move(dir)) {}
  Kind kind_;
  std::optional<TeichPoint> tau_;
  FoliationVec dir_;
};

// Psi([f], [p]) = [p o conjugate(f)]; nullopt encodes the degenerate case
// (the composed functional vanishes identically).
std::optional<BoundaryFunctional> boundary_action(const ProjClass& f, const BoundaryFunctional& p);

// Same, but the map argument is already conjugated: [p o fbar].
std::optional<BoundaryFunctional> boundary_action_conjugated(const HomMap& fbar,
                                                             const BoundaryFunctional& p);

struct OrbitLimit {
  FoliationVec ray;      // l-normalized direction of the limit functional
  LimitReport report;    // underlying projective-limit detection
  Interval residual;     // sup-difference vs rescaled direct lengths, last witness
};

// Error for orbits whose word sequence failed to converge within budget.
class OrbitLimitError : public std::domain_error {
 public:
  explicit OrbitLimitError(LimitReport r)
      : std::domain_error("orbit_boundary_limit: sequence did not converge within budget"),
        report(std::move(r)) {}
  LimitReport report;
};

// lim w_n(x0) in the compactification: the ray of the rank-one limit,
// cross-checked against direct rescaled flat lengths along the orbit.
OrbitLimit orbit_boundary_limit(const TeichPoint& x0, const std::vector<MappingClassWord>& words,
                                size_t budget, const Rational& gap, SurfaceKind s,
                                unsigned bits = 128);

struct ScanRay {
  FoliationVec direction;  // l-normalized
  MappingClassWord word;   // witness word (twist or pA)
  bool from_twist = true;
  Distance gap;            // 0: closed-form limit
};

struct OrbitScan {
  std::vector<ScanRay> rays;  // sorted by direction angle in [0, pi), deduped
  double largest_gap_radians = 0.0;

  // certified: every consecutive angular gap has tangent < bound
  bool mesh_certified_below_tan(const Rational& tan_bound, unsigned bits = 128) const;
};

// Boundary rays reachable from bounded words: twist rays for all primitive
// slopes with |p|,|q| <= 2 * max_word_length, plus the pA rays of the
// letter ball of radius min(max_word_length, 6).
OrbitScan orbit_closure_scan(const TeichPoint& x0, int max_word_length, SurfaceKind s,
                             unsigned bits = 128);

struct SystoleResult {
  Distance value;
  CurveClass shortest;
};

// min over primitive slopes of the flat length at tau (finite certified search).
SystoleResult systole(const TeichPoint& tau, unsigned bits = 128);

// Apply generator moves until |x| <= 1/2 and |tau| >= 1; boundary ties are
// broken toward x >= 0. Returns the word g with g(tau) = reduced point.
std::pair<MappingClassWord, TeichPoint> reduce_to_fundamental_domain(const TeichPoint& tau);

struct ThickLimit {
  enum class Outcome { Boundary, InteriorAccumulation };
  Outcome outcome;
  TeichPoint cluster;  // x0 (boundary case) or the interior accumulation point
  std::optional<ProjClass> limit;
  std::optional<BoundaryFunctional> functional;
  LimitReport report;
  Interval residual;
};

// Constructive thick-part limit: reduce each point to the fundamental
// domain, take the deterministic cluster point of the reduced tail, run the
// projective limit on the inverted reduction words, and push the cluster
// point through Psi. A constant-subsequence outcome is reported as interior
// accumulation.
ThickLimit thick_sequence_limit(const std::vector<TeichPoint>& points, const Rational& gap,
                                SurfaceKind s, unsigned bits = 128);

}  // namespace mcb
