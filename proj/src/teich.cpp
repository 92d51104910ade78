#include "mcbound/teich.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace mcb {

TeichPoint::TeichPoint(ExactScalar x, ExactScalar y) : x_(std::move(x)), y_(std::move(y)) {
  if (y_.sign() <= 0) throw std::domain_error("TeichPoint: imaginary part must be positive");
}

std::string TeichPoint::str() const { return x_.str() + " + " + y_.str() + "*i"; }

TeichPoint TeichPoint::parse(const std::string& text) {
  const auto plus = text.find('+', 1);
  const auto star = text.rfind("*i");
  if (plus == std::string::npos || star == std::string::npos || star < plus)
    throw std::domain_error("TeichPoint: expected 'x + y*i', got '" + text + "'");
  return TeichPoint(ExactScalar(parse_rational(text.substr(0, plus))),
                    ExactScalar(parse_rational(text.substr(plus + 1, star - plus - 1))));
}

ExactScalar flat_length_squared(const TeichPoint& tau, const FoliationVec& v) {
  const ExactScalar re = v.p() + v.q() * tau.x();
  const ExactScalar im = v.q() * tau.y();
  return (re * re + im * im) / tau.y();
}

Distance flat_length(const TeichPoint& tau, const FoliationVec& v, unsigned bits) {
  return Distance::from_squared(flat_length_squared(tau, v), bits);
}

TeichPoint moebius_act(const Mat2z& m, const TeichPoint& tau) {
  // conjugated fractional-linear action tau -> (a tau - b) / (-c tau + d);
  // the sign flips on the off-diagonal make the defining length identity hold
  const ExactScalar a(Rational(m.a)), b(Rational(m.b)), c(Rational(m.c)), d(Rational(m.d));
  const ExactScalar nre = a * tau.x() - b, nim = a * tau.y();
  const ExactScalar ere = d - c * tau.x(), eim = -(c * tau.y());
  const ExactScalar den = ere * ere + eim * eim;
  return TeichPoint((nre * ere + nim * eim) / den, (nim * ere - nre * eim) / den);
}

TeichPoint moebius_act(const MappingClassWord& w, const TeichPoint& tau) {
  return moebius_act(w.matrix(), tau);
}

BoundaryFunctional BoundaryFunctional::interior(TeichPoint tau) {
  return BoundaryFunctional(Kind::Interior, std::move(tau));
}

BoundaryFunctional BoundaryFunctional::ray(const FoliationVec& direction, SurfaceKind s) {
  if (direction.is_zero()) throw std::domain_error("BoundaryFunctional::ray: zero direction");
  const ExactScalar len = total_length(direction, s);
  return BoundaryFunctional(Kind::Ray, direction.scaled(ExactScalar(1) / len));
}

const TeichPoint& BoundaryFunctional::point() const {
  if (kind_ != Kind::Interior) throw std::domain_error("BoundaryFunctional: not an interior point");
  return *tau_;
}

const FoliationVec& BoundaryFunctional::direction() const {
  if (kind_ != Kind::Ray) throw std::domain_error("BoundaryFunctional: not a ray");
  return dir_;
}

bool operator==(const BoundaryFunctional& l, const BoundaryFunctional& r) {
  if (l.kind_ != r.kind_) return false;
  if (l.kind_ == BoundaryFunctional::Kind::Interior) return *l.tau_ == *r.tau_;
  return l.dir_ == r.dir_;
}

std::string BoundaryFunctional::str() const {
  if (kind_ == Kind::Interior) return "interior(" + tau_->str() + ")";
  return "ray" + dir_.str();
}

std::optional<BoundaryFunctional> boundary_action(const ProjClass& f, const BoundaryFunctional& p) {
  return boundary_action_conjugated(conjugate(f.rep()), p);
}

std::optional<BoundaryFunctional> boundary_action_conjugated(const HomMap& fbar,
                                                             const BoundaryFunctional& p) {
  const SurfaceKind s = fbar.surface();
  if (fbar.is_zero()) return std::nullopt;

  if (fbar.kind() == HomMap::Kind::Group) {
    // p o (t w .): interior points move by the inverse Moebius action,
    // rays by the inverse push-forward
    const MappingClassWord winv = invert(fbar.word());
    if (p.kind() == BoundaryFunctional::Kind::Interior)
      return BoundaryFunctional::interior(moebius_act(winv, p.point()));
    return BoundaryFunctional::ray(act(winv, p.direction()), s);
  }

  // fbar = i(E, .) F
  const FoliationVec &e = fbar.e(), &f = fbar.f();
  if (p.kind() == BoundaryFunctional::Kind::Interior) {
    // x -> i(E, x) * flat_length(tau, F): never zero for F != 0
    return BoundaryFunctional::ray(e, s);
  }
  // x -> i(E, x) * i(dir, F): degenerate exactly when i(dir, F) = 0
  if (intersection(p.direction(), f, s).is_zero()) return std::nullopt;
  return BoundaryFunctional::ray(e, s);
}

namespace {

// sup-difference between the l-normalized coordinate vector of the rescaled
// orbit lengths and of the predicted ray, at one orbit point
Interval direction_residual(const TeichPoint& orbit_point, const FoliationVec& ray, SurfaceKind s,
                            unsigned bits) {
  const auto& alpha = filling_family();
  std::array<Interval, 3> lengths, predicted;
  Interval lsum = Interval::point(Rational(0)), psum = lsum;
  for (int i = 0; i < 3; ++i) {
    lengths[i] = flat_length_squared(orbit_point, alpha[i]).enclosure(bits).sqrt(bits);
    predicted[i] = intersection(alpha[i], ray, s).enclosure(bits);
    lsum = lsum + lengths[i];
    psum = psum + predicted[i];
  }
  Interval worst = Interval::point(Rational(0));
  for (int i = 0; i < 3; ++i) {
    const Interval diff = (lengths[i] / lsum - predicted[i] / psum).abs();
    worst = Interval(std::max(worst.lo(), diff.lo()), std::max(worst.hi(), diff.hi()));
  }
  return worst;
}

}  // namespace

OrbitLimit orbit_boundary_limit(const TeichPoint& x0, const std::vector<MappingClassWord>& words,
                                size_t budget, const Rational& gap, SurfaceKind s, unsigned bits) {
  LimitReport report = projective_limit(words, budget, gap, s, bits);
  if (report.outcome != LimitReport::Outcome::BoundaryLimit) throw OrbitLimitError(std::move(report));

  // [f_0] = [i(E,.) F]: the orbit w_n(x0) accumulates on the ray of F
  const FoliationVec ray_dir = report.limit->rep().f();
  const ExactScalar len = total_length(ray_dir, s);
  const FoliationVec ray = ray_dir.scaled(ExactScalar(1) / len);

  const size_t last = report.witness.back();
  const TeichPoint orbit_point = moebius_act(words[last], x0);
  OrbitLimit out{ray, std::move(report), direction_residual(orbit_point, ray, s, bits)};
  return out;
}

namespace {

// ordering of directions by angle in [0, pi): nonnegative slopes ascending,
// then the vertical, then negative slopes ascending
int direction_category(const FoliationVec& v) {
  if (v.p().is_zero()) return 1;
  return v.q().sign() >= 0 ? 0 : 2;
}

bool direction_less(const FoliationVec& l, const FoliationVec& r) {
  const int cl = direction_category(l), cr = direction_category(r);
  if (cl != cr) return cl < cr;
  if (cl == 1) return false;  // both vertical
  const ExactScalar sl = l.q() / l.p(), sr = r.q() / r.p();
  return ExactScalar::compare(sl, sr) < 0;
}

}  // namespace

bool OrbitScan::mesh_certified_below_tan(const Rational& tan_bound, unsigned bits) const {
  if (rays.size() < 2) return false;
  // angle between *directions* (vectors modulo sign) is below atan(bound)
  // iff dot != 0 and |det| < bound |dot|
  auto gap_ok = [&](const FoliationVec& u, const FoliationVec& v) {
    try {
      const ExactScalar dot = (u.p() * v.p() + u.q() * v.q()).abs();
      const ExactScalar det = (u.p() * v.q() - u.q() * v.p()).abs();
      if (dot.sign() <= 0) return false;
      return det < ExactScalar(tan_bound) * dot;
    } catch (const std::domain_error&) {
      const Interval dot = (u.p().enclosure(bits) * v.p().enclosure(bits) +
                            u.q().enclosure(bits) * v.q().enclosure(bits))
                               .abs();
      const Interval det = (u.p().enclosure(bits) * v.q().enclosure(bits) -
                            u.q().enclosure(bits) * v.p().enclosure(bits))
                               .abs();
      if (!(dot.lo() > 0)) return false;
      return det.hi() < tan_bound * dot.lo();
    }
  };
  for (size_t i = 0; i + 1 < rays.size(); ++i)
    if (!gap_ok(rays[i].direction, rays[i + 1].direction)) return false;
  // wrap-around across theta = pi == 0
  return gap_ok(rays.back().direction, rays.front().direction);
}

OrbitScan orbit_closure_scan(const TeichPoint& x0, int max_word_length, SurfaceKind s,
                             unsigned bits) {
  (void)x0;  // the reachable ray set is base-point free (recorded provenance only)
  if (max_word_length < 1) throw std::domain_error("orbit_closure_scan: length must be >= 1");

  std::vector<ScanRay> rays;
  auto push_ray = [&](const FoliationVec& dir, MappingClassWord word, bool from_twist) {
    const ExactScalar len = total_length(dir, s);
    FoliationVec unit = dir.scaled(ExactScalar(1) / len);
    for (const ScanRay& r : rays)
      if (r.direction == unit) return;
    rays.push_back(ScanRay{std::move(unit), std::move(word), from_twist, Distance::exact_zero(bits)});
  };

  // twist rays for every primitive slope in the box, one per +- pair
  const long n = 2L * max_word_length;
  for (long p = 0; p <= n; ++p) {
    for (long q = -n; q <= n; ++q) {
      if (p == 0 && q != 1) continue;
      BigInt g;
      const BigInt bp(p), bq(q);
      mpz_gcd(g.get_mpz_t(), bp.get_mpz_t(), bq.get_mpz_t());
      if (g != 1) continue;
      const CurveClass c(bp, bq);
      push_ray(c.foliation(), dehn_twist(c, 1), true);
    }
  }

  // pA rays from the letter ball
  const int pa_radius = std::min(max_word_length, 6);
  for (const MappingClassWord& w : element_ball(pa_radius)) {
    const Classification cls = classify(w, s);
    if (cls.kind != Classification::Kind::PseudoAnosov) continue;
    push_ray(*cls.unstable, w, false);
    push_ray(*cls.stable, invert(w), false);
  }

  std::sort(rays.begin(), rays.end(),
            [](const ScanRay& l, const ScanRay& r) { return direction_less(l.direction, r.direction); });

  OrbitScan out;
  out.rays = std::move(rays);
  double worst = 0.0;
  auto angle_of = [](const FoliationVec& v) {
    double th = std::atan2(v.q().to_double(), v.p().to_double());
    if (th < 0) th += M_PI;
    return th;
  };
  for (size_t i = 0; i + 1 < out.rays.size(); ++i)
    worst = std::max(worst, angle_of(out.rays[i + 1].direction) - angle_of(out.rays[i].direction));
  if (out.rays.size() >= 2)
    worst = std::max(worst, angle_of(out.rays.front().direction) + M_PI -
                                angle_of(out.rays.back().direction));
  out.largest_gap_radians = worst;
  return out;
}

SystoleResult systole(const TeichPoint& tau, unsigned bits) {
  // the systole is mapping-class invariant, so search at the reduced point
  // (where y >= sqrt(3)/2 keeps the slope box small) and pull the curve back
  auto [red_word, red] = reduce_to_fundamental_domain(tau);
  if (!(red == tau)) {
    SystoleResult inner = systole(red, bits);
    const FoliationVec back = act(invert(red_word), inner.shortest.foliation());
    const BigInt bp(back.p().as_rational().get_num()), bq(back.q().as_rational().get_num());
    return SystoleResult{std::move(inner.value), CurveClass(bp, bq)};
  }

  // minimum over primitive slopes; slopes with q^2 y above the running best
  // cannot compete
  ExactScalar best = flat_length_squared(tau, CurveClass(1, 0).foliation());
  CurveClass best_curve(1, 0);
  auto consider = [&](const BigInt& p, const BigInt& q) {
    BigInt g;
    mpz_gcd(g.get_mpz_t(), p.get_mpz_t(), q.get_mpz_t());
    if (g != 1) return;
    const CurveClass c(p, q);
    const ExactScalar v = flat_length_squared(tau, c.foliation());
    if (v < best) {
      best = v;
      best_curve = c;
    }
  };

  for (BigInt q = 1;; q += 1) {
    // q^2 y^2 / y = q^2 y is a lower bound for this row
    if (ExactScalar(Rational(q * q)) * tau.y() > best) break;
    // center p at -q x
    const ExactScalar target = -(ExactScalar(Rational(q)) * tau.x());
    BigInt p0;
    if (target.is_rational()) {
      Rational t = target.as_rational() + make_rational(1, 2);
      mpz_fdiv_q(p0.get_mpz_t(), t.get_num().get_mpz_t(), t.get_den().get_mpz_t());
    } else {
      p0 = BigInt(target.enclosure(64).mid().get_d() >= 0 ? (long)(target.enclosure(64).mid().get_d() + 0.5)
                                                          : (long)(target.enclosure(64).mid().get_d() - 0.5));
    }
    for (BigInt off = 0;; off = off <= 0 ? BigInt(1 - off) : BigInt(-off)) {
      const BigInt p = p0 + off;
      // |p + q x| >= |off| - 1 (p0 is within 1 of the true center)
      if (abs(off) >= 2) {
        const Rational margin(abs(off) - 1);
        if (ExactScalar(Rational(margin * margin)) / tau.y() > best) break;
      }
      consider(p, q);
    }
  }
  return SystoleResult{Distance::from_squared(best, bits), best_curve};
}

std::pair<MappingClassWord, TeichPoint> reduce_to_fundamental_domain(const TeichPoint& tau) {
  const MappingClassWord s_word = MappingClassWord::parse("A^-1 B A^-1");  // [[0,-1],[1,0]]
  MappingClassWord word;
  TeichPoint t = tau;
  const ExactScalar half(make_rational(1, 2));
  const ExactScalar one(1);
  while (true) {
    // translate x into [-1/2, 1/2]
    const ExactScalar shifted = t.x() + half;
    BigInt n;
    if (shifted.is_rational()) {
      mpz_fdiv_q(n.get_mpz_t(), shifted.as_rational().get_num().get_mpz_t(),
                 shifted.as_rational().get_den().get_mpz_t());
    } else {
      const Interval box = shifted.enclosure(96);
      mpz_fdiv_q(n.get_mpz_t(), box.lo().get_num().get_mpz_t(), box.lo().get_den().get_mpz_t());
      while (shifted < ExactScalar(Rational(n))) n -= 1;
      while (shifted >= ExactScalar(Rational(n + 1))) n += 1;
    }
    if (n != 0) {
      if (!n.fits_slong_p()) throw std::domain_error("reduce: translation overflow");
      const MappingClassWord move = MappingClassWord::generator('A', static_cast<long>(n.get_si()));
      t = moebius_act(move, t);
      word = compose(move, word);
    }
    const ExactScalar r2 = t.x() * t.x() + t.y() * t.y();
    if (r2 < one) {
      t = moebius_act(s_word, t);
      word = compose(s_word, word);
      continue;
    }
    // boundary ties toward x >= 0
    if (t.x() == -half) {
      const MappingClassWord move = MappingClassWord::generator('A', -1);
      t = moebius_act(move, t);
      word = compose(move, word);
    }
    if (r2 == one && t.x().sign() < 0) {
      t = moebius_act(s_word, t);
      word = compose(s_word, word);
    }
    break;
  }
  return {word, t};
}

ThickLimit thick_sequence_limit(const std::vector<TeichPoint>& points, const Rational& gap,
                                SurfaceKind s, unsigned bits) {
  if (points.size() < 2) throw std::domain_error("thick_sequence_limit: need at least two points");

  std::vector<MappingClassWord> reductions;
  std::vector<TeichPoint> reduced;
  reductions.reserve(points.size());
  for (const TeichPoint& p : points) {
    auto [w, r] = reduce_to_fundamental_domain(p);
    reductions.push_back(std::move(w));
    reduced.push_back(std::move(r));
  }

  // deterministic cluster point: first index whose tail stays in a 2^-20 box
  const Rational box = make_rational(1, 1 << 20);
  size_t n0 = points.size() - 1;
  for (size_t i = 0; i < points.size(); ++i) {
    bool ok = true;
    for (size_t j = i; j < points.size() && ok; ++j) {
      const Interval dx = (reduced[j].x().enclosure(bits) - reduced[i].x().enclosure(bits)).abs();
      const Interval dy = (reduced[j].y().enclosure(bits) - reduced[i].y().enclosure(bits)).abs();
      ok = dx.hi() <= box && dy.hi() <= box;
    }
    if (ok) {
      n0 = i;
      break;
    }
  }
  const TeichPoint x0 = reduced[n0];

  std::vector<MappingClassWord> inverted;
  inverted.reserve(points.size());
  for (const MappingClassWord& w : reductions) inverted.push_back(invert(w));

  LimitReport report = projective_limit(inverted, inverted.size(), gap, s, bits);

  if (report.outcome == LimitReport::Outcome::ConstantSubsequence) {
    // the points recur in a compact region: interior accumulation
    const TeichPoint acc = moebius_act(*report.constant, x0);
    return ThickLimit{ThickLimit::Outcome::InteriorAccumulation, acc, std::nullopt, std::nullopt,
                      std::move(report), Interval::point(Rational(0))};
  }
  if (report.outcome != LimitReport::Outcome::BoundaryLimit)
    throw OrbitLimitError(std::move(report));

  std::optional<BoundaryFunctional> functional =
      boundary_action(*report.limit, BoundaryFunctional::interior(x0));
  const size_t last = report.witness.back();
  const Interval residual = direction_residual(points[last], functional->direction(), s, bits);
  return ThickLimit{ThickLimit::Outcome::Boundary, x0, report.limit, std::move(functional),
                    std::move(report), residual};
}

}  // namespace mcb
