#include "mcbound/boundary.hpp"

#include <algorithm>
#include <cassert>
#include <map>

namespace mcb {

const std::array<FoliationVec, 3>& filling_family() {
  static const std::array<FoliationVec, 3> curves = {
      FoliationVec(ExactScalar(1), ExactScalar(0)),
      FoliationVec(ExactScalar(0), ExactScalar(1)),
      FoliationVec(ExactScalar(1), ExactScalar(1)),
  };
  return curves;
}

std::array<ExactScalar, 3> embedding_coords(const FoliationVec& x, SurfaceKind s) {
  const auto& alpha = filling_family();
  return {intersection(alpha[0], x, s), intersection(alpha[1], x, s), intersection(alpha[2], x, s)};
}

ExactScalar total_length(const FoliationVec& x, SurfaceKind s) {
  const auto coords = embedding_coords(x, s);
  return coords[0] + coords[1] + coords[2];
}

std::vector<FoliationVec> unit_ball_vertices(SurfaceKind s) {
  const Rational h = make_rational(1, 2 * pairing_multiplier(s));
  return {FoliationVec(ExactScalar(h), ExactScalar(0)),
          FoliationVec(ExactScalar(0), ExactScalar(h)),
          FoliationVec(ExactScalar(h), ExactScalar(h))};
}

namespace {

// upper half of the unit polygon; with the sign quotient these three edges
// carry every sup over {l = 1}
std::array<std::pair<FoliationVec, FoliationVec>, 3> unit_edges(SurfaceKind s) {
  const Rational h = make_rational(1, 2 * pairing_multiplier(s));
  const ExactScalar hh(h), zz(Rational(0)), mh(Rational(-h));
  return {{{FoliationVec(hh, zz), FoliationVec(hh, hh)},
           {FoliationVec(hh, hh), FoliationVec(zz, hh)},
           {FoliationVec(zz, hh), FoliationVec(mh, zz)}}};
}

}  // namespace

Mat2x::Mat2x(ExactScalar a_, ExactScalar b_, ExactScalar c_, ExactScalar d_)
    : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)), d(std::move(d_)) {
  canonicalize();
}

Mat2x Mat2x::from_integer(const Mat2z& m, const ExactScalar& scale) {
  return Mat2x(scale * ExactScalar(Rational(m.a)), scale * ExactScalar(Rational(m.b)),
               scale * ExactScalar(Rational(m.c)), scale * ExactScalar(Rational(m.d)));
}

Mat2x Mat2x::scaled(const ExactScalar& t) const { return Mat2x(a * t, b * t, c * t, d * t); }

void Mat2x::canonicalize() {
  const ExactScalar* entries[4] = {&a, &b, &c, &d};
  for (const ExactScalar* e : entries) {
    const int s = e->sign();
    if (s == 0) continue;
    if (s < 0) {
      a = -a;
      b = -b;
      c = -c;
      d = -d;
    }
    return;
  }
}

std::string Mat2x::str() const {
  return "[[" + a.str() + "," + b.str() + "],[" + c.str() + "," + d.str() + "]]";
}

HomMap HomMap::zero(SurfaceKind s) { return HomMap(s, Kind::Zero); }

HomMap HomMap::group(SurfaceKind s, ExactScalar scale, MappingClassWord w) {
  if (scale.sign() <= 0) throw std::domain_error("HomMap::group: scale must be positive");
  HomMap out(s, Kind::Group);
  out.scale_ = std::move(scale);
  out.word_ = std::move(w);
  return out;
}

HomMap HomMap::rank_one(SurfaceKind s, const FoliationVec& e, const FoliationVec& f) {
  if (e.is_zero() || f.is_zero()) throw std::domain_error("HomMap::rank_one: zero foliation");
  HomMap out(s, Kind::RankOne);
  const ExactScalar le = total_length(e, s);
  out.e_ = e.scaled(ExactScalar(1) / le);
  out.f_ = f.scaled(le);
  return out;
}

const ExactScalar& HomMap::scale() const {
  if (kind_ != Kind::Group) throw std::domain_error("HomMap: not a group element");
  return scale_;
}

const MappingClassWord& HomMap::word() const {
  if (kind_ != Kind::Group) throw std::domain_error("HomMap: not a group element");
  return word_;
}

const FoliationVec& HomMap::e() const {
  if (kind_ != Kind::RankOne) throw std::domain_error("HomMap: not rank-one");
  return e_;
}

const FoliationVec& HomMap::f() const {
  if (kind_ != Kind::RankOne) throw std::domain_error("HomMap: not rank-one");
  return f_;
}

FoliationVec HomMap::eval(const FoliationVec& x) const {
  switch (kind_) {
    case Kind::Zero:
      return FoliationVec();
    case Kind::Group:
      return act(word_, x).scaled(scale_);
    case Kind::RankOne:
      return f_.scaled(intersection(e_, x, surface_));
  }
  throw std::logic_error("HomMap::eval: bad kind");
}

bool operator==(const HomMap& l, const HomMap& r) {
  if (l.surface_ != r.surface_ || l.kind_ != r.kind_) return false;
  switch (l.kind_) {
    case HomMap::Kind::Zero:
      return true;
    case HomMap::Kind::Group:
      return l.scale_ == r.scale_ && l.word_ == r.word_;
    case HomMap::Kind::RankOne:
      return l.e_ == r.e_ && l.f_ == r.f_;
  }
  return false;
}

std::string HomMap::str() const {
  switch (kind_) {
    case Kind::Zero:
      return "0";
    case Kind::Group: {
      const std::string w = word_.str();
      return scale_.str() + "*[" + (w.empty() ? "id" : w) + "]";
    }
    case Kind::RankOne:
      return "i(" + e_.str() + ",.)" + f_.str();
  }
  return "?";
}

ExactScalar sup_length(const HomMap& f) {
  // l of the image is piecewise linear and convex, so the sup over the unit
  // ball sits at a polygon vertex
  switch (f.kind()) {
    case HomMap::Kind::Zero:
      return ExactScalar(0);
    case HomMap::Kind::Group: {
      ExactScalar best(0);
      for (const FoliationVec& v : unit_ball_vertices(f.surface())) {
        ExactScalar val = total_length(act(f.word(), v), f.surface());
        if (val > best) best = val;
      }
      return best * f.scale();
    }
    case HomMap::Kind::RankOne: {
      ExactScalar best(0);
      for (const FoliationVec& v : unit_ball_vertices(f.surface())) {
        ExactScalar val = intersection(f.e(), v, f.surface());
        if (val > best) best = val;
      }
      return best * total_length(f.f(), f.surface());
    }
  }
  throw std::logic_error("sup_length: bad kind");
}

HomMap conjugate(const HomMap& f) {
  switch (f.kind()) {
    case HomMap::Kind::Zero:
      return f;
    case HomMap::Kind::Group:
      return HomMap::group(f.surface(), f.scale(), invert(f.word()));
    case HomMap::Kind::RankOne:
      return HomMap::rank_one(f.surface(), f.f(), f.e());
  }
  throw std::logic_error("conjugate: bad kind");
}

HomMap compose(const HomMap& f, const HomMap& g) {
  if (f.surface() != g.surface()) throw std::domain_error("compose: surface mismatch");
  const SurfaceKind s = f.surface();
  if (f.is_zero() || g.is_zero()) return HomMap::zero(s);

  if (f.kind() == HomMap::Kind::Group && g.kind() == HomMap::Kind::Group)
    return HomMap::group(s, f.scale() * g.scale(), compose(f.word(), g.word()));

  if (f.kind() == HomMap::Kind::Group && g.kind() == HomMap::Kind::RankOne)
    return HomMap::rank_one(s, g.e(), act(f.word(), g.f()).scaled(f.scale()));

  if (f.kind() == HomMap::Kind::RankOne && g.kind() == HomMap::Kind::Group)
    return HomMap::rank_one(s, act(invert(g.word()), f.e()).scaled(g.scale()), f.f());

  // rank-one after rank-one degenerates exactly when i(E_f, F_g) = 0
  const ExactScalar pairing = intersection(f.e(), g.f(), s);
  if (pairing.is_zero()) return HomMap::zero(s);
  return HomMap::rank_one(s, g.e(), f.f().scaled(pairing));
}

ProjClass::ProjClass(const HomMap& f) : rep_(normalize_rep(f)) {}

HomMap ProjClass::normalize_rep(const HomMap& f) {
  if (f.is_zero()) throw std::domain_error("normalized_lift: zero map has no projective class");
  const ExactScalar big_l = sup_length(f);
  if (f.kind() == HomMap::Kind::Group)
    return HomMap::group(f.surface(), f.scale() / big_l, f.word());
  return HomMap::rank_one(f.surface(), f.e(), f.f().scaled(ExactScalar(1) / big_l));
}

ProjClass normalized_lift(const HomMap& f) { return ProjClass(f); }

Distance Distance::exact_zero(unsigned bits) {
  return Distance{ExactScalar(0), Interval::point(Rational(0)), bits};
}

Distance Distance::from_squared(const ExactScalar& sq, unsigned bits) {
  if (sq.sign() < 0) throw std::domain_error("Distance: negative square");
  if (sq.sign() == 0) return exact_zero(bits);
  // `bits` is relative precision: widen the inner enclosure until the
  // square is resolved to 2^-bits of its own size (cancellation in a
  // quadratic value can demand far more working precision than output
  // precision)
  unsigned inner = 2 * bits;
  Interval box = sq.enclosure(inner);
  while (sgn(box.lo()) <= 0 || box.width() * Rational(BigInt(1) << bits) > box.lo()) {
    inner *= 2;
    box = sq.enclosure(inner);
    if (inner > 1u << 20) throw std::logic_error("Distance: enclosure failed to converge");
  }
  return Distance{sq, box.sqrt(bits), bits};
}

bool Distance::less_than(const Rational& threshold) const {
  if (sgn(threshold) <= 0) return false;
  if (squared) return *squared < ExactScalar(Rational(threshold * threshold));
  return bounds.hi() < threshold;
}

bool Distance::greater_than(const Rational& threshold) const {
  if (sgn(threshold) < 0) return true;
  if (squared) return *squared > ExactScalar(Rational(threshold * threshold));
  return bounds.lo() > threshold;
}

std::string Distance::str(unsigned digits) const {
  return decimal_string(bounds.mid(), digits);
}

bool distance_less(const Distance& l, const Distance& r) {
  if (l.squared && r.squared) return *l.squared < *r.squared;
  if (l.bounds.hi() < r.bounds.lo()) return true;
  if (r.bounds.hi() <= l.bounds.lo()) return false;
  return l.bounds.mid() < r.bounds.mid();  // ambiguous overlap: deterministic tie-break
}

bool triangle_holds(const Distance& ac, const Distance& ab, const Distance& bc) {
  if (ac.squared && ab.squared && bc.squared) {
    try {
      // sqrt(x) <= sqrt(y) + sqrt(z)  <=>  x - y - z <= 2 sqrt(y z)
      const ExactScalar u = *ac.squared - *ab.squared - *bc.squared;
      if (u.sign() <= 0) return true;
      return u * u <= ExactScalar(4) * (*ab.squared) * (*bc.squared);
    } catch (const std::domain_error&) {
      // fields mix: fall through to the interval route
    }
  }
  return ac.bounds.hi() <= ab.bounds.lo() + bc.bounds.lo();
}

namespace {

// phi_i(map(x)) = |form_i(x)| for each filling curve; the forms are also the
// refinement lines of the sup computation
struct AbsForms {
  std::array<std::pair<ExactScalar, ExactScalar>, 3> coeff;  // (cp, cq) per curve
};

AbsForms map_forms(const HomMap& f) {
  AbsForms out;
  const int m = pairing_multiplier(f.surface());
  const auto& alpha = filling_family();
  switch (f.kind()) {
    case HomMap::Kind::Group: {
      const Mat2z& w = f.word().matrix();
      const ExactScalar a(Rational(w.a)), b(Rational(w.b)), c(Rational(w.c)), d(Rational(w.d));
      for (int i = 0; i < 3; ++i) {
        const ExactScalar ap = alpha[i].p(), aq = alpha[i].q();
        const ExactScalar mult = f.scale() * ExactScalar(m);
        out.coeff[i] = {mult * (ap * c - aq * a), mult * (ap * d - aq * b)};
      }
      return out;
    }
    case HomMap::Kind::RankOne: {
      for (int i = 0; i < 3; ++i) {
        // |det(alpha_i, F)| * m^2 * |det(E, x)|
        const ExactScalar w = ExactScalar(m * m) * slope_det(alpha[i], f.f()).abs();
        out.coeff[i] = {-(w * f.e().q()), w * f.e().p()};
      }
      return out;
    }
    default:
      throw std::logic_error("map_forms: zero map");
  }
}

ExactScalar eval_form(const std::pair<ExactScalar, ExactScalar>& c, const ExactScalar& xp,
                      const ExactScalar& xq) {
  return c.first * xp + c.second * xq;
}

// true if everything stays inside one quadratic field
bool single_field(const AbsForms& f, const AbsForms& g) {
  BigInt d(0);
  auto visit = [&d](const ExactScalar& v) {
    if (v.is_rational()) return true;
    if (d == 0) {
      d = v.radicand();
      return true;
    }
    return d == v.radicand();
  };
  for (const auto& c : f.coeff)
    if (!visit(c.first) || !visit(c.second)) return false;
  for (const auto& c : g.coeff)
    if (!visit(c.first) || !visit(c.second)) return false;
  return true;
}

ExactScalar squared_gap_at(const AbsForms& f, const AbsForms& g, const ExactScalar& xp,
                           const ExactScalar& xq) {
  ExactScalar total(0);
  for (int i = 0; i < 3; ++i) {
    const ExactScalar diff = eval_form(f.coeff[i], xp, xq).abs() - eval_form(g.coeff[i], xp, xq).abs();
    total += diff * diff;
  }
  return total;
}

Interval interval_form(const std::pair<Interval, Interval>& c, const Interval& xp, const Interval& xq) {
  return c.first * xp + c.second * xq;
}

}  // namespace

Distance distance(const ProjClass& a, const ProjClass& b, unsigned bits) {
  if (a.surface() != b.surface()) throw std::domain_error("distance: surface mismatch");
  const SurfaceKind s = a.surface();
  const AbsForms ff = map_forms(a.rep());
  const AbsForms gg = map_forms(b.rep());
  const auto edges = unit_edges(s);

  if (single_field(ff, gg)) {
    std::optional<ExactScalar> best;
    auto consider = [&](const ExactScalar& xp, const ExactScalar& xq) {
      ExactScalar v = squared_gap_at(ff, gg, xp, xq);
      if (!best || v > *best) best = v;
    };
    for (const auto& [v0, v1] : edges) {
      const ExactScalar dp = v1.p() - v0.p(), dq = v1.q() - v0.q();
      consider(v0.p(), v0.q());
      consider(v1.p(), v1.q());
      for (const AbsForms* forms : {&ff, &gg}) {
        for (const auto& c : forms->coeff) {
          const ExactScalar at0 = eval_form(c, v0.p(), v0.q());
          const ExactScalar slope = eval_form(c, dp, dq);
          if (slope.is_zero()) continue;
          const ExactScalar t = -at0 / slope;
          if (t.sign() <= 0 || t >= ExactScalar(1)) continue;
          consider(v0.p() + t * dp, v0.q() + t * dq);
        }
      }
    }
    return Distance::from_squared(*best, bits);
  }

  // mixed fields: the same vertex certificate evaluated in interval
  // arithmetic; candidate parameters that cannot be isolated are covered by
  // a whole-edge range so the enclosure stays sound
  std::array<std::pair<Interval, Interval>, 3> fi, gi;
  for (int i = 0; i < 3; ++i) {
    fi[i] = {ff.coeff[i].first.enclosure(bits), ff.coeff[i].second.enclosure(bits)};
    gi[i] = {gg.coeff[i].first.enclosure(bits), gg.coeff[i].second.enclosure(bits)};
  }
  auto gap_sq = [&](const Interval& xp, const Interval& xq) {
    Interval total = Interval::point(Rational(0));
    for (int i = 0; i < 3; ++i) {
      const Interval diff = interval_form(fi[i], xp, xq).abs() - interval_form(gi[i], xp, xq).abs();
      total = total + diff * diff;
    }
    return total;
  };
  std::optional<Interval> hull;
  auto consider = [&](const Interval& xp, const Interval& xq) {
    const Interval v = gap_sq(xp, xq);
    if (!hull)
      hull = v;
    else
      hull = Interval(std::max(hull->lo(), v.lo()), std::max(hull->hi(), v.hi()));
  };
  const Interval unit(Rational(0), Rational(1));
  for (const auto& [v0, v1] : edges) {
    const Interval p0 = v0.p().enclosure(bits), q0 = v0.q().enclosure(bits);
    const Interval dp = v1.p().enclosure(bits) - p0, dq = v1.q().enclosure(bits) - q0;
    consider(p0, q0);
    consider(p0 + dp, q0 + dq);
    bool covered_whole_edge = false;
    for (const auto& forms : {fi, gi}) {
      for (const auto& c : forms) {
        const Interval at0 = interval_form(c, p0, q0);
        const Interval slope = interval_form(c, dp, dq);
        if (slope.contains_zero()) {
          if (!covered_whole_edge) {
            consider(p0 + unit * dp, q0 + unit * dq);
            covered_whole_edge = true;
          }
          continue;
        }
        Interval t = -at0 / slope;
        if (t.hi() < 0 || t.lo() > 1) continue;
        t = Interval(std::max(t.lo(), Rational(0)), std::min(t.hi(), Rational(1)));
        consider(p0 + t * dp, q0 + t * dq);
      }
    }
  }
  return Distance{std::nullopt, hull->sqrt(bits), bits};
}

Mat2x normalized_matrix(const ProjClass& c) {
  const HomMap& f = c.rep();
  if (f.kind() == HomMap::Kind::Group) return Mat2x::from_integer(f.word().matrix(), f.scale());
  const ExactScalar m(pairing_multiplier(f.surface()));
  const ExactScalar w1 = -(m * f.e().q()), w2 = m * f.e().p();
  return Mat2x(f.f().p() * w1, f.f().p() * w2, f.f().q() * w1, f.f().q() * w2);
}

std::pair<FoliationVec, FoliationVec> rank_one_factor(const Mat2x& m, SurfaceKind s) {
  if (m.is_zero()) throw std::domain_error("rank_one_factor: zero matrix");
  if (!m.det().is_zero()) throw std::domain_error("rank_one_factor: determinant is nonzero");

  const std::pair<ExactScalar, ExactScalar> col1{m.a, m.c}, col2{m.b, m.d};
  const bool use1 = !(col1.first.is_zero() && col1.second.is_zero());
  const auto& fcol = use1 ? col1 : col2;
  const bool top = !fcol.first.is_zero();
  const ExactScalar& anchor = top ? fcol.first : fcol.second;

  const ExactScalar w1 = (top ? col1.first : col1.second) / anchor;
  const ExactScalar w2 = (top ? col2.first : col2.second) / anchor;
  const ExactScalar inv_mult(make_rational(1, pairing_multiplier(s)));

  FoliationVec f(fcol.first, fcol.second);
  FoliationVec e(w2 * inv_mult, -(w1 * inv_mult));
  return {e, f};
}

namespace {

Rational simplest_in(const Rational& lo, const Rational& hi) {
  if (lo > hi) throw std::logic_error("simplest_in: empty interval");
  if (sgn(lo) <= 0 && sgn(hi) >= 0) return Rational(0);
  if (sgn(hi) < 0) return -simplest_in(Rational(-hi), Rational(-lo));
  // 0 < lo <= hi
  Rational l = lo, h = hi;
  std::vector<BigInt> digits;
  while (true) {
    BigInt fl, fh;
    mpz_fdiv_q(fl.get_mpz_t(), l.get_num().get_mpz_t(), l.get_den().get_mpz_t());
    mpz_fdiv_q(fh.get_mpz_t(), h.get_num().get_mpz_t(), h.get_den().get_mpz_t());
    BigInt ceil_l = l.get_den() == 1 ? fl : BigInt(fl + 1);
    if (ceil_l <= fh || h == Rational(fh)) {
      // an integer lies in [l, h]
      digits.push_back(h == Rational(fh) && fh < ceil_l ? fh : ceil_l);
      break;
    }
    digits.push_back(fl);
    // recurse on 1/(h - fl), 1/(l - fl)
    const Rational nl = 1 / (h - Rational(fl));
    const Rational nh = 1 / (l - Rational(fl));
    l = nl;
    h = nh;
  }
  Rational value(digits.back());
  for (auto it = digits.rbegin() + 1; it != digits.rend(); ++it) value = Rational(*it) + 1 / value;
  return value;
}

Rational max_abs_entry(const Mat2x& m) {
  Rational best(0);
  for (const ExactScalar* e : {&m.a, &m.b, &m.c, &m.d}) {
    Rational v = abs(e->as_rational());
    if (v > best) best = v;
  }
  return best;
}

// entrywise sup distance modulo the sign quotient (rational matrices)
Rational mat_delta(const Mat2x& x, const Mat2x& y) {
  auto gap = [](const Mat2x& u, const Mat2x& v, int sign) {
    Rational best(0);
    const ExactScalar* us[4] = {&u.a, &u.b, &u.c, &u.d};
    const ExactScalar* vs[4] = {&v.a, &v.b, &v.c, &v.d};
    for (int i = 0; i < 4; ++i) {
      Rational d = abs(Rational(us[i]->as_rational() - sign * vs[i]->as_rational()));
      if (d > best) best = d;
    }
    return best;
  };
  return std::min(gap(x, y, 1), gap(x, y, -1));
}

Mat2x column_projection(const Mat2x& n) {
  const ExactScalar n1 = n.a * n.a + n.c * n.c;
  const ExactScalar n2 = n.b * n.b + n.d * n.d;
  if (n1 >= n2) {
    if (n1.is_zero()) throw std::domain_error("column_projection: zero matrix");
    const ExactScalar mu = (n.a * n.b + n.c * n.d) / n1;
    return Mat2x(n.a, n.a * mu, n.c, n.c * mu);
  }
  const ExactScalar mu = (n.a * n.b + n.c * n.d) / n2;
  return Mat2x(n.b * mu, n.b, n.d * mu, n.d);
}

Mat2x snap_matrix(const Mat2x& n, const Rational& radius) {
  const Rational scale = max_abs_entry(n);
  if (sgn(scale) == 0) throw std::domain_error("snap_matrix: zero matrix");
  const Rational r = radius / scale;
  auto snap = [&](const ExactScalar& e) {
    const Rational v = e.as_rational() / scale;
    return ExactScalar(simplest_in(v - r, v + r));
  };
  return Mat2x(snap(n.a), snap(n.b), snap(n.c), snap(n.d));
}

struct LimitCandidate {
  ProjClass limit;
  FoliationVec e, f;
};

std::optional<LimitCandidate> factor_candidate(const Mat2x& raw, SurfaceKind s) {
  try {
    if (raw.is_zero() || !raw.det().is_zero()) return std::nullopt;
    auto [e, f] = rank_one_factor(raw, s);
    HomMap map = HomMap::rank_one(s, e, f);
    return LimitCandidate{ProjClass(map), e, f};
  } catch (const std::domain_error&) {
    return std::nullopt;
  }
}

// limit estimates for the generic path over records [0, count): a snapped
// simplest-rational matrix when the tail clusters tightly, then the
// dominant-column projection of the smallest-t matrix; tried in order
std::vector<LimitCandidate> generic_estimates(const std::vector<LimitRecord>& records, size_t count,
                                              SurfaceKind s) {
  std::vector<LimitCandidate> out;
  if (count == 0) return out;
  size_t anchor = 0;
  for (size_t i = 1; i < count; ++i)
    if (records[i].t <= records[anchor].t) anchor = i;

  std::optional<Rational> delta2;
  for (size_t i = 0; i < count; ++i) {
    if (i == anchor) continue;
    Rational d = mat_delta(records[i].normalized, records[anchor].normalized);
    if (!delta2 || d < *delta2) delta2 = d;
  }
  const Mat2x& n = records[anchor].normalized;
  const Rational scale = max_abs_entry(n);
  if (delta2 && sgn(*delta2) > 0 && *delta2 * 256 <= scale) {
    try {
      if (auto cand = factor_candidate(snap_matrix(n, 4 * *delta2), s)) out.push_back(std::move(*cand));
    } catch (const std::domain_error&) {
    }
  }
  try {
    if (auto cand = factor_candidate(column_projection(n), s)) out.push_back(std::move(*cand));
  } catch (const std::domain_error&) {
  }
  return out;
}

}  // namespace

LimitReport projective_limit(const std::vector<MappingClassWord>& words, size_t budget,
                             const Rational& gap, SurfaceKind s, unsigned bits,
                             const ExactScalar& rescale) {
  if (words.empty()) throw std::domain_error("projective_limit: empty sequence");
  if (budget < 2) throw std::domain_error("projective_limit: budget must be >= 2");
  if (sgn(gap) <= 0) throw std::domain_error("projective_limit: gap must be positive");
  if (rescale.sign() <= 0) throw std::domain_error("projective_limit: rescale must be positive");
  const size_t n = std::min(words.size(), budget);

  LimitReport report;
  report.records.reserve(n);
  std::vector<ProjClass> classes;
  classes.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    const HomMap f = HomMap::group(s, ExactScalar(1), words[i]);
    const ExactScalar t = rescale / sup_length(f);
    Mat2x norm = Mat2x::from_integer(words[i].matrix(), t);
    report.records.push_back(LimitRecord{i, words[i], t, norm, std::nullopt});
    classes.push_back(ProjClass(f));
  }

  // (1) constant subsequence: one matrix value covering half the sequence
  std::map<Mat2z, std::vector<size_t>> clusters;
  for (size_t i = 0; i < n; ++i) clusters[words[i].matrix()].push_back(i);
  auto best_cluster = clusters.begin();
  for (auto it = clusters.begin(); it != clusters.end(); ++it) {
    if (it->second.size() > best_cluster->second.size() ||
        (it->second.size() == best_cluster->second.size() &&
         it->second.front() < best_cluster->second.front()))
      best_cluster = it;
  }
  auto emit_constant = [&](const std::vector<size_t>& indices) {
    report.outcome = LimitReport::Outcome::ConstantSubsequence;
    report.constant = words[indices.front()];
    report.witness = indices;
    for (size_t i : indices) report.witness_t.push_back(report.records[i].t);
    report.final_gap = Distance::exact_zero(bits);
    const ProjClass target = classes[indices.front()];
    for (size_t i = 0; i < n; ++i) report.records[i].gap = distance(classes[i], target, bits);
  };
  const size_t constant_threshold = n == 1 ? 1 : std::max<size_t>(2, (n + 1) / 2);
  if (best_cluster->second.size() >= constant_threshold) {
    emit_constant(best_cluster->second);
    return report;
  }

  // shared tail machinery for both boundary paths
  auto finish_boundary = [&](const LimitCandidate& cand, Distance final_gap) -> bool {
    std::vector<size_t> witness;
    std::optional<Distance> last_d;
    std::optional<ExactScalar> last_t;
    for (size_t i = 0; i < n; ++i) {
      report.records[i].gap = distance(classes[i], cand.limit, bits);
      const bool d_down = !last_d || distance_less(*report.records[i].gap, *last_d);
      const bool t_down = !last_t || report.records[i].t < *last_t;
      if (d_down && t_down) {
        witness.push_back(i);
        last_d = report.records[i].gap;
        last_t = report.records[i].t;
      }
    }
    if (witness.size() < std::min<size_t>(3, n)) return false;
    report.outcome = LimitReport::Outcome::BoundaryLimit;
    report.limit = cand.limit;
    report.factor_e = cand.e;
    report.factor_f = cand.f;
    report.witness = witness;
    report.witness_t.clear();
    for (size_t i : witness) report.witness_t.push_back(report.records[i].t);
    report.final_gap = std::move(final_gap);
    return true;
  };

  // (2) power-family structure on a tail: constant left/right quotient
  if (n >= 3) {
    struct Structure {
      Mat2z g;
      size_t tail_start;
      bool left;
    };
    std::optional<Structure> st;
    auto scan = [&](bool left) -> std::optional<Structure> {
      const Mat2z g = left ? words[n - 1].matrix() * words[n - 2].matrix().inverse()
                           : words[n - 2].matrix().inverse() * words[n - 1].matrix();
      if (g.is_identity()) return std::nullopt;
      size_t start = n - 2;
      while (start > 0) {
        const Mat2z q = left ? words[start].matrix() * words[start - 1].matrix().inverse()
                             : words[start - 1].matrix().inverse() * words[start].matrix();
        if (q != g) break;
        --start;
      }
      if (n - start < 3) return std::nullopt;
      return Structure{g, start, left};
    };
    auto left = scan(true);
    auto right = scan(false);
    if (left && right)
      st = left->tail_start <= right->tail_start ? left : right;
    else
      st = left ? left : right;

    if (st) {
      const MappingClassWord gw = MappingClassWord::from_matrix(st->g);
      const Classification cls = classify(gw, s);
      if (cls.kind == Classification::Kind::Periodic) {
        // tail matrices cycle; report the most frequent value as constant
        std::map<Mat2z, std::vector<size_t>> tail_clusters;
        for (size_t i = st->tail_start; i < n; ++i) tail_clusters[words[i].matrix()].push_back(i);
        auto best = tail_clusters.begin();
        for (auto it = tail_clusters.begin(); it != tail_clusters.end(); ++it)
          if (it->second.size() > best->second.size()) best = it;
        if (best->second.size() >= 2) {
          emit_constant(best->second);
          return report;
        }
      } else {
        HomMap base = HomMap::zero(s);
        if (cls.kind == Classification::Kind::Reducible) {
          const FoliationVec c = cls.curve->foliation();
          base = HomMap::rank_one(s, c, c.scaled(ExactScalar(Rational(abs(cls.power)))));
        } else {
          base = HomMap::rank_one(s, *cls.stable, *cls.unstable);
        }
        const HomMap anchor_map = HomMap::group(s, ExactScalar(1), words[st->tail_start]);
        const HomMap limit_map = st->left ? compose(base, anchor_map) : compose(anchor_map, base);
        LimitCandidate cand{ProjClass(limit_map), limit_map.e(), limit_map.f()};
        if (finish_boundary(cand, Distance::exact_zero(bits))) return report;
      }
    }
  }

  // (3) generic path: snap/project the matrix with the smallest t and
  // certify d-hat(anchor class, candidate) < gap
  {
    size_t anchor = 0;
    for (size_t i = 1; i < n; ++i)
      if (report.records[i].t <= report.records[anchor].t) anchor = i;
    for (const LimitCandidate& cand : generic_estimates(report.records, n, s)) {
      Distance cert = distance(classes[anchor], cand.limit, bits);
      if (cert.less_than(gap)) {
        // estimate stability against the one-shorter prefix
        Distance stability = cert;
        if (n >= 2) {
          const auto prev = generic_estimates(report.records, n - 1, s);
          if (!prev.empty()) stability = distance(prev.front().limit, cand.limit, bits);
        }
        if (finish_boundary(cand, stability)) return report;
      }
      if (!report.best_gap || distance_less(cert, *report.best_gap)) report.best_gap = cert;
    }
  }

  // (4) last resort: any repeated element is a (finite) constant certificate
  if (best_cluster->second.size() >= 2) {
    emit_constant(best_cluster->second);
    return report;
  }

  report.outcome = LimitReport::Outcome::NoConvergenceWithinBudget;
  for (LimitRecord& rec : report.records) rec.gap.reset();  // no limit to measure against
  return report;
}

ProjClass twist_limit(const CurveClass& c, long k, SurfaceKind s) {
  if (k < 1) throw std::domain_error("twist_limit: power must be >= 1");
  const FoliationVec cf = CurveClass(c.p(), c.q()).foliation();
  return ProjClass(HomMap::rank_one(s, cf, cf.scaled(ExactScalar(k))));
}

ProjClass pa_limit(const MappingClassWord& w, bool forward, SurfaceKind s) {
  const Classification cls = classify(w, s);
  if (cls.kind != Classification::Kind::PseudoAnosov)
    throw std::domain_error("pa_limit: word is not pseudo-Anosov");
  if (forward) return ProjClass(HomMap::rank_one(s, *cls.stable, *cls.unstable));
  return ProjClass(HomMap::rank_one(s, *cls.unstable, *cls.stable));
}

namespace {

BigInt floor_exact(const ExactScalar& x) {
  if (x.is_rational()) {
    BigInt q;
    mpz_fdiv_q(q.get_mpz_t(), x.as_rational().get_num().get_mpz_t(),
               x.as_rational().get_den().get_mpz_t());
    return q;
  }
  const Interval box = x.enclosure(96);
  BigInt f;
  mpz_fdiv_q(f.get_mpz_t(), box.lo().get_num().get_mpz_t(), box.lo().get_den().get_mpz_t());
  while (x < ExactScalar(Rational(f))) f -= 1;
  while (x >= ExactScalar(Rational(f + 1))) f += 1;
  return f;
}

// continued-fraction convergents of a direction; rational directions are
// their own (single) convergent
class ConvergentSeq {
 public:
  ConvergentSeq(const FoliationVec& target, size_t cap) {
    if (target.q().is_zero()) {
      exact_ = CurveClass(1, 0);
      return;
    }
    const ExactScalar slope = target.p() / target.q();
    if (slope.is_rational()) {
      exact_ = CurveClass(slope.as_rational().get_num(), slope.as_rational().get_den());
      return;
    }
    ExactScalar x = slope;
    BigInt h1 = 1, h0, k1 = 0, k0;
    for (size_t i = 0; i < cap; ++i) {
      const BigInt a = floor_exact(x);
      h0 = i == 0 ? a : BigInt(a * hs_.back().first + h1);
      k0 = i == 0 ? BigInt(1) : BigInt(a * hs_.back().second + k1);
      if (i > 0) {
        h1 = hs_.back().first;
        k1 = hs_.back().second;
      }
      hs_.emplace_back(h0, k0);
      const ExactScalar frac = x - ExactScalar(Rational(a));
      if (frac.is_zero()) break;
      x = ExactScalar(1) / frac;
    }
  }

  CurveClass at(size_t step) const {
    if (exact_) return *exact_;
    const size_t idx = std::min(step, hs_.size() - 1);
    return CurveClass(hs_[idx].first, hs_[idx].second);
  }

  bool settled(size_t step) const { return exact_.has_value() || step + 1 >= hs_.size(); }

 private:
  std::optional<CurveClass> exact_;
  std::vector<std::pair<BigInt, BigInt>> hs_;
};

}  // namespace

std::vector<SynthesisStep> synthesize_boundary_point(const FoliationVec& f_target,
                                                     const FoliationVec& g_target,
                                                     const Rational& tol, SurfaceKind s,
                                                     size_t max_steps, unsigned bits) {
  if (f_target.is_zero() || g_target.is_zero())
    throw std::domain_error("synthesize_boundary_point: zero target");
  if (sgn(tol) <= 0) throw std::domain_error("synthesize_boundary_point: tolerance must be positive");

  const ProjClass target(HomMap::rank_one(s, f_target, g_target));
  const ConvergentSeq cf(f_target, max_steps + 2);
  const ConvergentSeq cg(g_target, max_steps + 2);

  std::vector<SynthesisStep> steps;
  for (size_t i = 0; i < max_steps; ++i) {
    const CurveClass c = cf.at(i), d = cg.at(i);
    MappingClassWord h = mapping_between(c, d);
    ProjClass approx(HomMap::rank_one(s, c.foliation(), d.foliation()));
    Distance gap = distance(approx, target, bits);
    const bool done = gap.less_than(tol) || (gap.is_zero() && cf.settled(i) && cg.settled(i));
    steps.push_back(SynthesisStep{c, d, std::move(h), std::move(approx), std::move(gap)});
    if (done) break;
  }
  return steps;
}

Distance min_pairwise_distance(int max_word_length, SurfaceKind s, unsigned bits) {
  if (max_word_length < 1) throw std::domain_error("min_pairwise_distance: length must be >= 1");
  const std::vector<MappingClassWord> ball = element_ball(max_word_length);
  std::vector<ProjClass> classes;
  classes.reserve(ball.size());
  for (const MappingClassWord& w : ball) classes.emplace_back(HomMap::group(s, ExactScalar(1), w));

  // the value of the sup at any polygon vertex bounds d-hat from below, so a
  // per-class signature of embedded vertex images prunes almost every pair
  const std::vector<FoliationVec> verts = unit_ball_vertices(s);
  std::vector<std::array<Rational, 9>> sig(classes.size());
  for (size_t i = 0; i < classes.size(); ++i) {
    size_t k = 0;
    for (const FoliationVec& v : verts)
      for (const ExactScalar& c : embedding_coords(classes[i].rep().eval(v), s))
        sig[i][k++] = c.as_rational();
  }
  auto vertex_lower_bound_sq = [&](size_t i, size_t j) {
    Rational best(0);
    for (size_t v = 0; v < 3; ++v) {
      Rational sum(0);
      for (size_t c = 0; c < 3; ++c) {
        const Rational d = sig[i][3 * v + c] - sig[j][3 * v + c];
        sum += d * d;
      }
      if (sum > best) best = sum;
    }
    return best;
  };

  std::optional<Distance> best;
  for (size_t i = 0; i < classes.size(); ++i) {
    for (size_t j = i + 1; j < classes.size(); ++j) {
      if (best && best->squared && ExactScalar(vertex_lower_bound_sq(i, j)) >= *best->squared)
        continue;
      Distance d = distance(classes[i], classes[j], bits);
      if (!best || distance_less(d, *best)) best = std::move(d);
    }
  }
  if (!best) throw std::domain_error("min_pairwise_distance: need at least two elements");
  return *best;
}

}  // namespace mcb
