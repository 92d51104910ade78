#include <doctest.h>

#include <random>

#include "mcbound/teich.hpp"

using namespace mcb;

namespace {
const SurfaceKind t11 = SurfaceKind::OncePuncturedTorus;

FoliationVec fol(long p, long q) { return FoliationVec(ExactScalar(p), ExactScalar(q)); }
TeichPoint pt(const Rational& x, const Rational& y) { return TeichPoint(ExactScalar(x), ExactScalar(y)); }
const TeichPoint i_point = pt(Rational(0), Rational(1));
}  // namespace

TEST_CASE("flat length at the square point") {
  CHECK(flat_length_squared(i_point, fol(1, 0)) == ExactScalar(1));
  CHECK(flat_length_squared(i_point, fol(3, 4)) == ExactScalar(25));  // sqrt(p^2+q^2)
  CHECK(flat_length_squared(pt(Rational(0), Rational(2)), fol(0, 1)) == ExactScalar(2));
  CHECK(flat_length_squared(i_point, FoliationVec()).is_zero());
  CHECK_THROWS_AS(pt(Rational(0), Rational(0)), std::domain_error);
}

TEST_CASE("TeichPoint text round trip") {
  const TeichPoint tau = pt(make_rational(-3, 7), make_rational(22, 5));
  CHECK(TeichPoint::parse(tau.str()) == tau);
  CHECK(TeichPoint::parse("1/2 + 3/4*i") == pt(make_rational(1, 2), make_rational(3, 4)));
  CHECK_THROWS_AS(TeichPoint::parse("junk"), std::domain_error);
}

TEST_CASE("moebius action satisfies the defining length identity") {
  CHECK(moebius_act(MappingClassWord(), i_point) == i_point);

  // convention check at tau = i, w = A, v = (0,1): both sides equal
  const MappingClassWord a = MappingClassWord::parse("A");
  CHECK(flat_length_squared(moebius_act(a, i_point), fol(0, 1)) ==
        flat_length_squared(i_point, act(invert(a), fol(0, 1))));

  // and identically over random data
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    MappingClassWord w;
    for (int j = 0; j < 4; ++j)
      w = compose(w, MappingClassWord::generator(rng() % 2 ? 'A' : 'B',
                                                 (rng() % 2 ? 1 : -1) * (1 + long(rng() % 3))));
    const TeichPoint tau = pt(make_rational(long(rng() % 41) - 20, 1 + long(rng() % 9)),
                              make_rational(1 + long(rng() % 30), 1 + long(rng() % 9)));
    const FoliationVec v = fol(long(rng() % 15) - 7, long(rng() % 15) - 7);
    CHECK(flat_length_squared(moebius_act(w, tau), v) ==
          flat_length_squared(tau, act(invert(w), v)));
    const MappingClassWord w2 = MappingClassWord::generator(rng() % 2 ? 'A' : 'B', 1 + long(rng() % 2));
    CHECK(moebius_act(compose(w, w2), tau) == moebius_act(w, moebius_act(w2, tau)));
  }
}

TEST_CASE("psi reproduces the group action on interior points") {
  const MappingClassWord w = MappingClassWord::parse("A^2 B^-1");
  const ProjClass cls(HomMap::group(t11, ExactScalar(1), w));
  const auto moved = boundary_action(cls, BoundaryFunctional::interior(i_point));
  REQUIRE(moved.has_value());
  REQUIRE(moved->kind() == BoundaryFunctional::Kind::Interior);
  CHECK(moved->point() == moebius_act(w, i_point));
}

TEST_CASE("psi on rank-one classes and the degenerate set") {
  const FoliationVec e = fol(2, 1), f = fol(1, 3);
  // conjugated-map entry point: [p o fbar] with fbar = i(E,.)F
  const HomMap fbar = HomMap::rank_one(t11, e, f);
  const auto interior = boundary_action_conjugated(fbar, BoundaryFunctional::interior(i_point));
  REQUIRE(interior.has_value());
  CHECK(*interior == BoundaryFunctional::ray(e, t11));

  // ray input: degenerate exactly when the pairing vanishes
  const auto degenerate = boundary_action_conjugated(fbar, BoundaryFunctional::ray(f, t11));
  CHECK(!degenerate.has_value());
  const auto fine = boundary_action_conjugated(fbar, BoundaryFunctional::ray(fol(1, 0), t11));
  REQUIRE(fine.has_value());
  CHECK(*fine == BoundaryFunctional::ray(e, t11));

  // class entry point composes with the conjugate: the image ray is F
  const auto via_class = boundary_action(ProjClass(fbar), BoundaryFunctional::interior(i_point));
  REQUIRE(via_class.has_value());
  CHECK(*via_class == BoundaryFunctional::ray(f, t11));

  CHECK(!boundary_action_conjugated(HomMap::zero(t11), BoundaryFunctional::interior(i_point)));
}

TEST_CASE("orbit boundary limit of twist and pA families") {
  std::vector<MappingClassWord> twists;
  MappingClassWord acc;
  for (int n = 0; n < 25; ++n) {
    acc = compose(acc, MappingClassWord::parse("A"));
    twists.push_back(acc);
  }
  const OrbitLimit tw = orbit_boundary_limit(i_point, twists, 25, make_rational(1, 1 << 16), t11);
  CHECK(tw.ray == fol(1, 0).scaled(ExactScalar(make_rational(1, 2))));  // l-normalized (1,0)
  CHECK(tw.residual.hi() < make_rational(1, 8));

  std::vector<MappingClassWord> pas;
  MappingClassWord acc2;
  for (int n = 0; n < 14; ++n) {
    acc2 = compose(acc2, MappingClassWord::parse("A B"));
    pas.push_back(acc2);
  }
  const OrbitLimit pa = orbit_boundary_limit(i_point, pas, 14, make_rational(1, 1 << 16), t11);
  // the orbit accumulates on the unstable foliation of A B
  const Classification cls = classify(MappingClassWord::parse("A B"), t11);
  const FoliationVec fu_dir =
      cls.unstable->scaled(ExactScalar(1) / total_length(*cls.unstable, t11));
  CHECK(pa.ray == fu_dir);
  CHECK(pa.residual.hi() < make_rational(1, 100));

  // base-point independence
  const OrbitLimit other = orbit_boundary_limit(pt(make_rational(5, 7), Rational(3)), pas, 14,
                                                make_rational(1, 1 << 16), t11);
  CHECK(other.ray == pa.ray);

  // a periodic family never leaves the orbit: error carries the report
  std::vector<MappingClassWord> per;
  MappingClassWord acc3;
  for (int n = 0; n < 8; ++n) {
    acc3 = compose(acc3, MappingClassWord::parse("A B^-1"));
    per.push_back(acc3);
  }
  CHECK_THROWS_AS(orbit_boundary_limit(i_point, per, 8, make_rational(1, 1 << 16), t11),
                  OrbitLimitError);
  try {
    orbit_boundary_limit(i_point, per, 8, make_rational(1, 1 << 16), t11);
  } catch (const OrbitLimitError& err) {
    CHECK(err.report.outcome == LimitReport::Outcome::ConstantSubsequence);
  }
}

TEST_CASE("orbit closure scan density") {
  const OrbitScan small = orbit_closure_scan(i_point, 1, t11);
  bool has_inf = false, has_zero = false;
  for (const ScanRay& r : small.rays) {
    if (r.direction == fol(1, 0).scaled(ExactScalar(make_rational(1, 2)))) has_inf = true;
    if (r.direction == fol(0, 1).scaled(ExactScalar(make_rational(1, 2)))) has_zero = true;
  }
  CHECK(has_inf);
  CHECK(has_zero);

  const OrbitScan scan = orbit_closure_scan(i_point, 3, t11);
  // every slope with |p|,|q| <= maxWordLength appears as a twist ray
  for (long p = -3; p <= 3; ++p) {
    for (long q = -3; q <= 3; ++q) {
      BigInt g;
      const BigInt bp(p), bq(q);
      mpz_gcd(g.get_mpz_t(), bp.get_mpz_t(), bq.get_mpz_t());
      if (g != 1) continue;
      const FoliationVec dir = CurveClass(bp, bq).foliation();
      const FoliationVec unit = dir.scaled(ExactScalar(1) / total_length(dir, t11));
      bool found = false;
      for (const ScanRay& r : scan.rays) found = found || r.direction == unit;
      CHECK(found);
    }
  }

  // rays are sorted, deduplicated and the list length is the ray count
  for (size_t i = 0; i + 1 < scan.rays.size(); ++i)
    CHECK(!(scan.rays[i].direction == scan.rays[i + 1].direction));

  // mesh improves with the bound and is certified at 12
  const OrbitScan wide = orbit_closure_scan(i_point, 12, t11);
  CHECK(wide.largest_gap_radians < scan.largest_gap_radians + 1e-12);
  // tan(pi/50) = 0.0629151... > 629/10000, so this certifies arcs < pi/50
  CHECK(wide.mesh_certified_below_tan(make_rational(629, 10000)));
}

TEST_CASE("systole by finite search") {
  const SystoleResult sys = systole(i_point);
  CHECK(*sys.value.squared == ExactScalar(1));

  // brute-force oracle over a slope box
  const TeichPoint tau = pt(make_rational(3, 7), make_rational(5, 9));
  const SystoleResult s2 = systole(tau);
  ExactScalar best(Rational(1000000));
  for (long p = -40; p <= 40; ++p) {
    for (long q = -40; q <= 40; ++q) {
      BigInt g;
      const BigInt bp(p), bq(q);
      mpz_gcd(g.get_mpz_t(), bp.get_mpz_t(), bq.get_mpz_t());
      if (g != 1) continue;
      const ExactScalar v = flat_length_squared(tau, CurveClass(bp, bq).foliation());
      if (v < best) best = v;
    }
  }
  CHECK(*s2.value.squared == best);
}

TEST_CASE("fundamental domain reduction") {
  auto [w, reduced] = reduce_to_fundamental_domain(pt(Rational(5), Rational(1)));
  CHECK(reduced == i_point);
  CHECK(w.matrix() == Mat2z(1, 5, 0, 1));  // translation by -5 under the conjugated action
  CHECK(moebius_act(w, pt(Rational(5), Rational(1))) == i_point);

  // idempotence on interior fundamental-domain points
  const TeichPoint inside = pt(make_rational(1, 5), make_rational(7, 5));
  auto [w2, r2] = reduce_to_fundamental_domain(inside);
  CHECK(w2.is_identity());
  CHECK(r2 == inside);

  // reduction really lands in the domain, with ties broken toward x >= 0
  std::mt19937_64 rng(29);
  const ExactScalar half(make_rational(1, 2));
  for (int trial = 0; trial < 150; ++trial) {
    MappingClassWord w3;
    for (int j = 0; j < 5; ++j)
      w3 = compose(w3, MappingClassWord::generator(rng() % 2 ? 'A' : 'B',
                                                   (rng() % 2 ? 1 : -1) * (1 + long(rng() % 4))));
    const TeichPoint start = moebius_act(w3, inside);
    auto [w4, r4] = reduce_to_fundamental_domain(start);
    CHECK(r4 == inside);  // interior points have a unique domain representative
    CHECK(moebius_act(w4, start) == r4);
  }
}

TEST_CASE("thick sequence limit mirrors the orbit limit") {
  std::vector<MappingClassWord> words;
  MappingClassWord acc;
  for (int n = 0; n < 20; ++n) {
    acc = compose(acc, MappingClassWord::parse("A"));
    words.push_back(acc);
  }
  std::vector<TeichPoint> points;
  for (const auto& w : words) points.push_back(moebius_act(w, i_point));

  const ThickLimit thick = thick_sequence_limit(points, make_rational(1, 1 << 16), t11);
  REQUIRE(thick.outcome == ThickLimit::Outcome::Boundary);
  CHECK(thick.cluster == i_point);
  REQUIRE(thick.functional.has_value());
  const OrbitLimit direct = orbit_boundary_limit(i_point, words, 20, make_rational(1, 1 << 16), t11);
  CHECK(thick.functional->direction() == direct.ray);

  // systole stays constant along the orbit (thickness is preserved exactly)
  for (const TeichPoint& p : points)
    CHECK(*systole(p).value.squared == *systole(i_point).value.squared);

  // constant sequences accumulate in the interior
  const std::vector<TeichPoint> constant(6, pt(make_rational(1, 5), Rational(2)));
  const ThickLimit inside = thick_sequence_limit(constant, make_rational(1, 4), t11);
  CHECK(inside.outcome == ThickLimit::Outcome::InteriorAccumulation);
  CHECK(inside.cluster == pt(make_rational(1, 5), Rational(2)));
}
