#include "mcbound/propsuite.hpp"

#include <functional>
#include <random>

namespace mcb {

namespace {

struct Gen {
  std::mt19937_64 rng;
  explicit Gen(std::uint64_t seed) : rng(seed) {}

  long integer(long lo, long hi) {
    return std::uniform_int_distribution<long>(lo, hi)(rng);
  }

  Rational rational(long mag = 40) {
    long num = integer(-mag, mag);
    long den = integer(1, mag);
    return make_rational(num, den);
  }

  Rational positive_rational(long mag = 40) {
    long num = integer(1, mag);
    long den = integer(1, mag);
    return make_rational(num, den);
  }

  FoliationVec foliation(long mag = 40) {
    while (true) {
      Rational p = rational(mag), q = rational(mag);
      if (sgn(p) != 0 || sgn(q) != 0) return FoliationVec(ExactScalar(p), ExactScalar(q));
    }
  }

  CurveClass curve(long mag = 9) {
    while (true) {
      BigInt p(integer(-mag, mag)), q(integer(-mag, mag));
      if (p == 0 && q == 0) continue;
      BigInt g;
      mpz_gcd(g.get_mpz_t(), p.get_mpz_t(), q.get_mpz_t());
      return CurveClass(p / g, q / g);
    }
  }

  MappingClassWord word(size_t max_len = 6, long max_exp = 3) {
    MappingClassWord w;
    const size_t len = static_cast<size_t>(integer(1, static_cast<long>(max_len)));
    for (size_t i = 0; i < len; ++i) {
      const char gen = integer(0, 1) ? 'A' : 'B';
      long exp = integer(1, max_exp);
      if (integer(0, 1)) exp = -exp;
      w = compose(w, MappingClassWord::generator(gen, exp));
    }
    return w;
  }

  HomMap hom_map(SurfaceKind s, bool allow_zero = true) {
    const long pick = integer(0, allow_zero ? 5 : 4);
    if (allow_zero && pick == 5) return HomMap::zero(s);
    if (pick <= 2) return HomMap::group(s, ExactScalar(positive_rational(9)), word());
    return HomMap::rank_one(s, foliation(9), foliation(9));
  }
};

using Check = std::function<std::string(Gen&, size_t)>;  // empty string = pass

SuiteResult run_suite(const std::string& name, std::uint64_t seed, size_t iterations,
                      const Check& check) {
  SuiteResult res;
  res.name = name;
  Gen gen(seed ^ std::hash<std::string>{}(name));
  for (size_t i = 0; i < iterations; ++i) {
    ++res.checked;
    std::string cex = check(gen, i);
    if (!cex.empty()) {
      ++res.failed;
      if (res.counterexample.empty()) res.counterexample = cex;
    }
  }
  return res;
}

std::string check_pairing_adjoint(Gen& g, size_t, SurfaceKind s) {
  const MappingClassWord w = g.word();
  const FoliationVec x = g.foliation(), y = g.foliation();
  if (intersection(act(w, x), act(w, y), s) != intersection(x, y, s))
    return "w=" + w.str() + " x=" + x.str() + " y=" + y.str();
  return {};
}

std::string check_homogeneity(Gen& g, size_t, SurfaceKind) {
  const MappingClassWord w = g.word();
  const FoliationVec x = g.foliation();
  const ExactScalar t(g.positive_rational());
  if (act(w, x.scaled(t)) != act(w, x).scaled(t)) return "w=" + w.str() + " x=" + x.str();
  return {};
}

std::string check_classify_invert(Gen& g, size_t, SurfaceKind s) {
  const MappingClassWord w = g.word();
  const Classification c = classify(w, s), ci = classify(invert(w), s);
  if (c.kind != ci.kind) return "kind mismatch w=" + w.str();
  if (c.kind != Classification::Kind::PseudoAnosov) return {};
  if (c.lambda != ci.lambda) return "lambda mismatch w=" + w.str();
  // the i(Fs,Fu)=1 normalization leaves one scale free, so the swap is a
  // statement about directions; compare l-normalized representatives
  auto dir = [s](const FoliationVec& v) { return v.scaled(ExactScalar(1) / total_length(v, s)); };
  if (!(dir(*c.unstable) == dir(*ci.stable) && dir(*c.stable) == dir(*ci.unstable)))
    return "eigen swap mismatch w=" + w.str();
  return {};
}

std::string check_eigen_certificate(Gen& g, size_t, SurfaceKind s) {
  const MappingClassWord w = g.word();
  const Classification c = classify(w, s);
  if (c.kind != Classification::Kind::PseudoAnosov) return {};
  if (act(w, *c.unstable) != c.unstable->scaled(c.lambda))
    return "Mv != lambda v for w=" + w.str();
  if (intersection(*c.stable, *c.unstable, s) != ExactScalar(1))
    return "i(Fs,Fu) != 1 for w=" + w.str();
  return {};
}

std::string check_canonical_idempotent(Gen& g, size_t, SurfaceKind) {
  const FoliationVec x = g.foliation();
  const FoliationVec x2(x.p(), x.q());
  if (x2 != x) return "foliation recanonicalization moved " + x.str();
  const MappingClassWord w = g.word();
  const Mat2z m = w.matrix();
  if (Mat2z(m.a, m.b, m.c, m.d) != m) return "matrix recanonicalization moved " + m.str();
  return {};
}

std::string check_metric_axioms(Gen& g, size_t, SurfaceKind s) {
  const ProjClass a(g.hom_map(s, false)), b(g.hom_map(s, false)), c(g.hom_map(s, false));
  const Distance ab = distance(a, b), ba = distance(b, a);
  if (ab.squared && ba.squared && *ab.squared != *ba.squared) return "asymmetric " + a.str();
  if ((a == b) != ab.is_zero()) return "definiteness " + a.str() + " vs " + b.str();
  if (!triangle_holds(distance(a, c), ab, distance(b, c)))
    return "triangle " + a.str() + " | " + b.str() + " | " + c.str();
  return {};
}

std::string check_properness(Gen& g, size_t, SurfaceKind s) {
  const FoliationVec x = g.foliation();
  const ExactScalar l = total_length(x, s);
  for (const ExactScalar& c : embedding_coords(x, s))
    if (l < c) return "l < coord at " + x.str();
  return {};
}

std::string check_rescaling_invariance(Gen& g, size_t, SurfaceKind s) {
  const MappingClassWord base = g.word(4, 2);
  if (base.is_identity() || classify(base, s).kind == Classification::Kind::Periodic) return {};
  std::vector<MappingClassWord> words;
  MappingClassWord acc;
  for (int i = 0; i < 8; ++i) {
    acc = compose(acc, base);
    words.push_back(acc);
  }
  const Rational gap = make_rational(1, 1 << 20);
  const LimitReport plain = projective_limit(words, words.size(), gap, s);
  const LimitReport scaled =
      projective_limit(words, words.size(), gap, s, 128, ExactScalar(g.positive_rational(7)));
  if (plain.outcome != scaled.outcome) return "outcome changed under rescale, base=" + base.str();
  if (plain.outcome == LimitReport::Outcome::BoundaryLimit && !(*plain.limit == *scaled.limit))
    return "limit changed under rescale, base=" + base.str();
  return {};
}

std::string check_witness_t_decreases(Gen& g, size_t, SurfaceKind s) {
  const MappingClassWord base = g.word(4, 2);
  if (base.is_identity() || classify(base, s).kind == Classification::Kind::Periodic) return {};
  std::vector<MappingClassWord> words;
  MappingClassWord acc;
  for (int i = 0; i < 10; ++i) {
    acc = compose(acc, base);
    words.push_back(acc);
  }
  const LimitReport rep = projective_limit(words, words.size(), make_rational(1, 1 << 20), s);
  if (rep.outcome != LimitReport::Outcome::BoundaryLimit) return "no boundary limit " + base.str();
  for (size_t i = 1; i < rep.witness_t.size(); ++i)
    if (!(rep.witness_t[i] < rep.witness_t[i - 1])) return "t not decreasing " + base.str();
  return {};
}

std::string check_twist_residual(Gen& g, size_t, SurfaceKind s) {
  const CurveClass c = g.curve();
  const long n = g.integer(1, 60);
  const FoliationVec x = g.foliation();
  const FoliationVec cf = c.foliation();
  // act(T_c^n, x) = x + n det(c, x) c, exactly (as vectors modulo sign)
  const ExactScalar amount = ExactScalar(Rational(n)) * slope_det(cf, x);
  const FoliationVec expect(x.p() + amount * cf.p(), x.q() + amount * cf.q());
  const Mat2z tw = dehn_twist_matrix(c, BigInt(n));
  if (act(tw, x) != expect) return "c=" + c.slope_str() + " n=" + std::to_string(n);
  // l-distance between act/n and i(c,x)(+-c) equals l(x)/n; the canonical
  // sign of the scaled image is free, so accept either sign of the twist part
  const ExactScalar inv_n(make_rational(1, n));
  const FoliationVec scaled = act(tw, x).scaled(inv_n);
  const ExactScalar tp = amount * inv_n * cf.p(), tq = amount * inv_n * cf.q();
  const ExactScalar want = total_length(x, s) * inv_n;
  const ExactScalar got_minus = total_length(FoliationVec(scaled.p() - tp, scaled.q() - tq), s);
  const ExactScalar got_plus = total_length(FoliationVec(scaled.p() + tp, scaled.q() + tq), s);
  if (got_minus != want && got_plus != want)
    return "l-residual c=" + c.slope_str() + " n=" + std::to_string(n);
  return {};
}

std::string check_adjoint(Gen& g, size_t, SurfaceKind s) {
  const HomMap f = g.hom_map(s);
  const FoliationVec x = g.foliation(), y = g.foliation();
  if (intersection(f.eval(x), y, s) != intersection(x, conjugate(f).eval(y), s))
    return "f=" + f.str() + " x=" + x.str() + " y=" + y.str();
  if (!(conjugate(conjugate(f)) == f)) return "involution broke on " + f.str();
  return {};
}

std::string check_anti_homomorphism(Gen& g, size_t, SurfaceKind s) {
  const HomMap f = g.hom_map(s), h = g.hom_map(s);
  if (!(conjugate(compose(f, h)) == compose(conjugate(h), conjugate(f))))
    return "f=" + f.str() + " g=" + h.str();
  return {};
}

std::string check_degenerate_composition(Gen& g, size_t, SurfaceKind s) {
  const HomMap f = g.hom_map(s), h = g.hom_map(s);
  const HomMap fh = compose(f, h);
  const bool zero_factor = f.is_zero() || h.is_zero();
  const bool both_rank_one =
      f.kind() == HomMap::Kind::RankOne && h.kind() == HomMap::Kind::RankOne;
  const bool degenerate =
      zero_factor || (both_rank_one && intersection(f.e(), h.f(), s).is_zero());
  if (fh.is_zero() != degenerate) return "f=" + f.str() + " g=" + h.str();
  return {};
}

std::string check_moebius_convention(Gen& g, size_t, SurfaceKind) {
  const MappingClassWord w = g.word();
  const TeichPoint tau(ExactScalar(g.rational(12)), ExactScalar(g.positive_rational(12)));
  const FoliationVec v = g.foliation();
  if (flat_length_squared(moebius_act(w, tau), v) != flat_length_squared(tau, act(invert(w), v)))
    return "w=" + w.str() + " tau=" + tau.str() + " v=" + v.str();
  const MappingClassWord w2 = g.word(3, 2);
  if (!(moebius_act(compose(w, w2), tau) == moebius_act(w, moebius_act(w2, tau))))
    return "action axiom w=" + w.str() + " w2=" + w2.str();
  return {};
}

std::string check_systole_invariance(Gen& g, size_t, SurfaceKind) {
  const MappingClassWord w = g.word(4, 3);
  const TeichPoint tau(ExactScalar(g.rational(8)), ExactScalar(g.positive_rational(8)));
  const auto sys = systole(tau);
  const auto moved = systole(moebius_act(w, tau));
  if (*sys.value.squared != *moved.value.squared)
    return "w=" + w.str() + " tau=" + tau.str();
  return {};
}

std::string check_psi_extension(Gen& g, size_t, SurfaceKind s) {
  const MappingClassWord w = g.word();
  const TeichPoint tau(ExactScalar(g.rational(10)), ExactScalar(g.positive_rational(10)));
  const ProjClass cls(HomMap::group(s, ExactScalar(1), w));
  const auto moved = boundary_action(cls, BoundaryFunctional::interior(tau));
  if (!moved || moved->kind() != BoundaryFunctional::Kind::Interior)
    return "degenerate on group element " + w.str();
  if (!(moved->point() == moebius_act(w, tau))) return "psi != moebius for " + w.str();
  return {};
}

std::string check_psi_degeneracy(Gen& g, size_t, SurfaceKind s) {
  // conjugated rank-one map against a ray: degenerate iff the pairing vanishes
  const FoliationVec e = g.foliation(9), f = g.foliation(9);
  const HomMap fbar = HomMap::rank_one(s, e, f);
  const FoliationVec dir = g.integer(0, 3) == 0 ? f : g.foliation(9);
  const auto out = boundary_action_conjugated(fbar, BoundaryFunctional::ray(dir, s));
  const bool expect_degenerate = intersection(dir, fbar.f(), s).is_zero();
  if (out.has_value() != !expect_degenerate)
    return "e=" + e.str() + " f=" + f.str() + " ray=" + dir.str();
  if (out && !(out->direction() == BoundaryFunctional::ray(fbar.e(), s).direction()))
    return "wrong ray for e=" + e.str();
  return {};
}

std::string check_ray_base_point_invariance(Gen& g, size_t, SurfaceKind s) {
  const CurveClass c = g.curve(5);
  std::vector<MappingClassWord> words;
  MappingClassWord tw = dehn_twist(c, 1), acc;
  for (int i = 0; i < 6; ++i) {
    acc = compose(acc, tw);
    words.push_back(acc);
  }
  const TeichPoint x0(ExactScalar(g.rational(6)), ExactScalar(g.positive_rational(6)));
  const TeichPoint x1(ExactScalar(g.rational(6)), ExactScalar(g.positive_rational(6)));
  const Rational gap = make_rational(1, 1 << 16);
  const OrbitLimit a = orbit_boundary_limit(x0, words, words.size(), gap, s);
  const OrbitLimit b = orbit_boundary_limit(x1, words, words.size(), gap, s);
  if (!(a.ray == b.ray)) return "ray moved with base point, c=" + c.slope_str();
  return {};
}

std::string check_word_round_trip(Gen& g, size_t, SurfaceKind) {
  const MappingClassWord w = g.word(8, 5);
  if (MappingClassWord::parse(w.str()) != w) return "round trip broke " + w.str();
  if (MappingClassWord::from_matrix(w.matrix()) != w) return "refactor broke " + w.str();
  return {};
}

}  // namespace

std::vector<SuiteResult> run_property_suites(std::uint64_t seed, size_t iterations, SurfaceKind s,
                                             const std::string& filter) {
  struct Entry {
    const char* name;
    size_t scale_down;  // heavy suites run iterations / scale_down (min 2)
    std::string (*fn)(Gen&, size_t, SurfaceKind);
  };
  const Entry entries[] = {
      {"pairing-adjoint", 1, check_pairing_adjoint},
      {"homogeneity", 1, check_homogeneity},
      {"classify-invert", 10, check_classify_invert},
      {"eigen-certificate", 10, check_eigen_certificate},
      {"canonical-idempotence", 1, check_canonical_idempotent},
      {"metric-axioms", 100, check_metric_axioms},
      {"properness", 1, check_properness},
      {"rescaling-invariance", 2000, check_rescaling_invariance},
      {"witness-t-decreases", 2000, check_witness_t_decreases},
      {"twist-residual", 10, check_twist_residual},
      {"adjoint", 1, check_adjoint},
      {"anti-homomorphism", 10, check_anti_homomorphism},
      {"degenerate-composition", 10, check_degenerate_composition},
      {"moebius-convention", 10, check_moebius_convention},
      {"systole-invariance", 200, check_systole_invariance},
      {"psi-extension", 10, check_psi_extension},
      {"psi-degeneracy", 10, check_psi_degeneracy},
      {"ray-base-point", 2000, check_ray_base_point_invariance},
      {"word-round-trip", 10, check_word_round_trip},
  };

  std::vector<SuiteResult> out;
  for (const Entry& e : entries) {
    if (!filter.empty() && std::string(e.name).find(filter) == std::string::npos) continue;
    const size_t iters = std::max<size_t>(2, iterations / e.scale_down);
    out.push_back(run_suite(e.name, seed, iters,
                            [&e, s](Gen& g, size_t i) { return e.fn(g, i, s); }));
  }
  return out;
}

}  // namespace mcb
