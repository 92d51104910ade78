#pragma once

#include <array>
#include <optional>
#include <vector>

#include "mcbound/word.hpp"

namespace mcb {

// The fixed filling family alpha1 = (1,0), alpha2 = (0,1), alpha3 = (1,1).
// Three curves are the minimal family making the coordinate embedding
// injective modulo sign on these surfaces.
const std::array<FoliationVec, 3>& filling_family();

// (i(alpha1, x), i(alpha2, x), i(alpha3, x))
std::array<ExactScalar, 3> embedding_coords(const FoliationVec& x, SurfaceKind s);

// l(x) = sum of the embedding coordinates; zero iff x = 0.
ExactScalar total_length(const FoliationVec& x, SurfaceKind s);

// Vertices of the polygon {l = 1}, one representative per +- pair.
// Every sup over the unit ball in this module is certified on (refinements
// of) the edges spanned by these.
std::vector<FoliationVec> unit_ball_vertices(SurfaceKind s);

// 2x2 matrix over the scalar tower; used for rescaled/limit matrices.
struct Mat2x {
  ExactScalar a, b, c, d;

  Mat2x() = default;
  Mat2x(ExactScalar a_, ExactScalar b_, ExactScalar c_, ExactScalar d_);
  static Mat2x from_integer(const Mat2z& m, const ExactScalar& scale);

  ExactScalar det() const { return a * d - b * c; }
  bool is_zero() const { return a.is_zero() && b.is_zero() && c.is_zero() && d.is_zero(); }
  Mat2x scaled(const ExactScalar& t) const;

  // canonical modulo sign: first nonzero entry positive
  void canonicalize();

  friend bool operator==(const Mat2x& l, const Mat2x& r) {
    return l.a == r.a && l.b == r.b && l.c == r.c && l.d == r.d;
  }

  std::string str() const;
};

// A homogeneous continuous self-map of MF: a scaled group element, a
// rank-one map x -> i(E, x) F, or zero. Rank-one maps are kept in canonical
// form: l(E) = 1 with the scale carried by F.
class HomMap {
 public:
  enum class Kind { Zero, Group, RankOne };

  static HomMap zero(SurfaceKind s);
  static HomMap group(SurfaceKind s, ExactScalar scale, MappingClassWord w);
  static HomMap rank_one(SurfaceKind s, const FoliationVec& e, const FoliationVec& f);

  Kind kind() const { return kind_; }
  SurfaceKind surface() const { return surface_; }
  bool is_zero() const { return kind_ == Kind::Zero; }

  const ExactScalar& scale() const;        // Group
  const MappingClassWord& word() const;    // Group
  const FoliationVec& e() const;           // RankOne
  const FoliationVec& f() const;           // RankOne

  FoliationVec eval(const FoliationVec& x) const;

  friend bool operator==(const HomMap& l, const HomMap& r);
  friend bool operator!=(const HomMap& l, const HomMap& r) { return !(l == r); }

  std::string str() const;

 private:
  HomMap(SurfaceKind s, Kind k) : surface_(s), kind_(k) {}
  SurfaceKind surface_;
  Kind kind_;
  ExactScalar scale_;
  MappingClassWord word_;
  FoliationVec e_, f_;
};

// L(f) = sup of l(f(.)) over the unit ball; exact.
ExactScalar sup_length(const HomMap& f);

// Adjoint with respect to the pairing: i(f(x), y) = i(x, conjugate(f)(y)).
HomMap conjugate(const HomMap& f);

// Composition on Cl(E~); degenerate rank-one compositions return Zero.
HomMap compose(const HomMap& f, const HomMap& g);

// Projective class with canonical normalized-lift representative (L = 1).
class ProjClass {
 public:
  explicit ProjClass(const HomMap& f);  // throws on the zero map

  const HomMap& rep() const { return rep_; }
  SurfaceKind surface() const { return rep_.surface(); }

  friend bool operator==(const ProjClass& l, const ProjClass& r) { return l.rep_ == r.rep_; }
  friend bool operator!=(const ProjClass& l, const ProjClass& r) { return !(l == r); }

  std::string str() const { return rep_.str(); }

 private:
  static HomMap normalize_rep(const HomMap& f);
  HomMap rep_;
};

ProjClass normalized_lift(const HomMap& f);

// A distance value sqrt(squared): the exact square is kept whenever the
// computation stays inside one quadratic field, and a directed-rounded
// enclosure of the square root is always available.
struct Distance {
  std::optional<ExactScalar> squared;
  Interval bounds;
  unsigned precision_bits = 128;

  static Distance exact_zero(unsigned bits = 128);
  static Distance from_squared(const ExactScalar& sq, unsigned bits);

  bool is_exact() const { return squared.has_value(); }
  bool is_zero() const { return squared ? squared->is_zero() : bounds.hi() == 0; }
  // certified strict comparisons against exact rational thresholds
  bool less_than(const Rational& threshold) const;
  bool greater_than(const Rational& threshold) const;
  double approx() const { return bounds.mid().get_d(); }
  std::string str(unsigned digits = 40) const;
};

// certified d(a,c) <= d(a,b) + d(b,c); exact route via squares when the
// fields allow, interval route otherwise
bool triangle_holds(const Distance& ac, const Distance& ab, const Distance& bc);

// smaller-of for sup/min bookkeeping (exact when both sides are)
bool distance_less(const Distance& l, const Distance& r);

// The metric d-hat: sup over the unit ball of the Euclidean distance of the
// normalized lifts through the coordinate embedding. Exact (squared) when
// both representatives live in one quadratic field; interval-certified at
// `bits` otherwise.
Distance distance(const ProjClass& a, const ProjClass& b, unsigned bits = 128);

// Matrix form of the representative (rank-one maps as F w^T with
// w = multiplier * rot(E)); used for record emission.
Mat2x normalized_matrix(const ProjClass& c);

// Factor a nonzero determinant-zero matrix as x -> +- i(E, x) F.
std::pair<FoliationVec, FoliationVec> rank_one_factor(const Mat2x& m, SurfaceKind s);

struct LimitRecord {
  size_t index = 0;  // position in the input sequence
  MappingClassWord word;
  ExactScalar t;     // rescaling 1 / L(f_index)
  Mat2x normalized;  // t * matrix, sign-canonical
  std::optional<Distance> gap;  // d-hat to the returned limit, when one exists
};

struct LimitReport {
  enum class Outcome { ConstantSubsequence, BoundaryLimit, NoConvergenceWithinBudget };
  Outcome outcome = Outcome::NoConvergenceWithinBudget;

  std::optional<MappingClassWord> constant;  // ConstantSubsequence
  std::optional<ProjClass> limit;            // BoundaryLimit (rank-one representative)
  std::optional<FoliationVec> factor_e, factor_f;

  std::vector<size_t> witness;          // indices, increasing
  std::vector<ExactScalar> witness_t;   // strictly decreasing for BoundaryLimit
  std::optional<Distance> final_gap;    // stability of the limit estimate
  std::optional<Distance> best_gap;     // best certificate seen when not convergent
  std::vector<LimitRecord> records;
};

// Rescale each word's map by t_n = 1/L, then certify one of: a constant
// subsequence, or a rank-one boundary limit. Detection is deterministic:
//   1. a matrix value covering half the sequence (constant subsequence);
//   2. a constant left/right quotient on a tail (power family) whose
//      classification yields the limit in closed form;
//   3. a rank-one candidate snapped/projected from the matrix with the
//      smallest t, accepted iff d-hat(anchor class, candidate) < gap.
// `rescale` multiplies every t_n; outcomes are invariant under it.
LimitReport projective_limit(const std::vector<MappingClassWord>& words, size_t budget,
                             const Rational& gap, SurfaceKind s, unsigned bits = 128,
                             const ExactScalar& rescale = ExactScalar(1));

// [RankOne{c, k c}] = lim [T_c^{kn}].
ProjClass twist_limit(const CurveClass& c, long k, SurfaceKind s);

// [RankOne{Fs, Fu}] (forward) or [RankOne{Fu, Fs}] (backward) of a pA word.
ProjClass pa_limit(const MappingClassWord& w, bool forward, SurfaceKind s);

// One continued-fraction approximation step toward [i(F,.) G]: convergent
// curves c_n -> [F], d_n -> [G], a word h with h(c_n) = d_n, and the
// approximant [RankOne{c_n, d_n}] (= lim_m of h T_c^m).
struct SynthesisStep {
  CurveClass c, d;
  MappingClassWord h;
  ProjClass approximant;
  Distance gap;
};

std::vector<SynthesisStep> synthesize_boundary_point(const FoliationVec& f_target,
                                                     const FoliationVec& g_target,
                                                     const Rational& tol, SurfaceKind s,
                                                     size_t max_steps = 48, unsigned bits = 128);

// Exact minimum of d-hat over distinct elements of the letter ball.
Distance min_pairwise_distance(int max_word_length, SurfaceKind s, unsigned bits = 128);

}  // namespace mcb
