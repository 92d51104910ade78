#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mcbound/surface.hpp"

namespace mcb {

// Integer 2x2 matrix of determinant 1, stored modulo +-I in canonical sign
// form: the first nonzero entry in row-major order is positive.
struct Mat2z {
  BigInt a{1}, b{0}, c{0}, d{1};

  static Mat2z identity() { return {}; }
  Mat2z() = default;
  Mat2z(BigInt a_, BigInt b_, BigInt c_, BigInt d_);

  BigInt det() const { return a * d - b * c; }
  BigInt trace() const { return a + d; }
  bool is_identity() const { return a == 1 && b == 0 && c == 0 && d == 1; }

  Mat2z inverse() const { return Mat2z(d, -b, -c, a); }

  friend Mat2z operator*(const Mat2z& l, const Mat2z& r) {
    return Mat2z(l.a * r.a + l.b * r.c, l.a * r.b + l.b * r.d,
                 l.c * r.a + l.d * r.c, l.c * r.b + l.d * r.d);
  }

  friend bool operator==(const Mat2z& l, const Mat2z& r) {
    return l.a == r.a && l.b == r.b && l.c == r.c && l.d == r.d;
  }
  friend bool operator!=(const Mat2z& l, const Mat2z& r) { return !(l == r); }
  friend bool operator<(const Mat2z& l, const Mat2z& r);  // row-major order

  std::string str() const;  // [[a,b],[c,d]]

 private:
  void canonicalize();
};

struct Letter {
  char gen;  // 'A' or 'B'
  long exp;  // nonzero
};

// A word in the twist generators A = [[1,1],[0,1]] and B = [[1,0],[1,1]],
// together with its realized matrix. Equality is equality of the realized
// matrices modulo +-I (the letters are presentation only).
class MappingClassWord {
 public:
  MappingClassWord() = default;  // identity

  static MappingClassWord generator(char gen, long exp = 1);
  static MappingClassWord parse(const std::string& text);   // "A^3 B^-2 A"
  static MappingClassWord from_matrix(const Mat2z& m);      // Euclidean factorization

  const Mat2z& matrix() const { return matrix_; }
  const std::vector<Letter>& letters() const { return letters_; }
  bool is_identity() const { return matrix_.is_identity(); }
  size_t letter_length() const;  // sum of |exp|

  std::string str() const;  // canonical word syntax, "" for the identity

  friend bool operator==(const MappingClassWord& l, const MappingClassWord& r) {
    return l.matrix_ == r.matrix_;
  }
  friend bool operator!=(const MappingClassWord& l, const MappingClassWord& r) { return !(l == r); }

  friend MappingClassWord compose(const MappingClassWord& l, const MappingClassWord& r);
  friend MappingClassWord invert(const MappingClassWord& w);

 private:
  std::vector<Letter> letters_;
  Mat2z matrix_;

  void push_letter(char gen, long exp);
};

MappingClassWord compose(const MappingClassWord& l, const MappingClassWord& r);
MappingClassWord invert(const MappingClassWord& w);
MappingClassWord power(const MappingClassWord& w, long n);

// Positive twist convention: T_c(x) = x + det(c, x) * c. T_c fixes c and
// preserves i(c, .).
MappingClassWord dehn_twist(const CurveClass& c, long n);
Mat2z dehn_twist_matrix(const CurveClass& c, const BigInt& n);

// Push-forward action on slope coordinates (re-canonicalized modulo sign).
FoliationVec act(const MappingClassWord& w, const FoliationVec& x);
FoliationVec act(const Mat2z& m, const FoliationVec& x);

// A word h with act(h, from) = to; both slopes primitive.
MappingClassWord mapping_between(const CurveClass& from, const CurveClass& to);

struct Classification {
  enum class Kind { Periodic, Reducible, PseudoAnosov };
  Kind kind;

  // Periodic: order of the canonical matrix representative in SL(2,Z)
  // (equals the mapping-class order on the once-punctured torus).
  int order = 0;

  // Reducible: T_curve^power modulo +-I.
  std::optional<CurveClass> curve;
  BigInt power;

  // Pseudo-Anosov: dilatation and invariant foliations, i(stable, unstable) = 1.
  ExactScalar lambda;
  std::optional<FoliationVec> unstable, stable;
};

// Nielsen-Thurston type from |trace|: <2 periodic, =2 reducible, >2 pA.
Classification classify(const MappingClassWord& w, SurfaceKind s);

// All distinct group elements expressible with at most `letter_radius`
// generator letters (counting exponent multiplicity), identity included.
// Deterministic order (BFS layer, then matrix order).
std::vector<MappingClassWord> element_ball(int letter_radius);

}  // namespace mcb
