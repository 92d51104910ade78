#include "mcbound/word.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <sstream>

namespace mcb {

Mat2z::Mat2z(BigInt a_, BigInt b_, BigInt c_, BigInt d_)
    : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)), d(std::move(d_)) {
  if (det() != 1) throw std::domain_error("Mat2z: determinant must be 1, got " + det().get_str());
  canonicalize();
}

void Mat2z::canonicalize() {
  const BigInt* entries[4] = {&a, &b, &c, &d};
  for (const BigInt* e : entries) {
    const int s = sgn(*e);
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

bool operator<(const Mat2z& l, const Mat2z& r) {
  int c0 = cmp(l.a, r.a);
  if (c0 != 0) return c0 < 0;
  c0 = cmp(l.b, r.b);
  if (c0 != 0) return c0 < 0;
  c0 = cmp(l.c, r.c);
  if (c0 != 0) return c0 < 0;
  return cmp(l.d, r.d) < 0;
}

std::string Mat2z::str() const {
  return "[[" + a.get_str() + "," + b.get_str() + "],[" + c.get_str() + "," + d.get_str() + "]]";
}

namespace {

Mat2z generator_matrix(char gen, long exp) {
  const BigInt e(exp);
  if (gen == 'A') return Mat2z(1, e, 0, 1);
  if (gen == 'B') return Mat2z(1, 0, e, 1);
  throw std::domain_error(std::string("unknown generator '") + gen + "'");
}

}  // namespace

void MappingClassWord::push_letter(char gen, long exp) {
  if (exp == 0) return;
  if (!letters_.empty() && letters_.back().gen == gen) {
    letters_.back().exp += exp;
    if (letters_.back().exp == 0) letters_.pop_back();
    return;
  }
  letters_.push_back({gen, exp});
}

MappingClassWord MappingClassWord::generator(char gen, long exp) {
  MappingClassWord w;
  if (exp == 0) return w;
  w.letters_ = {{gen, exp}};
  w.matrix_ = generator_matrix(gen, exp);
  return w;
}

MappingClassWord MappingClassWord::parse(const std::string& text) {
  MappingClassWord w;
  std::istringstream in(text);
  std::string tok;
  size_t pos = 0;
  while (in >> tok) {
    pos = text.find(tok, pos);
    if (tok[0] != 'A' && tok[0] != 'B')
      throw std::domain_error("word parse error at position " + std::to_string(pos) + ": token '" + tok + "'");
    long exp = 1;
    if (tok.size() > 1) {
      if (tok[1] != '^')
        throw std::domain_error("word parse error at position " + std::to_string(pos) + ": token '" + tok + "'");
      try {
        size_t used = 0;
        exp = std::stol(tok.substr(2), &used);
        if (used != tok.size() - 2) throw std::invalid_argument("");
      } catch (const std::exception&) {
        throw std::domain_error("word parse error at position " + std::to_string(pos) + ": bad exponent in '" + tok + "'");
      }
    }
    w = compose(w, generator(tok[0], exp));
    pos += tok.size();
  }
  return w;
}

size_t MappingClassWord::letter_length() const {
  size_t n = 0;
  for (const Letter& l : letters_) n += static_cast<size_t>(l.exp < 0 ? -l.exp : l.exp);
  return n;
}

std::string MappingClassWord::str() const {
  std::string out;
  for (const Letter& l : letters_) {
    if (!out.empty()) out += ' ';
    out += l.gen;
    if (l.exp != 1) out += "^" + std::to_string(l.exp);
  }
  return out;
}

MappingClassWord compose(const MappingClassWord& l, const MappingClassWord& r) {
  MappingClassWord w;
  w.letters_ = l.letters_;
  for (const Letter& x : r.letters_) w.push_letter(x.gen, x.exp);
  w.matrix_ = l.matrix_ * r.matrix_;
  return w;
}

MappingClassWord invert(const MappingClassWord& w) {
  MappingClassWord out;
  for (auto it = w.letters_.rbegin(); it != w.letters_.rend(); ++it) out.push_letter(it->gen, -it->exp);
  out.matrix_ = w.matrix_.inverse();
  return out;
}

MappingClassWord power(const MappingClassWord& w, long n) {
  MappingClassWord base = n < 0 ? invert(w) : w;
  long k = n < 0 ? -n : n;
  MappingClassWord out;
  while (k-- > 0) out = compose(out, base);
  return out;
}

Mat2z dehn_twist_matrix(const CurveClass& c, const BigInt& n) {
  const BigInt &p = c.p(), &q = c.q();
  return Mat2z(1 - n * p * q, n * p * p, -n * q * q, 1 + n * p * q);
}

MappingClassWord dehn_twist(const CurveClass& c, long n) {
  if (n == 0) throw std::domain_error("dehn_twist: exponent must be nonzero");
  return MappingClassWord::from_matrix(dehn_twist_matrix(c, BigInt(n)));
}

MappingClassWord MappingClassWord::from_matrix(const Mat2z& m) {
  // Euclidean descent on the first column by left multiplications with
  // A^-k (a -= k c) and B^-k (c -= k a), nearest-integer quotients.
  auto nearest_quot = [](const BigInt& num, const BigInt& den) {
    BigInt q, r;
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    // fdiv remainder has den's sign, so the fractional part is r/den in [0,1)
    if (2 * abs(r) > abs(den)) q += 1;
    return q;
  };
  auto to_long = [](const BigInt& k) {
    if (!k.fits_slong_p()) throw std::domain_error("from_matrix: exponent overflow");
    return static_cast<long>(k.get_si());
  };

  std::vector<Letter> letters;
  BigInt a = m.a, b = m.b, c = m.c, d = m.d;
  while (c != 0 && a != 0) {
    if (abs(a) > abs(c)) {
      const BigInt k = nearest_quot(a, c);
      letters.push_back({'A', to_long(k)});
      a -= k * c;
      b -= k * d;
    } else {
      const BigInt k = nearest_quot(c, a);
      letters.push_back({'B', to_long(k)});
      c -= k * a;
      d -= k * b;
    }
  }

  MappingClassWord tail;
  if (c == 0) {
    // +-[[1, b'],[0, 1]]
    const BigInt bb = sgn(a) < 0 ? BigInt(-b) : b;
    if (!bb.fits_slong_p()) throw std::domain_error("from_matrix: exponent overflow");
    tail = generator('A', static_cast<long>(bb.get_si()));
  } else {
    // a == 0: +-[[0,-1],[1, d']] = S A^d', with S = A^-1 B A^-1
    const BigInt dd = sgn(c) > 0 ? d : BigInt(-d);
    if (!dd.fits_slong_p()) throw std::domain_error("from_matrix: exponent overflow");
    MappingClassWord s = compose(compose(generator('A', -1), generator('B', 1)), generator('A', -1));
    tail = compose(s, generator('A', static_cast<long>(dd.get_si())));
  }

  MappingClassWord out;
  for (const Letter& l : letters) out = compose(out, generator(l.gen, l.exp));
  out = compose(out, tail);
  assert(out.matrix() == m);
  return out;
}

FoliationVec act(const Mat2z& m, const FoliationVec& x) {
  return FoliationVec(ExactScalar(Rational(m.a)) * x.p() + ExactScalar(Rational(m.b)) * x.q(),
                      ExactScalar(Rational(m.c)) * x.p() + ExactScalar(Rational(m.d)) * x.q());
}

FoliationVec act(const MappingClassWord& w, const FoliationVec& x) { return act(w.matrix(), x); }

MappingClassWord mapping_between(const CurveClass& from, const CurveClass& to) {
  // complete a primitive slope to a determinant-1 basis via extended gcd
  auto basis = [](const CurveClass& c) {
    BigInt g, x, y;
    mpz_gcdext(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t(), c.p().get_mpz_t(), c.q().get_mpz_t());
    assert(g == 1);
    // det((p,q),(-y,x)) = p x + q y = 1
    return Mat2z(c.p(), -y, c.q(), x);
  };
  const Mat2z m = basis(to) * basis(from).inverse();
  MappingClassWord w = MappingClassWord::from_matrix(m);
  assert(act(w, CurveClass(from.p(), from.q()).foliation()) == CurveClass(to.p(), to.q()).foliation());
  return w;
}

Classification classify(const MappingClassWord& w, SurfaceKind s) {
  const Mat2z& m = w.matrix();
  const BigInt tr = m.trace();
  Classification out;

  if (abs(tr) < 2) {
    out.kind = Classification::Kind::Periodic;
    // literal SL(2,Z) powering of the canonical representative (no sign
    // quotient here: it is what distinguishes order 6 from order 3)
    BigInt pa = m.a, pb = m.b, pc = m.c, pd = m.d;
    int order = 1;
    while (!(pa == 1 && pb == 0 && pc == 0 && pd == 1)) {
      const BigInt na = pa * m.a + pb * m.c, nb = pa * m.b + pb * m.d;
      const BigInt nc = pc * m.a + pd * m.c, nd = pc * m.b + pd * m.d;
      pa = na; pb = nb; pc = nc; pd = nd;
      ++order;
      if (order > 12) throw std::logic_error("classify: runaway periodic order");
    }
    out.order = order;
    return out;
  }

  if (abs(tr) == 2) {
    if (m.is_identity()) {
      out.kind = Classification::Kind::Periodic;
      out.order = 1;
      return out;
    }
    out.kind = Classification::Kind::Reducible;
    // work with the trace-+2 representative: N = I + n * twist form
    const bool flip = tr < 0;
    const BigInt na = flip ? -m.a : m.a, nb = flip ? -m.b : m.b;
    const BigInt nc = flip ? -m.c : m.c, nd = flip ? -m.d : m.d;
    const BigInt p11 = na - 1, p12 = nb, p21 = nc, p22 = nd - 1;
    BigInt g = 0;
    for (const BigInt& e : {p11, p12, p21, p22}) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), e.get_mpz_t());
    BigInt n = p12 != 0 ? BigInt(sgn(p12) * g) : BigInt(-sgn(p21) * g);
    BigInt p, q;
    mpz_sqrt(p.get_mpz_t(), BigInt(abs(p12) / g).get_mpz_t());
    mpz_sqrt(q.get_mpz_t(), BigInt(abs(p21) / g).get_mpz_t());
    if (p != 0 && q != 0 && sgn(-p11 * n) < 0) q = -q;  // p q = -p11/n, p kept >= 0
    CurveClass curve(p, q);
    if (dehn_twist_matrix(curve, n) != m) throw std::logic_error("classify: reducible factorization failed");
    out.curve = curve;
    out.power = n;
    return out;
  }

  out.kind = Classification::Kind::PseudoAnosov;
  const BigInt t = abs(tr);
  out.lambda = ExactScalar(make_rational(t, 2), make_rational(1, 2), t * t - 4);
  // eigenvectors of the trace-positive representative (b != 0 whenever |tr| > 2)
  const bool flip = tr < 0;
  const Rational a(flip ? BigInt(-m.a) : m.a), b(flip ? BigInt(-m.b) : m.b);
  const ExactScalar lam = out.lambda;
  const ExactScalar lam_conj = ExactScalar(make_rational(t, 2), make_rational(-1, 2), t * t - 4);
  FoliationVec fu(ExactScalar(b), lam - ExactScalar(a));
  FoliationVec fs(ExactScalar(b), lam_conj - ExactScalar(a));
  const ExactScalar pairing = intersection(fs, fu, s);
  fs = fs.scaled(ExactScalar(1) / pairing);
  out.unstable = fu;
  out.stable = fs;
  return out;
}

std::vector<MappingClassWord> element_ball(int letter_radius) {
  std::map<Mat2z, MappingClassWord> seen;
  std::vector<MappingClassWord> frontier{MappingClassWord()};
  seen.emplace(Mat2z::identity(), MappingClassWord());
  const char gens[4][2] = {{'A', 1}, {'A', -1}, {'B', 1}, {'B', -1}};
  for (int depth = 0; depth < letter_radius; ++depth) {
    std::vector<MappingClassWord> next;
    for (const MappingClassWord& w : frontier) {
      for (const auto& g : gens) {
        MappingClassWord cand = compose(w, MappingClassWord::generator(g[0], g[1]));
        if (seen.emplace(cand.matrix(), cand).second) next.push_back(cand);
      }
    }
    std::sort(next.begin(), next.end(),
              [](const MappingClassWord& l, const MappingClassWord& r) { return l.matrix() < r.matrix(); });
    frontier = std::move(next);
  }
  std::vector<MappingClassWord> out;
  out.reserve(seen.size());
  for (auto& [mat, word] : seen) out.push_back(word);
  return out;
}

}  // namespace mcb
