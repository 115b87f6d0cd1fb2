#pragma once

#include "recip/exactmath.hpp"

#include <boost/multiprecision/mpfr.hpp>

#include <complex>
#include <optional>
#include <string>
#include <variant>

namespace recip {

// Working real for numeric-mode presets, roughly 266 bits.
using Real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<80>,
                                           boost::multiprecision::et_off>;
using Cx = std::complex<long double>;

// Scalar policy: exact ring elements or tolerant reals.
template <class S> struct Scalar;

template <> struct Scalar<AlgebraicInt> {
  using Frac = AlgebraicFrac;
  static constexpr bool exact = true;
  static AlgebraicInt constant(const AlgebraicInt &like, long v) { return AlgebraicInt(like.ctx(), v); }
  static int sign(const AlgebraicInt &a) { return recip::sign(a); }
  static int sign(const AlgebraicFrac &a) { return recip::sign(a); }
  static Frac frac(const AlgebraicInt &n) { return AlgebraicFrac(n); }
  static Frac div(const AlgebraicInt &n, const AlgebraicInt &d) { return AlgebraicFrac(n, d); }
  static Frac fracConstant(const AlgebraicInt &like, long v) { return AlgebraicFrac(AlgebraicInt(like.ctx(), v)); }
  static Frac fracOne(const AlgebraicFrac &like) { return AlgebraicFrac(AlgebraicInt(like.ctx(), 1)); }
  static long double ld(const AlgebraicInt &a) { return a.toLongDouble(); }
  static long double ld(const AlgebraicFrac &a) { return a.toLongDouble(); }
  static int cmp(const AlgebraicInt &a, const AlgebraicInt &b);
  static std::string str(const AlgebraicInt &a) { return "[" + a.key() + "]"; }
  static std::string str(const AlgebraicFrac &a) { return a.str(); }
  static Real real(const AlgebraicFrac &a);
};

template <> struct Scalar<Real> {
  using Frac = Real;
  static constexpr bool exact = false;
  static const Real &eps();
  static Real constant(const Real &, long v) { return Real(v); }
  static int sign(const Real &a) {
    if (abs(a) <= eps()) return 0;
    return a > 0 ? 1 : -1;
  }
  static Frac frac(const Real &n) { return n; }
  static Frac div(const Real &n, const Real &d) { return n / d; }
  static Frac fracConstant(const Real &, long v) { return Real(v); }
  static Frac fracOne(const Real &) { return Real(1); }
  static long double ld(const Real &a) { return static_cast<long double>(a); }
  static int cmp(const Real &a, const Real &b) { return sign(a - b); }
  static std::string str(const Real &a);
  static Real real(const Real &a) { return a; }
};

template <class S> struct Mat2 {
  S a, b, c, d;
  S det() const { return a * d - b * c; }
  S trace() const { return a + d; }
  Mat2 adj() const { return {d, -b, -c, a}; }
  friend Mat2 operator*(const Mat2 &x, const Mat2 &y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
  }
  friend bool operator==(const Mat2 &x, const Mat2 &y) {
    using P = Scalar<S>;
    return P::cmp(x.a, y.a) == 0 && P::cmp(x.b, y.b) == 0 && P::cmp(x.c, y.c) == 0 && P::cmp(x.d, y.d) == 0;
  }
};

template <class S> struct Isometry {
  Mat2<S> m;
  bool rev = false; // orientation-reversing: z -> (a conj(z) + b)/(c conj(z) + d)
  friend bool operator==(const Isometry &x, const Isometry &y) { return x.rev == y.rev && x.m == y.m; }
};

using ExactIsometry = Isometry<AlgebraicInt>;
using RealIsometry = Isometry<Real>;

enum class Kind { Identity, Elliptic, Parabolic, Loxodromic, Reflection, GlideReflection };
const char *kindName(Kind k);

// Canonical forms compare with a strict total order (representation order, not numeric order).
template <class S> int compareIsometry(const Isometry<S> &x, const Isometry<S> &y) {
  if (x.rev != y.rev) return x.rev ? 1 : -1;
  using P = Scalar<S>;
  for (int k = 0; k < 4; ++k) {
    const S &u = k == 0 ? x.m.a : k == 1 ? x.m.b : k == 2 ? x.m.c : x.m.d;
    const S &v = k == 0 ? y.m.a : k == 1 ? y.m.b : k == 2 ? y.m.c : y.m.d;
    int c = P::cmp(u, v);
    if (c != 0) return c;
  }
  return 0;
}

template <class S> struct IsoLess {
  bool operator()(const Isometry<S> &x, const Isometry<S> &y) const { return compareIsometry(x, y) < 0; }
};

template <class S> std::string serialize(const Isometry<S> &g) {
  using P = Scalar<S>;
  return std::string(g.rev ? "R" : "P") + "(" + P::str(g.m.a) + "," + P::str(g.m.b) + ";" + P::str(g.m.c) + "," +
         P::str(g.m.d) + ")";
}

Isometry<AlgebraicInt> canonicalize(Isometry<AlgebraicInt> g);
Isometry<Real> canonicalize(Isometry<Real> g);

template <class S> Isometry<S> compose(const Isometry<S> &g, const Isometry<S> &h) {
  return canonicalize(Isometry<S>{g.m * h.m, g.rev != h.rev});
}

template <class S> Isometry<S> inverse(const Isometry<S> &g) { return canonicalize(Isometry<S>{g.m.adj(), g.rev}); }

template <class S> Isometry<S> conjugate(const Isometry<S> &h, const Isometry<S> &g) {
  return compose(compose(h, g), inverse(h));
}

template <class S> Isometry<S> identityLike(const Isometry<S> &like) {
  using P = Scalar<S>;
  S one = P::constant(like.m.a, 1), zero = P::constant(like.m.a, 0);
  return Isometry<S>{{one, zero, zero, one}, false};
}

template <class S> Isometry<S> power(const Isometry<S> &g, long k) {
  Isometry<S> base = k < 0 ? inverse(g) : g, acc = identityLike(g);
  for (long n = k < 0 ? -k : k; n > 0; n >>= 1) {
    if (n & 1) acc = compose(acc, base);
    base = compose(base, base);
  }
  return acc;
}

template <class S> bool isScalarMatrix(const Mat2<S> &m) {
  using P = Scalar<S>;
  return P::sign(m.b) == 0 && P::sign(m.c) == 0 && P::cmp(m.a, m.d) == 0;
}

template <class S> bool isIdentity(const Isometry<S> &g) { return !g.rev && isScalarMatrix(g.m); }

template <class S> Kind classify(const Isometry<S> &g) {
  using P = Scalar<S>;
  if (!g.rev) {
    if (isScalarMatrix(g.m)) return Kind::Identity;
    S t = g.m.trace();
    int s = P::sign(t * t - g.m.det() * P::constant(t, 4));
    if (s < 0) return Kind::Elliptic;
    if (s == 0) return Kind::Parabolic;
    return Kind::Loxodromic;
  }
  Isometry<S> sq{g.m * g.m, false};
  Kind k = classify(sq);
  if (k == Kind::Identity) return Kind::Reflection;
  if (k == Kind::Loxodromic) return Kind::GlideReflection;
  return k;
}

template <class S> bool isInvolution(const Isometry<S> &g) {
  if (g.rev) return classify(g) == Kind::Reflection;
  return !isIdentity(g) && Scalar<S>::sign(g.m.trace()) == 0;
}

template <class S> struct TranslationLength {
  long double lambda = 0;
  typename Scalar<S>::Frac coshHalf;
};

template <class S> TranslationLength<S> translationLength(const Isometry<S> &g) {
  using P = Scalar<S>;
  if (g.rev || classify(g) != Kind::Loxodromic)
    throw Error(Errc::InvalidClassification, "translationLength needs a preserving loxodromic element");
  S t = g.m.trace();
  if (P::sign(t) < 0) t = -t;
  // canonical forms have det 1 for preserving elements
  auto ch = P::div(t, P::constant(t, 2));
  TranslationLength<S> out{2.0L * std::acosh(P::ld(ch)), ch};
  return out;
}

// ---------------------------------------------------------------- fixed sets

template <class F> struct Point {
  F x, y;
};

// A(x^2 + y^2) + Bx + C = 0 on the upper half-plane.
template <class S> struct GeodesicQuadratic {
  S A, B, C;
  S disc() const { return B * B - A * C * Scalar<S>::constant(A, 4); }
};

GeodesicQuadratic<AlgebraicInt> normalizeQuadratic(GeodesicQuadratic<AlgebraicInt> q);
GeodesicQuadratic<Real> normalizeQuadratic(GeodesicQuadratic<Real> q);

template <class S> bool sameQuadratic(const GeodesicQuadratic<S> &p, const GeodesicQuadratic<S> &q) {
  using P = Scalar<S>;
  return P::sign(p.A * q.B - p.B * q.A) == 0 && P::sign(p.A * q.C - p.C * q.A) == 0 &&
         P::sign(p.B * q.C - p.C * q.B) == 0;
}

template <class S> struct FixedSet {
  std::variant<Point<typename Scalar<S>::Frac>, GeodesicQuadratic<S>> v;
  bool isPoint() const { return v.index() == 0; }
  const Point<typename Scalar<S>::Frac> &point() const { return std::get<0>(v); }
  const GeodesicQuadratic<S> &wall() const { return std::get<1>(v); }
};

template <class S> FixedSet<S> fixedSet(const Isometry<S> &g) {
  using P = Scalar<S>;
  if (!isInvolution(g)) throw Error(Errc::InvalidParameter, "fixedSet needs an involution");
  if (!g.rev) {
    // det 1, d = -a: z = a/c + i/|c|
    S c = g.m.c;
    S ac = P::sign(c) < 0 ? -c : c;
    Point<typename P::Frac> pt{P::div(g.m.a, c), P::div(P::constant(c, 1), ac)};
    return FixedSet<S>{pt};
  }
  return FixedSet<S>{normalizeQuadratic(GeodesicQuadratic<S>{g.m.c, g.m.d - g.m.a, -g.m.b})};
}

// Image of a fixed set under g, computed directly (not through conjugation).
template <class S> FixedSet<S> transform(const Isometry<S> &g, const FixedSet<S> &F) {
  using P = Scalar<S>;
  using Fr = typename P::Frac;
  const auto &m = g.m;
  if (F.isPoint()) {
    const auto &z = F.point();
    Fr a = P::frac(m.a), b = P::frac(m.b), c = P::frac(m.c), d = P::frac(m.d);
    Fr y = z.y;
    Fr cx = c * z.x + d;
    Fr den = cx * cx + c * c * y * y;
    Fr re = ((a * z.x + b) * cx + a * c * y * y) / den;
    Fr det = P::frac(m.det());
    if (P::sign(det) < 0) det = -det;
    Fr im = det * y / den;
    return FixedSet<S>{Point<Fr>{re, im}};
  }
  const auto &q = F.wall();
  // pull back the Hermitian form through adj(g); real coefficients make reversal irrelevant
  const S &a = m.d, &b = -m.b, &c = -m.c, &d = m.a;
  S A = q.A * a * a + q.B * a * c + q.C * c * c;
  S B = q.A * a * b * P::constant(a, 2) + q.B * (a * d + b * c) + q.C * c * d * P::constant(a, 2);
  S C = q.A * b * b + q.B * b * d + q.C * d * d;
  return FixedSet<S>{normalizeQuadratic(GeodesicQuadratic<S>{A, B, C})};
}

template <class S> bool sameFixedSet(const FixedSet<S> &F, const FixedSet<S> &G) {
  using P = Scalar<S>;
  if (F.isPoint() != G.isPoint()) return false;
  if (F.isPoint()) return P::sign(F.point().x - G.point().x) == 0 && P::sign(F.point().y - G.point().y) == 0;
  return sameQuadratic(F.wall(), G.wall());
}

enum class Separation { Intersecting, Asymptotic, Disjoint };

template <class S> struct SetDistance {
  using Fr = typename Scalar<S>::Frac;
  Separation kind = Separation::Intersecting;
  Fr coshSq;                 // cosh^2 d, exact
  std::optional<Fr> coshd;   // available for point-point pairs
  long double d = 0;
};

template <class S> SetDistance<S> setDistance(const FixedSet<S> &F1, const FixedSet<S> &F2) {
  using P = Scalar<S>;
  using Fr = typename P::Frac;
  SetDistance<S> out;
  if (F1.isPoint() && F2.isPoint()) {
    const auto &p = F1.point(), &q = F2.point();
    Fr dx = p.x - q.x, dy = p.y - q.y;
    Fr one = P::fracOne(dx);
    Fr ch = (dx * dx + dy * dy) / (p.y * q.y * (one + one)) + one;
    out.coshd = ch;
    out.coshSq = ch * ch;
    out.kind = P::sign(ch - one) == 0 ? Separation::Intersecting : Separation::Disjoint;
    out.d = out.kind == Separation::Disjoint ? std::acosh(P::ld(ch)) : 0.0L;
    return out;
  }
  if (F1.isPoint() != F2.isPoint()) {
    const auto &z = F1.isPoint() ? F1.point() : F2.point();
    const auto &w = F1.isPoint() ? F2.wall() : F1.wall();
    Fr A = P::frac(w.A), B = P::frac(w.B), C = P::frac(w.C);
    Fr num = A * (z.x * z.x + z.y * z.y) + B * z.x + C;
    Fr s2 = num * num / (z.y * z.y * P::frac(w.disc()));
    Fr one = P::fracOne(s2);
    out.coshSq = one + s2;
    out.kind = P::sign(num) == 0 ? Separation::Intersecting : Separation::Disjoint;
    out.d = std::asinh(std::sqrt(P::ld(s2)));
    return out;
  }
  const auto &u = F1.wall(), &v = F2.wall();
  if (sameQuadratic(u, v)) {
    out.coshSq = P::frac(P::constant(u.A, 1));
    out.kind = Separation::Intersecting;
    return out;
  }
  S two = P::constant(u.A, 2);
  S N = u.B * v.B - two * u.A * v.C - two * v.A * u.C;
  S D = u.disc() * v.disc();
  int s = P::sign(N * N - D);
  out.coshSq = P::div(N * N, D);
  if (s < 0) {
    out.kind = Separation::Intersecting;
  } else if (s == 0) {
    out.kind = Separation::Asymptotic;
  } else {
    out.kind = Separation::Disjoint;
    out.d = std::acosh(std::sqrt(P::ld(out.coshSq)));
  }
  return out;
}

// ---------------------------------------------------------------- numeric geometry

struct MobLD {
  long double a = 1, b = 0, c = 0, d = 1;
  bool rev = false;
  Cx operator()(Cx z) const {
    if (rev) z = std::conj(z);
    return (a * z + b) / (c * z + d);
  }
  MobLD inv() const { return MobLD{d, -b, -c, a, rev}; }
};

template <class S> MobLD toMob(const Isometry<S> &g) {
  using P = Scalar<S>;
  return MobLD{P::ld(g.m.a), P::ld(g.m.b), P::ld(g.m.c), P::ld(g.m.d), g.rev};
}

template <class S> Cx apply(const Isometry<S> &g, Cx z) { return toMob(g)(z); }

// Long double geodesic A|z|^2 + Bx + C = 0.
struct QuadLD {
  long double A = 0, B = 1, C = 0;
  bool vertical() const;
  long double center() const { return -B / (2 * A); }
  long double radius() const;
  long double value(Cx z) const { return A * std::norm(z) + B * z.real() + C; }
  // real endpoints; for a vertical line the second is +infinity
  std::pair<long double, long double> endpoints() const;
};

template <class S> QuadLD toQuadLD(const GeodesicQuadratic<S> &q) {
  using P = Scalar<S>;
  return QuadLD{P::ld(q.A), P::ld(q.B), P::ld(q.C)};
}

template <class S> Cx toCx(const Point<S> &p) {
  using P = Scalar<S>;
  return Cx(P::ld(p.x), P::ld(p.y));
}
Cx toCx(const Point<AlgebraicFrac> &p);

long double hypDist(Cx z, Cx w);
long double coshDist(Cx z, Cx w);
// Point a fraction t of the way from z to w along the geodesic.
Cx pointAlong(Cx z, Cx w, long double t);
// Orthogonal projection of z onto the geodesic q.
Cx projectToGeodesic(Cx z, const QuadLD &q);
// Geodesic through two distinct points.
QuadLD geodesicThrough(Cx z, Cx w);
// Orientation-preserving map sending u -> 0 and v -> infinity (v may be +inf).
MobLD sendToAxis(long double u, long double v);

struct Perpendicular {
  Cx p1, p2, mid;
  long double length = 0;
};

Perpendicular perpendicularLD(const std::variant<Cx, QuadLD> &F1, const std::variant<Cx, QuadLD> &F2);

template <class S> std::variant<Cx, QuadLD> toNumeric(const FixedSet<S> &F) {
  if (F.isPoint()) return toCx(F.point());
  return toQuadLD(F.wall());
}

template <class S> Perpendicular commonPerpendicular(const FixedSet<S> &F1, const FixedSet<S> &F2) {
  if (setDistance(F1, F2).kind != Separation::Disjoint)
    throw Error(Errc::InvalidConfiguration, "commonPerpendicular needs disjoint fixed sets");
  return perpendicularLD(toNumeric(F1), toNumeric(F2));
}

// Endpoints of the axis of a loxodromic element, (repelling, attracting); +inf allowed.
std::pair<long double, long double> axisEndpointsLD(const MobLD &g);

} // namespace recip
