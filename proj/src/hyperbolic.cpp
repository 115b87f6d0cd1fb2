#include "recip/hyperbolic.hpp"

#include <cmath>
#include <limits>

namespace recip {

const char *kindName(Kind k) {
  switch (k) {
  case Kind::Identity: return "identity";
  case Kind::Elliptic: return "elliptic";
  case Kind::Parabolic: return "parabolic";
  case Kind::Loxodromic: return "loxodromic";
  case Kind::Reflection: return "reflection";
  case Kind::GlideReflection: return "glide-reflection";
  }
  return "?";
}

int Scalar<AlgebraicInt>::cmp(const AlgebraicInt &a, const AlgebraicInt &b) {
  const auto &x = a.coeffs(), &y = b.coeffs();
  for (size_t k = 0; k < x.size() && k < y.size(); ++k) {
    int c = ::cmp(x[k], y[k]);
    if (c != 0) return c < 0 ? -1 : 1;
  }
  return x.size() < y.size() ? -1 : x.size() > y.size() ? 1 : 0;
}

static Real fromMpfr(const Mpfr &m) {
  Real r;
  mpfr_set(r.backend().data(), m.get(), MPFR_RNDN);
  return r;
}

Real Scalar<AlgebraicInt>::real(const AlgebraicFrac &a) { return fromMpfr(toReal(a, 300).first); }

const Real &Scalar<Real>::eps() {
  static const Real e("1e-45");
  return e;
}

std::string Scalar<Real>::str(const Real &a) {
  if (sign(a) == 0) return "0";
  return a.str(30, std::ios_base::scientific);
}

Isometry<AlgebraicInt> canonicalize(Isometry<AlgebraicInt> g) {
  auto &m = g.m;
  if (m.det().isZero()) throw Error(Errc::InvalidIsometry, "singular matrix");
  mpz_class k = m.a.content();
  for (const AlgebraicInt *e : {&m.b, &m.c, &m.d}) k = gcd(k, e->content());
  if (k > 1) {
    m.a.divExact(k);
    m.b.divExact(k);
    m.c.divExact(k);
    m.d.divExact(k);
  }
  for (AlgebraicInt *e : {&m.a, &m.b, &m.c, &m.d}) {
    int s = sign(*e);
    if (s == 0) continue;
    if (s < 0) {
      m.a = -m.a;
      m.b = -m.b;
      m.c = -m.c;
      m.d = -m.d;
    }
    break;
  }
  return g;
}

Isometry<Real> canonicalize(Isometry<Real> g) {
  using P = Scalar<Real>;
  auto &m = g.m;
  Real det = m.det();
  if (P::sign(det) == 0) throw Error(Errc::InvalidIsometry, "singular matrix");
  Real s = 1 / sqrt(abs(det));
  int first = 0;
  for (Real *e : {&m.a, &m.b, &m.c, &m.d}) {
    *e *= s;
    if (P::sign(*e) == 0) *e = 0;
    if (first == 0) first = P::sign(*e);
  }
  if (first < 0)
    for (Real *e : {&m.a, &m.b, &m.c, &m.d}) *e = -*e;
  return g;
}

GeodesicQuadratic<AlgebraicInt> normalizeQuadratic(GeodesicQuadratic<AlgebraicInt> q) {
  if (sign(q.disc()) <= 0) throw Error(Errc::InvalidParameter, "geodesic quadratic needs a positive discriminant");
  mpz_class k = gcd(gcd(q.A.content(), q.B.content()), q.C.content());
  if (k > 1) {
    q.A.divExact(k);
    q.B.divExact(k);
    q.C.divExact(k);
  }
  for (AlgebraicInt *e : {&q.A, &q.B, &q.C}) {
    int s = sign(*e);
    if (s == 0) continue;
    if (s < 0) {
      q.A = -q.A;
      q.B = -q.B;
      q.C = -q.C;
    }
    break;
  }
  return q;
}

GeodesicQuadratic<Real> normalizeQuadratic(GeodesicQuadratic<Real> q) {
  using P = Scalar<Real>;
  Real D = q.disc();
  if (P::sign(D) <= 0) throw Error(Errc::InvalidParameter, "geodesic quadratic needs a positive discriminant");
  Real s = 1 / sqrt(D);
  int first = 0;
  for (Real *e : {&q.A, &q.B, &q.C}) {
    *e *= s;
    if (P::sign(*e) == 0) *e = 0;
    if (first == 0) first = P::sign(*e);
  }
  if (first < 0)
    for (Real *e : {&q.A, &q.B, &q.C}) *e = -*e;
  return q;
}

Cx toCx(const Point<AlgebraicFrac> &p) { return Cx(p.x.toLongDouble(), p.y.toLongDouble()); }

// ---------------------------------------------------------------- numeric geometry

bool QuadLD::vertical() const { return std::fabs(A) <= 1e-18L * (std::fabs(B) + std::fabs(C)); }

long double QuadLD::radius() const { return std::sqrt(B * B - 4 * A * C) / (2 * std::fabs(A)); }

std::pair<long double, long double> QuadLD::endpoints() const {
  if (vertical()) return {-C / B, std::numeric_limits<long double>::infinity()};
  long double c = center(), r = radius();
  return {c - r, c + r};
}

long double coshDist(Cx z, Cx w) { return 1 + std::norm(z - w) / (2 * z.imag() * w.imag()); }

long double hypDist(Cx z, Cx w) {
  // 2 asinh(|z-w| / (2 sqrt(y1 y2))) keeps precision for nearby points
  return 2 * std::asinh(std::abs(z - w) / (2 * std::sqrt(z.imag() * w.imag())));
}

Cx pointAlong(Cx z, Cx w, long double t) {
  const Cx I(0, 1);
  long double x = z.real(), y = z.imag();
  Cx w1 = (w - x) / y;
  Cx zeta = (w1 - I) / (w1 + I);
  long double r = std::abs(zeta);
  if (r == 0) return z;
  long double d = hypDist(z, w);
  Cx zt = std::tanh(t * d / 2) * zeta / r;
  Cx back = I * (1.0L + zt) / (1.0L - zt);
  return x + y * back;
}

MobLD sendToAxis(long double u, long double v) {
  if (std::isinf(v)) return MobLD{1, -u, 0, 1, false};
  if (std::isinf(u)) return MobLD{0, -1, 1, -v, false};
  if (u < v) return MobLD{1, -u, -1, v, false};
  return MobLD{1, -u, 1, -v, false};
}

static long double mobReal(const MobLD &m, long double x) {
  if (std::isinf(x)) {
    if (m.c == 0) return std::numeric_limits<long double>::infinity();
    return m.a / m.c;
  }
  long double den = m.c * x + m.d;
  if (den == 0) return std::numeric_limits<long double>::infinity();
  return (m.a * x + m.b) / den;
}

Cx projectToGeodesic(Cx z, const QuadLD &q) {
  auto [u, v] = q.endpoints();
  MobLD M = sendToAxis(u, v);
  Cx w = M(z);
  return M.inv()(Cx(0, std::abs(w)));
}

QuadLD geodesicThrough(Cx z, Cx w) {
  long double dx = z.real() - w.real();
  if (std::fabs(dx) <= 1e-15L * (std::abs(z) + std::abs(w))) return QuadLD{0, 1, -z.real()};
  long double c = (std::norm(z) - std::norm(w)) / (2 * dx);
  return QuadLD{1, -2 * c, -std::norm(z) + 2 * c * z.real()};
}

Perpendicular perpendicularLD(const std::variant<Cx, QuadLD> &F1, const std::variant<Cx, QuadLD> &F2) {
  Perpendicular out;
  if (F1.index() == 0 && F2.index() == 0) {
    out.p1 = std::get<0>(F1);
    out.p2 = std::get<0>(F2);
  } else if (F1.index() == 0) {
    out.p1 = std::get<0>(F1);
    out.p2 = projectToGeodesic(out.p1, std::get<1>(F2));
  } else if (F2.index() == 0) {
    out.p2 = std::get<0>(F2);
    out.p1 = projectToGeodesic(out.p2, std::get<1>(F1));
  } else {
    auto [u1, v1] = std::get<1>(F1).endpoints();
    auto [u2, v2] = std::get<1>(F2).endpoints();
    MobLD M = sendToAxis(u1, v1);
    long double e1 = mobReal(M, u2), e2 = mobReal(M, v2);
    if (!(e1 * e2 > 0) || std::isinf(e1) || std::isinf(e2))
      throw Error(Errc::InvalidConfiguration, "walls are not disjoint");
    long double g = std::sqrt(e1 * e2);
    long double c = (e1 + e2) / 2;
    long double x = e1 * e2 / c;
    long double y = std::sqrt(std::max(0.0L, e1 * e2 - x * x));
    MobLD Mi = M.inv();
    out.p1 = Mi(Cx(0, g));
    out.p2 = Mi(Cx(x, y));
  }
  out.length = hypDist(out.p1, out.p2);
  out.mid = pointAlong(out.p1, out.p2, 0.5L);
  return out;
}

std::pair<long double, long double> axisEndpointsLD(const MobLD &g) {
  const long double inf = std::numeric_limits<long double>::infinity();
  long double a = g.a, b = g.b, c = g.c, d = g.d;
  if (std::fabs(c) <= 1e-300L) {
    long double x = b / (d - a);
    // z -> (a/d) z + b/d: infinity attracts when |a/d| > 1
    return std::fabs(a) > std::fabs(d) ? std::make_pair(x, inf) : std::make_pair(inf, x);
  }
  long double det = a * d - b * c;
  long double tr = a + d;
  long double s = std::sqrt(std::max(0.0L, tr * tr - 4 * det));
  long double z1 = ((a - d) + s) / (2 * c), z2 = ((a - d) - s) / (2 * c);
  // attracting fixed point has |c z + d| > sqrt(det)
  if (std::fabs(c * z1 + d) > std::fabs(c * z2 + d)) return {z2, z1};
  return {z1, z2};
}

} // namespace recip
