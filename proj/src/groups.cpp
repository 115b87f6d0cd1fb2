#include "recip/groups.hpp"

#include <boost/math/constants/constants.hpp>

#include <cmath>
#include <numeric>

namespace recip {

namespace {

constexpr long double kPi = 3.141592653589793238462643383279502884L;

QuadLD normalized(QuadLD q) {
  long double s = std::sqrt(q.B * q.B - 4 * q.A * q.C);
  q.A /= s;
  q.B /= s;
  q.C /= s;
  return q;
}

ExactIsometry exact(const RingContext *, const AlgebraicInt &a, const AlgebraicInt &b, const AlgebraicInt &c,
                    const AlgebraicInt &d, bool rev = false) {
  return canonicalize(ExactIsometry{{a, b, c, d}, rev});
}

ExactIsometry exact(const RingContext *R, long a, long b, long c, long d, bool rev = false) {
  return exact(R, AlgebraicInt(R, a), AlgebraicInt(R, b), AlgebraicInt(R, c), AlgebraicInt(R, d), rev);
}

struct RPoint {
  Real x, y;
};

RPoint rdiv(const RPoint &n, const RPoint &d) {
  Real den = d.x * d.x + d.y * d.y;
  return {(n.x * d.x + n.y * d.y) / den, (n.y * d.x - n.x * d.y) / den};
}

GeodesicQuadratic<Real> throughR(const RPoint &z, const RPoint &w) {
  Real dx = z.x - w.x;
  Real nz = z.x * z.x + z.y * z.y, nw = w.x * w.x + w.y * w.y;
  if (Scalar<Real>::sign(dx) == 0) return normalizeQuadratic(GeodesicQuadratic<Real>{Real(0), Real(1), -z.x});
  Real c = (nz - nw) / (2 * dx);
  return normalizeQuadratic(GeodesicQuadratic<Real>{Real(1), -2 * c, -nz + 2 * c * z.x});
}

Real valueAt(const GeodesicQuadratic<Real> &q, const RPoint &z) {
  return q.A * (z.x * z.x + z.y * z.y) + q.B * z.x + q.C;
}

} // namespace

RealIsometry reflectionIn(const Real &A, const Real &B, const Real &C) {
  return canonicalize(RealIsometry{{-B, -2 * C, 2 * A, B}, true});
}

template <class S> int Domain<S>::violatedSide(Cx z, long double tol) const {
  for (size_t k = 0; k < sides.size(); ++k) {
    const auto &s = sides[k];
    // value / y is sinh of the signed distance for a unit-discriminant quadratic
    long double v = s.inside * s.q.value(z) / z.imag();
    if (v < -tol) return static_cast<int>(k);
  }
  return -1;
}

template <class S> const InvolutionFamily<S> &GroupPreset<S>::family(const std::string &label) const {
  for (const auto &f : families)
    if (f.label == label) return f;
  throw Error(Errc::InvalidParameter, "unknown family label " + label + " for preset " + name);
}

template <class S>
PredictedConstant GroupPreset<S>::predictedConstant(const std::string &I, const std::string &J) const {
  const auto &fi = family(I), &fj = family(J);
  PredictedConstant c;
  if (!fi.sigmaFinite || !fj.sigmaFinite) {
    c.reason = "not applicable: Sigma_I infinite (noncompact walls)";
    return c;
  }
  c.applicable = true;
  c.value = fi.sigma * fj.sigma / (4 * kPi * area);
  c.form = "(" + fi.sigmaForm + ")*(" + fj.sigmaForm + ")/(4*pi*" + areaForm + ")";
  return c;
}

// ---------------------------------------------------------------- presets

ExactPreset hecke(int p) {
  if (p < 3) throw Error(Errc::InvalidParameter, "hecke needs p >= 3");
  const RingContext *R = buildRing(p);
  AlgebraicInt one(R, 1), zero(R, 0), lam = AlgebraicInt::lambda(R);
  long double lamLD = R->lambdaLong;
  ExactPreset g;
  g.name = p == 3 ? "modular" : "hecke";
  g.p = p;
  g.ring = R;
  ExactIsometry alpha = exact(R, zero, one, -one, zero);
  ExactIsometry T = exact(R, one, lam, zero, one);
  g.generators = {alpha, T};
  auto &D = g.domain;
  D.sides.push_back({QuadLD{0, 1, -lamLD / 2}, -1, T});
  D.sides.push_back({QuadLD{0, 1, lamLD / 2}, 1, inverse(T)});
  D.sides.push_back({normalized(QuadLD{1, 0, -1}), 1, alpha});
  long double th = kPi / p;
  D.vertices = {Cx(std::cos(th), std::sin(th)), Cx(-std::cos(th), std::sin(th))};
  D.cusped = true;
  D.cuspWidth = lamLD;
  D.cuspShift = T;
  g.basepoint = Cx(0, 1);

  InvolutionFamily<AlgebraicInt> fa{"I_alpha", {alpha}, true, kPi, "pi", true};
  g.families.push_back(fa);
  ExactIsometry Ta = compose(T, alpha);
  if (p % 2 == 0) {
    ExactIsometry beta = power(Ta, p / 2);
    InvolutionFamily<AlgebraicInt> fb{"I_beta", {beta}, true, 2 * kPi / p, "2*pi/" + std::to_string(p), true};
    g.families.push_back(fb);
    InvolutionFamily<AlgebraicInt> fu{"I_Gamma", {alpha, beta}, true, kPi * (1 + 2.0L / p),
                                      "pi*(1+2/" + std::to_string(p) + ")", true};
    g.families.push_back(fu);
    g.relations.push_back({"beta^2", compose(beta, beta)});
  } else {
    InvolutionFamily<AlgebraicInt> fu{"I_Gamma", {alpha}, true, kPi, "pi", true};
    g.families.push_back(fu);
  }
  g.relations.push_back({"alpha^2", compose(alpha, alpha)});
  g.relations.push_back({"(T alpha)^" + std::to_string(p), power(Ta, p)});
  g.area = kPi * (1 - 2.0L / p);
  g.areaForm = "pi*(1-2/" + std::to_string(p) + ")";
  // Vol = -2 pi chi, chi = -(p-2)/(2p)
  long num = -(p - 2), den = 2L * p, k = std::gcd(num, den);
  g.eulerNum = num / k;
  g.eulerDen = den / k;
  return g;
}

ExactPreset modular() { return hecke(3); }

ExactPreset extendedModular() {
  const RingContext *R = buildRing(3);
  ExactPreset g;
  g.name = "extended-modular";
  g.p = 3;
  g.ring = R;
  ExactIsometry alpha = exact(R, 0, 1, -1, 0), T = exact(R, 1, 1, 0, 1);
  ExactIsometry r = exact(R, -1, 0, 0, 1, true);
  ExactIsometry sh = exact(R, -1, 1, 0, 1, true); // z -> 1 - conj(z)
  ExactIsometry sc = exact(R, 0, 1, 1, 0, true);  // z -> 1/conj(z)
  ExactIsometry b = exact(R, -2, 1, -3, 2, true);
  g.generators = {alpha, T, r};
  auto &D = g.domain;
  D.sides.push_back({QuadLD{0, 1, 0}, 1, r});
  D.sides.push_back({QuadLD{0, 1, -0.5L}, -1, sh});
  D.sides.push_back({normalized(QuadLD{1, 0, -1}), 1, sc});
  D.vertices = {Cx(0, 1), Cx(0.5L, std::sqrt(3.0L) / 2)};
  D.cusped = true;
  D.cuspWidth = 1;
  D.cuspShift = T;
  g.basepoint = Cx(0.25L, 1.5L);
  g.coxeter = true;
  g.families.push_back({"I_alpha", {r}, false, 0, "inf", false});
  g.families.push_back({"I_beta", {b}, false, 0, "inf", false});
  g.relations = {{"r^2", compose(r, r)},
                 {"sh^2", compose(sh, sh)},
                 {"sc^2", compose(sc, sc)},
                 {"(r sc)^2", power(compose(r, sc), 2)},
                 {"(sc sh)^3", power(compose(sc, sh), 3)},
                 {"alpha^-1 r sc", compose(inverse(alpha), compose(r, sc))},
                 {"T^-1 sh r", compose(inverse(T), compose(sh, r))},
                 {"b^2", compose(b, b)}};
  g.area = kPi / 6;
  g.areaForm = "pi/6";
  g.eulerNum = -1;
  g.eulerDen = 12;
  return g;
}

RealPreset triangle(int p, int q, int r) {
  if (p < 2 || q < 2 || r < 2) throw Error(Errc::InvalidParameter, "triangle orders must be finite and >= 2");
  if (static_cast<long>(q) * r + static_cast<long>(p) * r + static_cast<long>(p) * q >= static_cast<long>(p) * q * r)
    throw Error(Errc::InvalidParameter, "triangle signature is not hyperbolic");
  using boost::math::constants::pi;
  Real al = pi<Real>() / p, be = pi<Real>() / q, ga = pi<Real>() / r;
  Real cc = (cos(ga) + cos(al) * cos(be)) / (sin(al) * sin(be)); // AB
  Real cb = (cos(be) + cos(al) * cos(ga)) / (sin(al) * sin(ga)); // AC
  Real ca = (cos(al) + cos(be) * cos(ga)) / (sin(be) * sin(ga)); // BC
  Real lc = acosh(cc), lb = acosh(cb), la = acosh(ca);
  RPoint A{Real(0), Real(1)}, B{Real(0), exp(lc)};
  Real phi = -pi<Real>() / (2 * p);
  RPoint w{Real(0), exp(lb)};
  RPoint C = rdiv(RPoint{cos(phi) * w.x + sin(phi), cos(phi) * w.y}, RPoint{-sin(phi) * w.x + cos(phi), -sin(phi) * w.y});

  // sides: s1 = AB, s2 = BC, s3 = CA
  GeodesicQuadratic<Real> q1 = normalizeQuadratic(GeodesicQuadratic<Real>{Real(0), Real(1), Real(0)});
  GeodesicQuadratic<Real> q2 = throughR(B, C), q3 = throughR(C, A);
  const GeodesicQuadratic<Real> *qs[3] = {&q1, &q2, &q3};
  const RPoint *opposite[3] = {&C, &A, &B};
  Real lens[3] = {lc, la, lb};

  RealPreset g;
  g.name = "triangle";
  g.p = p;
  g.q = q;
  g.r = r;
  std::vector<RealIsometry> refl;
  for (int k = 0; k < 3; ++k) {
    const auto &Q = *qs[k];
    refl.push_back(reflectionIn(Q.A, Q.B, Q.C));
    int inside = Scalar<Real>::sign(valueAt(Q, *opposite[k]));
    g.domain.sides.push_back(
        {QuadLD{static_cast<long double>(Q.A), static_cast<long double>(Q.B), static_cast<long double>(Q.C)}, inside,
         refl.back()});
  }
  g.generators = refl;
  auto cx = [](const RPoint &z) { return Cx(static_cast<long double>(z.x), static_cast<long double>(z.y)); };
  g.domain.vertices = {cx(A), cx(B), cx(C)};
  g.coxeter = true;
  g.basepoint = pointAlong(pointAlong(cx(A), cx(B), 0.5L), cx(C), 1.0L / 3);

  // sides meeting at an odd-order vertex are conjugate
  int parent[3] = {0, 1, 2};
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x];
    return x;
  };
  auto join = [&](int x, int y) { parent[find(x)] = find(y); };
  if (p % 2) join(0, 2);
  if (q % 2) join(0, 1);
  if (r % 2) join(1, 2);
  long double L = 0;
  for (int k = 0; k < 3; ++k) L += static_cast<long double>(lens[k]);
  std::vector<RealIsometry> unionReps;
  for (int k = 0; k < 3; ++k) {
    long double sig = 0;
    std::string form;
    for (int j = 0; j < 3; ++j)
      if (find(j) == find(k)) {
        sig += static_cast<long double>(lens[j]);
        form += (form.empty() ? "" : "+") + std::string("len_s") + std::to_string(j + 1);
      }
    g.families.push_back({"I_s" + std::to_string(k + 1), {refl[k]}, false, sig, form, true});
    if (find(k) == k) unionReps.push_back(refl[k]);
  }
  g.families.push_back({"I_S", unionReps, false, L, "len_s1+len_s2+len_s3", true});

  for (int k = 0; k < 3; ++k) g.relations.push_back({"s" + std::to_string(k + 1) + "^2", compose(refl[k], refl[k])});
  g.relations.push_back({"(s1 s3)^" + std::to_string(p), power(compose(refl[0], refl[2]), p)});
  g.relations.push_back({"(s1 s2)^" + std::to_string(q), power(compose(refl[0], refl[1]), q)});
  g.relations.push_back({"(s2 s3)^" + std::to_string(r), power(compose(refl[1], refl[2]), r)});

  // V = pi (1 - 1/p - 1/q - 1/r), chi = -V/(2 pi)
  long num = static_cast<long>(p) * q * r - static_cast<long>(q) * r - static_cast<long>(p) * r - static_cast<long>(p) * q;
  long den = 2L * p * q * r, k = std::gcd(num, den);
  g.eulerNum = -num / k;
  g.eulerDen = den / k;
  g.area = kPi * static_cast<long double>(num) / (static_cast<long double>(p) * q * r);
  g.areaForm = "pi*(1-1/" + std::to_string(p) + "-1/" + std::to_string(q) + "-1/" + std::to_string(r) + ")";
  return g;
}

// ---------------------------------------------------------------- self-checks

template <class S> std::vector<std::string> checkPreset(const GroupPreset<S> &g) {
  std::vector<std::string> fails;
  for (const auto &[name, w] : g.relations)
    if (!isIdentity(w)) fails.push_back("relation " + name + " is not the identity");
  for (const auto &f : g.families)
    for (const auto &rep : f.classReps) {
      if (!isInvolution(rep)) {
        fails.push_back("family " + f.label + " representative is not an involution");
        continue;
      }
      if (fixedSet(rep).isPoint() != f.pointType) fails.push_back("family " + f.label + " fixed-set kind mismatch");
    }
  // each pairing maps its side back onto a side of the closed domain
  const auto &D = g.domain;
  for (size_t k = 0; k < D.sides.size(); ++k) {
    const auto &s = D.sides[k];
    auto [u, v] = s.q.endpoints();
    MobLD M = sendToAxis(u, v), Mi = M.inv();
    MobLD Pinv = toMob(inverse(s.pairing));
    int samples = 0;
    for (int t = -400; t <= 400; ++t) {
      Cx z = Mi(Cx(0, std::exp(t / 40.0L)));
      if (!D.contains(z, 1e-12L)) continue;
      ++samples;
      Cx w = Pinv(z);
      bool onSide = false;
      for (const auto &o : D.sides)
        if (std::fabs(o.q.value(w) / w.imag()) < 1e-9L) onSide = true;
      if (!onSide || !D.contains(w, 1e-9L)) {
        fails.push_back("side " + std::to_string(k) + " pairing does not map the side onto a side");
        break;
      }
    }
    if (samples == 0) fails.push_back("side " + std::to_string(k) + " has no sample points in the domain");
  }
  long double gb = -2 * kPi * static_cast<long double>(g.eulerNum) / g.eulerDen;
  if (std::fabs(gb - g.area) > 1e-15L) fails.push_back("Gauss-Bonnet mismatch");
  if (!D.contains(g.basepoint)) fails.push_back("basepoint outside the domain");
  return fails;
}

template struct Domain<AlgebraicInt>;
template struct Domain<Real>;
template struct GroupPreset<AlgebraicInt>;
template struct GroupPreset<Real>;
template std::vector<std::string> checkPreset(const GroupPreset<AlgebraicInt> &);
template std::vector<std::string> checkPreset(const GroupPreset<Real> &);

} // namespace recip
