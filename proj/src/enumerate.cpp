#include "recip/enumerate.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>
#include <thread>

namespace recip {

namespace {

constexpr long double kInf = std::numeric_limits<long double>::infinity();
constexpr long double kOnSide = 1e-9L;
constexpr long double kPositive = 1e-9L;

template <class S> using IsoSet = std::set<Isometry<S>, IsoLess<S>>;

template <class S> struct PairLess {
  bool operator()(const CanonicalPair<S> &x, const CanonicalPair<S> &y) const {
    int c = compareIsometry(x.alpha, y.alpha);
    if (c != 0) return c < 0;
    return compareIsometry(x.beta, y.beta) < 0;
  }
};

template <class S> std::vector<Isometry<S>> stepSet(const GroupPreset<S> &g) {
  IsoSet<S> s;
  for (const auto &x : g.generators) {
    s.insert(x);
    s.insert(inverse(x));
  }
  for (const auto &side : g.domain.sides) {
    s.insert(side.pairing);
    s.insert(inverse(side.pairing));
  }
  std::vector<Isometry<S>> out;
  for (const auto &x : s)
    if (!isIdentity(x)) out.push_back(x);
  return out;
}

// sinh of the signed distance to each side; indices of sides within tol
template <class S> std::vector<int> sidesAt(const Domain<S> &D, Cx z, long double tol) {
  std::vector<int> out;
  for (std::size_t k = 0; k < D.sides.size(); ++k) {
    long double v = D.sides[k].q.value(z) / z.imag();
    if (std::fabs(v) < tol) out.push_back(static_cast<int>(k));
  }
  return out;
}

std::variant<Cx, QuadLD> numericFixed(const MobLD &m) {
  if (m.rev) return QuadLD{m.c, m.d - m.a, -m.b};
  // det > 0, d = -a: z = (a - d)/(2c) + i sqrt(det)/|c|
  long double det = m.a * m.d - m.b * m.c;
  return Cx((m.a - m.d) / (2 * m.c), std::sqrt(det) / std::fabs(m.c));
}

// Numeric distance between fixed sets; negative when they meet.
long double numericDistance(const std::variant<Cx, QuadLD> &F1, const std::variant<Cx, QuadLD> &F2) {
  if (F1.index() == 0 && F2.index() == 0) return hypDist(std::get<0>(F1), std::get<0>(F2));
  if (F1.index() != F2.index()) {
    Cx z = F1.index() == 0 ? std::get<0>(F1) : std::get<0>(F2);
    const QuadLD &q = F1.index() == 0 ? std::get<1>(F2) : std::get<1>(F1);
    long double disc = q.B * q.B - 4 * q.A * q.C;
    return std::asinh(std::fabs(q.value(z)) / (z.imag() * std::sqrt(disc)));
  }
  const QuadLD &u = std::get<1>(F1), &v = std::get<1>(F2);
  long double N = u.B * v.B - 2 * u.A * v.C - 2 * v.A * u.C;
  long double D = std::sqrt((u.B * u.B - 4 * u.A * u.C) * (v.B * v.B - 4 * v.A * v.C));
  long double r = std::fabs(N) / D;
  return r < 1 ? -1 : std::acosh(r);
}

} // namespace

// ---------------------------------------------------------------- lines and clipping

GeoLine GeoLine::through(long double u, long double v) {
  GeoLine L;
  L.u = u;
  L.v = v;
  L.toAxis = sendToAxis(u, v);
  L.fromAxis = L.toAxis.inv();
  return L;
}

template <class S> GeoLine lineOf(const Isometry<S> &g) {
  MobLD m = toMob(g);
  if (g.rev) {
    auto [u, v] = QuadLD{m.c, m.d - m.a, -m.b}.endpoints();
    return GeoLine::through(u, v);
  }
  auto [u, v] = axisEndpointsLD(m);
  return GeoLine::through(u, v);
}

template <class S> std::optional<Clip> clipLine(const Domain<S> &D, const GeoLine &L) {
  const MobLD &N = L.fromAxis;
  long double lo = -kInf, hi = kInf;
  for (const auto &side : D.sides) {
    const QuadLD &q = side.q;
    long double A = q.A * N.a * N.a + q.B * N.a * N.c + q.C * N.c * N.c;
    long double B = 2 * q.A * N.a * N.b + q.B * (N.a * N.d + N.b * N.c) + 2 * q.C * N.c * N.d;
    long double C = q.A * N.b * N.b + q.B * N.b * N.d + q.C * N.d * N.d;
    long double scale = std::fabs(A) + std::fabs(B) + std::fabs(C);
    long double tiny = 1e-15L * scale;
    long double a = side.inside * A, c = side.inside * C;
    // on the axis w = i e^s the side function is proportional to a e^{2s} + c
    if (std::fabs(a) <= tiny) {
      if (std::fabs(c) <= tiny) continue;
      if (c < 0) return std::nullopt;
      continue;
    }
    if (a > 0) {
      long double r = -c / a;
      if (r > 0) lo = std::max(lo, std::log(r) / 2);
    } else {
      long double r = c / -a;
      if (r <= 0) return std::nullopt;
      hi = std::min(hi, std::log(r) / 2);
    }
  }
  if (lo > hi + 1e-10L) return std::nullopt;
  if (lo > hi) lo = hi = (lo + hi) / 2;
  return Clip{lo, hi};
}

// ---------------------------------------------------------------- thresholds

template <> bool withinThreshold(const SetDistance<AlgebraicInt> &d, long double T) {
  long bits = defaultPrecisionBits();
  Mpfr c(bits + 32);
  mpfr_set_ld(c.get(), T, MPFR_RNDN);
  mpfr_cosh(c.get(), c.get(), MPFR_RNDN);
  mpfr_sqr(c.get(), c.get(), MPFR_RNDN);
  return compareCertified(d.coshSq, c, bits) <= 0;
}

template <> bool withinThreshold(const SetDistance<Real> &d, long double T) {
  Real c = cosh(Real(T));
  return d.coshSq <= c * c + Scalar<Real>::eps();
}

// ---------------------------------------------------------------- ball

template <class S> std::vector<Isometry<S>> ballElements(const GroupPreset<S> &g, const BallParams &p) {
  if (!(p.R > 0) || p.slack < 0) throw Error(Errc::InvalidParameter, "ball radius must be positive");
  auto steps = stepSet(g);
  Cx o = g.basepoint;
  auto disp = [&](const Isometry<S> &x) { return hypDist(o, recip::apply(x, o)); };
  long double outer = p.R + p.slack;
  Isometry<S> id = identityLike(g.generators.at(0));
  IsoSet<S> visited{id};
  std::deque<Isometry<S>> queue{id};
  std::vector<Isometry<S>> out{id};
  while (!queue.empty()) {
    Isometry<S> x = std::move(queue.front());
    queue.pop_front();
    for (const auto &s : steps) {
      Isometry<S> y = compose(x, s);
      long double d = disp(y);
      if (d > outer) continue;
      if (!visited.insert(y).second) continue;
      if (visited.size() > p.cap) throw Error(Errc::ResourceLimit, "ball element cap exceeded");
      if (d <= p.R) out.push_back(y);
      queue.push_back(std::move(y));
    }
  }
  std::sort(out.begin(), out.end(), IsoLess<S>());
  return out;
}

template <class S> bool auditBall(const GroupPreset<S> &g, const std::vector<Isometry<S>> &ball, long double R) {
  auto steps = stepSet(g);
  Cx o = g.basepoint;
  IsoSet<S> have(ball.begin(), ball.end());
  for (const auto &x : ball) {
    if (have.count(inverse(x)) == 0) return false;
    long double dx = hypDist(o, recip::apply(x, o));
    for (const auto &s : steps) {
      Isometry<S> y = compose(x, s);
      long double dy = hypDist(o, recip::apply(y, o));
      if (dy < dx && dy <= R && have.count(y) == 0) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------- engine

template <class S> Engine<S>::Engine(const GroupPreset<S> &g) : g_(g), id_(identityLike(g.generators.at(0))) {
  for (const auto &side : g.domain.sides) sideInv_.push_back(inverse(side.pairing));
  long double maxV = 0, sx = 0;
  for (Cx v : g.domain.vertices) {
    maxV = std::max(maxV, hypDist(g.basepoint, v));
    sx += v.real();
  }
  if (!g.domain.vertices.empty()) cuspCenter_ = sx / g.domain.vertices.size();
  nearR_ = 2 * maxV + 2;
  near_ = ballElements(g, BallParams{nearR_, 2.0L, 4'000'000});
}

template <class S> bool Engine<S>::inDomain(Cx z, long double tol) const { return g_.domain.contains(z, tol); }

template <class S> long double Engine<S>::displacement(const Isometry<S> &x) const {
  return hypDist(g_.basepoint, recip::apply(x, g_.basepoint));
}

template <class S> std::pair<Cx, Isometry<S>> Engine<S>::reduce(Cx z) const {
  if (!(z.imag() > 0)) throw Error(Errc::InvalidParameter, "point must lie in the upper half-plane");
  const auto &D = g_.domain;
  Isometry<S> acc = id_;
  for (int iter = 0; iter < 100000; ++iter) {
    if (D.cusped && D.cuspShift) {
      long double k = std::round((z.real() - cuspCenter_) / D.cuspWidth);
      if (k != 0) {
        z -= k * D.cuspWidth;
        acc = compose(power(*D.cuspShift, -static_cast<long>(k)), acc);
      }
    }
    int s = D.violatedSide(z);
    if (s < 0) return {z, acc};
    z = recip::apply(sideInv_[s], z);
    acc = compose(sideInv_[s], acc);
  }
  throw Error(Errc::NumericFailure, "reduction to the fundamental domain did not converge");
}

template <class S> bool Engine<S>::isMember(const Isometry<S> &x) const {
  Isometry<S> c = canonicalize(x);
  Cx w = recip::apply(c, g_.basepoint);
  if (!(w.imag() > 0)) return false;
  auto [z, h] = reduce(w);
  Isometry<S> k = compose(h, c);
  return std::binary_search(near_.begin(), near_.end(), k, IsoLess<S>());
}

template <class S> typename Engine<S>::Line Engine<S>::lineData(const Isometry<S> &x) const {
  Line L{x, lineOf(x), std::nullopt};
  L.clip = clipLine(g_.domain, L.line);
  return L;
}

template <class S> std::vector<Isometry<S>> Engine<S>::conjugatesThrough(const Isometry<S> &, Cx x) const {
  auto on = sidesAt(g_.domain, x, kOnSide);
  if (on.size() == 1) return {sideInv_[on[0]]};
  std::vector<Isometry<S>> out;
  for (const auto &h : near_)
    if (inDomain(recip::apply(h, x), kOnSide)) out.push_back(h);
  return out;
}

template <class S> Isometry<S> Engine<S>::moveIntoDomain(const Isometry<S> &x) const {
  GeoLine L = lineOf(x);
  for (int j = 0; j < 40; ++j) {
    long double s = (j % 2 ? -1 : 1) * (0.37L + 0.29L * j);
    auto [z, h] = reduce(L.at(s));
    Isometry<S> y = conjugate(h, x);
    auto d = lineData(y);
    if (d.clip && d.clip->length() > kPositive) return y;
  }
  throw Error(Errc::NumericFailure, "could not place a geodesic through the fundamental domain");
}

template <class S>
std::vector<Isometry<S>> Engine<S>::sweep(const Isometry<S> &start, std::vector<Isometry<S>> *touching) const {
  IsoSet<S> seen{start};
  std::deque<Isometry<S>> queue{start};
  std::vector<Isometry<S>> out{start};
  while (!queue.empty()) {
    Isometry<S> x = std::move(queue.front());
    queue.pop_front();
    auto L = lineData(x);
    if (!L.clip) continue;
    for (long double s : {L.clip->sIn, L.clip->sOut}) {
      if (std::isinf(s)) continue;
      Cx z = L.line.at(s);
      for (const auto &h : conjugatesThrough(x, z)) {
        Isometry<S> y = conjugate(h, x);
        if (!seen.insert(y).second) continue;
        auto Ly = lineData(y);
        if (Ly.clip && Ly.clip->length() > kPositive) {
          out.push_back(y);
          queue.push_back(y);
          if (out.size() > 200000) throw Error(Errc::ResourceLimit, "geodesic sweep too long");
        } else if (touching && Ly.clip) {
          touching->push_back(y);
        }
      }
    }
  }
  return out;
}

template <class S> const std::vector<Isometry<S>> &Engine<S>::domainReps(const std::string &label) {
  auto it = reps_.find(label);
  if (it != reps_.end()) return it->second;
  const auto &fam = g_.family(label);
  IsoSet<S> acc;
  for (const auto &b : fam.classReps) {
    if (fam.pointType) {
      auto [z, h] = reduce(toCx(fixedSet(b).point()));
      Isometry<S> b1 = conjugate(h, b);
      for (const auto &k : near_)
        if (inDomain(recip::apply(k, z), kOnSide)) acc.insert(conjugate(k, b1));
    } else {
      std::vector<Isometry<S>> touching;
      auto V = sweep(moveIntoDomain(b), &touching);
      acc.insert(V.begin(), V.end());
      acc.insert(touching.begin(), touching.end());
    }
  }
  return reps_[label] = std::vector<Isometry<S>>(acc.begin(), acc.end());
}

template <class S> long double Engine<S>::reach(const std::string &label) {
  auto it = reach_.find(label);
  if (it != reach_.end()) return it->second;
  long double r = 0;
  Cx o = g_.basepoint;
  for (const auto &x : domainReps(label)) {
    if (!x.rev) {
      r = std::max(r, hypDist(o, toCx(fixedSet(x).point())));
      continue;
    }
    auto L = lineData(x);
    if (!L.clip) continue;
    if (std::isinf(L.clip->sIn) || std::isinf(L.clip->sOut)) {
      r = kInf;
      break;
    }
    r = std::max({r, hypDist(o, L.line.at(L.clip->sIn)), hypDist(o, L.line.at(L.clip->sOut))});
  }
  return reach_[label] = r;
}

template <class S>
std::optional<CanonicalPair<S>> Engine<S>::canonicalPair(const Isometry<S> &a0, const Isometry<S> &b0) const {
  auto Fa = fixedSet(a0), Fb = fixedSet(b0);
  auto sd = setDistance(Fa, Fb);
  if (sd.kind != Separation::Disjoint) return std::nullopt;
  Perpendicular perp = perpendicularLD(toNumeric(Fa), toNumeric(Fb));
  auto [f, k] = reduce(perp.p1);
  Isometry<S> a = conjugate(k, a0), b = conjugate(k, b0);
  std::optional<std::pair<Isometry<S>, Isometry<S>>> best;
  long stab = 0;
  for (const auto &h : near_) {
    if (!inDomain(recip::apply(h, f), kOnSide)) continue;
    Isometry<S> ha = conjugate(h, a), hb = conjugate(h, b);
    if (ha == a && hb == b) ++stab;
    if (!best) {
      best.emplace(ha, hb);
      continue;
    }
    int c = compareIsometry(ha, best->first);
    if (c < 0 || (c == 0 && compareIsometry(hb, best->second) < 0)) best.emplace(ha, hb);
  }
  if (!best || stab == 0) throw Error(Errc::NumericFailure, "pair foot could not be placed in the domain");
  CanonicalPair<S> out{best->first, best->second, sd, {}, mpq_class(1, stab)};
  out.perp = perpendicularLD(toNumeric(fixedSet(out.alpha)), toNumeric(fixedSet(out.beta)));
  return out;
}

template <class S>
std::vector<CanonicalPair<S>> Engine<S>::enumeratePairs(const std::string &I, const std::string &J, long double T) {
  if (!(T > 0)) throw Error(Errc::InvalidParameter, "threshold must be positive");
  const auto &As = domainReps(I);
  const auto &Bs = domainReps(J);
  long double rI = reach(I), rJ = reach(J);
  long double R;
  if (std::isinf(rI) || std::isinf(rJ))
    R = std::max(T + 2 * std::log(std::cosh(T)) + 4, 2 * T + 3);
  else
    R = T + rI + rJ + 1e-6L;
  R += extraRadius;
  auto ball = ballElements(g_, BallParams{R, g_.coxeter ? 1e-9L : 2.0L, 8'000'000});
  IsoSet<S> betaSet;
  for (const auto &x : ball)
    for (const auto &b : Bs) betaSet.insert(conjugate(x, b));
  std::vector<Isometry<S>> betas(betaSet.begin(), betaSet.end());
  betaSet.clear();

  std::vector<std::variant<Cx, QuadLD>> FA;
  for (const auto &a : As) FA.push_back(numericFixed(toMob(a)));

  auto work = [&](std::size_t from, std::size_t to, std::vector<CanonicalPair<S>> &sink) {
    for (std::size_t i = from; i < to; ++i) {
      const auto &b = betas[i];
      auto Fb = numericFixed(toMob(b));
      for (std::size_t j = 0; j < As.size(); ++j) {
        long double d = numericDistance(FA[j], Fb);
        if (d > T + 1e-7L || d < -0.5L) continue;
        auto sd = setDistance(fixedSet(As[j]), fixedSet(b));
        if (sd.kind != Separation::Disjoint || !withinThreshold(sd, T)) continue;
        Perpendicular perp = perpendicularLD(FA[j], Fb);
        if (!inDomain(perp.p1, kOnSide)) continue;
        if (auto cp = canonicalPair(As[j], b)) sink.push_back(std::move(*cp));
      }
    }
  };
  int nw = std::max(1, workers);
  std::vector<std::vector<CanonicalPair<S>>> sinks(nw);
  if (nw == 1) {
    work(0, betas.size(), sinks[0]);
  } else {
    std::vector<std::thread> pool;
    std::size_t chunk = (betas.size() + nw - 1) / nw;
    for (int w = 0; w < nw; ++w) {
      std::size_t from = std::min(betas.size(), w * chunk), to = std::min(betas.size(), from + chunk);
      pool.emplace_back(work, from, to, std::ref(sinks[w]));
    }
    for (auto &t : pool) t.join();
  }
  std::set<CanonicalPair<S>, PairLess<S>> uniq;
  for (auto &s : sinks)
    for (auto &cp : s) uniq.insert(std::move(cp));
  return std::vector<CanonicalPair<S>>(uniq.begin(), uniq.end());
}

template <class S> Trace<S> Engine<S>::trace(const Isometry<S> &gamma) const {
  if (gamma.rev || classify(gamma) != Kind::Loxodromic)
    throw Error(Errc::NotLoxodromic, "conjugacy tracing needs a preserving loxodromic element");
  auto V = sweep(moveIntoDomain(canonicalize(gamma)), nullptr);
  std::sort(V.begin(), V.end(), IsoLess<S>());
  Trace<S> out;
  out.key = V.front();
  for (const auto &x : V) {
    Isometry<S> xi = inverse(x);
    if (compareIsometry(x, out.key) < 0) out.key = x;
    if (compareIsometry(xi, out.key) < 0) out.key = xi;
    auto L = lineData(x);
    Arc<S> arc{x, L.line, *L.clip, 1};
    Cx p = L.line.at(arc.clip.sIn), q = L.line.at(arc.clip.sOut), m = L.line.at((arc.clip.sIn + arc.clip.sOut) / 2);
    auto onP = sidesAt(g_.domain, p, kOnSide), onM = sidesAt(g_.domain, m, kOnSide),
         onQ = sidesAt(g_.domain, q, kOnSide);
    for (int k : onM)
      if (std::count(onP.begin(), onP.end(), k) && std::count(onQ.begin(), onQ.end(), k)) {
        if (!(conjugate(sideInv_[k], x) == x)) arc.weight = 0.5L;
        break;
      }
    out.primitiveLength += arc.weight * arc.clip.length();
    out.arcs.push_back(std::move(arc));
  }
  long double lam = translationLength(gamma).lambda;
  out.power = std::lround(lam / out.primitiveLength);
  if (out.power < 1 || std::fabs(lam - out.power * out.primitiveLength) > 1e-6L * std::max(1.0L, lam))
    throw Error(Errc::NumericFailure, "traced closed geodesic does not match the translation length");
  return out;
}

template <class S>
std::vector<ConjugacyGroup<S>> Engine<S>::groupByConjugacy(const std::vector<CanonicalPair<S>> &pairs) const {
  std::vector<Isometry<S>> keys(pairs.size());
  auto work = [&](std::size_t from, std::size_t to) {
    for (std::size_t i = from; i < to; ++i) keys[i] = trace(compose(pairs[i].beta, pairs[i].alpha)).key;
  };
  int nw = std::max(1, workers);
  if (nw == 1 || pairs.size() < 8) {
    work(0, pairs.size());
  } else {
    std::vector<std::thread> pool;
    std::size_t chunk = (pairs.size() + nw - 1) / nw;
    for (int w = 0; w < nw; ++w) {
      std::size_t from = std::min(pairs.size(), w * chunk), to = std::min(pairs.size(), from + chunk);
      pool.emplace_back(work, from, to);
    }
    for (auto &t : pool) t.join();
  }
  std::map<Isometry<S>, ConjugacyGroup<S>, IsoLess<S>> groups;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    auto it = groups.find(keys[i]);
    if (it == groups.end()) it = groups.emplace(keys[i], ConjugacyGroup<S>{keys[i], {}, 0}).first;
    it->second.members.push_back(i);
    it->second.mult += pairs[i].mult;
  }
  std::vector<ConjugacyGroup<S>> out;
  for (auto &kv : groups) out.push_back(std::move(kv.second));
  return out;
}

// ---------------------------------------------------------------- free functions

template <class S> std::pair<Cx, Isometry<S>> reduceToDomain(const GroupPreset<S> &g, Cx z) {
  return Engine<S>(g).reduce(z);
}

template <class S> bool isMember(const GroupPreset<S> &g, const Isometry<S> &x) { return Engine<S>(g).isMember(x); }

template <class S>
std::vector<CanonicalPair<S>> enumeratePairs(const GroupPreset<S> &g, const std::string &I, const std::string &J,
                                             long double T) {
  return Engine<S>(g).enumeratePairs(I, J, T);
}

template <class S>
std::vector<ConjugacyGroup<S>> groupByConjugacy(const GroupPreset<S> &g, const std::vector<CanonicalPair<S>> &pairs) {
  return Engine<S>(g).groupByConjugacy(pairs);
}

template <class S> bool primitivityTest(const GroupPreset<S> &g, const Isometry<S> &gamma) {
  return Engine<S>(g).primitive(gamma);
}

#define RECIP_INSTANTIATE(S)                                                                                           \
  template class Engine<S>;                                                                                            \
  template GeoLine lineOf(const Isometry<S> &);                                                                        \
  template std::optional<Clip> clipLine(const Domain<S> &, const GeoLine &);                                          \
  template std::vector<Isometry<S>> ballElements(const GroupPreset<S> &, const BallParams &);                         \
  template bool auditBall(const GroupPreset<S> &, const std::vector<Isometry<S>> &, long double);                     \
  template std::pair<Cx, Isometry<S>> reduceToDomain(const GroupPreset<S> &, Cx);                                     \
  template bool isMember(const GroupPreset<S> &, const Isometry<S> &);                                                \
  template std::vector<CanonicalPair<S>> enumeratePairs(const GroupPreset<S> &, const std::string &,                  \
                                                        const std::string &, long double);                            \
  template std::vector<ConjugacyGroup<S>> groupByConjugacy(const GroupPreset<S> &,                                    \
                                                           const std::vector<CanonicalPair<S>> &);                    \
  template bool primitivityTest(const GroupPreset<S> &, const Isometry<S> &);

RECIP_INSTANTIATE(AlgebraicInt)
RECIP_INSTANTIATE(Real)

} // namespace recip
