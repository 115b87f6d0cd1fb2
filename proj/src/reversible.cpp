#include "recip/reversible.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace recip {

namespace {

template <class S> bool sameCoshSq(const typename Scalar<S>::Frac &a, const typename Scalar<S>::Frac &b) {
  if constexpr (Scalar<S>::exact) {
    return a == b;
  } else {
    Real scale = abs(b) > 1 ? abs(b) : Real(1);
    return abs(a - b) <= Real("1e-20") * scale;
  }
}

template <class S> bool coversAllInvolutions(const GroupPreset<S> &g, const std::string &I, const std::string &J) {
  if (I != J) return false;
  for (const auto &f : g.families)
    if (!f.pointType) return false;
  return I == "I_Gamma" || g.families.size() == 1;
}

} // namespace

template <class S>
ClassList<S> listClasses(Engine<S> &E, const std::string &I, const std::string &J, long double T, bool primitivity) {
  if (!(T > 0)) throw Error(Errc::InvalidParameter, "threshold must be positive");
  ClassList<S> out;
  out.I = I;
  out.J = J;
  out.T = T;
  out.pairs = E.enumeratePairs(I, J, T / 2);
  for (auto &grp : E.groupByConjugacy(out.pairs)) {
    const auto &p0 = out.pairs[grp.members.front()];
    ReversibleClass<S> c;
    c.representative = compose(p0.beta, p0.alpha);
    c.key = grp.key;
    c.traceAbs = c.representative.m.trace();
    if (Scalar<S>::sign(c.traceAbs) < 0) c.traceAbs = -c.traceAbs;
    c.lambda = translationLength(c.representative).lambda;
    c.mult = grp.mult;
    c.pairs = grp.members;
    c.alpha = p0.alpha;
    c.beta = p0.beta;
    if (primitivity) c.primitive = E.primitive(c.representative);
    out.classes.push_back(std::move(c));
  }
  std::sort(out.classes.begin(), out.classes.end(), [](const ReversibleClass<S> &x, const ReversibleClass<S> &y) {
    if (std::fabs(x.lambda - y.lambda) > 1e-12L * std::max(1.0L, x.lambda)) return x.lambda < y.lambda;
    int t = Scalar<S>::sign(x.traceAbs - y.traceAbs);
    if (t != 0) return t < 0;
    return compareIsometry(x.key, y.key) < 0;
  });
  return out;
}

template <class S>
std::vector<CountRow> countingTable(const GroupPreset<S> &g, const ClassList<S> &list, long double Tmax,
                                    long double step) {
  if (!(Tmax > 0) || !(step > 0)) throw Error(Errc::InvalidParameter, "Tmax and step must be positive");
  if (Tmax > list.T * (1 + 1e-15L)) throw Error(Errc::InvalidParameter, "class list does not reach Tmax");
  auto pc = g.predictedConstant(list.I, list.J);
  std::vector<CountRow> rows;
  long n = static_cast<long>(std::floor(Tmax / step + 1e-9L));
  for (long k = 1; k <= n; ++k) {
    CountRow r;
    r.T = k * step;
    for (const auto &c : list.classes)
      if (withinThreshold(list.pairs[c.pairs.front()].dist, r.T / 2)) r.N += c.mult;
    r.halfN = r.N.get_d() / 2;
    if (pc.applicable) {
      r.predicted = pc.value * std::exp(r.T / 2);
      r.ratio = static_cast<long double>(r.N.get_d()) / *r.predicted;
    }
    rows.push_back(r);
  }
  return rows;
}

template <class S>
std::vector<CountRow> countingTable(Engine<S> &E, const std::string &I, const std::string &J, long double Tmax,
                                    long double step) {
  return countingTable(E.preset(), listClasses(E, I, J, Tmax), Tmax, step);
}

template <class S>
std::vector<InvariantResult> verifyInvariants(Engine<S> &E, const std::string &I, const std::string &J, long double T,
                                              const std::function<void(ClassList<S> &)> &tamper) {
  const auto &g = E.preset();
  bool lemma = coversAllInvolutions(g, I, J);
  ClassList<S> L = listClasses(E, I, J, T, lemma);
  if (tamper) tamper(L);
  std::vector<InvariantResult> out;
  auto add = [&](const std::string &name) -> InvariantResult & {
    out.push_back(InvariantResult{name, true, ""});
    return out.back();
  };
  auto fail = [](InvariantResult &r, const std::string &what) {
    if (r.pass) r.detail = what;
    r.pass = false;
  };

  auto &len = add("translation-length");
  for (const auto &c : L.classes) {
    auto tl = translationLength(c.representative);
    for (auto i : c.pairs) {
      const auto &p = L.pairs[i];
      if (!sameCoshSq<S>(tl.coshHalf * tl.coshHalf, p.dist.coshSq) ||
          std::fabs(tl.lambda - 2 * p.dist.d) > 1e-9L * std::max(1.0L, tl.lambda))
        fail(len, serialize(c.representative) + " vs pair " + p.key());
    }
  }

  auto &rev = add("reversal");
  for (const auto &c : L.classes)
    if (!(conjugate(c.alpha, c.representative) == inverse(c.representative)))
      fail(rev, serialize(c.representative));

  auto &tri = add("trichotomy");
  for (const auto &c : L.classes)
    if (Scalar<S>::sign(c.traceAbs - Scalar<S>::constant(c.traceAbs, 2)) <= 0) fail(tri, serialize(c.representative));

  auto &mass = add("mass-conservation");
  mpq_class pairTotal = 0, classTotal = 0;
  for (const auto &p : L.pairs) pairTotal += p.mult;
  for (const auto &c : L.classes) {
    mpq_class s = 0;
    for (auto i : c.pairs) s += L.pairs[i].mult;
    classTotal += c.mult;
    if (s != c.mult) fail(mass, "class " + serialize(c.key) + " mult " + c.mult.get_str() + " != " + s.get_str());
  }
  if (pairTotal != classTotal) fail(mass, "total " + classTotal.get_str() + " != " + pairTotal.get_str());

  auto &sym = add("symmetry");
  if (I != J) {
    auto other = listClasses(E, J, I, T);
    std::map<std::string, mpq_class> a, b;
    for (const auto &c : L.classes) a[serialize(c.key)] += c.mult;
    for (const auto &c : other.classes) b[serialize(c.key)] += c.mult;
    if (a != b) {
      for (const auto &[k, m] : a)
        if (!b.count(k) || b[k] != m) {
          fail(sym, k);
          break;
        }
      if (sym.pass) fail(sym, "extra classes in the swapped list");
    }
  }

  std::set<std::string> keys;
  for (const auto &c : L.classes) keys.insert(serialize(c.key));

  auto &inv = add("inverse-class");
  for (const auto &c : L.classes)
    if (!(E.trace(inverse(c.representative)).key == c.key)) fail(inv, serialize(c.representative));

  auto &odd = add("odd-powers");
  for (const auto &c : L.classes) {
    if (3 * c.lambda > T) continue;
    if (!keys.count(serialize(E.trace(power(c.representative, 3)).key))) fail(odd, serialize(c.representative));
  }

  if (lemma) {
    auto &prim = add("primitive-multiplicity");
    for (const auto &c : L.classes)
      if (c.primitive && *c.primitive && c.mult != 2) fail(prim, serialize(c.representative));
  }
  return out;
}

#define RECIP_INSTANTIATE(S)                                                                                           \
  template ClassList<S> listClasses(Engine<S> &, const std::string &, const std::string &, long double, bool);        \
  template std::vector<CountRow> countingTable(const GroupPreset<S> &, const ClassList<S> &, long double,             \
                                               long double);                                                          \
  template std::vector<CountRow> countingTable(Engine<S> &, const std::string &, const std::string &, long double,    \
                                               long double);                                                          \
  template std::vector<InvariantResult> verifyInvariants(Engine<S> &, const std::string &, const std::string &,       \
                                                         long double, const std::function<void(ClassList<S> &)> &);

RECIP_INSTANTIATE(AlgebraicInt)
RECIP_INSTANTIATE(Real)

} // namespace recip
