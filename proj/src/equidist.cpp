#include "recip/equidist.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <thread>

namespace recip {

namespace {

constexpr long double kInf = std::numeric_limits<long double>::infinity();

std::string num(long double x) {
  std::ostringstream os;
  os << static_cast<double>(x);
  return os.str();
}

long double parseNumber(const std::string &s, const std::string &token) {
  try {
    std::size_t used = 0;
    long double v = std::stold(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception &) {
    throw Error(Errc::InvalidConfiguration, "bad number in partition token '" + token + "'");
  }
}

template <class S> struct IsoCmp {
  bool operator()(const Isometry<S> &a, const Isometry<S> &b) const { return compareIsometry(a, b) < 0; }
};

// weighted length per region of one period, times the power
template <class S>
std::vector<std::vector<long double>> perClassLengths(Engine<S> &E, const std::vector<ReversibleClass<S>> &classes,
                                                      const Partition &part) {
  std::vector<std::vector<long double>> out(classes.size());
  auto work = [&](std::size_t from, std::size_t to) {
    for (std::size_t i = from; i < to; ++i) out[i] = regionLengths(traceArcs(E, classes[i].representative), part);
  };
  int nw = std::max(1, E.workers);
  if (nw == 1 || classes.size() < 8) {
    work(0, classes.size());
  } else {
    std::vector<std::thread> pool;
    std::size_t chunk = (classes.size() + nw - 1) / nw;
    for (int w = 0; w < nw; ++w) {
      std::size_t from = std::min(classes.size(), w * chunk), to = std::min(classes.size(), from + chunk);
      pool.emplace_back(work, from, to);
    }
    for (auto &t : pool) t.join();
  }
  return out;
}

} // namespace

std::vector<long double> crossings(const GeoLine &L, const GenCircle &c, long double sIn, long double sOut) {
  const MobLD &N = L.fromAxis;
  // f(t) for z = N(i t), cleared of the denominator |c i t + d|^2
  long double a2 = c.P * N.a * N.a + c.Q * N.a * N.c + c.U * N.c * N.c;
  long double a1 = c.R * (N.a * N.d - N.b * N.c);
  long double a0 = c.P * N.b * N.b + c.Q * N.b * N.d + c.U * N.d * N.d;
  std::vector<long double> ts;
  long double scale = std::max({std::fabs(a2), std::fabs(a1), std::fabs(a0)});
  if (scale == 0) return {};
  if (std::fabs(a2) <= 1e-18L * scale) {
    if (a1 != 0) ts.push_back(-a0 / a1);
  } else {
    long double disc = a1 * a1 - 4 * a2 * a0;
    if (disc > 0) {
      long double r = std::sqrt(disc);
      long double qq = -0.5L * (a1 + (a1 >= 0 ? r : -r));
      ts.push_back(qq / a2);
      if (qq != 0) ts.push_back(a0 / qq);
    }
  }
  std::vector<long double> out;
  for (long double t : ts) {
    if (!(t > 0)) continue;
    long double s = std::log(t);
    if (s > sIn && s < sOut) out.push_back(s);
  }
  std::sort(out.begin(), out.end());
  return out;
}

int Partition::regionOf(Cx z) const {
  for (std::size_t k = 0; k < regions.size(); ++k)
    if (std::all_of(regions[k].cuts.begin(), regions[k].cuts.end(), [&](const Cut &c) { return c.holds(z); }))
      return static_cast<int>(k);
  return -1;
}

std::vector<GenCircle> Partition::boundaries() const {
  std::vector<GenCircle> out;
  for (const auto &r : regions)
    for (const auto &c : r.cuts) {
      bool dup = std::any_of(out.begin(), out.end(), [&](const GenCircle &o) {
        return o.P == c.c.P && o.Q == c.c.Q && o.R == c.c.R && o.U == c.c.U;
      });
      if (!dup) out.push_back(c.c);
    }
  return out;
}

Partition Partition::whole() { return Partition{{Region{"whole", {}}}}; }

Partition Partition::parse(const std::string &spec) {
  std::vector<Region> carved;
  std::vector<std::pair<GenCircle, long double>> splits;
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, '+')) {
    if (tok.empty()) continue;
    std::vector<std::string> parts;
    std::stringstream ts(tok);
    std::string p;
    while (std::getline(ts, p, ':')) parts.push_back(p);
    const std::string &kind = parts[0];
    if (kind == "whole" && parts.size() == 1) continue;
    if (kind == "cusp" && parts.size() == 2) {
      long double h = parseNumber(parts[1], tok);
      if (!(h > 0)) throw Error(Errc::InvalidConfiguration, "cusp height must be positive");
      carved.push_back(Region{"Im>=" + num(h), {Cut{GenCircle{0, 0, 1, -h}, true}}});
    } else if (kind == "circle" && parts.size() == 3) {
      long double c = parseNumber(parts[1], tok), r = parseNumber(parts[2], tok);
      if (!(r > 0)) throw Error(Errc::InvalidConfiguration, "circle radius must be positive");
      carved.push_back(Region{"|z-" + num(c) + "|<" + num(r), {Cut{GenCircle{1, -2 * c, 0, c * c - r * r}, false}}});
    } else if (kind == "re" && parts.size() == 2) {
      long double c = parseNumber(parts[1], tok);
      splits.push_back({GenCircle{0, 1, 0, -c}, c});
    } else if (kind == "reflect-halves" && parts.size() == 1) {
      splits.push_back({GenCircle{0, 1, 0, 0}, 0});
    } else {
      throw Error(Errc::InvalidConfiguration, "unknown partition token '" + tok + "'");
    }
  }
  Partition out;
  out.regions = carved;
  std::vector<Region> rest{Region{"", {}}};
  for (const auto &[g, c] : splits) {
    std::vector<Region> next;
    for (const auto &r : rest)
      for (bool pos : {false, true}) {
        Region x = r;
        x.name += (x.name.empty() ? "" : ",") + std::string(pos ? "Re>=" : "Re<") + num(c);
        x.cuts.push_back(Cut{g, pos});
        next.push_back(std::move(x));
      }
    rest = std::move(next);
  }
  for (auto &r : rest) {
    if (r.name.empty()) r.name = carved.empty() ? "whole" : "rest";
    out.regions.push_back(std::move(r));
  }
  return out;
}

template <class S> ArcDecomposition<S> traceArcs(const Engine<S> &E, const Isometry<S> &gamma) {
  auto tr = E.trace(gamma);
  ArcDecomposition<S> out;
  out.power = tr.power;
  for (const auto &a : tr.arcs) out.arcs.push_back(ArcPiece<S>{a.delta, a.line, a.clip, a.weight});
  long double period = 0;
  for (const auto &a : out.arcs) period += a.length();
  out.totalLength = out.power * period;

  // follow the geodesic: leave each arc at its exit point and re-enter the domain by a near element
  std::map<Isometry<S>, std::size_t, IsoCmp<S>> index;
  for (std::size_t i = 0; i < out.arcs.size(); ++i) index[out.arcs[i].lift] = i;
  bool halfWeights = std::any_of(out.arcs.begin(), out.arcs.end(), [](const ArcPiece<S> &a) { return a.weight != 1; });
  if (halfWeights || out.arcs.empty()) return out;
  std::vector<std::size_t> order{0};
  std::vector<bool> seen(out.arcs.size(), false);
  seen[0] = true;
  std::size_t cur = 0;
  for (std::size_t step = 0; step < out.arcs.size(); ++step) {
    const auto &a = out.arcs[cur];
    Cx z = a.line.at(a.clip.sOut);
    std::optional<std::size_t> next;
    long double err = 0;
    for (const auto &h : E.nearBall()) {
      Cx hz = recip::apply(h, z);
      if (!E.inDomain(hz, 1e-9L)) continue;
      auto it = index.find(conjugate(h, a.lift));
      if (it == index.end()) continue;
      const auto &b = out.arcs[it->second];
      long double e = std::abs(b.line.at(b.clip.sIn) - hz);
      if (e > 1e-7L * std::max(1.0L, std::abs(hz))) continue;
      if (next && *next != it->second) return out; // ambiguous continuation
      next = it->second;
      err = e;
    }
    if (!next) return out;
    if (*next == 0) {
      if (order.size() != out.arcs.size()) return out;
      out.sequential = true;
      out.closureError = err;
      out.arcs = [&] {
        std::vector<ArcPiece<S>> v;
        for (auto i : order) v.push_back(out.arcs[i]);
        return v;
      }();
      return out;
    }
    if (seen[*next]) return out;
    seen[*next] = true;
    order.push_back(*next);
    cur = *next;
  }
  return out;
}

template <class S> std::vector<long double> regionLengths(const ArcDecomposition<S> &a, const Partition &part) {
  std::vector<long double> out(part.regions.size(), 0);
  auto bounds = part.boundaries();
  for (const auto &arc : a.arcs) {
    std::vector<long double> cuts{arc.clip.sIn, arc.clip.sOut};
    for (const auto &b : bounds)
      for (long double s : crossings(arc.line, b, arc.clip.sIn, arc.clip.sOut)) cuts.push_back(s);
    std::sort(cuts.begin(), cuts.end());
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      long double len = cuts[i + 1] - cuts[i];
      if (len <= 0) continue;
      int k = part.regionOf(arc.line.at((cuts[i] + cuts[i + 1]) / 2));
      if (k < 0) throw Error(Errc::InvalidConfiguration, "partition does not cover the domain");
      out[k] += a.power * arc.weight * len;
    }
  }
  return out;
}

template <class S>
EmpiricalMasses<S> empiricalMasses(Engine<S> &E, const std::vector<ReversibleClass<S>> &classes,
                                   const Partition &part) {
  if (classes.empty()) throw Error(Errc::InvalidParameter, "no classes to measure");
  auto lens = perClassLengths(E, classes, part);
  EmpiricalMasses<S> m;
  m.fractions.assign(part.regions.size(), 0);
  long double sum = 0;
  for (std::size_t i = 0; i < classes.size(); ++i) {
    long double w = static_cast<long double>(classes[i].mult.get_d());
    for (std::size_t k = 0; k < lens[i].size(); ++k) {
      m.fractions[k] += w * lens[i][k];
      sum += w * lens[i][k];
    }
    m.weightedTotal += w * classes[i].lambda;
    m.unweightedTotal += classes[i].lambda;
  }
  for (auto &f : m.fractions) f /= sum;
  return m;
}

template <class S> AreaMasses areaMasses(const Engine<S> &E, const Partition &part, long double tol) {
  const auto &D = E.preset().domain;
  std::set<long double> xs;
  for (const auto &v : D.vertices) xs.insert(v.real());
  for (const auto &s : D.sides)
    if (s.q.vertical()) xs.insert(s.q.endpoints().first);
  if (xs.empty()) throw Error(Errc::InvalidParameter, "domain without vertices");
  long double lo = *xs.begin(), hi = *xs.rbegin();
  for (const auto &b : part.boundaries()) {
    if (b.P == 0 && b.R == 0 && b.Q != 0) xs.insert(-b.U / b.Q);
    if (b.P != 0) {
      long double c = -b.Q / (2 * b.P), r2 = c * c - b.U / b.P;
      if (r2 > 0) {
        xs.insert(c - std::sqrt(r2));
        xs.insert(c + std::sqrt(r2));
      }
    }
  }
  std::vector<long double> grid;
  for (long double x : xs)
    if (x >= lo && x <= hi) grid.push_back(x);
  auto bounds = part.boundaries();

  AreaMasses out;
  out.areas.assign(part.regions.size(), 0);
  for (std::size_t k = 0; k < part.regions.size(); ++k) {
    auto f = [&](long double x) -> long double {
      GeoLine L = GeoLine::through(x, kInf);
      auto c = clipLine(D, L);
      if (!c) return 0;
      std::vector<long double> cuts{c->sIn, c->sOut};
      for (const auto &b : bounds)
        for (long double s : crossings(L, b, c->sIn, c->sOut)) cuts.push_back(s);
      std::sort(cuts.begin(), cuts.end());
      long double acc = 0;
      for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (!(cuts[i + 1] > cuts[i])) continue;
        long double mid = std::isinf(cuts[i + 1]) ? cuts[i] + 1 : (cuts[i] + cuts[i + 1]) / 2;
        if (part.regionOf(L.at(mid)) != static_cast<int>(k)) continue;
        // dy / y^2 along the vertical line, y = e^s
        acc += std::exp(-cuts[i]) - (std::isinf(cuts[i + 1]) ? 0 : std::exp(-cuts[i + 1]));
      }
      return acc;
    };
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
      long double err = 0;
      out.areas[k] += boost::math::quadrature::gauss_kronrod<long double, 61>::integrate(f, grid[i], grid[i + 1], 15,
                                                                                       tol, &err);
      if (err > 1e3L * tol * std::max(1.0L, std::fabs(out.areas[k])))
        throw Error(Errc::NumericFailure, "area integration did not converge");
    }
  }
  for (long double a : out.areas) out.total += a;
  for (long double a : out.areas) out.fractions.push_back(a / out.total);
  return out;
}

template <class S>
DiscrepancyReport discrepancyReport(Engine<S> &E, const std::string &I, const Partition &part,
                                    const std::vector<long double> &Tlist) {
  if (Tlist.empty() || !std::is_sorted(Tlist.begin(), Tlist.end()))
    throw Error(Errc::InvalidParameter, "T list must be nonempty and ascending");
  DiscrepancyReport rep;
  for (const auto &r : part.regions) rep.regionNames.push_back(r.name);
  auto L = listClasses(E, I, I, Tlist.back());
  auto area = areaMasses(E, part);
  auto lens = perClassLengths(E, L.classes, part);
  for (long double T : Tlist) {
    DiscrepancyRow row;
    row.T = T;
    row.area = area.fractions;
    row.empirical.assign(part.regions.size(), 0);
    long double sum = 0;
    for (std::size_t i = 0; i < L.classes.size(); ++i) {
      const auto &c = L.classes[i];
      if (!withinThreshold(L.pairs[c.pairs.front()].dist, T / 2)) continue;
      ++row.classes;
      long double w = static_cast<long double>(c.mult.get_d());
      for (std::size_t k = 0; k < lens[i].size(); ++k) {
        row.empirical[k] += w * lens[i][k];
        sum += w * lens[i][k];
      }
    }
    if (sum > 0)
      for (auto &x : row.empirical) x /= sum;
    for (std::size_t k = 0; k < row.area.size(); ++k)
      row.discrepancy = std::max(row.discrepancy, std::fabs(row.empirical[k] - row.area[k]));
    if (row.classes == 0) row.discrepancy = 1;
    rep.rows.push_back(std::move(row));
  }
  rep.finalIsMin = std::all_of(rep.rows.begin(), rep.rows.end(), [&](const DiscrepancyRow &r) {
    return rep.rows.back().discrepancy <= r.discrepancy;
  });
  return rep;
}

#define RECIP_INSTANTIATE(S)                                                                                           \
  template ArcDecomposition<S> traceArcs(const Engine<S> &, const Isometry<S> &);                                     \
  template std::vector<long double> regionLengths(const ArcDecomposition<S> &, const Partition &);                    \
  template EmpiricalMasses<S> empiricalMasses(Engine<S> &, const std::vector<ReversibleClass<S>> &,                   \
                                              const Partition &);                                                    \
  template AreaMasses areaMasses(const Engine<S> &, const Partition &, long double);                                  \
  template DiscrepancyReport discrepancyReport(Engine<S> &, const std::string &, const Partition &,                   \
                                               const std::vector<long double> &);

RECIP_INSTANTIATE(AlgebraicInt)
RECIP_INSTANTIATE(Real)

} // namespace recip
