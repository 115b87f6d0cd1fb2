#pragma once

#include "recip/groups.hpp"

#include <gmpxx.h>

#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace recip {

struct BallParams {
  long double R = 1;
  long double slack = 2.0L;
  std::size_t cap = 4'000'000;
};

// Oriented geodesic from u to v (v may be +inf); s is signed arclength from the
// point nearest i in the normalized picture.
struct GeoLine {
  long double u = 0, v = 0;
  MobLD toAxis, fromAxis;
  static GeoLine through(long double u, long double v);
  Cx at(long double s) const { return fromAxis(Cx(0, std::exp(s))); }
  long double param(Cx z) const { return std::log(std::abs(toAxis(z))); }
};

struct Clip {
  long double sIn, sOut;
  long double length() const { return sOut - sIn; }
};

// Axis of a preserving loxodromic (oriented) or wall of a reflection.
template <class S> GeoLine lineOf(const Isometry<S> &g);

// Part of the line inside the closed domain, or nothing.
template <class S> std::optional<Clip> clipLine(const Domain<S> &D, const GeoLine &L);

template <class S> struct CanonicalPair {
  Isometry<S> alpha, beta;
  SetDistance<S> dist;
  Perpendicular perp;
  mpq_class mult;
  std::string key() const { return serialize(alpha) + "|" + serialize(beta); }
};

template <class S> struct Arc {
  Isometry<S> delta;
  GeoLine line;
  Clip clip;
  long double weight = 1; // 1/2 for arcs along a side shared by two distinct lifts
};

template <class S> struct Trace {
  std::vector<Arc<S>> arcs;
  Isometry<S> key;       // least canonical form over the lifts and their inverses
  long double primitiveLength = 0;
  long power = 1;        // lambda / primitiveLength
};

template <class S> struct ConjugacyGroup {
  Isometry<S> key;
  std::vector<std::size_t> members;
  mpq_class mult;
};

// Holds the per-preset caches needed by every enumeration routine.
template <class S> class Engine {
public:
  explicit Engine(const GroupPreset<S> &g);

  const GroupPreset<S> &preset() const { return g_; }
  const std::vector<Isometry<S>> &nearBall() const { return near_; }
  long double nearRadius() const { return nearR_; }
  const Isometry<S> &identity() const { return id_; }

  bool inDomain(Cx z, long double tol = 1e-10L) const;
  std::pair<Cx, Isometry<S>> reduce(Cx z) const;
  bool isMember(const Isometry<S> &g) const;
  long double displacement(const Isometry<S> &g) const;

  // conjugates of the family whose fixed sets meet the closed domain
  const std::vector<Isometry<S>> &domainReps(const std::string &label);
  // largest basepoint distance over the domain part of those fixed sets
  long double reach(const std::string &label);

  std::vector<CanonicalPair<S>> enumeratePairs(const std::string &I, const std::string &J, long double T);
  // (alpha, beta) to its orbit representative; nullopt if the foot cannot be placed in the domain
  std::optional<CanonicalPair<S>> canonicalPair(const Isometry<S> &a, const Isometry<S> &b) const;

  Trace<S> trace(const Isometry<S> &gamma) const;
  std::vector<ConjugacyGroup<S>> groupByConjugacy(const std::vector<CanonicalPair<S>> &pairs) const;
  bool primitive(const Isometry<S> &gamma) const { return trace(gamma).power == 1; }

  int workers = 1;
  // added to the pair-enumeration ball radius (stability checks)
  long double extraRadius = 0;

private:
  struct Line {
    Isometry<S> g;
    GeoLine line;
    std::optional<Clip> clip;
  };
  Line lineData(const Isometry<S> &g) const;
  std::vector<Isometry<S>> conjugatesThrough(const Isometry<S> &g, Cx x) const;
  std::vector<Isometry<S>> sweep(const Isometry<S> &start, std::vector<Isometry<S>> *touching) const;
  Isometry<S> moveIntoDomain(const Isometry<S> &g) const;

  const GroupPreset<S> &g_;
  Isometry<S> id_;
  std::vector<Isometry<S>> sideInv_;
  std::vector<Isometry<S>> near_;
  long double nearR_ = 0;
  long double cuspCenter_ = 0;
  std::map<std::string, std::vector<Isometry<S>>> reps_;
  std::map<std::string, long double> reach_;
};

template <class S> std::vector<Isometry<S>> ballElements(const GroupPreset<S> &g, const BallParams &p);
// every element's neighbours with smaller displacement are present
template <class S> bool auditBall(const GroupPreset<S> &g, const std::vector<Isometry<S>> &ball, long double R);
template <class S> std::pair<Cx, Isometry<S>> reduceToDomain(const GroupPreset<S> &g, Cx z);
template <class S> bool isMember(const GroupPreset<S> &g, const Isometry<S> &x);
template <class S>
std::vector<CanonicalPair<S>> enumeratePairs(const GroupPreset<S> &g, const std::string &I, const std::string &J,
                                             long double T);
template <class S>
std::vector<ConjugacyGroup<S>> groupByConjugacy(const GroupPreset<S> &g, const std::vector<CanonicalPair<S>> &pairs);
template <class S> bool primitivityTest(const GroupPreset<S> &g, const Isometry<S> &gamma);

// cosh^2 d <= cosh^2 T, certified in exact mode
template <class S> bool withinThreshold(const SetDistance<S> &d, long double T);

extern template class Engine<AlgebraicInt>;
extern template class Engine<Real>;

} // namespace recip
