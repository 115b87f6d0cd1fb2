#pragma once

#include "recip/reversible.hpp"

#include <string>
#include <vector>

namespace recip {

// P|z|^2 + Q Re z + R Im z + U = 0
struct GenCircle {
  long double P = 0, Q = 0, R = 0, U = 0;
  long double value(Cx z) const { return P * std::norm(z) + Q * z.real() + R * z.imag() + U; }
};

// arclength parameters in (sIn, sOut) where the line meets the circle, ascending
std::vector<long double> crossings(const GeoLine &L, const GenCircle &c, long double sIn, long double sOut);

// Regions are tried in order; a point belongs to the first region whose cuts all hold.
struct Cut {
  GenCircle c;
  bool positive = true; // c.value(z) >= 0 when true, < 0 otherwise
  bool holds(Cx z) const { return positive ? c.value(z) >= 0 : c.value(z) < 0; }
};

struct Region {
  std::string name;
  std::vector<Cut> cuts;
};

struct Partition {
  std::vector<Region> regions;

  int regionOf(Cx z) const;
  std::vector<GenCircle> boundaries() const;

  static Partition whole();
  // '+'-separated tokens: cusp:h, circle:c:r (carved out in order), re:c, reflect-halves (split the rest)
  static Partition parse(const std::string &spec);
};

template <class S> struct ArcPiece {
  Isometry<S> lift;
  GeoLine line;
  Clip clip;
  long double weight = 1;
  long double length() const { return weight * clip.length(); }
};

template <class S> struct ArcDecomposition {
  std::vector<ArcPiece<S>> arcs; // one period of the primitive geodesic
  long power = 1;
  long double totalLength = 0; // power * sum of weighted arc lengths
  bool sequential = false;     // arcs are in the order the geodesic visits them
  long double closureError = 0;
};

// Lifts of the class through the closed domain, chained along the geodesic by the side pairings.
template <class S> ArcDecomposition<S> traceArcs(const Engine<S> &E, const Isometry<S> &gamma);

// weighted length of each region, scaled by the power
template <class S> std::vector<long double> regionLengths(const ArcDecomposition<S> &a, const Partition &part);

template <class S> struct EmpiricalMasses {
  std::vector<long double> fractions;
  long double weightedTotal = 0;   // sum of mult * lambda
  long double unweightedTotal = 0; // sum of lambda
};

template <class S>
EmpiricalMasses<S> empiricalMasses(Engine<S> &E, const std::vector<ReversibleClass<S>> &classes,
                                   const Partition &part);

struct AreaMasses {
  std::vector<long double> areas;
  std::vector<long double> fractions;
  long double total = 0;
};

template <class S> AreaMasses areaMasses(const Engine<S> &E, const Partition &part, long double tol = 1e-12L);

struct DiscrepancyRow {
  long double T = 0;
  std::size_t classes = 0;
  std::vector<long double> empirical;
  std::vector<long double> area;
  long double discrepancy = 0;
};

struct DiscrepancyReport {
  std::vector<std::string> regionNames;
  std::vector<DiscrepancyRow> rows;
  bool finalIsMin = false;
};

template <class S>
DiscrepancyReport discrepancyReport(Engine<S> &E, const std::string &I, const Partition &part,
                                    const std::vector<long double> &Tlist);

} // namespace recip
