#pragma once

#include "recip/hyperbolic.hpp"

#include <optional>
#include <string>
#include <vector>

namespace recip {

// One side of a fundamental polygon: the half-plane inside * q(z) >= 0, and the
// pairing P with P.D the tile across the side.
template <class S> struct DomainSide {
  QuadLD q;
  int inside = 1;
  Isometry<S> pairing;
};

template <class S> struct Domain {
  std::vector<DomainSide<S>> sides;
  std::vector<Cx> vertices; // finite vertices
  bool cusped = false;
  long double cuspWidth = 0; // translation length of the cusp generator
  std::optional<Isometry<S>> cuspShift;

  // index of the first side violated by more than tol, or -1
  int violatedSide(Cx z, long double tol = 1e-13L) const;
  bool contains(Cx z, long double tol = 1e-13L) const { return violatedSide(z, tol) < 0; }
};

template <class S> struct InvolutionFamily {
  std::string label;
  std::vector<Isometry<S>> classReps; // one involution per Gamma-conjugacy class in the family
  bool pointType = true;
  long double sigma = 0; // total skinning mass; infinite for cusped walls
  std::string sigmaForm;
  bool sigmaFinite = true;
};

struct PredictedConstant {
  bool applicable = false;
  long double value = 0;
  std::string form;
  std::string reason;
};

template <class S> struct GroupPreset {
  std::string name;
  int p = 0, q = 0, r = 0;
  const RingContext *ring = nullptr; // exact presets only
  std::vector<Isometry<S>> generators;
  Domain<S> domain;
  Cx basepoint;
  std::vector<InvolutionFamily<S>> families;
  long double area = 0;
  std::string areaForm;
  long eulerNum = 0, eulerDen = 1;
  long double criticalExponent = 1;
  // generated by the side reflections of a polygon containing the basepoint in its interior
  bool coxeter = false;
  // exact relations: words in the generators that must be the identity
  std::vector<std::pair<std::string, Isometry<S>>> relations;

  const InvolutionFamily<S> &family(const std::string &label) const;
  PredictedConstant predictedConstant(const std::string &I, const std::string &J) const;
  bool exactMode() const { return Scalar<S>::exact; }
};

using ExactPreset = GroupPreset<AlgebraicInt>;
using RealPreset = GroupPreset<Real>;

ExactPreset modular();
ExactPreset hecke(int p);
ExactPreset extendedModular();
RealPreset triangle(int p, int q, int r);

// C e^{T/2}; throws unsupported-regime when the constant is flagged.
template <class S> long double predictedCurve(const GroupPreset<S> &g, const std::string &I, const std::string &J,
                                              long double T) {
  auto c = g.predictedConstant(I, J);
  if (!c.applicable) throw Error(Errc::UnsupportedRegime, c.reason);
  return c.value * std::exp(T / 2);
}

// Relations, involution classes, side pairings; returns failure messages.
template <class S> std::vector<std::string> checkPreset(const GroupPreset<S> &g);

// Reflection in the geodesic A|z|^2 + Bx + C = 0 at working precision.
RealIsometry reflectionIn(const Real &A, const Real &B, const Real &C);

} // namespace recip
