#pragma once

#include "recip/enumerate.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace recip {

template <class S> struct ReversibleClass {
  Isometry<S> representative; // beta * alpha for the first contributing pair
  Isometry<S> key;            // conjugacy key
  S traceAbs;
  long double lambda = 0;
  mpq_class mult;
  std::vector<std::size_t> pairs; // indices into ClassList::pairs
  std::optional<bool> primitive;
  Isometry<S> alpha, beta;
};

template <class S> struct ClassList {
  std::string I, J;
  long double T = 0;
  std::vector<CanonicalPair<S>> pairs; // threshold T/2
  std::vector<ReversibleClass<S>> classes;
};

struct CountRow {
  long double T = 0;
  mpq_class N;
  long double halfN = 0;
  std::optional<long double> predicted;
  std::optional<long double> ratio;
};

struct InvariantResult {
  std::string name;
  bool pass = true;
  std::string detail; // first counterexample
};

template <class S>
ClassList<S> listClasses(Engine<S> &E, const std::string &I, const std::string &J, long double T,
                         bool primitivity = false);

// Rows at step, 2 step, ..., Tmax from a single enumeration at Tmax.
template <class S>
std::vector<CountRow> countingTable(Engine<S> &E, const std::string &I, const std::string &J, long double Tmax,
                                    long double step);
template <class S> std::vector<CountRow> countingTable(const GroupPreset<S> &g, const ClassList<S> &list,
                                                       long double Tmax, long double step);

// tamper is applied to the class list before checking (fault injection)
template <class S>
std::vector<InvariantResult> verifyInvariants(Engine<S> &E, const std::string &I, const std::string &J, long double T,
                                              const std::function<void(ClassList<S> &)> &tamper = {});

inline bool allPass(const std::vector<InvariantResult> &r) {
  for (const auto &x : r)
    if (!x.pass) return false;
  return true;
}

} // namespace recip
