#include "doctest.h"
#include "recip/reversible.hpp"

#include <cmath>

using namespace recip;

namespace {

bool hasTrace(const ClassList<AlgebraicInt> &L, long t) {
  for (const auto &c : L.classes)
    if (c.traceAbs == AlgebraicInt(c.traceAbs.ctx(), t)) return true;
  return false;
}

} // namespace

TEST_CASE("modular micro-instance") {
  auto g = modular();
  Engine<AlgebraicInt> E(g);
  long double T = 2 * std::acosh(1.5L) + 1e-6L;
  auto L = listClasses(E, "I_alpha", "I_alpha", T, true);
  REQUIRE(L.classes.size() == 1);
  const auto &c = L.classes[0];
  CHECK(c.traceAbs == AlgebraicInt(g.ring, 3));
  CHECK(std::fabs(c.lambda - 2 * std::acosh(1.5L)) < 1e-15L);
  CHECK(c.mult == 2);
  CHECK(c.pairs.size() == 2);
  CHECK(*c.primitive);
  CHECK(L.pairs.size() == 2);
  auto rows = countingTable(g, L, T, T);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].N == 2);
  CHECK(rows[0].halfN == 1);
  CHECK(allPass(verifyInvariants(E, "I_alpha", "I_alpha", T)));
  // below the shortest class everything is empty
  auto rows0 = countingTable(E, "I_alpha", "I_alpha", 1.5L, 0.5L);
  for (const auto &r : rows0) CHECK(r.N == 0);
}

TEST_CASE("counting table is monotone and tracks the predicted curve") {
  auto g = modular();
  Engine<AlgebraicInt> E(g);
  auto rows = countingTable(E, "I_alpha", "I_alpha", 9.0L, 0.5L);
  REQUIRE(rows.size() == 18);
  for (std::size_t k = 1; k < rows.size(); ++k) CHECK(rows[k].N >= rows[k - 1].N);
  REQUIRE(rows.back().ratio);
  CHECK(*rows.back().ratio > 0.65L);
  CHECK(*rows.back().ratio < 1.35L);
  // point-type classes have integer multiplicities
  auto L = listClasses(E, "I_alpha", "I_alpha", 8.0L, true);
  for (const auto &c : L.classes) {
    CHECK(c.mult.get_den() == 1);
    if (*c.primitive) CHECK(c.mult == 2);
  }
}

TEST_CASE("extended modular discrimination") {
  auto g = extendedModular();
  Engine<AlgebraicInt> E(g);
  long double T = 2 * std::acosh(2.0L) + 1e-6L;
  auto ab = listClasses(E, "I_alpha", "I_beta", T);
  auto aa = listClasses(E, "I_alpha", "I_alpha", T);
  CHECK(hasTrace(ab, 4));
  CHECK_FALSE(hasTrace(aa, 4));
  // the tr 4 class is that of (2,1;3,2)
  for (const auto &c : ab.classes)
    if (c.traceAbs == AlgebraicInt(g.ring, 4)) {
      auto x = canonicalize(ExactIsometry{{AlgebraicInt(g.ring, 2), AlgebraicInt(g.ring, 1), AlgebraicInt(g.ring, 3),
                                           AlgebraicInt(g.ring, 2)},
                                          false});
      CHECK(E.trace(x).key == c.key);
    }
  auto aa2 = listClasses(E, "I_alpha", "I_alpha", 4 * std::acosh(2.0L) + 1e-6L);
  CHECK(hasTrace(aa2, 14));
  // no predicted curve for cusped walls
  auto rows = countingTable(g, ab, T, T);
  CHECK_FALSE(rows[0].predicted);
  CHECK(allPass(verifyInvariants(E, "I_alpha", "I_beta", T)));
}

TEST_CASE("hecke invariants") {
  auto g = hecke(6);
  Engine<AlgebraicInt> E(g);
  auto rep = verifyInvariants(E, "I_Gamma", "I_Gamma", 11.0L);
  for (const auto &r : rep) CHECK_MESSAGE(r.pass, r.name << ": " << r.detail);
  auto L = listClasses(E, "I_alpha", "I_alpha", 11.0L);
  CHECK(!L.classes.empty());
  auto mixed = verifyInvariants(E, "I_alpha", "I_beta", 8.0L);
  for (const auto &r : mixed) CHECK_MESSAGE(r.pass, r.name << ": " << r.detail);
  for (int p : {4, 5, 7}) {
    auto h = hecke(p);
    Engine<AlgebraicInt> Eh(h);
    for (const auto &r : verifyInvariants(Eh, "I_Gamma", "I_Gamma", 8.0L)) CHECK_MESSAGE(r.pass, p << " " << r.name);
  }
}

TEST_CASE("fault injection trips mass conservation") {
  auto g = modular();
  Engine<AlgebraicInt> E(g);
  auto rep = verifyInvariants<AlgebraicInt>(E, "I_alpha", "I_alpha", 6.0L, [](ClassList<AlgebraicInt> &L) {
    L.classes.back().mult += 1;
  });
  bool tripped = false;
  for (const auto &r : rep)
    if (r.name == "mass-conservation") {
      tripped = !r.pass;
      CHECK(r.detail.find("class") != std::string::npos);
    } else {
      CHECK(r.pass);
    }
  CHECK(tripped);
}

TEST_CASE("triangle group classes") {
  auto t = triangle(2, 3, 7);
  Engine<Real> E(t);
  auto rep = verifyInvariants(E, "I_S", "I_S", 5.0L);
  for (const auto &r : rep) CHECK_MESSAGE(r.pass, r.name << ": " << r.detail);
  auto L = listClasses(E, "I_S", "I_S", 5.0L);
  CHECK(!L.classes.empty());
  for (const auto &c : L.classes) CHECK(c.lambda <= 5.0L);
  auto t4 = triangle(4, 4, 4);
  Engine<Real> E4(t4);
  for (const auto &r : verifyInvariants(E4, "I_s1", "I_s2", 4.0L)) CHECK_MESSAGE(r.pass, r.name << ": " << r.detail);
}
