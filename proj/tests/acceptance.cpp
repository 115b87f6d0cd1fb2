// Acceptance run: one line per criterion, nonzero exit if any fails.
// Usage: acceptance [k]   (k in 1..10; all when omitted)

#include "recip/cli.hpp"
#include "recip/render.hpp"
#include "recip/treecount.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

using namespace recip;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  double limit = 0; // seconds, 0 for none

  void require(bool ok, const std::string &what) {
    if (!ok) pass = false;
    if (!detail.empty()) detail += "; ";
    detail += (ok ? "" : "FAILED ") + what;
  }
};

std::string fmt(const char *f, double x) {
  char b[64];
  std::snprintf(b, sizeof b, f, x);
  return b;
}

struct CliRun {
  int code;
  std::string out;
};

CliRun cli(std::vector<std::string> args) {
  args.insert(args.begin(), "recipgeo");
  std::vector<const char *> argv;
  for (const auto &a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str()};
}

std::size_t countOf(const std::string &s, const std::string &needle) {
  std::size_t n = 0;
  for (auto p = s.find(needle); p != std::string::npos; p = s.find(needle, p + 1)) ++n;
  return n;
}

bool hasTrace(const ClassList<AlgebraicInt> &L, long t) {
  for (const auto &c : L.classes)
    if (c.traceAbs == AlgebraicInt(c.traceAbs.ctx(), t)) return true;
  return false;
}

Outcome c1() {
  Outcome o;
  o.limit = 1;
  auto g = modular();
  Engine<AlgebraicInt> E(g);
  long double T = 2 * std::acosh(1.5L) + 1e-6L;
  auto L = listClasses(E, "I_alpha", "I_alpha", T);
  o.require(L.classes.size() == 1, "classes " + std::to_string(L.classes.size()));
  if (L.classes.size() == 1) {
    const auto &c = L.classes[0];
    o.require(c.traceAbs == AlgebraicInt(g.ring, 3), "|tr| 3");
    o.require(std::fabs(c.lambda - 2 * std::acosh(1.5L)) < 1e-15L, "lambda 2 arccosh(3/2)");
    o.require(c.mult == 2, "mult " + c.mult.get_str());
  }
  auto p = cli({"pairs", "--Tmax", fmt("%.17g", static_cast<double>(T))});
  std::size_t pairs = countOf(p.out, "\"record\":\"pair\"");
  o.require(p.code == 0 && pairs == 2 && countOf(p.out, "\"mult\":\"1/1\"") == 2, "cmdPairs 2 pairs of mult 1");
  return o;
}

// halfN / ((3/8) e^{T/2}) from one enumeration
Outcome c2() {
  Outcome o;
  o.limit = 10;
  auto g = modular();
  Engine<AlgebraicInt> E(g);
  auto L = listClasses(E, "I_alpha", "I_alpha", 13.0L);
  auto ratioAt = [&](long double T) {
    mpq_class N = 0;
    for (const auto &c : L.classes)
      if (c.lambda <= T) N += c.mult;
    return N.get_d() / 2 / (0.375 * std::exp(static_cast<double>(T) / 2));
  };
  double r9 = ratioAt(9), r13 = ratioAt(13);
  o.require(r13 >= 0.80 && r13 <= 1.20, "ratio(13) = " + fmt("%.5f", r13) + " in [0.80, 1.20]");
  o.require(r9 >= 0.65 && r9 <= 1.35, "ratio(9) = " + fmt("%.5f", r9) + " in [0.65, 1.35]");
  o.require(std::fabs(r13 - 1) <= std::fabs(r9 - 1),
            "|ratio(13)-1| = " + fmt("%.5f", std::fabs(r13 - 1)) + " <= |ratio(9)-1| = " + fmt("%.5f", std::fabs(r9 - 1)));
  return o;
}

Outcome c3() {
  Outcome o;
  o.limit = 90; // 30 per p
  for (int p : {4, 5, 6}) {
    auto t0 = std::chrono::steady_clock::now();
    auto g = hecke(p);
    Engine<AlgebraicInt> E(g);
    auto L = listClasses(E, "I_Gamma", "I_Gamma", 12.0L);
    mpq_class N = 0;
    for (const auto &c : L.classes) N += c.mult;
    double x = 1 - 2.0 / p;
    double C = p % 2 == 0 ? (1 + 2.0 / p) * (1 + 2.0 / p) / (4 * x) : 1 / (4 * x);
    double r = N.get_d() / (C * std::exp(6.0));
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.require(r >= 0.75 && r <= 1.25, "p=" + std::to_string(p) + " ratio " + fmt("%.5f", r));
    o.require(secs < 30, "p=" + std::to_string(p) + " " + fmt("%.1f s", secs));
  }
  return o;
}

Outcome c4() {
  Outcome o;
  auto g = extendedModular();
  Engine<AlgebraicInt> E(g);
  long double T = 2 * std::acosh(2.0L) + 1e-6L;
  auto ab = listClasses(E, "I_alpha", "I_beta", T);
  auto aa = listClasses(E, "I_alpha", "I_alpha", T);
  o.require(hasTrace(ab, 4), "tr 4 in (I_alpha, I_beta)");
  o.require(!hasTrace(aa, 4), "tr 4 absent from (I_alpha, I_alpha)");
  auto aa2 = listClasses(E, "I_alpha", "I_alpha", 4 * std::acosh(2.0L) + 1e-6L);
  bool found = false, square = false;
  for (const auto &c : ab.classes)
    if (c.traceAbs == AlgebraicInt(g.ring, 4)) {
      found = true;
      auto key = E.trace(power(c.representative, 2)).key;
      for (const auto &d : aa2.classes) square |= d.key == key;
    }
  o.require(found && square, "square's class in (I_alpha, I_alpha) at 4 arccosh 2");
  return o;
}

Outcome c5() {
  Outcome o;
  o.limit = 60;
  tree::FieldSpec F(3);
  for (int n : {4, 8}) {
    auto orc = tree::pairLevelOracle(F, n);
    mpq_class N = tree::countReversibleTree(F, n);
    o.require(N == orc.N, "n=" + std::to_string(n) + " N = " + N.get_str() + " oracle " + orc.N.get_str());
    if (n == 4) {
      o.require(orc.centralizer == 8, "|Z(alpha)| = " + std::to_string(orc.centralizer));
      o.require(orc.groupOrder == 24, "|PGL2(F3)| = " + std::to_string(orc.groupOrder));
    }
  }
  mpq_class N20 = tree::countReversibleTree(F, 20);
  double r = N20.get_d() * (9 - 1) / std::pow(3.0, 9);
  o.require(r >= 0.85 && r <= 1.15, "n=20 ratio " + fmt("%.6f", r));
  return o;
}

template <class S> void pairSuite(Outcome &o, const GroupPreset<S> &g, const std::string &I, long double T,
                                  const std::string &label) {
  Engine<S> E(g);
  E.workers = 4;
  auto L = listClasses(E, I, I, T);
  std::size_t bad = 0;
  for (const auto &p : L.pairs) {
    Isometry<S> gamma = compose(p.beta, p.alpha);
    bool ok = conjugate(p.alpha, gamma) == inverse(gamma);
    auto tl = translationLength(gamma);
    if constexpr (Scalar<S>::exact) {
      ok = ok && tl.coshHalf * tl.coshHalf == p.dist.coshSq;
      if (p.dist.coshd) ok = ok && tl.coshHalf == *p.dist.coshd;
    } else {
      ok = ok && abs(tl.coshHalf * tl.coshHalf - p.dist.coshSq) <= Real("1e-20");
      if (p.dist.coshd) ok = ok && abs(tl.coshHalf - *p.dist.coshd) <= Real("1e-20");
    }
    bad += !ok;
  }
  o.require(bad == 0 && !L.pairs.empty(),
            label + " " + std::to_string(L.pairs.size()) + " pairs, " + std::to_string(bad) + " failures");
}

Outcome c6() {
  Outcome o;
  pairSuite(o, modular(), "I_alpha", 13.0L, "modular T<=13");
  for (int p : {4, 5, 6, 7}) pairSuite(o, hecke(p), "I_Gamma", 11.0L, "hecke(" + std::to_string(p) + ") T<=11");
  pairSuite(o, triangle(2, 3, 7), "I_S", 8.0L, "triangle(2,3,7) T<=8");
  int done = 0, bad = 0;
  for (int q : {3, 7}) {
    tree::FieldSpec F(q);
    std::mt19937 rng(77 + q);
    std::uniform_int_distribution<int> coef(0, q - 1), unit(1, q - 1);
    for (int k = 0; k < 500;) {
      tree::TMat g = tree::constant(1, 0, 0, 1);
      for (int f = 0; f <= k % 4; ++f) {
        tree::LaurentPoly t;
        for (int e = 0; e < 3; ++e) t = tree::add(F, t, tree::LaurentPoly::monomial(coef(rng), e));
        g = tree::mul(F, g, tree::TMat{tree::LaurentPoly::monomial(1, 0), t, {}, tree::LaurentPoly::monomial(1, 0)});
        g = tree::mul(F, g, tree::constant(0, 1, unit(rng), 0));
      }
      if (tree::act(F, g, tree::basepoint()) == tree::basepoint()) continue;
      auto r = tree::treeLambdaCheck(F, g);
      bad += r.lambda != r.twiceDist || !r.reversal;
      ++k;
      ++done;
    }
  }
  o.require(bad == 0, std::to_string(done) + " tree elements, " + std::to_string(bad) + " failures");
  return o;
}

template <class S>
void massSuite(Outcome &o, const GroupPreset<S> &g, const std::string &I, const std::string &J,
               const std::vector<long double> &Ts, const std::string &label) {
  Engine<S> E(g);
  E.workers = 4;
  for (long double T : Ts)
    for (const auto &r : verifyInvariants(E, I, J, T))
      if (r.name == "mass-conservation" || r.name == "symmetry")
        o.require(r.pass, label + " T=" + fmt("%g", static_cast<double>(T)) + " " + r.name +
                              (r.pass ? "" : " (" + r.detail + ")"));
}

Outcome c7() {
  Outcome o;
  massSuite(o, modular(), "I_alpha", "I_alpha", {5, 9, 13}, "modular");
  for (int p : {4, 5, 6, 7}) {
    massSuite(o, hecke(p), "I_Gamma", "I_Gamma", {6, 9}, "hecke(" + std::to_string(p) + ")");
    if (p % 2 == 0) massSuite(o, hecke(p), "I_alpha", "I_beta", {6, 9}, "hecke(" + std::to_string(p) + ") mixed");
  }
  massSuite(o, extendedModular(), "I_alpha", "I_beta", {4, 5}, "extended-modular");
  massSuite(o, triangle(2, 3, 7), "I_S", "I_S", {4, 6}, "triangle(2,3,7)");
  massSuite(o, triangle(2, 3, 7), "I_s1", "I_s2", {4, 6}, "triangle(2,3,7) mixed");
  // collapse the per-check lines into a count
  std::size_t fails = countOf(o.detail, "FAILED");
  std::size_t checks = countOf(o.detail, "; ") + 1;
  if (fails == 0) o.detail = std::to_string(checks) + " exact checks";
  return o;
}

Outcome c8() {
  Outcome o;
  auto g = modular();
  const RingContext *Z = g.ring;
  for (long double R : {1.0L, 2.0L, 3.0L, 4.0L, 5.0L, 6.0L}) {
    std::set<std::string> oracle, got;
    long double bound = 2 * std::cosh(R);
    long m = static_cast<long>(std::sqrt(bound)) + 1;
    for (long a = -m; a <= m; ++a)
      for (long b = -m; b <= m; ++b)
        for (long c = -m; c <= m; ++c)
          for (long d = -m; d <= m; ++d) {
            if (a * d - b * c != 1 || a * a + b * b + c * c + d * d > bound) continue;
            oracle.insert(serialize(canonicalize(
                ExactIsometry{{AlgebraicInt(Z, a), AlgebraicInt(Z, b), AlgebraicInt(Z, c), AlgebraicInt(Z, d)}, false})));
          }
    for (const auto &x : ballElements(g, BallParams{R})) got.insert(serialize(x));
    o.require(got == oracle, "R=" + fmt("%g", static_cast<double>(R)) + " " + std::to_string(got.size()) + " elements");
  }
  return o;
}

Outcome c9() {
  Outcome o;
  auto g = modular();
  Engine<AlgebraicInt> E(g);
  auto P = Partition::parse("cusp:2+reflect-halves");
  auto R = discrepancyReport(E, "I_alpha", P, {9, 13});
  double d9 = static_cast<double>(R.rows[0].discrepancy), d13 = static_cast<double>(R.rows[1].discrepancy);
  o.require(d13 <= d9, "D(13) = " + fmt("%.5f", d13) + " <= D(9) = " + fmt("%.5f", d9));
  o.require(d13 <= 0.10, "D(13) = " + fmt("%.5f", d13) + " <= 0.10");
  double area = static_cast<double>(areaMasses(E, Partition::whole()).total);
  o.require(std::fabs(area - std::numbers::pi / 3) <= 1e-6, "area " + fmt("%.10f", area) + " = pi/3");
  return o;
}

Outcome c10() {
  Outcome o;
  auto g = hecke(6);
  for (int T : {11, 13}) {
    std::string Ts = std::to_string(T);
    auto list = cli({"list", "--preset", "hecke", "--p", "6", "--I", "I_alpha", "--Tmax", Ts});
    std::size_t classes = countOf(list.out, "\"record\":\"class\"");
    auto a = cli({"render", "--preset", "hecke", "--p", "6", "--I", "I_alpha", "--Tmax", Ts});
    auto b = cli({"render", "--preset", "hecke", "--p", "6", "--I", "I_alpha", "--Tmax", Ts, "--workers", "4"});
    std::size_t drawn = countOf(a.out, "class=\"geodesic\"");
    o.require(a.code == 0 && drawn == classes && classes > 0,
              "T=" + Ts + " " + std::to_string(drawn) + " drawn, " + std::to_string(classes) + " listed");
    o.require(a.out == b.out && a.out == cli({"render", "--preset", "hecke", "--p", "6", "--Tmax", Ts}).out,
              "T=" + Ts + " byte-identical across runs and workers");
    // library output against the frozen snapshot
    Engine<AlgebraicInt> E(g);
    E.workers = 3;
    auto L = listClasses(E, "I_alpha", "I_alpha", static_cast<long double>(T));
    std::vector<ArcDecomposition<AlgebraicInt>> arcs;
    for (const auto &c : L.classes) arcs.push_back(traceArcs(E, c.representative));
    std::ifstream f(RECIP_GOLDEN_DIR "/hecke6_T" + Ts + ".svg", std::ios::binary);
    std::ostringstream golden;
    golden << f.rdbuf();
    o.require(!golden.str().empty() && renderSVG(g, arcs, defaultView(g)) == golden.str(), "T=" + Ts + " golden snapshot");
  }
  return o;
}

} // namespace

int main(int argc, char **argv) {
  std::vector<std::function<Outcome()>> all{c1, c2, c3, c4, c5, c6, c7, c8, c9, c10};
  std::vector<int> which;
  if (argc > 1) {
    int k = std::atoi(argv[1]);
    if (k < 1 || k > 10) {
      std::fprintf(stderr, "criterion must be 1..10\n");
      return 2;
    }
    which.push_back(k);
  } else {
    for (int k = 1; k <= 10; ++k) which.push_back(k);
  }
  int failed = 0;
  for (int k : which) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = all[k - 1]();
    } catch (const std::exception &e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (o.limit > 0 && secs >= o.limit) {
      o.pass = false;
      o.detail += "; FAILED runtime limit " + fmt("%g s", o.limit);
    }
    std::printf("criterion %2d: %s  %s (%.2f s)\n", k, o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed ? 1 : 0;
}
