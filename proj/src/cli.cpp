#include "recip/cli.hpp"

#include "recip/render.hpp"
#include "recip/treecount.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <iostream>
#include <random>
#include <sstream>
#include <variant>

namespace recip::cli {

namespace {

using nlohmann::ordered_json;

const std::vector<std::string> kCommands = {"count", "list", "pairs", "tree-count", "equidist", "render", "selftest"};

std::string num(long double x) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.10Lg", x);
  return buf;
}

std::string ratString(const mpq_class &q) { return q.get_num().get_str() + "/" + q.get_den().get_str(); }

std::string exactString(const mpq_class &q) { return q.get_den() == 1 ? q.get_num().get_str() : q.get_str(); }

ordered_json scalarJson(const AlgebraicInt &a) {
  ordered_json c = ordered_json::array();
  for (const auto &z : a.coeffs()) c.push_back(z.get_str());
  return c;
}

ordered_json scalarJson(const Real &a) { return Scalar<Real>::str(a); }

template <class S> ordered_json matrixJson(const Isometry<S> &g) {
  ordered_json m;
  m["reversing"] = g.rev;
  m["a"] = scalarJson(g.m.a);
  m["b"] = scalarJson(g.m.b);
  m["c"] = scalarJson(g.m.c);
  m["d"] = scalarJson(g.m.d);
  return m;
}

std::string defaultFamily(const std::string &preset) { return preset == "triangle" ? "I_S" : "I_alpha"; }

std::string defaultFormat(const std::string &cmd) {
  if (cmd == "list" || cmd == "pairs") return "jsonl";
  if (cmd == "render") return "svg";
  return "csv";
}

using AnyPreset = std::variant<ExactPreset, RealPreset>;

AnyPreset makePreset(const RunConfig &c) {
  if (c.preset == "modular") return modular();
  if (c.preset == "hecke") return hecke(c.p);
  if (c.preset == "extended-modular") return extendedModular();
  return triangle(c.p, c.q, c.r);
}

// header lines for CSV outputs
std::string csvHeader(const RunConfig &c) {
  return "# recipgeo " RECIP_VERSION "\n# config: " + c.provenanceLine() + "\n";
}

ordered_json jsonHeader(const RunConfig &c) {
  ordered_json h;
  h["record"] = "header";
  h["version"] = RECIP_VERSION;
  ordered_json cfg;
  for (const auto &[k, v] : c.provenance()) cfg[k] = v;
  h["config"] = cfg;
  return h;
}

void checkThreshold(const RunConfig &c, double T) {
  if (T > c.maxT)
    throw Error(Errc::ResourceLimit, "threshold " + num(T) + " exceeds max-T " + num(c.maxT));
}

template <class S> std::string cmdCount(const RunConfig &c, const GroupPreset<S> &g, std::ostream &err) {
  checkThreshold(c, c.Tmax);
  Engine<S> E(g);
  E.workers = c.workers;
  auto rows = countingTable(E, c.I, c.J, c.Tmax, c.step);
  auto k = g.predictedConstant(c.I, c.J);
  std::string s = csvHeader(c);
  if (k.applicable) {
    s += "# constant: " + k.form + " = " + num(k.value) + "\n";
  } else {
    s += "# warning: no predicted constant: " + k.reason + "\n";
    err << "warning: no predicted constant for " << g.name << ": " << k.reason << "\n";
  }
  s += "T,N,halfN,predicted,ratio\n";
  for (const auto &r : rows) {
    s += num(r.T) + "," + exactString(r.N) + "," + num(r.halfN) + ",";
    s += (r.predicted ? num(*r.predicted) : "") + "," + (r.ratio ? num(*r.ratio) : "") + "\n";
  }
  return s;
}

template <class S> std::string cmdList(const RunConfig &c, const GroupPreset<S> &g, bool pairsView) {
  checkThreshold(c, c.Tmax);
  Engine<S> E(g);
  E.workers = c.workers;
  auto L = listClasses(E, c.I, c.J, c.Tmax, c.primitivity);
  std::string s;
  if (L.classes.empty()) return s;
  s += jsonHeader(c).dump() + "\n";
  if (!pairsView) {
    for (std::size_t i = 0; i < L.classes.size(); ++i) {
      const auto &k = L.classes[i];
      ordered_json r;
      r["record"] = "class";
      r["index"] = i;
      r["representative"] = matrixJson(k.representative);
      r["key"] = serialize(k.key);
      r["traceAbs"] = scalarJson(k.traceAbs);
      r["lambda"] = num(k.lambda);
      r["mult"] = ratString(k.mult);
      ordered_json keys = ordered_json::array();
      for (auto pi : k.pairs) keys.push_back(L.pairs[pi].key());
      r["pairs"] = keys;
      if (k.primitive) r["primitive"] = *k.primitive;
      s += r.dump() + "\n";
    }
    return s;
  }
  std::vector<long> owner(L.pairs.size(), -1);
  for (std::size_t i = 0; i < L.classes.size(); ++i)
    for (auto pi : L.classes[i].pairs) owner[pi] = static_cast<long>(i);
  for (std::size_t i = 0; i < L.pairs.size(); ++i) {
    const auto &pr = L.pairs[i];
    ordered_json r;
    r["record"] = "pair";
    r["index"] = i;
    r["key"] = pr.key();
    r["alpha"] = matrixJson(pr.alpha);
    r["beta"] = matrixJson(pr.beta);
    r["distance"] = num(pr.dist.d);
    r["mult"] = ratString(pr.mult);
    r["class"] = owner[i];
    s += r.dump() + "\n";
  }
  return s;
}

template <class S> std::string cmdEquidist(const RunConfig &c, const GroupPreset<S> &g) {
  for (double T : c.Tlist) checkThreshold(c, T);
  Engine<S> E(g);
  E.workers = c.workers;
  auto P = Partition::parse(c.partition);
  std::vector<long double> Ts(c.Tlist.begin(), c.Tlist.end());
  auto R = discrepancyReport(E, c.I, P, Ts);
  std::string s = csvHeader(c);
  s += "T,classes";
  for (const auto &n : R.regionNames) s += ",empirical[" + n + "]";
  for (const auto &n : R.regionNames) s += ",area[" + n + "]";
  s += ",discrepancy\n";
  for (const auto &row : R.rows) {
    s += num(row.T) + "," + std::to_string(row.classes);
    for (auto x : row.empirical) s += "," + num(x);
    for (auto x : row.area) s += "," + num(x);
    s += "," + num(row.discrepancy) + "\n";
  }
  return s;
}

template <class S> std::string cmdRender(const RunConfig &c, const GroupPreset<S> &g) {
  checkThreshold(c, c.Tmax);
  Engine<S> E(g);
  E.workers = c.workers;
  auto L = listClasses(E, c.I, c.J, c.Tmax);
  std::vector<ArcDecomposition<S>> arcs;
  std::vector<std::string> labels;
  for (const auto &k : L.classes) {
    arcs.push_back(traceArcs(E, k.representative));
    labels.push_back("l=" + num(k.lambda));
  }
  RenderOptions o = defaultView(g);
  o.width = c.width;
  o.strokeWidth = c.strokeWidth;
  o.colorSeed = c.colorSeed;
  o.labels = c.labels;
  o.comment = std::string("recipgeo " RECIP_VERSION " ") + c.provenanceLine();
  return renderSVG(g, arcs, o, labels);
}

std::string cmdTreeCount(const RunConfig &c) {
  if (c.n > c.maxTreeN) throw Error(Errc::ResourceLimit, "n exceeds max-tree-n");
  tree::FieldSpec F(c.q);
  std::optional<tree::ConductanceSpec> cond;
  if (!c.conductances.empty()) cond = tree::ConductanceSpec::parse(c.conductances);
  std::string s = csvHeader(c);
  std::string mod;
  for (std::size_t k = 0; k < F.modulus.size(); ++k) mod += (k ? " " : "") + std::to_string(F.modulus[k]);
  s += "# field: q = " + std::to_string(F.q) + ", modulus coefficients (low first) " + mod + "\n";
  s += "# main term: q^(n/2-1)/(q^2-1)\n";
  s += std::string("n,N,main,ratio") + (cond ? ",weighted" : "") + "\n";
  for (int n = 4; n <= c.n; n += 4) {
    mpq_class N = tree::countReversibleTree(F, n), M = tree::treeMainTerm(F.q, n);
    mpq_class ratio = N / M;
    s += std::to_string(n) + "," + exactString(N) + "," + exactString(M) + "," + num(ratio.get_d());
    if (cond) s += "," + num(tree::weightedCount(F, *cond, n));
    s += "\n";
  }
  return s;
}

struct Check {
  std::string name;
  bool pass;
  std::string detail;
};

template <class S>
void invariantSuite(std::vector<Check> &out, const GroupPreset<S> &g, const std::string &I, const std::string &J,
                    long double T, int workers, bool tamper) {
  Engine<S> E(g);
  E.workers = workers;
  std::function<void(ClassList<S> &)> f;
  if (tamper)
    f = [](ClassList<S> &L) {
      if (!L.classes.empty()) L.classes.back().mult += 1;
    };
  std::string label = g.name;
  if (g.name == "hecke") label += "(" + std::to_string(g.p) + ")";
  if (g.name == "triangle") label += "(" + std::to_string(g.p) + "," + std::to_string(g.q) + "," + std::to_string(g.r) + ")";
  for (const auto &r : verifyInvariants(E, I, J, T, f))
    out.push_back({label + " " + I + "/" + J + " T=" + num(T) + " " + r.name, r.pass, r.detail});
  for (const auto &m : checkPreset(g)) out.push_back({label + " preset", false, m});
}

std::string cmdSelftest(const RunConfig &c, int &code) {
  std::vector<Check> checks;
  invariantSuite(checks, modular(), "I_alpha", "I_alpha", 9.0L, c.workers, c.injectFault);
  for (int p : {4, 5, 6, 7}) invariantSuite(checks, hecke(p), "I_Gamma", "I_Gamma", 8.0L, c.workers, false);
  invariantSuite(checks, hecke(6), "I_alpha", "I_beta", 7.0L, c.workers, false);
  invariantSuite(checks, extendedModular(), "I_alpha", "I_beta", 5.0L, c.workers, false);
  invariantSuite(checks, triangle(2, 3, 7), "I_S", "I_S", 5.0L, c.workers, false);

  {
    auto g = modular();
    auto ball = ballElements(g, BallParams{4.0L});
    checks.push_back({"modular ball audit R=4", auditBall(g, ball, 4.0L), ""});
  }
  for (int q : {3, 7}) {
    tree::FieldSpec F(q);
    for (int n : {4, 8}) {
      auto o = tree::pairLevelOracle(F, n);
      mpq_class N = tree::countReversibleTree(F, n);
      checks.push_back({"tree q=" + std::to_string(q) + " n=" + std::to_string(n) + " count vs oracle", N == o.N,
                        "count " + N.get_str() + " oracle " + o.N.get_str()});
    }
    std::mt19937 rng(12345 + q);
    std::uniform_int_distribution<int> coef(0, q - 1);
    int bad = 0, tried = 0;
    std::string first;
    while (tried < 200) {
      // products of unipotents with polynomial entries and the swap
      tree::TMat g = tree::constant(1, 0, 0, 1);
      for (int f = 0; f <= tried % 3; ++f) {
        tree::LaurentPoly t;
        for (int e = 0; e < 3; ++e) t = tree::add(F, t, tree::LaurentPoly::monomial(coef(rng), e));
        g = tree::mul(F, g, tree::TMat{tree::LaurentPoly::monomial(1, 0), t, {}, tree::LaurentPoly::monomial(1, 0)});
        g = tree::mul(F, g, tree::treeAlpha(F));
      }
      if (tree::act(F, g, tree::basepoint()) == tree::basepoint()) continue;
      ++tried;
      auto r = tree::treeLambdaCheck(F, g);
      if ((r.lambda != r.twiceDist || !r.reversal) && !bad++)
        first = "lambda " + std::to_string(r.lambda) + " 2d " + std::to_string(r.twiceDist);
    }
    checks.push_back({"tree q=" + std::to_string(q) + " translation length identity", bad == 0, first});
  }

  std::string s = "# recipgeo " RECIP_VERSION " selftest\n";
  code = Ok;
  for (const auto &ch : checks) {
    s += std::string(ch.pass ? "PASS " : "FAIL ") + ch.name;
    if (!ch.pass) {
      s += "\n  counterexample: " + ch.detail;
      code = InvariantFailure;
    }
    s += "\n";
  }
  return s;
}

int exitFor(Errc e) {
  switch (e) {
  case Errc::ResourceLimit: return ResourceLimitHit;
  case Errc::InvalidParameter:
  case Errc::InvalidConfiguration:
  case Errc::UnsupportedRegime:
  case Errc::InvalidPotential:
  case Errc::Io: return InvalidConfig;
  default: return InvariantFailure;
  }
}

} // namespace

void RunConfig::validate() const {
  auto bad = [](const std::string &m) { throw Error(Errc::InvalidConfiguration, m); };
  if (std::find(kCommands.begin(), kCommands.end(), command) == kCommands.end()) bad("unknown command " + command);
  if (format != defaultFormat(command)) bad(command + " writes " + defaultFormat(command) + ", not " + format);
  if (workers < 1) bad("workers must be >= 1");
  if (precisionBits < 53) bad("precision-bits must be >= 53");
  bool geo = command == "count" || command == "list" || command == "pairs" || command == "render" ||
             command == "equidist";
  if (geo) {
    if (preset != "modular" && preset != "hecke" && preset != "extended-modular" && preset != "triangle")
      bad("unknown preset " + preset);
    if (preset == "hecke" && p < 3) bad("hecke needs --p >= 3");
    if (preset == "triangle" && (p < 2 || q < 2 || r < 2)) bad("triangle needs --p --q --r >= 2");
    if (I.empty() || J.empty()) bad("family labels must be nonempty");
  }
  if (command == "count" || command == "list" || command == "pairs" || command == "render") {
    if (!(Tmax > 0)) bad("--Tmax must be positive");
  }
  if (command == "count" && !(step > 0)) bad("--step must be positive");
  if (command == "equidist") {
    if (Tlist.empty()) bad("--T needs at least one threshold");
    for (std::size_t k = 0; k < Tlist.size(); ++k)
      if (!(Tlist[k] > 0) || (k && !(Tlist[k] > Tlist[k - 1]))) bad("--T must be positive and ascending");
  }
  if (command == "tree-count") {
    if (q < 2) bad("tree-count needs --q");
    if (n < 4 || n % 4 != 0) bad("tree-count needs --n in 4Z, n >= 4");
  }
  if (command == "render" && (width <= 0 || !(strokeWidth > 0))) bad("render width and stroke must be positive");
}

std::vector<std::pair<std::string, std::string>> RunConfig::provenance() const {
  std::vector<std::pair<std::string, std::string>> v{{"command", command}};
  auto add = [&](const std::string &k, const std::string &x) { v.emplace_back(k, x); };
  bool geo = command != "tree-count" && command != "selftest";
  if (geo) {
    add("preset", preset);
    if (preset == "hecke" || preset == "triangle") add("p", std::to_string(p));
    if (preset == "triangle") {
      add("q", std::to_string(q));
      add("r", std::to_string(r));
    }
    add("I", I);
    if (command != "equidist") add("J", J);
  }
  if (command == "count" || command == "list" || command == "pairs" || command == "render") add("Tmax", num(Tmax));
  if (command == "count") add("step", num(step));
  if (command == "equidist") {
    std::string t;
    for (double x : Tlist) t += (t.empty() ? "" : ",") + num(x);
    add("T", t);
    add("partition", partition);
  }
  if (command == "list" || command == "pairs") add("primitivity", primitivity ? "true" : "false");
  if (command == "tree-count") {
    add("q", std::to_string(q));
    add("n", std::to_string(n));
    if (!conductances.empty()) add("conductances", conductances);
  }
  if (command == "render") {
    add("width", std::to_string(width));
    add("stroke-width", num(strokeWidth));
    add("color-seed", std::to_string(colorSeed));
    add("labels", labels ? "true" : "false");
  }
  add("precision-bits", std::to_string(precisionBits));
  add("format", format);
  return v;
}

std::string RunConfig::provenanceLine() const {
  std::string s;
  for (const auto &[k, v] : provenance()) s += (s.empty() ? "" : " ") + k + "=" + v;
  return s;
}

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
  RunConfig c;
  CLI::App app{"Reversible closed geodesics: enumeration, counting, equidistribution and figures", "recipgeo"};
  app.set_version_flag("--version", RECIP_VERSION);
  app.set_config("--config", "", "file of key = value lines mirroring the flags (flags win)");
  app.require_subcommand(1, 1);
  app.add_option("--preset", c.preset, "modular, hecke, extended-modular or triangle")->capture_default_str();
  app.add_option("--p", c.p, "hecke index or first triangle order");
  app.add_option("--q", c.q, "second triangle order, or field size for tree-count");
  app.add_option("--r", c.r, "third triangle order");
  app.add_option("--I", c.I, "first involution family (default I_alpha, I_S for triangle)");
  app.add_option("--J", c.J, "second involution family (default: I)");
  app.add_option("--Tmax", c.Tmax, "length threshold");
  app.add_option("--step", c.step, "row spacing for count")->capture_default_str();
  app.add_option("--T", c.Tlist, "ascending thresholds for equidist")->delimiter(',');
  app.add_option("--n", c.n, "largest tree translation length, in 4Z");
  app.add_option("--precision-bits", c.precisionBits, "certified evaluation precision")
      ->envname("RECIPGEO_PRECISION_BITS")
      ->capture_default_str();
  app.add_option("--workers", c.workers, "worker threads")->capture_default_str();
  app.add_option("--format", c.format, "csv, jsonl or svg (fixed by the command)");
  app.add_option("-o,--output", c.output, "output path (default stdout)");
  app.add_flag("--primitivity", c.primitivity, "report primitivity of each class");
  app.add_option("--conductances", c.conductances, "comma list of edge conductances for tree-count");
  app.add_option("--partition", c.partition, "equidist partition")->capture_default_str();
  app.add_flag("--labels", c.labels, "label rendered classes");
  app.add_option("--color-seed", c.colorSeed, "palette shift for render");
  app.add_option("--width", c.width, "render width in pixels")->capture_default_str();
  app.add_option("--stroke-width", c.strokeWidth, "render stroke width")->capture_default_str();
  app.add_option("--max-T", c.maxT, "refuse larger thresholds (resource limit)")->capture_default_str();
  app.add_option("--max-tree-n", c.maxTreeN, "refuse larger tree n (resource limit)")->capture_default_str();
  app.add_flag("--inject-fault", c.injectFault, "selftest: corrupt one class list")->group("");
  app.add_subcommand("count", "counting function table (csv)")->fallthrough();
  app.add_subcommand("list", "one record per class (jsonl)")->fallthrough();
  app.add_subcommand("pairs", "one record per canonical pair (jsonl)")->fallthrough();
  app.add_subcommand("tree-count", "counting on the tree quotient (csv)")->fallthrough();
  app.add_subcommand("equidist", "discrepancy table (csv)")->fallthrough();
  app.add_subcommand("render", "figure of the classes (svg)")->fallthrough();
  app.add_subcommand("selftest", "run the invariant suites")->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e, out, err);
    return code == 0 ? Ok : InvalidConfig;
  }

  try {
    c.command = app.get_subcommands().front()->get_name();
    if (c.I.empty()) c.I = defaultFamily(c.preset);
    if (c.J.empty()) c.J = c.I;
    if (c.format.empty()) c.format = defaultFormat(c.command);
    c.validate();
    setDefaultPrecisionBits(c.precisionBits);

    std::string text;
    int code = Ok;
    if (c.command == "tree-count") {
      text = cmdTreeCount(c);
    } else if (c.command == "selftest") {
      text = cmdSelftest(c, code);
    } else {
      AnyPreset g = makePreset(c);
      text = std::visit(
          [&](const auto &pr) -> std::string {
            if (c.command == "count") return cmdCount(c, pr, err);
            if (c.command == "list") return cmdList(c, pr, false);
            if (c.command == "pairs") return cmdList(c, pr, true);
            if (c.command == "equidist") return cmdEquidist(c, pr);
            return cmdRender(c, pr);
          },
          g);
    }
    if (c.output.empty()) out << text;
    else writeFile(c.output, text);
    return code;
  } catch (const Error &e) {
    err << "error: " << e.what() << "\n";
    return exitFor(e.code());
  } catch (const std::exception &e) {
    err << "error: " << e.what() << "\n";
    return InvariantFailure;
  }
}

} // namespace recip::cli
