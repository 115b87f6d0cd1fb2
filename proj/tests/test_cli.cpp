#include "doctest.h"
#include "recip/cli.hpp"

#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "recipgeo");
  std::vector<const char *> argv;
  for (const auto &a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = recip::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> dataLines(const std::string &s) {
  std::vector<std::string> v;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);)
    if (!l.empty() && l[0] != '#') v.push_back(l);
  return v;
}

std::vector<std::string> split(const std::string &s, char d) {
  std::vector<std::string> v;
  std::istringstream in(s);
  for (std::string f; std::getline(in, f, d);) v.push_back(f);
  if (!s.empty() && s.back() == d) v.push_back("");
  return v;
}

std::vector<nlohmann::json> records(const std::string &s, const std::string &kind) {
  std::vector<nlohmann::json> v;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) {
    auto j = nlohmann::json::parse(l);
    if (j["record"] == kind) v.push_back(j);
  }
  return v;
}

std::string slurp(const std::string &path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

const std::string kMicro = "2.6339"; // just above 2 arccosh(3/2)

} // namespace

TEST_CASE("count table") {
  auto r = run({"count", "--preset", "modular", "--I", "I_alpha", "--J", "I_alpha", "--Tmax", "13", "--step", "1"});
  REQUIRE(r.code == 0);
  auto rows = dataLines(r.out);
  REQUIRE(rows.size() == 14);
  CHECK(rows[0] == "T,N,halfN,predicted,ratio");
  CHECK(r.out.find("# recipgeo " RECIP_VERSION) == 0);
  CHECK(r.out.find("# config: command=count preset=modular I=I_alpha J=I_alpha Tmax=13 step=1") != std::string::npos);
  CHECK(r.out.find("# constant: ") != std::string::npos);
  auto last = split(rows.back(), ',');
  REQUIRE(last.size() == 5);
  CHECK(last[1] == "494");
  double ratio = std::stod(last[4]);
  CHECK(ratio > 0.8);
  CHECK(ratio < 1.2);

  auto x = run({"count", "--preset", "extended-modular", "--I", "I_alpha", "--J", "I_beta", "--Tmax", "4"});
  REQUIRE(x.code == 0);
  CHECK(x.err.find("warning") != std::string::npos);
  for (const auto &l : dataLines(x.out)) {
    if (l[0] == 'T') continue;
    auto f = split(l, ',');
    REQUIRE(f.size() == 5);
    CHECK(f[3].empty());
    CHECK(f[4].empty());
  }
}

TEST_CASE("list and pairs for the micro-instance") {
  auto l = run({"list", "--Tmax", kMicro, "--primitivity"});
  REQUIRE(l.code == 0);
  auto cls = records(l.out, "class");
  REQUIRE(cls.size() == 1);
  CHECK(cls[0]["mult"] == "2/1");
  CHECK(cls[0]["traceAbs"] == nlohmann::json::array({"3"}));
  CHECK(cls[0]["primitive"] == true);
  CHECK(cls[0]["pairs"].size() == 2);
  auto hdr = records(l.out, "header");
  REQUIRE(hdr.size() == 1);
  CHECK(hdr[0]["version"] == RECIP_VERSION);
  CHECK(hdr[0]["config"]["Tmax"] == kMicro);

  auto p = run({"pairs", "--Tmax", kMicro});
  REQUIRE(p.code == 0);
  auto prs = records(p.out, "pair");
  REQUIRE(prs.size() == 2);
  for (const auto &x : prs) {
    CHECK(x["mult"] == "1/1");
    CHECK(x["class"] == 0);
  }
  // both views carry the same mass and the same pair keys
  CHECK(cls[0]["pairs"][0] == prs[0]["key"]);
  CHECK(cls[0]["pairs"][1] == prs[1]["key"]);

  auto e = run({"list", "--Tmax", "1"});
  CHECK(e.code == 0);
  CHECK(e.out.empty());
}

TEST_CASE("mass of pairs equals mass of classes") {
  auto l = run({"list", "--preset", "hecke", "--p", "5", "--I", "I_Gamma", "--Tmax", "8"});
  auto p = run({"pairs", "--preset", "hecke", "--p", "5", "--I", "I_Gamma", "--Tmax", "8"});
  REQUIRE(l.code == 0);
  REQUIRE(p.code == 0);
  auto frac = [](const std::string &s) {
    auto k = s.find('/');
    return std::stod(s.substr(0, k)) / std::stod(s.substr(k + 1));
  };
  double a = 0, b = 0;
  for (const auto &c : records(l.out, "class")) a += frac(c["mult"]);
  for (const auto &c : records(p.out, "pair")) b += frac(c["mult"]);
  CHECK(a > 0);
  CHECK(a == b);
}

TEST_CASE("tree-count") {
  auto r = run({"tree-count", "--q", "3", "--n", "20"});
  REQUIRE(r.code == 0);
  auto rows = dataLines(r.out);
  REQUIRE(rows.size() == 6);
  CHECK(rows[0] == "n,N,main,ratio");
  CHECK(rows[1] == "4,1/3,3/8,0.8888888889");
  auto last = split(rows.back(), ',');
  CHECK(last[0] == "20");
  CHECK(std::fabs(std::stod(last[3]) - 1) < 0.15);
  auto z = run({"tree-count", "--q", "7", "--n", "8", "--conductances", "0"});
  REQUIRE(z.code == 0);
  for (const auto &l : dataLines(z.out)) {
    if (l[0] == 'n') continue;
    auto f = split(l, ',');
    auto k = f[1].find('/');
    double N = std::stod(f[1].substr(0, k)) / std::stod(f[1].substr(k + 1));
    CHECK(std::fabs(std::stod(f[4]) - N) < 1e-8 * N);
  }
  CHECK(run({"tree-count", "--q", "5", "--n", "8"}).code == 2);
  CHECK(run({"tree-count", "--q", "3", "--n", "6"}).code == 2);
  CHECK(run({"tree-count", "--q", "3", "--n", "40"}).code == 3);
}

TEST_CASE("equidist and render") {
  auto e = run({"equidist", "--T", "9,11,13"});
  REQUIRE(e.code == 0);
  auto rows = dataLines(e.out);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].rfind("T,classes,empirical[Im>=2]", 0) == 0);
  CHECK(split(rows[1], ',')[1] == "34");
  CHECK(run({"equidist", "--T", "11,9"}).code == 2);
  CHECK(run({"equidist", "--T", "9", "--partition", "spiral:3"}).code == 2);

  auto svg = run({"render", "--preset", "hecke", "--p", "6", "--Tmax", "13"});
  REQUIRE(svg.code == 0);
  CHECK(svg.out.rfind("<?xml", 0) == 0);
  CHECK(svg.out.find("command=render preset=hecke p=6") != std::string::npos);
  auto lst = run({"list", "--preset", "hecke", "--p", "6", "--Tmax", "13"});
  std::size_t groups = 0;
  for (auto p = svg.out.find("class=\"geodesic\""); p != std::string::npos; p = svg.out.find("class=\"geodesic\"", p + 1))
    ++groups;
  CHECK(groups == records(lst.out, "class").size());
}

TEST_CASE("outputs do not depend on the worker count") {
  for (std::vector<std::string> args : {std::vector<std::string>{"count", "--Tmax", "11"},
                                        {"list", "--preset", "hecke", "--p", "6", "--Tmax", "11"},
                                        {"pairs", "--preset", "hecke", "--p", "4", "--I", "I_Gamma", "--Tmax", "9"},
                                        {"render", "--preset", "hecke", "--p", "6", "--Tmax", "11"},
                                        {"equidist", "--T", "9,11"}}) {
    auto one = run(args);
    args.push_back("--workers");
    args.push_back("3");
    auto three = run(args);
    CHECK(one.code == 0);
    CHECK(one.out == three.out);
  }
}

TEST_CASE("configuration file, environment and exit codes") {
  std::string path = "recipgeo_test.conf";
  {
    std::ofstream f(path);
    f << "preset = hecke\np = 6\nTmax = 9\nstep = 3\n";
  }
  auto r = run({"count", "--config", path});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("preset=hecke p=6 I=I_alpha J=I_alpha Tmax=9 step=3") != std::string::npos);
  CHECK(dataLines(r.out).size() == 4);
  auto w = run({"count", "--config", path, "--Tmax", "6"});
  CHECK(w.out.find("Tmax=6 step=3") != std::string::npos);

  setenv("RECIPGEO_PRECISION_BITS", "192", 1);
  CHECK(run({"count", "--Tmax", "3"}).out.find("precision-bits=192") != std::string::npos);
  CHECK(run({"count", "--Tmax", "3", "--precision-bits", "320"}).out.find("precision-bits=320") != std::string::npos);
  unsetenv("RECIPGEO_PRECISION_BITS");

  CHECK(run({"count", "--preset", "sphere", "--Tmax", "3"}).code == 2);
  CHECK(run({"count", "--preset", "hecke", "--Tmax", "3"}).code == 2);
  CHECK(run({"count", "--Tmax", "3", "--format", "svg"}).code == 2);
  CHECK(run({"count", "--Tmax", "3", "--I", "I_nothing"}).code == 2);
  CHECK(run({"count", "--Tmax", "3", "--bogus"}).code == 2);
  CHECK(run({"count"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"count", "--Tmax", "30"}).code == 3);
  CHECK(run({"count", "--Tmax", "3", "-o", "/nonexistent-dir/out.csv"}).code == 2);
  CHECK(run({"--help"}).code == 0);
  CHECK(run({"--version"}).out.find(RECIP_VERSION) != std::string::npos);

  std::string out = "recipgeo_test_out.csv";
  REQUIRE(run({"count", "--Tmax", "5", "-o", out}).code == 0);
  CHECK(slurp(out) == run({"count", "--Tmax", "5"}).out);
}

TEST_CASE("selftest") {
  auto ok = run({"selftest"});
  CHECK(ok.code == 0);
  CHECK(ok.out.find("FAIL") == std::string::npos);
  auto bad = run({"selftest", "--inject-fault"});
  CHECK(bad.code == 1);
  CHECK(bad.out.find("FAIL modular I_alpha/I_alpha T=9 mass-conservation") != std::string::npos);
  CHECK(bad.out.find("counterexample:") != std::string::npos);
}
