#include "recip/treecount.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <deque>
#include <map>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace recip::tree {

namespace {

std::vector<int> digits(int x, int p, int e) {
  std::vector<int> d(e);
  for (int i = 0; i < e; ++i, x /= p) d[i] = x % p;
  return d;
}

int undigits(const std::vector<int> &d, int p) {
  int x = 0;
  for (int i = static_cast<int>(d.size()) - 1; i >= 0; --i) x = x * p + d[i];
  return x;
}

// remainder of a modulo the monic m over F_p
std::vector<int> polyMod(std::vector<int> a, const std::vector<int> &m, int p) {
  int dm = static_cast<int>(m.size()) - 1;
  for (int i = static_cast<int>(a.size()) - 1; i >= dm; --i) {
    int t = a[i] % p;
    if (!t) continue;
    for (int j = 0; j <= dm; ++j) a[i - dm + j] = ((a[i - dm + j] - t * m[j]) % p + p) % p;
  }
  a.resize(std::max(dm, 1));
  return a;
}

bool irreducible(const std::vector<int> &m, int p) {
  int e = static_cast<int>(m.size()) - 1;
  // trial division by monic polynomials of degree 1..e/2
  for (int d = 1; 2 * d <= e; ++d) {
    int count = 1;
    for (int i = 0; i < d; ++i) count *= p;
    for (int k = 0; k < count; ++k) {
      std::vector<int> f = digits(k, p, d);
      f.push_back(1);
      auto r = polyMod(m, f, p);
      if (std::all_of(r.begin(), r.end(), [](int x) { return x == 0; })) return false;
    }
  }
  return true;
}

void normalize(LaurentPoly &a) {
  std::size_t s = 0;
  while (s < a.c.size() && a.c[s] == 0) ++s;
  if (s == a.c.size()) {
    a.c.clear();
    a.lo = 0;
    return;
  }
  std::size_t t = a.c.size();
  while (a.c[t - 1] == 0) --t;
  a.c = std::vector<int>(a.c.begin() + static_cast<long>(s), a.c.begin() + static_cast<long>(t));
  a.lo += static_cast<int>(s);
}

template <class Op> LaurentPoly combine(const LaurentPoly &a, const LaurentPoly &b, Op op) {
  if (a.zero() && b.zero()) return {};
  int lo = a.zero() ? b.lo : b.zero() ? a.lo : std::min(a.lo, b.lo);
  int hi = a.zero() ? b.top() : b.zero() ? a.top() : std::max(a.top(), b.top());
  LaurentPoly r;
  r.lo = lo;
  r.c.resize(hi - lo + 1);
  for (int k = lo; k <= hi; ++k) r.c[k - lo] = op(a.coef(k), b.coef(k));
  normalize(r);
  return r;
}

int valOrInf(const LaurentPoly &a) { return a.zero() ? INT_MAX : a.valuation(); }

bool isConstantUnit(const LaurentPoly &a) { return a.c.size() == 1 && a.lo == 0; }

bool polynomial(const LaurentPoly &a) { return a.zero() || a.lo >= 0; }

void requireCountingField(const FieldSpec &F, int n) {
  if (F.q % 4 != 3) throw Error(Errc::UnsupportedRegime, "tree counting needs q = 3 mod 4");
  if (n <= 0 || n % 4 != 0) throw Error(Errc::InvalidParameter, "n must be a positive multiple of 4");
}

struct BallNode {
  TreeVertex v;
  int dist = 0;
  Splitting split;
  double amp = 0;
};

// visits every vertex within distance R of the basepoint once, in BFS order
template <class Visit> void ballBfs(const FieldSpec &F, int R, std::size_t cap, Visit visit,
                                    const ConductanceSpec *spec = nullptr) {
  std::unordered_set<TreeVertex, TreeVertexHash> seen;
  std::deque<BallNode> queue;
  queue.push_back({basepoint(), 0, splittingType(F, basepoint()), 0});
  seen.insert(basepoint());
  while (!queue.empty()) {
    BallNode cur = std::move(queue.front());
    queue.pop_front();
    visit(cur);
    if (cur.dist == R) continue;
    for (auto &x : neighbors(F, cur.v)) {
      if (!seen.insert(x).second) continue;
      if (seen.size() > cap) throw Error(Errc::ResourceLimit, "tree ball exceeds the vertex cap");
      BallNode nx{x, cur.dist + 1, splittingType(F, x), cur.amp};
      if (spec) {
        int g0 = cur.split.type.gap(), g1 = nx.split.type.gap();
        if (g1 == g0 + 1) nx.amp += spec->edge(g0);
        else if (g0 == g1 + 1) nx.amp += spec->edge(g1);
        else throw Error(Errc::NumericFailure, "adjacent vertices with non-adjacent types");
      }
      queue.push_back(std::move(nx));
    }
  }
}

void requireSymmetric(const ConductanceSpec &s) {
  if (s.up.empty() || s.down.empty()) throw Error(Errc::InvalidPotential, "empty conductance spec");
  std::size_t n = std::max(s.up.size(), s.down.size());
  for (std::size_t k = 0; k < n; ++k) {
    double a = s.up[std::min(k, s.up.size() - 1)], b = s.down[std::min(k, s.down.size() - 1)];
    if (a != b) throw Error(Errc::InvalidPotential, "conductances must not depend on orientation");
    if (!std::isfinite(a)) throw Error(Errc::InvalidPotential, "non-finite conductance");
  }
}

} // namespace

// ---------------------------------------------------------------- field

FieldSpec::FieldSpec(int qq) : q(qq) {
  if (q < 2) throw Error(Errc::InvalidParameter, "field order must be at least 2");
  int x = q;
  for (p = 2; x % p != 0; ++p) {
  }
  for (e = 0; x % p == 0; x /= p) ++e;
  if (x != 1) throw Error(Errc::InvalidParameter, "field order must be a prime power");
  if (e == 1) {
    modulus = {0, 1};
  } else {
    int count = q;
    for (int k = 0; k < count; ++k) {
      auto m = digits(k, p, e);
      m.push_back(1);
      if (m[0] != 0 && irreducible(m, p)) {
        modulus = m;
        break;
      }
    }
  }
  add_.resize(q * q);
  mul_.resize(q * q);
  neg_.resize(q);
  inv_.assign(q, -1);
  for (int a = 0; a < q; ++a) {
    auto da = digits(a, p, e);
    std::vector<int> na(e);
    for (int i = 0; i < e; ++i) na[i] = (p - da[i]) % p;
    neg_[a] = undigits(na, p);
    for (int b = 0; b < q; ++b) {
      auto db = digits(b, p, e);
      std::vector<int> s(e);
      for (int i = 0; i < e; ++i) s[i] = (da[i] + db[i]) % p;
      add_[a * q + b] = undigits(s, p);
      if (e == 1) {
        mul_[a * q + b] = a * b % p;
      } else {
        std::vector<int> prod(2 * e - 1, 0);
        for (int i = 0; i < e; ++i)
          for (int j = 0; j < e; ++j) prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
        mul_[a * q + b] = undigits(polyMod(prod, modulus, p), p);
      }
    }
  }
  for (int a = 1; a < q; ++a)
    for (int b = 1; b < q; ++b)
      if (mul_[a * q + b] == 1) inv_[a] = b;
  for (int a = 0; a < q; ++a) {
    if (add(a, neg(a)) != 0 || add(a, 0) != a || mul(a, 1) != a) throw Error(Errc::NumericFailure, "field tables");
    if (a && (inv_[a] < 0 || mul(a, inv_[a]) != 1 || inv_[inv_[a]] != a))
      throw Error(Errc::NumericFailure, "inverse table inconsistent");
  }
}

int FieldSpec::inv(int x) const {
  if (x == 0) throw Error(Errc::InvalidParameter, "division by zero in F_q");
  return inv_[x];
}

// ---------------------------------------------------------------- Laurent polynomials

LaurentPoly LaurentPoly::monomial(int coef, int exp) {
  LaurentPoly r;
  if (coef) {
    r.lo = exp;
    r.c = {coef};
  }
  return r;
}

int LaurentPoly::coef(int exp) const {
  if (zero() || exp < lo || exp > top()) return 0;
  return c[exp - lo];
}

int LaurentPoly::valuation() const {
  if (zero()) throw Error(Errc::InvalidParameter, "valuation of zero");
  return -top();
}

std::string LaurentPoly::str() const {
  if (zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int k = top(); k >= lo; --k) {
    int a = coef(k);
    if (!a) continue;
    if (!first) os << " + ";
    first = false;
    if (k == 0) {
      os << a;
      continue;
    }
    if (a != 1) os << a << "*";
    os << "Y";
    if (k != 1) os << "^" << k;
  }
  return os.str();
}

LaurentPoly add(const FieldSpec &F, const LaurentPoly &a, const LaurentPoly &b) {
  return combine(a, b, [&](int x, int y) { return F.add(x, y); });
}

LaurentPoly sub(const FieldSpec &F, const LaurentPoly &a, const LaurentPoly &b) {
  return combine(a, b, [&](int x, int y) { return F.sub(x, y); });
}

LaurentPoly neg(const FieldSpec &F, const LaurentPoly &a) {
  LaurentPoly r = a;
  for (auto &x : r.c) x = F.neg(x);
  return r;
}

LaurentPoly scale(const FieldSpec &F, const LaurentPoly &a, int s) {
  if (!s) return {};
  LaurentPoly r = a;
  for (auto &x : r.c) x = F.mul(x, s);
  return r;
}

LaurentPoly mul(const FieldSpec &F, const LaurentPoly &a, const LaurentPoly &b) {
  if (a.zero() || b.zero()) return {};
  LaurentPoly r;
  r.lo = a.lo + b.lo;
  r.c.assign(a.c.size() + b.c.size() - 1, 0);
  for (std::size_t i = 0; i < a.c.size(); ++i) {
    if (!a.c[i]) continue;
    for (std::size_t j = 0; j < b.c.size(); ++j) r.c[i + j] = F.add(r.c[i + j], F.mul(a.c[i], b.c[j]));
  }
  normalize(r);
  return r;
}

LaurentPoly keepFrom(const LaurentPoly &a, int minExp) {
  if (a.zero() || a.lo >= minExp) return a;
  if (a.top() < minExp) return {};
  LaurentPoly r;
  r.lo = minExp;
  r.c.assign(a.c.begin() + (minExp - a.lo), a.c.end());
  normalize(r);
  return r;
}

LaurentPoly seriesDiv(const FieldSpec &F, const LaurentPoly &b, const LaurentPoly &d, int minExp) {
  if (d.zero()) throw Error(Errc::InvalidParameter, "series division by zero");
  int dt = d.top();
  int lead = F.inv(d.c.back());
  LaurentPoly rem = b, quo;
  std::map<int, int> terms;
  while (!rem.zero() && rem.top() - dt >= minExp) {
    int k = rem.top() - dt;
    int t = F.mul(rem.c.back(), lead);
    terms[k] = t;
    rem = sub(F, rem, mul(F, LaurentPoly::monomial(t, k), d));
  }
  if (terms.empty()) return {};
  quo.lo = terms.begin()->first;
  quo.c.assign(terms.rbegin()->first - quo.lo + 1, 0);
  for (auto [k, t] : terms) quo.c[k - quo.lo] = t;
  normalize(quo);
  return quo;
}

// ---------------------------------------------------------------- matrices

std::string TMat::str() const { return "[" + a.str() + ", " + b.str() + "; " + c.str() + ", " + d.str() + "]"; }

TMat constant(int a, int b, int c, int d) {
  return {LaurentPoly::monomial(a, 0), LaurentPoly::monomial(b, 0), LaurentPoly::monomial(c, 0),
          LaurentPoly::monomial(d, 0)};
}

TMat mul(const FieldSpec &F, const TMat &x, const TMat &y) {
  return {add(F, mul(F, x.a, y.a), mul(F, x.b, y.c)), add(F, mul(F, x.a, y.b), mul(F, x.b, y.d)),
          add(F, mul(F, x.c, y.a), mul(F, x.d, y.c)), add(F, mul(F, x.c, y.b), mul(F, x.d, y.d))};
}

LaurentPoly det(const FieldSpec &F, const TMat &m) { return sub(F, mul(F, m.a, m.d), mul(F, m.b, m.c)); }

LaurentPoly trace(const FieldSpec &F, const TMat &m) { return add(F, m.a, m.d); }

TMat adjugate(const FieldSpec &F, const TMat &m) { return {m.d, neg(F, m.b), neg(F, m.c), m.a}; }

TMat normalizeProj(const FieldSpec &F, const TMat &m) {
  for (const LaurentPoly *e : {&m.a, &m.b, &m.c, &m.d}) {
    if (e->zero()) continue;
    int s = F.inv(e->c.back());
    return {scale(F, m.a, s), scale(F, m.b, s), scale(F, m.c, s), scale(F, m.d, s)};
  }
  throw Error(Errc::InvalidParameter, "zero matrix");
}

bool projEqual(const FieldSpec &F, const TMat &x, const TMat &y) {
  return normalizeProj(F, x) == normalizeProj(F, y);
}

bool inLattice(const FieldSpec &F, const TMat &m) {
  return polynomial(m.a) && polynomial(m.b) && polynomial(m.c) && polynomial(m.d) && isConstantUnit(det(F, m));
}

// ---------------------------------------------------------------- vertices

bool TreeVertex::operator<(const TreeVertex &o) const {
  if (n != o.n) return n < o.n;
  if (u.lo != o.u.lo) return u.lo < o.u.lo;
  return u.c < o.u.c;
}

std::string TreeVertex::str() const { return "(" + std::to_string(n) + ", " + u.str() + ")"; }

std::size_t TreeVertexHash::operator()(const TreeVertex &v) const {
  std::size_t h = std::hash<int>()(v.n) * 1000003u ^ std::hash<int>()(v.u.lo);
  for (int x : v.u.c) h = h * 31 + static_cast<std::size_t>(x);
  return h;
}

TMat rep(const TreeVertex &v) {
  return {LaurentPoly::monomial(1, -v.n), v.u, LaurentPoly{}, LaurentPoly::monomial(1, 0)};
}

TreeVertex canonicalVertex(const FieldSpec &F, const TMat &m) {
  LaurentPoly dt = det(F, m);
  if (dt.zero()) throw Error(Errc::InvalidParameter, "singular lattice basis");
  TreeVertex v;
  // right column operations over the valuation ring clear the lower left entry
  if (!m.d.zero() && valOrInf(m.d) <= valOrInf(m.c)) {
    v.n = dt.valuation() - 2 * m.d.valuation();
    v.u = seriesDiv(F, m.b, m.d, 1 - v.n);
  } else {
    v.n = dt.valuation() - 2 * m.c.valuation();
    v.u = seriesDiv(F, m.a, m.c, 1 - v.n);
  }
  return v;
}

TreeVertex act(const FieldSpec &F, const TMat &g, const TreeVertex &v) { return canonicalVertex(F, mul(F, g, rep(v))); }

int vertexDistance(const FieldSpec &F, const TreeVertex &v, const TreeVertex &w) {
  (void)F;
  // rep(v)^-1 rep(w) ~ (Y^-n', u' - u; 0, Y^-n)
  LaurentPoly du = sub(F, w.u, v.u);
  int mn = std::min({w.n, v.n, valOrInf(du)});
  return std::abs(w.n + v.n - 2 * mn);
}

std::vector<TreeVertex> neighbors(const FieldSpec &F, const TreeVertex &v) {
  std::vector<TreeVertex> out;
  out.reserve(F.q + 1);
  for (int t = 0; t < F.q; ++t) out.push_back({v.n + 1, add(F, v.u, LaurentPoly::monomial(t, -v.n))});
  out.push_back({v.n - 1, keepFrom(v.u, 2 - v.n)});
  return out;
}

std::vector<TreeVertex> geodesicPath(const FieldSpec &F, const TreeVertex &v, const TreeVertex &w) {
  std::vector<TreeVertex> path{v};
  int d = vertexDistance(F, v, w);
  while (d > 0) {
    bool moved = false;
    for (auto &x : neighbors(F, path.back()))
      if (vertexDistance(F, x, w) == d - 1) {
        path.push_back(x);
        moved = true;
        break;
      }
    if (!moved) throw Error(Errc::NumericFailure, "no neighbour closer to the target");
    --d;
  }
  return path;
}

Splitting splittingType(const FieldSpec &F, const TreeVertex &v0) {
  // continued-fraction walk toward the quotient ray (Y^k, 0; 0, 1)
  TreeVertex v = v0;
  TMat g = constant(1, 0, 0, 1);
  const TMat swap = constant(0, 1, 1, 0);
  int gap = 0;
  for (;;) {
    LaurentPoly P = keepFrom(v.u, 0);
    if (!P.zero()) {
      TMat t{LaurentPoly::monomial(1, 0), neg(F, P), LaurentPoly{}, LaurentPoly::monomial(1, 0)};
      g = mul(F, t, g);
      v.u = sub(F, v.u, P);
    }
    if (v.n <= 0) {
      gap = -v.n;
      break;
    }
    g = mul(F, swap, g);
    if (v.u.zero()) {
      gap = v.n;
      break;
    }
    v = canonicalVertex(F, mul(F, swap, rep(v)));
  }
  Splitting s;
  s.type = {(gap + 1) / 2, -(gap / 2)};
  if (gap == 0) s.transporter = normalizeProj(F, adjugate(F, g));
  return s;
}

std::vector<OrbitVertex> orbitBall(const FieldSpec &F, int R, std::size_t cap) {
  if (R < 0 || R % 2 != 0) throw Error(Errc::InvalidParameter, "orbit ball radius must be even and nonnegative");
  std::vector<OrbitVertex> out;
  ballBfs(F, R, cap, [&](const BallNode &b) {
    if (b.split.type.gap() == 0) out.push_back({b.v, b.dist, *b.split.transporter});
  });
  std::sort(out.begin(), out.end(), [](const OrbitVertex &x, const OrbitVertex &y) {
    if (x.dist != y.dist) return x.dist < y.dist;
    return x.v < y.v;
  });
  return out;
}

// ---------------------------------------------------------------- counting

std::vector<TMat> pgl2(const FieldSpec &F) {
  std::vector<TMat> out;
  int q = F.q;
  for (int a = 0; a <= 1; ++a)
    for (int b = 0; b < q; ++b) {
      if (a == 0 && b != 1) continue;
      for (int c = 0; c < q; ++c)
        for (int d = 0; d < q; ++d)
          if (F.sub(F.mul(a, d), F.mul(b, c)) != 0) out.push_back(constant(a, b, c, d));
    }
  return out;
}

TMat treeAlpha(const FieldSpec &F) { return constant(0, 1, F.neg(1), 0); }

mpq_class countReversibleTree(const FieldSpec &F, int n) {
  requireCountingField(F, n);
  auto ball = orbitBall(F, n / 2);
  mpq_class N(static_cast<long>(ball.size()) - 1, static_cast<long>(F.q) * F.q * F.q - F.q);
  N.canonicalize();
  return N;
}

PairOracleResult pairLevelOracle(const FieldSpec &F, int n) {
  requireCountingField(F, n);
  PairOracleResult r;
  auto G = pgl2(F);
  TMat alpha = treeAlpha(F);
  r.groupOrder = static_cast<long>(G.size());
  std::vector<TMat> C;
  for (const auto &h : G) {
    if (projEqual(F, mul(F, h, alpha), mul(F, alpha, h))) ++r.centralizer;
    TMat c = normalizeProj(F, mul(F, mul(F, h, alpha), adjugate(F, h)));
    if (std::find(C.begin(), C.end(), c) == C.end()) C.push_back(c);
  }
  r.conjugates = static_cast<long>(C.size());
  long q = F.q;
  long index = q * (q - 1) / 2;
  if (r.groupOrder != q * (q * q - 1) || r.centralizer != 2 * (q + 1) || r.conjugates != index)
    throw Error(Errc::NumericFailure, "PGL2(F_q) audit failed");

  auto ball = orbitBall(F, n / 2);
  std::unordered_map<TreeVertex, std::size_t, TreeVertexHash> where;
  for (std::size_t i = 0; i < ball.size(); ++i) where[ball[i].v] = i;
  std::vector<bool> done(ball.size(), false);
  auto commutes = [&](const TMat &x, const TMat &y) { return projEqual(F, mul(F, x, y), mul(F, y, x)); };
  for (std::size_t i = 0; i < ball.size(); ++i) {
    if (done[i] || ball[i].dist == 0) continue;
    const auto &w = ball[i];
    std::vector<const TMat *> stab;
    for (const auto &h : G) {
      TreeVertex x = act(F, h, w.v);
      auto it = where.find(x);
      if (it == where.end()) throw Error(Errc::NumericFailure, "PGL2(F_q) left the orbit ball");
      done[it->second] = true;
      if (x == w.v) stab.push_back(&h);
    }
    ++r.vertexOrbits;
    long S = static_cast<long>(stab.size());
    // the index^2 pairs over this vertex orbit, each with weight 1/(|S| index^2)
    r.N += mpq_class(index * index, S * index * index);
    // Burnside count of the actual orbits of S on those pairs
    long fixed = 0;
    TMat gInv = adjugate(F, w.g);
    for (const TMat *s : stab) {
      TMat t = mul(F, mul(F, gInv, *s), w.g);
      long a = 0, b = 0;
      for (const auto &c : C) {
        if (commutes(*s, c)) ++a;
        if (commutes(t, c)) ++b;
      }
      fixed += a * b;
    }
    if (fixed % S != 0) throw Error(Errc::NumericFailure, "Burnside count not integral");
    long orbits = fixed / S;
    r.pairOrbits += static_cast<std::size_t>(orbits);
    r.literalN += mpq_class(orbits, S * index * index);
  }
  r.N.canonicalize();
  r.literalN.canonicalize();
  return r;
}

int treeTranslationLength(const FieldSpec &F, const TMat &g) {
  LaurentPoly tr = trace(F, g), dt = det(F, g);
  if (dt.zero()) throw Error(Errc::InvalidParameter, "singular element");
  if (tr.zero()) return 0;
  return std::max(0, dt.valuation() - 2 * tr.valuation());
}

LambdaCheck treeLambdaCheck(const FieldSpec &F, const TMat &g) {
  if (!inLattice(F, g)) throw Error(Errc::InvalidParameter, "element not in PGL2(F_q[Y])");
  TreeVertex w = act(F, g, basepoint());
  if (w == basepoint()) throw Error(Errc::NotLoxodromic, "g fixes the basepoint");
  TMat alpha = treeAlpha(F);
  TMat beta = mul(F, mul(F, g, alpha), adjugate(F, g));
  LambdaCheck r;
  r.gamma = normalizeProj(F, mul(F, beta, alpha));
  r.lambda = treeTranslationLength(F, r.gamma);
  r.twiceDist = 2 * vertexDistance(F, basepoint(), w);
  r.reversal = projEqual(F, mul(F, mul(F, alpha, r.gamma), adjugate(F, alpha)), adjugate(F, r.gamma));
  if (r.lambda == 0) throw Error(Errc::NotLoxodromic, "product is elliptic");
  return r;
}

// ---------------------------------------------------------------- conductances

ConductanceSpec ConductanceSpec::symmetric(std::vector<double> values) {
  ConductanceSpec s;
  s.up = values;
  s.down = std::move(values);
  return s;
}

ConductanceSpec ConductanceSpec::parse(const std::string &list) {
  std::vector<double> v;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception &) {
      throw Error(Errc::InvalidPotential, "bad conductance value '" + item + "'");
    }
  }
  if (v.empty()) throw Error(Errc::InvalidPotential, "empty conductance list");
  return symmetric(std::move(v));
}

double ConductanceSpec::edge(int k) const {
  if (up.empty()) throw Error(Errc::InvalidPotential, "empty conductance spec");
  return up[std::min<std::size_t>(static_cast<std::size_t>(k), up.size() - 1)];
}

double conductanceAmplitude(const FieldSpec &F, const ConductanceSpec &spec, const TreeVertex &v,
                            const TreeVertex &w) {
  requireSymmetric(spec);
  auto path = geodesicPath(F, v, w);
  double amp = 0;
  int prev = splittingType(F, path[0]).type.gap();
  for (std::size_t i = 1; i < path.size(); ++i) {
    int cur = splittingType(F, path[i]).type.gap();
    if (std::abs(cur - prev) != 1) throw Error(Errc::NumericFailure, "adjacent vertices with non-adjacent types");
    amp += spec.edge(std::min(cur, prev));
    prev = cur;
  }
  return amp;
}

double weightedCount(const FieldSpec &F, const ConductanceSpec &spec, int n) {
  requireCountingField(F, n);
  requireSymmetric(spec);
  double sum = 0;
  ballBfs(
      F, n / 2, 20'000'000,
      [&](const BallNode &b) {
        if (b.dist > 0 && b.split.type.gap() == 0) sum += std::exp(b.amp);
      },
      &spec);
  return sum / static_cast<double>(static_cast<long>(F.q) * F.q * F.q - F.q);
}

mpq_class treeMainTerm(int q, int n) {
  mpz_class num, den = mpz_class(q) * q - 1;
  int e = n / 2 - 1;
  mpz_class qe;
  mpz_pow_ui(qe.get_mpz_t(), mpz_class(q).get_mpz_t(), static_cast<unsigned long>(std::abs(e)));
  mpq_class r = e >= 0 ? mpq_class(qe, den) : mpq_class(mpz_class(1), qe * den);
  r.canonicalize();
  return r;
}

mpq_class treeMainTermZeta(int q, int n) {
  mpq_class Q(q), qv(q);
  mpq_class zeta = 1 / ((Q - 1) * (Q * Q - 1));
  mpz_class half;
  mpz_pow_ui(half.get_mpz_t(), mpz_class(q).get_mpz_t(), static_cast<unsigned long>(n / 2));
  mpq_class r = qv / (Q * Q * (Q * Q - 1) * (Q * Q - 1) * (qv - 1) * zeta) * mpq_class(half);
  r.canonicalize();
  return r;
}

} // namespace recip::tree
