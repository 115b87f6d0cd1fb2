#pragma once

#include "recip/error.hpp"

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

// Bruhat-Tits tree of PGL2(F_q((1/Y))) and the lattice PGL2(F_q[Y]).
namespace recip::tree {

// F_q with elements encoded as 0..q-1 (base-p digits of a polynomial modulo `modulus`).
class FieldSpec {
public:
  explicit FieldSpec(int q);

  int p = 0, e = 0, q = 0;
  std::vector<int> modulus; // monic, low degree first; {0, 1} for prime fields

  int add(int x, int y) const { return add_[x * q + y]; }
  int mul(int x, int y) const { return mul_[x * q + y]; }
  int neg(int x) const { return neg_[x]; }
  int sub(int x, int y) const { return add(x, neg(y)); }
  int inv(int x) const;
  bool operator==(const FieldSpec &o) const { return q == o.q && modulus == o.modulus; }

private:
  std::vector<int> add_, mul_, neg_, inv_;
};

// Finite Laurent polynomial in Y; coefficient of Y^(lo + i) is c[i].
struct LaurentPoly {
  int lo = 0;
  std::vector<int> c; // no zero at either end; empty means 0

  static LaurentPoly monomial(int coef, int exp);
  bool zero() const { return c.empty(); }
  int top() const { return lo + static_cast<int>(c.size()) - 1; }
  int coef(int exp) const;
  // v(Y^k) = -k; zero has no valuation
  int valuation() const;
  bool operator==(const LaurentPoly &) const = default;
  std::string str() const;
};

LaurentPoly add(const FieldSpec &F, const LaurentPoly &a, const LaurentPoly &b);
LaurentPoly sub(const FieldSpec &F, const LaurentPoly &a, const LaurentPoly &b);
LaurentPoly mul(const FieldSpec &F, const LaurentPoly &a, const LaurentPoly &b);
LaurentPoly neg(const FieldSpec &F, const LaurentPoly &a);
LaurentPoly scale(const FieldSpec &F, const LaurentPoly &a, int s);
// terms with exponent >= minExp
LaurentPoly keepFrom(const LaurentPoly &a, int minExp);
// b/d expanded in powers of 1/Y, terms with exponent >= minExp
LaurentPoly seriesDiv(const FieldSpec &F, const LaurentPoly &b, const LaurentPoly &d, int minExp);

struct TMat {
  LaurentPoly a, b, c, d;
  bool operator==(const TMat &) const = default;
  std::string str() const;
};

TMat constant(int a, int b, int c, int d);
TMat mul(const FieldSpec &F, const TMat &x, const TMat &y);
LaurentPoly det(const FieldSpec &F, const TMat &m);
LaurentPoly trace(const FieldSpec &F, const TMat &m);
TMat adjugate(const FieldSpec &F, const TMat &m);
// scale by a constant so the top coefficient of the first nonzero entry is 1
TMat normalizeProj(const FieldSpec &F, const TMat &m);
bool projEqual(const FieldSpec &F, const TMat &x, const TMat &y);
// entries polynomial and determinant a nonzero constant
bool inLattice(const FieldSpec &F, const TMat &m);

// class of the column lattice of (Y^-n, u; 0, 1), u reduced mod Y^-n
struct TreeVertex {
  int n = 0;
  LaurentPoly u;
  bool operator==(const TreeVertex &) const = default;
  bool operator<(const TreeVertex &o) const;
  std::string str() const;
};

struct TreeVertexHash {
  std::size_t operator()(const TreeVertex &v) const;
};

inline TreeVertex basepoint() { return {}; }
TMat rep(const TreeVertex &v);
TreeVertex canonicalVertex(const FieldSpec &F, const TMat &m);
TreeVertex act(const FieldSpec &F, const TMat &g, const TreeVertex &v);

int vertexDistance(const FieldSpec &F, const TreeVertex &v, const TreeVertex &w);
std::vector<TreeVertex> neighbors(const FieldSpec &F, const TreeVertex &v);
// vertices from v to w inclusive
std::vector<TreeVertex> geodesicPath(const FieldSpec &F, const TreeVertex &v, const TreeVertex &w);

struct SplittingType {
  int a = 0, b = 0;
  int gap() const { return a - b; }
};

struct Splitting {
  SplittingType type;
  std::optional<TMat> transporter; // g in the lattice with g * basepoint = v, when gap = 0
};

Splitting splittingType(const FieldSpec &F, const TreeVertex &v);

struct OrbitVertex {
  TreeVertex v;
  int dist = 0;
  TMat g; // transporter
};

// orbit vertices within distance R of the basepoint, sorted by (dist, vertex)
std::vector<OrbitVertex> orbitBall(const FieldSpec &F, int R, std::size_t cap = 20'000'000);

// PGL2(F_q), normalized representatives
std::vector<TMat> pgl2(const FieldSpec &F);
TMat treeAlpha(const FieldSpec &F);

mpq_class countReversibleTree(const FieldSpec &F, int n);

struct PairOracleResult {
  mpq_class N;          // vertex orbits, fibers of size index^2
  mpq_class literalN;   // pair orbits enumerated, each weighted by 1/|stabilizer|
  std::size_t vertexOrbits = 0;
  std::size_t pairOrbits = 0;
  long groupOrder = 0;  // |PGL2(F_q)|
  long centralizer = 0; // |Z(alpha)|
  long conjugates = 0;  // size of the class of alpha in PGL2(F_q)
};

PairOracleResult pairLevelOracle(const FieldSpec &F, int n);

struct LambdaCheck {
  int lambda = 0;
  int twiceDist = 0;
  bool reversal = false;
  TMat gamma;
};

LambdaCheck treeLambdaCheck(const FieldSpec &F, const TMat &g);

// translation length from valuations of trace and determinant
int treeTranslationLength(const FieldSpec &F, const TMat &g);

// Conductances on the quotient ray: value k sits on the edge between gap k and gap k + 1;
// the last value repeats. up is read in the direction of growing gap, down in the other.
struct ConductanceSpec {
  std::vector<double> up, down;
  static ConductanceSpec symmetric(std::vector<double> values);
  static ConductanceSpec parse(const std::string &commaList);
  double edge(int lowerGap) const;
};

double conductanceAmplitude(const FieldSpec &F, const ConductanceSpec &spec, const TreeVertex &v,
                            const TreeVertex &w);
double weightedCount(const FieldSpec &F, const ConductanceSpec &spec, int n);

// q^(n/2 - 1) / (q^2 - 1)
mpq_class treeMainTerm(int q, int n);
// q_v / (q^2 (q^2-1)^2 (q_v-1) zeta(-1)) q_v^(n/2), zeta(-1) = 1/((q-1)(q^2-1)), q_v = q
mpq_class treeMainTermZeta(int q, int n);

} // namespace recip::tree
