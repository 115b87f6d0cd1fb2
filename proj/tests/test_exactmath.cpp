#include "doctest.h"
#include "recip/exactmath.hpp"

#include <cmath>
#include <numeric>
#include <random>

using namespace recip;

namespace {

std::vector<mpz_class> Z(std::initializer_list<long> xs) {
  std::vector<mpz_class> v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

// Distinct values 2cos(k pi/p), k odd-coprime to 2p, k < p: the conjugates of lambda_p.
std::vector<long double> conjugates(int p) {
  std::vector<long double> out;
  for (int k = 1; k < p; ++k)
    if (std::gcd(k, 2 * p) == 1) out.push_back(2.0L * std::cos(k * 3.14159265358979323846264338327950288L / p));
  return out;
}

long double evalPoly(const std::vector<mpz_class> &mp, long double x) {
  long double v = 0;
  for (int k = static_cast<int>(mp.size()) - 1; k >= 0; --k) v = v * x + mp[k].get_d();
  return v;
}

// D_p(x) + 2 where y^p + y^-p = D_p(y + 1/y); lambda_p is a root since y = e^{i pi/p}.
std::vector<mpz_class> chebyshevRelation(int p) {
  std::vector<std::vector<mpz_class>> D(p + 1);
  D[0] = Z({2});
  D[1] = Z({0, 1});
  for (int k = 2; k <= p; ++k) {
    std::vector<mpz_class> n(k + 1);
    for (size_t i = 0; i < D[k - 1].size(); ++i) n[i + 1] += D[k - 1][i];
    for (size_t i = 0; i < D[k - 2].size(); ++i) n[i] -= D[k - 2][i];
    D[k] = n;
  }
  auto r = D[p];
  r[0] += 2;
  return r;
}

bool dividesOverZ(std::vector<mpz_class> num, const std::vector<mpz_class> &den) {
  int dn = static_cast<int>(den.size()) - 1;
  for (int k = static_cast<int>(num.size()) - 1; k >= dn; --k) {
    mpz_class c = num[k];
    if (c == 0) continue;
    for (int j = 0; j <= dn; ++j) num[k - dn + j] -= c * den[j];
  }
  for (const auto &c : num)
    if (c != 0) return false;
  return true;
}

} // namespace

TEST_CASE("buildRing minimal polynomials") {
  CHECK(buildRing(3)->minpoly == Z({-1, 1}));
  CHECK(buildRing(4)->minpoly == Z({-2, 0, 1}));
  CHECK(buildRing(5)->minpoly == Z({-1, -1, 1}));
  CHECK(buildRing(5)->minpolyString() == "x^2 - x - 1");
  CHECK_THROWS_AS(buildRing(2), Error);
  CHECK(buildRing(7) == buildRing(7));
}

TEST_CASE("buildRing degree against the Chebyshev-relation oracle") {
  const int expected[] = {0, 0, 0, 1, 2, 2, 2, 3};
  for (int p = 3; p <= 12; ++p) {
    const RingContext *R = buildRing(p);
    if (p <= 7) CHECK(R->degree == expected[p]);
    auto roots = conjugates(p);
    CHECK(R->degree == static_cast<int>(roots.size()));
    for (long double r : roots) CHECK(std::fabs(evalPoly(R->minpoly, r)) < 1e-12L);
    CHECK(dividesOverZ(chebyshevRelation(p), R->minpoly));
  }
}

TEST_CASE("ring arithmetic examples") {
  const RingContext *R4 = buildRing(4);
  AlgebraicInt x = AlgebraicInt::lambda(R4);
  CHECK((x * x).coeffs() == Z({2, 0}));
  const RingContext *R5 = buildRing(5);
  AlgebraicInt y = AlgebraicInt::lambda(R5);
  CHECK((y * y).coeffs() == Z({1, 1}));
  AlgebraicInt a(R5, Z({7, -3}));
  CHECK((a + (-a)).isZero());
  CHECK_THROWS_AS(x + y, Error);
}

TEST_CASE("ring axioms on random instances") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long> coef(-50, 50);
  for (int p : {4, 5, 7, 9}) {
    const RingContext *R = buildRing(p);
    auto rnd = [&] {
      std::vector<mpz_class> c(R->degree);
      for (auto &v : c) v = coef(rng);
      return AlgebraicInt(R, c);
    };
    for (int t = 0; t < 50; ++t) {
      AlgebraicInt a = rnd(), b = rnd(), c = rnd();
      CHECK((a * b) * c == a * (b * c));
      CHECK(a * (b + c) == a * b + a * c);
      CHECK(a * b == b * a);
      CHECK(sign(a * a) >= 0);
      auto ra = toReal(a, 128), rb = toReal(b, 128), rab = toReal(a * b, 128);
      long double diff = std::fabs(ra.first.toLongDouble() * rb.first.toLongDouble() - rab.first.toLongDouble());
      CHECK(diff <= 1e-12L * (1 + std::fabs(rab.first.toLongDouble())));
    }
  }
}

TEST_CASE("sign examples") {
  const RingContext *R4 = buildRing(4);
  CHECK(sign(AlgebraicInt(R4)) == 0);
  CHECK(sign(AlgebraicInt(R4, Z({-1, 1}))) == 1);
  const RingContext *R5 = buildRing(5);
  CHECK(sign(AlgebraicInt(R5, Z({-2, 1}))) == -1);
}

TEST_CASE("sign escalates on heavy cancellation") {
  // (1 + sqrt2)^40 * (sqrt2 - 1)^40 - 1 = 0 exactly, while each factor has huge coefficients
  const RingContext *R4 = buildRing(4);
  AlgebraicInt u(R4, Z({1, 1})), v(R4, Z({-1, 1})), pu(R4, 1), pv(R4, 1);
  for (int i = 0; i < 40; ++i) {
    pu *= u;
    pv *= v;
  }
  CHECK((pu * pv).isOne());
  // pv is tiny and positive: (sqrt2 - 1)^40 ~ 5e-16
  CHECK(sign(pv) == 1);
  AlgebraicInt w = pv - AlgebraicInt(R4, 0);
  CHECK(sign(-w) == -1);
  long double approx = pv.toLongDouble();
  CHECK(approx == doctest::Approx(std::pow(std::sqrt(2.0L) - 1.0L, 40.0L)).epsilon(1e-12));
}

TEST_CASE("toReal examples and error bounds") {
  const RingContext *R4 = buildRing(4);
  auto one = toReal(AlgebraicInt(R4, 1), 64);
  CHECK(one.first.toDouble() == 1.0);
  CHECK(one.second.toDouble() == 0.0);
  auto s2 = toReal(AlgebraicInt::lambda(R4), 128);
  CHECK(s2.first.toDouble() == doctest::Approx(1.41421356237309504880));
  CHECK(std::log2(s2.second.toDouble()) < -100);
  const RingContext *R5 = buildRing(5);
  auto g = toReal(AlgebraicInt(R5, Z({1, 1})), 128);
  CHECK(g.first.toDouble() == doctest::Approx(2.6180339887498948482));
  auto g2 = toReal(AlgebraicInt(R5, Z({1, 1})), 256);
  CHECK(g2.second.toDouble() < g.second.toDouble());
  CHECK_THROWS_AS(toReal(AlgebraicInt(R5, 1), 32), Error);
}

TEST_CASE("fractions") {
  const RingContext *R4 = buildRing(4);
  AlgebraicFrac h(AlgebraicInt(R4, 3), AlgebraicInt(R4, 2));
  AlgebraicFrac h2(AlgebraicInt(R4, -6), AlgebraicInt(R4, -4));
  CHECK(h == h2);
  CHECK(sign(h2.den()) == 1);
  CHECK(sign(h - AlgebraicFrac(AlgebraicInt(R4, 1))) == 1);
  AlgebraicFrac s(AlgebraicInt::lambda(R4), AlgebraicInt(R4, 2));
  CHECK(s * s == AlgebraicFrac(AlgebraicInt(R4, 1), AlgebraicInt(R4, 2)));
  Mpfr c(256);
  mpfr_set_d(c.get(), 0.7071, MPFR_RNDN);
  CHECK(compareCertified(s, c) == 1);
  mpfr_set_d(c.get(), 0.7072, MPFR_RNDN);
  CHECK(compareCertified(s, c) == -1);
}
