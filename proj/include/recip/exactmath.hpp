#pragma once

#include "recip/error.hpp"

#include <gmpxx.h>
#include <mpfr.h>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace recip {

constexpr long kDefaultPrecisionBits = 256;

// RAII wrapper over mpfr_t with an explicit precision.
class Mpfr {
public:
  explicit Mpfr(long bits = kDefaultPrecisionBits) { mpfr_init2(v_, bits); mpfr_set_zero(v_, 1); }
  Mpfr(const Mpfr &o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  Mpfr &operator=(const Mpfr &o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  ~Mpfr() { mpfr_clear(v_); }
  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }
  long bits() const { return static_cast<long>(mpfr_get_prec(v_)); }
  double toDouble() const { return mpfr_get_d(v_, MPFR_RNDN); }
  long double toLongDouble() const { return mpfr_get_ld(v_, MPFR_RNDN); }
  std::string toString(int digits = 30) const;

private:
  mpfr_t v_;
};

// Midpoint-radius interval; the true value lies in [mid - rad, mid + rad].
struct Ball {
  Mpfr mid;
  Mpfr rad;
  explicit Ball(long bits = kDefaultPrecisionBits) : mid(bits), rad(64) {}
  static Ball exact(const mpz_class &z, long bits);
  bool containsZero() const;
  int signIfCertain() const; // 0 if the ball straddles zero
};

Ball ballAdd(const Ball &a, const Ball &b);
Ball ballSub(const Ball &a, const Ball &b);
Ball ballMul(const Ball &a, const Ball &b);
Ball ballDiv(const Ball &a, const Ball &b);

// Z[2cos(pi/p)] in the power basis 1, x, ..., x^(degree-1).
struct RingContext {
  int p = 3;
  std::vector<mpz_class> minpoly; // low to high, monic
  int degree = 1;
  double lambdaDouble = 1.0;
  long double lambdaLong = 1.0L;
  // reduced powers x^k for k in [0, 2*degree-1)
  std::vector<std::vector<mpz_class>> powers;

  Ball lambdaBall(long bits) const;
  std::string minpolyString() const;
};

// Interned contexts, one per p; pointers stay valid for the process lifetime.
const RingContext *buildRing(int p);

// Brute-force helpers kept public for oracles.
std::vector<mpz_class> cyclotomic(int n);
int eulerPhi(int n);

class AlgebraicInt {
public:
  AlgebraicInt() = default;
  explicit AlgebraicInt(const RingContext *ctx) : ctx_(ctx), c_(ctx->degree) {}
  AlgebraicInt(const RingContext *ctx, long v) : ctx_(ctx), c_(ctx->degree) { c_[0] = v; }
  AlgebraicInt(const RingContext *ctx, const mpz_class &v) : ctx_(ctx), c_(ctx->degree) { c_[0] = v; }
  AlgebraicInt(const RingContext *ctx, std::vector<mpz_class> coeffs);

  static AlgebraicInt lambda(const RingContext *ctx);

  const RingContext *ctx() const { return ctx_; }
  const std::vector<mpz_class> &coeffs() const { return c_; }
  bool isZero() const;
  bool isOne() const;

  AlgebraicInt &operator+=(const AlgebraicInt &o);
  AlgebraicInt &operator-=(const AlgebraicInt &o);
  AlgebraicInt &operator*=(const AlgebraicInt &o);
  AlgebraicInt &operator*=(long k);
  AlgebraicInt operator-() const;

  friend AlgebraicInt operator+(AlgebraicInt a, const AlgebraicInt &b) { return a += b; }
  friend AlgebraicInt operator-(AlgebraicInt a, const AlgebraicInt &b) { return a -= b; }
  friend AlgebraicInt operator*(const AlgebraicInt &a, const AlgebraicInt &b);
  friend AlgebraicInt operator*(AlgebraicInt a, long k) { return a *= k; }
  friend bool operator==(const AlgebraicInt &a, const AlgebraicInt &b);
  friend bool operator!=(const AlgebraicInt &a, const AlgebraicInt &b) { return !(a == b); }

  mpz_class content() const; // gcd of coefficients, 0 for zero
  void divExact(const mpz_class &k);

  double toDouble() const;
  long double toLongDouble() const;
  std::string key() const; // "c0,c1,..."

private:
  void checkCtx(const AlgebraicInt &o) const;
  const RingContext *ctx_ = nullptr;
  std::vector<mpz_class> c_;
};

int sign(const AlgebraicInt &a);
Ball toBall(const AlgebraicInt &a, long bits);
// (value, errorBound) with |value - exact| <= errorBound
std::pair<Mpfr, Mpfr> toReal(const AlgebraicInt &a, long bits);

class AlgebraicFrac {
public:
  AlgebraicFrac() = default;
  AlgebraicFrac(AlgebraicInt n); // NOLINT implicit
  AlgebraicFrac(AlgebraicInt n, AlgebraicInt d);

  const AlgebraicInt &num() const { return n_; }
  const AlgebraicInt &den() const { return d_; }
  const RingContext *ctx() const { return n_.ctx(); }
  bool isZero() const { return n_.isZero(); }

  friend AlgebraicFrac operator+(const AlgebraicFrac &a, const AlgebraicFrac &b);
  friend AlgebraicFrac operator-(const AlgebraicFrac &a, const AlgebraicFrac &b);
  friend AlgebraicFrac operator*(const AlgebraicFrac &a, const AlgebraicFrac &b);
  friend AlgebraicFrac operator/(const AlgebraicFrac &a, const AlgebraicFrac &b);
  AlgebraicFrac operator-() const { return AlgebraicFrac(-n_, d_, Raw{}); }
  friend bool operator==(const AlgebraicFrac &a, const AlgebraicFrac &b);
  friend bool operator!=(const AlgebraicFrac &a, const AlgebraicFrac &b) { return !(a == b); }

  double toDouble() const;
  long double toLongDouble() const;
  std::string str() const;

private:
  struct Raw {};
  AlgebraicFrac(AlgebraicInt n, AlgebraicInt d, Raw) : n_(std::move(n)), d_(std::move(d)) {}
  void normalize();
  AlgebraicInt n_, d_;
};

int sign(const AlgebraicFrac &a);
AlgebraicFrac abs(const AlgebraicFrac &a);
Ball toBall(const AlgebraicFrac &a, long bits);
std::pair<Mpfr, Mpfr> toReal(const AlgebraicFrac &a, long bits);

// Certified comparison of an exact value with a real given as an mpfr value
// accurate to within its own precision. Returns -1, 0 (undecided at cap), +1.
int compareCertified(const AlgebraicFrac &a, const Mpfr &c, long bits = kDefaultPrecisionBits);

// Process-wide default precision (bits) for certified evaluation.
long defaultPrecisionBits();
void setDefaultPrecisionBits(long bits);

} // namespace recip
