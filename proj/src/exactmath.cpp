#include "recip/exactmath.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>

namespace recip {

const char *errcName(Errc c) {
  switch (c) {
  case Errc::InvalidParameter: return "invalid-parameter";
  case Errc::InvalidIsometry: return "invalid-isometry";
  case Errc::InvalidClassification: return "invalid-classification";
  case Errc::InvalidConfiguration: return "invalid-configuration";
  case Errc::NotLoxodromic: return "not-loxodromic";
  case Errc::UnsupportedRegime: return "unsupported-regime";
  case Errc::InvalidPotential: return "invalid-potential";
  case Errc::ResourceLimit: return "resource-limit";
  case Errc::NumericFailure: return "numeric-failure";
  case Errc::Io: return "io-error";
  }
  return "error";
}

namespace {
std::atomic<long> gDefaultBits{kDefaultPrecisionBits};
}

long defaultPrecisionBits() { return gDefaultBits.load(); }
void setDefaultPrecisionBits(long bits) {
  if (bits < 53) throw Error(Errc::InvalidParameter, "precision below 53 bits");
  gDefaultBits.store(bits);
}

std::string Mpfr::toString(int digits) const {
  char *buf = nullptr;
  mpfr_asprintf(&buf, "%.*Rg", digits, v_);
  std::string s(buf);
  mpfr_free_str(buf);
  return s;
}

// ---------------------------------------------------------------- balls

namespace {

void absUp(Mpfr &out, const Mpfr &x) { mpfr_abs(out.get(), x.get(), MPFR_RNDU); }

// rounding slack |m| * 2^(1-bits), rounded up into out
void addRounding(Mpfr &rad, const Mpfr &mid) {
  Mpfr t(64);
  absUp(t, mid);
  mpfr_mul_2si(t.get(), t.get(), 1 - mid.bits(), MPFR_RNDU);
  mpfr_add(rad.get(), rad.get(), t.get(), MPFR_RNDU);
}

long commonBits(const Ball &a, const Ball &b) { return std::max(a.mid.bits(), b.mid.bits()); }

} // namespace

Ball Ball::exact(const mpz_class &z, long bits) {
  Ball r(bits);
  mpfr_set_z(r.mid.get(), z.get_mpz_t(), MPFR_RNDN);
  mpfr_set_zero(r.rad.get(), 1);
  if (mpfr_cmp_z(r.mid.get(), z.get_mpz_t()) != 0) addRounding(r.rad, r.mid);
  return r;
}

bool Ball::containsZero() const {
  Mpfr t(64);
  absUp(t, mid);
  // |mid| <= rad, comparing the down-rounded |mid| is enough
  Mpfr d(mid.bits());
  mpfr_abs(d.get(), mid.get(), MPFR_RNDD);
  return mpfr_cmp(d.get(), rad.get()) <= 0;
}

int Ball::signIfCertain() const {
  if (containsZero()) return 0;
  return mpfr_sgn(mid.get()) > 0 ? 1 : -1;
}

Ball ballAdd(const Ball &a, const Ball &b) {
  Ball r(commonBits(a, b));
  mpfr_add(r.mid.get(), a.mid.get(), b.mid.get(), MPFR_RNDN);
  mpfr_add(r.rad.get(), a.rad.get(), b.rad.get(), MPFR_RNDU);
  addRounding(r.rad, r.mid);
  return r;
}

Ball ballSub(const Ball &a, const Ball &b) {
  Ball r(commonBits(a, b));
  mpfr_sub(r.mid.get(), a.mid.get(), b.mid.get(), MPFR_RNDN);
  mpfr_add(r.rad.get(), a.rad.get(), b.rad.get(), MPFR_RNDU);
  addRounding(r.rad, r.mid);
  return r;
}

Ball ballMul(const Ball &a, const Ball &b) {
  Ball r(commonBits(a, b));
  mpfr_mul(r.mid.get(), a.mid.get(), b.mid.get(), MPFR_RNDN);
  Mpfr am(64), bm(64), t(64);
  absUp(am, a.mid);
  absUp(bm, b.mid);
  mpfr_mul(r.rad.get(), am.get(), b.rad.get(), MPFR_RNDU);
  mpfr_mul(t.get(), bm.get(), a.rad.get(), MPFR_RNDU);
  mpfr_add(r.rad.get(), r.rad.get(), t.get(), MPFR_RNDU);
  mpfr_mul(t.get(), a.rad.get(), b.rad.get(), MPFR_RNDU);
  mpfr_add(r.rad.get(), r.rad.get(), t.get(), MPFR_RNDU);
  addRounding(r.rad, r.mid);
  return r;
}

Ball ballDiv(const Ball &a, const Ball &b) {
  if (b.containsZero()) throw Error(Errc::NumericFailure, "ball division by a ball containing zero");
  Ball r(commonBits(a, b));
  mpfr_div(r.mid.get(), a.mid.get(), b.mid.get(), MPFR_RNDN);
  Mpfr qm(64), t(64), lo(64);
  absUp(qm, r.mid);
  mpfr_mul(t.get(), qm.get(), b.rad.get(), MPFR_RNDU);
  mpfr_add(t.get(), t.get(), a.rad.get(), MPFR_RNDU);
  mpfr_abs(lo.get(), b.mid.get(), MPFR_RNDD);
  mpfr_sub(lo.get(), lo.get(), b.rad.get(), MPFR_RNDD);
  mpfr_div(r.rad.get(), t.get(), lo.get(), MPFR_RNDU);
  addRounding(r.rad, r.mid);
  return r;
}

// ---------------------------------------------------------------- rings

int eulerPhi(int n) {
  int r = n;
  for (int d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      while (n % d == 0) n /= d;
      r -= r / d;
    }
  }
  if (n > 1) r -= r / n;
  return r;
}

namespace {

using ZPoly = std::vector<mpz_class>; // low to high

void trim(ZPoly &p) {
  while (p.size() > 1 && p.back() == 0) p.pop_back();
}

ZPoly divMonic(ZPoly num, const ZPoly &den) {
  int dn = static_cast<int>(den.size()) - 1;
  int nn = static_cast<int>(num.size()) - 1;
  if (nn < dn) return {0};
  ZPoly q(nn - dn + 1);
  for (int k = nn; k >= dn; --k) {
    mpz_class c = num[k];
    q[k - dn] = c;
    if (c == 0) continue;
    for (int j = 0; j <= dn; ++j) num[k - dn + j] -= c * den[j];
  }
  trim(num);
  if (!(num.size() == 1 && num[0] == 0)) throw Error(Errc::InvalidParameter, "inexact cyclotomic division");
  return q;
}

} // namespace

std::vector<mpz_class> cyclotomic(int n) {
  static std::mutex mu;
  static std::map<int, ZPoly> memo;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = memo.find(n);
    if (it != memo.end()) return it->second;
  }
  ZPoly p(n + 1);
  p[0] = -1;
  p[n] = 1;
  for (int d = 1; d < n; ++d)
    if (n % d == 0) p = divMonic(p, cyclotomic(d));
  std::lock_guard<std::mutex> lock(mu);
  memo[n] = p;
  return p;
}

Ball RingContext::lambdaBall(long bits) const {
  Ball b(bits);
  Mpfr t(bits + 16);
  mpfr_const_pi(t.get(), MPFR_RNDN);
  mpfr_div_si(t.get(), t.get(), p, MPFR_RNDN);
  mpfr_cos(t.get(), t.get(), MPFR_RNDN);
  mpfr_mul_2si(t.get(), t.get(), 1, MPFR_RNDN);
  mpfr_set(b.mid.get(), t.get(), MPFR_RNDN);
  // a few ulps at bits+16 for the three roundings, plus the final rounding
  mpfr_set_ui_2exp(b.rad.get(), 1, -(bits + 10), MPFR_RNDU);
  addRounding(b.rad, b.mid);
  if (degree == 1) {
    mpfr_set_z(b.mid.get(), mpz_class(-minpoly[0]).get_mpz_t(), MPFR_RNDN);
    mpfr_set_zero(b.rad.get(), 1);
  }
  return b;
}

std::string RingContext::minpolyString() const {
  std::ostringstream os;
  bool first = true;
  for (int k = degree; k >= 0; --k) {
    const mpz_class &c = minpoly[k];
    if (c == 0) continue;
    mpz_class a = abs(c);
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    if (k == 0 || a != 1) os << a.get_str();
    if (k >= 1) os << "x";
    if (k >= 2) os << "^" << k;
    first = false;
  }
  return os.str();
}

const RingContext *buildRing(int p) {
  if (p < 3) throw Error(Errc::InvalidParameter, "ring requires p >= 3");
  static std::mutex mu;
  static std::map<int, std::unique_ptr<RingContext>> registry;
  std::lock_guard<std::mutex> lock(mu);
  auto it = registry.find(p);
  if (it != registry.end()) return it->second.get();

  ZPoly phi = cyclotomic(2 * p);
  int m = (static_cast<int>(phi.size()) - 1) / 2;
  // y^-m Phi(y) = phi[m] + sum_k phi[m+k] (y^k + y^-k), and y^k + y^-k = D_k(x)
  std::vector<ZPoly> D(m + 1);
  D[0] = {2};
  if (m >= 1) D[1] = {0, 1};
  for (int k = 2; k <= m; ++k) {
    ZPoly n(k + 1);
    for (size_t i = 0; i < D[k - 1].size(); ++i) n[i + 1] += D[k - 1][i];
    for (size_t i = 0; i < D[k - 2].size(); ++i) n[i] -= D[k - 2][i];
    D[k] = n;
  }
  ZPoly mp(m + 1);
  mp[0] = phi[m];
  for (int k = 1; k <= m; ++k)
    for (size_t i = 0; i < D[k].size(); ++i) mp[i] += phi[m + k] * D[k][i];
  trim(mp);
  if (mp.back() != 1) throw Error(Errc::InvalidParameter, "minimal polynomial not monic");

  auto ctx = std::make_unique<RingContext>();
  ctx->p = p;
  ctx->minpoly = mp;
  ctx->degree = static_cast<int>(mp.size()) - 1;
  ctx->lambdaLong = 2.0L * std::cos(3.14159265358979323846264338327950288L / p);
  ctx->lambdaDouble = static_cast<double>(ctx->lambdaLong);
  int d = ctx->degree;
  ctx->powers.assign(std::max(1, 2 * d - 1), ZPoly(d));
  for (int k = 0; k < std::max(1, 2 * d - 1); ++k) {
    if (k < d) {
      ctx->powers[k][k] = 1;
      continue;
    }
    // x^k = x * x^(k-1)
    const ZPoly &prev = ctx->powers[k - 1];
    ZPoly cur(d);
    for (int i = 0; i + 1 < d; ++i) cur[i + 1] = prev[i];
    const mpz_class &top = prev[d - 1];
    for (int i = 0; i < d; ++i) cur[i] -= top * mp[i];
    ctx->powers[k] = cur;
  }
  const RingContext *out = ctx.get();
  registry[p] = std::move(ctx);
  return out;
}

// ---------------------------------------------------------------- AlgebraicInt

AlgebraicInt::AlgebraicInt(const RingContext *ctx, std::vector<mpz_class> coeffs) : ctx_(ctx), c_(std::move(coeffs)) {
  int d = ctx->degree;
  for (int k = static_cast<int>(c_.size()) - 1; k >= d; --k) {
    mpz_class t = c_[k];
    if (t == 0) continue;
    for (int i = 0; i < d; ++i) c_[k - d + i] -= t * ctx->minpoly[i];
    c_[k] = 0;
  }
  c_.resize(d);
}

AlgebraicInt AlgebraicInt::lambda(const RingContext *ctx) {
  std::vector<mpz_class> c(2);
  c[1] = 1;
  return AlgebraicInt(ctx, c);
}

void AlgebraicInt::checkCtx(const AlgebraicInt &o) const {
  if (ctx_ != o.ctx_) throw Error(Errc::InvalidParameter, "ring context mismatch");
}

bool AlgebraicInt::isZero() const {
  for (const auto &c : c_)
    if (c != 0) return false;
  return true;
}

bool AlgebraicInt::isOne() const {
  if (c_.empty() || c_[0] != 1) return false;
  for (size_t i = 1; i < c_.size(); ++i)
    if (c_[i] != 0) return false;
  return true;
}

AlgebraicInt &AlgebraicInt::operator+=(const AlgebraicInt &o) {
  checkCtx(o);
  for (size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

AlgebraicInt &AlgebraicInt::operator-=(const AlgebraicInt &o) {
  checkCtx(o);
  for (size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

AlgebraicInt &AlgebraicInt::operator*=(long k) {
  for (auto &c : c_) c *= k;
  return *this;
}

AlgebraicInt &AlgebraicInt::operator*=(const AlgebraicInt &o) {
  *this = *this * o;
  return *this;
}

AlgebraicInt AlgebraicInt::operator-() const {
  AlgebraicInt r(*this);
  for (auto &c : r.c_) c = -c;
  return r;
}

AlgebraicInt operator*(const AlgebraicInt &a, const AlgebraicInt &b) {
  a.checkCtx(b);
  const RingContext *ctx = a.ctx_;
  int d = ctx->degree;
  AlgebraicInt r(ctx);
  if (d == 1) {
    r.c_[0] = a.c_[0] * b.c_[0];
    return r;
  }
  std::vector<mpz_class> raw(2 * d - 1);
  for (int i = 0; i < d; ++i) {
    if (a.c_[i] == 0) continue;
    for (int j = 0; j < d; ++j) {
      if (b.c_[j] == 0) continue;
      mpz_addmul(raw[i + j].get_mpz_t(), a.c_[i].get_mpz_t(), b.c_[j].get_mpz_t());
    }
  }
  for (int k = 0; k < d; ++k) r.c_[k] = raw[k];
  for (int k = d; k < 2 * d - 1; ++k) {
    if (raw[k] == 0) continue;
    const auto &pw = ctx->powers[k];
    for (int i = 0; i < d; ++i) mpz_addmul(r.c_[i].get_mpz_t(), raw[k].get_mpz_t(), pw[i].get_mpz_t());
  }
  return r;
}

bool operator==(const AlgebraicInt &a, const AlgebraicInt &b) {
  a.checkCtx(b);
  return a.c_ == b.c_;
}

mpz_class AlgebraicInt::content() const {
  mpz_class g = 0;
  for (const auto &c : c_) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  return g;
}

void AlgebraicInt::divExact(const mpz_class &k) {
  for (auto &c : c_) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), k.get_mpz_t());
}

long double AlgebraicInt::toLongDouble() const {
  if (c_.size() == 1) return static_cast<long double>(c_[0].get_d());
  long double v = 0, mag = 0, x = ctx_->lambdaLong, pw = 1;
  bool small = true;
  for (size_t i = 0; i < c_.size(); ++i) {
    if (mpz_sizeinbase(c_[i].get_mpz_t(), 2) > 52) small = false;
    long double ci = static_cast<long double>(c_[i].get_d());
    v += ci * pw;
    mag += std::fabs(ci) * pw;
    pw *= x;
  }
  if (small && std::fabs(v) > mag * 1e-12L) return v;
  Ball b = toBall(*this, 192);
  return b.mid.toLongDouble();
}

double AlgebraicInt::toDouble() const { return static_cast<double>(toLongDouble()); }

std::string AlgebraicInt::key() const {
  std::string s;
  for (size_t i = 0; i < c_.size(); ++i) {
    if (i) s += ',';
    s += c_[i].get_str();
  }
  return s;
}

Ball toBall(const AlgebraicInt &a, long bits) {
  const auto &c = a.coeffs();
  int d = static_cast<int>(c.size());
  while (d > 1 && c[d - 1] == 0) --d;
  Ball acc = Ball::exact(c[d - 1], bits);
  if (d == 1) return acc;
  Ball lam = a.ctx()->lambdaBall(bits);
  for (int i = d - 2; i >= 0; --i) acc = ballAdd(ballMul(acc, lam), Ball::exact(c[i], bits));
  return acc;
}

std::pair<Mpfr, Mpfr> toReal(const AlgebraicInt &a, long bits) {
  if (bits < 53) throw Error(Errc::InvalidParameter, "precision below 53 bits");
  Ball b = toBall(a, bits);
  return {b.mid, b.rad};
}

int sign(const AlgebraicInt &a) {
  const auto &c = a.coeffs();
  if (c.size() == 1) return sgn(c[0]);
  if (a.isZero()) return 0;
  bool fits = true;
  double v = 0, mag = 0, pw = 1, x = a.ctx()->lambdaDouble;
  for (const auto &ci : c) {
    if (mpz_sizeinbase(ci.get_mpz_t(), 2) > 900) {
      fits = false;
      break;
    }
    double cd = ci.get_d();
    v += cd * pw;
    mag += std::fabs(cd) * pw;
    pw *= x;
  }
  if (fits && std::fabs(v) > mag * 1e-9) return v > 0 ? 1 : -1;
  for (long bits = std::max(defaultPrecisionBits(), 64L);; bits *= 2) {
    int s = toBall(a, bits).signIfCertain();
    if (s != 0) return s;
    if (bits > (1L << 24)) throw Error(Errc::NumericFailure, "sign escalation cap");
  }
}

// ---------------------------------------------------------------- AlgebraicFrac

AlgebraicFrac::AlgebraicFrac(AlgebraicInt n) : n_(std::move(n)), d_(n_.ctx(), 1) {}

AlgebraicFrac::AlgebraicFrac(AlgebraicInt n, AlgebraicInt d) : n_(std::move(n)), d_(std::move(d)) {
  if (d_.isZero()) throw Error(Errc::InvalidParameter, "zero denominator");
  normalize();
}

void AlgebraicFrac::normalize() {
  if (n_.isZero()) {
    d_ = AlgebraicInt(n_.ctx(), 1);
    return;
  }
  if (sign(d_) < 0) {
    n_ = -n_;
    d_ = -d_;
  }
  mpz_class g = gcd(n_.content(), d_.content());
  if (g > 1) {
    n_.divExact(g);
    d_.divExact(g);
  }
}

AlgebraicFrac operator+(const AlgebraicFrac &a, const AlgebraicFrac &b) {
  if (a.d_ == b.d_) return AlgebraicFrac(a.n_ + b.n_, a.d_);
  return AlgebraicFrac(a.n_ * b.d_ + b.n_ * a.d_, a.d_ * b.d_);
}

AlgebraicFrac operator-(const AlgebraicFrac &a, const AlgebraicFrac &b) {
  if (a.d_ == b.d_) return AlgebraicFrac(a.n_ - b.n_, a.d_);
  return AlgebraicFrac(a.n_ * b.d_ - b.n_ * a.d_, a.d_ * b.d_);
}

AlgebraicFrac operator*(const AlgebraicFrac &a, const AlgebraicFrac &b) {
  return AlgebraicFrac(a.n_ * b.n_, a.d_ * b.d_);
}

AlgebraicFrac operator/(const AlgebraicFrac &a, const AlgebraicFrac &b) {
  if (b.n_.isZero()) throw Error(Errc::InvalidParameter, "division by zero");
  return AlgebraicFrac(a.n_ * b.d_, a.d_ * b.n_);
}

bool operator==(const AlgebraicFrac &a, const AlgebraicFrac &b) { return a.n_ * b.d_ == b.n_ * a.d_; }

int sign(const AlgebraicFrac &a) { return sign(a.num()) * sign(a.den()); }

AlgebraicFrac abs(const AlgebraicFrac &a) { return sign(a) < 0 ? -a : a; }

long double AlgebraicFrac::toLongDouble() const { return n_.toLongDouble() / d_.toLongDouble(); }
double AlgebraicFrac::toDouble() const { return static_cast<double>(toLongDouble()); }

std::string AlgebraicFrac::str() const {
  if (d_.isOne()) return "[" + n_.key() + "]";
  return "[" + n_.key() + "]/[" + d_.key() + "]";
}

Ball toBall(const AlgebraicFrac &a, long bits) {
  Ball n = toBall(a.num(), bits);
  if (a.den().isOne()) return n;
  return ballDiv(n, toBall(a.den(), bits));
}

std::pair<Mpfr, Mpfr> toReal(const AlgebraicFrac &a, long bits) {
  if (bits < 53) throw Error(Errc::InvalidParameter, "precision below 53 bits");
  Ball b = toBall(a, bits);
  return {b.mid, b.rad};
}

int compareCertified(const AlgebraicFrac &a, const Mpfr &c, long bits) {
  for (long b = bits; b <= 4096; b *= 2) {
    Ball x = toBall(a, b);
    Ball y(b);
    mpfr_set(y.mid.get(), c.get(), MPFR_RNDN);
    if (mpfr_cmp(y.mid.get(), c.get()) != 0) addRounding(y.rad, y.mid);
    int s = ballSub(x, y).signIfCertain();
    if (s != 0) return s;
  }
  return 0;
}

} // namespace recip
