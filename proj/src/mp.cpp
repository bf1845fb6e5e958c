#include "onan/mp.hpp"

#include <algorithm>
#include <vector>

namespace onan::mp {

namespace {
thread_local mpfr_prec_t g_precision = 128;

mpfr_prec_t join(const Real& a, const Real& b) { return std::max(a.precision(), b.precision()); }
}  // namespace

mpfr_prec_t working_precision() { return g_precision; }

PrecisionScope::PrecisionScope(mpfr_prec_t bits) : saved_(g_precision) { g_precision = bits; }
PrecisionScope::~PrecisionScope() { g_precision = saved_; }

Real& Real::operator+=(const Real& o) {
  if (o.precision() > precision()) mpfr_prec_round(v_, o.precision(), MPFR_RNDN);
  mpfr_add(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}
Real& Real::operator-=(const Real& o) {
  if (o.precision() > precision()) mpfr_prec_round(v_, o.precision(), MPFR_RNDN);
  mpfr_sub(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}
Real& Real::operator*=(const Real& o) {
  if (o.precision() > precision()) mpfr_prec_round(v_, o.precision(), MPFR_RNDN);
  mpfr_mul(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}
Real& Real::operator/=(const Real& o) {
  if (o.precision() > precision()) mpfr_prec_round(v_, o.precision(), MPFR_RNDN);
  mpfr_div(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}

mpz_class Real::round() const {
  mpz_class z;
  mpfr_get_z(z.get_mpz_t(), v_, MPFR_RNDN);
  return z;
}

long Real::exponent() const {
  if (mpfr_zero_p(v_)) return -(1L << 40);
  return mpfr_get_exp(v_);
}

std::string Real::str(int digits) const {
  std::vector<char> buf(digits + 64);
  mpfr_snprintf(buf.data(), buf.size(), "%.*Rg", digits, v_);
  return buf.data();
}

Real operator+(const Real& a, const Real& b) { Real r(Bits{join(a, b)}); mpfr_add(r.get(), a.get(), b.get(), MPFR_RNDN); return r; }
Real operator-(const Real& a, const Real& b) { Real r(Bits{join(a, b)}); mpfr_sub(r.get(), a.get(), b.get(), MPFR_RNDN); return r; }
Real operator*(const Real& a, const Real& b) { Real r(Bits{join(a, b)}); mpfr_mul(r.get(), a.get(), b.get(), MPFR_RNDN); return r; }
Real operator/(const Real& a, const Real& b) { Real r(Bits{join(a, b)}); mpfr_div(r.get(), a.get(), b.get(), MPFR_RNDN); return r; }
Real operator-(const Real& a) { Real r(Bits{a.precision()}); mpfr_neg(r.get(), a.get(), MPFR_RNDN); return r; }
bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.get(), b.get()); }
bool operator>(const Real& a, const Real& b) { return mpfr_greater_p(a.get(), b.get()); }
bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.get(), b.get()); }
bool operator>=(const Real& a, const Real& b) { return mpfr_greaterequal_p(a.get(), b.get()); }

#define ONAN_UNARY(name, fn)                      \
  Real name(const Real& x) {                      \
    Real r(Bits{x.precision()});                        \
    fn(r.get(), x.get(), MPFR_RNDN);              \
    return r;                                     \
  }
ONAN_UNARY(abs, mpfr_abs)
ONAN_UNARY(sqrt, mpfr_sqrt)
ONAN_UNARY(exp, mpfr_exp)
ONAN_UNARY(log, mpfr_log)
ONAN_UNARY(sin, mpfr_sin)
ONAN_UNARY(cos, mpfr_cos)
ONAN_UNARY(sinh, mpfr_sinh)
ONAN_UNARY(gamma, mpfr_gamma)
#undef ONAN_UNARY

Real pow(const Real& x, const Real& y) { Real r(Bits{join(x, y)}); mpfr_pow(r.get(), x.get(), y.get(), MPFR_RNDN); return r; }

Real pi(mpfr_prec_t bits) {
  Real r(Bits{bits});
  mpfr_const_pi(r.get(), MPFR_RNDN);
  return r;
}

Complex& Complex::operator*=(const Complex& o) {
  Real r = re * o.re - im * o.im;
  im = re * o.im + im * o.re;
  re = std::move(r);
  return *this;
}

Complex& Complex::operator/=(const Complex& o) {
  Real d = o.norm();
  Real r = (re * o.re + im * o.im) / d;
  im = (im * o.re - re * o.im) / d;
  re = std::move(r);
  return *this;
}

Complex operator+(const Complex& a, const Complex& b) { return {a.re + b.re, a.im + b.im}; }
Complex operator-(const Complex& a, const Complex& b) { return {a.re - b.re, a.im - b.im}; }
Complex operator*(const Complex& a, const Complex& b) { Complex r = a; r *= b; return r; }
Complex operator*(const Complex& a, const Real& b) { return {a.re * b, a.im * b}; }
Complex operator/(const Complex& a, const Complex& b) { Complex r = a; r /= b; return r; }
Complex operator-(const Complex& a) { return {-a.re, -a.im}; }

Complex cexp(const Complex& z) {
  Real m = exp(z.re);
  Real s(Bits{z.im.precision()}), c(Bits{z.im.precision()});
  mpfr_sin_cos(s.get(), c.get(), z.im.get(), MPFR_RNDN);
  return {m * c, m * s};
}

Complex unit_root(const mpq_class& x) {
  // reduce to [0,1) first so the angle stays small
  mpz_class f;
  mpz_fdiv_q(f.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  mpq_class frac = x - mpq_class(f);
  Real t = Real(frac) * pi() * Real(2L);
  Real s, c;
  mpfr_sin_cos(s.get(), c.get(), t.get(), MPFR_RNDN);
  return {c, s};
}

Complex pow(const Complex& z, long n) {
  if (n < 0) return Complex(1L) / pow(z, -n);
  Complex r(1L), b = z;
  while (n) {
    if (n & 1) r *= b;
    b *= b;
    n >>= 1;
  }
  return r;
}

}  // namespace onan::mp
