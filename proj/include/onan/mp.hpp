#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <string>
#include <utility>

namespace onan::mp {

// Precision used for values created without an explicit precision.
mpfr_prec_t working_precision();

// Sets the thread-local working precision for its lifetime.
class PrecisionScope {
 public:
  explicit PrecisionScope(mpfr_prec_t bits);
  ~PrecisionScope();
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  mpfr_prec_t saved_;
};

struct Bits {
  mpfr_prec_t n;
};

class Real {
 public:
  Real() : Real(Bits{working_precision()}) {}
  explicit Real(Bits bits) { mpfr_init2(v_, bits.n); mpfr_set_zero(v_, 1); }
  Real(long x) : Real() { mpfr_set_si(v_, x, MPFR_RNDN); }
  Real(int x) : Real(static_cast<long>(x)) {}
  Real(double x) : Real() { mpfr_set_d(v_, x, MPFR_RNDN); }
  Real(const mpz_class& x) : Real() { mpfr_set_z(v_, x.get_mpz_t(), MPFR_RNDN); }
  Real(const mpq_class& x) : Real() { mpfr_set_q(v_, x.get_mpq_t(), MPFR_RNDN); }
  Real(const Real& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
  Real(Real&& o) noexcept { mpfr_init2(v_, MPFR_PREC_MIN); mpfr_swap(v_, o.v_); }
  Real& operator=(const Real& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  Real& operator=(Real&& o) noexcept { mpfr_swap(v_, o.v_); return *this; }
  ~Real() { mpfr_clear(v_); }

  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }
  mpfr_prec_t precision() const { return mpfr_get_prec(v_); }

  Real& operator+=(const Real& o);
  Real& operator-=(const Real& o);
  Real& operator*=(const Real& o);
  Real& operator/=(const Real& o);

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  long double to_long_double() const { return mpfr_get_ld(v_, MPFR_RNDN); }
  // Nearest integer.
  mpz_class round() const;
  // Base-2 exponent, so that |x| < 2^exponent; very negative for zero.
  long exponent() const;
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }
  std::string str(int digits = 30) const;

 private:
  mpfr_t v_;
};

Real operator+(const Real& a, const Real& b);
Real operator-(const Real& a, const Real& b);
Real operator*(const Real& a, const Real& b);
Real operator/(const Real& a, const Real& b);
Real operator-(const Real& a);
bool operator<(const Real& a, const Real& b);
bool operator>(const Real& a, const Real& b);
bool operator<=(const Real& a, const Real& b);
bool operator>=(const Real& a, const Real& b);

Real abs(const Real& x);
Real sqrt(const Real& x);
Real exp(const Real& x);
Real log(const Real& x);
Real sin(const Real& x);
Real cos(const Real& x);
Real sinh(const Real& x);
Real pow(const Real& x, const Real& y);
Real gamma(const Real& x);
Real pi(mpfr_prec_t bits = working_precision());

struct Complex {
  Real re;
  Real im;

  Complex() = default;
  Complex(Real r) : re(std::move(r)), im(0L) {}
  Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}
  Complex(long x) : re(x), im(0L) {}

  Complex& operator+=(const Complex& o) { re += o.re; im += o.im; return *this; }
  Complex& operator-=(const Complex& o) { re -= o.re; im -= o.im; return *this; }
  Complex& operator*=(const Complex& o);
  Complex& operator/=(const Complex& o);
  Complex conj() const { return {re, -im}; }
  Real norm() const { return re * re + im * im; }
  Real abs() const { return mp::sqrt(norm()); }
};

Complex operator+(const Complex& a, const Complex& b);
Complex operator-(const Complex& a, const Complex& b);
Complex operator*(const Complex& a, const Complex& b);
Complex operator*(const Complex& a, const Real& b);
Complex operator/(const Complex& a, const Complex& b);
Complex operator-(const Complex& a);
Complex cexp(const Complex& z);
// e^{2 pi i x} for rational x.
Complex unit_root(const mpq_class& x);
Complex pow(const Complex& z, long n);

}  // namespace onan::mp
