#pragma once

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace onan {

class CuspStore;

// Truncated Laurent series in q with exact rational coefficients.
// Coefficients are known for exponents strictly below order().
class QSeries {
 public:
  QSeries() = default;
  QSeries(int leading, std::vector<mpq_class> coeffs, int order);

  static QSeries zero(int order);
  static QSeries constant(const mpq_class& c, int order);
  static QSeries monomial(int exponent, const mpq_class& c, int order);

  int leading_exponent() const { return leading_; }
  int order() const { return order_; }
  // First exponent with a nonzero coefficient, or order() if none is known.
  int valuation() const;
  mpq_class coefficient(int n) const;
  mpq_class operator[](int n) const { return coefficient(n); }
  const std::vector<mpq_class>& coefficients() const { return c_; }

  QSeries truncated(int order) const;
  // f(q) -> f(q^d)
  QSeries dilate(int d) const;
  bool is_integral() const;

  QSeries& operator+=(const QSeries& o);
  QSeries& operator-=(const QSeries& o);
  QSeries& operator*=(const mpq_class& s);

 private:
  void normalize();

  int leading_ = 0;
  int order_ = 0;
  std::vector<mpq_class> c_;
};

QSeries operator+(const QSeries& a, const QSeries& b);
QSeries operator-(const QSeries& a, const QSeries& b);
QSeries operator-(const QSeries& a);
QSeries operator*(const QSeries& a, const QSeries& b);
QSeries operator*(const mpq_class& s, const QSeries& a);
QSeries operator/(const QSeries& a, const QSeries& b);
QSeries inverse(const QSeries& a);
QSeries pow(const QSeries& a, int n);

struct EtaQuotientSpec {
  std::vector<std::pair<int, int>> factors;  // (dilation d, exponent r)
  mpq_class additive_constant = 0;

  // sum d*r / 24, as an exact rational
  mpq_class leading_exponent() const;
};

enum class HauptmodulKind {
  EisensteinRatio,   // E4^3 / eta^24 + constant (level 1)
  EtaQuotient,       // eta quotient + constant
  E2OverEta,         // scale * sum c_d E2(d tau) / eta product + constant
  E2OverNewform,     // scale * sum c_d E2(d tau) / f_E19 + constant
  NewformRatio,      // (f + f^s) / (2 (f - f^s)/sqrt5) + constant, f the level 31 newform
  AtkinLehnerSum,    // t + k / t + constant, t an eta quotient
};

struct HauptmodulSpec {
  int level = 1;
  bool plus = false;
  HauptmodulKind kind = HauptmodulKind::EtaQuotient;
  EtaQuotientSpec eta;                          // quotient, denominator, or t
  std::vector<std::pair<int, mpq_class>> e2;   // (d, c_d)
  mpq_class scale = 1;
  mpq_class constant = 0;
  mpq_class al_numerator = 0;                   // k in t + k/t

  std::string name() const;
};

// Levels with a Hauptmodul in the registry.
std::vector<int> gamma0_levels();
std::vector<int> plus_levels();
// Gamma0(N) levels (plus = false) or plus levels (plus = true); also 7+ and 10+ which are
// needed as the half-level companions of 14+ and 20+.
HauptmodulSpec hauptmodul_spec(int level, bool plus);
bool has_hauptmodul(int level, bool plus);

QSeries eta_quotient_expansion(const EtaQuotientSpec& spec, int order);
// Euler product prod (1 - q^n) truncated at order.
QSeries euler_product(int order);
QSeries eisenstein_expansion(int weight, int order);
QSeries hauptmodul_expansion(const HauptmodulSpec& spec, int order, const CuspStore* cusp = nullptr);

struct Index2 {
  QSeries series;
  mpq_class c1;
  mpq_class c0;
};
Index2 index2_function(const QSeries& haupt);

// Coefficients a(0..order-1) of the weight 2 newform attached to
// y^2 + y = x^3 + x^2 - 9x - 15, by point counting and Hecke recursion.
QSeries newform_E19_expansion(int order);
std::vector<mpz_class> newform_E19_coefficients(int count);

// Weight 2 newform of level 31 split as f + f^s and (f - f^s)/sqrt5.
std::pair<QSeries, QSeries> newform31_parts(const CuspStore& cusp, int order);

class DataRequired : public std::runtime_error {
 public:
  explicit DataRequired(const std::string& form)
      : std::runtime_error("data required: cusp form '" + form + "' is not available to the requested order"),
        form_(form) {}
  const std::string& form() const { return form_; }

 private:
  std::string form_;
};

}  // namespace onan
