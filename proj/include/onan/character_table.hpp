#pragma once

#include <gmpxx.h>

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace onan {

// Number fields holding the irrational character values. Each is Q(a) with a
// root of a monic polynomial of degree <= 3.
enum class Field { Rational, Sqrt2, Sqrt5, Sqrt7, SqrtMinus5, SqrtMinus31, Cubic19 };

// Exact element of one of the fields above, in the power basis of its generator.
class AlgebraicValue {
 public:
  AlgebraicValue() : field_(Field::Rational), c_{0} {}
  AlgebraicValue(long v) : field_(Field::Rational), c_{mpq_class(v)} {}
  AlgebraicValue(const mpq_class& v) : field_(Field::Rational), c_{v} {}
  AlgebraicValue(Field f, std::vector<mpq_class> coeffs);

  // A (1+3sqrt5)/2, Abar, B sqrt2, C root of x^3-x^2-6x+7, D = 5-C-C^2,
  // E = C^2-4, F i sqrt5, G sqrt7, H (-1+i sqrt31)/2, Hbar; optional leading '-'
  static AlgebraicValue parse(const std::string& token);

  Field field() const { return field_; }
  const std::vector<mpq_class>& coefficients() const { return c_; }
  bool is_rational() const;
  mpq_class rational() const;  // throws unless is_rational()
  AlgebraicValue conj() const;
  double approx_real() const;  // real part under the standard embedding

  friend AlgebraicValue operator+(const AlgebraicValue& a, const AlgebraicValue& b);
  friend AlgebraicValue operator-(const AlgebraicValue& a, const AlgebraicValue& b);
  friend AlgebraicValue operator*(const AlgebraicValue& a, const AlgebraicValue& b);
  AlgebraicValue& operator+=(const AlgebraicValue& o) { return *this = *this + o; }
  bool operator==(const AlgebraicValue& o) const;
  std::string str() const;

 private:
  void lift(Field f);

  Field field_;
  std::vector<mpq_class> c_;
};

struct Erratum {
  std::string character;
  std::string cls;
  std::string printed;
  std::string corrected;
};

class CharacterTableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CharacterTable {
 public:
  static CharacterTable load(const std::string& path, bool apply_errata = true);
  static CharacterTable load_default(bool apply_errata = true);

  std::size_t size() const { return classes_.size(); }
  const std::vector<std::string>& classes() const { return classes_; }
  int class_index(const std::string& label) const;
  int element_order(int cls) const { return orders_[cls]; }
  const AlgebraicValue& value(int chi, int cls) const { return chi_[chi][cls]; }
  mpz_class degree(int chi) const;
  const std::vector<Erratum>& errata() const { return errata_; }
  bool errata_applied() const { return applied_; }

  // sum_j |chi_j(g)|^2
  mpz_class centralizer_order(int cls) const;
  mpz_class centralizer_order(const std::string& label) const { return centralizer_order(class_index(label)); }
  // sum_j chi_j(1)^2
  mpz_class group_order() const;

  // Classes sharing an element order, e.g. "16ABCD" -> indices of 16A..16D.
  std::vector<std::string> order_groups() const;
  std::vector<int> classes_in_group(const std::string& group) const;
  std::string group_of(int cls) const;

 private:
  std::vector<std::string> classes_;
  std::vector<int> orders_;
  std::vector<std::vector<AlgebraicValue>> chi_;
  std::vector<Erratum> errata_;
  bool applied_ = false;
  std::vector<mpz_class> cent_;  // 0 where the column sum is not an integer
};

struct OrthogonalityReport {
  bool rows_ok = true;
  bool columns_ok = true;
  bool degree_sum_ok = true;
  mpz_class degree_sum;
  std::vector<std::string> failures;

  bool ok() const { return rows_ok && columns_ok && degree_sum_ok; }
};

// Row and column orthogonality, computed exactly over Galois-complete groups.
OrthogonalityReport check_orthogonality(const CharacterTable& t, const mpz_class& expected_order);

struct ModuleDecomposition {
  long grade = 0;
  std::vector<mpz_class> multiplicity;  // chi_1 .. chi_n
};

class NonIntegralMultiplicity : public std::runtime_error {
 public:
  NonIntegralMultiplicity(const std::string& what, mpq_class v) : std::runtime_error(what), value_(std::move(v)) {}
  const mpq_class& value() const { return value_; }

 private:
  mpq_class value_;
};

// mult_j = sum_g a_g conj(chi_j(g)) / #C(g); coefficients keyed by class label
// or by order group label.
ModuleDecomposition decompose(const CharacterTable& t, long m, const std::map<std::string, mpz_class>& coeff);
// a_g = sum_j mult_j chi_j(g), must be rational for every class
std::vector<mpz_class> recompose(const CharacterTable& t, const ModuleDecomposition& d);

struct PositivityReport {
  std::vector<std::pair<long, int>> negatives;  // (m, j) with j 1-based
  std::vector<long> allowed{7, 8, 12};
  bool pass = true;
};
PositivityReport positivity_scan(long mmax, const std::vector<ModuleDecomposition>& decomps);

struct IdentityReport {
  bool pass = false;
  mpz_class lhs, rhs;
  std::string text;
};
// 196884 = 5 chi_1(1) + 2 chi_7(1) + chi_12(1) + chi_18(1); perturb shifts chi_7(1) as a control
IdentityReport monster_identity_check(const CharacterTable& t, long perturb = 0);

// Rows "m mult_1 .. mult_n"; '#' starts a comment.
std::vector<ModuleDecomposition> load_multiplicities(const std::string& path);
std::vector<ModuleDecomposition> load_default_multiplicities();

extern const char* const kGroupOrder;  // 460815505920 = 2^9 3^4 5 7^3 11 19 31

}  // namespace onan
