#include "onan/character_table.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "onan/cuspdata.hpp"

namespace onan {

const char* const kGroupOrder = "460815505920";

namespace {

int degree_of(Field f) {
  switch (f) {
    case Field::Rational: return 1;
    case Field::Cubic19: return 3;
    default: return 2;
  }
}

// x^d = sum red[k] x^k
std::vector<mpq_class> reduction(Field f) {
  switch (f) {
    case Field::Sqrt2: return {2, 0};
    case Field::Sqrt5: return {5, 0};
    case Field::Sqrt7: return {7, 0};
    case Field::SqrtMinus5: return {-5, 0};
    case Field::SqrtMinus31: return {-31, 0};
    case Field::Cubic19: return {-7, 6, 1};
    case Field::Rational: return {0};
  }
  return {};
}

bool imaginary(Field f) { return f == Field::SqrtMinus5 || f == Field::SqrtMinus31; }

double generator_value(Field f) {
  switch (f) {
    case Field::Sqrt2: return std::sqrt(2.0);
    case Field::Sqrt5: return std::sqrt(5.0);
    case Field::Sqrt7: return std::sqrt(7.0);
    case Field::Cubic19: {
      // largest real root of x^3 - x^2 - 6x + 7
      double x = 3;
      for (int i = 0; i < 60; ++i) x -= (x * x * x - x * x - 6 * x + 7) / (3 * x * x - 2 * x - 6);
      return x;
    }
    default: return 0;
  }
}

mpq_class half(long n) {
  mpq_class q(n, 2);
  q.canonicalize();
  return q;
}

}  // namespace

AlgebraicValue::AlgebraicValue(Field f, std::vector<mpq_class> coeffs) : field_(f), c_(std::move(coeffs)) {
  c_.resize(degree_of(f), 0);
}

void AlgebraicValue::lift(Field f) {
  if (field_ == f || f == Field::Rational) return;
  if (field_ != Field::Rational && !is_rational()) throw std::logic_error("character values from different fields combined");
  field_ = f;
  c_.resize(degree_of(f), 0);
}

bool AlgebraicValue::is_rational() const {
  for (std::size_t k = 1; k < c_.size(); ++k)
    if (c_[k] != 0) return false;
  return true;
}

mpq_class AlgebraicValue::rational() const {
  if (!is_rational()) throw std::logic_error("value " + str() + " is not rational");
  return c_[0];
}

AlgebraicValue AlgebraicValue::conj() const {
  AlgebraicValue r = *this;
  if (imaginary(field_)) r.c_[1] = -r.c_[1];
  return r;
}

double AlgebraicValue::approx_real() const {
  double a = generator_value(field_), s = 0, p = 1;
  for (auto& c : c_) {
    s += c.get_d() * p;
    p *= a;
  }
  return s;
}

AlgebraicValue operator+(const AlgebraicValue& a, const AlgebraicValue& b) {
  AlgebraicValue x = a, y = b;
  if (x.field_ == Field::Rational || (x.is_rational() && y.field_ != Field::Rational)) x.lift(y.field_);
  else y.lift(x.field_);
  for (std::size_t k = 0; k < x.c_.size(); ++k) x.c_[k] += y.c_[k];
  return x;
}

AlgebraicValue operator-(const AlgebraicValue& a, const AlgebraicValue& b) {
  AlgebraicValue y = b;
  for (auto& c : y.c_) c = -c;
  return a + y;
}

AlgebraicValue operator*(const AlgebraicValue& a, const AlgebraicValue& b) {
  AlgebraicValue x = a, y = b;
  if (x.field_ == Field::Rational || (x.is_rational() && y.field_ != Field::Rational)) x.lift(y.field_);
  else y.lift(x.field_);
  int d = degree_of(x.field_);
  std::vector<mpq_class> p(2 * d - 1, 0);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) p[i + j] += x.c_[i] * y.c_[j];
  auto red = reduction(x.field_);
  for (int k = 2 * d - 2; k >= d; --k) {
    if (p[k] == 0) continue;
    for (int i = 0; i < d; ++i) p[k - d + i] += p[k] * red[i];
    p[k] = 0;
  }
  p.resize(d);
  return AlgebraicValue(x.field_, p);
}

bool AlgebraicValue::operator==(const AlgebraicValue& o) const {
  AlgebraicValue d = *this - o;
  for (auto& c : d.c_)
    if (c != 0) return false;
  return true;
}

std::string AlgebraicValue::str() const {
  static const char* gen[] = {"", "sqrt2", "sqrt5", "sqrt7", "sqrt(-5)", "sqrt(-31)", "C"};
  if (is_rational()) return c_[0].get_str();
  std::string g = gen[static_cast<int>(field_)];
  std::ostringstream os;
  os << c_[0].get_str();
  for (std::size_t k = 1; k < c_.size(); ++k) {
    if (c_[k] == 0) continue;
    os << (c_[k] < 0 ? " - " : " + ") << mpq_class(abs(c_[k])).get_str() << "*" << g;
    if (k == 2) os << "^2";
  }
  return os.str();
}

AlgebraicValue AlgebraicValue::parse(const std::string& token) {
  if (token.empty()) throw CharacterTableError("empty character value");
  bool neg = token[0] == '-' && token.size() > 1 && std::isalpha(static_cast<unsigned char>(token[1]));
  std::string t = neg ? token.substr(1) : token;
  AlgebraicValue v;
  if (t == "A") v = AlgebraicValue(Field::Sqrt5, {half(1), half(3)});
  else if (t == "Abar") v = AlgebraicValue(Field::Sqrt5, {half(1), half(-3)});
  else if (t == "B") v = AlgebraicValue(Field::Sqrt2, {0, 1});
  else if (t == "C") v = AlgebraicValue(Field::Cubic19, {0, 1, 0});
  else if (t == "D") v = AlgebraicValue(Field::Cubic19, {5, -1, -1});
  else if (t == "E") v = AlgebraicValue(Field::Cubic19, {-4, 0, 1});
  else if (t == "F") v = AlgebraicValue(Field::SqrtMinus5, {0, 1});
  else if (t == "G") v = AlgebraicValue(Field::Sqrt7, {0, 1});
  else if (t == "H") v = AlgebraicValue(Field::SqrtMinus31, {half(-1), half(1)});
  else if (t == "Hbar") v = AlgebraicValue(Field::SqrtMinus31, {half(-1), half(-1)});
  else {
    try {
      std::size_t pos = 0;
      long x = std::stol(t, &pos);
      if (pos != t.size()) throw std::invalid_argument(t);
      v = AlgebraicValue(x);
    } catch (const std::exception&) {
      throw CharacterTableError("unknown character value '" + token + "'");
    }
  }
  if (neg) v = AlgebraicValue(0L) - v;
  return v;
}

CharacterTable CharacterTable::load(const std::string& path, bool apply_errata) {
  std::ifstream in(path);
  if (!in) throw CharacterTableError("cannot open character table " + path);
  CharacterTable t;
  std::string line;
  std::vector<Erratum> errata;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream is(line);
    std::string key;
    is >> key;
    if (key == "schema") {
      std::string name;
      int v = 0;
      is >> name >> v;
      if (name != "onan-chartable" || v != 1) throw CharacterTableError("unsupported character table schema");
    } else if (key == "classes") {
      std::string c;
      while (is >> c) {
        t.classes_.push_back(c);
        t.orders_.push_back(std::stoi(c));
      }
    } else if (key.rfind("chi", 0) == 0) {
      std::vector<AlgebraicValue> row;
      std::string tok;
      while (is >> tok) row.push_back(AlgebraicValue::parse(tok));
      if (row.size() != t.classes_.size())
        throw CharacterTableError(key + " has " + std::to_string(row.size()) + " entries");
      t.chi_.push_back(std::move(row));
    } else if (key == "erratum") {
      Erratum e;
      is >> e.character >> e.cls >> e.printed >> e.corrected;
      errata.push_back(e);
    } else {
      throw CharacterTableError("unrecognised line in character table: " + line);
    }
  }
  if (t.chi_.size() != t.classes_.size()) throw CharacterTableError("character table is not square");
  t.applied_ = apply_errata;
  for (auto& e : errata) {
    int j = std::stoi(e.character.substr(3)) - 1;
    int g = t.class_index(e.cls);
    if (j < 0 || j >= static_cast<int>(t.chi_.size()))
      throw CharacterTableError("erratum names unknown character " + e.character);
    if (!(t.chi_[j][g] == AlgebraicValue::parse(e.printed)))
      throw CharacterTableError("erratum for " + e.character + " at " + e.cls + " does not match the printed value");
    if (apply_errata) t.chi_[j][g] = AlgebraicValue::parse(e.corrected);
  }
  t.errata_ = errata;
  for (std::size_t g = 0; g < t.classes_.size(); ++g) {
    try {
      t.cent_.push_back(t.centralizer_order(static_cast<int>(g)));
    } catch (const CharacterTableError&) {
      t.cent_.push_back(0);
    }
  }
  return t;
}

CharacterTable CharacterTable::load_default(bool apply_errata) {
  return load(data_directory() + "/onan_character_table.txt", apply_errata);
}

int CharacterTable::class_index(const std::string& label) const {
  auto it = std::find(classes_.begin(), classes_.end(), label);
  if (it == classes_.end()) throw CharacterTableError("unknown class " + label);
  return static_cast<int>(it - classes_.begin());
}

mpz_class CharacterTable::degree(int chi) const { return mpz_class(chi_[chi][0].rational()); }

mpz_class CharacterTable::centralizer_order(int cls) const {
  if (cls < 0 || cls >= static_cast<int>(classes_.size())) throw CharacterTableError("class index out of range");
  if (static_cast<std::size_t>(cls) < cent_.size() && cent_[cls] != 0) return cent_[cls];
  AlgebraicValue s;
  for (auto& row : chi_) s += row[cls] * row[cls].conj();
  // |chi|^2 summed over all characters is Galois invariant
  mpq_class q = s.rational();
  if (q.get_den() != 1) throw CharacterTableError("non-integral centralizer order at " + classes_[cls]);
  return q.get_num();
}

mpz_class CharacterTable::group_order() const {
  mpz_class s = 0;
  for (std::size_t j = 0; j < chi_.size(); ++j) s += degree(j) * degree(j);
  return s;
}

std::string CharacterTable::group_of(int cls) const {
  std::string label = std::to_string(orders_[cls]);
  for (std::size_t g = 0; g < classes_.size(); ++g)
    if (orders_[g] == orders_[cls]) label += classes_[g].substr(std::to_string(orders_[g]).size());
  return label;
}

std::vector<std::string> CharacterTable::order_groups() const {
  std::vector<std::string> out;
  for (std::size_t g = 0; g < classes_.size(); ++g) {
    auto label = group_of(static_cast<int>(g));
    if (std::find(out.begin(), out.end(), label) == out.end()) out.push_back(label);
  }
  return out;
}

std::vector<int> CharacterTable::classes_in_group(const std::string& group) const {
  std::vector<int> out;
  for (std::size_t g = 0; g < classes_.size(); ++g)
    if (group_of(static_cast<int>(g)) == group) out.push_back(static_cast<int>(g));
  if (out.empty()) throw CharacterTableError("unknown order group " + group);
  return out;
}

namespace {

// Sum values from several fields; each field's share must be rational.
struct FieldSum {
  std::map<Field, AlgebraicValue> parts;
  void add(const AlgebraicValue& v) {
    auto [it, fresh] = parts.try_emplace(v.field(), AlgebraicValue(v.field(), {}));
    it->second += v;
  }
  bool rational(mpq_class& out) const {
    out = 0;
    for (auto& [f, v] : parts) {
      if (!v.is_rational()) return false;
      out += v.rational();
    }
    return true;
  }
};

}  // namespace

OrthogonalityReport check_orthogonality(const CharacterTable& t, const mpz_class& expected_order) {
  OrthogonalityReport r;
  std::size_t n = t.size();
  r.degree_sum = t.group_order();
  if (r.degree_sum != expected_order) {
    r.degree_sum_ok = false;
    r.failures.push_back("sum of squared degrees is " + r.degree_sum.get_str());
  }
  std::vector<mpz_class> cent(n);
  for (std::size_t g = 0; g < n; ++g) {
    try {
      cent[g] = t.centralizer_order(static_cast<int>(g));
    } catch (const std::exception& e) {
      r.columns_ok = false;
      r.failures.push_back(e.what());
      cent[g] = 1;
    }
    if (cent[g] <= 0 || expected_order % cent[g] != 0) {
      r.columns_ok = false;
      r.failures.push_back("centralizer of " + t.classes()[g] + " = " + cent[g].get_str() + " does not divide the group order");
    }
  }
  // columns: sum_j chi_j(g) conj(chi_j(h)) = delta_gh #C(g). Distinct fields
  // here are linearly disjoint, so a mixed sum vanishes iff its tensor
  // coefficients all do.
  auto column_field = [&](std::size_t g) {
    Field f = Field::Rational;
    for (std::size_t j = 0; j < n; ++j)
      if (!t.value(j, g).is_rational()) f = t.value(j, g).field();
    return f;
  };
  for (std::size_t g = 0; g < n; ++g)
    for (std::size_t h = g + 1; h < n; ++h) {
      Field fg = column_field(g), fh = column_field(h);
      bool ok = true;
      if (fg == fh || fg == Field::Rational || fh == Field::Rational) {
        AlgebraicValue s;
        for (std::size_t j = 0; j < n; ++j) s += t.value(j, g) * t.value(j, h).conj();
        ok = s == AlgebraicValue(0L);
      } else {
        int dg = degree_of(fg), dh = degree_of(fh);
        std::vector<mpq_class> acc(dg * dh, 0);
        for (std::size_t j = 0; j < n; ++j) {
          AlgebraicValue a = t.value(j, g) + AlgebraicValue(fg, {});
          AlgebraicValue b = t.value(j, h).conj() + AlgebraicValue(fh, {});
          for (int x = 0; x < dg; ++x)
            for (int y = 0; y < dh; ++y) acc[x * dh + y] += a.coefficients()[x] * b.coefficients()[y];
        }
        for (auto& c : acc) ok = ok && c == 0;
      }
      if (!ok) {
        r.columns_ok = false;
        r.failures.push_back("columns " + t.classes()[g] + " and " + t.classes()[h] + " are not orthogonal");
      }
    }
  // rows: sum_g chi_i(g) conj(chi_j(g)) / #C(g) = delta_ij
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      FieldSum s;
      for (std::size_t g = 0; g < n; ++g) {
        AlgebraicValue v = t.value(i, g) * t.value(j, g).conj();
        auto c = v.coefficients();
        for (auto& x : c) x /= cent[g];
        s.add(AlgebraicValue(v.field(), c));
      }
      mpq_class q;
      bool ok = s.rational(q) && q == (i == j ? 1 : 0);
      if (!ok) {
        r.rows_ok = false;
        r.failures.push_back("rows chi" + std::to_string(i + 1) + " and chi" + std::to_string(j + 1) +
                             " are not orthonormal");
      }
    }
  return r;
}

ModuleDecomposition decompose(const CharacterTable& t, long m, const std::map<std::string, mpz_class>& coeff) {
  std::size_t n = t.size();
  std::vector<mpz_class> a(n);
  std::vector<bool> have(n, false);
  for (auto& [label, v] : coeff) {
    std::vector<int> cls;
    auto& labels = t.classes();
    if (std::find(labels.begin(), labels.end(), label) != labels.end()) cls = {t.class_index(label)};
    else cls = t.classes_in_group(label);
    for (int g : cls) {
      a[g] = v;
      have[g] = true;
    }
  }
  for (std::size_t g = 0; g < n; ++g)
    if (!have[g]) throw CharacterTableError("no coefficient supplied for class " + t.classes()[g]);
  ModuleDecomposition d;
  d.grade = m;
  for (std::size_t j = 0; j < n; ++j) {
    FieldSum s;
    for (std::size_t g = 0; g < n; ++g) {
      AlgebraicValue v = t.value(j, g).conj();
      auto c = v.coefficients();
      mpz_class cent = t.centralizer_order(static_cast<int>(g));
      for (auto& x : c) x = x * a[g] / cent;
      s.add(AlgebraicValue(v.field(), c));
    }
    mpq_class q;
    if (!s.rational(q)) throw CharacterTableError("irrational multiplicity for chi" + std::to_string(j + 1));
    if (q.get_den() != 1) {
      std::ostringstream os;
      os << "multiplicity of chi" << j + 1 << " in grade " << m << " is " << q << ", not an integer";
      throw NonIntegralMultiplicity(os.str(), q);
    }
    d.multiplicity.push_back(q.get_num());
  }
  return d;
}

std::vector<mpz_class> recompose(const CharacterTable& t, const ModuleDecomposition& d) {
  std::vector<mpz_class> out;
  for (std::size_t g = 0; g < t.size(); ++g) {
    AlgebraicValue s;
    for (std::size_t j = 0; j < t.size(); ++j) s += AlgebraicValue(mpq_class(d.multiplicity[j])) * t.value(j, g);
    mpq_class q = s.rational();
    out.push_back(q.get_num());
  }
  return out;
}

PositivityReport positivity_scan(long mmax, const std::vector<ModuleDecomposition>& decomps) {
  PositivityReport r;
  for (auto& d : decomps) {
    if (d.grade > mmax) continue;
    for (std::size_t j = 0; j < d.multiplicity.size(); ++j)
      if (d.multiplicity[j] < 0) {
        r.negatives.emplace_back(d.grade, static_cast<int>(j) + 1);
        if (std::find(r.allowed.begin(), r.allowed.end(), d.grade) == r.allowed.end()) r.pass = false;
      }
  }
  return r;
}

IdentityReport monster_identity_check(const CharacterTable& t, long perturb) {
  IdentityReport r;
  mpz_class d1 = t.degree(0), d7 = t.degree(6) + perturb, d12 = t.degree(11), d18 = t.degree(17);
  r.lhs = 196884;
  r.rhs = 5 * d1 + 2 * d7 + d12 + d18;
  r.pass = r.lhs == r.rhs;
  std::ostringstream os;
  os << "196884 " << (r.pass ? "=" : "!=") << " 5*" << d1 << " + 2*" << d7 << " + " << d12 << " + " << d18 << " = "
     << r.rhs;
  r.text = os.str();
  return r;
}

std::vector<ModuleDecomposition> load_multiplicities(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CharacterTableError("multiplicity file not found: " + path);
  std::vector<ModuleDecomposition> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream is(line);
    ModuleDecomposition d;
    is >> d.grade;
    std::string v;
    while (is >> v) d.multiplicity.push_back(mpz_class(v));
    out.push_back(std::move(d));
  }
  return out;
}

std::vector<ModuleDecomposition> load_default_multiplicities() {
  return load_multiplicities(data_directory() + "/reference_multiplicities.txt");
}

}  // namespace onan
