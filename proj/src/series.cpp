#include "onan/series.hpp"

#include "onan/cuspdata.hpp"

#include <algorithm>
#include <sstream>

namespace onan {

QSeries::QSeries(int leading, std::vector<mpq_class> coeffs, int order)
    : leading_(leading), order_(order), c_(std::move(coeffs)) {
  normalize();
}

void QSeries::normalize() {
  if (order_ < leading_) leading_ = order_;
  c_.resize(order_ - leading_);
  // drop leading zeros so leading_exponent() is informative
  std::size_t k = 0;
  while (k < c_.size() && c_[k] == 0) ++k;
  if (k == c_.size()) {
    c_.clear();
    leading_ = order_;
    return;
  }
  if (k) {
    c_.erase(c_.begin(), c_.begin() + k);
    leading_ += static_cast<int>(k);
  }
}

QSeries QSeries::zero(int order) { return QSeries(order, {}, order); }
QSeries QSeries::constant(const mpq_class& c, int order) { return monomial(0, c, order); }
QSeries QSeries::monomial(int e, const mpq_class& c, int order) {
  if (e >= order) return zero(order);
  return QSeries(e, {c}, order);
}

int QSeries::valuation() const { return leading_; }

mpq_class QSeries::coefficient(int n) const {
  if (n >= order_)
    throw std::out_of_range("coefficient q^" + std::to_string(n) + " beyond truncation order " + std::to_string(order_));
  if (n < leading_) return 0;
  return c_[n - leading_];
}

QSeries QSeries::truncated(int order) const {
  if (order >= order_) return *this;
  return QSeries(leading_, c_, order);
}

QSeries QSeries::dilate(int d) const {
  if (d <= 0) throw std::invalid_argument("dilation must be positive");
  int lead = leading_ * d;
  int order = order_ * d;
  std::vector<mpq_class> out(order - lead);
  for (std::size_t i = 0; i < c_.size(); ++i) out[i * d] = c_[i];
  return QSeries(lead, std::move(out), order);
}

bool QSeries::is_integral() const {
  for (auto& c : c_)
    if (c.get_den() != 1) return false;
  return true;
}

QSeries& QSeries::operator+=(const QSeries& o) { return *this = *this + o; }
QSeries& QSeries::operator-=(const QSeries& o) { return *this = *this - o; }
QSeries& QSeries::operator*=(const mpq_class& s) {
  for (auto& c : c_) c *= s;
  normalize();
  return *this;
}

namespace {

QSeries combine(const QSeries& a, const QSeries& b, int sign) {
  int order = std::min(a.order(), b.order());
  int lead = std::min(a.leading_exponent(), b.leading_exponent());
  lead = std::min(lead, order);
  std::vector<mpq_class> out(order - lead);
  for (int n = lead; n < order; ++n) {
    mpq_class v = 0;
    if (n >= a.leading_exponent()) v += a.coefficient(n);
    if (n >= b.leading_exponent()) v += sign * b.coefficient(n);
    out[n - lead] = v;
  }
  return QSeries(lead, std::move(out), order);
}

}  // namespace

QSeries operator+(const QSeries& a, const QSeries& b) { return combine(a, b, 1); }
QSeries operator-(const QSeries& a, const QSeries& b) { return combine(a, b, -1); }
QSeries operator-(const QSeries& a) { return mpq_class(-1) * a; }

QSeries operator*(const mpq_class& s, const QSeries& a) {
  QSeries r = a;
  r *= s;
  return r;
}

QSeries operator*(const QSeries& a, const QSeries& b) {
  int va = a.valuation(), vb = b.valuation();
  int order = std::min({a.order() + vb, b.order() + va, a.order(), b.order()});
  if (a.coefficients().empty() || b.coefficients().empty()) return QSeries::zero(order);
  int lead = va + vb;
  if (lead >= order) return QSeries::zero(order);
  int len = order - lead;
  const auto& ca = a.coefficients();
  const auto& cb = b.coefficients();
  std::vector<mpq_class> out(len);
  mpq_class t;
  for (int i = 0; i < len && i < static_cast<int>(ca.size()); ++i) {
    if (ca[i] == 0) continue;
    int jmax = std::min<int>(len - i, cb.size());
    for (int j = 0; j < jmax; ++j) {
      mpq_mul(t.get_mpq_t(), ca[i].get_mpq_t(), cb[j].get_mpq_t());
      out[i + j] += t;
    }
  }
  return QSeries(lead, std::move(out), order);
}

QSeries inverse(const QSeries& a) {
  if (a.coefficients().empty()) throw std::domain_error("inverse of a series with no known nonzero coefficient");
  int v = a.valuation();
  // 1/a = q^{-v} / u with u = a q^{-v}, u known to relative order a.order() - v
  int rel = a.order() - v;
  const auto& c = a.coefficients();
  std::vector<mpq_class> inv(rel);
  mpq_class u0inv = 1 / c[0];
  inv[0] = u0inv;
  for (int n = 1; n < rel; ++n) {
    mpq_class s = 0;
    int kmax = std::min<int>(n, static_cast<int>(c.size()) - 1);
    for (int k = 1; k <= kmax; ++k) s += c[k] * inv[n - k];
    inv[n] = -s * u0inv;
  }
  int order = std::min(-v + rel, a.order());
  return QSeries(-v, std::move(inv), std::max(order, -v));
}

QSeries operator/(const QSeries& a, const QSeries& b) {
  if (b.coefficients().empty()) throw std::domain_error("division by a series with zero leading coefficient");
  QSeries r = a * inverse(b);
  int vb = b.valuation();
  int order = std::min({a.order() - vb, b.order() - 2 * vb + a.valuation(), a.order(), b.order()});
  return r.truncated(order);
}

QSeries pow(const QSeries& a, int n) {
  if (n < 0) return pow(inverse(a), -n);
  if (n == 0) return QSeries::constant(1, a.order());
  QSeries r, base = a;
  bool have = false;
  while (n) {
    if (n & 1) {
      r = have ? r * base : base;
      have = true;
    }
    n >>= 1;
    if (n) base = base * base;
  }
  return r;
}

mpq_class EtaQuotientSpec::leading_exponent() const {
  mpq_class s = 0;
  for (auto& [d, r] : factors) {
    mpq_class t(d * r, 24);
    t.canonicalize();
    s += t;
  }
  return s;
}

QSeries euler_product(int order) {
  // pentagonal number theorem
  std::vector<mpq_class> c(std::max(order, 0));
  for (long k = 0;; ++k) {
    bool any = false;
    for (long s : {k, -k}) {
      if (k == 0 && any) break;
      long e = s * (3 * s - 1) / 2;
      if (e < order) {
        c[e] += (k % 2 == 0) ? 1 : -1;
        any = true;
      }
    }
    if (!any) break;
  }
  return QSeries(0, std::move(c), order);
}

QSeries eta_quotient_expansion(const EtaQuotientSpec& spec, int order) {
  mpq_class lead = spec.leading_exponent();
  if (lead.get_den() != 1) throw std::invalid_argument("eta quotient leading exponent is not an integer");
  int L = static_cast<int>(lead.get_num().get_si());
  if (order <= L) throw std::invalid_argument("order must exceed the leading exponent");
  int rel = order - L;
  QSeries prod = QSeries::constant(1, rel);
  for (auto& [d, r] : spec.factors) {
    if (d <= 0) throw std::invalid_argument("eta dilation must be positive");
    QSeries e = euler_product((rel + d - 1) / d).dilate(d).truncated(rel);
    prod = prod * pow(e, r);
  }
  std::vector<mpq_class> c(prod.coefficients().begin(), prod.coefficients().end());
  QSeries out(L + prod.leading_exponent(), std::move(c), order);
  if (spec.additive_constant != 0) out += QSeries::constant(spec.additive_constant, order);
  return out;
}

QSeries eisenstein_expansion(int weight, int order) {
  long scale;
  switch (weight) {
    case 2: scale = -24; break;
    case 4: scale = 240; break;
    case 6: scale = -504; break;
    default: throw std::invalid_argument("unsupported Eisenstein weight " + std::to_string(weight));
  }
  if (order < 1) throw std::invalid_argument("order must be at least 1");
  std::vector<mpz_class> sigma(order, 0);
  for (int d = 1; d < order; ++d) {
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), d, weight - 1);
    for (int m = d; m < order; m += d) sigma[m] += p;
  }
  std::vector<mpq_class> c(order);
  c[0] = 1;
  for (int n = 1; n < order; ++n) c[n] = mpq_class(scale * sigma[n]);
  return QSeries(0, std::move(c), order);
}

std::vector<int> gamma0_levels() { return {1, 2, 3, 4, 5, 6, 7, 8, 10, 12, 16}; }
std::vector<int> plus_levels() { return {11, 14, 15, 19, 20, 28, 31}; }

bool has_hauptmodul(int level, bool plus) {
  auto v = plus ? std::vector<int>{7, 10, 11, 14, 15, 19, 20, 28, 31} : gamma0_levels();
  return std::find(v.begin(), v.end(), level) != v.end();
}

HauptmodulSpec hauptmodul_spec(int level, bool plus) {
  HauptmodulSpec s;
  s.level = level;
  s.plus = plus;
  auto eta = [&](std::vector<std::pair<int, int>> f, long c) {
    s.kind = HauptmodulKind::EtaQuotient;
    s.eta.factors = std::move(f);
    s.constant = c;
  };
  if (!plus) {
    switch (level) {
      case 1:
        s.kind = HauptmodulKind::EisensteinRatio;
        s.eta.factors = {{1, 24}};
        s.constant = -744;
        return s;
      case 2: eta({{1, 24}, {2, -24}}, 24); return s;
      case 3: eta({{1, 12}, {3, -12}}, 12); return s;
      case 4: eta({{1, 8}, {4, -8}}, 8); return s;
      case 5: eta({{1, 6}, {5, -6}}, 6); return s;
      case 6: eta({{1, 5}, {2, -1}, {3, 1}, {6, -5}}, 5); return s;
      case 7: eta({{1, 4}, {7, -4}}, 4); return s;
      case 8: eta({{1, 4}, {2, -2}, {4, 2}, {8, -4}}, 4); return s;
      case 10: eta({{1, 3}, {2, -1}, {5, 1}, {10, -3}}, 3); return s;
      case 12: eta({{1, 3}, {2, -2}, {3, -1}, {4, 1}, {6, 2}, {12, -3}}, 3); return s;
      case 16: eta({{1, 2}, {2, -1}, {8, 1}, {16, -2}}, 2); return s;
    }
  } else {
    switch (level) {
      case 7:
        s.kind = HauptmodulKind::AtkinLehnerSum;
        s.eta.factors = {{1, 4}, {7, -4}};
        s.al_numerator = 49;
        s.constant = 4;
        return s;
      case 10:
        s.kind = HauptmodulKind::AtkinLehnerSum;
        s.eta.factors = {{1, 4}, {2, -4}, {5, 4}, {10, -4}};
        s.al_numerator = 16;
        s.constant = 4;
        return s;
      case 11:
        s.kind = HauptmodulKind::E2OverEta;
        s.e2 = {{1, 1}, {11, -11}};
        s.eta.factors = {{1, 2}, {11, 2}};
        s.scale = mpq_class(-1, 10);
        s.constant = mpq_class(-22, 5);
        return s;
      case 14:
        s.kind = HauptmodulKind::E2OverEta;
        s.e2 = {{1, 1}, {2, 2}, {7, -7}, {14, -14}};
        s.eta.factors = {{1, 1}, {2, 1}, {7, 1}, {14, 1}};
        s.scale = mpq_class(-1, 18);
        s.constant = mpq_class(-7, 3);
        return s;
      case 15:
        s.kind = HauptmodulKind::E2OverEta;
        s.e2 = {{1, 1}, {3, 3}, {5, -5}, {15, -15}};
        s.eta.factors = {{1, 1}, {3, 1}, {5, 1}, {15, 1}};
        s.scale = mpq_class(-1, 16);
        s.constant = mpq_class(-5, 2);
        return s;
      case 19:
        s.kind = HauptmodulKind::E2OverNewform;
        s.e2 = {{1, 1}, {19, -19}};
        s.scale = mpq_class(-1, 18);
        s.constant = mpq_class(-4, 3);
        return s;
      case 20: eta({{2, 8}, {10, 8}, {1, -4}, {4, -4}, {5, -4}, {20, -4}}, -4); return s;
      case 28: eta({{2, 6}, {14, 6}, {1, -3}, {4, -3}, {7, -3}, {28, -3}}, -3); return s;
      case 31:
        s.kind = HauptmodulKind::NewformRatio;
        s.constant = mpq_class(-5, 2);
        return s;
    }
  }
  throw std::invalid_argument("no Hauptmodul registered for level " + std::to_string(level) + (plus ? "+" : ""));
}

std::string HauptmodulSpec::name() const { return "J^(" + std::to_string(level) + (plus ? ",+)" : ")"); }

namespace {

QSeries e2_combination(const HauptmodulSpec& spec, int order) {
  QSeries num = QSeries::zero(order);
  for (auto& [d, c] : spec.e2) {
    QSeries e = eisenstein_expansion(2, (order + d - 1) / d + 1).dilate(d).truncated(order);
    num += c * e;
  }
  return num;
}

}  // namespace

std::vector<mpz_class> newform_E19_coefficients(int count) {
  // y^2 + y = x^3 + x^2 - 9x - 15; a(p) = p + 1 - #E(F_p)
  std::vector<mpz_class> a(std::max(count, 2), 0);
  a[1] = 1;
  std::vector<int> spf(count + 1, 0);
  for (int i = 2; i <= count; ++i)
    if (!spf[i])
      for (int j = i; j <= count; j += i)
        if (!spf[j]) spf[j] = i;
  auto ap = [](long p) -> long {
    long cnt = 1;  // point at infinity
    if (p == 2) {
      for (long x = 0; x < 2; ++x)
        for (long y = 0; y < 2; ++y)
          if (((y * y + y) - (x * x * x + x * x - 9 * x - 15)) % 2 == 0) ++cnt;
      return p + 1 - cnt;
    }
    // (2y+1)^2 = 4x^3 + 4x^2 - 36x - 59
    std::vector<int> sq(p, 0);
    for (long y = 0; y < p; ++y) sq[(y * y) % p]++;
    for (long x = 0; x < p; ++x) {
      long r = ((4 * x % p * x % p * x + 4 * x % p * x - 36 * x - 59) % p + 4 * p) % p;
      cnt += sq[r];
    }
    return p + 1 - cnt;
  };
  std::vector<long> apv(count + 1, 0);
  for (int n = 2; n < count; ++n) {
    int p = spf[n];
    int m = n, k = 0;
    while (m % p == 0) { m /= p; ++k; }
    if (m > 1) {
      a[n] = a[m] * a[n / m];
      continue;
    }
    if (k == 1) {
      apv[p] = ap(p);
      a[n] = apv[p];
    } else if (p == 19) {
      a[n] = a[n / 19] * apv[19];
    } else {
      a[n] = apv[p] * a[n / p] - mpz_class(p) * a[n / p / p];
    }
  }
  a.resize(count);
  return a;
}

QSeries newform_E19_expansion(int order) {
  if (order < 2) throw std::invalid_argument("order must be at least 2");
  auto a = newform_E19_coefficients(order);
  std::vector<mpq_class> c(order);
  for (int n = 0; n < order; ++n) c[n] = mpq_class(a[n]);
  return QSeries(0, std::move(c), order);
}

std::pair<QSeries, QSeries> newform31_parts(const CuspStore& cusp, int order) {
  if (!cusp.has("f31")) throw DataRequired("f31");
  const auto& f = cusp.get("f31");
  if (f.order < order) throw DataRequired("f31");
  std::vector<mpq_class> s(order), t(order);
  for (int n = 0; n < order; ++n) {
    s[n] = 2 * f.coefficient(n);
    t[n] = 2 * f.sqrt5_coefficient(n);
  }
  return {QSeries(0, std::move(s), order), QSeries(0, std::move(t), order)};
}

QSeries hauptmodul_expansion(const HauptmodulSpec& spec, int order, const CuspStore* cusp) {
  // a couple of extra terms absorb the q^{-1} shift of divisions
  int work = order + 2;
  QSeries out;
  switch (spec.kind) {
    case HauptmodulKind::EisensteinRatio: {
      QSeries e4 = eisenstein_expansion(4, work + 1);
      QSeries delta = eta_quotient_expansion(spec.eta, work + 1);
      out = pow(e4, 3) / delta + QSeries::constant(spec.constant, work);
      break;
    }
    case HauptmodulKind::EtaQuotient:
      out = eta_quotient_expansion(spec.eta, work);
      out += QSeries::constant(spec.constant, work);
      break;
    case HauptmodulKind::AtkinLehnerSum: {
      QSeries t = eta_quotient_expansion(spec.eta, work + 2);
      out = t + spec.al_numerator * inverse(t) + QSeries::constant(spec.constant, work);
      break;
    }
    case HauptmodulKind::E2OverEta: {
      QSeries num = e2_combination(spec, work + 1);
      QSeries den = eta_quotient_expansion(spec.eta, work + 1);
      out = spec.scale * (num / den) + QSeries::constant(spec.constant, work);
      break;
    }
    case HauptmodulKind::E2OverNewform: {
      QSeries num = e2_combination(spec, work + 1);
      QSeries den = newform_E19_expansion(work + 1);
      out = spec.scale * (num / den) + QSeries::constant(spec.constant, work);
      break;
    }
    case HauptmodulKind::NewformRatio: {
      if (!cusp) throw DataRequired("f31");
      auto [s, t] = newform31_parts(*cusp, work + 1);
      out = s / (mpq_class(2) * t) + QSeries::constant(spec.constant, work);
      break;
    }
  }
  return out.truncated(order);
}

Index2 index2_function(const QSeries& haupt) {
  if (haupt.order() < 2) throw std::invalid_argument("Hauptmodul must be known to order >= 2");
  if (haupt.valuation() != -1 || haupt.coefficient(-1) != 1)
    throw std::invalid_argument("Hauptmodul must start with q^-1");
  if (haupt.coefficient(0) != 0) throw std::invalid_argument("Hauptmodul has a nonzero constant term");
  QSeries sq = haupt * haupt;
  mpq_class c1 = sq.coefficient(-1);
  QSeries rest = sq - c1 * haupt;
  mpq_class c0 = rest.coefficient(0);
  Index2 r;
  r.series = rest - QSeries::constant(c0, rest.order());
  r.c1 = c1;
  r.c0 = c0;
  return r;
}

}  // namespace onan
