#include "onan/cmeval.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <mutex>

#include "onan/cuspdata.hpp"

namespace onan {

using mp::Bits;
using mp::Complex;
using mp::Real;

namespace {

constexpr double kLn2 = 0.69314718055994530942;
constexpr double kTwoPi = 6.28318530717958647692;

using Coeffs = std::shared_ptr<const std::vector<mpz_class>>;

// Growing, thread-safe tables of integer coefficients.
class CoefficientCache {
 public:
  using Builder = std::function<std::vector<mpz_class>(long)>;
  explicit CoefficientCache(Builder b) : build_(std::move(b)) {}

  Coeffs get(long count) {
    std::lock_guard<std::mutex> lock(mu_);
    if (!data_ || static_cast<long>(data_->size()) < count) {
      long n = std::max(count, data_ ? 2 * static_cast<long>(data_->size()) : 256L);
      data_ = std::make_shared<const std::vector<mpz_class>>(build_(n));
    }
    return data_;
  }

 private:
  Builder build_;
  std::mutex mu_;
  Coeffs data_;
};

std::vector<mpz_class> sigma_table(int k, long n) {
  std::vector<mpz_class> s(n, 0);
  for (long d = 1; d < n; ++d) {
    mpz_class dk;
    mpz_ui_pow_ui(dk.get_mpz_t(), d, k);
    for (long m = d; m < n; m += d) s[m] += dk;
  }
  return s;
}

// E2 = 1 - 24 sum sigma1 q^n, E4 = 1 + 240 sum sigma3 q^n
CoefficientCache& e2_cache() {
  static CoefficientCache c([](long n) {
    auto s = sigma_table(1, n);
    s[0] = 1;
    for (long i = 1; i < n; ++i) s[i] *= -24;
    return s;
  });
  return c;
}

CoefficientCache& e4_cache() {
  static CoefficientCache c([](long n) {
    auto s = sigma_table(3, n);
    s[0] = 1;
    for (long i = 1; i < n; ++i) s[i] *= 240;
    return s;
  });
  return c;
}

// f_E19 / q
CoefficientCache& e19_cache() {
  static CoefficientCache c([](long n) {
    auto a = newform_E19_coefficients(static_cast<int>(n + 1));
    return std::vector<mpz_class>(a.begin() + 1, a.end());
  });
  return c;
}

// Horner evaluation of sum_{n < M} a_n q^n with integer a_n.
Complex horner(const std::vector<mpz_class>& a, long M, const Complex& q, mpfr_prec_t bits) {
  Real re(Bits{bits}), im(Bits{bits}), t1(Bits{bits}), t2(Bits{bits});
  for (long n = M - 1; n >= 0; --n) {
    // (re + i im)(qr + i qi) + a_n
    mpfr_mul(t1.get(), re.get(), q.re.get(), MPFR_RNDN);
    mpfr_mul(t2.get(), im.get(), q.im.get(), MPFR_RNDN);
    mpfr_sub(t1.get(), t1.get(), t2.get(), MPFR_RNDN);
    mpfr_mul(t2.get(), re.get(), q.im.get(), MPFR_RNDN);
    mpfr_fma(im.get(), im.get(), q.re.get(), t2.get(), MPFR_RNDN);
    mpfr_add_z(re.get(), t1.get(), a[n].get_mpz_t(), MPFR_RNDN);
  }
  return {re, im};
}

// sum_{n < M} a_n (s n + o)^k q^n, the k-th theta derivative of a shifted series
Complex horner_theta(const std::vector<mpz_class>& a, long M, const Complex& q, mpfr_prec_t bits, int k, long s,
                     long o) {
  if (k == 0) return horner(a, M, q, bits);
  std::vector<mpz_class> b(M);
  for (long n = 0; n < M; ++n) {
    mpz_class w;
    mpz_ui_pow_ui(w.get_mpz_t(), s * n + o, k);
    b[n] = a[n] * w;
  }
  return horner(b, M, q, bits);
}

// q = e^{2 pi i d tau}
Complex nome(const UpperPoint& tau, long d, mpfr_prec_t bits) {
  mp::PrecisionScope scope(bits + 16);
  Real y = mp::sqrt(Real(mpq_class(tau.y2)));
  Real m = mp::exp(-(mp::pi() * Real(2L * d) * y));
  Complex u = mp::unit_root(tau.x * d);
  return {m * u.re, m * u.im};
}

double log_abs_q(const UpperPoint& tau, long d) { return -kTwoPi * d * tau.imag(); }

// sum_k (-1)^k q^{k(3k-1)/2}, so that eta = q^{1/24} times this
Complex pentagonal(const Complex& q, double log_r, mpfr_prec_t bits) {
  mp::PrecisionScope scope(bits);
  Complex sum(1L);
  Complex qprev(1L), qk = q;       // q^{k-1}, q^k
  Complex Qprev(1L);               // q^{(k-1)(3k-2)/2}
  double log_eps = -double(bits) * kLn2 - 4;
  for (long k = 1;; ++k) {
    double e = double(k) * (3 * k - 1) / 2;
    if (e * log_r < log_eps) break;
    Complex P = Qprev * qprev * qk;
    Complex Q = P * qk;
    if (k % 2) sum -= P + Q;
    else sum += P + Q;
    Qprev = Q;
    qprev = qk;
    qk = qk * q;
  }
  return sum;
}

// theta^k of sum a_n q^{n + shift}, dropping the q^shift prefactor
Complex coefficient_series(CoefficientCache& cache, GrowthFit g, const Complex& q, double log_r, mpfr_prec_t bits,
                           const std::string& what, int k = 0, long dil = 1, long shift = 0) {
  g.K += k;
  g.C *= std::pow(double(dil), k) * std::pow(2.0, k);
  long M = terms_needed(g, log_r, -double(bits) * kLn2);
  if (M > 2000000) throw InsufficientOrder("series for " + what + " would need " + std::to_string(M) + " terms", M);
  auto a = cache.get(M);
  mp::PrecisionScope scope(bits);
  return horner_theta(*a, M, q, bits, k, dil, dil * shift);
}

Complex data_series(const std::vector<mpz_class>& a, GrowthFit g, const Complex& q, double log_r, mpfr_prec_t bits,
                    const std::string& what, int k = 0, long shift = 0) {
  g.K += k;
  g.C *= std::pow(2.0, k);
  long M = terms_needed(g, log_r, -double(bits) * kLn2);
  if (M > static_cast<long>(a.size()))
    throw InsufficientOrder("cusp data for " + what + " has " + std::to_string(a.size()) + " terms, " +
                                std::to_string(M) + " needed",
                            M);
  mp::PrecisionScope scope(bits);
  return horner_theta(a, M, q, bits, k, 1, shift);
}

// Discriminant of the primitive integral form vanishing at tau.
mpz_class primitive_discriminant(const UpperPoint& t) {
  // tau^2 - 2x tau + (x^2 + y2) = 0
  mpq_class b = -2 * t.x, c = t.x * t.x + t.y2;
  mpz_class l;
  mpz_lcm(l.get_mpz_t(), b.get_den_mpz_t(), c.get_den_mpz_t());
  mpz_class A = l, B = mpz_class(b * l), C = mpz_class(c * l);
  mpz_class g = gcd(gcd(A, B), C);
  A /= g;
  B /= g;
  C /= g;
  return 4 * A * C - B * B;
}

bool is_elliptic(const UpperPoint& t) {
  mpz_class D = primitive_discriminant(t);
  return D == 3 || D == 4;
}

// prod eta(d tau)^r without the q-power prefactor, and the prefactor exponent
Complex eta_product(const EtaQuotientSpec& spec, const UpperPoint& tau, mpfr_prec_t bits) {
  Complex out(Real(Bits{bits}) + Real(1L));
  for (auto& [d, r] : spec.factors) {
    Complex q = nome(tau, d, bits);
    Complex p = pentagonal(q, log_abs_q(tau, d), bits);
    out *= mp::pow(p, r);
  }
  return out;
}

Complex qpower(const UpperPoint& tau, const mpq_class& e, mpfr_prec_t bits) {
  mp::PrecisionScope scope(bits + 16);
  Real y = mp::sqrt(Real(mpq_class(tau.y2)));
  Real m = mp::exp(-(mp::pi() * Real(2L) * y * Real(e)));
  Complex u = mp::unit_root(tau.x * e);
  return {m * u.re, m * u.im};
}

struct NewformTables {
  std::vector<mpz_class> s, t;  // (f + f^s)/q and (f - f^s)/(sqrt5 q)
};

std::shared_ptr<const NewformTables> newform31_tables(const CuspStore& cusp) {
  static std::mutex mu;
  static std::map<std::string, std::shared_ptr<const NewformTables>> cache;
  if (!cusp.has("f31")) throw DataRequired("f31");
  const auto& f = cusp.get("f31");
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[f.sha256];
  if (!slot) {
    auto [S, T] = newform31_parts(cusp, f.order);
    auto tab = std::make_shared<NewformTables>();
    for (int n = 1; n < f.order; ++n) {
      mpq_class s = S.coefficient(n), t = T.coefficient(n);
      if (s.get_den() != 1 || t.get_den() != 1)
        throw CuspDataError(CuspDataError::Kind::Invariant, "f31: 2*a(n) must lie in Z[sqrt5]");
      tab->s.push_back(s.get_num());
      tab->t.push_back(t.get_num());
    }
    slot = tab;
  }
  return slot;
}

Complex hauptmodul_fixed(const HauptmodulSpec& spec, const UpperPoint& tau, mpfr_prec_t bits, const CuspStore* cusp) {
  mp::PrecisionScope scope(bits);
  auto e2 = [&]() {
    Complex num(Real(Bits{bits}));
    for (auto& [d, c] : spec.e2) {
      Complex q = nome(tau, d, bits);
      Complex v = coefficient_series(e2_cache(), {1.0, 2}, q, log_abs_q(tau, d), bits, "E2");
      num += v * Real(c);
    }
    return num;
  };
  switch (spec.kind) {
    case HauptmodulKind::EisensteinRatio: {
      Complex q = nome(tau, 1, bits);
      Complex e4 = coefficient_series(e4_cache(), {1.21, 3}, q, log_abs_q(tau, 1), bits, "E4");
      Complex delta = q * eta_product(spec.eta, tau, bits);
      return e4 * e4 * e4 / delta + Complex(Real(spec.constant));
    }
    case HauptmodulKind::EtaQuotient: {
      Complex v = qpower(tau, spec.eta.leading_exponent(), bits) * eta_product(spec.eta, tau, bits);
      return v + Complex(Real(spec.constant));
    }
    case HauptmodulKind::AtkinLehnerSum: {
      Complex t = qpower(tau, spec.eta.leading_exponent(), bits) * eta_product(spec.eta, tau, bits);
      return t + Complex(Real(spec.al_numerator)) / t + Complex(Real(spec.constant));
    }
    case HauptmodulKind::E2OverEta: {
      Complex den = qpower(tau, spec.eta.leading_exponent(), bits) * eta_product(spec.eta, tau, bits);
      return e2() / den * Real(spec.scale) + Complex(Real(spec.constant));
    }
    case HauptmodulKind::E2OverNewform:
    case HauptmodulKind::NewformRatio: {
      // weight 2 numerator and denominator both vanish at elliptic points;
      // there the value is the ratio of the first nonvanishing derivatives
      Complex q = nome(tau, 1, bits);
      double lr = log_abs_q(tau, 1);
      std::shared_ptr<const NewformTables> tab;
      if (spec.kind == HauptmodulKind::NewformRatio) {
        if (!cusp) throw DataRequired("f31");
        tab = newform31_tables(*cusp);
      }
      auto ratio = [&](int k) {
        if (tab) {
          Complex s = data_series(tab->s, {4.0, 1}, q, lr, bits, "f31", k, 1);
          Complex t = data_series(tab->t, {4.0, 1}, q, lr, bits, "f31", k, 1);
          return std::make_pair(s, t * Real(2L));
        }
        Complex num(Real(Bits{bits}));
        for (auto& [d, c] : spec.e2) {
          Complex qd = nome(tau, d, bits);
          num += coefficient_series(e2_cache(), {1.0, 2}, qd, log_abs_q(tau, d), bits, "E2", k, d) * Real(c);
        }
        Complex f = q * coefficient_series(e19_cache(), {2.0, 1}, q, lr, bits, "f_E19", k, 1, 1);
        return std::make_pair(num, f);
      };
      int k = is_elliptic(tau) ? 1 : 0;
      for (;; ++k) {
        auto [n, d] = ratio(k);
        if (k >= 4 || d.abs().exponent() > -static_cast<long>(bits) / 2)
          return n / d * Real(spec.scale) + Complex(Real(spec.constant));
      }
    }
  }
  throw std::logic_error("unhandled Hauptmodul kind");
}

// Bits lost to cancellation near the real axis, per unit of 1/Im tau.
double cancellation_rate(const HauptmodulSpec& spec) {
  constexpr double eta_rate = 0.3777;  // pi / (12 ln 2)
  double r = 0;
  switch (spec.kind) {
    case HauptmodulKind::EisensteinRatio:
    case HauptmodulKind::EtaQuotient:
    case HauptmodulKind::AtkinLehnerSum:
      for (auto& [d, e] : spec.eta.factors) r += eta_rate * (1 + std::abs(e)) / d;
      break;
    case HauptmodulKind::E2OverEta:
      for (auto& [d, e] : spec.eta.factors) r += eta_rate * (1 + 2 * std::abs(e)) / d;
      break;
    case HauptmodulKind::E2OverNewform: r = 2 * kTwoPi / kLn2 / 19; break;
    case HauptmodulKind::NewformRatio: r = 2 * kTwoPi / kLn2 / 31; break;
  }
  return r;
}

long round_bits(double b) { return (static_cast<long>(std::ceil(b)) + 31) / 32 * 32; }

Evaluation refine(const std::function<Complex(mpfr_prec_t)>& f, long bits0, const PrecisionPolicy& policy,
                  const std::string& what) {
  long b = std::min(std::max(bits0, policy.initial_bits), policy.max_bits);
  Complex prev = f(b);
  double achieved = INFINITY;
  while (2 * b <= policy.max_bits) {
    Complex cur = f(2 * b);
    double diff = (cur - prev).abs().to_double();
    achieved = diff;
    if (diff <= policy.target_abs_error / 2 || (diff == 0)) return {cur, 2 * b, diff};
    prev = std::move(cur);
    b *= 2;
  }
  throw PrecisionError(what + ": precision limit " + std::to_string(policy.max_bits) + " bits reached", achieved);
}

void check_policy(const PrecisionPolicy& p) {
  if (!(p.target_abs_error > 0)) throw std::invalid_argument("target error must be positive");
  if (p.initial_bits > p.max_bits) throw std::invalid_argument("initial_bits exceeds max_bits");
}

}  // namespace

Complex UpperPoint::at(mpfr_prec_t bits) const {
  mp::PrecisionScope scope(bits);
  return {Real(x), mp::sqrt(Real(y2))};
}

UpperPoint UpperPoint::moved(const Mat2& g) const {
  mpq_class a(g[0]), b(g[1]), c(g[2]), d(g[3]);
  mpq_class det = a * d - b * c;
  if (det <= 0) throw std::invalid_argument("matrix must have positive determinant");
  mpq_class den = (c * x + d) * (c * x + d) + c * c * y2;
  UpperPoint p;
  p.x = ((a * x + b) * (c * x + d) + a * c * y2) / den;
  p.y2 = det * det * y2 / (den * den);
  return p;
}

double UpperPoint::imag() const { return std::sqrt(y2.get_d()); }

UpperPoint CMPoint::tau() const {
  mpq_class a2(2 * form.a);
  UpperPoint p;
  p.x = mpq_class(-form.b) / a2;
  p.y2 = mpq_class(discriminant()) / (a2 * a2);
  if (p.y2 <= 0) throw std::invalid_argument("CM point needs a positive definite form");
  return p;
}

GrowthFit fit_growth(const QSeries& series) {
  int L = series.leading_exponent();
  int n0 = std::max(L, 0);
  std::vector<double> a;
  for (int n = n0; n < series.order(); ++n) a.push_back(std::fabs(series.coefficient(n).get_d()));
  // index by n - L + 1 so growth is measured from the leading term
  GrowthFit g;
  if (a.empty()) return g;
  for (int K = 0; K <= 12; ++K) {
    double first = 0, second = 0;
    std::size_t half = a.size() / 2;
    for (std::size_t i = 0; i < a.size(); ++i) {
      double v = a[i] / std::pow(double(i + 1), K);
      (i < half ? first : second) = std::max(i < half ? first : second, v);
    }
    if (second <= first || K == 12) {
      g.K = K;
      g.C = std::max({first, second, 1e-300}) * 2;
      return g;
    }
  }
  return g;
}

long terms_needed(const GrowthFit& g, double log_r, double log_eps) {
  if (log_r >= 0) throw std::invalid_argument("|q| must be below 1");
  double lc = std::log(std::max(g.C, 1e-300));
  for (long M = 1; M < 100000000; ++M) {
    double ratio = std::exp(log_r) * std::pow(1 + 1.0 / M, g.K);
    if (ratio >= 1) continue;
    double t = lc + g.K * std::log(double(M)) + M * log_r - std::log(1 - ratio);
    if (t < log_eps) return M;
  }
  return 100000000;
}

Evaluation evaluate_eta(const UpperPoint& tau, const PrecisionPolicy& policy) {
  check_policy(policy);
  if (tau.y2 <= 0) throw std::invalid_argument("eta needs Im tau > 0");
  double y = tau.imag();
  long bits0 = round_bits(32 + std::log2(1 / policy.target_abs_error) + 0.3777 / y);
  return refine(
      [&](mpfr_prec_t b) {
        Complex q = nome(tau, 1, b);
        Complex p = pentagonal(q, log_abs_q(tau, 1), b);
        return qpower(tau, mpq_class(1, 24), b) * p;
      },
      bits0, policy, "eta");
}

Evaluation evaluate_qseries(const QSeries& series, const UpperPoint& tau, const PrecisionPolicy& policy) {
  check_policy(policy);
  if (tau.y2 <= 0) throw std::invalid_argument("evaluation needs Im tau > 0");
  GrowthFit g = fit_growth(series);
  int L = series.leading_exponent();
  double log_r = log_abs_q(tau, 1);
  double log_eps = std::log(policy.target_abs_error / 4);
  long M = terms_needed(g, log_r, log_eps);
  long avail = series.order() - L;
  if (M > avail)
    throw InsufficientOrder("series known to order " + std::to_string(series.order()) + ", about " +
                                std::to_string(M + L) + " needed",
                            M + L);
  std::vector<mpq_class> c(series.coefficients().begin(), series.coefficients().begin() + std::min<long>(M, series.coefficients().size()));
  long bits0 = round_bits(32 + std::log2(1 / policy.target_abs_error) + std::log2(std::max(1.0, g.C)));
  return refine(
      [&](mpfr_prec_t b) {
        mp::PrecisionScope scope(b);
        Complex q = nome(tau, 1, b);
        Complex z(Real(Bits{b}));
        for (long n = static_cast<long>(c.size()) - 1; n >= 0; --n) z = z * q + Complex(Real(c[n]));
        if (L != 0) z *= mp::pow(q, L);
        return z;
      },
      bits0, policy, "q-series");
}

Evaluation evaluate_hauptmodul_at(const HauptmodulSpec& spec, const UpperPoint& tau, const PrecisionPolicy& policy,
                                  const std::optional<Index2Coefficients>& index2, const CuspStore* cusp) {
  check_policy(policy);
  if (tau.y2 <= 0) throw std::invalid_argument("evaluation needs Im tau > 0");
  double y = tau.imag();
  double mag = (index2 ? 2 : 1) * kTwoPi * y / kLn2;
  long bits0 = round_bits(48 + std::log2(1 / policy.target_abs_error) + mag + cancellation_rate(spec) / y);
  return refine(
      [&](mpfr_prec_t b) {
        Complex j = hauptmodul_fixed(spec, tau, b, cusp);
        if (!index2) return j;
        mp::PrecisionScope scope(b);
        return j * j - j * Real(index2->c1) - Complex(Real(index2->c0));
      },
      bits0, policy, spec.name());
}

Evaluation evaluate_hauptmodul(const HauptmodulSpec& spec, const CMPoint& point, const PrecisionPolicy& policy,
                               const std::optional<Index2Coefficients>& index2, const CuspStore* cusp) {
  return evaluate_hauptmodul_at(spec, point.tau(), policy, index2, cusp);
}

}  // namespace onan
