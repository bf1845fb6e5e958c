#include "onan/rademacher.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <thread>

#include "onan/mtseries.hpp"
#include "onan/quadforms.hpp"

namespace onan {

namespace {

constexpr long double kPi = 3.141592653589793238462643383279502884L;

long inverse_mod(long a, long m) {
  long r0 = ((a % m) + m) % m, r1 = m, s0 = 1, s1 = 0;
  while (r1) {
    long q = r0 / r1;
    long t = r0 - q * r1;
    r0 = r1;
    r1 = t;
    t = s0 - q * s1;
    s0 = s1;
    s1 = t;
  }
  if (r0 != 1) throw std::invalid_argument("not invertible");
  return ((s0 % m) + m) % m;
}

long two_adic(long c, long* odd) {
  long a = 0;
  while (c % 2 == 0) {
    c /= 2;
    ++a;
  }
  *odd = c;
  return a;
}

// (x / c) for odd c and 0 <= x < c, zero off the units
std::vector<int8_t> jacobi_table(long c) {
  std::vector<int8_t> t(c, 1);
  long r = c;
  for (long p = 3; r > 1; p += 2) {
    if (p * p > r) p = r;
    if (r % p) continue;
    int e = 0;
    while (r % p == 0) {
      r /= p;
      ++e;
    }
    std::vector<int8_t> leg(p, -1);
    leg[0] = 0;
    for (long x = 1; x < p; ++x) leg[x * x % p] = 1;
    for (long x = 0; x < c; ++x) {
      int8_t l = leg[x % p];
      if (l == 0) t[x] = 0;
      else if (e % 2) t[x] = static_cast<int8_t>(t[x] * l);
    }
  }
  return t;
}

// Units d of Z/C with their multiplier (C/d), class d mod 4 and inverse.
struct UnitData {
  std::vector<long> d, dbar;
  std::vector<int8_t> chi;
  std::vector<uint8_t> three;  // d = 3 mod 4
};

UnitData units(long C, bool inverses) {
  long odd;
  long a = two_adic(C, &odd);
  auto jac = jacobi_table(odd);
  UnitData u;
  u.d.reserve(C / 2);
  for (long d = 1; d < C; d += 2) {
    int j = jac[d % odd];
    if (j == 0) continue;
    // (C/d) = (2/d)^a (d/odd) (-1)^{(odd-1)/2 (d-1)/2}
    int two = (d % 8 == 1 || d % 8 == 7) ? 1 : -1;
    int s = (a % 2 ? two : 1) * j;
    if ((odd % 4 == 3) && (d % 4 == 3)) s = -s;
    u.d.push_back(d);
    u.chi.push_back(static_cast<int8_t>(s));
    u.three.push_back(d % 4 == 3);
  }
  if (inverses) {
    // batch inversion: one extended Euclid per modulus
    std::size_t k = u.d.size();
    std::vector<long> prefix(k);
    long acc = 1;
    for (std::size_t i = 0; i < k; ++i) prefix[i] = acc = acc * u.d[i] % C;
    long inv = inverse_mod(acc, C);
    u.dbar.resize(k);
    for (std::size_t i = k; i-- > 0;) {
      u.dbar[i] = i ? inv * prefix[i - 1] % C : inv;
      inv = inv * u.d[i] % C;
    }
  }
  return u;
}

// e(j / C) for 0 <= j < C, 4 | C
struct RootTable {
  std::vector<long double> re, im;
  explicit RootTable(long C) : re(C), im(C) {
    long q = C / 4;
    for (long j = 0; j < q; ++j) {
      long double t = 2 * kPi * j / C;
      re[j] = cosl(t);
      im[j] = sinl(t);
    }
    for (long j = 0; j < q; ++j) {
      re[j + q] = -im[j];
      im[j + q] = re[j];
      re[j + 2 * q] = -re[j];
      im[j + 2 * q] = -im[j];
      re[j + 3 * q] = im[j];
      im[j + 3 * q] = -re[j];
    }
  }
};

// K(mu_i, n_j, C) for all pairs, row-major in mus.
std::vector<ComplexLD> kloosterman_many(long C, const std::vector<long>& mus, const std::vector<long>& ns) {
  bool need_inverse = std::any_of(mus.begin(), mus.end(), [](long m) { return m != 0; });
  UnitData u = units(C, need_inverse);
  RootTable e(C);
  std::size_t P = mus.size() * ns.size();
  std::vector<long double> ar(P), ai(P), br(P), bi(P);
  std::vector<long> mm(mus.size()), nn(ns.size());
  for (std::size_t i = 0; i < mus.size(); ++i) mm[i] = ((mus[i] % C) + C) % C;
  for (std::size_t j = 0; j < ns.size(); ++j) nn[j] = ((ns[j] % C) + C) % C;
  for (std::size_t k = 0; k < u.d.size(); ++k) {
    long d = u.d[k];
    long double s = u.chi[k];
    bool three = u.three[k];
    for (std::size_t i = 0; i < mm.size(); ++i) {
      long base = need_inverse ? mm[i] * u.dbar[k] % C : 0;
      for (std::size_t j = 0; j < nn.size(); ++j) {
        long idx = (base + nn[j] * d) % C;
        std::size_t p = i * nn.size() + j;
        if (three) {
          br[p] += s * e.re[idx];
          bi[p] += s * e.im[idx];
        } else {
          ar[p] += s * e.re[idx];
          ai[p] += s * e.im[idx];
        }
      }
    }
  }
  // eps_d^3 = -i on the class 3 mod 4
  std::vector<ComplexLD> out(P);
  for (std::size_t p = 0; p < P; ++p) out[p] = ComplexLD(ar[p] + bi[p], ai[p] - br[p]);
  return out;
}

struct Kahan {
  ComplexLD sum{0, 0}, comp{0, 0};
  void add(ComplexLD x) {
    ComplexLD y = x - comp;
    ComplexLD t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
};

void check_query(int N, long mu, long cmax) {
  if (N < 1) throw RademacherError("level parameter N must be positive");
  if (mu > 0) throw RademacherError("index mu must be <= 0");
  if (((mu % 4) + 4) % 4 != 0 && ((mu % 4) + 4) % 4 != 3) throw RademacherError("index mu must be 0 or 3 mod 4");
  if (cmax < 4L * N) throw RademacherError("cmax must be at least 4N");
}

}  // namespace

int kronecker_odd(long c, long d) {
  if (d <= 0 || d % 2 == 0) throw std::invalid_argument("kronecker_odd needs odd d > 0");
  return mpz_kronecker(mpz_class(c).get_mpz_t(), mpz_class(d).get_mpz_t());
}

mp::Complex kloosterman(long m, long n, long c, mpfr_prec_t bits) {
  if (c <= 0 || c % 4 != 0) throw std::invalid_argument("kloosterman needs 4 | c");
  long need = 64 + static_cast<long>(std::ceil(std::log2(double(c))));
  mp::PrecisionScope scope(std::max<long>(bits, need));
  UnitData u = units(c, m != 0);
  // angle index in (1/8c)Z, eps_d^3 = e(3/4) on d = 3 mod 4
  std::vector<long> count(8 * c, 0);
  long mm = ((m % c) + c) % c, nn = ((n % c) + c) % c;
  for (std::size_t k = 0; k < u.d.size(); ++k) {
    long base = m ? mm * u.dbar[k] % c : 0;
    long idx = 8 * ((base + nn * u.d[k]) % c) + (u.three[k] ? 6 * c : 0);
    count[idx % (8 * c)] += u.chi[k];
  }
  mp::Complex s(0L);
  for (long j = 0; j < 8 * c; ++j) {
    if (count[j] == 0) continue;
    s += mp::unit_root(mpq_class(j, 8 * c)) * mp::Real(count[j]);
  }
  return s;
}

ComplexLD kloosterman_ld(long m, long n, long c) {
  if (c <= 0 || c % 4 != 0) throw std::invalid_argument("kloosterman needs 4 | c");
  return kloosterman_many(c, {m}, {n})[0];
}

mp::Real bessel_i_half(const mp::Real& x) {
  if (x.sign() <= 0) throw std::invalid_argument("bessel_i_half needs x > 0");
  mpfr_prec_t bits = x.precision();
  mp::PrecisionScope scope(bits + 32);
  mp::Real h = x / mp::Real(2L);
  mp::Real h2 = h * h;
  mp::Real term = mp::sqrt(h) / mp::gamma(mp::Real(mpq_class(3, 2)));
  mp::Real sum = term;
  mp::Real eps = mp::pow(mp::Real(2L), mp::Real(-static_cast<long>(bits)));
  for (long k = 0;; ++k) {
    // term_{k+1} / term_k = h^2 / ((k + 1)(k + 3/2)), decreasing in k
    mp::Real r = h2 / (mp::Real(k + 1) * mp::Real(mpq_class(2 * k + 3, 2)));
    term *= r;
    sum += term;
    if (r < mp::Real(0.5)) {
      mp::Real tail = term * r / (mp::Real(1L) - r);
      if (tail <= eps * sum) break;
    }
  }
  mp::PrecisionScope out(bits);
  return sum * mp::Real(1L);
}

std::map<std::pair<long, long>, RademacherResult> rademacher_batch(int N, const std::vector<long>& mus,
                                                                   const std::vector<long>& ns, long cmax, bool plus,
                                                                   long trail_stride) {
  for (long mu : mus) check_query(N, mu, cmax);
  if (trail_stride < 1) trail_stride = 1;
  long step = 4L * N;
  long count = cmax / step;
  std::size_t P = mus.size() * ns.size();
  // terms[c - 1] holds the P summands at modulus 4N c
  std::vector<std::vector<ComplexLD>> terms(count);
  auto work = [&](long first, long stride) {
    for (long c = first; c <= count; c += stride) {
      long C = c * step;
      auto K = kloosterman_many(C, mus, ns);
      long double w = plus && (N * c) % 2 == 1 ? 2 : 1;
      std::vector<ComplexLD> t(P);
      for (std::size_t i = 0; i < mus.size(); ++i) {
        for (std::size_t j = 0; j < ns.size(); ++j) {
          long mu = mus[i], n = ns[j];
          long double I;
          if (mu < 0) {
            long double x = 4 * kPi * sqrtl(static_cast<long double>(-mu) * n) / C;
            I = sqrtl(2 / (kPi * x)) * sinhl(x) / C;
          } else {
            I = sqrtl(2 * kPi * n) / (powl(static_cast<long double>(C), 1.5L) * tgammal(1.5L));
          }
          t[i * ns.size() + j] = K[i * ns.size() + j] * (w * I);
        }
      }
      terms[c - 1] = std::move(t);
    }
  };
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  if (threads == 1 || count < 64) {
    work(1, 1);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, static_cast<long>(t + 1), static_cast<long>(threads));
    for (auto& th : pool) th.join();
  }
  std::map<std::pair<long, long>, RademacherResult> out;
  long window = count - count / 4;  // average over c > window
  for (std::size_t i = 0; i < mus.size(); ++i) {
    for (std::size_t j = 0; j < ns.size(); ++j) {
      long mu = mus[i], n = ns[j];
      ComplexLD kappa = 2 * kPi * std::polar(1.0L, -2 * kPi * 3 / 8);
      if (mu < 0) kappa *= powl(static_cast<long double>(n) / (-mu), 0.25L);
      RademacherResult r;
      r.query = RademacherQuery{N, mu, n, cmax, plus};
      Kahan partial;
      Kahan mean;
      long in_window = 0;
      long double lo = INFINITY, hi = -INFINITY;
      for (long c = 1; c <= count; ++c) {
        partial.add(terms[c - 1][i * ns.size() + j]);
        ComplexLD s = kappa * partial.sum;
        if (c % trail_stride == 0 || c == count) r.trail.push_back({c * step, s});
        if (c > window) {
          mean.add(s);
          ++in_window;
          lo = std::min(lo, s.real());
          hi = std::max(hi, s.real());
        }
      }
      r.terms = count;
      r.raw = kappa * partial.sum;
      r.value = in_window ? mean.sum / static_cast<long double>(in_window) : r.raw;
      r.window_spread = in_window ? hi - lo : 0;
      out[{mu, n}] = std::move(r);
    }
  }
  return out;
}

RademacherResult rademacher_coefficient(const RademacherQuery& q) {
  auto m = rademacher_batch(q.N, {q.mu}, {q.n}, q.cmax, q.plus, 1);
  return std::move(m.begin()->second);
}

mpq_class index0_exact(int N, long n) {
  mpq_class s = 0;
  for (long d = 1; d <= N; ++d) {
    if (N % d) continue;
    int mo = moebius(N / d);
    if (mo == 0) continue;
    s += mpq_class(d, sl2_index(d)) * mo * hurwitz_class_number(static_cast<int>(d), n);
  }
  mpq_class out = -12 * s / euler_phi(N);
  out.canonicalize();
  return out;
}

bool RademacherCheckReport::pass() const {
  return std::all_of(rows.begin(), rows.end(), [](const RademacherCheckRow& r) { return r.pass; });
}

RademacherCheckReport rademacher_crosscheck(long cmax, long nmin, long nmax, SeriesStore& store, long double rel) {
  RademacherCheckReport rep;
  rep.cmax = cmax;
  std::vector<long> ns;
  for (long n = nmin; n <= nmax; ++n)
    if (n % 4 == 0 || n % 4 == 3) ns.push_back(n);
  const std::pair<const char*, int> groups[] = {{"1A", 1}, {"2A", 2}, {"3A", 3}, {"4AB", 4}};
  for (auto& [g, N] : groups) {
    auto f = store.series(g, nmax);
    auto sums = rademacher_batch(N, {-4, 0}, ns, cmax, true, 64);
    for (long n : ns) {
      long double r4 = sums.at({-4, n}).value.real(), r0 = sums.at({0, n}).value.real();
      auto row = [&](const std::string& what, long double exact, long double numeric) {
        RademacherCheckRow x;
        x.group = g;
        x.n = n;
        x.what = what;
        x.exact = exact;
        x.numeric = numeric;
        x.error = fabsl(numeric - exact);
        x.tolerance = rel * std::max(fabsl(exact), 1.0L);
        x.pass = x.error <= x.tolerance;
        rep.rows.push_back(x);
      };
      row("F", f->coefficient(n).get_d(), -r4 + 2 * r0);
      row("R0", index0_exact(N, n).get_d(), r0);
    }
  }
  return rep;
}

}  // namespace onan
