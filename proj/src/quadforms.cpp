#include "onan/quadforms.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <set>

namespace onan {

BinaryQuadraticForm transform(const BinaryQuadraticForm& q, const Mat2& g) {
  long al = g[0], be = g[1], ga = g[2], de = g[3];
  BinaryQuadraticForm r;
  r.a = q.value(al, ga);
  r.c = q.value(be, de);
  r.b = 2 * q.a * al * be + q.b * (al * de + be * ga) + 2 * q.c * ga * de;
  return r;
}

std::vector<ReducedForm> reduced_forms(long D) {
  if (D <= 0 || (D % 4 != 0 && D % 4 != 3))
    throw DiscriminantError("D = " + std::to_string(D) + " is not a positive integer = 0,3 mod 4");
  std::vector<ReducedForm> out;
  for (long a = 1; 3 * a * a <= D; ++a) {
    for (long b = -a + 1; b <= a; ++b) {
      if (((b % 2) + 2) % 2 != D % 2) continue;
      long num = b * b + D;
      if (num % (4 * a)) continue;
      long c = num / (4 * a);
      if (c < a) continue;
      if (a == c && b < 0) continue;
      ReducedForm r;
      r.form = {a, b, c};
      r.w = (a == b && b == c) ? 3 : (b == 0 && a == c) ? 2 : 1;
      out.push_back(r);
    }
  }
  return out;
}

std::vector<Mat2> automorphs(const BinaryQuadraticForm& q) {
  // automorphs of a positive form are conjugate to ones with small entries;
  // reduce first, then search a small box and conjugate back
  std::vector<Mat2> out;
  for (long a = -2; a <= 2; ++a)
    for (long b = -2; b <= 2; ++b)
      for (long c = -2; c <= 2; ++c)
        for (long d = -2; d <= 2; ++d) {
          if (a * d - b * c != 1) continue;
          Mat2 g{a, b, c, d};
          if (transform(q, g) == q) out.push_back(g);
        }
  return out;
}

long sl2_index(long N) {
  long r = N;
  for (long p : prime_divisors(N)) r = r / p * (p + 1);
  return r;
}

std::vector<long> prime_divisors(long n) {
  std::vector<long> ps;
  for (long p = 2; p * p <= n; ++p)
    if (n % p == 0) {
      ps.push_back(p);
      while (n % p == 0) n /= p;
    }
  if (n > 1) ps.push_back(n);
  return ps;
}

long euler_phi(long n) {
  long r = n;
  for (long p : prime_divisors(n)) r = r / p * (p - 1);
  return r;
}

int moebius(long n) {
  int s = 1;
  for (long p = 2; p * p <= n; ++p)
    if (n % p == 0) {
      n /= p;
      if (n % p == 0) return 0;
      s = -s;
    }
  if (n > 1) s = -s;
  return s;
}

bool heegner_condition(int N, long D) { return count_square_roots(N, D) > 0; }

long count_square_roots(int N, long D) {
  long m = 4L * N, cnt = 0;
  for (long b = 0; b < 2L * N; ++b)
    if (((b * b + D) % m) == 0) ++cnt;
  return cnt;
}

namespace {

long mod(long x, long n) { return ((x % n) + n) % n; }

struct P1 {
  long N;
  std::vector<std::pair<long, long>> points;
  std::map<std::pair<long, long>, int> index;
  std::vector<long> units;

  explicit P1(long n) : N(n) {
    for (long u = 1; u <= std::max(1L, N); ++u)
      if (std::gcd(u, N) == 1) units.push_back(u % std::max(1L, N));
    for (long x = 0; x < N; ++x)
      for (long y = 0; y < N; ++y) {
        if (std::gcd(std::gcd(x, y), N) != 1) continue;
        auto c = canonical(x, y);
        if (!index.count(c)) {
          index[c] = static_cast<int>(points.size());
          points.push_back(c);
        }
      }
    if (N == 1) {
      points = {{0, 0}};
      index[{0, 0}] = 0;
    }
  }

  std::pair<long, long> canonical(long x, long y) const {
    if (N == 1) return {0, 0};
    std::pair<long, long> best{N, N};
    for (long u : units) best = std::min(best, std::make_pair(mod(u * x, N), mod(u * y, N)));
    return best;
  }

  int of(long x, long y) const { return index.at(canonical(mod(x, N), mod(y, N))); }
};

const P1& p1_for(long N) {
  static std::mutex mu;
  static std::map<long, std::unique_ptr<P1>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& p = cache[N];
  if (!p) p = std::make_unique<P1>(N);
  return *p;
}

long ext_gcd(long a, long b, long& x, long& y) {
  if (b == 0) {
    x = a >= 0 ? 1 : -1;
    y = 0;
    return std::labs(a);
  }
  long x1, y1;
  long g = ext_gcd(b, a % b, x1, y1);
  x = y1;
  y = x1 - (a / b) * y1;
  return g;
}

// Complete the primitive column (x, y) to a matrix in SL2(Z).
Mat2 complete(long x, long y) {
  long u, v;
  ext_gcd(x, y, u, v);  // u x + v y = 1
  // [[x, -v], [y, u]] has determinant x u + v y = 1
  return Mat2{x, -v, y, u};
}

std::vector<HeegnerOrbit> orbits_in_class(const BinaryQuadraticForm& q, long N, long D) {
  const P1& p1 = p1_for(N);
  auto auts = automorphs(q);
  int npts = static_cast<int>(p1.points.size());
  std::vector<int> orbit_of(npts, -1);
  std::vector<std::vector<int>> orbits;
  for (int i = 0; i < npts; ++i) {
    auto [x, y] = p1.points[i];
    if (N > 1 && mod(q.value(x, y), N) != 0) continue;
    if (orbit_of[i] >= 0) continue;
    std::vector<int> orb{i};
    orbit_of[i] = static_cast<int>(orbits.size());
    for (std::size_t k = 0; k < orb.size(); ++k) {
      auto [px, py] = p1.points[orb[k]];
      for (auto& g : auts) {
        int j = p1.of(g[0] * px + g[1] * py, g[2] * px + g[3] * py);
        if (orbit_of[j] < 0) {
          orbit_of[j] = orbit_of[i];
          orb.push_back(j);
        }
      }
    }
    orbits.push_back(orb);
  }
  std::vector<HeegnerOrbit> out;
  if (orbits.empty()) return out;
  // minimal a over each orbit: enumerate primitive vectors by increasing norm bound
  std::size_t n = orbits.size();
  std::vector<long> best_a(n, -1);
  std::vector<BinaryQuadraticForm> best(n);
  long X = std::max(N, q.a);
  for (;;) {
    std::fill(best_a.begin(), best_a.end(), -1);
    long ymax = static_cast<long>(std::sqrt(4.0 * q.a * X / D)) + 1;
    for (long y = -ymax; y <= ymax; ++y) {
      // a (x + b y / 2a)^2 <= X - D y^2 / 4a
      double rem = X - double(D) * y * y / (4.0 * q.a);
      if (rem < 0) continue;
      double cx = -double(q.b) * y / (2.0 * q.a);
      double r = std::sqrt(rem / q.a);
      for (long x = static_cast<long>(std::floor(cx - r)) - 1; x <= static_cast<long>(std::ceil(cx + r)) + 1; ++x) {
        if (std::gcd(std::labs(x), std::labs(y)) != 1) continue;
        long v = q.value(x, y);
        if (v > X) continue;
        if (N > 1 && v % N) continue;
        int o = orbit_of[p1.of(x, y)];
        if (o < 0) continue;
        Mat2 g = complete(x, y);
        BinaryQuadraticForm f = transform(q, g);
        f.b = mod(f.b, 2 * f.a);
        f.c = (f.b * f.b + D) / (4 * f.a);
        if (best_a[o] < 0 || f.a < best[o].a || (f.a == best[o].a && f.b < best[o].b)) {
          best[o] = f;
          best_a[o] = f.a;
        }
      }
    }
    if (std::all_of(best_a.begin(), best_a.end(), [](long v) { return v >= 0; })) break;
    X *= 2;
  }
  int naut = static_cast<int>(auts.size());
  for (std::size_t o = 0; o < n; ++o) {
    HeegnerOrbit h;
    h.representative = best[o];
    h.level = static_cast<int>(N);
    h.omega = naut / (2 * static_cast<int>(orbits[o].size()));
    out.push_back(h);
  }
  return out;
}

}  // namespace

std::vector<HeegnerOrbit> heegner_orbits(int N, long D) {
  if (N <= 0) throw std::invalid_argument("level must be positive");
  static std::mutex mu;
  static std::map<std::pair<int, long>, std::vector<HeegnerOrbit>> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find({N, D});
    if (it != cache.end()) return it->second;
  }
  auto forms = reduced_forms(D);
  std::vector<HeegnerOrbit> out;
  if (heegner_condition(N, D)) {
    for (auto& rf : forms) {
      auto part = orbits_in_class(rf.form, N, D);
      out.insert(out.end(), part.begin(), part.end());
    }
  }
  std::sort(out.begin(), out.end(),
            [](const HeegnerOrbit& x, const HeegnerOrbit& y) { return x.representative < y.representative; });
  std::lock_guard<std::mutex> lock(mu);
  cache[{N, D}] = out;
  return out;
}

mpq_class hurwitz_class_number(int N, long D) {
  mpq_class h = 0;
  for (auto& o : heegner_orbits(N, D)) h += mpq_class(1, o.omega);
  return h;
}

mpq_class ClassNumberSeries::coefficient(long D) const {
  if (D == 0) return constant;
  if (D < 0 || D > dmax) throw std::out_of_range("class number coefficient out of range");
  return coeff[D];
}

ClassNumberSeries class_series(int N, long dmax) {
  if (dmax < 0) throw std::invalid_argument("dmax must be nonnegative");
  ClassNumberSeries s;
  s.level = N;
  s.dmax = dmax;
  s.constant = mpq_class(-sl2_index(N), 12);
  s.constant.canonicalize();
  s.coeff.assign(dmax + 1, 0);
  s.coeff[0] = s.constant;
  for (long D = 3; D <= dmax; ++D)
    if (D % 4 == 0 || D % 4 == 3) s.coeff[D] = hurwitz_class_number(N, D);
  return s;
}

double class_number_constant(double eps) {
  double bound = std::exp(1.0 / (2 * eps));
  double c = 1;
  for (long p = 2; p < bound; ++p) {
    bool prime = true;
    for (long d = 2; d * d <= p; ++d)
      if (p % d == 0) prime = false;
    if (!prime) continue;
    double lp = std::log(double(p));
    c /= 2 * eps * std::pow(double(p), 1 / lp - 2 * eps) * lp;
  }
  return c;
}

double class_number_bound(int N, long D, double eps) {
  if (D < 5) throw std::invalid_argument("class number bound needs D >= 5");
  if (eps <= 0) throw std::invalid_argument("eps must be positive");
  double d = double(D);
  return sl2_index(N) * class_number_constant(eps) * std::pow(d, eps) * std::sqrt(d) / (2 * M_PI) *
         (1 + 0.5 * std::log(d));
}

}  // namespace onan
