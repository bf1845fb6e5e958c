#include "onan/traces.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>

#include "onan/cuspdata.hpp"

namespace onan {

namespace {

Index2Coefficients index2_for(int level, bool plus, const CuspStore* cusp) {
  static std::mutex mu;
  static std::map<std::pair<int, bool>, Index2Coefficients> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(level, plus);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto j = hauptmodul_expansion(hauptmodul_spec(level, plus), 4, cusp);
  auto i2 = index2_function(j);
  Index2Coefficients c{i2.c1, i2.c0};
  cache[key] = c;
  return c;
}

PointFunction hauptmodul_function(int level, bool plus, bool index2, const CuspStore* cusp) {
  auto spec = hauptmodul_spec(level, plus);
  std::optional<Index2Coefficients> i2;
  if (index2) i2 = index2_for(level, plus, cusp);
  return [spec, i2, cusp](const CMPoint& p, const PrecisionPolicy& pol) {
    return evaluate_hauptmodul(spec, p, pol, i2, cusp);
  };
}

std::string cache_file(const TraceContext& ctx, int N, bool plus, long D) {
  return ctx.cache_dir + "/traces/v2_" + std::to_string(N) + (plus ? "p" : "") + "_" + std::to_string(D);
}

std::optional<mpq_class> cache_read(const TraceContext& ctx, int N, bool plus, long D) {
  if (ctx.cache_dir.empty()) return std::nullopt;
  std::ifstream in(cache_file(ctx, N, plus, D));
  std::string s;
  if (!(in >> s)) return std::nullopt;
  try {
    mpq_class q(s);
    q.canonicalize();
    return q;
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }
}

void cache_write(const TraceContext& ctx, int N, bool plus, long D, const mpq_class& v) {
  if (ctx.cache_dir.empty()) return;
  std::error_code ec;
  std::filesystem::create_directories(ctx.cache_dir + "/traces", ec);
  if (ec) return;
  // write-then-rename keeps concurrent readers from seeing partial files
  std::string path = cache_file(ctx, N, plus, D);
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    out << v.get_str() << "\n";
  }
  std::filesystem::rename(tmp, path, ec);
}

mpq_class trace_with_retry(int N, long D, const PointFunction& f, const PrecisionPolicy& policy) {
  try {
    return trace_singular_moduli(N, D, f, policy);
  } catch (const RecognitionError&) {
    PrecisionPolicy tighter = policy;
    tighter.target_abs_error = policy.target_abs_error * 1e-10;
    tighter.initial_bits = policy.initial_bits * 2;
    return trace_singular_moduli(N, D, f, tighter);
  }
}

}  // namespace

TraceContext TraceContext::from_environment(const CuspStore* cusp) {
  TraceContext ctx;
  ctx.cusp = cusp;
  if (const char* d = std::getenv("ONAN_CACHE_DIR")) ctx.cache_dir = d;
  if (const char* b = std::getenv("ONAN_PRECISION_BITS")) {
    long bits = std::atol(b);
    if (bits >= 64) {
      ctx.policy.initial_bits = bits;
      ctx.policy.max_bits = std::max(ctx.policy.max_bits, 4 * bits);
    }
  }
  return ctx;
}

mpq_class recognise(double value, double tol) {
  double scaled = value * 24;
  double r = std::nearbyint(scaled);
  if (!std::isfinite(value) || std::fabs(scaled - r) / 24 >= tol) {
    std::ostringstream os;
    os.precision(17);
    os << "trace value " << value << " is not within " << tol << " of (1/24)Z";
    throw RecognitionError(os.str(), value);
  }
  mpz_class num;
  mpz_set_d(num.get_mpz_t(), r);
  mpq_class q(num, 24);
  q.canonicalize();
  return q;
}

mpq_class trace_singular_moduli(int N, long D, const PointFunction& f, const PrecisionPolicy& policy) {
  auto orbits = heegner_orbits(N, D);
  if (orbits.empty()) return 0;
  std::vector<std::pair<Evaluation, long>> values;
  long bits = 256;
  for (auto& o : orbits) {
    values.emplace_back(f(CMPoint{o.representative}, policy), o.omega);
    bits = std::max(bits, values.back().first.bits);
  }
  // wide enough to keep every digit of the largest singular modulus
  mp::PrecisionScope scope(bits + 64);
  mp::Real sum_re(0L), sum_im(0L);
  double err = 0;
  for (auto& [e, omega] : values) {
    mp::Real w(mpq_class(1, omega));
    sum_re += e.value.re * w;
    sum_im += e.value.im * w;
    err += e.error_estimate;
  }
  // the orbit sum is real for the rational functions traced here
  double im = sum_im.to_double();
  if (std::fabs(im) > 1e-6 + 10 * err) {
    std::ostringstream os;
    os << "trace at N=" << N << " D=" << D << " has imaginary part " << im;
    throw RecognitionError(os.str(), sum_re.to_double());
  }
  // round exactly in multiprecision to keep large traces (D = 163) intact
  mp::Real scaled = sum_re * mp::Real(24L);
  mpz_class r = scaled.round();
  mp::Real resid = mp::abs(scaled - mp::Real(r)) / mp::Real(24L);
  if (resid.to_double() >= 1e-6) {
    std::ostringstream os;
    os << "trace at N=" << N << " D=" << D << " not recognised, residual " << resid.to_double();
    throw RecognitionError(os.str(), sum_re.to_double());
  }
  mpq_class q(r, 24);
  q.canonicalize();
  return q;
}

int distinct_prime_count(long n) { return static_cast<int>(prime_divisors(n).size()); }

mpq_class trace_alpha(int N) {
  if (N == 14) return mpq_class(1, 6);
  if (N == 28) return mpq_class(1, 4);
  return 1;
}

bool has_trace(int N, bool plus) {
  if (!has_hauptmodul(N, plus)) return false;
  int half = N % 2 == 0 ? N / 2 : N;
  return has_hauptmodul(half, plus) || (!plus && N == 1);
}

mpq_class trace4(int N, long D, const TraceContext& ctx) {
  if (auto c = cache_read(ctx, N, false, D)) return *c;
  int half = N % 2 == 0 ? N / 2 : N;
  mpq_class a = trace_with_retry(N, D, hauptmodul_function(N, false, true, ctx.cusp), ctx.policy);
  mpq_class b = trace_with_retry(half, D, hauptmodul_function(half, false, false, ctx.cusp), ctx.policy);
  mpq_class v = (a - b) / 2;
  cache_write(ctx, N, false, D, v);
  return v;
}

mpq_class trace4_plus(int N, long D, const TraceContext& ctx) {
  if (auto c = cache_read(ctx, N, true, D)) return *c;
  int half = N % 2 == 0 ? N / 2 : N;
  mpq_class a = trace_with_retry(N, D, hauptmodul_function(N, true, true, ctx.cusp), ctx.policy);
  // J^(M,+) is the Atkin-Lehner sum of J^(M) when X0(M) has genus 0; the
  // involutions permute the Heegner points, so 2^-w(M) Tr(sum) = Tr(J^(M)).
  bool genus0 = half != N && has_hauptmodul(half, false);
  mpq_class b = trace_with_retry(half, D, hauptmodul_function(half, !genus0, false, ctx.cusp), ctx.policy);
  mpq_class wa(1, 1L << distinct_prime_count(N)), wb(1, genus0 ? 1L : 1L << distinct_prime_count(half));
  mpq_class v = (wa * a - wb * b) / 2;
  cache_write(ctx, N, true, D, v);
  return v;
}

mpq_class TraceSeries::coefficient(long D) const {
  if (D == -4) return -1;
  if (D < 0 || D > dmax) throw std::out_of_range("trace series coefficient out of range");
  auto it = coeff.find(D);
  return it == coeff.end() ? mpq_class(0) : it->second;
}

TraceSeries trace_series(int N, bool plus, long dmax, const TraceContext& ctx, bool strict) {
  if (!has_hauptmodul(N, plus)) throw std::invalid_argument("no trace series at level " + std::to_string(N));
  TraceSeries s;
  s.level = N;
  s.plus = plus;
  s.dmax = dmax;
  mpq_class alpha = plus ? trace_alpha(N) : mpq_class(1);
  for (long D = 3; D <= dmax; ++D) {
    if (D % 4 == 1 || D % 4 == 2) continue;
    mpq_class v = plus ? trace4_plus(N, D, ctx) : trace4(N, D, ctx);
    mpq_class r = v / alpha;
    if (r.get_den() != 1) {
      s.nonintegral.push_back(D);
      if (!strict) {
        if (v != 0) s.coeff[D] = v;
        continue;
      }
      std::ostringstream os;
      os << "trace coefficient at N=" << N << (plus ? "+" : "") << " D=" << D << " is " << v
         << ", not in " << alpha << "Z";
      throw IntegralityError(os.str());
    }
    if (v != 0) s.coeff[D] = v;
  }
  return s;
}

}  // namespace onan
