#pragma once

#include <gmpxx.h>

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "onan/cmeval.hpp"

namespace onan {

class RecognitionError : public std::runtime_error {
 public:
  RecognitionError(const std::string& what, double value) : std::runtime_error(what), value_(value) {}
  double unrounded() const { return value_; }

 private:
  double value_;
};

class IntegralityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TraceContext {
  const CuspStore* cusp = nullptr;
  PrecisionPolicy policy{1e-12, 128, 8192};
  // checkpoint directory for per-D results; empty disables
  std::string cache_dir;

  // reads ONAN_CACHE_DIR and ONAN_PRECISION_BITS
  static TraceContext from_environment(const CuspStore* cusp);
};

using PointFunction = std::function<Evaluation(const CMPoint&, const PrecisionPolicy&)>;

// sum over Gamma0(N)-classes of f(tau_Q) / omega_Q, recognised in (1/24)Z
mpq_class trace_singular_moduli(int N, long D, const PointFunction& f, const PrecisionPolicy& policy = {1e-12, 128, 8192});
// Round to (1/24)Z; throws RecognitionError when the residual exceeds tol.
mpq_class recognise(double value, double tol = 1e-6);

mpq_class trace4(int N, long D, const TraceContext& ctx = {});
mpq_class trace4_plus(int N, long D, const TraceContext& ctx = {});

// 1/6 for 14, 1/4 for 28, else 1
mpq_class trace_alpha(int N);
int distinct_prime_count(long n);

struct TraceSeries {
  int level = 1;
  bool plus = false;
  long dmax = 0;
  std::map<long, mpq_class> coeff;  // D -> coefficient of q^D; principal part is -q^-4
  std::vector<long> nonintegral;     // D with coefficient outside alpha_N Z

  mpq_class coefficient(long D) const;
};

// strict: throw IntegralityError on the first coefficient outside alpha_N Z
TraceSeries trace_series(int N, bool plus, long dmax, const TraceContext& ctx = {}, bool strict = false);
bool has_trace(int N, bool plus);

}  // namespace onan
