#pragma once

#include <gmpxx.h>

#include <complex>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "onan/mp.hpp"

namespace onan {

using ComplexLD = std::complex<long double>;

// Weight 3/2 Kloosterman sum
//   sum over d mod c, (d, c) = 1, of (c/d) eps_d^3 e((m dbar + n d) / c),
// eps_d = 1 or i as d = 1 or 3 mod 4. Requires 4 | c. Terms are collected by
// their exact angle in (1/8c)Z and summed at max(bits, 64 + log2 c) bits.
mp::Complex kloosterman(long m, long n, long c, mpfr_prec_t bits = 0);

// Same sum in long double, for the Rademacher kernel.
ComplexLD kloosterman_ld(long m, long n, long c);

// Kronecker symbol (c/d) for odd d > 0.
int kronecker_odd(long c, long d);

// I_{1/2}(x) by its power series, summed until the tail bound is below 2^-bits.
mp::Real bessel_i_half(const mp::Real& x);

struct RademacherQuery {
  int N = 1;            // level 4N
  long mu = -4;         // index, mu <= 0, mu = 0, 3 mod 4
  long n = 3;
  long cmax = 100000;   // moduli C = 4N c up to cmax
  bool plus = true;     // plus-space projected sum; false gives the unprojected series at level 4N
};

struct TrailPoint {
  long c = 0;           // modulus 4N c reached
  ComplexLD partial;    // partial sum up to it, prefactor included
};

struct RademacherResult {
  RademacherQuery query;
  ComplexLD value;      // Cesaro mean of the partial sums over the last quarter of the moduli
  ComplexLD raw;        // partial sum at cmax
  std::vector<TrailPoint> trail;
  long terms = 0;
  // Spread of the partial sums over the averaging window.
  long double window_spread = 0;
};

class RademacherError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

RademacherResult rademacher_coefficient(const RademacherQuery& q);

// Several (mu, n) at one level sharing one pass over the moduli. Keyed by (mu, n).
std::map<std::pair<long, long>, RademacherResult> rademacher_batch(int N, const std::vector<long>& mus,
                                                                   const std::vector<long>& ns, long cmax,
                                                                   bool plus = true, long trail_stride = 1);

// -12/phi(N) sum_{d | N} d / [SL2(Z) : Gamma0(d)] mu(N/d) H^(d)(n), the index 0 sum.
mpq_class index0_exact(int N, long n);

struct RademacherCheckRow {
  std::string group;
  long n = 0;
  std::string what;     // "F" for -R[-4] + 2R[0], "R0" for the index 0 sum alone
  long double exact = 0;
  long double numeric = 0;
  long double error = 0;
  long double tolerance = 0;
  bool pass = false;
};

struct RademacherCheckReport {
  long cmax = 0;
  std::vector<RademacherCheckRow> rows;
  bool pass() const;
};

// o(g) in {1, 2, 3, 4}, n in [nmin, nmax] with n = 0, 3 mod 4. The tolerance is
// rel * max(|exact|, 1).
class SeriesStore;
RademacherCheckReport rademacher_crosscheck(long cmax, long nmin, long nmax, SeriesStore& store, long double rel = 0.01L);

}  // namespace onan
