#pragma once

#include <gmpxx.h>

#include <array>
#include <stdexcept>
#include <vector>

namespace onan {

struct BinaryQuadraticForm {
  long a = 0, b = 0, c = 0;

  long discriminant() const { return b * b - 4 * a * c; }
  long value(long x, long y) const { return a * x * x + b * x * y + c * y * y; }
  bool operator==(const BinaryQuadraticForm& o) const { return a == o.a && b == o.b && c == o.c; }
  bool operator<(const BinaryQuadraticForm& o) const {
    return a != o.a ? a < o.a : b != o.b ? b < o.b : c < o.c;
  }
};

// 2x2 integer matrix [[m[0], m[1]], [m[2], m[3]]].
using Mat2 = std::array<long, 4>;

// Q o g, i.e. (x, y) -> Q(g11 x + g12 y, g21 x + g22 y).
BinaryQuadraticForm transform(const BinaryQuadraticForm& q, const Mat2& g);

struct ReducedForm {
  BinaryQuadraticForm form;
  int w = 1;  // 3 for multiples of x^2+xy+y^2, 2 for multiples of x^2+y^2
};

struct HeegnerOrbit {
  BinaryQuadraticForm representative;
  int level = 1;
  int omega = 1;  // half the order of the stabilizer in Gamma0(N), counting -I
};

struct ClassNumberSeries {
  int level = 1;
  long dmax = 0;
  mpq_class constant;
  std::vector<mpq_class> coeff;  // index D, zero where D = 1,2 mod 4

  mpq_class coefficient(long D) const;
};

class DiscriminantError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

std::vector<ReducedForm> reduced_forms(long D);
// Proper automorphs of a positive definite form, including +-I.
std::vector<Mat2> automorphs(const BinaryQuadraticForm& q);
std::vector<HeegnerOrbit> heegner_orbits(int N, long D);
mpq_class hurwitz_class_number(int N, long D);
ClassNumberSeries class_series(int N, long dmax);
double class_number_constant(double eps);
double class_number_bound(int N, long D, double eps);

// [SL2(Z) : Gamma0(N)] = N prod_{p | N} (1 + 1/p)
long sl2_index(long N);
std::vector<long> prime_divisors(long n);
long euler_phi(long n);
int moebius(long n);
// Is -D a square modulo 4N (necessary for a nonempty Heegner set).
bool heegner_condition(int N, long D);
// #{beta mod 2N : beta^2 = -D mod 4N}
long count_square_roots(int N, long D);

}  // namespace onan
