#include <gtest/gtest.h>

#include "onan/cuspdata.hpp"
#include "onan/series.hpp"

using namespace onan;

namespace {

// brute-force product of (1 - q^n)^24, independent of the library
std::vector<long> delta_oracle(int terms) {
  std::vector<long> p(terms, 0);
  p[0] = 1;
  for (int n = 1; n < terms; ++n)
    for (int k = 0; k < 24; ++k)
      for (int i = terms - 1; i >= n; --i) p[i] -= p[i - n];
  return p;
}

long sigma(int k, long n) {
  long s = 0;
  for (long d = 1; d <= n; ++d)
    if (n % d == 0) {
      long t = 1;
      for (int i = 0; i < k; ++i) t *= d;
      s += t;
    }
  return s;
}

}  // namespace

TEST(Series, EmptyEtaQuotientIsOne) {
  EtaQuotientSpec s;
  auto f = eta_quotient_expansion(s, 5);
  EXPECT_EQ(f.coefficient(0), 1);
  for (int n = 1; n < 5; ++n) EXPECT_EQ(f.coefficient(n), 0);
}

TEST(Series, DeltaMatchesProduct) {
  EtaQuotientSpec s;
  s.factors = {{1, 24}};
  auto f = eta_quotient_expansion(s, 30);
  auto o = delta_oracle(30);
  EXPECT_EQ(f.coefficient(1), 1);
  EXPECT_EQ(f.coefficient(2), -24);
  EXPECT_EQ(f.coefficient(3), 252);
  EXPECT_EQ(f.coefficient(4), -1472);
  for (int n = 1; n < 30; ++n) EXPECT_EQ(f.coefficient(n), o[n - 1]) << n;
}

TEST(Series, NonIntegralLeadingExponentRejected) {
  EtaQuotientSpec s;
  s.factors = {{1, 1}};
  EXPECT_THROW(eta_quotient_expansion(s, 5), std::invalid_argument);
}

TEST(Series, Eisenstein) {
  EXPECT_EQ(eisenstein_expansion(4, 2).coefficient(1), 240);
  EXPECT_EQ(eisenstein_expansion(2, 2).coefficient(1), -24);
  EXPECT_EQ(eisenstein_expansion(6, 2).coefficient(1), -504);
  auto e4 = eisenstein_expansion(4, 20);
  for (int n = 1; n < 20; ++n) EXPECT_EQ(e4.coefficient(n), 240 * sigma(3, n));
  EXPECT_THROW(eisenstein_expansion(8, 2), std::invalid_argument);
}

TEST(Series, ProductDivisionRoundTrip) {
  auto a = eisenstein_expansion(4, 40);
  auto b = eisenstein_expansion(6, 40);
  auto c = (a * b) / b;
  for (int n = 0; n < c.order(); ++n) EXPECT_EQ(c.coefficient(n), a.coefficient(n));
  EXPECT_THROW(a / QSeries::zero(10), std::domain_error);
}

TEST(Series, TruncationIsPessimistic) {
  auto a = eisenstein_expansion(4, 10);
  auto b = eisenstein_expansion(6, 30);
  EXPECT_EQ((a * b).order(), 10);
  EXPECT_EQ((a + b).order(), 10);
  EXPECT_THROW(a.coefficient(10), std::out_of_range);
}

TEST(Series, LevelOneHauptmodul) {
  auto j = hauptmodul_expansion(hauptmodul_spec(1, false), 5);
  EXPECT_EQ(j.coefficient(-1), 1);
  EXPECT_EQ(j.coefficient(0), 0);
  EXPECT_EQ(j.coefficient(1), 196884);
  EXPECT_EQ(j.coefficient(2), 21493760);
}

TEST(Series, TableOneHauptmoduln) {
  for (int N : gamma0_levels()) {
    auto j = hauptmodul_expansion(hauptmodul_spec(N, false), 50);
    EXPECT_EQ(j.coefficient(-1), 1) << N;
    EXPECT_EQ(j.coefficient(0), 0) << N;
    EXPECT_TRUE(j.is_integral()) << N;
    auto i2 = index2_function(j);
    EXPECT_EQ(i2.series.coefficient(-2), 1) << N;
    EXPECT_EQ(i2.series.coefficient(-1), 0) << N;
    EXPECT_EQ(i2.series.coefficient(0), 0) << N;
    EXPECT_TRUE(i2.series.is_integral()) << N;
  }
}

TEST(Series, LevelTwoHasZeroConstant) {
  EtaQuotientSpec s;
  s.factors = {{1, 24}, {2, -24}};
  s.additive_constant = 24;
  auto f = eta_quotient_expansion(s, 2);
  EXPECT_EQ(f.coefficient(-1), 1);
  EXPECT_EQ(f.coefficient(0), 0);
  EXPECT_TRUE(f.coefficient(1).get_den() == 1);
}

TEST(Series, TableTwoHauptmoduln) {
  auto store = CuspStore::load_default();
  for (int N : plus_levels()) {
    auto j = hauptmodul_expansion(hauptmodul_spec(N, true), 50, &store);
    EXPECT_EQ(j.coefficient(-1), 1) << N;
    EXPECT_EQ(j.coefficient(0), 0) << N;
    EXPECT_TRUE(j.is_integral()) << N;
  }
}

TEST(Series, ElevenPlusNumeratorConstant) {
  auto e2 = eisenstein_expansion(2, 30);
  auto num = e2 - 11 * e2.dilate(11);
  EXPECT_EQ(num.coefficient(0), -10);
}

TEST(Series, Index2) {
  auto j = hauptmodul_expansion(hauptmodul_spec(1, false), 5);
  auto i2 = index2_function(j);
  EXPECT_EQ(i2.c1, 0);
  EXPECT_EQ(i2.c0, 393768);
  QSeries x(-1, {1, 0, 1}, 3);
  auto r = index2_function(x);
  EXPECT_EQ(r.c1, 0);
  EXPECT_EQ(r.c0, 2);
  QSeries bad(-1, {1, 1, 1}, 3);
  EXPECT_THROW(index2_function(bad), std::invalid_argument);
}

TEST(Series, NewformE19) {
  auto a = newform_E19_coefficients(40);
  EXPECT_EQ(a[1], 1);
  // y^2 + y = x^3 + x^2 - 9x - 15 over F_2: count directly
  int cnt = 1;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      if (((y * y + y - (x * x * x + x * x - 9 * x - 15)) % 2 + 2) % 2 == 0) ++cnt;
  EXPECT_EQ(a[2], 3 - cnt);
  EXPECT_EQ(a[6], a[2] * a[3]);
  EXPECT_EQ(a[10], a[2] * a[5]);
  EXPECT_EQ(a[4], a[2] * a[2] - 2);
}

TEST(Series, MissingNewformData) {
  CuspStore empty;
  EXPECT_THROW(hauptmodul_expansion(hauptmodul_spec(31, true), 20, &empty), DataRequired);
}
