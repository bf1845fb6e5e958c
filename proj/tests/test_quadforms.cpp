#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "onan/quadforms.hpp"

using namespace onan;

namespace {

// classical h(D) weighted count by direct enumeration of all reduced triples
mpq_class hurwitz_oracle(long D) {
  mpq_class h = 0;
  for (long a = 1; a * a <= D; ++a)
    for (long b = -a; b <= a; ++b) {
      long num = b * b + D;
      if (num % (4 * a)) continue;
      long c = num / (4 * a);
      if (c < a) continue;
      if ((b < 0) && (b == -a || a == c)) continue;
      if (a == b && b == c) {
        h += mpq_class(1, 3);
      } else if (b == 0 && a == c) {
        h += mpq_class(1, 2);
      } else {
        h += 1;
      }
    }
  return h;
}

}  // namespace

TEST(Quadforms, SmallDiscriminants) {
  auto r3 = reduced_forms(3);
  ASSERT_EQ(r3.size(), 1u);
  EXPECT_EQ(r3[0].form, (BinaryQuadraticForm{1, 1, 1}));
  EXPECT_EQ(r3[0].w, 3);
  auto r4 = reduced_forms(4);
  ASSERT_EQ(r4.size(), 1u);
  EXPECT_EQ(r4[0].w, 2);
  EXPECT_EQ(reduced_forms(23).size(), 3u);
  EXPECT_EQ(hurwitz_class_number(1, 3), mpq_class(1, 3));
  EXPECT_EQ(hurwitz_class_number(1, 4), mpq_class(1, 2));
  EXPECT_EQ(hurwitz_class_number(1, 23), 3);
  EXPECT_EQ(hurwitz_class_number(1, 47), 5);
  EXPECT_THROW(reduced_forms(5), DiscriminantError);
}

TEST(Quadforms, MatchesOracle) {
  for (long D = 3; D <= 400; ++D) {
    if (D % 4 == 0 || D % 4 == 3) {
      EXPECT_EQ(hurwitz_class_number(1, D), hurwitz_oracle(D)) << D;
    }
  }
}

TEST(Quadforms, HeegnerBasics) {
  auto o = heegner_orbits(1, 3);
  ASSERT_EQ(o.size(), 1u);
  EXPECT_EQ(o[0].omega, 3);
  EXPECT_TRUE(heegner_orbits(11, 3).empty());
  EXPECT_EQ(hurwitz_class_number(2, 15), 4);
}

TEST(Quadforms, CoprimeCountingFormula) {
  for (int N = 1; N <= 31; ++N)
    for (long D = 3; D <= 200; ++D) {
      if (D % 4 == 1 || D % 4 == 2) continue;
      if (std::gcd(static_cast<long>(N), D) != 1) continue;
      EXPECT_EQ(hurwitz_class_number(N, D), hurwitz_oracle(D) * count_square_roots(N, D)) << N << " " << D;
    }
}

TEST(Quadforms, RepresentativesAreValid) {
  for (int N : {2, 4, 6, 12, 14, 28, 31})
    for (long D = 3; D <= 120; ++D) {
      if (D % 4 == 1 || D % 4 == 2) continue;
      auto orbs = heegner_orbits(N, D);
      if (!orbs.empty()) {
        EXPECT_TRUE(heegner_condition(N, D));
      }
      for (auto& o : orbs) {
        auto& q = o.representative;
        EXPECT_EQ(q.a % N, 0);
        EXPECT_EQ(q.discriminant(), -D);
        EXPECT_GE(q.b, 0);
        EXPECT_LT(q.b, 2 * q.a);
        EXPECT_TRUE(o.omega >= 1 && o.omega <= 3);
      }
      EXPECT_EQ(heegner_orbits(N, D).size(), orbs.size());
    }
}

TEST(Quadforms, DistinctOrbits) {
  // representatives must be pairwise Gamma0(N)-inequivalent: check via the
  // invariant (a, b mod 2N) classes is too weak, so compare orbit counts with
  // the square-root count for squarefree coprime D instead
  for (int N : {5, 7, 11})
    for (long D : {23L, 31L, 47L, 71L}) {
      long roots = count_square_roots(N, D);
      EXPECT_EQ(static_cast<long>(heegner_orbits(N, D).size()),
                static_cast<long>(reduced_forms(D).size()) * roots);
    }
}

TEST(Quadforms, ClassSeriesConstants) {
  EXPECT_EQ(class_series(1, 10).constant, mpq_class(-1, 12));
  EXPECT_EQ(class_series(2, 10).constant, mpq_class(-1, 4));
  EXPECT_EQ(class_series(4, 10).constant, mpq_class(-1, 2));
}

TEST(Quadforms, Bound) {
  EXPECT_NEAR(class_number_constant(0.125), 10.6766, 10.6766e-3);
  EXPECT_NEAR(class_number_bound(2, 100, 0.125), 3 * class_number_bound(1, 100, 0.125), 1e-9);
  for (int N : {1, 2, 3, 11, 14})
    for (long D = 7; D <= 300; D += 4)
      EXPECT_GE(class_number_bound(N, D, 0.125), hurwitz_class_number(N, D).get_d());
}
