#include <gtest/gtest.h>

#include "onan/cuspdata.hpp"
#include "onan/quadforms.hpp"
#include "onan/traces.hpp"

using namespace onan;

namespace {

const CuspStore& store() {
  static CuspStore s = CuspStore::load_default();
  return s;
}

TraceContext context() {
  TraceContext ctx;
  ctx.cusp = &store();
  return ctx;
}

PointFunction j_function() {
  auto spec = hauptmodul_spec(1, false);
  return [spec](const CMPoint& p, const PrecisionPolicy& pol) { return evaluate_hauptmodul(spec, p, pol); };
}

}  // namespace

TEST(Traces, SingularModuliOfJ) {
  // J(rho) = -744 with weight 3, J(i) = 984 with weight 2
  EXPECT_EQ(trace_singular_moduli(1, 3, j_function()), mpq_class(-248));
  EXPECT_EQ(trace_singular_moduli(1, 4, j_function()), mpq_class(492));
}

TEST(Traces, EmptyHeegnerSet) {
  // -4 is not a square mod 7
  ASSERT_TRUE(heegner_orbits(7, 4).empty());
  auto spec = hauptmodul_spec(7, false);
  PointFunction f = [spec](const CMPoint& p, const PrecisionPolicy& pol) { return evaluate_hauptmodul(spec, p, pol); };
  EXPECT_EQ(trace_singular_moduli(7, 4, f), mpq_class(0));
  EXPECT_EQ(trace4(7, 4, context()), mpq_class(0));
}

TEST(Traces, LevelOneHeadline) {
  EXPECT_EQ(trace4(1, 3, context()), mpq_class(26752));
  EXPECT_EQ(trace4(1, 4, context()), mpq_class(143376));
}

TEST(Traces, PlusLevelElevenAtThree) {
  // chi7(11A) = 0 = T(3) + 12/5 H(3) - 6/5 H^(11)(3) - 4/5 g11(3), g11(3) = 1
  mpq_class expected = mpq_class(0) - mpq_class(12, 5) * hurwitz_class_number(1, 3) +
                       mpq_class(6, 5) * hurwitz_class_number(11, 3) + mpq_class(4, 5);
  EXPECT_EQ(expected, mpq_class(0));
  EXPECT_EQ(trace4_plus(11, 3, context()), expected);
}

TEST(Traces, LevelSevenAtThreeIsNotIntegral) {
  // chi7(7A) = -2 = T(3) + 4 H(3) - 4 H^(7)(3)
  mpq_class expected = mpq_class(-2) - 4 * hurwitz_class_number(1, 3) + 4 * hurwitz_class_number(7, 3);
  expected.canonicalize();
  EXPECT_EQ(expected, mpq_class(-2, 3));
  EXPECT_EQ(trace4(7, 3, context()), expected);
  auto s = trace_series(7, false, 12, context());
  ASSERT_FALSE(s.nonintegral.empty());
  EXPECT_EQ(s.nonintegral.front(), 3);
  EXPECT_THROW(trace_series(7, false, 12, context(), true), IntegralityError);
}

TEST(Traces, AlphaIntegrality) {
  EXPECT_EQ(trace_alpha(14), mpq_class(1, 6));
  EXPECT_EQ(trace_alpha(28), mpq_class(1, 4));
  EXPECT_EQ(trace_alpha(31), mpq_class(1));
  for (int N : {14, 28, 11, 31}) {
    auto s = trace_series(N, true, 60, context(), true);
    EXPECT_TRUE(s.nonintegral.empty()) << N;
    EXPECT_EQ(s.coefficient(-4), mpq_class(-1));
  }
}

TEST(Traces, LevelOneSeriesIsIntegral) {
  auto s = trace_series(1, false, 80, context(), true);
  for (auto& [D, v] : s.coeff) {
    EXPECT_EQ(v.get_den(), 1) << D;
    EXPECT_TRUE(D % 4 == 0 || D % 4 == 3);
  }
}

TEST(Traces, Recognise) {
  EXPECT_EQ(recognise(-248.0000000001), mpq_class(-248));
  EXPECT_EQ(recognise(2.5 + 1e-9), mpq_class(5, 2));
  EXPECT_EQ(recognise(1.0 / 3), mpq_class(1, 3));
  try {
    recognise(0.01);
    FAIL() << "expected RecognitionError";
  } catch (const RecognitionError& e) {
    EXPECT_DOUBLE_EQ(e.unrounded(), 0.01);
  }
}

TEST(Traces, Checkpoint) {
  auto ctx = context();
  ctx.cache_dir = ::testing::TempDir() + "/onan_trace_cache";
  mpq_class a = trace4(2, 7, ctx);
  mpq_class b = trace4(2, 7, ctx);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a, trace4(2, 7, context()));
}
