#include <gtest/gtest.h>

#include <cmath>

#include "lcl/bounds.hpp"

using namespace lcl;

namespace {

// Double-precision evaluation of the global bound straight from its formula.
double global_oracle(double log2n, double t, int b) {
  double L = log2n;
  for (int i = 1; i < 2 * b; ++i) L = std::log2(L);
  const double expo = std::exp2(log2n / (3 * (2 * t + 1)));
  return std::pow(1 - 1 / L, expo) + std::exp2(-log2n / 3 - 1);
}

}  // namespace

TEST(ZeroRound, UniformIsOptimal) {
  for (int delta : {4, 6})
    for (int c = 2; c <= 8; ++c) {
      const auto opt = zero_round_optimum(c, delta);
      EXPECT_NEAR(opt.value, std::pow(c, -delta), 1e-6) << c << " " << delta;
      ASSERT_EQ(opt.distribution.size(), static_cast<std::size_t>(c));
      for (double x : opt.distribution) EXPECT_NEAR(x, 1.0 / c, 1e-4);
      EXPECT_NEAR(zero_round_failure(opt.distribution, delta), opt.value, 1e-15);
    }
  EXPECT_EQ(zero_round_optimum(1, 4).value, 1.0);
}

TEST(ZeroRound, NoDistributionBeatsUniform) {
  // Random points of the simplex never fall below c^-delta.
  std::uint64_t s = 1;
  for (int trial = 0; trial < 2000; ++trial) {
    const int c = 2 + trial % 5;
    std::vector<double> D(c);
    double sum = 0;
    for (auto& x : D) {
      s = s * 6364136223846793005ULL + 1442695040888963407ULL;
      x = static_cast<double>(s >> 11) / 9007199254740992.0 + 1e-9;
      sum += x;
    }
    for (auto& x : D) x /= sum;
    EXPECT_GE(zero_round_failure(D, 4), std::pow(c, -4) - 1e-15);
  }
}

TEST(ZeroRound, SimplexProjection) {
  const auto p = project_to_simplex({0.5, 0.5, 0.5});
  for (double x : p) EXPECT_NEAR(x, 1.0 / 3, 1e-15);
  const auto q = project_to_simplex({2.0, 0.0});
  EXPECT_NEAR(q[0], 1.0, 1e-15);
  EXPECT_NEAR(q[1], 0.0, 1e-15);
}

TEST(Recurrence, ClosedFormExample) {
  // c0 = 2, p0 = 1/16, t = 0: (1/160)^5.
  EXPECT_EQ(recurrence_bound(2, Rational(1, 16), 0), rational_pow(Rational(1, 160), 5));
  EXPECT_EQ(recurrence_exponent(4, 1), 125);
  EXPECT_EQ(recurrence_bound(4, Rational(0), 2), 0);
  EXPECT_EQ(recurrence_bound(1, Rational(1), 0, 1), Rational(1, 4));
}

TEST(Recurrence, IteratedEqualsClosedForm) {
  for (int t = 0; t <= 3; ++t)
    for (std::uint64_t c0 : {1u, 2u, 5u, 16u})
      for (const Rational& p0 : {Rational(1, 2), Rational(1, 16), Rational(3, 7)})
        EXPECT_EQ(recurrence_bound_iterated(c0, p0, t), recurrence_bound(c0, p0, t)) << t << " " << c0;
}

TEST(Recurrence, RelaxedAndInductionDominate) {
  for (int t = 0; t <= 3; ++t)
    for (std::uint64_t c0 : {2u, 16u}) {
      const Rational p0(1, 4);
      const auto closed = recurrence_bound(c0, p0, t);
      EXPECT_GE(recurrence_relaxed(c0, p0, t), closed);
      EXPECT_GE(recurrence_induction_bound(c0, p0, t), closed);
    }
}

TEST(Recurrence, StepMatchesHandComputation) {
  // p_prev = 1, c_t = 2, c_hat = 4, delta = 4:
  // p_hat = (1/4)^4 / 4^3 = 1/16384, p_t = (p_hat/5)^5 / 2^4.
  const auto [p_hat, p_t] = recurrence_step(Rational(1), BigInt(2), BigInt(4), 4);
  EXPECT_EQ(p_hat, Rational(1, 16384));
  EXPECT_EQ(p_t, rational_pow(Rational(1, 81920), 5) / 16);
}

TEST(GlobalBound, MatchesFormula) {
  for (double log2n : {32.0, 64.0, 128.0})
    for (int t : {1, 2}) {
      const auto g = global_success_upper_bound(BigFloat(log2n), BigFloat(t), 1);
      const double oracle = global_oracle(log2n, t, 1);
      EXPECT_NEAR(g.value.convert_to<double>(), oracle, 1e-12 + 1e-9 * oracle) << log2n << " " << t;
    }
  const auto g = global_success_upper_bound(std::uint64_t{1} << 32, BigFloat(1), 1);
  EXPECT_NEAR(g.value.convert_to<double>(), global_oracle(32, 1, 1), 1e-12);
}

TEST(GlobalBound, BelowOneHalfWhereConditionHolds) {
  const std::pair<double, int> pairs[] = {{32, 1}, {64, 2}, {128, 2}, {256, 3}};
  for (const auto& [log2n, t] : pairs) {
    const auto g = global_success_upper_bound(BigFloat(log2n), BigFloat(t), 1);
    ASSERT_GT(g.condition, 2) << log2n;
    EXPECT_LT(g.value, BigFloat(0.5)) << log2n;
    EXPECT_LT(g.additive, BigFloat(0.25));
    EXPECT_LE(g.value, g.relaxed);
  }
  EXPECT_NEAR(global_success_upper_bound(BigFloat(32), BigFloat(1), 1).value.convert_to<double>(), 0.0728, 5e-4);
}

TEST(GlobalBound, DecreasesWithN) {
  BigFloat prev = 2;
  for (int log2n = 20; log2n <= 400; log2n += 20) {
    const auto g = global_success_upper_bound(BigFloat(log2n), BigFloat(2), 1);
    EXPECT_LT(g.value, prev) << log2n;
    prev = g.value;
  }
}

TEST(GlobalBound, DomainErrors) {
  EXPECT_THROW(global_success_upper_bound(BigFloat(2), BigFloat(1), 1), DomainError);  // log log n = 1
  EXPECT_THROW(global_success_upper_bound(BigFloat(16), BigFloat(1), 2), DomainError);  // log^(4) n = 1
  EXPECT_NO_THROW(global_success_upper_bound(BigFloat(1e6), BigFloat(1), 2));
  EXPECT_THROW(global_success_upper_bound(BigFloat(64), BigFloat(-1), 1), InvalidParameter);
}

TEST(IteratedLog, Values) {
  EXPECT_EQ(iterated_log2_from_log2n(BigFloat(16), 1), 16);
  EXPECT_EQ(iterated_log2_from_log2n(BigFloat(16), 2), 4);
  EXPECT_EQ(iterated_log2_from_log2n(BigFloat(16), 3), 2);
  EXPECT_EQ(log_star_from_log2n(BigFloat(16)), log_star(65536.0));
  EXPECT_EQ(log_star_from_log2n(BigFloat(65536)), 5);
}

TEST(Collision, Examples) {
  const auto a = id_collision_bound(1000);
  EXPECT_NEAR(a.value.convert_to<double>(), 0.045, 1e-12);
  EXPECT_NEAR(a.limit.convert_to<double>(), 0.05, 1e-12);
  EXPECT_TRUE(a.holds);
  const auto b = id_collision_bound(8);
  EXPECT_NEAR(b.value.convert_to<double>(), 0.125, 1e-12);
  EXPECT_TRUE(b.holds);
  for (std::uint64_t n = 8; n < 100000; n = n * 3 + 1) EXPECT_TRUE(id_collision_bound(n).holds) << n;
  EXPECT_THROW(id_collision_bound(7), InvalidParameter);
}

TEST(Palette, Tower) {
  EXPECT_EQ(palette_tower(2, 0), 2);
  EXPECT_EQ(palette_tower(1, 1), BigInt(1) << 16);
  EXPECT_THROW(palette_tower(2, 2), DomainError);
}

TEST(BoundJson, Shape) {
  const auto j = bound_json({{"c0", 2}}, Rational(1, 3));
  EXPECT_EQ(j["value"], "1/3");
  const auto k = bound_json({{"n", 8}}, BigFloat(0.125));
  EXPECT_EQ(k["precision_bits"], kBigFloatBits);
  EXPECT_TRUE(k.contains("inputs"));
}
