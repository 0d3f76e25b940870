#include "rose/error.hpp"
#include "rose/normal.hpp"
#include "rose/rng.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace rose {
namespace {

TEST(NormalQuantile, Median) { EXPECT_EQ(normal_quantile(0.5), 0.0); }

TEST(NormalQuantile, UpperTailConvention) {
  EXPECT_NEAR(normal_quantile(0.025), 1.959963985, 1e-8);
  EXPECT_GT(normal_quantile(0.1), 0.0);
  EXPECT_LT(normal_quantile(0.9), 0.0);
}

TEST(NormalQuantile, MatchesBisectionOracle) {
  for (double q : {1e-12, 1e-8, 1e-4, 0.001, 0.0125, 0.025, 0.05, 0.2, 0.4, 0.6, 0.9, 0.975,
                   0.999, 1.0 - 1e-8}) {
    EXPECT_NEAR(normal_quantile(q), oracle::normal_upper_quantile_bisect(q), 1e-8) << q;
  }
}

TEST(NormalQuantile, Symmetry) {
  Rng rng(SeedSpec{31, 0});
  for (int k = 0; k < 100; ++k) {
    const double q = 0.001 + 0.998 * rng.uniform();
    EXPECT_NEAR(normal_quantile(q), -normal_quantile(1.0 - q), 1e-12) << q;
  }
}

TEST(NormalQuantile, InvertsCdf) {
  for (double q : {0.01, 0.1, 0.3, 0.7}) EXPECT_NEAR(normal_cdf(normal_quantile(q)), 1.0 - q, 1e-14);
}

TEST(NormalQuantile, DomainError) {
  for (double q : {0.0, 1.0, -0.5, 2.0, std::nan("")}) {
    try {
      normal_quantile(q);
      ADD_FAILURE() << q;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::DomainError);
    }
  }
}

}  // namespace
}  // namespace rose
