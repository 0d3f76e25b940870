#include "rose/data.hpp"
#include "rose/error.hpp"
#include "rose/rng.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <limits>

namespace rose {
namespace {

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::InvalidArgument;
}

Dataset small(int n, int p) {
  Dataset d{Matrix(n, p), Vector(n)};
  for (int i = 0; i < n; ++i) {
    d.y(i) = 0.5 * i - 1.0;
    for (int j = 0; j < p; ++j) d.x(i, j) = std::sin(1.0 + i * 3 + j * 7);
  }
  return d;
}

TEST(ValidateDataset, AcceptsConsistentFiniteData) {
  EXPECT_NO_THROW(validate_dataset(small(3, 2)));
}

TEST(ValidateDataset, RowCountMismatch) {
  Dataset d = small(3, 2);
  d.y.resize(2);
  d.y << 1.0, 2.0;
  EXPECT_EQ(kind_of([&] { validate_dataset(d); }), ErrorKind::DimensionMismatch);
}

TEST(ValidateDataset, NaNInResponseReportsRow) {
  Dataset d = small(3, 2);
  d.y(1) = std::numeric_limits<double>::quiet_NaN();
  try {
    validate_dataset(d);
    FAIL() << "expected NonFiniteValue";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonFiniteValue);
    EXPECT_EQ(e.index(), 1);
  }
}

TEST(ValidateDataset, EmptyDimensionsRejected) {
  Dataset d{Matrix(0, 2), Vector(0)};
  EXPECT_EQ(kind_of([&] { validate_dataset(d); }), ErrorKind::DimensionMismatch);
}

TEST(ValidateDataset, RandomCorruptionsAreCaught) {
  Rng rng(SeedSpec{11, 0});
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(8));
    const int p = 1 + static_cast<int>(rng.below(5));
    Dataset d = small(n, p);
    const auto what = rng.below(4);
    const double bad = what == 0   ? std::numeric_limits<double>::quiet_NaN()
                       : what == 1 ? std::numeric_limits<double>::infinity()
                                   : -std::numeric_limits<double>::infinity();
    if (what == 3) {
      d.y.conservativeResize(n + 1);
      d.y(n) = 0.0;
      EXPECT_EQ(kind_of([&] { validate_dataset(d); }), ErrorKind::DimensionMismatch);
      continue;
    }
    const auto i = static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(n)));
    if (rng.below(2) == 0) {
      d.y(i) = bad;
    } else {
      d.x(i, static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(p)))) = bad;
    }
    try {
      validate_dataset(d);
      ADD_FAILURE() << "corruption not detected";
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::NonFiniteValue);
      EXPECT_EQ(e.index(), i);
    }
  }
}

TEST(Standardize, ColumnAndResponseMoments) {
  Dataset d{Matrix(3, 1), Vector(3)};
  d.x << 1, 2, 3;
  d.y << 2, 4, 6;
  const Standardized s = standardize(d);
  EXPECT_NEAR(s.data.x.col(0).mean(), 0.0, 1e-15);
  EXPECT_NEAR(std::sqrt(s.data.x.col(0).squaredNorm() / 3.0), 1.0, 1e-15);
  EXPECT_NEAR(s.data.y.mean(), 0.0, 1e-15);
  // Population sd of (1, 2, 3) is sqrt(2/3).
  EXPECT_NEAR(s.record.x_scale(0), std::sqrt(2.0 / 3.0), 1e-15);
  EXPECT_DOUBLE_EQ(s.record.y_mean, 4.0);
}

TEST(Standardize, Idempotent) {
  const Dataset d = small(25, 6);
  const Standardized once = standardize(d);
  const Standardized twice = standardize(once.data);
  EXPECT_LE((once.data.x - twice.data.x).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LE((once.data.y - twice.data.y).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Standardize, ConstantColumn) {
  Dataset d{Matrix(3, 2), Vector(3)};
  d.x << 1, 5, 2, 5, 3, 5;
  d.y << 1, 2, 3;
  try {
    standardize(d);
    FAIL() << "expected ZeroVarianceColumn";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ZeroVarianceColumn);
    EXPECT_EQ(e.index(), 1);
  }
}

TEST(Standardize, RecordInvertsCoefficients) {
  const Dataset d = small(30, 3);
  const Standardized s = standardize(d);
  const CoefVector beta_std = CoefVector::LinSpaced(3, 0.5, 1.5);
  const CoefVector beta = s.record.to_original(beta_std);
  // Fitted values agree up to the intercept absorbed by centering.
  const Vector a = s.data.x * beta_std;
  const Vector b = d.x * beta;
  const Vector diff = b - a;
  EXPECT_LE((diff.array() - diff.mean()).abs().maxCoeff(), 1e-12);
}

TEST(CenterScaleColumns, ConstantColumnBecomesZero) {
  Matrix x(3, 2);
  x << 1, 5, 2, 5, 4, 5;
  const Matrix s = center_scale_columns(x);
  EXPECT_TRUE(s.col(1).isZero());
  EXPECT_NEAR(s.col(0).mean(), 0.0, 1e-15);
}

TEST(SupportSet, RejectsUnsortedAndDuplicates) {
  EXPECT_THROW(SupportSet({2, 1}), Error);
  EXPECT_THROW(SupportSet({1, 1}), Error);
  EXPECT_THROW(SupportSet({-1}), Error);
  const SupportSet s({0, 3, 7});
  EXPECT_TRUE(s.contains(3));
  EXPECT_FALSE(s.contains(4));
  EXPECT_EQ(s.size(), 3u);
}

TEST(SolverConfig, Validation) {
  SolverConfig c;
  EXPECT_NO_THROW(c.validate(4));
  c.radius = 0.0;
  EXPECT_THROW(c.validate(4), Error);
  c = {};
  c.weights = Vector::Ones(3);
  EXPECT_EQ(kind_of([&] { c.validate(4); }), ErrorKind::DimensionMismatch);
  c.weights = Vector::Constant(4, -1.0);
  EXPECT_EQ(kind_of([&] { c.validate(4); }), ErrorKind::InvalidArgument);
}

TEST(Dataset, RowsSlice) {
  const Dataset d = small(10, 2);
  const Dataset s = d.rows(3, 7);
  EXPECT_EQ(s.n(), 4);
  EXPECT_EQ(s.x.row(0), d.x.row(3));
  EXPECT_EQ(s.y(3), d.y(6));
}

}  // namespace
}  // namespace rose
