#pragma once

#include "rose/types.hpp"

namespace rose {

/// Throws DimensionMismatch or NonFiniteValue (index = offending row) when
/// the dataset violates its invariants.
void validate_dataset(const Dataset& d);

/// Centering and scaling applied by `standardize`. Scales are population
/// (n-denominator) standard deviations.
struct StandardizeRecord {
  Vector x_mean;
  Vector x_scale;
  double y_mean = 0.0;

  /// Maps coefficients fitted on the standardized scale back to raw covariates.
  CoefVector to_original(const CoefVector& beta_std) const;
};

struct Standardized {
  Dataset data;
  StandardizeRecord record;
};

/// Columns of x get mean 0 and population sd 1; y is centered.
/// Throws ZeroVarianceColumn (index = column) on a constant column.
Standardized standardize(const Dataset& d);

/// Column-wise centering and scaling without the zero-variance error:
/// constant columns come back as all zeros.
Matrix center_scale_columns(const Matrix& x);

}  // namespace rose
