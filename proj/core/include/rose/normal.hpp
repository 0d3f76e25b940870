#pragma once

namespace rose {

/// Standard normal CDF.
double normal_cdf(double z);

/// Upper-tail quantile: the z with Phi(z) = 1 - q, so normal_quantile(0.025)
/// is about 1.96. Throws DomainError unless 0 < q < 1.
double normal_quantile(double q);

}  // namespace rose
