#pragma once

#include "rose/types.hpp"

#include <utility>
#include <vector>

namespace rose::cli {

/// g1 = m3 / m2^{3/2} with central moments using the n denominator; 0 for a
/// constant sample.
double sample_skewness(const Vector& r);

struct HistogramBin {
  double lo = 0.0;
  double hi = 0.0;
  long count = 0;
};

/// Equal-width bins over [min, max]; the last bin is closed on the right.
std::vector<HistogramBin> histogram(const Vector& r, int bins = 30);

/// Pairs (Phi^{-1}((i - 0.5) / n), r_(i)) for i = 1..n, ascending in both.
std::vector<std::pair<double, double>> qq_points(const Vector& r);

}  // namespace rose::cli
