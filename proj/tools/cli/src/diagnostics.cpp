#include "rose/cli/diagnostics.hpp"

#include "rose/error.hpp"
#include "rose/normal.hpp"

#include <algorithm>
#include <cmath>

namespace rose::cli {

double sample_skewness(const Vector& r) {
  if (r.size() == 0) throw Error(ErrorKind::InvalidArgument, "skewness of an empty sample");
  const double mean = r.mean();
  const Eigen::ArrayXd c = r.array() - mean;
  const double m2 = c.square().mean();
  const double m3 = c.cube().mean();
  if (!(m2 > 0.0)) return 0.0;
  return m3 / std::pow(m2, 1.5);
}

std::vector<HistogramBin> histogram(const Vector& r, int bins) {
  if (bins < 1) throw Error(ErrorKind::InvalidArgument, "histogram needs at least one bin");
  if (r.size() == 0) throw Error(ErrorKind::InvalidArgument, "histogram of an empty sample");
  const double lo = r.minCoeff();
  double hi = r.maxCoeff();
  if (!(hi > lo)) hi = lo + 1.0;
  const double width = (hi - lo) / bins;
  std::vector<HistogramBin> out(static_cast<std::size_t>(bins));
  for (int b = 0; b < bins; ++b) {
    out[static_cast<std::size_t>(b)].lo = lo + width * b;
    out[static_cast<std::size_t>(b)].hi = b + 1 == bins ? hi : lo + width * (b + 1);
  }
  for (double v : r) {
    auto b = static_cast<int>(std::floor((v - lo) / width));
    b = std::clamp(b, 0, bins - 1);
    ++out[static_cast<std::size_t>(b)].count;
  }
  return out;
}

std::vector<std::pair<double, double>> qq_points(const Vector& r) {
  std::vector<double> s(r.begin(), r.end());
  std::sort(s.begin(), s.end());
  const auto n = static_cast<double>(s.size());
  std::vector<std::pair<double, double>> out(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    // normal_quantile is an upper-tail quantile, so the lower-tail value at u
    // is -normal_quantile(u).
    const double u = (static_cast<double>(i) + 0.5) / n;
    out[i] = {-normal_quantile(u), s[i]};
  }
  return out;
}

}  // namespace rose::cli
