#include "rose/exact_sum.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <utility>

namespace rose {

void ExactSum::add(double x) {
  std::size_t kept = 0;
  for (double y : partials_) {
    if (std::fabs(x) < std::fabs(y)) std::swap(x, y);
    const double hi = x + y;
    const double lo = y - (hi - x);
    if (lo != 0.0) partials_[kept++] = lo;
    x = hi;
  }
  partials_.resize(kept);
  partials_.push_back(x);
}

double ExactSum::value() const {
  std::size_t n = partials_.size();
  if (n == 0) return 0.0;
  double hi = partials_[--n];
  double lo = 0.0;
  while (n > 0) {
    const double x = hi;
    const double y = partials_[--n];
    hi = x + y;
    lo = y - (hi - x);
    if (lo != 0.0) break;
  }
  // Round-half-even correction when the dropped tail sits exactly on a tie.
  if (n > 0 && ((lo < 0.0 && partials_[n - 1] < 0.0) || (lo > 0.0 && partials_[n - 1] > 0.0))) {
    const double y = lo * 2.0;
    const double x = hi + y;
    if (y == x - hi) hi = x;
  }
  return hi;
}

std::optional<FixedPointScale> FixedPointScale::fit(std::span<const double> values,
                                                    std::size_t terms) {
  int hi = INT_MIN;
  int lo = INT_MAX;
  for (double x : values) {
    if (x == 0.0) continue;
    if (!std::isfinite(x)) return std::nullopt;
    // |x| < 2^e and x is a multiple of 2^(e - 53).
    const int e = static_cast<int>((std::bit_cast<std::uint64_t>(x) >> 52) & 0x7ff) - 1022;
    hi = std::max(hi, e);
    lo = std::min(lo, e - 53);
  }
  if (hi == INT_MIN) return FixedPointScale{};
  int bits = 0;
  while ((std::size_t{1} << bits) < std::max<std::size_t>(terms, 1)) ++bits;
  // Magnitudes below 2^(hi - lo + bits) must stay under 2^126.
  if (hi - lo + bits > 126) return std::nullopt;
  // Keep both scale factors normal.
  if (lo < -900 || lo > 900) return std::nullopt;
  return FixedPointScale{lo, std::ldexp(1.0, lo)};
}

double exact_sum(std::span<const double> values) {
  if (const auto fx = FixedPointScale::fit(values, values.size())) {
    Int128 acc = 0;
    for (double x : values) acc += fx->to_fixed(x);
    return fx->to_double(acc);
  }
  ExactSum s;
  for (double x : values) s.add(x);
  return s.value();
}

}  // namespace rose
