#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace rose {

__extension__ typedef __int128 Int128;

/// Running sum of doubles kept exactly as a list of non-overlapping partials
/// (Shewchuk). `value()` returns the correctly rounded sum, so the result does
/// not depend on the order in which terms were added.
class ExactSum {
 public:
  void add(double x);
  double value() const;
  void clear() { partials_.clear(); }

 private:
  std::vector<double> partials_;
};

/// Fixed-point view of a set of doubles: every value is an integer multiple of
/// 2^exponent and any sum of up to `terms` of them fits in a signed 128-bit
/// integer. Sums then become exact integer additions.
struct FixedPointScale {
  int exponent = 0;
  double up = 1.0;    // 2^exponent

  /// nullopt when the values span too many binary orders of magnitude.
  static std::optional<FixedPointScale> fit(std::span<const double> values, std::size_t terms);

  Int128 to_fixed(double x) const {
    const auto bits = std::bit_cast<std::uint64_t>(x);
    const int biased = static_cast<int>((bits >> 52) & 0x7ff);
    if (biased == 0) return 0;  // fit() never accepts subnormals
    const Int128 m = static_cast<Int128>((bits & 0xfffffffffffffULL) | (1ULL << 52))
                     << (biased - 1075 - exponent);
    return (bits >> 63) ? -m : m;
  }
  /// Correctly rounded conversion of an exact fixed-point sum: the integer to
  /// double conversion rounds to nearest even and the power-of-two scaling is
  /// exact within the normal range.
  double to_double(Int128 v) const { return static_cast<double>(v) * up; }
};

/// Correctly rounded sum of `values`, independent of their order.
double exact_sum(std::span<const double> values);

}  // namespace rose
