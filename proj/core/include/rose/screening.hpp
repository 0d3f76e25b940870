#pragma once

#include "rose/types.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace rose {

enum class ScreenerMethod {
  Sirs,
  Sis,
  /// A caller-supplied support (j0 removed); used for oracle comparisons.
  Fixed,
};

std::string_view screener_name(ScreenerMethod m);
std::optional<ScreenerMethod> parse_screener(std::string_view name);

struct ScreenerConfig {
  ScreenerMethod method = ScreenerMethod::Sirs;
  /// Selected set size; floor(n / log n) when absent.
  std::optional<int> keep;
  /// Recompute the per-t support only every `refresh_every` steps.
  int refresh_every = 1;
  /// Support used by ScreenerMethod::Fixed.
  std::vector<int> fixed;

  int resolved_keep(Eigen::Index n) const;
  void validate(Eigen::Index n) const;

  friend bool operator==(const ScreenerConfig&, const ScreenerConfig&) = default;
};

/// floor(n / log n).
int default_keep(Eigen::Index n);

/// Rank-based utility statistic
///   w_j = (1/n) sum_k [ (1/n) sum_i x_ij 1{y_i < y_k} ]^2
/// on column-standardized covariates (standardized internally). Inner and
/// outer sums are exactly rounded, so the result is independent of row order
/// and of any strictly increasing transform of y.
Vector sirs_stats(const Dataset& d);

/// |corr(x_j, y)| per column. Throws ZeroVarianceColumn.
Vector sis_stats(const Dataset& d);

/// The `keep` largest statistics after dropping j0 (ties to the smaller index),
/// returned in ascending index order.
SupportSet select_support(const Vector& stats, int j0, int keep);

/// Screening statistics for the recursive schedule, independent of j0 so one
/// set can serve many targets.
struct ScreeningStats {
  int s_n = 0;
  int n = 0;
  int refresh_every = 1;
  /// Statistics from observations s_n+1..n (1-based).
  Vector minus_sn;
  /// Statistics from observations 1..t for each refresh point t = s_n + m*k.
  std::vector<Vector> refresh;
};

ScreeningStats screening_statistics(const Dataset& d, int s_n, const ScreenerConfig& cfg);

/// Supports for t in {-s_n} and s_n..n-1.
struct ScreeningSchedule {
  int s_n = 0;
  SupportSet minus_sn;
  /// Entry t - s_n holds the support for key t.
  std::vector<SupportSet> forward;

  /// Support used when scoring observation t+1 (0-based row t): the -s_n
  /// support for t < s_n, otherwise the support for key t.
  const SupportSet& for_row(int t) const {
    return t < s_n ? minus_sn : forward[static_cast<std::size_t>(t - s_n)];
  }
};

ScreeningSchedule build_schedule(const ScreeningStats& stats, int j0, int keep);

/// Throws InvalidSplit unless 1 < s_n < n.
ScreeningSchedule screening_schedule(const Dataset& d, int j0, int s_n, const ScreenerConfig& cfg);

/// Schedule that uses a fixed support (minus j0) for every t.
ScreeningSchedule fixed_schedule(const Dataset& d, int j0, int s_n, const std::vector<int>& support);

}  // namespace rose
