#include "rose/screening.hpp"

#include "rose/data.hpp"
#include "rose/error.hpp"
#include "rose/exact_sum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace rose {

std::string_view screener_name(ScreenerMethod m) {
  switch (m) {
    case ScreenerMethod::Sirs: return "sirs";
    case ScreenerMethod::Sis: return "sis";
    case ScreenerMethod::Fixed: return "fixed";
  }
  return "sirs";
}

std::optional<ScreenerMethod> parse_screener(std::string_view name) {
  for (ScreenerMethod m : {ScreenerMethod::Sirs, ScreenerMethod::Sis, ScreenerMethod::Fixed}) {
    if (screener_name(m) == name) return m;
  }
  return std::nullopt;
}

int default_keep(Eigen::Index n) {
  if (n < 3) return 1;
  return std::max(1, static_cast<int>(std::floor(static_cast<double>(n) / std::log(n))));
}

int ScreenerConfig::resolved_keep(Eigen::Index n) const { return keep ? *keep : default_keep(n); }

void ScreenerConfig::validate(Eigen::Index n) const {
  if (refresh_every < 1) throw Error(ErrorKind::InvalidArgument, "refresh_every must be >= 1");
  if (keep && (*keep < 1 || *keep > n)) {
    throw Error(ErrorKind::InvalidArgument, "screening keep must lie in [1, n]");
  }
}

Vector sirs_stats(const Dataset& d) {
  const Eigen::Index n = d.n();
  const Matrix xs = center_scale_columns(d.x);
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return d.y(a) < d.y(b); });

  // Boundaries of runs of tied responses in sorted order.
  std::vector<std::size_t> group_start;
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (k == 0 || d.y(order[k]) != d.y(order[k - 1])) group_start.push_back(k);
  }
  group_start.push_back(order.size());

  const double nd = static_cast<double>(n);
  const std::size_t groups = group_start.size() - 1;
  Vector out(d.p());
  std::vector<double> col(static_cast<std::size_t>(n));
  std::vector<double> sq(groups);
  ExactSum inner;
  ExactSum outer;
  for (Eigen::Index j = 0; j < d.p(); ++j) {
    for (std::size_t k = 0; k < col.size(); ++k) col[k] = xs(order[k], j);
    // Every member of a tie group sees the same strict-inequality sum, so one
    // squared prefix per group is enough.
    if (const auto fx = FixedPointScale::fit(col, col.size())) {
      Int128 acc = 0;
      for (std::size_t g = 0; g < groups; ++g) {
        const double v = fx->to_double(acc) / nd;
        sq[g] = v * v;
        for (std::size_t k = group_start[g]; k < group_start[g + 1]; ++k) acc += fx->to_fixed(col[k]);
      }
    } else {
      inner.clear();
      for (std::size_t g = 0; g < groups; ++g) {
        const double v = inner.value() / nd;
        sq[g] = v * v;
        for (std::size_t k = group_start[g]; k < group_start[g + 1]; ++k) inner.add(col[k]);
      }
    }
    if (const auto fx = FixedPointScale::fit(sq, col.size())) {
      Int128 acc = 0;
      for (std::size_t g = 0; g < groups; ++g) {
        acc += fx->to_fixed(sq[g]) * static_cast<Int128>(group_start[g + 1] - group_start[g]);
      }
      out(j) = fx->to_double(acc) / nd;
    } else {
      outer.clear();
      for (std::size_t g = 0; g < groups; ++g) {
        for (std::size_t k = group_start[g]; k < group_start[g + 1]; ++k) outer.add(sq[g]);
      }
      out(j) = outer.value() / nd;
    }
  }
  return out;
}

Vector sis_stats(const Dataset& d) {
  const Vector yc = d.y.array() - d.y.mean();
  const double syy = yc.squaredNorm();
  Vector out(d.p());
  for (Eigen::Index j = 0; j < d.p(); ++j) {
    const Vector xc = d.x.col(j).array() - d.x.col(j).mean();
    const double sxx = xc.squaredNorm();
    if (!(sxx > 0.0)) {
      throw Error(ErrorKind::ZeroVarianceColumn, "column " + std::to_string(j) + " is constant",
                  static_cast<long>(j));
    }
    out(j) = syy > 0.0 ? std::fabs(xc.dot(yc)) / std::sqrt(sxx * syy) : 0.0;
  }
  return out;
}

SupportSet select_support(const Vector& stats, int j0, int keep) {
  std::vector<int> idx;
  idx.reserve(static_cast<std::size_t>(stats.size()));
  for (int j = 0; j < static_cast<int>(stats.size()); ++j) {
    if (j != j0) idx.push_back(j);
  }
  const auto take = std::min<std::size_t>(static_cast<std::size_t>(std::max(keep, 0)), idx.size());
  std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(take), idx.end(),
                    [&](int a, int b) {
                      if (stats(a) != stats(b)) return stats(a) > stats(b);
                      return a < b;
                    });
  idx.resize(take);
  std::sort(idx.begin(), idx.end());
  return SupportSet(std::move(idx));
}

namespace {

void check_split(Eigen::Index n, int s_n) {
  if (!(s_n > 1 && s_n < n)) {
    throw Error(ErrorKind::InvalidSplit,
                "split point s_n = " + std::to_string(s_n) + " must satisfy 1 < s_n < n = " +
                    std::to_string(n));
  }
}

Vector stats_for(const Dataset& d, ScreenerMethod m) {
  if (m == ScreenerMethod::Sis) {
    // Columns that are constant on a sub-sample carry no marginal signal.
    const Matrix xs = center_scale_columns(d.x);
    Vector out(d.p());
    const Vector yc = d.y.array() - d.y.mean();
    const double sy = yc.norm();
    for (Eigen::Index j = 0; j < d.p(); ++j) {
      const double sx = xs.col(j).norm();
      out(j) = (sx > 0.0 && sy > 0.0) ? std::fabs(xs.col(j).dot(yc)) / (sx * sy) : 0.0;
    }
    return out;
  }
  return sirs_stats(d);
}

}  // namespace

ScreeningStats screening_statistics(const Dataset& d, int s_n, const ScreenerConfig& cfg) {
  check_split(d.n(), s_n);
  cfg.validate(d.n());
  ScreeningStats out;
  out.s_n = s_n;
  out.n = static_cast<int>(d.n());
  out.refresh_every = cfg.refresh_every;
  if (cfg.method == ScreenerMethod::Fixed) return out;
  out.minus_sn = stats_for(d.rows(s_n, d.n()), cfg.method);
  for (int t = s_n; t < out.n; t += cfg.refresh_every) {
    out.refresh.push_back(stats_for(d.rows(0, t), cfg.method));
  }
  return out;
}

ScreeningSchedule build_schedule(const ScreeningStats& stats, int j0, int keep) {
  ScreeningSchedule s;
  s.s_n = stats.s_n;
  s.minus_sn = select_support(stats.minus_sn, j0, keep);
  std::vector<SupportSet> per_refresh;
  per_refresh.reserve(stats.refresh.size());
  for (const Vector& v : stats.refresh) per_refresh.push_back(select_support(v, j0, keep));
  for (int t = stats.s_n; t < stats.n; ++t) {
    s.forward.push_back(per_refresh[static_cast<std::size_t>((t - stats.s_n) / stats.refresh_every)]);
  }
  return s;
}

ScreeningSchedule screening_schedule(const Dataset& d, int j0, int s_n, const ScreenerConfig& cfg) {
  if (cfg.method == ScreenerMethod::Fixed) return fixed_schedule(d, j0, s_n, cfg.fixed);
  return build_schedule(screening_statistics(d, s_n, cfg), j0, cfg.resolved_keep(d.n()));
}

ScreeningSchedule fixed_schedule(const Dataset& d, int j0, int s_n,
                                 const std::vector<int>& support) {
  check_split(d.n(), s_n);
  std::vector<int> idx;
  for (int j : support) {
    if (j < 0 || j >= d.p()) {
      throw Error(ErrorKind::InvalidArgument, "fixed support index out of range", j);
    }
    if (j != j0) idx.push_back(j);
  }
  std::sort(idx.begin(), idx.end());
  idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
  ScreeningSchedule s;
  s.s_n = s_n;
  s.minus_sn = SupportSet(idx);
  s.forward.assign(static_cast<std::size_t>(d.n() - s_n), s.minus_sn);
  return s;
}

}  // namespace rose
