#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace rose {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Length-p parameter vector.
using CoefVector = Eigen::VectorXd;

/// n observations (rows of x) paired with a response y.
struct Dataset {
  Matrix x;
  Vector y;

  Eigen::Index n() const { return x.rows(); }
  Eigen::Index p() const { return x.cols(); }

  /// Rows [begin, end) as a new dataset.
  Dataset rows(Eigen::Index begin, Eigen::Index end) const;
};

/// Strictly increasing column indices in [0, p).
class SupportSet {
 public:
  SupportSet() = default;
  explicit SupportSet(std::vector<int> indices);

  std::span<const int> indices() const { return indices_; }
  std::size_t size() const { return indices_.size(); }
  bool empty() const { return indices_.empty(); }
  bool contains(int j) const;
  int operator[](std::size_t k) const { return indices_[k]; }

  auto begin() const { return indices_.begin(); }
  auto end() const { return indices_.end(); }

  friend bool operator==(const SupportSet&, const SupportSet&) = default;
  friend auto operator<=>(const SupportSet&, const SupportSet&) = default;

 private:
  std::vector<int> indices_;
};

/// Settings for the penalized, ball-constrained M-estimation solve.
struct SolverConfig {
  double lambda = 0.0;
  /// Gradient step h. Zero selects 0.5 / (Lipschitz estimate) automatically.
  double step_size = 0.0;
  double radius = 10.0;
  double tol = 1e-6;
  int max_iter = 20000;
  /// Per-coordinate penalty multipliers; uniform when absent.
  std::optional<Vector> weights;

  void validate(Eigen::Index p) const;

  friend bool operator==(const SolverConfig& a, const SolverConfig& b);
};

struct SeedSpec {
  std::uint64_t base_seed = 0;
  std::uint64_t stream_id = 0;

  friend bool operator==(const SeedSpec&, const SeedSpec&) = default;
};

}  // namespace rose
