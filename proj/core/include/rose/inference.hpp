#pragma once

#include "rose/error.hpp"
#include "rose/losses.hpp"
#include "rose/screening.hpp"
#include "rose/solver.hpp"
#include "rose/types.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace rose {

/// Everything needed to run the inference pipeline except the target index.
struct MethodConfig {
  double alpha = 0.05;
  /// Split point; floor(2n / log n) when absent.
  std::optional<int> s_n;
  int newton_steps = 8;
  LossSpec loss = LossSpec::tukey();
  ScreenerConfig screener;
  /// lambda is ignored here; it is chosen by cross-validation.
  SolverConfig solver;
  double adaptive_gamma = 1.0;
  int cv_folds = 5;
  /// Candidate penalties; the default grid when empty.
  std::vector<double> lambda_grid;
  std::uint64_t cv_seed = 0;
  /// Cross-validation stops after this many consecutive grid values without
  /// improvement; 0 scans the whole grid.
  int cv_patience = 3;

  void validate(Eigen::Index n, Eigen::Index p) const;
  int resolved_split(Eigen::Index n) const;

  friend bool operator==(const MethodConfig&, const MethodConfig&) = default;
};

struct InferenceConfig {
  int j0 = 0;
  MethodConfig method;
};

/// floor(2n / log n).
int default_split(Eigen::Index n);

/// 20 log-spaced points in [0.05, 2] * sqrt(log p / n), in decreasing order.
std::vector<double> default_lambda_grid(Eigen::Index n, Eigen::Index p);

struct CvPath {
  /// The grid in decreasing order.
  std::vector<double> lambdas;
  /// Mean held-out loss for each grid value visited; shorter than `lambdas`
  /// when the scan stopped early, empty for a one-point grid.
  std::vector<double> scores;
  std::size_t best = 0;
};

/// The scan behind cv_lambda, with the held-out loss of every visited value.
CvPath cv_scan(const Dataset& d, const LossSpec& spec, std::span<const double> grid, int folds,
               std::uint64_t seed, const SolverConfig& solver = {}, int patience = 0);

/// K-fold cross-validation of the penalized fit; returns the grid value with
/// the smallest mean held-out loss (ties go to the smaller lambda). The grid is
/// scanned from the largest value down; with patience > 0 the scan stops after
/// that many consecutive values fail to improve on the best so far.
double cv_lambda(const Dataset& d, const LossSpec& spec, std::span<const double> grid, int folds,
                 std::uint64_t seed, const SolverConfig& solver = {}, int patience = 0);

struct InitialFit {
  CoefVector beta;
  CoefVector stage1;
  double lambda = 0.0;
  bool converged = false;
};

/// Two-stage adaptive-LASSO M-estimator: a uniform-penalty fit at the
/// cross-validated lambda, then a refit with weights 1/max(|b_j|, 1e-4)^gamma.
InitialFit initial_estimator(const Dataset& d, const MethodConfig& cfg);

/// Rows/columns `indices` of (1/n) sum_i l''(r_i) x_i x_i' at beta_tilde,
/// built from the selected columns only.
Matrix empirical_hessian_sub(const Dataset& d, const CoefVector& beta_tilde, const LossSpec& spec,
                             std::span<const int> indices);

/// Solves sigma_mm * w = sigma_mj by Cholesky. Throws SingularHessian when a
/// pivot falls below 1e-10 or the residual check fails.
Vector omega_hat(const Matrix& sigma_mm, const Vector& sigma_mj);

/// (1/n) sum_i l'(r_i)^2 (x_{i,j0} - w'x_{i,M})^2 at beta_tilde. Throws
/// DegenerateVariance when the result is below 1e-12.
double sigma_hat_sq(const Dataset& d, const CoefVector& beta_tilde, const LossSpec& spec,
                    const SupportSet& support, int j0, const Vector& omega);

struct InferenceResult {
  int j0 = 0;
  double alpha = 0.05;
  double beta_hat = 0.0;
  /// Newton denominator at the last step divided by n.
  double gamma = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  double sigma_hat_minus_sn = 0.0;
  /// b^(0), ..., b^(l).
  std::vector<double> newton_trace;
  /// score(b^(0)), ..., score(b^(l)).
  std::vector<double> score_trace;
  SupportSet support_minus_sn;
  CoefVector beta_tilde;
  int distinct_supports = 0;
  /// A ridge was added to at least one Hessian block before solving.
  bool ridge_applied = false;
};

/// State shared by every target of one dataset: the initial estimate and the
/// j0-independent screening statistics.
struct FitContext {
  const Dataset* data = nullptr;
  MethodConfig method;
  int s_n = 0;
  InitialFit initial;
  ScreeningStats screening;
};

FitContext prepare_fit(const Dataset& d, const MethodConfig& cfg);

/// Recursive online score estimate and CI for coefficient j0 at level alpha.
InferenceResult rose_fit(const FitContext& ctx, int j0, double alpha);
InferenceResult rose_fit(const Dataset& d, const InferenceConfig& cfg);

struct TargetOutcome {
  int target = 0;
  double adjusted_alpha = 0.0;
  std::optional<InferenceResult> result;
  std::optional<ErrorKind> error_kind;
  std::string error;
  /// The adjusted CI excludes zero.
  bool significant = false;
};

/// rose_fit for every target at level alpha / |targets|, sharing the initial
/// estimate. Per-target failures are recorded, not thrown.
std::vector<TargetOutcome> bonferroni_infer(const Dataset& d, const MethodConfig& cfg,
                                            std::span<const int> targets);

}  // namespace rose
