#pragma once

#include "rose/inference.hpp"
#include "rose/rng.hpp"
#include "rose/types.hpp"

#include <string>
#include <utility>
#include <vector>

namespace rose {

enum class ErrorModel {
  /// 0.9 N(0,1) + 0.1 N(0, sigma^2).
  Contaminated,
  /// (-1)^V * exp(N(0,1)) with V uniform on {1, 2}.
  LognormalSign,
};

struct ErrorSpec {
  ErrorModel model = ErrorModel::Contaminated;
  double sigma = 5.0;

  friend bool operator==(const ErrorSpec&, const ErrorSpec&) = default;
};

/// Rows i.i.d. N(0, S) with S_jk = rho^|j-k|, drawn with the AR(1) recursion
/// x_1 = e_1, x_j = rho x_{j-1} + sqrt(1 - rho^2) e_j.
Matrix gen_ar1_covariates(int n, int p, double rho, Rng& rng);
Matrix gen_ar1_covariates(int n, int p, double rho, const SeedSpec& seed);

Vector gen_errors(const ErrorSpec& model, int n, Rng& rng);
Vector gen_errors(const ErrorSpec& model, int n, const SeedSpec& seed);

/// One method under study (a column group of the results table).
struct SimSetting {
  std::string label;
  MethodConfig method;

  friend bool operator==(const SimSetting&, const SimSetting&) = default;
};

struct SimDesign {
  int n = 300;
  int p = 500;
  /// Nonzero true coefficients as (0-based index, value).
  std::vector<std::pair<int, double>> beta0;
  double rho = 0.5;
  ErrorSpec error;
  int reps = 200;
  SeedSpec seed;
  /// 0-based target indices.
  std::vector<int> targets;
  std::vector<SimSetting> settings;

  void validate() const;
  CoefVector beta0_vector() const;

  friend bool operator==(const SimDesign&, const SimDesign&) = default;
};

/// Design with the contaminated-noise coefficients (3, 1.5, 0, 0, 2, 0, ...).
SimDesign contaminated_design(int n, int p, double sigma);
/// Design with lognormal-sign noise and coefficients (1, 1, 1, 0, ...).
SimDesign heavy_tailed_design(int n, int p);

/// Draws X, then the noise, from one stream; y = X beta0 + eps.
Dataset generate_dataset(const SimDesign& design, const SeedSpec& rep_seed);

struct EcpAlRow {
  std::string setting;
  int target = 0;
  double ecp = 0.0;
  double al_mean = 0.0;
  /// Sample sd (n - 1 denominator); 0 with a single successful rep.
  double al_sd = 0.0;
  int reps_ok = 0;
  int reps = 0;
};

struct RepRecord {
  int rep = 0;
  int setting = 0;
  int target = 0;
  bool ok = false;
  std::string error;
  double estimate = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  double gamma = 0.0;
  bool covered = false;
};

struct SimReport {
  std::vector<EcpAlRow> rows;
  /// Ordered by (rep, setting, target).
  std::vector<RepRecord> records;
};

/// Runs every replication (in parallel over reps) and aggregates coverage and
/// interval length per (setting, target). The output does not depend on
/// `threads`. Throws AllRepsFailed if some (setting, target) has no successful
/// replication.
SimReport run_replications(const SimDesign& design, int threads = 1);

}  // namespace rose
