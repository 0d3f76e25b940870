#pragma once

#include "rose/inference.hpp"
#include "rose/losses.hpp"
#include "rose/screening.hpp"
#include "rose/simgen.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rose::cli {

/// Bad configuration or usage (exit code 1).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SettingConfig {
  std::string label;
  LossFamily loss = LossFamily::Tukey;
  std::optional<double> tuning;

  friend bool operator==(const SettingConfig&, const SettingConfig&) = default;
};

struct SimulationConfig {
  int n = 300;
  int p = 500;
  double rho = 0.5;
  int reps = 200;
  ErrorModel error_model = ErrorModel::Contaminated;
  double sigma = 5.0;
  /// (1-based index, value) pairs.
  std::vector<std::pair<int, double>> beta0 = {{1, 3.0}, {2, 1.5}, {5, 2.0}};
  /// 1-based.
  std::vector<int> targets = {1, 2, 3, 5};
  std::vector<SettingConfig> settings = {{"Robust-ROSE", LossFamily::Tukey, std::nullopt}};

  friend bool operator==(const SimulationConfig&, const SimulationConfig&) = default;
};

/// Everything a command needs. Files use 1-based coefficient labels.
struct RunConfig {
  std::string data;
  std::string out;
  std::string response = "y";
  /// Column names or 1-based indices; empty selects every column.
  std::vector<std::string> targets;
  double alpha = 0.05;
  LossFamily loss = LossFamily::Tukey;
  std::optional<double> tuning;
  std::optional<int> s_n;
  int newton_steps = 8;

  ScreenerMethod screener = ScreenerMethod::Sirs;
  std::optional<int> keep;
  int refresh_every = 1;

  double radius = 10.0;
  double tol = 1e-6;
  int max_iter = 20000;
  /// 0 selects the automatic step.
  double step_size = 0.0;

  int cv_folds = 5;
  int cv_patience = 3;
  double adaptive_gamma = 1.0;
  std::vector<double> lambda_grid;

  std::uint64_t seed = 0;
  /// 0 uses every hardware thread.
  int threads = 0;
  /// Optional per-replication CSV written by `simulate`.
  std::string rep_log;

  SimulationConfig simulation;

  /// Method settings for a given loss (tuning defaults per family when absent).
  MethodConfig method(LossFamily family, std::optional<double> tuning) const;
  MethodConfig method() const { return method(loss, tuning); }
  SimDesign design() const;
  int resolved_threads() const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Strict parse: unknown keys and ill-typed values throw ConfigError naming
/// the key path.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
/// Pretty-printed JSON that parse_config maps back to the same RunConfig.
std::string dump_config(const RunConfig& cfg);

/// Range checks that do not need the data.
void validate_config(const RunConfig& cfg);

}  // namespace rose::cli
