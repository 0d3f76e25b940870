#pragma once

#include "rose/types.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace rose {

enum class LossFamily { Tukey, PseudoHuber, Huber, Squared };

inline constexpr double kDefaultTukeyTuning = 4.685;
inline constexpr double kDefaultHuberTuning = 1.345;

/// A robust loss applied to residuals t = y - x'beta.
struct LossSpec {
  LossFamily family = LossFamily::Tukey;
  /// t0 for Tukey, delta for (pseudo-)Huber; ignored for squared loss.
  double tuning = kDefaultTukeyTuning;

  static LossSpec tukey(double t0 = kDefaultTukeyTuning) { return {LossFamily::Tukey, t0}; }
  static LossSpec pseudo_huber(double delta = kDefaultHuberTuning) {
    return {LossFamily::PseudoHuber, delta};
  }
  static LossSpec huber(double delta = kDefaultHuberTuning) { return {LossFamily::Huber, delta}; }
  static LossSpec squared() { return {LossFamily::Squared, 1.0}; }

  /// Family default tuning constant (1 for squared loss).
  static double default_tuning(LossFamily family);

  void validate() const;

  friend bool operator==(const LossSpec&, const LossSpec&) = default;
};

/// CLI names: tukey, pseudo_huber, huber, squared.
std::string_view loss_name(LossFamily family);
std::optional<LossFamily> parse_loss_family(std::string_view name);

double loss_value(const LossSpec& spec, double t);
double loss_d1(const LossSpec& spec, double t);
double loss_d2(const LossSpec& spec, double t);
double loss_d3(const LossSpec& spec, double t);

// Elementwise versions over a residual vector; the family switch happens once.
Vector loss_value(const LossSpec& spec, const Vector& t);
Vector loss_d1(const LossSpec& spec, const Vector& t);
Vector loss_d2(const LossSpec& spec, const Vector& t);

/// Grid maxima used to check the bounded-influence and smoothness conditions
/// a loss must satisfy for the inference procedure.
struct LossAuditReport {
  double grid_max_abs_d1_times_t = 0.0;
  double grid_max_abs_d1 = 0.0;
  double grid_max_abs_d2 = 0.0;
  double grid_max_abs_d3 = 0.0;
  /// max |l'(t) + l'(-t)| over the grid.
  double odd_symmetry_violation = 0.0;
  /// max over positive grid points of max(0, -l'(t)).
  double nonneg_d1_on_pos_violation = 0.0;
};

LossAuditReport assumption_audit(const LossSpec& spec, std::span<const double> grid);

}  // namespace rose
