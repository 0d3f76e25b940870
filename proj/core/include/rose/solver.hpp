#pragma once

#include "rose/losses.hpp"
#include "rose/types.hpp"

#include <optional>
#include <span>
#include <vector>

namespace rose {

/// Mean loss (1/n) sum_i l(y_i - x_i'beta).
double empirical_risk(const Dataset& d, const CoefVector& beta, const LossSpec& spec);

/// Gradient -(1/n) sum_i l'(r_i) x_i of the empirical risk.
CoefVector empirical_risk_grad(const Dataset& d, const CoefVector& beta, const LossSpec& spec);

/// Componentwise sign(v_j) * max(|v_j| - kappa * w_j, 0), w_j = 1 without weights.
CoefVector soft_threshold(const CoefVector& v, double kappa,
                          const std::optional<Vector>& weights = std::nullopt);

/// Euclidean projection onto the ball of radius r.
CoefVector project_l2(const CoefVector& v, double r);

/// Smallest ||grad + lambda * u||_2 over subgradients u of the weighted l1
/// norm at beta. Throws BoundaryActive when beta is within 1e-8 of the ball
/// boundary, where the certificate does not apply.
double stationarity_gap(const Dataset& d, const CoefVector& beta, const LossSpec& spec,
                        double lambda, const std::optional<Vector>& weights = std::nullopt,
                        double radius = 10.0);

/// 0.5 / (max l'' * top eigenvalue of X'X/n), the eigenvalue from 20 power
/// iterations.
double default_step_size(const Dataset& d, const LossSpec& spec);

struct SolveResult {
  CoefVector beta;
  int iterations = 0;
  double final_gap = 0.0;
  /// Penalized objective after every accepted iterate, starting with init.
  std::vector<double> objective_trace;
  bool converged = false;
  /// The last iterate touches the ball boundary; the gap certificate is void.
  bool on_boundary = false;
  /// Step size in effect at exit (after any halving).
  double step_size = 0.0;
};

/// Proximal gradient iterations
///   beta <- project_l2(soft_threshold(beta - h * grad, lambda * h, weights), r)
/// with step halving whenever the penalized objective would increase. Stops
/// once the stationarity gap is at most cfg.tol or after cfg.max_iter steps.
/// Throws NonFinite if the objective stops being finite.
SolveResult composite_gd(const Dataset& d, const LossSpec& spec, const SolverConfig& cfg,
                         const CoefVector& init);

/// Warm-started solves along `lambdas` in the order given.
std::vector<SolveResult> solve_path(const Dataset& d, const LossSpec& spec,
                                    const SolverConfig& cfg, std::span<const double> lambdas,
                                    const CoefVector& init);

}  // namespace rose
