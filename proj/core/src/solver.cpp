#include "rose/solver.hpp"

#include "rose/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace rose {

namespace {

constexpr double kBoundarySlack = 1e-8;

// y - X beta, skipping zero coefficients when beta is sparse.
Vector residuals(const Dataset& d, const CoefVector& beta) {
  Eigen::Index nnz = 0;
  for (Eigen::Index j = 0; j < beta.size(); ++j) nnz += beta(j) != 0.0;
  if (3 * nnz >= beta.size()) return d.y - d.x * beta;
  Vector r = d.y;
  for (Eigen::Index j = 0; j < beta.size(); ++j) {
    if (beta(j) != 0.0) r.noalias() -= beta(j) * d.x.col(j);
  }
  return r;
}

double weight(const std::optional<Vector>& w, Eigen::Index j) { return w ? (*w)(j) : 1.0; }

double penalty(const CoefVector& beta, double lambda, const std::optional<Vector>& w) {
  if (lambda == 0.0) return 0.0;
  if (!w) return lambda * beta.lpNorm<1>();
  return lambda * beta.cwiseAbs().dot(*w);
}

double gap_from_grad(const CoefVector& beta, const Vector& grad, double lambda,
                     const std::optional<Vector>& w) {
  double acc = 0.0;
  for (Eigen::Index j = 0; j < beta.size(); ++j) {
    const double lam = lambda * weight(w, j);
    double c = 0.0;
    if (beta(j) > 0.0) {
      c = grad(j) + lam;
    } else if (beta(j) < 0.0) {
      c = grad(j) - lam;
    } else {
      c = std::max(0.0, std::fabs(grad(j)) - lam);
    }
    acc += c * c;
  }
  return std::sqrt(acc);
}

struct Evaluation {
  Vector resid;
  double objective = 0.0;
};

Evaluation evaluate(const Dataset& d, const CoefVector& beta, const LossSpec& spec, double lambda,
                    const std::optional<Vector>& w) {
  Evaluation e{residuals(d, beta), 0.0};
  e.objective = loss_value(spec, e.resid).mean() + penalty(beta, lambda, w);
  return e;
}

Vector gradient_from_residuals(const Dataset& d, const LossSpec& spec, const Vector& resid) {
  const Vector psi = loss_d1(spec, resid);
  return -(d.x.transpose() * psi) / static_cast<double>(d.n());
}

}  // namespace

double empirical_risk(const Dataset& d, const CoefVector& beta, const LossSpec& spec) {
  return loss_value(spec, residuals(d, beta)).mean();
}

CoefVector empirical_risk_grad(const Dataset& d, const CoefVector& beta, const LossSpec& spec) {
  return gradient_from_residuals(d, spec, residuals(d, beta));
}

CoefVector soft_threshold(const CoefVector& v, double kappa, const std::optional<Vector>& weights) {
  CoefVector out(v.size());
  for (Eigen::Index j = 0; j < v.size(); ++j) {
    const double shrunk = std::fabs(v(j)) - kappa * weight(weights, j);
    out(j) = shrunk > 0.0 ? std::copysign(shrunk, v(j)) : 0.0;
  }
  return out;
}

CoefVector project_l2(const CoefVector& v, double r) {
  const double norm = v.norm();
  if (norm <= r) return v;
  return v * (r / norm);
}

double stationarity_gap(const Dataset& d, const CoefVector& beta, const LossSpec& spec,
                        double lambda, const std::optional<Vector>& weights, double radius) {
  if (beta.norm() >= radius - kBoundarySlack) {
    throw Error(ErrorKind::BoundaryActive,
                "iterate lies on the l2-ball boundary; stationarity certificate does not apply");
  }
  return gap_from_grad(beta, empirical_risk_grad(d, beta, spec), lambda, weights);
}

double default_step_size(const Dataset& d, const LossSpec& spec) {
  const double scale = spec.family == LossFamily::Squared ? 1.0 : spec.tuning;
  double max_curv = 0.0;
  constexpr int kGrid = 2001;
  for (int k = 0; k < kGrid; ++k) {
    const double t = -10.0 * scale + 20.0 * scale * k / (kGrid - 1);
    max_curv = std::max(max_curv, loss_d2(spec, t));
  }
  if (max_curv <= 0.0) max_curv = 1.0;

  Vector v = Vector::Ones(d.p()) / std::sqrt(static_cast<double>(d.p()));
  double eig = 0.0;
  for (int it = 0; it < 20; ++it) {
    const Vector w = d.x.transpose() * (d.x * v) / static_cast<double>(d.n());
    eig = w.norm();
    if (eig == 0.0) break;
    v = w / eig;
  }
  if (eig <= 0.0) eig = 1.0;
  return 0.5 / (max_curv * eig);
}

SolveResult composite_gd(const Dataset& d, const LossSpec& spec, const SolverConfig& cfg,
                         const CoefVector& init) {
  cfg.validate(d.p());
  if (init.size() != d.p()) {
    throw Error(ErrorKind::DimensionMismatch, "init length must equal p");
  }
  if (init.norm() > cfg.radius * (1.0 + 1e-12)) {
    throw Error(ErrorKind::InvalidArgument, "init lies outside the l2 ball");
  }
  const auto& w = cfg.weights;
  const double lambda = cfg.lambda;
  double h = cfg.step_size > 0.0 ? cfg.step_size : default_step_size(d, spec);

  SolveResult res;
  res.beta = init;
  Evaluation cur = evaluate(d, res.beta, spec, lambda, w);
  if (!std::isfinite(cur.objective)) {
    throw Error(ErrorKind::NonFinite, "objective is not finite at the initial point");
  }
  Vector grad = gradient_from_residuals(d, spec, cur.resid);
  res.objective_trace.push_back(cur.objective);
  res.final_gap = gap_from_grad(res.beta, grad, lambda, w);

  auto interior = [&](const CoefVector& b) { return b.norm() < cfg.radius - kBoundarySlack; };

  res.converged = res.final_gap <= cfg.tol && interior(res.beta);
  while (!res.converged && res.iterations < cfg.max_iter) {
    CoefVector cand = project_l2(soft_threshold(res.beta - h * grad, lambda * h, w), cfg.radius);
    Evaluation next = evaluate(d, cand, spec, lambda, w);
    if (!std::isfinite(next.objective)) {
      throw Error(ErrorKind::NonFinite,
                  "objective became non-finite at iteration " + std::to_string(res.iterations) +
                      "; step size too large");
    }
    if (next.objective > cur.objective + 1e-14 * std::max(1.0, std::fabs(cur.objective))) {
      h *= 0.5;
      if (h < 1e-30) break;
      continue;
    }
    res.beta = std::move(cand);
    cur = std::move(next);
    grad = gradient_from_residuals(d, spec, cur.resid);
    ++res.iterations;
    res.objective_trace.push_back(cur.objective);
    res.final_gap = gap_from_grad(res.beta, grad, lambda, w);
    res.converged = res.final_gap <= cfg.tol && interior(res.beta);
  }
  res.on_boundary = !interior(res.beta);
  if (res.on_boundary) res.converged = false;
  res.step_size = h;
  return res;
}

std::vector<SolveResult> solve_path(const Dataset& d, const LossSpec& spec,
                                    const SolverConfig& cfg, std::span<const double> lambdas,
                                    const CoefVector& init) {
  SolverConfig local = cfg;
  if (local.step_size <= 0.0) local.step_size = default_step_size(d, spec);
  std::vector<SolveResult> out;
  out.reserve(lambdas.size());
  CoefVector start = init;
  for (double lambda : lambdas) {
    local.lambda = lambda;
    out.push_back(composite_gd(d, spec, local, start));
    start = out.back().beta;
    // Halved steps carry over along the path.
    local.step_size = out.back().step_size;
  }
  return out;
}

}  // namespace rose
