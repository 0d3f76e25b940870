#include "rose/inference.hpp"

#include "rose/data.hpp"
#include "rose/normal.hpp"
#include "rose/rng.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

namespace rose {

int default_split(Eigen::Index n) {
  if (n < 2) return 0;
  return static_cast<int>(std::floor(2.0 * static_cast<double>(n) / std::log(n)));
}

int MethodConfig::resolved_split(Eigen::Index n) const { return s_n ? *s_n : default_split(n); }

void MethodConfig::validate(Eigen::Index n, Eigen::Index p) const {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "alpha must lie in (0, 1)");
  }
  if (newton_steps < 1) throw Error(ErrorKind::InvalidArgument, "newton_steps must be >= 1");
  if (cv_folds < 2) throw Error(ErrorKind::InvalidArgument, "cv_folds must be >= 2");
  if (cv_patience < 0) throw Error(ErrorKind::InvalidArgument, "cv_patience must be >= 0");
  if (!(adaptive_gamma >= 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "adaptive_gamma must be >= 0");
  }
  for (double l : lambda_grid) {
    if (!(l > 0.0 && std::isfinite(l))) {
      throw Error(ErrorKind::InvalidArgument, "lambda grid values must be positive");
    }
  }
  loss.validate();
  screener.validate(n);
  SolverConfig s = solver;
  s.weights.reset();
  s.validate(p);
  const int split = resolved_split(n);
  if (!(split > 1 && split < n)) {
    throw Error(ErrorKind::InvalidSplit,
                "split point s_n = " + std::to_string(split) + " must satisfy 1 < s_n < n");
  }
}

std::vector<double> default_lambda_grid(Eigen::Index n, Eigen::Index p) {
  constexpr int kPoints = 20;
  const double base = std::sqrt(std::log(static_cast<double>(std::max<Eigen::Index>(p, 2))) /
                                static_cast<double>(n));
  std::vector<double> grid(kPoints);
  const double lo = std::log(0.05);
  const double hi = std::log(2.0);
  for (int k = 0; k < kPoints; ++k) {
    grid[static_cast<std::size_t>(k)] = base * std::exp(hi + (lo - hi) * k / (kPoints - 1));
  }
  return grid;
}

namespace {

std::vector<double> sorted_desc(std::span<const double> grid) {
  std::vector<double> g(grid.begin(), grid.end());
  std::sort(g.begin(), g.end(), std::greater<>());
  g.erase(std::unique(g.begin(), g.end()), g.end());
  return g;
}

Dataset select_rows(const Dataset& d, const std::vector<Eigen::Index>& rows) {
  Dataset out{Matrix(static_cast<Eigen::Index>(rows.size()), d.p()),
              Vector(static_cast<Eigen::Index>(rows.size()))};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.x.row(static_cast<Eigen::Index>(i)) = d.x.row(rows[i]);
    out.y(static_cast<Eigen::Index>(i)) = d.y(rows[i]);
  }
  return out;
}

}  // namespace

CvPath cv_scan(const Dataset& d, const LossSpec& spec, std::span<const double> grid, int folds,
               std::uint64_t seed, const SolverConfig& solver, int patience) {
  if (grid.empty()) throw Error(ErrorKind::InvalidArgument, "lambda grid is empty");
  if (folds < 2) throw Error(ErrorKind::InvalidArgument, "cross-validation needs >= 2 folds");
  CvPath path;
  path.lambdas = sorted_desc(grid);
  const std::vector<double>& lambdas = path.lambdas;
  if (lambdas.size() == 1) return path;

  const Eigen::Index n = d.n();
  std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), Eigen::Index{0});
  Rng rng(SeedSpec{seed, 0x5eed'cf01ULL});
  for (std::size_t i = perm.size(); i > 1; --i) {
    std::swap(perm[i - 1], perm[rng.below(i)]);
  }
  std::vector<int> fold_of(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < perm.size(); ++i) {
    fold_of[static_cast<std::size_t>(perm[i])] = static_cast<int>(i % static_cast<std::size_t>(folds));
  }

  struct FoldState {
    Dataset train;
    Dataset test;
    SolverConfig cfg;
    CoefVector beta;
  };
  std::vector<FoldState> states;
  for (int f = 0; f < folds; ++f) {
    std::vector<Eigen::Index> train;
    std::vector<Eigen::Index> test;
    for (Eigen::Index i = 0; i < n; ++i) {
      (fold_of[static_cast<std::size_t>(i)] == f ? test : train).push_back(i);
    }
    if (test.empty() || train.empty()) continue;
    FoldState st{select_rows(d, train), select_rows(d, test), solver, CoefVector::Zero(d.p())};
    st.cfg.weights.reset();
    if (st.cfg.step_size <= 0.0) st.cfg.step_size = default_step_size(st.train, spec);
    states.push_back(std::move(st));
  }

  // Folds walk the decreasing grid in lockstep with warm starts, so the scan
  // can stop once the held-out loss has failed to improve `patience` times.
  std::vector<double>& score = path.scores;
  std::size_t& best = path.best;
  int stale = 0;
  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    double s = 0.0;
    for (FoldState& st : states) {
      st.cfg.lambda = lambdas[k];
      const SolveResult r = composite_gd(st.train, spec, st.cfg, st.beta);
      st.beta = r.beta;
      st.cfg.step_size = r.step_size;
      s += empirical_risk(st.test, st.beta, spec) / folds;
    }
    score.push_back(s);
    if (k == 0 || s < score[best]) {
      best = k;
      stale = 0;
    } else if (s == score[best]) {
      best = k;  // ties go to the smaller lambda
    } else if (patience > 0 && ++stale >= patience) {
      break;
    }
  }
  return path;
}

double cv_lambda(const Dataset& d, const LossSpec& spec, std::span<const double> grid, int folds,
                 std::uint64_t seed, const SolverConfig& solver, int patience) {
  const CvPath path = cv_scan(d, spec, grid, folds, seed, solver, patience);
  return path.lambdas[path.best];
}

InitialFit initial_estimator(const Dataset& d, const MethodConfig& cfg) {
  std::vector<double> grid =
      cfg.lambda_grid.empty() ? default_lambda_grid(d.n(), d.p()) : cfg.lambda_grid;
  grid = sorted_desc(grid);
  SolverConfig solver = cfg.solver;
  solver.weights.reset();

  InitialFit fit;
  try {
    fit.lambda = cv_lambda(d, cfg.loss, grid, cfg.cv_folds, cfg.cv_seed, solver, cfg.cv_patience);
    // Continuation from the largest penalty down to the selected one.
    std::vector<double> path_lambdas;
    for (double l : grid) {
      if (l >= fit.lambda) path_lambdas.push_back(l);
    }
    const auto path = solve_path(d, cfg.loss, solver, path_lambdas, CoefVector::Zero(d.p()));
    fit.stage1 = path.back().beta;

    SolverConfig second = solver;
    second.lambda = fit.lambda;
    second.step_size = path.back().step_size;
    if (cfg.adaptive_gamma > 0.0) {
      second.weights = fit.stage1.unaryExpr([&](double b) {
        return 1.0 / std::pow(std::max(std::fabs(b), 1e-4), cfg.adaptive_gamma);
      });
    }
    const SolveResult res = composite_gd(d, cfg.loss, second, fit.stage1);
    fit.beta = res.beta;
    fit.converged = res.converged && path.back().converged;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::NonFinite) {
      throw Error(ErrorKind::SolverFailure, std::string("initial estimator failed: ") + e.what());
    }
    throw;
  }
  return fit;
}

Matrix empirical_hessian_sub(const Dataset& d, const CoefVector& beta_tilde, const LossSpec& spec,
                             std::span<const int> indices) {
  const Vector w = loss_d2(spec, Vector(d.y - d.x * beta_tilde)) / static_cast<double>(d.n());
  const auto k = static_cast<Eigen::Index>(indices.size());
  Matrix xs(d.n(), k);
  for (Eigen::Index c = 0; c < k; ++c) xs.col(c) = d.x.col(indices[static_cast<std::size_t>(c)]);
  const Matrix wx = xs.array().colwise() * w.array();
  Matrix h = xs.transpose() * wx;
  return 0.5 * (h + h.transpose());
}

Vector omega_hat(const Matrix& sigma_mm, const Vector& sigma_mj) {
  if (sigma_mm.rows() == 0) return Vector(0);
  Eigen::LLT<Matrix> llt(sigma_mm);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorKind::SingularHessian, "Hessian block is not positive definite");
  }
  const Matrix& l = llt.matrixLLT();
  const double min_pivot = l.diagonal().array().square().minCoeff();
  if (!(min_pivot > 1e-10)) {
    throw Error(ErrorKind::SingularHessian,
                "smallest Cholesky pivot " + std::to_string(min_pivot) + " is below 1e-10");
  }
  Vector w = llt.solve(sigma_mj);
  const double resid = (sigma_mm * w - sigma_mj).norm();
  if (!(resid <= 1e-8 * sigma_mj.norm()) && sigma_mj.norm() > 0.0) {
    throw Error(ErrorKind::SingularHessian, "Hessian solve failed the residual check");
  }
  return w;
}

namespace {

double sigma_sq_from_psi(const Dataset& d, const Vector& psi, const SupportSet& support, int j0,
                         const Vector& omega) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < d.n(); ++i) {
    double z = d.x(i, j0);
    for (std::size_t k = 0; k < support.size(); ++k) {
      z -= omega(static_cast<Eigen::Index>(k)) * d.x(i, support[k]);
    }
    const double s = psi(i) * z;
    acc += s * s;
  }
  const double v = acc / static_cast<double>(d.n());
  if (!(v >= 1e-12)) {
    throw Error(ErrorKind::DegenerateVariance,
                "decorrelated score variance " + std::to_string(v) + " is below 1e-12", j0);
  }
  return v;
}

}  // namespace

double sigma_hat_sq(const Dataset& d, const CoefVector& beta_tilde, const LossSpec& spec,
                    const SupportSet& support, int j0, const Vector& omega) {
  if (omega.size() != static_cast<Eigen::Index>(support.size())) {
    throw Error(ErrorKind::DimensionMismatch, "omega length must equal the support size");
  }
  const Vector psi = loss_d1(spec, Vector(d.y - d.x * beta_tilde));
  return sigma_sq_from_psi(d, psi, support, j0, omega);
}

FitContext prepare_fit(const Dataset& d, const MethodConfig& cfg) {
  cfg.validate(d.n(), d.p());
  FitContext ctx;
  ctx.data = &d;
  ctx.method = cfg;
  ctx.s_n = cfg.resolved_split(d.n());
  ctx.initial = initial_estimator(d, cfg);
  ctx.screening = screening_statistics(d, ctx.s_n, cfg.screener);
  return ctx;
}

InferenceResult rose_fit(const FitContext& ctx, int j0, double alpha) {
  const Dataset& d = *ctx.data;
  const MethodConfig& m = ctx.method;
  const LossSpec& loss = m.loss;
  if (j0 < 0 || j0 >= d.p()) throw Error(ErrorKind::InvalidArgument, "target index out of range", j0);
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorKind::InvalidArgument, "alpha must lie in (0, 1)");

  const ScreeningSchedule schedule =
      m.screener.method == ScreenerMethod::Fixed
          ? fixed_schedule(d, j0, ctx.s_n, m.screener.fixed)
          : build_schedule(ctx.screening, j0, m.screener.resolved_keep(d.n()));

  const CoefVector& beta_tilde = ctx.initial.beta;
  const Eigen::Index n = d.n();

  // Distinct supports, each solved once.
  std::map<SupportSet, int> support_id;
  std::vector<const SupportSet*> supports;
  std::vector<int> row_support(static_cast<std::size_t>(n));
  for (int t = 0; t < n; ++t) {
    const SupportSet& s = schedule.for_row(t);
    auto [it, inserted] = support_id.try_emplace(s, static_cast<int>(supports.size()));
    if (inserted) supports.push_back(&it->first);
    row_support[static_cast<std::size_t>(t)] = it->second;
  }

  // One Hessian over the union of all supports and j0.
  std::vector<int> uni{j0};
  for (const SupportSet* s : supports) uni.insert(uni.end(), s->begin(), s->end());
  std::sort(uni.begin(), uni.end());
  uni.erase(std::unique(uni.begin(), uni.end()), uni.end());
  const Matrix h_union = empirical_hessian_sub(d, beta_tilde, loss, uni);
  auto pos = [&](int j) {
    return static_cast<Eigen::Index>(std::lower_bound(uni.begin(), uni.end(), j) - uni.begin());
  };
  const Eigen::Index pj0 = pos(j0);

  const Vector psi = loss_d1(loss, Vector(d.y - d.x * beta_tilde));

  InferenceResult res;
  res.j0 = j0;
  res.alpha = alpha;
  res.beta_tilde = beta_tilde;
  res.support_minus_sn = schedule.minus_sn;
  res.distinct_supports = static_cast<int>(supports.size());

  std::vector<Vector> omegas(supports.size());
  std::vector<double> sigmas(supports.size());
  for (std::size_t s = 0; s < supports.size(); ++s) {
    const SupportSet& sup = *supports[s];
    const auto k = static_cast<Eigen::Index>(sup.size());
    Matrix hmm(k, k);
    Vector hmj(k);
    for (Eigen::Index a = 0; a < k; ++a) {
      const Eigen::Index pa = pos(sup[static_cast<std::size_t>(a)]);
      hmj(a) = h_union(pa, pj0);
      for (Eigen::Index b = 0; b < k; ++b) hmm(a, b) = h_union(pa, pos(sup[static_cast<std::size_t>(b)]));
    }
    try {
      omegas[s] = omega_hat(hmm, hmj);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::SingularHessian) throw;
      const double ridge = 1e-6 * std::fabs(hmm.trace()) / static_cast<double>(k);
      hmm.diagonal().array() += ridge;
      omegas[s] = omega_hat(hmm, hmj);
      res.ridge_applied = true;
    }
    sigmas[s] = std::sqrt(sigma_sq_from_psi(d, psi, sup, j0, omegas[s]));
  }
  res.sigma_hat_minus_sn = sigmas[static_cast<std::size_t>(support_id.at(schedule.minus_sn))];

  // Per-row decorrelated weight z_t / sigma_t and nuisance offset.
  Vector weight(n);
  Vector offset(n);
  for (Eigen::Index t = 0; t < n; ++t) {
    const auto s = static_cast<std::size_t>(row_support[static_cast<std::size_t>(t)]);
    const SupportSet& sup = *supports[s];
    double z = d.x(t, j0);
    double off = 0.0;
    for (std::size_t k = 0; k < sup.size(); ++k) {
      const double xv = d.x(t, sup[k]);
      z -= omegas[s](static_cast<Eigen::Index>(k)) * xv;
      off += xv * beta_tilde(sup[k]);
    }
    weight(t) = z / sigmas[s];
    offset(t) = off;
  }
  const Vector xj = d.x.col(j0);

  auto score_and_slope = [&](double b) {
    const Vector r = d.y - xj * b - offset;
    const double score = weight.dot(loss_d1(loss, r));
    const double slope = -weight.cwiseProduct(xj).dot(loss_d2(loss, r));
    return std::pair{score, slope};
  };

  double b = beta_tilde(j0);
  double slope = 0.0;
  res.newton_trace.push_back(b);
  for (int step = 0; step < m.newton_steps; ++step) {
    const auto [score, d_b] = score_and_slope(b);
    if (step == 0) res.score_trace.push_back(score);
    if (!(std::fabs(d_b) >= 1e-10 * static_cast<double>(n))) {
      throw Error(ErrorKind::ZeroNewtonDenominator,
                  "Newton denominator vanished for target " + std::to_string(j0) +
                      "; the loss has no curvature at the residuals (try a larger tuning constant)",
                  j0);
    }
    slope = d_b;
    b -= score / d_b;
    res.newton_trace.push_back(b);
    res.score_trace.push_back(score_and_slope(b).first);
  }
  if (!std::isfinite(b)) {
    throw Error(ErrorKind::NonFinite, "Newton iterate is not finite", j0);
  }

  res.beta_hat = b;
  res.gamma = slope / static_cast<double>(n);
  const double half =
      normal_quantile(alpha / 2.0) / (std::sqrt(static_cast<double>(n)) * std::fabs(res.gamma));
  res.ci_lo = b - half;
  res.ci_hi = b + half;
  return res;
}

InferenceResult rose_fit(const Dataset& d, const InferenceConfig& cfg) {
  validate_dataset(d);
  const FitContext ctx = prepare_fit(d, cfg.method);
  return rose_fit(ctx, cfg.j0, cfg.method.alpha);
}

std::vector<TargetOutcome> bonferroni_infer(const Dataset& d, const MethodConfig& cfg,
                                            std::span<const int> targets) {
  if (targets.empty()) throw Error(ErrorKind::InvalidArgument, "no inference targets given");
  validate_dataset(d);
  const FitContext ctx = prepare_fit(d, cfg);
  const double adjusted = cfg.alpha / static_cast<double>(targets.size());
  std::vector<TargetOutcome> out;
  out.reserve(targets.size());
  for (int j0 : targets) {
    TargetOutcome o;
    o.target = j0;
    o.adjusted_alpha = adjusted;
    try {
      o.result = rose_fit(ctx, j0, adjusted);
      o.significant = o.result->ci_lo > 0.0 || o.result->ci_hi < 0.0;
    } catch (const Error& e) {
      o.error_kind = e.kind();
      o.error = e.what();
    }
    out.push_back(std::move(o));
  }
  return out;
}

}  // namespace rose
