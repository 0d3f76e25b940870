#include "rose/simgen.hpp"

#include "rose/error.hpp"
#include "rose/parallel.hpp"

#include <cmath>
#include <optional>
#include <string>

namespace rose {

Matrix gen_ar1_covariates(int n, int p, double rho, Rng& rng) {
  if (!(rho >= 0.0 && rho < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "AR(1) coefficient must lie in [0, 1)");
  }
  const double innov = std::sqrt(1.0 - rho * rho);
  Matrix x(n, p);
  for (int i = 0; i < n; ++i) {
    double prev = rng.normal();
    x(i, 0) = prev;
    for (int j = 1; j < p; ++j) {
      prev = rho * prev + innov * rng.normal();
      x(i, j) = prev;
    }
  }
  return x;
}

Matrix gen_ar1_covariates(int n, int p, double rho, const SeedSpec& seed) {
  Rng rng(seed);
  return gen_ar1_covariates(n, p, rho, rng);
}

Vector gen_errors(const ErrorSpec& model, int n, Rng& rng) {
  Vector e(n);
  for (int i = 0; i < n; ++i) {
    switch (model.model) {
      case ErrorModel::Contaminated: {
        const bool outlier = rng.uniform() < 0.1;
        const double z = rng.normal();
        e(i) = outlier ? model.sigma * z : z;
        break;
      }
      case ErrorModel::LognormalSign: {
        const double u = std::exp(rng.normal());
        e(i) = rng.uniform() < 0.5 ? -u : u;
        break;
      }
    }
  }
  return e;
}

Vector gen_errors(const ErrorSpec& model, int n, const SeedSpec& seed) {
  Rng rng(seed);
  return gen_errors(model, n, rng);
}

void SimDesign::validate() const {
  if (n < 10) throw Error(ErrorKind::InvalidArgument, "simulation n must be >= 10");
  if (p < 1) throw Error(ErrorKind::InvalidArgument, "simulation p must be >= 1");
  if (reps < 1) throw Error(ErrorKind::InvalidArgument, "reps must be >= 1");
  if (!(rho >= 0.0 && rho < 1.0)) throw Error(ErrorKind::InvalidArgument, "rho must lie in [0, 1)");
  if (targets.empty()) throw Error(ErrorKind::InvalidArgument, "no simulation targets");
  for (int t : targets) {
    if (t < 0 || t >= p) throw Error(ErrorKind::InvalidArgument, "target index out of range", t);
  }
  for (const auto& [j, v] : beta0) {
    if (j < 0 || j >= p) throw Error(ErrorKind::InvalidArgument, "beta0 index out of range", j);
    if (!std::isfinite(v)) throw Error(ErrorKind::InvalidArgument, "beta0 value not finite", j);
  }
  if (settings.empty()) throw Error(ErrorKind::InvalidArgument, "no method settings");
  for (const SimSetting& s : settings) s.method.validate(n, p);
}

CoefVector SimDesign::beta0_vector() const {
  CoefVector b = CoefVector::Zero(p);
  for (const auto& [j, v] : beta0) b(j) = v;
  return b;
}

SimDesign contaminated_design(int n, int p, double sigma) {
  SimDesign d;
  d.n = n;
  d.p = p;
  d.beta0 = {{0, 3.0}, {1, 1.5}, {4, 2.0}};
  d.error = {ErrorModel::Contaminated, sigma};
  d.targets = {0, 1, 2, 4};
  d.settings = {{"Robust-ROSE", MethodConfig{}}};
  return d;
}

SimDesign heavy_tailed_design(int n, int p) {
  SimDesign d;
  d.n = n;
  d.p = p;
  d.beta0 = {{0, 1.0}, {1, 1.0}, {2, 1.0}};
  d.error = {ErrorModel::LognormalSign, 1.0};
  d.targets = {0, 1, 2, 4};
  MethodConfig m;
  m.loss = LossSpec::pseudo_huber();
  d.settings = {{"Robust-ROSE", m}};
  return d;
}

Dataset generate_dataset(const SimDesign& design, const SeedSpec& rep_seed) {
  Rng rng(rep_seed);
  Dataset d;
  d.x = gen_ar1_covariates(design.n, design.p, design.rho, rng);
  const Vector eps = gen_errors(design.error, design.n, rng);
  d.y = d.x * design.beta0_vector() + eps;
  return d;
}

SimReport run_replications(const SimDesign& design, int threads) {
  design.validate();
  const CoefVector beta0 = design.beta0_vector();
  const std::size_t n_set = design.settings.size();
  const std::size_t n_tgt = design.targets.size();
  const std::size_t per_rep = n_set * n_tgt;
  std::vector<RepRecord> records(static_cast<std::size_t>(design.reps) * per_rep);

  parallel_for(design.reps, threads, [&](int rep) {
    const Dataset data = generate_dataset(design, derive_seed(design.seed, static_cast<std::uint64_t>(rep)));
    // Settings that share the screener configuration share its statistics.
    std::vector<std::optional<ScreeningStats>> screening_cache(n_set);
    for (std::size_t s = 0; s < n_set; ++s) {
      const MethodConfig& m = design.settings[s].method;
      RepRecord* slot = &records[static_cast<std::size_t>(rep) * per_rep + s * n_tgt];
      for (std::size_t k = 0; k < n_tgt; ++k) {
        slot[k].rep = rep;
        slot[k].setting = static_cast<int>(s);
        slot[k].target = design.targets[k];
      }
      FitContext ctx;
      try {
        ctx.data = &data;
        ctx.method = m;
        ctx.s_n = m.resolved_split(data.n());
        ctx.initial = initial_estimator(data, m);
        for (std::size_t prev = 0; prev < s; ++prev) {
          const MethodConfig& pm = design.settings[prev].method;
          if (screening_cache[prev] && pm.screener == m.screener &&
              pm.resolved_split(data.n()) == ctx.s_n) {
            screening_cache[s] = screening_cache[prev];
            break;
          }
        }
        if (!screening_cache[s]) screening_cache[s] = screening_statistics(data, ctx.s_n, m.screener);
        ctx.screening = *screening_cache[s];
      } catch (const Error& e) {
        for (std::size_t k = 0; k < n_tgt; ++k) slot[k].error = e.what();
        continue;
      }
      for (std::size_t k = 0; k < n_tgt; ++k) {
        const int j0 = design.targets[k];
        try {
          const InferenceResult r = rose_fit(ctx, j0, m.alpha);
          slot[k].ok = true;
          slot[k].estimate = r.beta_hat;
          slot[k].ci_lo = r.ci_lo;
          slot[k].ci_hi = r.ci_hi;
          slot[k].gamma = r.gamma;
          slot[k].covered = r.ci_lo <= beta0(j0) && beta0(j0) <= r.ci_hi;
        } catch (const Error& e) {
          slot[k].error = e.what();
        }
      }
    }
  });

  SimReport report;
  for (std::size_t s = 0; s < n_set; ++s) {
    for (std::size_t k = 0; k < n_tgt; ++k) {
      EcpAlRow row;
      row.setting = design.settings[s].label;
      row.target = design.targets[k];
      row.reps = design.reps;
      double covered = 0.0;
      double sum = 0.0;
      std::vector<double> lengths;
      // Ordered reduction over reps.
      for (int rep = 0; rep < design.reps; ++rep) {
        const RepRecord& r = records[static_cast<std::size_t>(rep) * per_rep + s * n_tgt + k];
        if (!r.ok) continue;
        covered += r.covered ? 1.0 : 0.0;
        lengths.push_back(r.ci_hi - r.ci_lo);
        sum += lengths.back();
      }
      row.reps_ok = static_cast<int>(lengths.size());
      if (row.reps_ok == 0) {
        throw Error(ErrorKind::AllRepsFailed,
                    "every replication failed for setting '" + row.setting + "', target " +
                        std::to_string(row.target + 1));
      }
      row.ecp = covered / row.reps_ok;
      row.al_mean = sum / row.reps_ok;
      if (row.reps_ok > 1) {
        double ss = 0.0;
        for (double l : lengths) ss += (l - row.al_mean) * (l - row.al_mean);
        row.al_sd = std::sqrt(ss / (row.reps_ok - 1));
      }
      report.rows.push_back(row);
    }
  }
  report.records = std::move(records);
  return report;
}

}  // namespace rose
