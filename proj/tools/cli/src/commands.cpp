#include "rose/cli/commands.hpp"

#include "rose/cli/diagnostics.hpp"
#include "rose/cli/io.hpp"
#include "rose/data.hpp"
#include "rose/error.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace rose::cli {

namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open output file '" + path + "'");
  return f;
}

// Writes to the file when a path is given, else to the fallback stream.
template <class F>
void emit(const std::string& path, std::ostream& fallback, F&& write) {
  if (path.empty()) {
    write(fallback);
    return;
  }
  std::ofstream f = open_out(path);
  write(f);
  f.flush();
  if (!f) throw ConfigError("failed writing output file '" + path + "'");
}

LabeledDataset load_data(const RunConfig& cfg) {
  if (cfg.data.empty()) throw ConfigError("no data file given (use --data or the 'data' key)");
  LabeledDataset ld = read_dataset_csv(cfg.data, cfg.response);
  validate_dataset(ld.data);
  return ld;
}

std::string error_label(const SimulationConfig& s) {
  if (s.error_model == ErrorModel::Contaminated) {
    return "0.9 N(0,1) + 0.1 N(0," + format_double(s.sigma) + "^2)";
  }
  return "(-1)^V * Lognormal(0,1)";
}

}  // namespace

int cmd_simulate(const RunConfig& cfg, std::ostream& out) {
  validate_config(cfg);
  const SimDesign design = cfg.design();
  const SimReport report = run_replications(design, cfg.resolved_threads());
  const CoefVector beta0 = design.beta0_vector();

  const SimulationConfig& s = cfg.simulation;
  out << "Simulation: n=" << s.n << ", p=" << s.p << ", rho=" << format_double(s.rho)
      << ", errors " << error_label(s) << ", reps=" << s.reps << ", seed=" << cfg.seed << "\n";
  out << "Coefficient labels are 1-based: beta<k> is column k-1 (0-based) of X.\n";
  out << "ECP = empirical coverage, AL = mean CI length x 100 (sd), nominal level "
      << fixed(1.0 - cfg.alpha, 3) << "\n\n";
  const std::size_t n_tgt = design.targets.size();
  auto coef_label = [](int j) {
    return "beta" + std::to_string(j + 1) + " [" + std::to_string(j) + "]";
  };
  std::size_t label_width = 4;
  for (int j : design.targets) label_width = std::max(label_width, coef_label(j).size());
  auto pad = [](std::string text, std::size_t width) {
    text.resize(std::max(text.size(), width), ' ');
    return text;
  };
  // Row prefix: label column, then the true value as "%7.3f  ".
  std::string head1 = pad("coef", label_width) + "   true  ";
  std::string head2(head1.size(), ' ');
  for (const SimSetting& st : design.settings) {
    std::string label = st.label.substr(0, 26);
    label.resize(28, ' ');
    head1 += "| " + label;
    head2 += "| ECP    AL x100 (sd)        ";
  }
  out << head1 << "\n" << head2 << "\n";
  for (std::size_t k = 0; k < n_tgt; ++k) {
    const int j = design.targets[k];
    std::string line = pad(coef_label(j), label_width);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%7.3f  ", beta0(j));
    line += buf;
    for (std::size_t st = 0; st < design.settings.size(); ++st) {
      const EcpAlRow& row = report.rows[st * n_tgt + k];
      std::string cell = fixed(row.ecp, 3) + "  " + fixed(100.0 * row.al_mean, 2) + " (" +
                         fixed(100.0 * row.al_sd, 2) + ")";
      if (row.reps_ok < row.reps) cell += " *" + std::to_string(row.reps - row.reps_ok);
      cell.resize(28, ' ');
      line += "| " + cell;
    }
    out << line << "\n";
  }
  bool any_failed = false;
  for (const EcpAlRow& row : report.rows) any_failed = any_failed || row.reps_ok < row.reps;
  if (any_failed) out << "* number of failed replications excluded from the row\n";
  out << "\n";

  emit(cfg.out, out, [&](std::ostream& f) {
    f << "setting,target,ecp,al_mean_x100,al_sd_x100,reps_ok,reps\n";
    for (const EcpAlRow& row : report.rows) {
      f << row.setting << ',' << row.target + 1 << ',' << format_double(row.ecp) << ','
        << format_double(100.0 * row.al_mean) << ',' << format_double(100.0 * row.al_sd) << ','
        << row.reps_ok << ',' << row.reps << '\n';
    }
  });
  if (!cfg.rep_log.empty()) {
    emit(cfg.rep_log, out, [&](std::ostream& f) {
      f << "rep,setting,target,ok,estimate,ci_lo,ci_hi,gamma,covered,error\n";
      for (const RepRecord& r : report.records) {
        f << r.rep + 1 << ',' << design.settings[static_cast<std::size_t>(r.setting)].label << ','
          << r.target + 1 << ',' << (r.ok ? 1 : 0) << ',' << format_double(r.estimate) << ','
          << format_double(r.ci_lo) << ',' << format_double(r.ci_hi) << ','
          << format_double(r.gamma) << ',' << (r.covered ? 1 : 0) << ",\"" << r.error << "\"\n";
      }
    });
  }
  if (!cfg.out.empty()) out << "results written to " << cfg.out << "\n";
  return kExitOk;
}

int cmd_infer(const RunConfig& cfg, std::ostream& out) {
  validate_config(cfg);
  const LabeledDataset ld = load_data(cfg);
  const Standardized st = standardize(ld.data);
  const Dataset& d = st.data;

  std::vector<int> targets;
  if (cfg.targets.empty()) {
    targets.resize(static_cast<std::size_t>(d.p()));
    std::iota(targets.begin(), targets.end(), 0);
  } else {
    for (const std::string& t : cfg.targets) targets.push_back(resolve_feature(ld.names, t));
  }
  const MethodConfig method = cfg.method();
  method.validate(d.n(), d.p());
  const std::vector<TargetOutcome> outcomes = bonferroni_infer(d, method, targets);

  const bool all_failed = std::none_of(outcomes.begin(), outcomes.end(),
                                       [](const TargetOutcome& o) { return o.result.has_value(); });
  if (all_failed) {
    throw Error(*outcomes.front().error_kind,
                "inference failed for every target; first error: " + outcomes.front().error);
  }

  emit(cfg.out, out, [&](std::ostream& f) {
    f << "feature,estimate,ci_lo,ci_hi,adjusted_alpha,significant\n";
    for (const TargetOutcome& o : outcomes) {
      f << ld.names[static_cast<std::size_t>(o.target)] << ',';
      if (o.result) {
        f << format_double(o.result->beta_hat) << ',' << format_double(o.result->ci_lo) << ','
          << format_double(o.result->ci_hi);
      } else {
        f << "NA,NA,NA";
      }
      f << ',' << format_double(o.adjusted_alpha) << ',' << (o.significant ? 1 : 0) << '\n';
    }
  });

  std::size_t n_sig = 0;
  for (const TargetOutcome& o : outcomes) n_sig += o.significant ? 1 : 0;
  out << "\nInference on standardized data (n=" << d.n() << ", p=" << d.p() << "), loss "
      << loss_name(method.loss.family) << ", " << outcomes.size()
      << " target(s), Bonferroni-adjusted level " << format_double(outcomes.front().adjusted_alpha)
      << " per target\n";
  out << n_sig << " significant feature(s)" << (n_sig ? ":" : "") << "\n";
  for (const TargetOutcome& o : outcomes) {
    if (!o.significant) continue;
    out << "  " << ld.names[static_cast<std::size_t>(o.target)] << " (column "
        << o.target + 1 << "): estimate " << fixed(o.result->beta_hat, 4) << ", CI ["
        << fixed(o.result->ci_lo, 4) << ", " << fixed(o.result->ci_hi, 4) << "]\n";
  }
  for (const TargetOutcome& o : outcomes) {
    if (o.result) continue;
    out << "  failed: " << ld.names[static_cast<std::size_t>(o.target)] << ": " << o.error << "\n";
  }
  return kExitOk;
}

int cmd_diagnose(const RunConfig& cfg, std::ostream& out) {
  validate_config(cfg);
  const LabeledDataset ld = load_data(cfg);
  const Standardized st = standardize(ld.data);
  const MethodConfig method = cfg.method();
  method.validate(st.data.n(), st.data.p());
  const InitialFit fit = initial_estimator(st.data, method);
  const Vector resid = st.data.y - st.data.x * fit.beta;

  const std::string prefix = cfg.out.empty() ? std::string("diagnose") : cfg.out;
  {
    std::ofstream f = open_out(prefix + "_residuals.csv");
    f << "index,residual\n";
    for (Eigen::Index i = 0; i < resid.size(); ++i) f << i + 1 << ',' << format_double(resid(i)) << '\n';
  }
  {
    std::ofstream f = open_out(prefix + "_histogram.csv");
    f << "bin_lo,bin_hi,count\n";
    for (const HistogramBin& b : histogram(resid, 30)) {
      f << format_double(b.lo) << ',' << format_double(b.hi) << ',' << b.count << '\n';
    }
  }
  {
    std::ofstream f = open_out(prefix + "_qq.csv");
    f << "theoretical_normal_quantile,sample_quantile\n";
    for (const auto& [q, r] : qq_points(resid)) f << format_double(q) << ',' << format_double(r) << '\n';
  }
  out << "Residuals of the initial fit (loss " << loss_name(method.loss.family) << ", lambda "
      << format_double(fit.lambda) << ", " << (fit.beta.array() != 0.0).count()
      << " nonzero coefficients) on standardized data\n";
  out << "skewness g1 = " << fixed(sample_skewness(resid), 6) << "\n";
  out << "wrote " << prefix << "_residuals.csv, " << prefix << "_histogram.csv, " << prefix
      << "_qq.csv\n";
  return kExitOk;
}

int cmd_screen(const RunConfig& cfg, std::ostream& out) {
  validate_config(cfg);
  const LabeledDataset ld = load_data(cfg);
  const Dataset& d = ld.data;
  const Vector stats = cfg.screener == ScreenerMethod::Sis ? sis_stats(d) : sirs_stats(d);
  const int keep = std::min<int>(cfg.keep.value_or(default_keep(d.n())), static_cast<int>(d.p()));

  std::vector<int> order(static_cast<std::size_t>(d.p()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return stats(a) > stats(b); });
  order.resize(static_cast<std::size_t>(keep));

  out << "Top " << keep << " of " << d.p() << " features by " << screener_name(cfg.screener)
      << " (n=" << d.n() << ")\n";
  out << "rank  column  statistic     feature\n";
  for (std::size_t r = 0; r < order.size(); ++r) {
    const int j = order[r];
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%4zu  %6d  %.6e  ", r + 1, j + 1, stats(j));
    out << buf << ld.names[static_cast<std::size_t>(j)] << "\n";
  }
  if (!cfg.out.empty()) {
    emit(cfg.out, out, [&](std::ostream& f) {
      f << "rank,feature,statistic\n";
      for (std::size_t r = 0; r < order.size(); ++r) {
        f << r + 1 << ',' << ld.names[static_cast<std::size_t>(order[r])] << ','
          << format_double(stats(order[r])) << '\n';
      }
    });
  }
  return kExitOk;
}

namespace {

int exit_code_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::DimensionMismatch:
    case ErrorKind::NonFiniteValue:
    case ErrorKind::ZeroVarianceColumn:
      return kExitData;
    case ErrorKind::InvalidArgument:
    case ErrorKind::InvalidSplit:
      return kExitUsage;
    default:
      return kExitNumerical;
  }
}

std::vector<std::string> split_list(const std::vector<std::string>& raw) {
  std::vector<std::string> out;
  for (const std::string& item : raw) {
    std::stringstream ss(item);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      if (!tok.empty()) out.push_back(tok);
    }
  }
  return out;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Robust high-dimensional inference with recursive online score estimation"};
  app.set_version_flag("--version", "rose 0.1.0");
  app.require_subcommand(0, 1);
  app.fallthrough();

  std::string config_path;
  std::optional<std::string> data, out_path, loss;
  std::vector<std::string> targets;
  std::optional<double> alpha, tuning;
  std::optional<std::uint64_t> seed;
  std::optional<int> reps, threads;
  bool print_config = false;

  app.add_option("--config", config_path, "JSON run configuration");
  app.add_option("--data", data, "input CSV (header row, response column y)");
  app.add_option("--out", out_path, "output CSV path (prefix for diagnose)");
  app.add_option("--target", targets, "column name or 1-based index; repeatable or comma separated");
  app.add_option("--alpha", alpha, "familywise level");
  app.add_option("--loss", loss, "tukey, pseudo_huber, huber or squared");
  app.add_option("--tuning", tuning, "loss tuning constant");
  app.add_option("--seed", seed, "base seed");
  app.add_option("--reps", reps, "simulation replications");
  app.add_option("--threads", threads, "worker threads (0 = all cores)");
  app.add_flag("--print-config", print_config, "print the resolved configuration and exit");

  CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo coverage study");
  CLI::App* infer = app.add_subcommand("infer", "confidence intervals for a dataset");
  CLI::App* diagnose = app.add_subcommand("diagnose", "residual diagnostics of the initial fit");
  CLI::App* screen = app.add_subcommand("screen", "rank features by the screening statistic");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    RunConfig cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
    if (data) cfg.data = *data;
    if (out_path) cfg.out = *out_path;
    if (alpha) cfg.alpha = *alpha;
    if (seed) cfg.seed = *seed;
    if (threads) cfg.threads = *threads;
    if (reps) cfg.simulation.reps = *reps;
    std::optional<LossFamily> family;
    if (loss) {
      family = parse_loss_family(*loss);
      if (!family) throw ConfigError("unknown loss '" + *loss + "' (expected tukey, pseudo_huber, huber, squared)");
      cfg.loss = *family;
      if (!tuning) cfg.tuning.reset();
    }
    if (tuning) cfg.tuning = *tuning;
    if (!targets.empty()) cfg.targets = split_list(targets);
    if (simulate->parsed()) {
      // Loss flags replace the first setting; target flags are 1-based indices.
      if (!cfg.simulation.settings.empty() && (family || tuning)) {
        SettingConfig& first = cfg.simulation.settings.front();
        if (family) first.loss = *family;
        first.tuning = cfg.tuning;
      }
      if (!targets.empty()) {
        cfg.simulation.targets.clear();
        for (const std::string& t : cfg.targets) {
          try {
            std::size_t used = 0;
            const int v = std::stoi(t, &used);
            if (used != t.size()) throw std::invalid_argument(t);
            cfg.simulation.targets.push_back(v);
          } catch (const std::logic_error&) {
            throw ConfigError("simulation target '" + t + "' is not a 1-based index");
          }
        }
        cfg.targets.clear();
      }
    }

    if (print_config) {
      validate_config(cfg);
      out << dump_config(cfg);
      return kExitOk;
    }
    if (simulate->parsed()) return cmd_simulate(cfg, out);
    if (infer->parsed()) return cmd_infer(cfg, out);
    if (diagnose->parsed()) return cmd_diagnose(cfg, out);
    if (screen->parsed()) return cmd_screen(cfg, out);
    err << "error: a subcommand is required (simulate, infer, diagnose, screen)\n"
        << app.help();
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const Error& e) {
    const int code = exit_code_for(e.kind());
    err << (code == kExitData ? "data error: " : code == kExitUsage ? "config error: " : "numerical error: ")
        << e.what() << "\n";
    return code;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}

}  // namespace rose::cli
