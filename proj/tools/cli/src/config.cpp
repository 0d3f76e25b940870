#include "rose/cli/config.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <string_view>
#include <thread>

namespace rose::cli {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

[[noreturn]] void fail(const std::string& key, const std::string& what) {
  throw ConfigError("config key '" + key + "': " + what);
}

std::string join(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

void check_keys(const json& obj, const std::string& prefix,
                std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) {
    if (prefix.empty()) throw ConfigError("config must be a JSON object");
    fail(prefix, "expected an object");
  }
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end()) {
      throw ConfigError("unknown config key '" + join(prefix, it.key()) + "'");
    }
  }
}

double as_double(const json& v, const std::string& key) {
  if (!v.is_number()) fail(key, "expected a number");
  return v.get<double>();
}

int as_int(const json& v, const std::string& key) {
  if (!v.is_number_integer()) fail(key, "expected an integer");
  const auto x = v.get<std::int64_t>();
  if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) {
    fail(key, "integer out of range");
  }
  return static_cast<int>(x);
}

std::uint64_t as_u64(const json& v, const std::string& key) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) {
    return static_cast<std::uint64_t>(v.get<std::int64_t>());
  }
  fail(key, "expected a non-negative integer");
}

std::string as_string(const json& v, const std::string& key) {
  if (!v.is_string()) fail(key, "expected a string");
  return v.get<std::string>();
}

LossFamily as_loss(const json& v, const std::string& key) {
  const std::string name = as_string(v, key);
  const auto f = parse_loss_family(name);
  if (!f) fail(key, "unknown loss '" + name + "' (expected tukey, pseudo_huber, huber, squared)");
  return *f;
}

ScreenerMethod as_screener(const json& v, const std::string& key) {
  const std::string name = as_string(v, key);
  const auto m = parse_screener(name);
  if (!m || *m == ScreenerMethod::Fixed) {
    fail(key, "unknown screener '" + name + "' (expected sirs, sis)");
  }
  return *m;
}

std::string_view error_model_name(ErrorModel m) {
  return m == ErrorModel::Contaminated ? "contaminated" : "lognormal_sign";
}

ErrorModel as_error_model(const json& v, const std::string& key) {
  const std::string name = as_string(v, key);
  if (name == "contaminated") return ErrorModel::Contaminated;
  if (name == "lognormal_sign") return ErrorModel::LognormalSign;
  fail(key, "unknown error model '" + name + "' (expected contaminated, lognormal_sign)");
}

template <class T, class F>
std::optional<T> as_optional(const json& v, F&& conv) {
  if (v.is_null()) return std::nullopt;
  return conv(v);
}

// Calls fn(value, full_key) for each present key.
template <class F>
void each(const json& obj, const std::string& prefix, F&& fn) {
  for (auto it = obj.begin(); it != obj.end(); ++it) fn(it.key(), it.value(), join(prefix, it.key()));
}

SettingConfig parse_setting(const json& obj, const std::string& prefix) {
  check_keys(obj, prefix, {"label", "loss", "tuning"});
  SettingConfig s;
  s.label = "";
  each(obj, prefix, [&](const std::string& k, const json& v, const std::string& key) {
    if (k == "label") s.label = as_string(v, key);
    else if (k == "loss") s.loss = as_loss(v, key);
    else if (k == "tuning") s.tuning = as_optional<double>(v, [&](const json& x) { return as_double(x, key); });
  });
  if (!obj.contains("label")) fail(join(prefix, "label"), "required");
  return s;
}

void parse_simulation(const json& obj, SimulationConfig& sim) {
  const std::string prefix = "simulation";
  check_keys(obj, prefix,
             {"n", "p", "rho", "reps", "error", "sigma", "beta0", "targets", "settings"});
  each(obj, prefix, [&](const std::string& k, const json& v, const std::string& key) {
    if (k == "n") sim.n = as_int(v, key);
    else if (k == "p") sim.p = as_int(v, key);
    else if (k == "rho") sim.rho = as_double(v, key);
    else if (k == "reps") sim.reps = as_int(v, key);
    else if (k == "error") sim.error_model = as_error_model(v, key);
    else if (k == "sigma") sim.sigma = as_double(v, key);
    else if (k == "beta0") {
      if (!v.is_array()) fail(key, "expected an array of [index, value] pairs");
      sim.beta0.clear();
      for (std::size_t i = 0; i < v.size(); ++i) {
        const std::string ek = key + "[" + std::to_string(i) + "]";
        if (!v[i].is_array() || v[i].size() != 2) fail(ek, "expected [index, value]");
        sim.beta0.emplace_back(as_int(v[i][0], ek), as_double(v[i][1], ek));
      }
    } else if (k == "targets") {
      if (!v.is_array()) fail(key, "expected an array of 1-based indices");
      sim.targets.clear();
      for (const json& t : v) sim.targets.push_back(as_int(t, key));
    } else if (k == "settings") {
      if (!v.is_array()) fail(key, "expected an array of settings");
      sim.settings.clear();
      for (std::size_t i = 0; i < v.size(); ++i) {
        sim.settings.push_back(parse_setting(v[i], key + "[" + std::to_string(i) + "]"));
      }
    }
  });
}

}  // namespace

MethodConfig RunConfig::method(LossFamily family, std::optional<double> t) const {
  MethodConfig m;
  m.alpha = alpha;
  m.s_n = s_n;
  m.newton_steps = newton_steps;
  m.loss = LossSpec{family, t.value_or(LossSpec::default_tuning(family))};
  m.screener.method = screener;
  m.screener.keep = keep;
  m.screener.refresh_every = refresh_every;
  m.solver.radius = radius;
  m.solver.tol = tol;
  m.solver.max_iter = max_iter;
  m.solver.step_size = step_size;
  m.adaptive_gamma = adaptive_gamma;
  m.cv_folds = cv_folds;
  m.cv_patience = cv_patience;
  m.lambda_grid = lambda_grid;
  m.cv_seed = seed;
  return m;
}

SimDesign RunConfig::design() const {
  SimDesign d;
  d.n = simulation.n;
  d.p = simulation.p;
  d.rho = simulation.rho;
  d.reps = simulation.reps;
  d.error = {simulation.error_model, simulation.sigma};
  for (const auto& [j, v] : simulation.beta0) d.beta0.emplace_back(j - 1, v);
  for (int t : simulation.targets) d.targets.push_back(t - 1);
  d.seed = SeedSpec{seed, 0};
  for (const SettingConfig& s : simulation.settings) {
    d.settings.push_back({s.label, method(s.loss, s.tuning)});
  }
  return d;
}

int RunConfig::resolved_threads() const {
  if (threads > 0) return threads;
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

RunConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  check_keys(root, "",
             {"data", "out", "response", "targets", "alpha", "loss", "tuning", "s_n",
              "newton_steps", "screener", "solver", "initial", "seed", "threads", "rep_log",
              "simulation"});
  RunConfig cfg;
  each(root, "", [&](const std::string& k, const json& v, const std::string& key) {
    if (k == "data") cfg.data = as_string(v, key);
    else if (k == "out") cfg.out = as_string(v, key);
    else if (k == "response") cfg.response = as_string(v, key);
    else if (k == "targets") {
      if (!v.is_array()) fail(key, "expected an array of column names or 1-based indices");
      cfg.targets.clear();
      for (const json& t : v) {
        if (t.is_string()) cfg.targets.push_back(t.get<std::string>());
        else cfg.targets.push_back(std::to_string(as_int(t, key)));
      }
    } else if (k == "alpha") cfg.alpha = as_double(v, key);
    else if (k == "loss") cfg.loss = as_loss(v, key);
    else if (k == "tuning") cfg.tuning = as_optional<double>(v, [&](const json& x) { return as_double(x, key); });
    else if (k == "s_n") cfg.s_n = as_optional<int>(v, [&](const json& x) { return as_int(x, key); });
    else if (k == "newton_steps") cfg.newton_steps = as_int(v, key);
    else if (k == "seed") cfg.seed = as_u64(v, key);
    else if (k == "threads") cfg.threads = as_int(v, key);
    else if (k == "rep_log") cfg.rep_log = as_string(v, key);
    else if (k == "screener") {
      check_keys(v, key, {"method", "keep", "refresh_every"});
      each(v, key, [&](const std::string& k2, const json& v2, const std::string& key2) {
        if (k2 == "method") cfg.screener = as_screener(v2, key2);
        else if (k2 == "keep") cfg.keep = as_optional<int>(v2, [&](const json& x) { return as_int(x, key2); });
        else if (k2 == "refresh_every") cfg.refresh_every = as_int(v2, key2);
      });
    } else if (k == "solver") {
      check_keys(v, key, {"radius", "tol", "max_iter", "step_size"});
      each(v, key, [&](const std::string& k2, const json& v2, const std::string& key2) {
        if (k2 == "radius") cfg.radius = as_double(v2, key2);
        else if (k2 == "tol") cfg.tol = as_double(v2, key2);
        else if (k2 == "max_iter") cfg.max_iter = as_int(v2, key2);
        else if (k2 == "step_size") cfg.step_size = as_double(v2, key2);
      });
    } else if (k == "initial") {
      check_keys(v, key, {"folds", "patience", "gamma", "lambda_grid"});
      each(v, key, [&](const std::string& k2, const json& v2, const std::string& key2) {
        if (k2 == "folds") cfg.cv_folds = as_int(v2, key2);
        else if (k2 == "patience") cfg.cv_patience = as_int(v2, key2);
        else if (k2 == "gamma") cfg.adaptive_gamma = as_double(v2, key2);
        else if (k2 == "lambda_grid") {
          if (!v2.is_array()) fail(key2, "expected an array of numbers");
          cfg.lambda_grid.clear();
          for (const json& l : v2) cfg.lambda_grid.push_back(as_double(l, key2));
        }
      });
    } else if (k == "simulation") {
      parse_simulation(v, cfg.simulation);
    }
  });
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string dump_config(const RunConfig& cfg) {
  auto opt = [](const auto& o) { return o ? ordered_json(*o) : ordered_json(nullptr); };
  ordered_json j;
  j["data"] = cfg.data;
  j["out"] = cfg.out;
  j["response"] = cfg.response;
  j["targets"] = cfg.targets;
  j["alpha"] = cfg.alpha;
  j["loss"] = std::string(loss_name(cfg.loss));
  j["tuning"] = opt(cfg.tuning);
  j["s_n"] = opt(cfg.s_n);
  j["newton_steps"] = cfg.newton_steps;
  j["screener"] = {{"method", std::string(screener_name(cfg.screener))},
                   {"keep", opt(cfg.keep)},
                   {"refresh_every", cfg.refresh_every}};
  j["solver"] = {{"radius", cfg.radius},
                 {"tol", cfg.tol},
                 {"max_iter", cfg.max_iter},
                 {"step_size", cfg.step_size}};
  j["initial"] = {{"folds", cfg.cv_folds},
                  {"patience", cfg.cv_patience},
                  {"gamma", cfg.adaptive_gamma},
                  {"lambda_grid", cfg.lambda_grid}};
  j["seed"] = cfg.seed;
  j["threads"] = cfg.threads;
  j["rep_log"] = cfg.rep_log;
  const SimulationConfig& s = cfg.simulation;
  ordered_json beta0 = ordered_json::array();
  for (const auto& [idx, v] : s.beta0) beta0.push_back({idx, v});
  ordered_json settings = ordered_json::array();
  for (const SettingConfig& st : s.settings) {
    settings.push_back(
        {{"label", st.label}, {"loss", std::string(loss_name(st.loss))}, {"tuning", opt(st.tuning)}});
  }
  j["simulation"] = {{"n", s.n},
                     {"p", s.p},
                     {"rho", s.rho},
                     {"reps", s.reps},
                     {"error", std::string(error_model_name(s.error_model))},
                     {"sigma", s.sigma},
                     {"beta0", beta0},
                     {"targets", s.targets},
                     {"settings", settings}};
  return j.dump(2) + "\n";
}

void validate_config(const RunConfig& cfg) {
  auto require = [](bool ok, const std::string& key, const std::string& what) {
    if (!ok) fail(key, what);
  };
  require(cfg.alpha > 0.0 && cfg.alpha < 1.0, "alpha", "must lie in (0, 1)");
  require(!cfg.tuning || (std::isfinite(*cfg.tuning) && *cfg.tuning > 0.0), "tuning", "must be positive");
  require(!cfg.s_n || *cfg.s_n > 1, "s_n", "must be > 1");
  require(cfg.newton_steps >= 1, "newton_steps", "must be >= 1");
  require(!cfg.keep || *cfg.keep >= 1, "screener.keep", "must be >= 1");
  require(cfg.refresh_every >= 1, "screener.refresh_every", "must be >= 1");
  require(cfg.radius > 0.0, "solver.radius", "must be positive");
  require(cfg.tol > 0.0, "solver.tol", "must be positive");
  require(cfg.max_iter >= 1, "solver.max_iter", "must be >= 1");
  require(cfg.step_size >= 0.0, "solver.step_size", "must be >= 0");
  require(cfg.cv_folds >= 2, "initial.folds", "must be >= 2");
  require(cfg.cv_patience >= 0, "initial.patience", "must be >= 0");
  require(cfg.adaptive_gamma >= 0.0, "initial.gamma", "must be >= 0");
  for (double l : cfg.lambda_grid) {
    require(std::isfinite(l) && l > 0.0, "initial.lambda_grid", "values must be positive");
  }
  require(cfg.threads >= 0, "threads", "must be >= 0");
  require(!cfg.response.empty(), "response", "must not be empty");

  const SimulationConfig& s = cfg.simulation;
  require(s.n >= 10, "simulation.n", "must be >= 10");
  require(s.p >= 1, "simulation.p", "must be >= 1");
  require(s.reps >= 1, "simulation.reps", "must be >= 1");
  require(s.rho >= 0.0 && s.rho < 1.0, "simulation.rho", "must lie in [0, 1)");
  require(std::isfinite(s.sigma) && s.sigma > 0.0, "simulation.sigma", "must be positive");
  for (const auto& [idx, v] : s.beta0) {
    require(idx >= 1 && idx <= s.p, "simulation.beta0", "index " + std::to_string(idx) + " outside [1, p]");
    require(std::isfinite(v), "simulation.beta0", "values must be finite");
  }
  require(!s.targets.empty(), "simulation.targets", "must not be empty");
  for (int t : s.targets) {
    require(t >= 1 && t <= s.p, "simulation.targets", "index " + std::to_string(t) + " outside [1, p]");
  }
  require(!s.settings.empty(), "simulation.settings", "must not be empty");
  std::set<std::string> labels;
  for (const SettingConfig& st : s.settings) {
    require(!st.label.empty(), "simulation.settings.label", "must not be empty");
    require(labels.insert(st.label).second, "simulation.settings.label",
            "duplicate label '" + st.label + "'");
    require(!st.tuning || (std::isfinite(*st.tuning) && *st.tuning > 0.0),
            "simulation.settings.tuning", "must be positive");
  }
}

}  // namespace rose::cli
