#include "riskpg/commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <vector>

#include "riskpg/errors.hpp"
#include "riskpg/exact_optim.hpp"
#include "riskpg/io.hpp"
#include "riskpg/mdp.hpp"
#include "riskpg/nonconvex.hpp"
#include "riskpg/policy.hpp"
#include "riskpg/portfolio.hpp"
#include "riskpg/two_timescale.hpp"

namespace riskpg::cli {

namespace {

using nlohmann::json;

template <typename T>
T get_or(const json& j, const std::string& key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ParseError("config field '" + key + "': " + e.what());
  }
}

const json& require(const json& j, const std::string& key) {
  if (!j.contains(key)) throw ParseError("config is missing required field '" + key + "'");
  return j.at(key);
}

std::uint64_t require_seed(const json& config) {
  if (!config.contains("seed"))
    throw ConfigError("stochastic subcommands require a seed (config field or --seed)");
  try {
    return config.at("seed").get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("config field 'seed': ") + e.what());
  }
}

Eigen::VectorXd parse_vector(const json& j, const std::string& what) {
  try {
    const auto v = j.get<std::vector<double>>();
    return Eigen::Map<const Eigen::VectorXd>(v.data(), v.size());
  } catch (const json::exception& e) {
    throw ParseError(what + " must be an array of numbers: " + e.what());
  }
}

FiniteMdp parse_environment(const json& config) {
  const json& env = require(config, "environment");
  if (env.is_string()) {
    const auto name = env.get<std::string>();
    if (name == "nonconvex") return build_nonconvex_example();
    throw ConfigError("unknown built-in environment '" + name + "' (expected \"nonconvex\")");
  }
  if (env.is_object() && env.contains("path"))
    return load_mdp(env.at("path").get<std::string>());
  throw ParseError("'environment' must be \"nonconvex\" or {\"path\": \"mdp.json\"}");
}

std::unique_ptr<StatePolicy> parse_state_policy(const json& config, const FiniteMdp& mdp) {
  const json& spec = require(config, "policy");
  const auto kind = get_or<std::string>(spec, "kind", "tabular-softmax");

  if (kind == "tabular-softmax") {
    if (spec.contains("theta")) {
      const Eigen::VectorXd theta = parse_vector(spec.at("theta"), "policy theta");
      return std::make_unique<TabularSoftmaxPolicy>(mdp.num_states, mdp.num_actions, theta);
    }
    return std::make_unique<TabularSoftmaxPolicy>(mdp.num_states, mdp.num_actions);
  }
  if (kind == "nonconvex-direct") {
    if (mdp.num_states != 8 || mdp.num_actions != 2)
      throw ConfigError("policy 'nonconvex-direct' only fits the 8-state, 2-action example MDP");
    const Eigen::VectorXd theta = parse_vector(require(spec, "theta"), "policy theta");
    if (theta.size() != 2) throw ConfigError("nonconvex-direct theta must have 2 entries");
    return std::make_unique<NonconvexDirectPolicy>(theta[0], theta[1]);
  }
  if (kind == "epsilon-sigmoid")
    throw ConfigError(
        "policy kind 'epsilon-sigmoid' is a simulation-only policy over feature vectors; "
        "the exact path needs a tabular policy");
  throw ConfigError("unknown policy kind '" + kind + "'");
}

AscentConfig parse_ascent(const json& config) {
  AscentConfig ascent;
  if (config.contains("ascent")) {
    const json& a = config.at("ascent");
    ascent.a0 = get_or(a, "a0", ascent.a0);
    ascent.a_exp = get_or(a, "a_exp", ascent.a_exp);
    ascent.constant_step = get_or(a, "constant_step", ascent.constant_step);
    ascent.max_iterations = get_or(a, "max_iterations", ascent.max_iterations);
    ascent.gradient_tolerance = get_or(a, "gradient_tolerance", ascent.gradient_tolerance);
    if (a.contains("clip")) {
      ascent.clip_theta = true;
      ascent.clip_lo = get_or(a.at("clip"), "lo", ascent.clip_lo);
      ascent.clip_hi = get_or(a.at("clip"), "hi", ascent.clip_hi);
    }
  }
  validate(ascent);
  return ascent;
}

ScheduleConfig parse_schedule(const json& config, ScheduleConfig schedule = {}) {
  if (config.contains("schedule")) {
    const json& s = config.at("schedule");
    schedule.a0 = get_or(s, "a0", schedule.a0);
    schedule.a_exp = get_or(s, "a_exp", schedule.a_exp);
    schedule.b0 = get_or(s, "b0", schedule.b0);
    schedule.b_exp = get_or(s, "b_exp", schedule.b_exp);
  }
  validate(schedule);
  return schedule;
}

void throw_on_trace_error(const OptTrace& trace) {
  if (trace.status != TraceStatus::Error) return;
  if (trace.error_kind == ErrorKind::Assumption) throw AssumptionError(trace.message);
  throw NumericalError(trace.message);
}

std::filesystem::path prepare_out_dir(const std::string& out_dir) {
  std::filesystem::path dir(out_dir.empty() ? "." : out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir.string());
  return dir;
}

}  // namespace

void cmd_eval(const json& config, const std::string& out_dir) {
  const FiniteMdp mdp = parse_environment(config);
  const auto policy = parse_state_policy(config, mdp);
  const EvalResult eval = evaluate(mdp, *policy);
  const auto dir = prepare_out_dir(out_dir);
  write_eval_json(eval, config, (dir / "eval.json").string());
}

void cmd_frontier(const json& config, const std::string& out_dir) {
  const int resolution = get_or(config, "resolution", 101);
  const auto points = nonconvex_frontier(resolution);
  const auto dir = prepare_out_dir(out_dir);
  write_frontier_csv(points, config, (dir / "frontier.csv").string());
}

void cmd_exact_opt(const json& config, const std::string& out_dir) {
  const FiniteMdp mdp = parse_environment(config);
  const auto policy = parse_state_policy(config, mdp);
  const AscentConfig ascent = parse_ascent(config);
  const auto objective = get_or<std::string>(config, "objective", "constrained");

  OptTrace trace;
  if (objective == "constrained") {
    PenaltyConfig penalty;
    if (config.contains("penalty")) {
      const json& p = config.at("penalty");
      penalty.lambda = get_or(p, "lambda", penalty.lambda);
      penalty.b = get_or(p, "b", penalty.b);
      penalty.continuation_factor = get_or(p, "continuation_factor", penalty.continuation_factor);
      penalty.outer_iterations = get_or(p, "outer_iterations", penalty.outer_iterations);
    }
    if (get_or(config, "continuation", false)) {
      validate(penalty);
      trace = penalty_continuation(mdp, *policy, penalty, ascent);
    } else {
      trace = exact_constrained_ascent(mdp, *policy, penalty, ascent);
    }
  } else if (objective == "sharpe") {
    const double floor = get_or(config, "variance_floor", 1e-3);
    trace = exact_sharpe_ascent(mdp, *policy, ascent, floor);
  } else {
    throw ConfigError("objective must be \"constrained\" or \"sharpe\"");
  }

  const auto dir = prepare_out_dir(out_dir);
  write_exact_trace_csv(trace, config, (dir / "trace.csv").string());
  throw_on_trace_error(trace);
}

void cmd_sim_opt(const json& config, const std::string& out_dir) {
  const std::uint64_t seed = require_seed(config);
  const FiniteMdp mdp = parse_environment(config);
  const auto policy = parse_state_policy(config, mdp);
  const ScheduleConfig schedule = parse_schedule(config);

  SimOptions opts;
  const auto variant = get_or<std::string>(config, "variant", "constrained");
  if (variant == "constrained") {
    opts.variant = SimVariant::Constrained;
    opts.lambda = get_or(config, "lambda", opts.lambda);
    opts.b = get_or(config, "b", opts.b);
  } else if (variant == "sharpe") {
    opts.variant = SimVariant::Sharpe;
    opts.v_floor = get_or(config, "v_floor", opts.v_floor);
  } else {
    throw ConfigError("variant must be \"constrained\" or \"sharpe\"");
  }
  opts.episodes = require(config, "episodes").get<long>();
  opts.max_steps = get_or(config, "max_steps", opts.max_steps);
  opts.log_interval = get_or(config, "log_interval", opts.log_interval);
  opts.tracker_burn_in = get_or(config, "tracker_burn_in", opts.tracker_burn_in);
  if (config.contains("clip")) {
    opts.clip_theta = true;
    opts.clip_lo = get_or(config.at("clip"), "lo", opts.clip_lo);
    opts.clip_hi = get_or(config.at("clip"), "hi", opts.clip_hi);
  }

  Rng rng(seed);
  const OptTrace trace = run_two_timescale(mdp, *policy, opts, schedule, rng);

  const auto dir = prepare_out_dir(out_dir);
  write_sim_trace_csv(trace, config, (dir / "trace.csv").string());

  const double storm_rate = get_or(config, "truncation_storm_rate", 1e-3);
  if (opts.episodes > 0 &&
      static_cast<double>(trace.truncated_episodes) / opts.episodes > storm_rate)
    throw AssumptionError("truncation storm: " + std::to_string(trace.truncated_episodes) +
                          " of " + std::to_string(opts.episodes) +
                          " episodes hit the max-steps guard");
}

namespace {

struct CriterionResult {
  std::string name;
  double mean = 0.0;
  double variance = 0.0;
  double sharpe = std::numeric_limits<double>::quiet_NaN();
  double invest_rate = 0.0;
  double invest_attempt_rate = 0.0;
  Eigen::VectorXd theta;
};

CriterionResult train_and_eval_criterion(const std::string& name, int stream,
                                         const PortfolioConfig& pcfg, const json& train,
                                         const ScheduleConfig& schedule, long eval_episodes,
                                         std::uint64_t seed, const json& config,
                                         const std::filesystem::path& dir, int hist_bins) {
  SimOptions opts;
  if (name == "average") {
    opts.variant = SimVariant::Constrained;
    opts.lambda = 0.0;
    opts.b = 0.0;
  } else if (name == "constrained") {
    opts.variant = SimVariant::Constrained;
    opts.lambda = get_or(train, "lambda", 1000.0);
    opts.b = get_or(train, "b", 0.02);
  } else if (name == "sharpe") {
    opts.variant = SimVariant::Sharpe;
    opts.v_floor = get_or(train, "v_floor", 0.01);
  } else {
    throw ConfigError("unknown criterion '" + name +
                      "' (expected average, constrained, or sharpe)");
  }
  opts.episodes = get_or<long>(train, "episodes", 100000);
  opts.log_interval = get_or<long>(train, "log_interval", 1000);
  opts.tracker_burn_in = get_or<long>(train, "tracker_burn_in", 500);

  Eigen::VectorXd theta0 = Eigen::VectorXd::Zero(pcfg.feature_count());
  if (train.contains("theta0")) {
    theta0 = parse_vector(train.at("theta0"), "train.theta0");
    if (theta0.size() != pcfg.feature_count())
      throw ConfigError("train.theta0 must have maturity + 2 entries");
  }

  SigmoidInvestPolicy policy(theta0, pcfg.epsilon);
  EpisodeSampler sampler = [&pcfg, &policy](const Eigen::VectorXd& theta, Rng& r) {
    policy.set_params(theta);
    return portfolio_episode(pcfg, policy, r);
  };

  Rng train_rng(derive_seed(seed, 2 * stream));
  const OptTrace trace = run_two_timescale(sampler, theta0, opts, schedule, train_rng);
  write_sim_trace_csv(trace, config, (dir / ("trace_" + name + ".csv")).string());

  // evaluate the trained policy
  CriterionResult res;
  res.name = name;
  res.theta = trace.final_theta();
  policy.set_params(res.theta);

  Rng eval_rng(derive_seed(seed, 2 * stream + 1));
  std::vector<double> totals;
  totals.reserve(eval_episodes);
  long invests = 0, attempts = 0;
  for (long e = 0; e < eval_episodes; ++e) {
    PortfolioRolloutStats stats;
    const Episode ep = portfolio_episode(pcfg, policy, eval_rng, &stats);
    totals.push_back(ep.total_reward);
    invests += stats.invest_executed;
    for (int a : ep.actions) attempts += (a == SigmoidInvestPolicy::kInvest) ? 1 : 0;
  }

  const double n = static_cast<double>(totals.size());
  double mean = 0.0;
  for (double t : totals) mean += t;
  mean /= n;
  double var = 0.0;
  for (double t : totals) var += (t - mean) * (t - mean);
  var = n > 1 ? var / (n - 1) : 0.0;

  res.mean = mean;
  res.variance = var;
  res.sharpe = var > 0.0 ? mean / std::sqrt(var) : std::numeric_limits<double>::quiet_NaN();
  const double steps = n * pcfg.horizon;
  res.invest_rate = invests / steps;
  res.invest_attempt_rate = attempts / steps;

  write_histogram_csv(build_histogram(totals, hist_bins), config,
                      (dir / ("hist_" + name + ".csv")).string());
  return res;
}

}  // namespace

void cmd_portfolio(const json& config, const std::string& out_dir) {
  const std::uint64_t seed = require_seed(config);

  PortfolioConfig pcfg;
  if (config.contains("portfolio")) {
    const json& p = config.at("portfolio");
    pcfg.horizon = get_or(p, "horizon", pcfg.horizon);
    pcfg.maturity = get_or(p, "maturity", pcfg.maturity);
    pcfg.r_liquid = get_or(p, "r_liquid", pcfg.r_liquid);
    pcfg.r_nonliquid_high = get_or(p, "r_nonliquid_high", pcfg.r_nonliquid_high);
    pcfg.r_nonliquid_low = get_or(p, "r_nonliquid_low", pcfg.r_nonliquid_low);
    pcfg.p_switch = get_or(p, "p_switch", pcfg.p_switch);
    pcfg.p_risk = get_or(p, "p_risk", pcfg.p_risk);
    pcfg.alpha_fraction = get_or(p, "alpha_fraction", pcfg.alpha_fraction);
    pcfg.epsilon = get_or(p, "epsilon", pcfg.epsilon);
  }
  validate(pcfg);

  const json train = config.contains("train") ? config.at("train") : json::object();
  // Portfolio returns are small log values with heavy default-event noise:
  // the slow-timescale coefficient must be large enough to move theta at all,
  // and the fast trackers need a longer averaging window than the generic
  // default so the 1 / v_tilde factors in the updates stay bounded.
  ScheduleConfig train_defaults;
  train_defaults.a0 = 0.2;
  train_defaults.b0 = 1.0;
  const ScheduleConfig schedule = parse_schedule(train, train_defaults);
  const long eval_episodes = get_or<long>(config, "eval_episodes", 10000);
  if (eval_episodes < 1) throw ConfigError("eval_episodes must be >= 1");
  const int hist_bins =
      config.contains("histogram") ? get_or(config.at("histogram"), "bins", 0) : 0;

  std::vector<std::string> criteria = {"average", "constrained", "sharpe"};
  if (config.contains("criteria"))
    criteria = config.at("criteria").get<std::vector<std::string>>();

  const auto dir = prepare_out_dir(out_dir);
  json summary;
  summary["config"] = config;
  summary["seed"] = seed;
  json per_criterion = json::object();

  for (const auto& name : criteria) {
    const int stream = name == "average" ? 0 : (name == "constrained" ? 1 : 2);
    const CriterionResult res = train_and_eval_criterion(
        name, stream, pcfg, train, schedule, eval_episodes, seed, config, dir, hist_bins);
    json entry;
    entry["mean"] = res.mean;
    entry["variance"] = res.variance;
    entry["sharpe"] = std::isnan(res.sharpe) ? json(nullptr) : json(res.sharpe);
    entry["invest_rate"] = res.invest_rate;
    entry["invest_attempt_rate"] = res.invest_attempt_rate;
    entry["eval_episodes"] = eval_episodes;
    entry["theta"] = std::vector<double>(res.theta.data(), res.theta.data() + res.theta.size());
    per_criterion[res.name] = std::move(entry);
  }
  summary["criteria"] = std::move(per_criterion);

  std::ofstream out(dir / "summary.json");
  if (!out) throw ConfigError("cannot write summary.json");
  out << summary.dump(2) << "\n";
}

int run_subcommand(const std::string& name, json config, const std::string& out_dir,
                   std::optional<std::uint64_t> seed_override) {
  try {
    if (seed_override.has_value()) config["seed"] = *seed_override;
    if (name == "eval") {
      cmd_eval(config, out_dir);
    } else if (name == "frontier") {
      cmd_frontier(config, out_dir);
    } else if (name == "exact-opt") {
      cmd_exact_opt(config, out_dir);
    } else if (name == "sim-opt") {
      cmd_sim_opt(config, out_dir);
    } else if (name == "portfolio") {
      cmd_portfolio(config, out_dir);
    } else {
      throw ConfigError("unknown subcommand '" + name + "'");
    }
    return kExitOk;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const AssumptionError& e) {
    std::cerr << "assumption violated: " << e.what() << "\n";
    return kExitAssumption;
  }
}

int run_subcommand_file(const std::string& name, const std::string& config_path,
                        const std::string& out_dir,
                        std::optional<std::uint64_t> seed_override) {
  json config;
  try {
    std::ifstream in(config_path);
    if (!in) throw ConfigError("cannot open config file: " + config_path);
    in >> config;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: malformed JSON in " << config_path << ": " << e.what() << "\n";
    return kExitConfig;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  return run_subcommand(name, std::move(config), out_dir, seed_override);
}

}  // namespace riskpg::cli
