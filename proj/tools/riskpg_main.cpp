// Command-line runner for the risk-sensitive policy gradient library.
//
// Subcommands: eval, frontier, exact-opt, sim-opt, portfolio. Each takes a
// JSON config (--config), an output directory (--out), and, for the
// stochastic ones, a seed (--seed, overriding the config's "seed" field).

#include <optional>
#include <string>

#include <CLI11.hpp>

#include "riskpg/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Policy gradient algorithms for mean-variance objectives on episodic MDPs"};
  app.require_subcommand(1);

  struct Args {
    std::string config;
    std::string out = ".";
    std::optional<std::uint64_t> seed;
  };

  const std::vector<std::pair<std::string, std::string>> subcommands = {
      {"eval", "Exact J/V/rho and gradients for an MDP + tabular policy (eval.json)"},
      {"frontier", "Exact (J, V) phase-plane sweep of the example MDP (frontier.csv)"},
      {"exact-opt", "Model-based penalized or Sharpe gradient ascent (trace.csv)"},
      {"sim-opt", "Two-timescale simulation-based optimization (trace.csv)"},
      {"portfolio", "Train and evaluate the three criteria on the portfolio task"},
  };

  std::map<std::string, Args> args;
  for (const auto& [name, desc] : subcommands) {
    auto* sub = app.add_subcommand(name, desc);
    auto& a = args[name];
    sub->add_option("--config", a.config, "JSON config file")->required();
    sub->add_option("--out", a.out, "output directory (default: current)");
    sub->add_option("--seed", a.seed, "seed override");
  }

  CLI11_PARSE(app, argc, argv);

  for (const auto& [name, desc] : subcommands) {
    if (app.got_subcommand(name)) {
      const auto& a = args[name];
      return riskpg::cli::run_subcommand_file(name, a.config, a.out, a.seed);
    }
  }
  return riskpg::cli::kExitConfig;
}
