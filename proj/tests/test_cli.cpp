#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "oracles.hpp"
#include "riskpg/commands.hpp"
#include "riskpg/mdp.hpp"

using namespace riskpg;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("riskpg_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// rows of a CSV produced by the trace/frontier writers, comments and header
// stripped
std::vector<std::vector<double>> csv_rows(const fs::path& path) {
  std::ifstream in(path);
  REQUIRE(in);
  std::vector<std::vector<double>> rows;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {  // column names
      header_seen = true;
      continue;
    }
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(std::move(row));
  }
  return rows;
}

json corner_eval_config() {
  return {{"environment", "nonconvex"},
          {"policy", {{"kind", "nonconvex-direct"}, {"theta", {1.0, 1.0}}}}};
}

}  // namespace

TEST_CASE("cmd_eval writes the corner evaluation") {
  const auto dir = fresh_dir("eval_corner");
  CHECK(cli::run_subcommand("eval", corner_eval_config(), dir.string()) == cli::kExitOk);

  const json out = json::parse(slurp(dir / "eval.json"));
  CHECK(out.at("j_star").get<double>() == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(std::abs(out.at("v_star").get<double>()) <= 1e-10);
  CHECK(out.contains("config"));  // provenance
}

TEST_CASE("cmd_eval on the geometric chain loaded from a file") {
  const auto dir = fresh_dir("eval_geo");
  const fs::path mdp_path = dir / "geo.json";
  save_mdp(test::geometric_chain_mdp(), mdp_path.string());

  const json config = {{"environment", {{"path", mdp_path.string()}}},
                       {"policy", {{"kind", "tabular-softmax"}}}};
  CHECK(cli::run_subcommand("eval", config, dir.string()) == cli::kExitOk);

  const json out = json::parse(slurp(dir / "eval.json"));
  for (int x : {0, 1}) {
    CHECK(out.at("j")[x].get<double>() == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(out.at("v")[x].get<double>() == doctest::Approx(2.0).epsilon(1e-10));
  }
}

TEST_CASE("cmd_eval on a malformed MDP file exits nonzero without output") {
  const auto dir = fresh_dir("eval_bad");
  const fs::path mdp_path = dir / "bad.json";
  std::ofstream(mdp_path) << "{ not json";

  const json config = {{"environment", {{"path", mdp_path.string()}}},
                       {"policy", {{"kind", "tabular-softmax"}}}};
  CHECK(cli::run_subcommand("eval", config, dir.string()) == cli::kExitConfig);
  CHECK(!fs::exists(dir / "eval.json"));
}

TEST_CASE("cmd_eval rejects the simulation-only policy kind") {
  const auto dir = fresh_dir("eval_sigmoid");
  const json config = {{"environment", "nonconvex"},
                       {"policy", {{"kind", "epsilon-sigmoid"}, {"theta", {0.0}}}}};
  CHECK(cli::run_subcommand("eval", config, dir.string()) == cli::kExitConfig);
}

TEST_CASE("cmd_frontier emits the full grid with the paper's extremes") {
  const auto dir = fresh_dir("frontier");
  CHECK(cli::run_subcommand("frontier", {{"resolution", 101}}, dir.string()) == cli::kExitOk);

  const auto rows = csv_rows(dir / "frontier.csv");
  REQUIRE(rows.size() == 101 * 101);

  double max_j = -1e300, min_v_at_zero_j = 1e300;
  for (const auto& row : rows) {
    REQUIRE(row.size() == 4);  // theta1, theta2, J, V
    max_j = std::max(max_j, row[2]);
    if (std::abs(row[2]) < 1e-9) min_v_at_zero_j = std::min(min_v_at_zero_j, row[3]);
  }
  CHECK(std::abs(max_j - 2.0) <= 1e-10);
  CHECK(min_v_at_zero_j <= 1e-10);  // (0, 0) is achievable with zero variance
}

TEST_CASE("cmd_exact_opt") {
  SUBCASE("constrained continuation run lands inside the variance bound") {
    const auto dir = fresh_dir("exact_opt_constrained");
    const json config = {
        {"environment", "nonconvex"},
        {"policy", {{"kind", "nonconvex-direct"}, {"theta", {0.45, 0.55}}}},
        {"objective", "constrained"},
        {"continuation", true},
        {"penalty", {{"lambda", 1.0}, {"b", 0.5}, {"continuation_factor", 10.0},
                     {"outer_iterations", 4}}},
        {"ascent", {{"clip", {{"lo", 0.01}, {"hi", 0.99}}}}}};
    CHECK(cli::run_subcommand("exact-opt", config, dir.string()) == cli::kExitOk);

    const auto rows = csv_rows(dir / "trace.csv");
    REQUIRE(!rows.empty());
    // columns: k, J, V, objective, direction_norm, theta...
    CHECK(rows.back()[2] <= 0.5 + 0.01);
  }

  SUBCASE("lambda = 0 climbs to the max-J corner") {
    const auto dir = fresh_dir("exact_opt_plain");
    const json config = {{"environment", "nonconvex"},
                         {"policy", {{"kind", "nonconvex-direct"}, {"theta", {0.3, 0.4}}}},
                         {"penalty", {{"lambda", 0.0}, {"b", 0.5}}},
                         {"ascent", {{"clip", {{"lo", 0.01}, {"hi", 0.99}}}}}};
    CHECK(cli::run_subcommand("exact-opt", config, dir.string()) == cli::kExitOk);
    const auto rows = csv_rows(dir / "trace.csv");
    CHECK(rows.back()[1] >= 2.0 - 0.05);
  }

  SUBCASE("a safe sharpe run terminates cleanly") {
    const auto dir = fresh_dir("exact_opt_sharpe");
    const fs::path mdp_path = dir / "geo.json";
    save_mdp(test::geometric_chain_mdp(), mdp_path.string());
    const json config = {{"environment", {{"path", mdp_path.string()}}},
                         {"policy", {{"kind", "tabular-softmax"}}},
                         {"objective", "sharpe"},
                         {"variance_floor", 1e-9},
                         {"ascent", {{"max_iterations", 25}}}};
    CHECK(cli::run_subcommand("exact-opt", config, dir.string()) == cli::kExitOk);
  }

  SUBCASE("a variance-floor violation exits with the assumption code") {
    const auto dir = fresh_dir("exact_opt_floor");
    const fs::path mdp_path = dir / "geo.json";
    save_mdp(test::geometric_chain_mdp(), mdp_path.string());
    const json config = {{"environment", {{"path", mdp_path.string()}}},
                         {"policy", {{"kind", "tabular-softmax"}}},
                         {"objective", "sharpe"},
                         {"variance_floor", 0.5},
                         {"ascent", {{"a0", 1.0}, {"max_iterations", 4000}}}};
    CHECK(cli::run_subcommand("exact-opt", config, dir.string()) == cli::kExitAssumption);
  }
}

TEST_CASE("cmd_sim_opt") {
  const json base = {{"environment", "nonconvex"},
                     {"policy", {{"kind", "tabular-softmax"}}},
                     {"variant", "constrained"},
                     {"lambda", 10.0},
                     {"b", 0.5},
                     {"episodes", 2000},
                     {"log_interval", 500},
                     {"seed", 31}};

  SUBCASE("identical seed and config give bit-identical trace files") {
    const auto d1 = fresh_dir("sim_opt_a");
    const auto d2 = fresh_dir("sim_opt_b");
    CHECK(cli::run_subcommand("sim-opt", base, d1.string()) == cli::kExitOk);
    CHECK(cli::run_subcommand("sim-opt", base, d2.string()) == cli::kExitOk);
    CHECK(slurp(d1 / "trace.csv") == slurp(d2 / "trace.csv"));
  }

  SUBCASE("the seed can come from the command line") {
    const auto d1 = fresh_dir("sim_opt_c");
    json config = base;
    config.erase("seed");
    CHECK(cli::run_subcommand("sim-opt", config, d1.string()) == cli::kExitConfig);
    CHECK(cli::run_subcommand("sim-opt", config, d1.string(), 31) == cli::kExitOk);
  }

  SUBCASE("an invalid schedule is rejected before any episode runs") {
    const auto dir = fresh_dir("sim_opt_sched");
    json config = base;
    config["schedule"] = {{"a_exp", 0.7}, {"b_exp", 0.6}};  // b_exp <= a_exp
    CHECK(cli::run_subcommand("sim-opt", config, dir.string()) == cli::kExitConfig);
    CHECK(!fs::exists(dir / "trace.csv"));
  }
}

TEST_CASE("cmd_portfolio emits histograms and a summary") {
  const auto dir = fresh_dir("portfolio");
  const json config = {{"portfolio", {{"horizon", 20}}},
                       {"train", {{"episodes", 500}}},
                       {"eval_episodes", 400},
                       {"seed", 5}};
  CHECK(cli::run_subcommand("portfolio", config, dir.string()) == cli::kExitOk);

  const json summary = json::parse(slurp(dir / "summary.json"));
  for (const char* name : {"average", "constrained", "sharpe"}) {
    REQUIRE(summary.at("criteria").contains(name));
    const auto& entry = summary.at("criteria").at(name);
    CHECK(entry.contains("mean"));
    CHECK(entry.contains("variance"));
    CHECK(entry.contains("invest_rate"));

    long count = 0;
    for (const auto& row : csv_rows(dir / ("hist_" + std::string(name) + ".csv")))
      count += static_cast<long>(row[2]);
    CHECK(count == 400);  // histogram counts sum to eval_episodes
    CHECK(fs::exists(dir / ("trace_" + std::string(name) + ".csv")));
  }
}

TEST_CASE("unknown subcommands exit with the config code") {
  CHECK(cli::run_subcommand("no-such-command", json::object(), ".") == cli::kExitConfig);
}
