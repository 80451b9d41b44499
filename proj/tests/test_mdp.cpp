#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "oracles.hpp"
#include "riskpg/errors.hpp"
#include "riskpg/mdp.hpp"
#include "riskpg/nonconvex.hpp"

using namespace riskpg;

namespace {

FiniteMdp identity_chain(double reward_value) {
  FiniteMdp mdp;
  mdp.num_states = 1;
  mdp.num_actions = 1;
  mdp.recurrent_state = 0;
  mdp.reward = Eigen::VectorXd::Constant(1, reward_value);
  mdp.kernel = {Eigen::MatrixXd::Constant(1, 1, 1.0)};
  return mdp;
}

std::filesystem::path temp_file(const char* name) {
  return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("validate_mdp accepts the 1-state identity chain") {
  CHECK(validate_mdp(identity_chain(0.0)).empty());
}

TEST_CASE("validate_mdp reports a deficient row with its location") {
  FiniteMdp mdp = identity_chain(0.0);
  mdp.num_states = 2;
  mdp.reward = Eigen::Vector2d(0.0, 0.0);
  Eigen::MatrixXd p(2, 2);
  p << 1.0, 0.0,
       0.4, 0.5;  // row sums to 0.9
  mdp.kernel = {p};

  const auto report = validate_mdp(mdp);
  REQUIRE(!report.empty());
  bool found = false;
  for (const auto& line : report)
    if (line.find("action 0") != std::string::npos &&
        line.find("state 1") != std::string::npos && line.find("0.9") != std::string::npos)
      found = true;
  CHECK(found);
}

TEST_CASE("validate_mdp flags negative entries, bad rewards, bad indices") {
  FiniteMdp mdp = identity_chain(0.0);
  mdp.kernel[0](0, 0) = -0.2;
  CHECK(!validate_mdp(mdp).empty());

  mdp = identity_chain(std::numeric_limits<double>::infinity());
  CHECK(!validate_mdp(mdp).empty());

  mdp = identity_chain(0.0);
  mdp.recurrent_state = 5;
  CHECK(!validate_mdp(mdp).empty());
}

TEST_CASE("the 8-state example MDP is valid") {
  CHECK(validate_mdp(build_nonconvex_example()).empty());
}

TEST_CASE("MDP JSON round-trip preserves the structure") {
  const FiniteMdp mdp = build_nonconvex_example();
  const auto path = temp_file("riskpg_roundtrip_mdp.json");
  save_mdp(mdp, path.string());
  const FiniteMdp back = load_mdp(path.string());

  CHECK(back.num_states == mdp.num_states);
  CHECK(back.num_actions == mdp.num_actions);
  CHECK(back.recurrent_state == mdp.recurrent_state);
  CHECK((back.reward - mdp.reward).lpNorm<Eigen::Infinity>() == 0.0);
  for (int u = 0; u < mdp.num_actions; ++u)
    CHECK((back.kernel[u] - mdp.kernel[u]).lpNorm<Eigen::Infinity>() == 0.0);
  std::filesystem::remove(path);
}

TEST_CASE("load_mdp distinguishes parse errors from validation errors") {
  const auto path = temp_file("riskpg_bad_mdp.json");

  SUBCASE("kernel row summing to 1.1 is a validation error naming the row") {
    std::ofstream(path.string())
        << R"({"n": 2, "m": 1, "recurrent_state": 0, "reward": [0, 0],
              "kernel": [[[0.6, 0.5], [0.5, 0.5]]]})";
    CHECK_THROWS_WITH_AS(load_mdp(path.string()),
                         doctest::Contains("state 0"), ValidationError);
  }
  SUBCASE("missing recurrent_state is a parse error") {
    std::ofstream(path.string())
        << R"({"n": 1, "m": 1, "reward": [0], "kernel": [[[1.0]]]})";
    CHECK_THROWS_AS(load_mdp(path.string()), ParseError);
  }
  SUBCASE("malformed JSON is a parse error") {
    std::ofstream(path.string()) << "{ not json";
    CHECK_THROWS_AS(load_mdp(path.string()), ParseError);
  }
  SUBCASE("missing file is a parse error") {
    CHECK_THROWS_AS(load_mdp("/nonexistent/riskpg.json"), ParseError);
  }
  std::filesystem::remove(path);
}
