#include "riskpg/mdp.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "riskpg/errors.hpp"
#include <json.hpp>

namespace riskpg {

std::vector<std::string> validate_mdp(const FiniteMdp& mdp) {
  std::vector<std::string> report;
  auto add = [&report](const std::string& msg) { report.push_back(msg); };

  if (mdp.num_states < 1) add("num_states must be >= 1, got " + std::to_string(mdp.num_states));
  if (mdp.num_actions < 1) add("num_actions must be >= 1, got " + std::to_string(mdp.num_actions));
  if (mdp.recurrent_state < 0 || mdp.recurrent_state >= mdp.num_states)
    add("recurrent_state " + std::to_string(mdp.recurrent_state) + " out of range [0, " +
        std::to_string(mdp.num_states) + ")");

  if (static_cast<int>(mdp.kernel.size()) != mdp.num_actions)
    add("kernel has " + std::to_string(mdp.kernel.size()) + " action slices, expected " +
        std::to_string(mdp.num_actions));
  if (mdp.reward.size() != mdp.num_states)
    add("reward has length " + std::to_string(mdp.reward.size()) + ", expected " +
        std::to_string(mdp.num_states));

  for (int i = 0; i < static_cast<int>(mdp.reward.size()); ++i) {
    if (!std::isfinite(mdp.reward[i]))
      add("reward[" + std::to_string(i) + "] is not finite");
  }

  for (int u = 0; u < static_cast<int>(mdp.kernel.size()); ++u) {
    const Eigen::MatrixXd& p = mdp.kernel[u];
    if (p.rows() != mdp.num_states || p.cols() != mdp.num_states) {
      std::ostringstream os;
      os << "kernel[" << u << "] has shape " << p.rows() << "x" << p.cols() << ", expected "
         << mdp.num_states << "x" << mdp.num_states;
      add(os.str());
      continue;
    }
    for (int x = 0; x < mdp.num_states; ++x) {
      double row_sum = 0.0;
      for (int y = 0; y < mdp.num_states; ++y) {
        const double v = p(x, y);
        if (!std::isfinite(v) || v < 0.0) {
          std::ostringstream os;
          os << "action " << u << ", state " << x << ": P(" << y << "|" << x << ") = " << v
             << " is negative or non-finite";
          add(os.str());
        }
        row_sum += v;
      }
      if (std::abs(row_sum - 1.0) > kRowSumTol) {
        std::ostringstream os;
        os << "action " << u << ", state " << x << ": row sums to " << row_sum << " (deviation "
           << row_sum - 1.0 << ")";
        add(os.str());
      }
    }
  }
  return report;
}

namespace {

nlohmann::json mdp_to_json(const FiniteMdp& mdp) {
  nlohmann::json j;
  j["n"] = mdp.num_states;
  j["m"] = mdp.num_actions;
  j["recurrent_state"] = mdp.recurrent_state;
  j["reward"] = std::vector<double>(mdp.reward.data(), mdp.reward.data() + mdp.reward.size());
  auto kernel = nlohmann::json::array();
  for (const auto& p : mdp.kernel) {
    auto slice = nlohmann::json::array();
    for (int x = 0; x < p.rows(); ++x) {
      auto row = nlohmann::json::array();
      for (int y = 0; y < p.cols(); ++y) row.push_back(p(x, y));
      slice.push_back(std::move(row));
    }
    kernel.push_back(std::move(slice));
  }
  j["kernel"] = std::move(kernel);
  return j;
}

FiniteMdp mdp_from_json(const nlohmann::json& j) {
  for (const char* field : {"n", "m", "recurrent_state", "reward", "kernel"}) {
    if (!j.contains(field)) throw ParseError(std::string("MDP file missing field '") + field + "'");
  }
  FiniteMdp mdp;
  try {
    mdp.num_states = j.at("n").get<int>();
    mdp.num_actions = j.at("m").get<int>();
    mdp.recurrent_state = j.at("recurrent_state").get<int>();
    const auto reward = j.at("reward").get<std::vector<double>>();
    mdp.reward = Eigen::Map<const Eigen::VectorXd>(reward.data(), reward.size());
    const auto& kernel = j.at("kernel");
    if (!kernel.is_array()) throw ParseError("'kernel' must be an array");
    for (const auto& slice : kernel) {
      const auto rows = slice.get<std::vector<std::vector<double>>>();
      Eigen::MatrixXd p(rows.size(), rows.empty() ? 0 : rows[0].size());
      for (std::size_t x = 0; x < rows.size(); ++x) {
        if (static_cast<Eigen::Index>(rows[x].size()) != p.cols())
          throw ParseError("kernel rows have inconsistent lengths");
        for (std::size_t y = 0; y < rows[x].size(); ++y) p(x, y) = rows[x][y];
      }
      mdp.kernel.push_back(std::move(p));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("MDP file has malformed field: ") + e.what());
  }
  return mdp;
}

}  // namespace

FiniteMdp load_mdp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open MDP file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("malformed JSON in " + path + ": " + e.what());
  }
  FiniteMdp mdp = mdp_from_json(j);
  const auto report = validate_mdp(mdp);
  if (!report.empty()) {
    std::string msg = "invalid MDP in " + path + ":";
    for (const auto& line : report) msg += "\n  " + line;
    throw ValidationError(msg);
  }
  return mdp;
}

void save_mdp(const FiniteMdp& mdp, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write MDP file: " + path);
  out << mdp_to_json(mdp).dump(2) << "\n";
}

}  // namespace riskpg
