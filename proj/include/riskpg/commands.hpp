#pragma once

#include <optional>
#include <string>

#include <json.hpp>

namespace riskpg::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitNumerical = 2;
inline constexpr int kExitAssumption = 3;

/// Subcommand bodies. Each reads its parameters from `config`, writes its
/// result files into `out_dir`, and throws on failure (ConfigError family,
/// NumericalError, AssumptionError). run_subcommand maps those to exit codes.
void cmd_eval(const nlohmann::json& config, const std::string& out_dir);
void cmd_frontier(const nlohmann::json& config, const std::string& out_dir);
void cmd_exact_opt(const nlohmann::json& config, const std::string& out_dir);
void cmd_sim_opt(const nlohmann::json& config, const std::string& out_dir);
void cmd_portfolio(const nlohmann::json& config, const std::string& out_dir);

/// Dispatch by subcommand name with exceptions mapped to exit codes:
/// 0 success, 1 config/validation error, 2 numerical error, 3 assumption
/// guard violation. seed_override, when present, replaces config["seed"].
int run_subcommand(const std::string& name, nlohmann::json config, const std::string& out_dir,
                   std::optional<std::uint64_t> seed_override = std::nullopt);

/// run_subcommand with the config loaded from a JSON file.
int run_subcommand_file(const std::string& name, const std::string& config_path,
                        const std::string& out_dir,
                        std::optional<std::uint64_t> seed_override = std::nullopt);

}  // namespace riskpg::cli
