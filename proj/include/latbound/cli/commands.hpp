#pragma once

#include "latbound/cli/config.hpp"
#include "latbound/lattice.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace latbound::cli {

struct CommandResult {
  std::vector<std::filesystem::path> files;
  nlohmann::json summary;
};

struct Overrides {
  std::optional<std::string> preset;
  std::optional<std::filesystem::path> config;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
};

// Preset first, then the config file (JSON merge patch), then flags.
ExperimentConfig resolve_config(const Overrides& o);

CommandResult cmd_gen(const ExperimentConfig& c);
CommandResult cmd_bound(const ExperimentConfig& c);
CommandResult cmd_qspec(const ExperimentConfig& c);
CommandResult cmd_stats(const ExperimentConfig& c);
CommandResult cmd_plateau(const ExperimentConfig& c);
CommandResult cmd_cvp(const std::filesystem::path& instance, const std::filesystem::path& out_dir);

// {"basis": [[column 0], [column 1], ...], "target": [...], "radius": 4}
CvpInstance<double> cvp_from_json(const nlohmann::json& j);
nlohmann::json cvp_to_json(const CvpInstance<double>& inst);
nlohmann::json compare_cvp_solvers(const CvpInstance<double>& inst, int radius = 4);

std::string format_double(double v);

}  // namespace latbound::cli
