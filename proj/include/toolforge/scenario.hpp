#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "toolforge/config.hpp"
#include "toolforge/simulation.hpp"

namespace toolforge {

struct ScenarioPart {
  std::string id;
  std::filesystem::path file;
};

/// A scenario file names the reference component clouds (pre-segmented, in
/// assembled order), the candidate part clouds, an optional attachment
/// library, scoring weights and an optional ground-truth world model for
/// simulation. Relative paths resolve against the scenario's directory.
struct Scenario {
  std::string name;
  std::uint64_t seed = 0;
  std::vector<std::filesystem::path> reference_files;
  double real_world_scale = 1.0;
  std::vector<ScenarioPart> parts;
  std::optional<AttachmentLibrary> library;
  std::optional<ScoreWeights> weights;
  std::optional<WorldModel> world;
  std::filesystem::path base_dir;
};

Scenario scenario_from_json(const Json& j, const std::filesystem::path& base_dir,
                            const std::string& context);
Scenario load_scenario(const std::filesystem::path& path);

WorldModel world_from_json(const Json& j, const std::string& context);
Json world_to_json(const WorldModel& world);

TaskSpec task_from_json(const Json& j, const std::string& context);
Json task_to_json(const TaskSpec& task);

}  // namespace toolforge
