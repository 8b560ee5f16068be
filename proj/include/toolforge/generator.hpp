#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "toolforge/scenario.hpp"

namespace toolforge {

/// One part to synthesize: model, pose, and its true attachment points
/// (locations in the same frame as the generated cloud; polarity is ground
/// truth for simulation and is stripped from the emitted library).
struct GenPartSpec {
  std::string id;
  SuperquadricParams sq;
  std::vector<AttachmentPoint> attachments;
};

/// Recipe for a synthetic scenario: reference components in the assembled
/// tool frame, candidate parts scattered in the scene, and the ground-truth
/// world model.
struct GenSpec {
  std::string name = "scenario";
  std::uint64_t seed = 1;
  std::size_t points_per_cloud = 1000;
  double noise_sigma = 0.0;
  std::vector<SuperquadricParams> reference;
  double real_world_scale = 1.0;
  std::vector<GenPartSpec> parts;
  bool emit_library = true;
  ScoreWeights weights;
  std::vector<BreakageRule> breakage_rules;
  TaskSpec task;
  double attach_radius = 0.02;
};

/// Point on the superquadric surface at the tip of a local semi-axis
/// (axis 0..2, sign -1/+1), posed into the model's frame. Axis tips are
/// exact surface points for every shape exponent and taper.
Eigen::Vector3d sq_axis_point(const SuperquadricParams& sq, int axis,
                              double sign);

GenSpec gen_spec_from_json(const Json& j, const std::string& context);
GenSpec load_gen_spec(const std::filesystem::path& path);

/// Writes the component and part PLYs, the attachment library, and the
/// scenario file into out_dir; returns the scenario path. Byte-identical
/// output for identical specs.
std::filesystem::path generate_scenario(const GenSpec& spec,
                                        const std::filesystem::path& out_dir);

/// Built-in scenarios: a two-component hammer, spoon and spatula with four
/// candidate parts each and a single working configuration.
GenSpec preset_hammer();
GenSpec preset_spoon();
GenSpec preset_spatula();
const std::vector<std::string>& preset_names();
GenSpec preset_by_name(const std::string& name);

}  // namespace toolforge
