#pragma once

#include <cstdint>
#include <filesystem>

#include "toolforge/attachment.hpp"
#include "toolforge/scoring.hpp"
#include "toolforge/segmentation.hpp"
#include "toolforge/serialization.hpp"
#include "toolforge/superquadric.hpp"

namespace toolforge {

/// Pipeline-wide knobs; every field has a working default. Loading rejects
/// unknown keys (see docs/schemas/config.schema.json).
struct PipelineConfig {
  ScoreWeights weights;
  FitConfig fit;
  SegmentationConfig segmentation;
  AttAggregate att_aggregate = AttAggregate::sum;
  double attach_radius = 0.02;
  std::uint64_t seed = 0;
  bool parallel = true;
};

PipelineConfig config_from_json(const Json& j, const std::string& context);
PipelineConfig load_config(const std::filesystem::path& path);
Json config_to_json(const PipelineConfig& config);

const char* att_aggregate_name(AttAggregate mode);
AttAggregate att_aggregate_from_name(const std::string& name,
                                     const std::string& context);

}  // namespace toolforge
