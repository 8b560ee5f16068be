#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "toolforge/attachment.hpp"
#include "toolforge/parts.hpp"
#include "toolforge/scoring.hpp"
#include "toolforge/simulation.hpp"
#include "toolforge/taxonomy.hpp"

namespace toolforge {

using Json = nlohmann::json;

/// Strict accessor over a JSON object: every key must be consumed by an
/// accessor and finish() rejects leftovers, so unknown keys are schema
/// errors with a path in the message.
class JsonObject {
 public:
  JsonObject(const Json& j, std::string context);

  bool has(const std::string& key) const;
  const Json& require(const std::string& key);
  const Json* optional(const std::string& key);

  double number(const std::string& key);
  double number_or(const std::string& key, double fallback);
  std::int64_t integer(const std::string& key);
  std::int64_t integer_or(const std::string& key, std::int64_t fallback);
  std::string string(const std::string& key);
  std::string string_or(const std::string& key, const std::string& fallback);
  bool boolean_or(const std::string& key, bool fallback);

  const std::string& context() const { return context_; }

  /// Throws a schema error when any key was never consumed.
  void finish();

 private:
  const Json& json_;
  std::string context_;
  std::set<std::string> consumed_;
};

Json read_json_file(const std::filesystem::path& path);
void write_json_file(const Json& j, const std::filesystem::path& path);

// Values that may be infinite are serialized as the string "inf" since JSON
// has no infinity literal.
Json json_from_maybe_inf(double v);
double maybe_inf_from_json(const Json& j, const std::string& context);

Eigen::Vector3d vec3_from_json(const Json& j, const std::string& context);
Eigen::Vector2d vec2_from_json(const Json& j, const std::string& context);
Json json_from_vec3(const Eigen::Vector3d& v);
Json json_from_vec2(const Eigen::Vector2d& v);

Json sq_to_json(const SuperquadricParams& sq);
SuperquadricParams sq_from_json(const Json& j, const std::string& context);

Json attachment_point_to_json(const AttachmentPoint& p);
AttachmentPoint attachment_point_from_json(const Json& j,
                                           const std::string& part_id,
                                           const std::string& context);

Json library_to_json(const AttachmentLibrary& lib);
AttachmentLibrary library_from_json(const Json& j, const std::string& context);

Json build_to_json(const CandidateBuild& build);
Json builds_to_json(const std::vector<CandidateBuild>& builds);

Json attempt_log_to_json(const AttemptLog& log);

Json weights_to_json(const ScoreWeights& w);
ScoreWeights weights_from_json(const Json& j, const std::string& context);

}  // namespace toolforge
