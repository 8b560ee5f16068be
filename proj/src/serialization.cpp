#include "toolforge/serialization.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include "toolforge/error.hpp"

namespace toolforge {

JsonObject::JsonObject(const Json& j, std::string context)
    : json_(j), context_(std::move(context)) {
  if (!j.is_object()) {
    throw Error(ErrorKind::schema, context_ + ": expected an object");
  }
}

bool JsonObject::has(const std::string& key) const {
  return json_.contains(key);
}

const Json& JsonObject::require(const std::string& key) {
  if (!json_.contains(key)) {
    throw Error(ErrorKind::schema, context_ + ": missing key '" + key + "'");
  }
  consumed_.insert(key);
  return json_.at(key);
}

const Json* JsonObject::optional(const std::string& key) {
  if (!json_.contains(key)) return nullptr;
  consumed_.insert(key);
  return &json_.at(key);
}

double JsonObject::number(const std::string& key) {
  const Json& v = require(key);
  if (!v.is_number()) {
    throw Error(ErrorKind::schema, context_ + "." + key + ": expected a number");
  }
  return v.get<double>();
}

double JsonObject::number_or(const std::string& key, double fallback) {
  const Json* v = optional(key);
  if (v == nullptr) return fallback;
  if (!v->is_number()) {
    throw Error(ErrorKind::schema, context_ + "." + key + ": expected a number");
  }
  return v->get<double>();
}

std::int64_t JsonObject::integer(const std::string& key) {
  const Json& v = require(key);
  if (!v.is_number_integer()) {
    throw Error(ErrorKind::schema,
                context_ + "." + key + ": expected an integer");
  }
  return v.get<std::int64_t>();
}

std::int64_t JsonObject::integer_or(const std::string& key,
                                    std::int64_t fallback) {
  const Json* v = optional(key);
  if (v == nullptr) return fallback;
  if (!v->is_number_integer()) {
    throw Error(ErrorKind::schema,
                context_ + "." + key + ": expected an integer");
  }
  return v->get<std::int64_t>();
}

std::string JsonObject::string(const std::string& key) {
  const Json& v = require(key);
  if (!v.is_string()) {
    throw Error(ErrorKind::schema, context_ + "." + key + ": expected a string");
  }
  return v.get<std::string>();
}

std::string JsonObject::string_or(const std::string& key,
                                  const std::string& fallback) {
  const Json* v = optional(key);
  if (v == nullptr) return fallback;
  if (!v->is_string()) {
    throw Error(ErrorKind::schema, context_ + "." + key + ": expected a string");
  }
  return v->get<std::string>();
}

bool JsonObject::boolean_or(const std::string& key, bool fallback) {
  const Json* v = optional(key);
  if (v == nullptr) return fallback;
  if (!v->is_boolean()) {
    throw Error(ErrorKind::schema, context_ + "." + key + ": expected a bool");
  }
  return v->get<bool>();
}

void JsonObject::finish() {
  for (const auto& [key, value] : json_.items()) {
    (void)value;
    if (!consumed_.count(key)) {
      throw Error(ErrorKind::schema, context_ + ": unknown key '" + key + "'");
    }
  }
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorKind::io, "cannot open " + path.string());
  }
  Json j;
  try {
    in >> j;
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::parse, path.string() + ": " + e.what());
  }
  return j;
}

void write_json_file(const Json& j, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorKind::io, "cannot write " + path.string());
  }
  out << j.dump(2) << "\n";
  if (!out) {
    throw Error(ErrorKind::io, "write failed for " + path.string());
  }
}

Json json_from_maybe_inf(double v) {
  if (std::isinf(v)) return Json("inf");
  return Json(v);
}

double maybe_inf_from_json(const Json& j, const std::string& context) {
  if (j.is_string()) {
    if (j.get<std::string>() == "inf") {
      return std::numeric_limits<double>::infinity();
    }
    throw Error(ErrorKind::schema, context + ": expected number or \"inf\"");
  }
  if (!j.is_number()) {
    throw Error(ErrorKind::schema, context + ": expected number or \"inf\"");
  }
  return j.get<double>();
}

namespace {

void check_fixed_array(const Json& j, std::size_t n, const std::string& context) {
  if (!j.is_array() || j.size() != n) {
    throw Error(ErrorKind::schema,
                context + ": expected an array of " + std::to_string(n) +
                    " numbers");
  }
  for (const auto& v : j) {
    if (!v.is_number()) {
      throw Error(ErrorKind::schema, context + ": non-numeric element");
    }
  }
}

}  // namespace

Eigen::Vector3d vec3_from_json(const Json& j, const std::string& context) {
  check_fixed_array(j, 3, context);
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

Eigen::Vector2d vec2_from_json(const Json& j, const std::string& context) {
  check_fixed_array(j, 2, context);
  return {j[0].get<double>(), j[1].get<double>()};
}

Json json_from_vec3(const Eigen::Vector3d& v) {
  return Json::array({v.x(), v.y(), v.z()});
}

Json json_from_vec2(const Eigen::Vector2d& v) {
  return Json::array({v.x(), v.y()});
}

Json sq_to_json(const SuperquadricParams& sq) {
  return Json{{"scale", json_from_vec3(sq.scale)},
              {"shape", json_from_vec2(sq.shape)},
              {"euler", json_from_vec3(sq.euler)},
              {"taper", json_from_vec2(sq.taper)},
              {"center", json_from_vec3(sq.center)}};
}

SuperquadricParams sq_from_json(const Json& j, const std::string& context) {
  JsonObject obj(j, context);
  SuperquadricParams sq;
  sq.scale = vec3_from_json(obj.require("scale"), context + ".scale");
  sq.shape = vec2_from_json(obj.require("shape"), context + ".shape");
  sq.euler = vec3_from_json(obj.require("euler"), context + ".euler");
  sq.taper = vec2_from_json(obj.require("taper"), context + ".taper");
  sq.center = vec3_from_json(obj.require("center"), context + ".center");
  obj.finish();
  try {
    sq.validate();
  } catch (const Error& e) {
    throw Error(ErrorKind::schema, context + ": " + e.what());
  }
  return sq;
}

namespace {

const char* kind_name(AttachmentKind k) {
  return k == AttachmentKind::magnet ? "magnet" : "other";
}

const char* polarity_str(Polarity p) {
  return p == Polarity::north ? "north" : "south";
}

}  // namespace

Json attachment_point_to_json(const AttachmentPoint& p) {
  Json j{{"location", json_from_vec3(p.location)}, {"kind", kind_name(p.kind)}};
  if (p.polarity) j["polarity"] = polarity_str(*p.polarity);
  return j;
}

AttachmentPoint attachment_point_from_json(const Json& j,
                                           const std::string& part_id,
                                           const std::string& context) {
  JsonObject obj(j, context);
  AttachmentPoint p;
  p.part_id = part_id;
  p.location = vec3_from_json(obj.require("location"), context + ".location");
  const std::string kind = obj.string_or("kind", "magnet");
  if (kind == "magnet") {
    p.kind = AttachmentKind::magnet;
  } else if (kind == "other") {
    p.kind = AttachmentKind::other;
  } else {
    throw Error(ErrorKind::schema, context + ".kind: unknown kind '" + kind + "'");
  }
  if (const Json* pol = obj.optional("polarity")) {
    const std::string s = pol->get<std::string>();
    if (s == "north") {
      p.polarity = Polarity::north;
    } else if (s == "south") {
      p.polarity = Polarity::south;
    } else {
      throw Error(ErrorKind::schema,
                  context + ".polarity: expected north or south");
    }
  }
  obj.finish();
  return p;
}

Json library_to_json(const AttachmentLibrary& lib) {
  Json j = Json::object();
  for (const auto& [part_id, points] : lib.entries) {
    Json arr = Json::array();
    for (const auto& p : points) arr.push_back(attachment_point_to_json(p));
    j[part_id] = arr;
  }
  return j;
}

AttachmentLibrary library_from_json(const Json& j, const std::string& context) {
  if (!j.is_object()) {
    throw Error(ErrorKind::schema, context + ": expected an object");
  }
  AttachmentLibrary lib;
  for (const auto& [part_id, arr] : j.items()) {
    if (!arr.is_array()) {
      throw Error(ErrorKind::schema,
                  context + "." + part_id + ": expected an array");
    }
    std::vector<AttachmentPoint> points;
    for (std::size_t i = 0; i < arr.size(); ++i) {
      points.push_back(attachment_point_from_json(
          arr[i], part_id, context + "." + part_id + "[" + std::to_string(i) + "]"));
    }
    lib.entries[part_id] = std::move(points);
  }
  return lib;
}

Json build_to_json(const CandidateBuild& build) {
  Json attachments = Json::array();
  if (!build.attachments_chosen.empty()) {
    for (const auto& ca : build.attachments_chosen) {
      if (ca.alignment_index != 0) continue;  // actionable set only
      Json a{{"part", ca.part_id},
             {"location", json_from_vec3(ca.aligned_location)},
             {"kind", kind_name(ca.kind)}};
      attachments.push_back(a);
    }
  } else {
    for (const auto& loc : build.candidate_locations) {
      attachments.push_back(Json{
          {"location", json_from_vec3(loc.location)},
          {"alignment", loc.alignment_index}});
    }
  }
  return Json{{"parts", build.part_ids},
              {"e_shape", build.e_shape},
              {"e_scale", build.e_scale},
              {"e_ratio", build.e_ratio},
              {"e_att", json_from_maybe_inf(build.e_att)},
              {"e_const", json_from_maybe_inf(build.e_const)},
              {"attachments", attachments}};
}

Json builds_to_json(const std::vector<CandidateBuild>& builds) {
  Json arr = Json::array();
  for (const auto& b : builds) arr.push_back(build_to_json(b));
  return arr;
}

Json attempt_log_to_json(const AttemptLog& log) {
  Json attempts = Json::array();
  for (const auto& a : log.attempts) {
    attempts.push_back(Json{{"rank", a.rank_index},
                            {"parts", a.build_parts},
                            {"alignment", a.alignment_index},
                            {"location", json_from_vec3(a.location)},
                            {"outcome", outcome_name(a.outcome)}});
  }
  Json j{{"attempts", attempts}, {"total_attempts", log.total_attempts}};
  j["solution"] = log.solution ? build_to_json(*log.solution) : Json(nullptr);
  j["solution_rank"] = log.solution_rank ? Json(*log.solution_rank) : Json(nullptr);
  return j;
}

Json weights_to_json(const ScoreWeights& w) {
  return Json::array({w.scale, w.shape, w.ratio, w.att});
}

ScoreWeights weights_from_json(const Json& j, const std::string& context) {
  check_fixed_array(j, 4, context);
  ScoreWeights w;
  w.scale = j[0].get<double>();
  w.shape = j[1].get<double>();
  w.ratio = j[2].get<double>();
  w.att = j[3].get<double>();
  try {
    w.validate();
  } catch (const Error& e) {
    throw Error(ErrorKind::schema, context + ": " + e.what());
  }
  return w;
}

}  // namespace toolforge
