#include "toolforge/scenario.hpp"

#include <cmath>
#include <limits>

#include "toolforge/error.hpp"

namespace toolforge {

namespace {

TaskKind task_kind_from_name(const std::string& name,
                             const std::string& context) {
  if (name == "hit") return TaskKind::hit;
  if (name == "scoop") return TaskKind::scoop;
  if (name == "flip") return TaskKind::flip;
  throw Error(ErrorKind::schema,
              context + ": task kind must be hit, scoop or flip");
}

const char* task_kind_name(TaskKind kind) {
  switch (kind) {
    case TaskKind::hit: return "hit";
    case TaskKind::scoop: return "scoop";
    case TaskKind::flip: return "flip";
  }
  return "hit";
}

}  // namespace

TaskSpec task_from_json(const Json& j, const std::string& context) {
  JsonObject obj(j, context);
  TaskSpec task;
  task.kind = task_kind_from_name(obj.string("kind"), context + ".kind");
  task.action_slot = static_cast<std::size_t>(obj.integer_or("action_slot", 0));
  task.handle_slot = static_cast<std::size_t>(obj.integer_or("handle_slot", 1));
  task.min_action_width = obj.number_or("min_action_width", 0.02);
  task.min_handle_length = obj.number_or("min_handle_length", 0.10);
  const double default_thickness =
      task.kind == TaskKind::flip ? 0.012
                                  : std::numeric_limits<double>::infinity();
  task.max_action_thickness =
      obj.number_or("max_action_thickness", default_thickness);
  obj.finish();
  return task;
}

Json task_to_json(const TaskSpec& task) {
  Json j{{"kind", task_kind_name(task.kind)},
         {"action_slot", task.action_slot},
         {"handle_slot", task.handle_slot},
         {"min_action_width", task.min_action_width},
         {"min_handle_length", task.min_handle_length}};
  if (std::isfinite(task.max_action_thickness)) {
    j["max_action_thickness"] = task.max_action_thickness;
  }
  return j;
}

WorldModel world_from_json(const Json& j, const std::string& context) {
  JsonObject obj(j, context);
  WorldModel world;
  world.true_attachments = library_from_json(obj.require("true_attachments"),
                                             context + ".true_attachments");
  if (const Json* rules = obj.optional("breakage_rules")) {
    if (!rules->is_array()) {
      throw Error(ErrorKind::schema,
                  context + ".breakage_rules: expected an array");
    }
    for (std::size_t i = 0; i < rules->size(); ++i) {
      const std::string rc =
          context + ".breakage_rules[" + std::to_string(i) + "]";
      JsonObject rule((*rules)[i], rc);
      const Json& parts = rule.require("parts");
      if (!parts.is_array() || parts.empty()) {
        throw Error(ErrorKind::schema, rc + ".parts: expected part ids");
      }
      BreakageRule br;
      for (const auto& p : parts) br.parts.push_back(p.get<std::string>());
      rule.finish();
      world.breakage_rules.push_back(std::move(br));
    }
  }
  world.task = task_from_json(obj.require("task"), context + ".task");
  // NaN marks "not specified"; the pipeline substitutes the config value.
  world.attach_radius = obj.number_or(
      "attach_radius", std::numeric_limits<double>::quiet_NaN());
  obj.finish();
  return world;
}

Json world_to_json(const WorldModel& world) {
  Json rules = Json::array();
  for (const auto& r : world.breakage_rules) {
    rules.push_back(Json{{"parts", r.parts}});
  }
  Json j{{"true_attachments", library_to_json(world.true_attachments)},
         {"breakage_rules", rules},
         {"task", task_to_json(world.task)}};
  if (!std::isnan(world.attach_radius)) {
    j["attach_radius"] = world.attach_radius;
  }
  return j;
}

Scenario scenario_from_json(const Json& j, const std::filesystem::path& base_dir,
                            const std::string& context) {
  JsonObject obj(j, context);
  Scenario scenario;
  scenario.base_dir = base_dir;
  scenario.name = obj.string_or("name", "scenario");
  scenario.seed = static_cast<std::uint64_t>(obj.integer_or("seed", 0));

  {
    const std::string rc = context + ".reference";
    JsonObject ref(obj.require("reference"), rc);
    const Json& comps = ref.require("components");
    if (!comps.is_array() || comps.empty()) {
      throw Error(ErrorKind::schema, rc + ".components: expected file list");
    }
    for (const auto& c : comps) {
      scenario.reference_files.push_back(base_dir / c.get<std::string>());
    }
    scenario.real_world_scale = ref.number_or("real_world_scale", 1.0);
    ref.finish();
    if (!(scenario.real_world_scale > 0.0)) {
      throw Error(ErrorKind::schema, rc + ": real_world_scale must be > 0");
    }
  }

  {
    const Json& parts = obj.require("parts");
    if (!parts.is_array() || parts.empty()) {
      throw Error(ErrorKind::schema, context + ".parts: expected a part list");
    }
    for (std::size_t i = 0; i < parts.size(); ++i) {
      const std::string pc = context + ".parts[" + std::to_string(i) + "]";
      JsonObject part(parts[i], pc);
      ScenarioPart sp;
      sp.id = part.string("id");
      sp.file = base_dir / part.string("file");
      part.finish();
      scenario.parts.push_back(std::move(sp));
    }
  }

  if (const Json* lib = obj.optional("library")) {
    if (!lib->is_null()) {
      if (lib->is_string()) {
        scenario.library = library_from_json(
            read_json_file(base_dir / lib->get<std::string>()),
            context + ".library");
      } else {
        scenario.library = library_from_json(*lib, context + ".library");
      }
    }
  }

  if (const Json* w = obj.optional("weights")) {
    scenario.weights = weights_from_json(*w, context + ".weights");
  }
  if (const Json* world = obj.optional("world")) {
    if (!world->is_null()) {
      scenario.world = world_from_json(*world, context + ".world");
    }
  }
  obj.finish();
  return scenario;
}

Scenario load_scenario(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw Error(ErrorKind::io, "scenario file not found: " + path.string());
  }
  return scenario_from_json(read_json_file(path), path.parent_path(),
                            path.filename().string());
}

}  // namespace toolforge
