#include "toolforge/generator.hpp"

#include <cmath>

#include "toolforge/error.hpp"
#include "toolforge/rng.hpp"

namespace toolforge {

Eigen::Vector3d sq_axis_point(const SuperquadricParams& sq, int axis,
                              double sign) {
  Eigen::Vector3d local = Eigen::Vector3d::Zero();
  local[axis] = sign * sq.scale[axis];
  // x=y=0 along the z axis and z=0 along x/y, so the taper factor is 1.
  return sq.rotation() * local + sq.center;
}

GenSpec gen_spec_from_json(const Json& j, const std::string& context) {
  JsonObject obj(j, context);
  GenSpec spec;
  spec.name = obj.string_or("name", "scenario");
  spec.seed = static_cast<std::uint64_t>(obj.integer_or("seed", 1));
  spec.points_per_cloud =
      static_cast<std::size_t>(obj.integer_or("points_per_cloud", 1000));
  spec.noise_sigma = obj.number_or("noise_sigma", 0.0);
  if (spec.points_per_cloud < 13 || spec.noise_sigma < 0.0) {
    throw Error(ErrorKind::schema,
                context + ": need points_per_cloud >= 13 and noise_sigma >= 0");
  }

  {
    const std::string rc = context + ".reference";
    JsonObject ref(obj.require("reference"), rc);
    const Json& comps = ref.require("components");
    if (!comps.is_array() || comps.size() < 2) {
      throw Error(ErrorKind::schema, rc + ".components: need >= 2 components");
    }
    for (std::size_t i = 0; i < comps.size(); ++i) {
      spec.reference.push_back(
          sq_from_json(comps[i], rc + ".components[" + std::to_string(i) + "]"));
    }
    spec.real_world_scale = ref.number_or("real_world_scale", 1.0);
    ref.finish();
  }

  {
    const Json& parts = obj.require("parts");
    if (!parts.is_array() || parts.empty()) {
      throw Error(ErrorKind::schema, context + ".parts: expected a part list");
    }
    for (std::size_t i = 0; i < parts.size(); ++i) {
      const std::string pc = context + ".parts[" + std::to_string(i) + "]";
      JsonObject part(parts[i], pc);
      GenPartSpec gp;
      gp.id = part.string("id");
      gp.sq = sq_from_json(part.require("sq"), pc + ".sq");
      if (const Json* att = part.optional("attachments")) {
        if (!att->is_array()) {
          throw Error(ErrorKind::schema, pc + ".attachments: expected an array");
        }
        for (std::size_t a = 0; a < att->size(); ++a) {
          gp.attachments.push_back(attachment_point_from_json(
              (*att)[a], gp.id,
              pc + ".attachments[" + std::to_string(a) + "]"));
        }
      }
      part.finish();
      spec.parts.push_back(std::move(gp));
    }
  }

  spec.emit_library = obj.boolean_or("emit_library", true);
  if (const Json* w = obj.optional("weights")) {
    spec.weights = weights_from_json(*w, context + ".weights");
  }
  {
    const std::string wc = context + ".world";
    JsonObject world(obj.require("world"), wc);
    if (const Json* rules = world.optional("breakage_rules")) {
      for (std::size_t i = 0; i < rules->size(); ++i) {
        JsonObject rule((*rules)[i], wc + ".breakage_rules[" + std::to_string(i) + "]");
        BreakageRule br;
        for (const auto& p : rule.require("parts")) {
          br.parts.push_back(p.get<std::string>());
        }
        rule.finish();
        spec.breakage_rules.push_back(std::move(br));
      }
    }
    spec.task = task_from_json(world.require("task"), wc + ".task");
    spec.attach_radius = world.number_or("attach_radius", spec.attach_radius);
    world.finish();
  }
  obj.finish();
  return spec;
}

GenSpec load_gen_spec(const std::filesystem::path& path) {
  return gen_spec_from_json(read_json_file(path), path.filename().string());
}

std::filesystem::path generate_scenario(const GenSpec& spec,
                                        const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  const Rng root(spec.seed);

  Json ref_files = Json::array();
  for (std::size_t i = 0; i < spec.reference.size(); ++i) {
    const std::string file = spec.name + "_ref_" + std::to_string(i) + ".ply";
    PointCloud cloud = sample_surface(spec.reference[i], spec.points_per_cloud,
                                      spec.noise_sigma, root.fork(i).seed());
    save_ply(cloud, out_dir / file);
    ref_files.push_back(file);
  }

  Json part_list = Json::array();
  AttachmentLibrary library;
  AttachmentLibrary true_attachments;
  for (std::size_t i = 0; i < spec.parts.size(); ++i) {
    const GenPartSpec& part = spec.parts[i];
    const std::string file = spec.name + "_part_" + part.id + ".ply";
    PointCloud cloud =
        sample_surface(part.sq, spec.points_per_cloud, spec.noise_sigma,
                       root.fork(100 + i).seed());
    save_ply(cloud, out_dir / file);
    part_list.push_back(Json{{"id", part.id}, {"file", file}});

    true_attachments.entries[part.id] = part.attachments;
    if (spec.emit_library) {
      std::vector<AttachmentPoint> known = part.attachments;
      for (auto& p : known) p.polarity.reset();  // polarity is not observable
      library.entries[part.id] = std::move(known);
    }
  }

  std::filesystem::path library_file;
  if (spec.emit_library) {
    library_file = spec.name + "_library.json";
    write_json_file(library_to_json(library), out_dir / library_file);
  }

  WorldModel world;
  world.true_attachments = std::move(true_attachments);
  world.breakage_rules = spec.breakage_rules;
  world.task = spec.task;
  world.attach_radius = spec.attach_radius;

  Json scenario{
      {"name", spec.name},
      {"seed", spec.seed},
      {"reference", Json{{"components", ref_files},
                         {"real_world_scale", spec.real_world_scale}}},
      {"parts", part_list},
      {"library",
       spec.emit_library ? Json(library_file.string()) : Json(nullptr)},
      {"weights", weights_to_json(spec.weights)},
      {"world", world_to_json(world)}};

  const std::filesystem::path scenario_path =
      out_dir / (spec.name + "_scenario.json");
  write_json_file(scenario, scenario_path);
  return scenario_path;
}

namespace {

SuperquadricParams make_sq(const Eigen::Vector3d& scale,
                           const Eigen::Vector2d& shape,
                           const Eigen::Matrix3d& rot,
                           const Eigen::Vector3d& center,
                           const Eigen::Vector2d& taper = Eigen::Vector2d::Zero()) {
  SuperquadricParams sq;
  sq.scale = scale;
  sq.shape = shape;
  sq.euler = matrix_to_euler_zyz(rot);
  sq.taper = taper;
  sq.center = center;
  return sq;
}

Eigen::Matrix3d rot_rpy(double roll, double pitch, double yaw) {
  return (Eigen::AngleAxisd(yaw, Eigen::Vector3d::UnitZ()) *
          Eigen::AngleAxisd(pitch, Eigen::Vector3d::UnitY()) *
          Eigen::AngleAxisd(roll, Eigen::Vector3d::UnitX()))
      .toRotationMatrix();
}

AttachmentPoint magnet_at(const std::string& part_id,
                          const SuperquadricParams& sq, int axis, double sign,
                          Polarity polarity) {
  AttachmentPoint p;
  p.part_id = part_id;
  p.location = sq_axis_point(sq, axis, sign);
  p.kind = AttachmentKind::magnet;
  p.polarity = polarity;
  return p;
}

}  // namespace

GenSpec preset_hammer() {
  GenSpec spec;
  spec.name = "hammer";
  spec.seed = 20801;
  spec.points_per_cloud = 1000;
  spec.weights = ScoreWeights{1.0, 1.0, 5.0, 5.0};

  // Assembled frame: handle along +x from the origin, head crosswise at the
  // far end. Component order is (action part, grasp part).
  const SuperquadricParams ref_head =
      make_sq({0.016, 0.018, 0.046}, {0.30, 0.40},
              rot_rpy(-M_PI / 2.0, 0.0, 0.0), {0.132, 0.0, 0.0});
  const SuperquadricParams ref_handle =
      make_sq({0.0125, 0.0115, 0.115}, {0.35, 0.90},
              rot_rpy(0.0, M_PI / 2.0, 0.0), {0.0, 0.0, 0.0});
  spec.reference = {ref_head, ref_handle};

  GenPartSpec a;  // stubby block, poor match for both slots
  a.id = "A";
  a.sq = make_sq({0.025, 0.024, 0.026}, {0.30, 0.35},
                 rot_rpy(0.2, -0.4, 1.1), {0.30, 0.25, 0.02});
  a.attachments = {magnet_at("A", a.sq, 2, 1.0, Polarity::north)};

  GenPartSpec b;  // long rod, the natural handle (proportional to the
                  // reference handle, same factor as part C)
  b.id = "B";
  b.sq = make_sq(0.97 * ref_handle.scale, {0.35, 0.90},
                 rot_rpy(0.5, 0.9, -0.3), {0.25, -0.20, 0.01});
  b.attachments = {magnet_at("B", b.sq, 2, 1.0, Polarity::south)};

  GenPartSpec c;  // closest head match; its joint snaps on impact
  c.id = "C";
  c.sq = make_sq(0.97 * ref_head.scale, {0.30, 0.41},
                 rot_rpy(-0.7, 0.3, 0.6), {0.05, 0.30, 0.015});
  c.attachments = {magnet_at("C", c.sq, 0, -1.0, Polarity::north)};

  GenPartSpec d;  // rounder block, second-best head
  d.id = "D";
  d.sq = make_sq({0.0155, 0.017, 0.042}, {0.55, 0.70},
                 rot_rpy(1.2, -0.2, 0.4), {-0.22, 0.28, 0.01});
  d.attachments = {magnet_at("D", d.sq, 0, -1.0, Polarity::north)};

  spec.parts = {a, b, c, d};
  spec.breakage_rules = {BreakageRule{{"C", "B"}}};

  spec.task.kind = TaskKind::hit;
  spec.task.action_slot = 0;
  spec.task.handle_slot = 1;
  spec.task.min_action_width = 0.02;
  spec.task.min_handle_length = 0.10;
  return spec;
}

GenSpec preset_spoon() {
  GenSpec spec;
  spec.name = "spoon";
  spec.seed = 20802;
  spec.points_per_cloud = 1000;
  spec.weights = ScoreWeights{1.0, 1.0, 5.0, 5.0};

  // Tapered bodies keep the flip alignments distinguishable: the bowl of a
  // scoop and the narrowing of a handle move the intersection centroids
  // apart, so candidate locations do not collapse in deduplication.
  const SuperquadricParams ref_scoop =
      make_sq({0.036, 0.026, 0.012}, {0.90, 1.00}, Eigen::Matrix3d::Identity(),
              {0.141, 0.0, 0.0}, {0.25, 0.20});
  const SuperquadricParams ref_handle =
      make_sq({0.010, 0.009, 0.105}, {0.40, 0.90},
              rot_rpy(0.0, M_PI / 2.0, 0.0), {0.0, 0.0, 0.0}, {0.18, 0.18});
  spec.reference = {ref_scoop, ref_handle};

  GenPartSpec a;  // best scoop by shape, but nothing to attach with
                  // (proportional to the reference, same factor as part C)
  a.id = "A";
  a.sq = make_sq(0.99 * ref_scoop.scale, {0.88, 1.00},
                 rot_rpy(0.3, 0.1, -0.8), {0.28, 0.22, 0.012}, {0.33, 0.25});
  a.attachments = {};

  GenPartSpec b;  // scoop with two symmetric magnets on the rim
  b.id = "B";
  b.sq = make_sq({0.031, 0.023, 0.0105}, {0.80, 0.95},
                 rot_rpy(-0.5, 0.6, 0.2), {-0.25, 0.18, 0.011}, {0.28, 0.22});
  b.attachments = {magnet_at("B", b.sq, 0, 1.0, Polarity::north),
                   magnet_at("B", b.sq, 0, -1.0, Polarity::north)};

  GenPartSpec c;  // handle matching the reference proportions (same factor
                  // as part A), but its magnet sits mid-shaft
  c.id = "C";
  c.sq = make_sq(0.99 * ref_handle.scale, {0.40, 0.88},
                 rot_rpy(0.9, -0.3, 0.5), {0.22, -0.24, 0.01}, {0.32, 0.28});
  c.attachments = {magnet_at("C", c.sq, 0, 1.0, Polarity::north)};

  GenPartSpec d;  // oversized handle with a tip magnet
  d.id = "D";
  d.sq = make_sq(1.08 * ref_handle.scale, {0.45, 0.92},
                 rot_rpy(-1.1, 0.2, -0.4), {-0.20, -0.26, 0.01}, {0.30, 0.26});
  d.attachments = {magnet_at("D", d.sq, 2, 1.0, Polarity::south)};

  spec.parts = {a, b, c, d};

  spec.task.kind = TaskKind::scoop;
  spec.task.action_slot = 0;
  spec.task.handle_slot = 1;
  spec.task.min_action_width = 0.03;
  spec.task.min_handle_length = 0.10;
  return spec;
}

GenSpec preset_spatula() {
  GenSpec spec;
  spec.name = "spatula";
  spec.seed = 20803;
  spec.points_per_cloud = 1000;
  spec.weights = ScoreWeights{1.0, 1.0, 5.0, 5.0};

  // Taper keeps flip alignments distinguishable (see preset_spoon).
  const SuperquadricParams ref_blade =
      make_sq({0.046, 0.036, 0.0045}, {0.30, 0.40}, Eigen::Matrix3d::Identity(),
              {0.148, 0.0, 0.0}, {0.20, 0.15});
  const SuperquadricParams ref_handle =
      make_sq({0.0095, 0.0085, 0.102}, {0.40, 0.90},
              rot_rpy(0.0, M_PI / 2.0, 0.0), {0.0, 0.0, 0.0}, {0.18, 0.18});
  spec.reference = {ref_blade, ref_handle};

  GenPartSpec a;  // short handle: attaches but fails the task
  a.id = "A";
  a.sq = make_sq({0.012, 0.011, 0.042}, {0.40, 0.90},
                 rot_rpy(0.4, 0.7, -0.2), {0.27, 0.24, 0.011}, {0.10, 0.10});
  a.attachments = {magnet_at("A", a.sq, 2, 1.0, Polarity::south)};

  GenPartSpec b;  // best handle (proportional to the reference, same factor
                  // as part D); magnet polarity clashes with the blade
  b.id = "B";
  b.sq = make_sq(0.97 * ref_handle.scale, {0.40, 0.88},
                 rot_rpy(-0.6, 0.2, 0.9), {-0.24, 0.20, 0.009}, {0.18, 0.18});
  b.attachments = {magnet_at("B", b.sq, 2, 1.0, Polarity::north)};

  GenPartSpec c;  // second handle, compatible polarity
  c.id = "C";
  c.sq = make_sq({0.010, 0.009, 0.108}, {0.45, 0.92},
                 rot_rpy(0.8, -0.5, 0.3), {0.24, -0.22, 0.011}, {0.15, 0.15});
  c.attachments = {magnet_at("C", c.sq, 2, 1.0, Polarity::south)};

  GenPartSpec d;  // the only flat piece, two magnets on opposite edges
  d.id = "D";
  d.sq = make_sq(0.97 * ref_blade.scale, {0.30, 0.42},
                 rot_rpy(-0.3, 0.4, -0.9), {-0.22, -0.25, 0.006}, {0.20, 0.15});
  d.attachments = {magnet_at("D", d.sq, 0, 1.0, Polarity::north),
                   magnet_at("D", d.sq, 0, -1.0, Polarity::north)};

  spec.parts = {a, b, c, d};

  spec.task.kind = TaskKind::flip;
  spec.task.action_slot = 0;
  spec.task.handle_slot = 1;
  spec.task.min_action_width = 0.05;
  spec.task.min_handle_length = 0.10;
  spec.task.max_action_thickness = 0.012;
  return spec;
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {"hammer", "spoon", "spatula"};
  return names;
}

GenSpec preset_by_name(const std::string& name) {
  if (name == "hammer") return preset_hammer();
  if (name == "spoon") return preset_spoon();
  if (name == "spatula") return preset_spatula();
  throw Error(ErrorKind::invalid_argument, "unknown preset '" + name + "'");
}

}  // namespace toolforge
