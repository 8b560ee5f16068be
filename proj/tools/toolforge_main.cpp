#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "toolforge/error.hpp"
#include "toolforge/generator.hpp"
#include "toolforge/pipeline.hpp"

namespace tf = toolforge;

namespace {

int exit_code_for(tf::ErrorKind kind) {
  switch (kind) {
    case tf::ErrorKind::insufficient_data:
    case tf::ErrorKind::degenerate_geometry:
      return 3;  // fit failure
    default:
      return 2;  // input error
  }
}

struct GlobalOptions {
  std::string config_path;
  std::int64_t seed = -1;  // <0: keep config/scenario seed
  bool json = false;
};

tf::PipelineConfig effective_config(const GlobalOptions& global) {
  tf::PipelineConfig config;
  if (!global.config_path.empty()) {
    config = tf::load_config(global.config_path);
  }
  if (global.seed >= 0) {
    config.seed = static_cast<std::uint64_t>(global.seed);
    config.segmentation.seed = config.seed;
  }
  return config;
}

tf::ScoreWeights parse_weights(const std::string& spec) {
  std::vector<double> values;
  std::size_t pos = 0;
  while (pos <= spec.size()) {
    const std::size_t comma = spec.find(',', pos);
    const std::string tok =
        spec.substr(pos, comma == std::string::npos ? comma : comma - pos);
    try {
      values.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw tf::Error(tf::ErrorKind::invalid_argument,
                      "--weights expects four comma-separated numbers");
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (values.size() != 4) {
    throw tf::Error(tf::ErrorKind::invalid_argument,
                    "--weights expects four comma-separated numbers");
  }
  tf::ScoreWeights w{values[0], values[1], values[2], values[3]};
  w.validate();
  return w;
}

std::string fmt_err(double v) {
  if (std::isinf(v)) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

void print_rank_table(const std::vector<tf::CandidateBuild>& builds) {
  std::printf("%4s  %-12s %10s %10s %10s %10s %12s\n", "rank", "parts",
              "e_shape", "e_scale", "e_ratio", "e_att", "e_const");
  for (std::size_t i = 0; i < builds.size(); ++i) {
    const auto& b = builds[i];
    std::string parts;
    for (std::size_t j = 0; j < b.part_ids.size(); ++j) {
      if (j) parts += "+";
      parts += b.part_ids[j];
    }
    std::printf("%4zu  %-12s %10s %10s %10s %10s %12s\n", i + 1, parts.c_str(),
                fmt_err(b.e_shape).c_str(), fmt_err(b.e_scale).c_str(),
                fmt_err(b.e_ratio).c_str(), fmt_err(b.e_att).c_str(),
                fmt_err(b.e_const).c_str());
  }
}

void print_attempt_table(const tf::AttemptLog& log) {
  std::printf("%8s %5s  %-12s %-9s %-26s %s\n", "attempt", "rank", "parts",
              "alignment", "location", "outcome");
  for (std::size_t i = 0; i < log.attempts.size(); ++i) {
    const auto& a = log.attempts[i];
    std::string parts;
    for (std::size_t j = 0; j < a.build_parts.size(); ++j) {
      if (j) parts += "+";
      parts += a.build_parts[j];
    }
    char loc[64];
    std::snprintf(loc, sizeof(loc), "(%.3f, %.3f, %.3f)", a.location.x(),
                  a.location.y(), a.location.z());
    std::printf("%8zu %5zu  %-12s %-9zu %-26s %s\n", i + 1, a.rank_index + 1,
                parts.c_str(), a.alignment_index, loc,
                tf::outcome_name(a.outcome));
  }
}

int cmd_fit(const std::string& cloud_path, const GlobalOptions& global) {
  const tf::PipelineConfig config = effective_config(global);
  const tf::PointCloud cloud = tf::load_ply(cloud_path);
  const tf::SqFitResult fit = tf::fit_superquadric(cloud, config.fit);
  tf::Json j = tf::sq_to_json(fit.params);
  j["residual"] = fit.residual;
  j["iterations"] = fit.iterations;
  j["converged"] = fit.converged;
  if (global.json) {
    std::printf("%s\n", j.dump(2).c_str());
  } else {
    std::printf("fit of %s (%zu points)\n", cloud_path.c_str(), cloud.size());
    std::printf("%s\n", j.dump(2).c_str());
  }
  return 0;
}

int cmd_segment(const std::string& scene_path, const std::string& out_dir,
                const GlobalOptions& global) {
  const tf::PipelineConfig config = effective_config(global);
  const tf::PointCloud scene = tf::load_ply(scene_path);
  const tf::SegmentedScene segmented =
      tf::segment_scene(scene, config.segmentation);

  std::filesystem::create_directories(out_dir);
  tf::Json part_files = tf::Json::array();
  for (std::size_t i = 0; i < segmented.parts.size(); ++i) {
    const std::string file = "part_" + std::to_string(i) + ".ply";
    tf::save_ply(segmented.parts[i], std::filesystem::path(out_dir) / file);
    part_files.push_back(file);
  }
  const tf::Json descriptor{
      {"plane",
       tf::Json{{"normal", tf::json_from_vec3(segmented.plane.normal)},
                {"offset", segmented.plane.offset}}},
      {"parts", part_files},
      {"residual_points", segmented.residual_points}};
  tf::write_json_file(descriptor,
                      std::filesystem::path(out_dir) / "scene.json");
  if (global.json) {
    std::printf("%s\n", descriptor.dump(2).c_str());
  } else {
    std::printf("%zu parts -> %s (residual points: %zu)\n",
                segmented.parts.size(), out_dir.c_str(),
                segmented.residual_points);
  }
  return 0;
}

int cmd_rank(const std::string& scenario_path, const std::string& weights_arg,
             const std::string& out_path, const GlobalOptions& global) {
  const tf::PipelineConfig config = effective_config(global);
  tf::Scenario scenario = tf::load_scenario(scenario_path);
  if (!weights_arg.empty()) scenario.weights = parse_weights(weights_arg);

  const tf::RankedScenario ranked = tf::run_rank(scenario, config);
  const tf::Json j = tf::builds_to_json(ranked.builds);
  if (!out_path.empty()) tf::write_json_file(j, out_path);
  if (global.json) {
    std::printf("%s\n", j.dump(2).c_str());
  } else {
    print_rank_table(ranked.builds);
    std::printf("\n%zu builds (fit %.2fs, scoring %.2fs)\n",
                ranked.builds.size(), ranked.fit_seconds,
                ranked.score_seconds);
  }
  return 0;
}

int cmd_simulate(const std::string& scenario_path, bool unknown_attachments,
                 const std::string& weights_arg, const GlobalOptions& global) {
  const tf::PipelineConfig config = effective_config(global);
  tf::Scenario scenario = tf::load_scenario(scenario_path);
  if (!weights_arg.empty()) scenario.weights = parse_weights(weights_arg);

  const tf::RankedScenario ranked =
      tf::run_rank(scenario, config, unknown_attachments);
  const tf::AttemptLog log = tf::run_simulate(ranked, unknown_attachments);

  if (global.json) {
    tf::Json j = tf::attempt_log_to_json(log);
    j["ranking"] = tf::builds_to_json(ranked.builds);
    std::printf("%s\n", j.dump(2).c_str());
  } else {
    print_rank_table(ranked.builds);
    std::printf("\n");
    print_attempt_table(log);
    if (log.solution_rank) {
      std::printf("\nsolution at rank %zu after %zu attempts\n",
                  *log.solution_rank + 1, log.total_attempts);
    } else {
      std::printf("\nno solution found after %zu attempts\n",
                  log.total_attempts);
    }
  }
  return 0;
}

int cmd_gen(const std::string& preset, const std::string& spec_path,
            const std::string& out_dir, const GlobalOptions& global) {
  tf::GenSpec spec;
  if (!preset.empty()) {
    spec = tf::preset_by_name(preset);
  } else if (!spec_path.empty()) {
    spec = tf::load_gen_spec(spec_path);
  } else {
    throw tf::Error(tf::ErrorKind::invalid_argument,
                    "gen needs --preset or --spec");
  }
  if (global.seed >= 0) spec.seed = static_cast<std::uint64_t>(global.seed);
  const auto scenario_path = tf::generate_scenario(spec, out_dir);
  if (global.json) {
    std::printf("%s\n",
                tf::Json{{"scenario", scenario_path.string()}}.dump().c_str());
  } else {
    std::printf("wrote %s\n", scenario_path.string().c_str());
  }
  return 0;
}

int cmd_classify(const std::string& file, const GlobalOptions& global) {
  const tf::Json j = tf::read_json_file(file);
  tf::JsonObject obj(j, std::filesystem::path(file).filename().string());

  auto solution_from = [](const tf::Json& sj, const std::string& context,
                          bool with_provenance) {
    tf::JsonObject s(sj, context);
    tf::AffordanceSolution sol;
    sol.object = s.string("object");
    sol.action = s.string("action");
    sol.effect = s.string("effect");
    if (with_provenance) {
      const std::string p = s.string_or("provenance", "existing");
      if (p == "existing") {
        sol.provenance = tf::Provenance::existing;
      } else if (p == "constructed") {
        sol.provenance = tf::Provenance::constructed;
      } else {
        throw tf::Error(tf::ErrorKind::schema,
                        context + ".provenance: existing or constructed");
      }
    }
    s.finish();
    return sol;
  };

  const tf::AffordanceSolution reference =
      solution_from(obj.require("reference"), "reference", false);
  const tf::AffordanceSolution candidate =
      solution_from(obj.require("candidate"), "candidate", true);

  tf::JsonObject g(obj.require("goal"), "goal");
  tf::TaskGoal goal;
  goal.predicate = g.string("predicate");
  if (const tf::Json* args = g.optional("arguments")) {
    for (const auto& a : *args) goal.arguments.push_back(a.get<std::string>());
  }
  for (const auto& e : g.require("satisfied_by")) {
    goal.satisfied_by.insert(e.get<std::string>());
  }
  g.finish();
  obj.finish();

  const tf::Classification result =
      tf::classify_equivalence(reference, candidate, goal);
  const int level_number = result.level == tf::EquivalenceLevel::object ? 1
                           : result.level == tf::EquivalenceLevel::object_action
                               ? 2
                               : 3;
  if (global.json) {
    std::printf("%s\n", tf::Json{{"level", level_number},
                                 {"equivalence", tf::level_name(result.level)},
                                 {"variant", tf::variant_name(result.variant)}}
                            .dump()
                            .c_str());
  } else {
    std::printf("level %d (%s equivalence), %s\n", level_number,
                tf::level_name(result.level), tf::variant_name(result.variant));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"toolforge: construct substitute tools from candidate parts"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  GlobalOptions global;
  app.add_option("--config", global.config_path, "pipeline config JSON");
  app.add_option("--seed", global.seed, "override the configured seed");
  app.add_flag("--json", global.json, "machine-readable output only");

  std::string cloud_path, scene_path, out_dir, scenario_path, weights_arg;
  std::string preset, spec_path, out_path, classify_file;
  bool unknown_attachments = false;

  auto* fit = app.add_subcommand("fit", "fit a superquadric to a PLY cloud");
  fit->add_option("cloud", cloud_path, "ASCII PLY file")->required();

  auto* segment =
      app.add_subcommand("segment", "plane removal + clustering of a scene");
  segment->add_option("scene", scene_path, "ASCII PLY file")->required();
  segment->add_option("--out", out_dir, "output directory")->required();

  auto* rank = app.add_subcommand("rank", "rank all part combinations");
  rank->add_option("scenario", scenario_path, "scenario JSON")->required();
  rank->add_option("--weights", weights_arg, "four comma-separated weights");
  rank->add_option("--out", out_path, "write ranked builds JSON here");

  auto* simulate =
      app.add_subcommand("simulate", "rank, then replay build-and-validate");
  simulate->add_option("scenario", scenario_path, "scenario JSON")->required();
  simulate->add_flag("--unknown-attachments", unknown_attachments,
                     "ignore the library and explore candidate locations");
  simulate->add_option("--weights", weights_arg,
                       "four comma-separated weights");

  auto* gen = app.add_subcommand("gen", "generate a synthetic scenario");
  gen->add_option("--preset", preset, "hammer, spoon or spatula");
  gen->add_option("--spec", spec_path, "generator spec JSON");
  gen->add_option("out_dir", out_dir, "output directory")->required();

  auto* classify =
      app.add_subcommand("classify", "classify an improvised solution");
  classify->add_option("file", classify_file, "classification scenario JSON")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (fit->parsed()) return cmd_fit(cloud_path, global);
    if (segment->parsed()) return cmd_segment(scene_path, out_dir, global);
    if (rank->parsed())
      return cmd_rank(scenario_path, weights_arg, out_path, global);
    if (simulate->parsed())
      return cmd_simulate(scenario_path, unknown_attachments, weights_arg,
                          global);
    if (gen->parsed()) return cmd_gen(preset, spec_path, out_dir, global);
    if (classify->parsed()) return cmd_classify(classify_file, global);
  } catch (const tf::Error& e) {
    const tf::Json err{{"error", {{"kind", tf::error_kind_name(e.kind())},
                                  {"message", e.what()}}}};
    std::fprintf(stderr, "%s\n", err.dump().c_str());
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "{\"error\":{\"kind\":\"internal\",\"message\":\"%s\"}}\n",
                 e.what());
    return 2;
  }
  return 0;
}
