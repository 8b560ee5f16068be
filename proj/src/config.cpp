#include "toolforge/config.hpp"

#include "toolforge/error.hpp"

namespace toolforge {

const char* att_aggregate_name(AttAggregate mode) {
  switch (mode) {
    case AttAggregate::sum: return "sum";
    case AttAggregate::mean: return "mean";
    case AttAggregate::min: return "min";
  }
  return "sum";
}

AttAggregate att_aggregate_from_name(const std::string& name,
                                     const std::string& context) {
  if (name == "sum") return AttAggregate::sum;
  if (name == "mean") return AttAggregate::mean;
  if (name == "min") return AttAggregate::min;
  throw Error(ErrorKind::schema,
              context + ": att_aggregate must be sum, mean or min");
}

PipelineConfig config_from_json(const Json& j, const std::string& context) {
  PipelineConfig config;
  JsonObject obj(j, context);

  if (const Json* w = obj.optional("weights")) {
    config.weights = weights_from_json(*w, context + ".weights");
  }
  if (const Json* fit = obj.optional("fit")) {
    JsonObject f(*fit, context + ".fit");
    config.fit.restarts = static_cast<int>(f.integer_or("restarts", 3));
    config.fit.max_iterations =
        static_cast<int>(f.integer_or("max_iterations", 150));
    config.fit.ftol = f.number_or("ftol", config.fit.ftol);
    config.fit.xtol = f.number_or("xtol", config.fit.xtol);
    config.fit.gtol = f.number_or("gtol", config.fit.gtol);
    f.finish();
    if (config.fit.restarts < 1 || config.fit.max_iterations < 1) {
      throw Error(ErrorKind::schema,
                  context + ".fit: restarts and max_iterations must be >= 1");
    }
  }
  if (const Json* seg = obj.optional("segmentation")) {
    JsonObject s(*seg, context + ".segmentation");
    config.segmentation.plane_distance =
        s.number_or("plane_distance", config.segmentation.plane_distance);
    config.segmentation.ransac_iterations = static_cast<int>(
        s.integer_or("ransac_iterations", config.segmentation.ransac_iterations));
    config.segmentation.cluster_tolerance =
        s.number_or("cluster_tolerance", config.segmentation.cluster_tolerance);
    config.segmentation.min_cluster_size = static_cast<std::size_t>(
        s.integer_or("min_cluster_size",
                     static_cast<std::int64_t>(config.segmentation.min_cluster_size)));
    s.finish();
    if (config.segmentation.plane_distance <= 0.0 ||
        config.segmentation.cluster_tolerance <= 0.0) {
      throw Error(ErrorKind::schema,
                  context + ".segmentation: thresholds must be > 0");
    }
  }
  config.att_aggregate = att_aggregate_from_name(
      obj.string_or("att_aggregate", "sum"), context);
  config.attach_radius = obj.number_or("attach_radius", config.attach_radius);
  if (config.attach_radius <= 0.0) {
    throw Error(ErrorKind::schema, context + ": attach_radius must be > 0");
  }
  config.seed = static_cast<std::uint64_t>(obj.integer_or("seed", 0));
  config.parallel = obj.boolean_or("parallel", true);
  obj.finish();

  config.segmentation.seed = config.seed;
  return config;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  return config_from_json(read_json_file(path), path.filename().string());
}

Json config_to_json(const PipelineConfig& config) {
  return Json{
      {"weights", weights_to_json(config.weights)},
      {"fit",
       Json{{"restarts", config.fit.restarts},
            {"max_iterations", config.fit.max_iterations},
            {"ftol", config.fit.ftol},
            {"xtol", config.fit.xtol},
            {"gtol", config.fit.gtol}}},
      {"segmentation",
       Json{{"plane_distance", config.segmentation.plane_distance},
            {"ransac_iterations", config.segmentation.ransac_iterations},
            {"cluster_tolerance", config.segmentation.cluster_tolerance},
            {"min_cluster_size", config.segmentation.min_cluster_size}}},
      {"att_aggregate", att_aggregate_name(config.att_aggregate)},
      {"attach_radius", config.attach_radius},
      {"seed", config.seed},
      {"parallel", config.parallel}};
}

}  // namespace toolforge
