#include "toolforge/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>

#include "toolforge/error.hpp"
#include "toolforge/parallel.hpp"

namespace toolforge {

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

/// parallel_for that transports the first exception out of the loop.
template <typename Fn>
void parallel_for_checked(std::size_t n, bool parallel, Fn&& fn) {
  if (!parallel) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::exception_ptr error;
  std::mutex error_mutex;
  parallel_for(n, [&](std::size_t i) {
    try {
      fn(i);
    } catch (...) {
      const std::lock_guard<std::mutex> lock(error_mutex);
      if (!error) error = std::current_exception();
    }
  });
  if (error) std::rethrow_exception(error);
}

}  // namespace

RankedScenario run_rank(const Scenario& scenario, const PipelineConfig& config,
                        bool ignore_library) {
  RankedScenario out;

  const auto fit_start = std::chrono::steady_clock::now();

  const std::vector<PointCloud> ref_clouds = load_reference_components(
      scenario.reference_files, scenario.real_world_scale);
  out.reference.components.resize(ref_clouds.size());

  std::vector<PointCloud> part_clouds(scenario.parts.size());
  for (std::size_t i = 0; i < scenario.parts.size(); ++i) {
    part_clouds[i] = load_ply(scenario.parts[i].file);
  }

  // Fit every cloud independently; restarts stay serial inside each fit.
  const std::size_t total = ref_clouds.size() + part_clouds.size();
  out.parts.resize(part_clouds.size());
  parallel_for_checked(total, config.parallel, [&](std::size_t i) {
    if (i < ref_clouds.size()) {
      const SqFitResult fit = fit_superquadric(ref_clouds[i], config.fit);
      out.reference.components[i] = {ref_clouds[i], fit.params};
    } else {
      const std::size_t p = i - ref_clouds.size();
      const SqFitResult fit = fit_superquadric(part_clouds[p], config.fit);
      CandidatePart part;
      part.id = scenario.parts[p].id;
      part.cloud = part_clouds[p];
      part.sq = fit.params;
      if (scenario.library) {
        if (const auto* points = scenario.library->find(part.id)) {
          part.attachments = *points;
        }
      }
      out.parts[p] = std::move(part);
    }
  });
  out.fit_seconds = seconds_since(fit_start);

  out.weights = scenario.weights ? *scenario.weights : config.weights;
  if (!ignore_library) out.library = scenario.library;
  out.world = scenario.world;
  if (out.world && std::isnan(out.world->attach_radius)) {
    out.world->attach_radius = config.attach_radius;
  }

  RankOptions rank_options;
  rank_options.attachment.aggregate = config.att_aggregate;
  rank_options.parallel = config.parallel;

  const auto score_start = std::chrono::steady_clock::now();
  out.builds = rank_builds(out.reference, out.parts, out.weights,
                           out.library ? &*out.library : nullptr, rank_options);
  out.score_seconds = seconds_since(score_start);
  return out;
}

AttemptLog run_simulate(const RankedScenario& ranked, bool unknown_attachments) {
  if (!ranked.world) {
    throw Error(ErrorKind::invalid_argument,
                "scenario has no world model to simulate against");
  }
  return unknown_attachments
             ? simulate_unknown(ranked.builds, ranked.parts, *ranked.world)
             : simulate_known(ranked.builds, ranked.parts, *ranked.world);
}

}  // namespace toolforge
