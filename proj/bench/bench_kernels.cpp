// Times the parallel kernels against their serial reference implementations
// on representative workloads and reports the speedup.

#include <chrono>
#include <cstdio>
#include <functional>

#include "toolforge/generator.hpp"
#include "toolforge/parallel.hpp"
#include "toolforge/pipeline.hpp"
#include "toolforge/scoring.hpp"
#include "toolforge/superquadric.hpp"

namespace tf = toolforge;

namespace {

double time_of(const std::function<void()>& fn, int repeats = 3) {
  double best = 1e300;
  for (int i = 0; i < repeats; ++i) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    const double s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (s < best) best = s;
  }
  return best;
}

void report(const char* name, double serial_s, double parallel_s) {
  std::printf("%-28s serial %9.4fs   parallel %9.4fs   speedup %.2fx\n", name,
              serial_s, parallel_s, serial_s / parallel_s);
}

}  // namespace

int main() {
  std::printf("threads: %d\n\n", tf::max_threads());

  tf::SuperquadricParams sq;
  sq.scale = {0.15, 0.05, 0.03};
  sq.shape = {0.4, 1.2};
  sq.taper = {0.2, -0.1};
  sq.euler = {0.3, 0.7, -0.2};
  sq.center = {0.05, -0.02, 0.01};

  // fit_cost over a large cloud
  {
    const tf::PointCloud cloud = tf::sample_surface(sq, 400000, 0.002, 7);
    volatile double sink = 0.0;
    const double serial_s =
        time_of([&] { sink = tf::fit_cost_serial(cloud, sq); });
    const double parallel_s = time_of([&] { sink = tf::fit_cost(cloud, sq); });
    (void)sink;
    report("fit_cost (400k points)", serial_s, parallel_s);
  }

  // closest_pairs between two dense clouds
  {
    tf::SuperquadricParams other = sq;
    other.center += Eigen::Vector3d(0.2, 0.0, 0.0);
    const tf::PointCloud a = tf::sample_surface(sq, 3000, 0.0, 11);
    const tf::PointCloud b = tf::sample_surface(other, 3000, 0.0, 13);
    volatile double sink = 0.0;
    const double serial_s = time_of(
        [&] { sink = tf::closest_pairs_serial(a, b, 20).front().distance; });
    const double parallel_s =
        time_of([&] { sink = tf::closest_pairs(a, b, 20).front().distance; });
    (void)sink;
    report("closest_pairs (3k x 3k)", serial_s, parallel_s);
  }

  // whole-tuple scoring on the hammer preset (post-fit stage)
  {
    const auto dir = std::filesystem::temp_directory_path() / "toolforge_bench";
    const auto scenario_path = tf::generate_scenario(tf::preset_hammer(), dir);
    const tf::Scenario scenario = tf::load_scenario(scenario_path);
    tf::PipelineConfig config;

    config.parallel = true;
    tf::RankedScenario ranked = tf::run_rank(scenario, config);

    tf::RankOptions serial_opts;
    serial_opts.parallel = false;
    tf::RankOptions parallel_opts;
    parallel_opts.parallel = true;

    const double serial_s = time_of([&] {
      tf::rank_builds(ranked.reference, ranked.parts, ranked.weights,
                      ranked.library ? &*ranked.library : nullptr, serial_opts);
    }, 2);
    const double parallel_s = time_of([&] {
      tf::rank_builds(ranked.reference, ranked.parts, ranked.weights,
                      ranked.library ? &*ranked.library : nullptr,
                      parallel_opts);
    }, 2);
    report("rank_builds (hammer, 12)", serial_s, parallel_s);
  }

  return 0;
}
