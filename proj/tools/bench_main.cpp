#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "kcbs/montecarlo.hpp"
#include "kcbs/oracle.hpp"
#include "kcbs/rng.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::int64_t total_clicks(const kcbs::montecarlo::StageCounts& sc) {
  std::int64_t n = 0;
  for (const auto& rc : sc.runs) {
    n += rc.clicks[0] + rc.clicks[1] + rc.clicks[2];
  }
  return n;
}

}  // namespace

int main(int argc, char** argv) {
  double scale = 1.0;
  if (argc > 1) {
    scale = std::strtod(argv[1], nullptr);
    if (!(scale > 0.0)) {
      std::fprintf(stderr, "usage: %s [workload-scale]\n", argv[0]);
      return 1;
    }
  }

  kcbs::montecarlo::ExperimentConfig cfg;
  cfg.photons_per_run = static_cast<int>(200000 * scale);
  cfg.runs = 32;
  cfg.rng_seed = 99;
  cfg.detector_efficiency = {0.8, 0.6, 0.7};
  cfg.pre_detector_loss = 0.05;
  cfg.accidental_rate = 0.002;

#ifdef _OPENMP
  std::printf("threads            %d\n", omp_get_max_threads());
#else
  std::printf("threads            1 (built without OpenMP)\n");
#endif
  std::printf("workload           stage 3, %d photons x %d runs\n", cfg.photons_per_run, cfg.runs);

  auto t0 = Clock::now();
  const auto serial = kcbs::montecarlo::simulate_stage_reference(3, cfg);
  const double t_serial = seconds_since(t0);

  t0 = Clock::now();
  const auto parallel = kcbs::montecarlo::simulate_stage(3, cfg);
  const double t_parallel = seconds_since(t0);

  if (total_clicks(serial) != total_clicks(parallel)) {
    std::fprintf(stderr, "parallel and serial counts disagree, aborting\n");
    return 2;
  }

  std::printf("serial sampling    %8.1f ms  (%.1f Mphotons/s)\n", t_serial * 1e3,
              static_cast<double>(cfg.photons_per_run) * cfg.runs / t_serial / 1e6);
  std::printf("parallel sampling  %8.1f ms  (%.1f Mphotons/s)\n", t_parallel * 1e3,
              static_cast<double>(cfg.photons_per_run) * cfg.runs / t_parallel / 1e6);
  std::printf("speedup            %8.2fx\n", t_serial / t_parallel);

  const int queries = static_cast<int>(2000 * scale);
  kcbs::Rng rng(4242);
  int feasible = 0;
  t0 = Clock::now();
  for (int q = 0; q < queries; ++q) {
    std::array<double, 5> c;
    for (double& x : c) x = 2.0 * rng.uniform() - 1.0;
    if (kcbs::oracle::jpd_feasible(c).feasible) ++feasible;
  }
  const double t_oracle = seconds_since(t0);
  std::printf("oracle throughput  %8.1f queries/s  (%d of %d feasible)\n",
              queries / t_oracle, feasible, queries);
  return 0;
}
