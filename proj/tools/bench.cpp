// Benchmarks the incremental engine against the naive reference interpreter
// and a serial sweep against the threaded one. Not a test; numbers only.

#include <chrono>
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "icsim/engine.hpp"
#include "icsim/metrics.hpp"

namespace {

using namespace icsim;
using clk = std::chrono::steady_clock;

double seconds_since(clk::time_point t0) {
  return std::chrono::duration<double>(clk::now() - t0).count();
}

}  // namespace

int main() {
  // Small instances both engines can run (the reference is fetch-capped):
  // one contention-bound on a shared cache, one miss-bound on private
  // caches where the engine's idle-cycle skipping pays off.
  SyntheticSpec small;
  small.num_cores = 4;
  small.warps_per_core = 16;
  small.footprint_instrs = 448;
  small.side_path_len = 64;
  small.divergence_prob = 0.25;
  small.loop_iterations = 1;
  small.seed = 7;
  const std::vector<FetchStream> small_streams = generate(small);

  struct Case {
    const char* name;
    EngineConfig cfg;
  };
  EngineConfig shared_cfg;
  shared_cfg.cache.sets = 16;
  shared_cfg.cache.ways = 8;
  shared_cfg.topology = Topology::uniform(small.num_cores, small.num_cores);
  EngineConfig private_cfg = shared_cfg;
  private_cfg.cache.sets = 2;
  private_cfg.cache.ways = 2;
  private_cfg.cache.miss_latency = 40;
  private_cfg.topology = Topology::uniform(small.num_cores, 1);

  for (const Case& c : {Case{"shared, contended", shared_cfg},
                        Case{"private, miss-bound", private_cfg}}) {
    run(c.cfg, small_streams);  // warm up
    auto t1 = clk::now();
    const SimStats fast = run(c.cfg, small_streams);
    const double t_fast = seconds_since(t1);

    t1 = clk::now();
    const SimStats ref = reference_run(c.cfg, small_streams);
    const double t_ref = seconds_since(t1);

    std::printf("engine vs reference, %s (%llu fetches, %llu cycles)\n", c.name,
                (unsigned long long)fast.accesses, (unsigned long long)fast.total_cycles);
    std::printf("  engine     %8.4f s\n", t_fast);
    std::printf("  reference  %8.4f s  (%.1fx slower)\n", t_ref,
                t_fast > 0 ? t_ref / t_fast : 0.0);
    std::printf("  stats match: %s\n", fast == ref ? "yes" : "NO");
  }
  auto t0 = clk::now();

  // Sweep workload big enough for the thread pool to matter.
  SyntheticSpec big;
  big.num_cores = 16;
  big.warps_per_core = 48;
  big.footprint_instrs = 448;
  big.side_path_len = 64;
  big.divergence_prob = 0.25;
  big.loop_iterations = 4;
  big.seed = 7;
  const std::vector<FetchStream> big_streams = generate(big);
  const std::vector<std::uint32_t> degrees{1, 2, 4, 8, 16};

  EngineConfig base;
  base.topology = Topology::uniform(big.num_cores, 1);

#ifdef _OPENMP
  const int max_threads = omp_get_max_threads();
  omp_set_num_threads(1);
  t0 = clk::now();
  const std::vector<SweepRow> serial_rows = sweep_method2(base, big_streams, degrees);
  const double t_serial = seconds_since(t0);

  omp_set_num_threads(max_threads);
  t0 = clk::now();
  const std::vector<SweepRow> parallel_rows = sweep_method2(base, big_streams, degrees);
  const double t_parallel = seconds_since(t0);

  std::printf("method-2 sweep, %zu degrees, %llu fetches per run\n", degrees.size(),
              (unsigned long long)serial_rows[0].accesses);
  std::printf("  1 thread   %8.4f s\n", t_serial);
  std::printf("  %d threads  %8.4f s  (%.2fx speedup)\n", max_threads, t_parallel,
              t_parallel > 0 ? t_serial / t_parallel : 0.0);
  std::printf("  CSV match: %s\n",
              to_csv(serial_rows) == to_csv(parallel_rows) ? "yes" : "NO");
#else
  t0 = clk::now();
  const std::vector<SweepRow> rows = sweep_method2(base, big_streams, degrees);
  std::printf("method-2 sweep (no OpenMP): %8.4f s, %zu rows\n", seconds_since(t0),
              rows.size());
#endif
  return 0;
}
