#pragma once

#include <cstdint>
#include <vector>

#include "icsim/cache.hpp"
#include "icsim/topology.hpp"
#include "icsim/types.hpp"
#include "icsim/workload.hpp"

namespace icsim {

struct EngineConfig {
  CacheConfig cache;
  Topology topology;
  cycle_t max_cycles = 0;  // 0 = generous automatic cap
};

// One retired fetch. "Stalled" means the fetch took longer than an
// uncontended hit would have, whatever the reason (miss, port loss,
// MSHR full, waiting on someone else's fill).
struct AccessRecord {
  std::uint32_t core = 0;
  addr_t address = 0;
  cycle_t issue_cycle = 0;
  cycle_t complete_cycle = 0;
  Lookup classification = Lookup::hit;
  bool stalled = false;

  bool operator==(const AccessRecord&) const = default;
};

struct CoreCounters {
  std::uint64_t accesses = 0;
  std::uint64_t hits = 0;
  std::uint64_t misses = 0;
  std::uint64_t pending_hits = 0;
  std::uint64_t stalled_accesses = 0;
  cycle_t cycles = 0;  // cycle count until this core retired its last fetch

  bool operator==(const CoreCounters&) const = default;
};

struct SimStats {
  std::uint64_t accesses = 0;
  std::uint64_t hits = 0;
  std::uint64_t misses = 0;
  std::uint64_t pending_hits = 0;
  std::uint64_t stalled_accesses = 0;
  cycle_t total_cycles = 0;
  std::vector<CoreCounters> per_core;

  double miss_rate() const { return accesses ? double(misses) / double(accesses) : 0.0; }
  double stall_rate() const {
    return accesses ? double(stalled_accesses) / double(accesses) : 0.0;
  }

  bool operator==(const SimStats&) const = default;
};

// Cycle-stepped replay of per-core fetch streams against shared, banked,
// multi-ported caches. Each cycle, in order:
//   1. fills that landed become valid lines;
//   2. cores whose data is ready retire their fetch;
//   3. idle cores with stream left issue their next fetch;
//   4. per cache, per bank, requests are served in rotating-priority order,
//      at most `ports` per bank; losers retry next cycle.
// A core issues at most one fetch at a time and a stalled core stops
// consuming its stream, so traces stay topology-independent. Entirely
// deterministic; single-threaded per instance.
class Engine {
 public:
  Engine(EngineConfig config, std::vector<FetchStream> streams);

  // Completed records are appended to *log as fetches retire. The pointer
  // must stay valid for the engine's lifetime.
  void set_record_log(std::vector<AccessRecord>* log) { log_ = log; }

  bool finished() const { return retired_ == total_fetches_; }
  cycle_t now() const { return now_; }

  // Advances the simulation by exactly one cycle.
  void step();

  // Runs to completion, skipping over cycles where every core is waiting.
  SimStats run_all();

  // Counters so far; final once finished() is true.
  SimStats stats() const;

  std::size_t num_caches() const { return caches_.size(); }
  Cache& cache(std::size_t i) { return caches_[i]; }

 private:
  enum class CoreState : std::uint8_t {
    idle,       // between fetches
    wants_port, // has a fetch and needs to win a bank port
    fill_wait,  // own miss in flight; rejoins arbitration at resume
    wait_done,  // data arrives at resume (coalesced fill or hit latency)
    drained     // stream fully retired
  };

  struct CoreFE {
    CoreState state = CoreState::idle;
    std::size_t cursor = 0;
    addr_t addr = 0;
    cycle_t issue = 0;
    cycle_t resume = 0;
    Lookup cls = Lookup::hit;
    bool cls_set = false;
    CoreCounters ctr;
  };

  void retire(std::uint32_t core, cycle_t complete);
  void service(std::uint32_t core, const AddressParts& parts, Cache& cache);
  cycle_t next_actionable() const;

  EngineConfig cfg_;
  std::vector<FetchStream> streams_;
  std::vector<CoreFE> cores_;
  std::vector<Cache> caches_;
  std::vector<std::vector<std::uint32_t>> requesters_;  // scratch, per cache
  std::vector<std::uint32_t> served_per_bank_;          // scratch
  std::vector<AccessRecord>* log_ = nullptr;
  cycle_t now_ = 0;
  cycle_t cap_ = 0;
  std::uint64_t total_fetches_ = 0;
  std::uint64_t retired_ = 0;
};

// Convenience wrapper: build an engine, run it, return the stats.
SimStats run(const EngineConfig& config, const std::vector<FetchStream>& streams,
             std::vector<AccessRecord>* log = nullptr);

// Deliberately naive interpreter with the same contract as run(): re-scans
// every core and every line each cycle, keeps per-set recency lists instead
// of stamps, and never skips cycles. The testing oracle for the engine;
// capped at 100k total fetches.
SimStats reference_run(const EngineConfig& config, const std::vector<FetchStream>& streams);

}  // namespace icsim
