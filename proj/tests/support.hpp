// Shared helpers for randomized tests: an independent LRU oracle, a timing-
// free replay harness, and small random instances with random geometry,
// topology and streams, sized so the naive reference can keep up.
#pragma once

#include <cassert>
#include <random>
#include <vector>

#include "icsim/engine.hpp"

namespace icsim_test {

// Independent LRU oracle: per-set move-to-front list of block tags.
struct LruOracle {
  explicit LruOracle(const icsim::CacheConfig& c) : cfg(c), sets(c.sets) {}

  bool access(icsim::addr_t a) {
    const icsim::addr_t block = a / cfg.block_size;
    auto& list = sets[std::size_t(block % cfg.sets)];
    const icsim::addr_t tag = block / cfg.sets;
    for (std::size_t i = 0; i < list.size(); ++i) {
      if (list[i] == tag) {
        list.erase(list.begin() + std::ptrdiff_t(i));
        list.insert(list.begin(), tag);
        return true;
      }
    }
    list.insert(list.begin(), tag);
    if (list.size() > cfg.ways) list.pop_back();
    return false;
  }

  icsim::CacheConfig cfg;
  std::vector<std::vector<icsim::addr_t>> sets;
};

// Replays addresses with immediate (zero-time) fills; returns per-access
// hit flags. Exercises lookup + LRU without the engine's timing.
inline std::vector<bool> lru_replay(icsim::Cache& cache,
                                    const std::vector<icsim::addr_t>& addrs) {
  using namespace icsim;
  std::vector<bool> hits;
  cycle_t now = 0;
  for (addr_t a : addrs) {
    const AddressParts parts = decompose(a, cache.config());
    const ProbeResult pr = cache.probe(parts);
    if (pr.kind == Lookup::hit) {
      cache.touch(parts.set_index, pr.way);
      hits.push_back(true);
    } else {
      assert(pr.kind == Lookup::miss);
      const FillResult fr = cache.begin_fill(parts, now);
      assert(fr.started);
      cache.complete_fills(fr.ready_cycle);
      hits.push_back(false);
    }
    ++now;
  }
  return hits;
}

struct Instance {
  icsim::EngineConfig config;
  std::vector<icsim::FetchStream> streams;
};

inline icsim::Topology random_topology(std::mt19937_64& rng, std::uint32_t cores) {
  using icsim::Topology;
  if (rng() % 2 == 0) {
    std::vector<std::uint32_t> divisors;
    for (std::uint32_t d = 1; d <= cores; ++d)
      if (cores % d == 0) divisors.push_back(d);
    return Topology::uniform(cores, divisors[rng() % divisors.size()]);
  }
  // random partition: label each core, keep labels in first-appearance order
  const std::uint32_t k = 1 + std::uint32_t(rng() % cores);
  std::vector<std::vector<std::uint32_t>> groups;
  std::vector<int> slot(k, -1);
  for (std::uint32_t c = 0; c < cores; ++c) {
    const std::uint32_t label = std::uint32_t(rng() % k);
    if (slot[label] < 0) {
      slot[label] = int(groups.size());
      groups.emplace_back();
    }
    groups[std::size_t(slot[label])].push_back(c);
  }
  return Topology::asymmetric(std::move(groups));
}

inline Instance random_instance(std::mt19937_64& rng, std::size_t max_fetches_per_core = 256) {
  using namespace icsim;
  Instance inst;
  CacheConfig& cc = inst.config.cache;
  cc.sets = 1u << (rng() % 5);            // 1..16
  cc.ways = 1u << (rng() % 5);            // 1..16
  cc.block_size = 1u << (4 + rng() % 4);  // 16..128
  cc.ports = 1u << (rng() % 3);           // 1, 2, 4
  cc.banks = 1u << (rng() % 3);
  cc.mshr_entries = 1u << (rng() % 3);
  cc.miss_latency = (rng() % 2 == 0) ? 1 : 10;
  cc.hit_latency = std::uint32_t(rng() % 3);

  const std::uint32_t cores = 1 + std::uint32_t(rng() % 4);
  inst.config.topology = random_topology(rng, cores);

  // keep the touched region small enough to force conflicts
  const std::uint64_t region_blocks = 1 + rng() % (2ull * cc.sets * cc.ways);
  inst.streams.resize(cores);
  for (std::uint32_t c = 0; c < cores; ++c) {
    inst.streams[c].core_id = c;
    const std::size_t len = rng() % (max_fetches_per_core + 1);
    inst.streams[c].addresses.reserve(len);
    for (std::size_t i = 0; i < len; ++i)
      inst.streams[c].addresses.push_back((rng() % region_blocks) * cc.block_size +
                                          rng() % cc.block_size);
  }
  return inst;
}

}  // namespace icsim_test
