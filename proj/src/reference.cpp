// Naive interpreter for the engine contract. Everything is recomputed from
// scratch every cycle with linear scans; recency is an explicit per-set
// MRU-first list rather than stamps. Slow on purpose; used as the testing
// oracle against the incremental engine.

#include <algorithm>
#include <cstdint>
#include <vector>

#include "icsim/engine.hpp"

namespace icsim {

namespace {

struct RLine {
  addr_t tag = 0;
  bool valid = false;
  bool reserved = false;
};

struct RFill {
  addr_t tag = 0;
  std::uint32_t set = 0;
  std::uint32_t way = 0;
  cycle_t ready = 0;
};

struct RCache {
  std::vector<RLine> lines;                       // sets * ways
  std::vector<std::vector<std::uint32_t>> mru;    // per set, most recent first
  std::vector<RFill> fills;
};

enum RState { r_idle, r_port, r_fill, r_wait, r_done };

struct RCore {
  RState state = r_idle;
  std::size_t cursor = 0;
  addr_t addr = 0;
  cycle_t issue = 0;
  cycle_t resume = 0;
  int cls = -1;  // 0 hit, 1 miss, 2 pending_hit
  CoreCounters ctr;
};

void mru_touch(std::vector<std::uint32_t>& order, std::uint32_t way) {
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (order[i] == way) {
      order.erase(order.begin() + std::ptrdiff_t(i));
      break;
    }
  }
  order.insert(order.begin(), way);
}

}  // namespace

SimStats reference_run(const EngineConfig& config, const std::vector<FetchStream>& streams) {
  const CacheConfig& cc = config.cache;
  cc.validate();
  if (streams.empty()) throw config_error("no fetch streams given");
  if (streams.size() != config.topology.num_cores())
    throw config_error("got " + std::to_string(streams.size()) + " streams for " +
                       std::to_string(config.topology.num_cores()) + " cores");
  std::uint64_t total = 0;
  for (const FetchStream& s : streams) {
    for (addr_t a : s.addresses)
      if (cc.address_bits < 64 && (a >> cc.address_bits) != 0)
        throw config_error("trace address exceeds address_bits");
    total += s.addresses.size();
  }
  if (total > 100000) throw config_error("reference_run is capped at 100000 fetches");

  const std::uint32_t n = config.topology.num_cores();
  std::vector<RCore> cores(n);
  std::vector<RCache> caches(config.topology.num_caches());
  for (RCache& c : caches) {
    c.lines.resize(std::size_t(cc.sets) * cc.ways);
    c.mru.resize(cc.sets);
  }

  std::uint64_t retired = 0;
  cycle_t now = 0;
  const cycle_t cap = config.max_cycles
                          ? config.max_cycles
                          : 1024 + total * (std::uint64_t(cc.miss_latency) + cc.hit_latency + 4) *
                                       (std::uint64_t(n) + 4);

  while (retired < total) {
    if (now >= cap) throw engine_error("reference_run exceeded the cycle cap");

    // 1. land fills, oldest first
    for (RCache& cache : caches) {
      std::vector<RFill> still;
      for (const RFill& f : cache.fills) {
        if (f.ready <= now) {
          RLine& l = cache.lines[std::size_t(f.set) * cc.ways + f.way];
          l.tag = f.tag;
          l.valid = true;
          l.reserved = false;
          mru_touch(cache.mru[f.set], f.way);
        } else {
          still.push_back(f);
        }
      }
      cache.fills = still;
    }

    // 2. retire ready waiters
    for (std::uint32_t c = 0; c < n; ++c) {
      RCore& core = cores[c];
      if (core.state == r_wait && core.resume <= now) {
        core.ctr.accesses++;
        if (core.cls == 0) core.ctr.hits++;
        else if (core.cls == 1) core.ctr.misses++;
        else core.ctr.pending_hits++;
        if (core.resume - core.issue > cc.hit_latency) core.ctr.stalled_accesses++;
        core.ctr.cycles = core.resume + 1;
        retired++;
        core.state = core.cursor == streams[c].addresses.size() ? r_done : r_idle;
      }
    }

    // 3. issue
    for (std::uint32_t c = 0; c < n; ++c) {
      RCore& core = cores[c];
      if (core.state == r_idle && core.cursor < streams[c].addresses.size()) {
        core.addr = streams[c].addresses[core.cursor++];
        core.issue = now;
        core.cls = -1;
        core.state = r_port;
      }
    }

    // 4. per cache: gather requesters, order by rotated priority, serve
    for (std::size_t ci = 0; ci < caches.size(); ++ci) {
      RCache& cache = caches[ci];
      std::vector<std::uint32_t> reqs;
      for (std::uint32_t c = 0; c < n; ++c) {
        if (config.topology.cache_of(c) != ci) continue;
        if (cores[c].state == r_port ||
            (cores[c].state == r_fill && cores[c].resume <= now))
          reqs.push_back(c);
      }
      const std::uint32_t offset = std::uint32_t(now % n);
      std::sort(reqs.begin(), reqs.end(), [&](std::uint32_t a, std::uint32_t b) {
        return (a + n - offset) % n < (b + n - offset) % n;
      });
      std::vector<std::uint32_t> served(cc.banks, 0);
      for (std::uint32_t c : reqs) {
        RCore& core = cores[c];
        const addr_t block = core.addr / cc.block_size;
        const std::uint32_t set = std::uint32_t(block % cc.sets);
        const addr_t tag = block / cc.sets;
        const std::uint32_t bank = std::uint32_t(block % cc.banks);
        if (served[bank] >= cc.ports) continue;  // lost the bank this cycle
        served[bank]++;

        // probe: scan every line, then every pending fill
        int hit_way = -1;
        for (std::size_t i = 0; i < cache.lines.size(); ++i) {
          if (i / cc.ways == set && cache.lines[i].valid && cache.lines[i].tag == tag) {
            hit_way = int(i % cc.ways);
            break;
          }
        }

        // a core collecting its own completed fill retires no matter what
        // happened to the line since; touch only if still resident
        if (core.state == r_fill) {
          if (hit_way >= 0) mru_touch(cache.mru[set], std::uint32_t(hit_way));
          if (cc.hit_latency == 0) {
            core.ctr.accesses++;
            if (core.cls == 0) core.ctr.hits++;
            else if (core.cls == 1) core.ctr.misses++;
            else core.ctr.pending_hits++;
            if (now - core.issue > 0) core.ctr.stalled_accesses++;
            core.ctr.cycles = now + 1;
            retired++;
            core.state = core.cursor == streams[c].addresses.size() ? r_done : r_idle;
          } else {
            core.state = r_wait;
            core.resume = now + cc.hit_latency;
          }
          continue;
        }

        if (hit_way >= 0) {
          mru_touch(cache.mru[set], std::uint32_t(hit_way));
          if (core.cls < 0) core.cls = 0;
          if (cc.hit_latency == 0) {
            core.ctr.accesses++;
            if (core.cls == 0) core.ctr.hits++;
            else if (core.cls == 1) core.ctr.misses++;
            else core.ctr.pending_hits++;
            if (now - core.issue > 0) core.ctr.stalled_accesses++;
            core.ctr.cycles = now + 1;
            retired++;
            core.state = core.cursor == streams[c].addresses.size() ? r_done : r_idle;
          } else {
            core.state = r_wait;
            core.resume = now + cc.hit_latency;
          }
          continue;
        }

        bool coalesced = false;
        for (const RFill& f : cache.fills) {
          if (f.set == set && f.tag == tag) {
            if (core.cls < 0) core.cls = 2;
            core.state = r_wait;
            core.resume = std::max(f.ready, now + cc.hit_latency);
            coalesced = true;
            break;
          }
        }
        if (coalesced) continue;

        // miss: try to start a fill
        if (cache.fills.size() >= cc.mshr_entries) {
          core.state = r_port;  // retry next cycle
          continue;
        }
        int victim = -1;
        for (std::uint32_t w = 0; w < cc.ways; ++w) {
          const RLine& l = cache.lines[std::size_t(set) * cc.ways + w];
          if (!l.valid && !l.reserved) {
            victim = int(w);
            break;
          }
        }
        if (victim < 0 && !cache.mru[set].empty()) victim = int(cache.mru[set].back());
        if (victim < 0) {
          core.state = r_port;  // whole set reserved by in-flight fills
          continue;
        }
        RLine& vl = cache.lines[std::size_t(set) * cc.ways + victim];
        vl.valid = false;
        vl.reserved = true;
        for (std::size_t i = 0; i < cache.mru[set].size(); ++i) {
          if (cache.mru[set][i] == std::uint32_t(victim)) {
            cache.mru[set].erase(cache.mru[set].begin() + std::ptrdiff_t(i));
            break;
          }
        }
        cache.fills.push_back({tag, set, std::uint32_t(victim), now + cc.miss_latency});
        if (core.cls < 0) core.cls = 1;
        core.state = r_fill;
        core.resume = now + cc.miss_latency;
      }
    }

    ++now;
  }

  SimStats s;
  s.per_core.reserve(n);
  for (const RCore& core : cores) {
    s.per_core.push_back(core.ctr);
    s.accesses += core.ctr.accesses;
    s.hits += core.ctr.hits;
    s.misses += core.ctr.misses;
    s.pending_hits += core.ctr.pending_hits;
    s.stalled_accesses += core.ctr.stalled_accesses;
  }
  s.total_cycles = now;
  return s;
}

}  // namespace icsim
