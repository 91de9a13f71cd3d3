#include "icsim/engine.hpp"

#include <algorithm>
#include <cassert>
#include <limits>

namespace icsim {

namespace {

constexpr cycle_t kNever = std::numeric_limits<cycle_t>::max();

cycle_t default_cap(std::uint64_t total_fetches, const CacheConfig& cache,
                    std::uint32_t num_cores) {
  // Rotating priority bounds the wait for a port; every serviced request
  // resolves within miss_latency + hit_latency. Anything past this cap is
  // a livelock bug, not a slow workload.
  const std::uint64_t per_fetch = std::uint64_t(cache.miss_latency) + cache.hit_latency + 4;
  const std::uint64_t fan = std::uint64_t(num_cores) + 4;
  if (total_fetches != 0 && per_fetch > kNever / total_fetches / fan) return kNever;
  return 1024 + total_fetches * per_fetch * fan;
}

}  // namespace

Engine::Engine(EngineConfig config, std::vector<FetchStream> streams)
    : cfg_(std::move(config)), streams_(std::move(streams)) {
  cfg_.cache.validate();
  if (streams_.empty()) throw config_error("no fetch streams given");
  if (streams_.size() != cfg_.topology.num_cores())
    throw config_error("got " + std::to_string(streams_.size()) + " streams for " +
                       std::to_string(cfg_.topology.num_cores()) + " cores");
  for (std::size_t c = 0; c < streams_.size(); ++c) {
    for (addr_t a : streams_[c].addresses)
      decompose(a, cfg_.cache);  // throws if outside address_bits
    total_fetches_ += streams_[c].addresses.size();
  }

  cores_.resize(streams_.size());
  caches_.reserve(cfg_.topology.num_caches());
  for (std::size_t i = 0; i < cfg_.topology.num_caches(); ++i) caches_.emplace_back(cfg_.cache);
  requesters_.resize(caches_.size());
  served_per_bank_.resize(cfg_.cache.banks);
  cap_ = cfg_.max_cycles ? cfg_.max_cycles
                         : default_cap(total_fetches_, cfg_.cache,
                                       cfg_.topology.num_cores());
}

void Engine::retire(std::uint32_t core, cycle_t complete) {
  CoreFE& fe = cores_[core];
  assert(fe.cls_set);
  fe.ctr.accesses++;
  switch (fe.cls) {
    case Lookup::hit: fe.ctr.hits++; break;
    case Lookup::miss: fe.ctr.misses++; break;
    case Lookup::pending_hit: fe.ctr.pending_hits++; break;
  }
  const bool stalled = complete - fe.issue > cfg_.cache.hit_latency;
  if (stalled) fe.ctr.stalled_accesses++;
  if (log_) log_->push_back({core, fe.addr, fe.issue, complete, fe.cls, stalled});
  fe.ctr.cycles = complete + 1;
  ++retired_;
  fe.state = fe.cursor == streams_[core].addresses.size() ? CoreState::drained
                                                          : CoreState::idle;
}

void Engine::service(std::uint32_t core, const AddressParts& parts, Cache& cache) {
  CoreFE& fe = cores_[core];

  // Return path of this core's own fill: the data arrived with the fill, so
  // winning the port completes the fetch even if the line has since been
  // evicted. Touch the line only while it is still resident.
  if (fe.state == CoreState::fill_wait) {
    const ProbeResult pr = cache.probe(parts);
    if (pr.kind == Lookup::hit) cache.touch(parts.set_index, pr.way);
    const cycle_t complete = now_ + cfg_.cache.hit_latency;
    if (complete == now_) {
      retire(core, complete);
    } else {
      fe.state = CoreState::wait_done;
      fe.resume = complete;
    }
    return;
  }

  const ProbeResult pr = cache.probe(parts);
  switch (pr.kind) {
    case Lookup::hit: {
      cache.touch(parts.set_index, pr.way);
      if (!fe.cls_set) {
        fe.cls = Lookup::hit;
        fe.cls_set = true;
      }
      const cycle_t complete = now_ + cfg_.cache.hit_latency;
      if (complete == now_) {
        retire(core, complete);
      } else {
        fe.state = CoreState::wait_done;
        fe.resume = complete;
      }
      break;
    }
    case Lookup::pending_hit: {
      if (!fe.cls_set) {
        fe.cls = Lookup::pending_hit;
        fe.cls_set = true;
      }
      fe.state = CoreState::wait_done;
      fe.resume = std::max(pr.ready_cycle, now_ + cfg_.cache.hit_latency);
      break;
    }
    case Lookup::miss: {
      const FillResult fr = cache.begin_fill(parts, now_);
      if (fr.started) {
        if (!fe.cls_set) {
          fe.cls = Lookup::miss;
          fe.cls_set = true;
        }
        fe.state = CoreState::fill_wait;
        fe.resume = fr.ready_cycle;
      } else {
        fe.state = CoreState::wants_port;  // MSHR full or set saturated; retry
      }
      break;
    }
  }
}

void Engine::step() {
  assert(!finished() && "step on a finished simulation");
  if (now_ >= cap_) {
    std::string msg = "cycle cap " + std::to_string(cap_) +
                      " exceeded (engine deadlock); per-core cursors:";
    for (std::size_t c = 0; c < cores_.size(); ++c)
      msg += " core" + std::to_string(c) + "=" + std::to_string(cores_[c].cursor) + "/" +
             std::to_string(streams_[c].addresses.size());
    throw engine_error(msg);
  }

  // 1. land fills
  for (Cache& c : caches_) c.complete_fills(now_);

  // 2. retire fetches whose data is ready
  for (std::uint32_t c = 0; c < cores_.size(); ++c) {
    CoreFE& fe = cores_[c];
    if (fe.state == CoreState::wait_done && fe.resume <= now_) retire(c, fe.resume);
  }

  // 3. idle cores issue this cycle's fetch
  for (std::uint32_t c = 0; c < cores_.size(); ++c) {
    CoreFE& fe = cores_[c];
    if (fe.state == CoreState::idle && fe.cursor < streams_[c].addresses.size()) {
      fe.addr = streams_[c].addresses[fe.cursor++];
      fe.issue = now_;
      fe.cls_set = false;
      fe.state = CoreState::wants_port;
    }
  }

  // 4. arbitration: rotating priority, offset advancing every cycle; at most
  // `ports` requests per bank; the shared MSHR is claimed in priority order.
  for (auto& r : requesters_) r.clear();
  for (std::uint32_t c = 0; c < cores_.size(); ++c) {
    const CoreFE& fe = cores_[c];
    if (fe.state == CoreState::wants_port ||
        (fe.state == CoreState::fill_wait && fe.resume <= now_))
      requesters_[cfg_.topology.cache_of(c)].push_back(c);
  }
  const std::uint32_t n = std::uint32_t(cores_.size());
  const std::uint32_t offset = std::uint32_t(now_ % n);
  for (std::size_t ci = 0; ci < caches_.size(); ++ci) {
    std::vector<std::uint32_t>& reqs = requesters_[ci];
    if (reqs.empty()) continue;
    std::sort(reqs.begin(), reqs.end(), [&](std::uint32_t a, std::uint32_t b) {
      return (a + n - offset) % n < (b + n - offset) % n;
    });
    std::fill(served_per_bank_.begin(), served_per_bank_.end(), 0u);
    for (std::uint32_t core : reqs) {
      const AddressParts parts = decompose(cores_[core].addr, cfg_.cache);
      if (served_per_bank_[parts.bank_index] >= cfg_.cache.ports) continue;
      served_per_bank_[parts.bank_index]++;
      service(core, parts, caches_[ci]);
    }
  }

  ++now_;
}

cycle_t Engine::next_actionable() const {
  cycle_t next = kNever;
  for (std::uint32_t c = 0; c < cores_.size(); ++c) {
    const CoreFE& fe = cores_[c];
    switch (fe.state) {
      case CoreState::idle:
        if (fe.cursor < streams_[c].addresses.size()) return now_;
        break;
      case CoreState::wants_port:
        return now_;
      case CoreState::fill_wait:
      case CoreState::wait_done:
        next = std::min(next, std::max(fe.resume, now_));
        break;
      case CoreState::drained:
        break;
    }
  }
  return next;
}

SimStats Engine::run_all() {
  while (!finished()) {
    const cycle_t next = next_actionable();
    assert(next != kNever && "live cores but no next event");
    if (next > now_) now_ = next;  // idle gap: nothing can happen in between
    step();
  }
  return stats();
}

SimStats Engine::stats() const {
  SimStats s;
  s.per_core.reserve(cores_.size());
  for (const CoreFE& fe : cores_) {
    s.per_core.push_back(fe.ctr);
    s.accesses += fe.ctr.accesses;
    s.hits += fe.ctr.hits;
    s.misses += fe.ctr.misses;
    s.pending_hits += fe.ctr.pending_hits;
    s.stalled_accesses += fe.ctr.stalled_accesses;
  }
  s.total_cycles = now_;
  return s;
}

SimStats run(const EngineConfig& config, const std::vector<FetchStream>& streams,
             std::vector<AccessRecord>* log) {
  Engine engine(config, streams);
  engine.set_record_log(log);
  return engine.run_all();
}

}  // namespace icsim
