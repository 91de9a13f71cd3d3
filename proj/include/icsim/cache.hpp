#pragma once

#include <cstdint>
#include <vector>

#include "icsim/types.hpp"

namespace icsim {

// Geometry and timing of one instruction cache instance.
struct CacheConfig {
  std::uint32_t sets = 4;
  std::uint32_t ways = 4;
  std::uint32_t block_size = 128;  // bytes
  std::uint32_t ports = 1;         // lookups served per bank per cycle
  std::uint32_t banks = 1;
  std::uint32_t hit_latency = 0;   // cycles
  std::uint32_t miss_latency = 10; // cycles to fill from the next level
  std::uint32_t mshr_entries = 1;  // outstanding fills per cache
  std::uint32_t address_bits = 32;

  // Throws config_error naming the offending field.
  void validate() const;

  std::uint64_t capacity_bytes() const {
    return std::uint64_t(sets) * ways * block_size;
  }
};

struct AddressParts {
  addr_t tag = 0;
  std::uint32_t set_index = 0;
  std::uint32_t block_offset = 0;
  std::uint32_t bank_index = 0;
};

// Splits a byte address into tag / set / offset, plus the bank the block
// interleaves onto. Throws config_error if the address exceeds address_bits.
AddressParts decompose(addr_t address, const CacheConfig& config);

// Inverse of decompose (bank index is redundant and ignored).
addr_t recompose(const AddressParts& parts, const CacheConfig& config);

enum class Lookup : std::uint8_t { hit, miss, pending_hit };

const char* lookup_name(Lookup kind);

struct ProbeResult {
  Lookup kind = Lookup::miss;
  std::uint32_t way = 0;    // meaningful for hit
  cycle_t ready_cycle = 0;  // meaningful for pending_hit
};

struct FillResult {
  bool started = false;
  cycle_t ready_cycle = 0;  // meaningful when started
};

// Tag/LRU/pending-fill state of one cache instance. Read-only traffic:
// instruction fetch never writes back. True LRU per set; misses are
// tracked in an MSHR list bounded by mshr_entries. The victim way is
// reserved (invalidated) as soon as a fill starts so an in-flight fill
// can never be evicted.
class Cache {
 public:
  explicit Cache(const CacheConfig& config);

  // Does not mutate state. Hit if a valid line matches, pending_hit if an
  // in-flight fill matches (coalesced request), miss otherwise.
  ProbeResult probe(const AddressParts& parts) const;

  // Marks (set, way) most recently used. The line must be valid.
  void touch(std::uint32_t set, std::uint32_t way);

  // Starts a fill for a missing block. Fails (started=false) when the MSHR
  // is full or every way of the set is reserved by an in-flight fill.
  FillResult begin_fill(const AddressParts& parts, cycle_t now);

  // Installs every pending fill whose ready_cycle <= now.
  void complete_fills(cycle_t now);

  const CacheConfig& config() const { return cfg_; }
  std::size_t pending_fill_count() const { return pending_.size(); }
  bool line_valid(std::uint32_t set, std::uint32_t way) const;
  addr_t line_tag(std::uint32_t set, std::uint32_t way) const;

 private:
  struct Line {
    addr_t tag = 0;
    std::uint64_t lru_stamp = 0;
    bool valid = false;
    bool reserved = false;  // victim of an in-flight fill
  };
  struct PendingFill {
    addr_t tag = 0;
    std::uint32_t set = 0;
    std::uint32_t way = 0;
    cycle_t ready_cycle = 0;
  };

  Line& line_at(std::uint32_t set, std::uint32_t way) {
    return lines_[std::size_t(set) * cfg_.ways + way];
  }
  const Line& line_at(std::uint32_t set, std::uint32_t way) const {
    return lines_[std::size_t(set) * cfg_.ways + way];
  }

  CacheConfig cfg_;
  std::vector<Line> lines_;          // sets * ways
  std::vector<PendingFill> pending_; // insertion order, <= mshr_entries
  std::uint64_t stamp_ = 0;
};

}  // namespace icsim
