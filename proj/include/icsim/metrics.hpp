#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "icsim/engine.hpp"

namespace icsim {

// Storage model for num_caches instances of one geometry. data_bytes is the
// data array alone; total_bits also charges tag + valid overhead per line.
struct AreaReport {
  std::uint64_t num_caches = 0;
  std::uint64_t data_bytes = 0;
  std::uint32_t tag_bits_per_line = 0;
  std::uint32_t overhead_bits_per_line = 0;
  std::uint64_t total_bits = 0;
};

AreaReport area(const CacheConfig& config, std::uint64_t num_caches);

// One simulated configuration of a sharing-degree sweep. Rates are always
// derived from the stored counters, never stored separately.
struct SweepRow {
  std::uint32_t sharing_degree = 0;
  std::uint64_t num_caches = 0;
  std::uint32_t ports = 0;
  std::uint32_t banks = 0;
  std::uint32_t mshr_entries = 0;
  std::uint64_t accesses = 0;
  std::uint64_t misses = 0;
  std::uint64_t stalled_accesses = 0;
  cycle_t total_cycles = 0;
  std::uint64_t data_bytes = 0;
  std::uint64_t total_bits = 0;

  double miss_rate() const { return accesses ? double(misses) / double(accesses) : 0.0; }
  double stall_rate() const {
    return accesses ? double(stalled_accesses) / double(accesses) : 0.0;
  }
};

// Constant per-cache size, more sharers per cache: total storage shrinks
// with the sharing degree. One run per degree over the same streams; rows
// in degree order. Sweep points run independently and may be executed on
// multiple threads; results always land in input order.
std::vector<SweepRow> sweep_method2(const EngineConfig& base,
                                    const std::vector<FetchStream>& streams,
                                    const std::vector<std::uint32_t>& degrees);

// Constant total storage: per-cache sets scale with the degree, so each
// sharer sees a larger cache. Scaled sets must stay a power of two.
std::vector<SweepRow> sweep_method1(const EngineConfig& base,
                                    const std::vector<FetchStream>& streams,
                                    const std::vector<std::uint32_t>& degrees);

std::string to_csv(const std::vector<SweepRow>& rows);
void write_csv(const std::vector<SweepRow>& rows, const std::string& path);

std::string to_access_csv(const std::vector<AccessRecord>& records);
void write_access_csv(const std::vector<AccessRecord>& records, const std::string& path);

}  // namespace icsim
