#pragma once

#include <cstdint>
#include <vector>

#include "icsim/types.hpp"

namespace icsim {

// Assignment of cores to cache instances. Groups partition the core id
// space; one cache per group. Immutable after construction.
class Topology {
 public:
  // Every core gets its own cache.
  Topology() : Topology(uniform(1, 1)) {}

  // Consecutive blocks of sharing_degree cores share one cache.
  static Topology uniform(std::uint32_t num_cores, std::uint32_t sharing_degree);

  // Arbitrary grouping, e.g. some cores private and the rest pooled.
  // Groups must partition 0..max_core_id; num_cores is inferred.
  static Topology asymmetric(std::vector<std::vector<std::uint32_t>> groups);

  std::uint32_t num_cores() const { return num_cores_; }
  std::size_t num_caches() const { return groups_.size(); }
  std::uint32_t cache_of(std::uint32_t core) const;
  const std::vector<std::vector<std::uint32_t>>& groups() const { return groups_; }

 private:
  Topology(std::vector<std::vector<std::uint32_t>> groups, std::uint32_t num_cores);

  std::vector<std::vector<std::uint32_t>> groups_;
  std::vector<std::uint32_t> core_to_cache_;
  std::uint32_t num_cores_ = 0;
};

}  // namespace icsim
