#include "icsim/topology.hpp"

#include <cassert>

namespace icsim {

Topology::Topology(std::vector<std::vector<std::uint32_t>> groups, std::uint32_t num_cores)
    : groups_(std::move(groups)), num_cores_(num_cores) {
  core_to_cache_.assign(num_cores_, 0);
  for (std::size_t g = 0; g < groups_.size(); ++g)
    for (std::uint32_t core : groups_[g]) core_to_cache_[core] = std::uint32_t(g);
}

Topology Topology::uniform(std::uint32_t num_cores, std::uint32_t sharing_degree) {
  if (num_cores == 0) throw config_error("num_cores must be >= 1");
  if (sharing_degree == 0 || num_cores % sharing_degree != 0)
    throw config_error("sharing degree " + std::to_string(sharing_degree) +
                       " does not divide core count " + std::to_string(num_cores));
  std::vector<std::vector<std::uint32_t>> groups(num_cores / sharing_degree);
  for (std::uint32_t c = 0; c < num_cores; ++c) groups[c / sharing_degree].push_back(c);
  return Topology(std::move(groups), num_cores);
}

Topology Topology::asymmetric(std::vector<std::vector<std::uint32_t>> groups) {
  if (groups.empty()) throw config_error("topology needs at least one group");
  std::uint32_t max_core = 0;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (groups[g].empty())
      throw config_error("group " + std::to_string(g) + " is empty");
    for (std::uint32_t core : groups[g])
      if (core > max_core) max_core = core;
  }
  const std::uint32_t num_cores = max_core + 1;
  std::vector<bool> seen(num_cores, false);
  for (const auto& group : groups) {
    for (std::uint32_t core : group) {
      if (seen[core])
        throw config_error("core " + std::to_string(core) + " appears in two groups");
      seen[core] = true;
    }
  }
  for (std::uint32_t c = 0; c < num_cores; ++c)
    if (!seen[c]) throw config_error("core " + std::to_string(c) + " unassigned");
  return Topology(std::move(groups), num_cores);
}

std::uint32_t Topology::cache_of(std::uint32_t core) const {
  assert(core < num_cores_ && "core id out of range");
  return core_to_cache_[core];
}

}  // namespace icsim
