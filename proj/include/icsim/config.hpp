#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "icsim/cache.hpp"
#include "icsim/topology.hpp"
#include "icsim/workload.hpp"

namespace icsim {

// Parsed form of the flat key=value run configuration. Exactly one workload
// source (trace file or synthetic.*) and at most one topology form
// (sharing_degree or groups; degree 1 when neither is given).
struct RunConfig {
  CacheConfig cache;
  std::uint32_t num_cores = 0;
  std::optional<std::uint32_t> sharing_degree;
  std::optional<std::vector<std::vector<std::uint32_t>>> groups;
  std::optional<std::string> trace_path;
  std::optional<SyntheticSpec> synthetic;
  std::optional<int> sweep_method;  // 1 or 2
  std::vector<std::uint32_t> sweep_degrees;
  std::string out;  // empty = not set

  // Builds the topology this config describes (validates groups/degree).
  Topology topology() const;
};

// Parses `key = value` lines; '#' starts a comment; unknown keys are
// rejected. Throws config_error naming the line and key.
RunConfig parse_config(std::string_view text);

// Reads and parses a config file; io_error if it cannot be read.
RunConfig load_config(const std::string& path);

// Reads a whole file into a string (io_error on failure).
std::string read_file(const std::string& path);

}  // namespace icsim
