#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace icsim {

using addr_t = std::uint64_t;
using cycle_t = std::uint64_t;

// Bad user input: config keys, trace text, geometry violations.
struct config_error : std::runtime_error {
  explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Filesystem trouble, kept distinct so the CLI can map exit codes.
struct io_error : std::runtime_error {
  explicit io_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Cycle-cap tripwire. Seeing this means a simulator bug, not bad input.
struct engine_error : std::runtime_error {
  explicit engine_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace icsim
