#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "icsim/types.hpp"

namespace icsim {

// Ordered per-core sequence of instruction fetch addresses (byte PCs).
struct FetchStream {
  std::uint32_t core_id = 0;
  std::vector<addr_t> addresses;
};

// SIMT-flavoured synthetic workload: every core runs warps_per_core
// program-counter walkers over one shared kernel laid out from address 0,
// loop_iterations passes each. A walker may detour through a side path
// (extra instructions placed after the main footprint) with probability
// divergence_prob per iteration; draws come from a generator seeded by
// (seed, core, warp) so streams are reproducible. Walkers interleave
// round-robin, one fetch each, into the core's stream.
struct SyntheticSpec {
  std::uint32_t num_cores = 1;
  std::uint32_t warps_per_core = 48;
  std::uint32_t footprint_instrs = 1;
  std::uint32_t instr_size = 8;  // bytes
  std::uint32_t loop_iterations = 1;
  double divergence_prob = 0.0;
  std::uint32_t side_path_len = 0;
  std::uint32_t stagger_cycles = 0;  // core k drops its first k*stagger fetches
  std::uint64_t seed = 0;

  void validate() const;
};

// Trace grammar: one "<core_id> <0xaddress>" record per line, '#' comments,
// blank lines ignored, LF or CRLF. Returns one stream per core id present,
// in first-appearance order. Throws config_error with the line number.
std::vector<FetchStream> parse_trace(std::string_view text);

std::vector<FetchStream> generate(const SyntheticSpec& spec);

// Bytes of distinct static instructions the workload can touch.
std::uint64_t footprint_bytes(const SyntheticSpec& spec);

// Serializes streams in the trace grammar (inverse of parse_trace).
std::string to_trace_text(const std::vector<FetchStream>& streams);

}  // namespace icsim
