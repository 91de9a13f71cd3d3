#include "icsim/workload.hpp"

#include <cstdio>
#include <random>
#include <unordered_map>

namespace icsim {

void SyntheticSpec::validate() const {
  if (num_cores == 0) throw config_error("synthetic: num_cores must be >= 1");
  if (warps_per_core == 0) throw config_error("synthetic.warps_per_core must be >= 1");
  if (footprint_instrs == 0) throw config_error("synthetic.footprint_instrs must be >= 1");
  if (instr_size == 0) throw config_error("synthetic.instr_size must be >= 1");
  if (divergence_prob < 0.0 || divergence_prob > 1.0)
    throw config_error("synthetic.divergence_prob must be in [0,1]");
  if (divergence_prob > 0.0 && side_path_len == 0)
    throw config_error("synthetic.side_path_len must be >= 1 when divergence_prob > 0");
}

namespace {

[[noreturn]] void trace_fail(std::size_t line_no, const std::string& why, std::string_view line) {
  throw config_error("trace line " + std::to_string(line_no) + ": " + why + ": \"" +
                     std::string(line) + "\"");
}

}  // namespace

std::vector<FetchStream> parse_trace(std::string_view text) {
  std::vector<FetchStream> streams;
  std::unordered_map<std::uint32_t, std::size_t> index_of;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;

    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (std::size_t hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);

    std::size_t i = 0;
    auto skip_ws = [&] {
      while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    };
    skip_ws();
    if (i == line.size()) continue;  // blank or comment-only

    // decimal core id
    std::uint64_t core = 0;
    std::size_t digits = 0;
    while (i < line.size() && line[i] >= '0' && line[i] <= '9') {
      core = core * 10 + (line[i] - '0');
      if (core > 0xffffffffull) trace_fail(line_no, "core id overflows", line);
      ++i;
      ++digits;
    }
    if (digits == 0) trace_fail(line_no, "expected decimal core id", line);
    if (i == line.size() || (line[i] != ' ' && line[i] != '\t'))
      trace_fail(line_no, "expected whitespace after core id", line);
    skip_ws();

    // 0x-prefixed hex address
    if (i + 1 >= line.size() || line[i] != '0' || (line[i + 1] != 'x' && line[i + 1] != 'X'))
      trace_fail(line_no, "address must be 0x-prefixed hex", line);
    i += 2;
    addr_t addr = 0;
    digits = 0;
    while (i < line.size()) {
      char c = line[i];
      std::uint32_t v;
      if (c >= '0' && c <= '9') v = c - '0';
      else if (c >= 'a' && c <= 'f') v = 10 + (c - 'a');
      else if (c >= 'A' && c <= 'F') v = 10 + (c - 'A');
      else break;
      if (addr >> 60) trace_fail(line_no, "address overflows 64 bits", line);
      addr = (addr << 4) | v;
      ++i;
      ++digits;
    }
    if (digits == 0) trace_fail(line_no, "address must be 0x-prefixed hex", line);
    skip_ws();
    if (i != line.size()) trace_fail(line_no, "trailing characters after address", line);

    auto key = std::uint32_t(core);
    auto it = index_of.find(key);
    if (it == index_of.end()) {
      it = index_of.emplace(key, streams.size()).first;
      streams.push_back({key, {}});
    }
    streams[it->second].addresses.push_back(addr);
  }
  return streams;
}

std::uint64_t footprint_bytes(const SyntheticSpec& spec) {
  return (std::uint64_t(spec.footprint_instrs) + spec.side_path_len) * spec.instr_size;
}

std::vector<FetchStream> generate(const SyntheticSpec& spec) {
  spec.validate();

  const std::uint64_t diverge_threshold =
      std::uint64_t(spec.divergence_prob * 4294967296.0);  // p * 2^32

  std::vector<FetchStream> streams(spec.num_cores);
  for (std::uint32_t core = 0; core < spec.num_cores; ++core) {
    streams[core].core_id = core;

    // Per-warp divergence decisions, one per loop iteration.
    std::vector<std::vector<bool>> diverges(spec.warps_per_core);
    for (std::uint32_t w = 0; w < spec.warps_per_core; ++w) {
      std::seed_seq seq{std::uint32_t(spec.seed), std::uint32_t(spec.seed >> 32), core, w};
      std::mt19937 rng(seq);
      diverges[w].resize(spec.loop_iterations);
      for (std::uint32_t it = 0; it < spec.loop_iterations; ++it)
        diverges[w][it] = std::uint64_t(rng()) < diverge_threshold;
    }

    // Walk all warps round-robin, one fetch each per round.
    struct Walker {
      std::uint32_t iter = 0;
      std::uint32_t pos = 0;
    };
    std::vector<Walker> walkers(spec.warps_per_core);
    auto iter_len = [&](std::uint32_t w, std::uint32_t it) {
      return spec.footprint_instrs + (diverges[w][it] ? spec.side_path_len : 0u);
    };

    std::vector<addr_t>& out = streams[core].addresses;
    out.reserve(std::size_t(spec.warps_per_core) * spec.loop_iterations *
                (spec.footprint_instrs + spec.side_path_len));
    bool any_active = spec.loop_iterations > 0;
    while (any_active) {
      any_active = false;
      for (std::uint32_t w = 0; w < spec.warps_per_core; ++w) {
        Walker& wk = walkers[w];
        if (wk.iter >= spec.loop_iterations) continue;
        any_active = true;
        out.push_back(addr_t(wk.pos) * spec.instr_size);
        ++wk.pos;
        if (wk.pos >= iter_len(w, wk.iter)) {
          wk.pos = 0;
          ++wk.iter;
        }
      }
    }

    // Stagger: core k starts k*stagger fetches into its stream.
    const std::uint64_t drop = std::uint64_t(spec.stagger_cycles) * core;
    if (drop > 0) {
      if (drop >= out.size()) out.clear();
      else out.erase(out.begin(), out.begin() + std::ptrdiff_t(drop));
    }
  }
  return streams;
}

std::string to_trace_text(const std::vector<FetchStream>& streams) {
  std::string out;
  char buf[48];
  for (const FetchStream& s : streams) {
    for (addr_t a : s.addresses) {
      std::snprintf(buf, sizeof buf, "%u 0x%llx\n", s.core_id,
                    static_cast<unsigned long long>(a));
      out += buf;
    }
  }
  return out;
}

}  // namespace icsim
