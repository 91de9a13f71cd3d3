#include "icsim/cache.hpp"

#include <cassert>
#include <cstdio>

namespace icsim {

namespace {

bool is_pow2(std::uint64_t v) { return v != 0 && (v & (v - 1)) == 0; }

std::uint32_t log2_exact(std::uint64_t v) {
  std::uint32_t n = 0;
  while (v > 1) {
    v >>= 1;
    ++n;
  }
  return n;
}

std::string hex_str(addr_t v) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "0x%llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

void CacheConfig::validate() const {
  if (!is_pow2(sets)) throw config_error("sets must be a power of two, got " + std::to_string(sets));
  if (ways == 0) throw config_error("ways must be >= 1");
  if (!is_pow2(block_size)) throw config_error("block_size must be a power of two, got " + std::to_string(block_size));
  if (!is_pow2(banks)) throw config_error("banks must be a power of two, got " + std::to_string(banks));
  if (ports == 0) throw config_error("ports must be >= 1");
  if (miss_latency == 0) throw config_error("miss_latency must be >= 1");
  if (mshr_entries == 0) throw config_error("mshr_entries must be >= 1");
  if (address_bits == 0 || address_bits > 64)
    throw config_error("address_bits must be in 1..64, got " + std::to_string(address_bits));
  if (log2_exact(sets) + log2_exact(block_size) > address_bits)
    throw config_error("address_bits too small to index " + std::to_string(sets) + " sets of " +
                       std::to_string(block_size) + "-byte blocks");
}

AddressParts decompose(addr_t address, const CacheConfig& config) {
  if (config.address_bits < 64 && (address >> config.address_bits) != 0)
    throw config_error("address " + hex_str(address) + " exceeds " +
                       std::to_string(config.address_bits) + " address bits");
  const addr_t block = address / config.block_size;
  AddressParts p;
  p.block_offset = std::uint32_t(address % config.block_size);
  p.set_index = std::uint32_t(block % config.sets);
  p.tag = block / config.sets;
  p.bank_index = std::uint32_t(block % config.banks);
  return p;
}

addr_t recompose(const AddressParts& parts, const CacheConfig& config) {
  return (parts.tag * config.sets + parts.set_index) * config.block_size + parts.block_offset;
}

const char* lookup_name(Lookup kind) {
  switch (kind) {
    case Lookup::hit: return "hit";
    case Lookup::miss: return "miss";
    case Lookup::pending_hit: return "pending_hit";
  }
  return "?";
}

Cache::Cache(const CacheConfig& config) : cfg_(config) {
  cfg_.validate();
  lines_.resize(std::size_t(cfg_.sets) * cfg_.ways);
  pending_.reserve(cfg_.mshr_entries);
}

ProbeResult Cache::probe(const AddressParts& parts) const {
  for (std::uint32_t w = 0; w < cfg_.ways; ++w) {
    const Line& l = line_at(parts.set_index, w);
    if (l.valid && l.tag == parts.tag) return {Lookup::hit, w, 0};
  }
  for (const PendingFill& f : pending_) {
    if (f.set == parts.set_index && f.tag == parts.tag)
      return {Lookup::pending_hit, 0, f.ready_cycle};
  }
  return {Lookup::miss, 0, 0};
}

void Cache::touch(std::uint32_t set, std::uint32_t way) {
  Line& l = line_at(set, way);
  assert(l.valid && "touch on an invalid line");
  l.lru_stamp = ++stamp_;
}

FillResult Cache::begin_fill(const AddressParts& parts, cycle_t now) {
  assert(probe(parts).kind == Lookup::miss && "begin_fill without a prior miss");
  if (pending_.size() >= cfg_.mshr_entries) return {false, 0};

  // Victim: lowest-index free way, else LRU among valid ways. Ways reserved
  // by in-flight fills are not candidates.
  std::uint32_t victim = cfg_.ways;
  for (std::uint32_t w = 0; w < cfg_.ways; ++w) {
    const Line& l = line_at(parts.set_index, w);
    if (!l.valid && !l.reserved) {
      victim = w;
      break;
    }
  }
  if (victim == cfg_.ways) {
    std::uint64_t best = 0;
    bool found = false;
    for (std::uint32_t w = 0; w < cfg_.ways; ++w) {
      const Line& l = line_at(parts.set_index, w);
      if (l.valid && (!found || l.lru_stamp < best)) {
        best = l.lru_stamp;
        victim = w;
        found = true;
      }
    }
    if (!found) return {false, 0};  // every way reserved: structural stall
  }

  Line& l = line_at(parts.set_index, victim);
  l.valid = false;
  l.reserved = true;
  pending_.push_back({parts.tag, parts.set_index, victim, now + cfg_.miss_latency});
  return {true, now + cfg_.miss_latency};
}

void Cache::complete_fills(cycle_t now) {
  std::size_t keep = 0;
  for (std::size_t i = 0; i < pending_.size(); ++i) {
    const PendingFill& f = pending_[i];
    if (f.ready_cycle <= now) {
      Line& l = line_at(f.set, f.way);
      l.tag = f.tag;
      l.valid = true;
      l.reserved = false;
      l.lru_stamp = ++stamp_;
    } else {
      pending_[keep++] = pending_[i];
    }
  }
  pending_.resize(keep);
}

bool Cache::line_valid(std::uint32_t set, std::uint32_t way) const {
  return line_at(set, way).valid;
}

addr_t Cache::line_tag(std::uint32_t set, std::uint32_t way) const {
  return line_at(set, way).tag;
}

}  // namespace icsim
