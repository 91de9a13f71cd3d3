#include "icsim/metrics.hpp"

#include <cstdio>
#include <exception>
#include <fstream>

namespace icsim {

namespace {

std::uint32_t log2_floor(std::uint64_t v) {
  std::uint32_t n = 0;
  while (v > 1) {
    v >>= 1;
    ++n;
  }
  return n;
}

bool is_pow2(std::uint64_t v) { return v != 0 && (v & (v - 1)) == 0; }

SweepRow make_row(std::uint32_t degree, const EngineConfig& cfg, const SimStats& stats,
                  std::uint64_t num_caches) {
  const AreaReport ar = area(cfg.cache, num_caches);
  SweepRow row;
  row.sharing_degree = degree;
  row.num_caches = num_caches;
  row.ports = cfg.cache.ports;
  row.banks = cfg.cache.banks;
  row.mshr_entries = cfg.cache.mshr_entries;
  row.accesses = stats.accesses;
  row.misses = stats.misses;
  row.stalled_accesses = stats.stalled_accesses;
  row.total_cycles = stats.total_cycles;
  row.data_bytes = ar.data_bytes;
  row.total_bits = ar.total_bits;
  return row;
}

// Runs one engine per degree; sweep points are independent, so they go
// wide across threads while rows stay in input order.
std::vector<SweepRow> sweep_impl(const EngineConfig& base,
                                 const std::vector<FetchStream>& streams,
                                 const std::vector<std::uint32_t>& degrees,
                                 bool scale_sets) {
  if (streams.empty()) throw config_error("sweep needs at least one fetch stream");
  const std::uint32_t n = std::uint32_t(streams.size());
  for (std::uint32_t d : degrees) {
    if (d == 0 || n % d != 0)
      throw config_error("sweep degree " + std::to_string(d) +
                         " does not divide core count " + std::to_string(n));
    if (scale_sets && !is_pow2(std::uint64_t(base.cache.sets) * d))
      throw config_error("sweep degree " + std::to_string(d) + " scales " +
                         std::to_string(base.cache.sets) +
                         " sets to a non-power-of-two");
  }

  std::vector<SweepRow> rows(degrees.size());
  std::vector<std::exception_ptr> errors(degrees.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < long(degrees.size()); ++i) {
    try {
      const std::uint32_t d = degrees[std::size_t(i)];
      EngineConfig cfg = base;
      cfg.topology = Topology::uniform(n, d);
      if (scale_sets) cfg.cache.sets = base.cache.sets * d;
      const SimStats stats = run(cfg, streams);
      rows[std::size_t(i)] = make_row(d, cfg, stats, n / d);
    } catch (...) {
      errors[std::size_t(i)] = std::current_exception();
    }
  }
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (!errors[i]) continue;
    try {
      std::rethrow_exception(errors[i]);
    } catch (const std::exception& e) {
      throw config_error("sweep degree " + std::to_string(degrees[i]) + ": " + e.what());
    }
  }
  return rows;
}

}  // namespace

AreaReport area(const CacheConfig& config, std::uint64_t num_caches) {
  config.validate();
  AreaReport r;
  r.num_caches = num_caches;
  r.data_bytes = num_caches * config.capacity_bytes();
  r.tag_bits_per_line =
      config.address_bits - log2_floor(config.sets) - log2_floor(config.block_size);
  r.overhead_bits_per_line = r.tag_bits_per_line + 1;  // +1 valid bit
  r.total_bits = num_caches * std::uint64_t(config.sets) * config.ways *
                 (std::uint64_t(config.block_size) * 8 + r.overhead_bits_per_line);
  return r;
}

std::vector<SweepRow> sweep_method2(const EngineConfig& base,
                                    const std::vector<FetchStream>& streams,
                                    const std::vector<std::uint32_t>& degrees) {
  return sweep_impl(base, streams, degrees, false);
}

std::vector<SweepRow> sweep_method1(const EngineConfig& base,
                                    const std::vector<FetchStream>& streams,
                                    const std::vector<std::uint32_t>& degrees) {
  return sweep_impl(base, streams, degrees, true);
}

std::string to_csv(const std::vector<SweepRow>& rows) {
  std::string out =
      "sharing_degree,num_caches,ports,banks,mshr_entries,accesses,misses,"
      "stalled_accesses,miss_rate,stall_rate,total_cycles,data_bytes,total_bits\n";
  char buf[320];
  for (const SweepRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%u,%llu,%u,%u,%u,%llu,%llu,%llu,%.6f,%.6f,%llu,%llu,%llu\n",
                  r.sharing_degree, (unsigned long long)r.num_caches, r.ports, r.banks,
                  r.mshr_entries, (unsigned long long)r.accesses, (unsigned long long)r.misses,
                  (unsigned long long)r.stalled_accesses, r.miss_rate(), r.stall_rate(),
                  (unsigned long long)r.total_cycles, (unsigned long long)r.data_bytes,
                  (unsigned long long)r.total_bits);
    out += buf;
  }
  return out;
}

namespace {

void write_text(const std::string& text, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw io_error("cannot open " + path + " for writing");
  f.write(text.data(), std::streamsize(text.size()));
  if (!f) throw io_error("write to " + path + " failed");
}

}  // namespace

void write_csv(const std::vector<SweepRow>& rows, const std::string& path) {
  write_text(to_csv(rows), path);
}

std::string to_access_csv(const std::vector<AccessRecord>& records) {
  std::string out = "core,address,issue_cycle,complete_cycle,class,stalled\n";
  char buf[160];
  for (const AccessRecord& r : records) {
    std::snprintf(buf, sizeof buf, "%u,0x%llx,%llu,%llu,%s,%d\n", r.core,
                  (unsigned long long)r.address, (unsigned long long)r.issue_cycle,
                  (unsigned long long)r.complete_cycle, lookup_name(r.classification),
                  r.stalled ? 1 : 0);
    out += buf;
  }
  return out;
}

void write_access_csv(const std::vector<AccessRecord>& records, const std::string& path) {
  write_text(to_access_csv(records), path);
}

}  // namespace icsim
