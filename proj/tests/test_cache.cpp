#include <random>
#include <vector>

#include "doctest.h"
#include "icsim/cache.hpp"
#include "support.hpp"

using namespace icsim;
using icsim_test::LruOracle;
using icsim_test::lru_replay;

TEST_CASE("decompose splits tag/set/offset/bank") {
  CacheConfig cfg;  // 4 sets, 4 ways, 128 B blocks
  cfg.banks = 4;

  AddressParts p = decompose(0x0, cfg);
  CHECK(p.tag == 0);
  CHECK(p.set_index == 0);
  CHECK(p.block_offset == 0);
  CHECK(p.bank_index == 0);

  p = decompose(0x80, cfg);
  CHECK(p.tag == 0);
  CHECK(p.set_index == 1);
  CHECK(p.block_offset == 0);
  CHECK(p.bank_index == 1);

  p = decompose(0x200, cfg);
  CHECK(p.tag == 1);
  CHECK(p.set_index == 0);
  CHECK(p.block_offset == 0);
  CHECK(p.bank_index == 0);
}

TEST_CASE("decompose rejects addresses beyond address_bits") {
  CacheConfig cfg;
  cfg.address_bits = 16;
  CHECK_THROWS_AS(decompose(0x10000, cfg), config_error);
  CHECK_NOTHROW(decompose(0xffff, cfg));
}

TEST_CASE("recompose inverts decompose for random addresses and geometries") {
  std::mt19937_64 rng(12345);
  for (int i = 0; i < 2000; ++i) {
    CacheConfig cfg;
    cfg.sets = 1u << (rng() % 5);
    cfg.ways = 1 + std::uint32_t(rng() % 8);
    cfg.block_size = 1u << (4 + rng() % 5);
    const addr_t a = rng() & 0xffffffffull;
    CHECK(recompose(decompose(a, cfg), cfg) == a);
  }
}

TEST_CASE("cold cache misses, filled line hits, pending fill shields only its own tag") {
  CacheConfig cfg;
  Cache cache(cfg);
  const AddressParts a = decompose(0x0, cfg);

  CHECK(cache.probe(a).kind == Lookup::miss);

  const FillResult fr = cache.begin_fill(a, 0);
  REQUIRE(fr.started);
  CHECK(fr.ready_cycle == 10);

  // same tag while the fill is in flight: coalesced
  const ProbeResult pending = cache.probe(a);
  CHECK(pending.kind == Lookup::pending_hit);
  CHECK(pending.ready_cycle == 10);

  // different tag, same set, while the fill is pending: plain miss
  const AddressParts b = decompose(0x0 + std::uint64_t(cfg.block_size) * cfg.sets, cfg);
  CHECK(b.set_index == a.set_index);
  CHECK(cache.probe(b).kind == Lookup::miss);

  cache.complete_fills(10);
  CHECK(cache.probe(a).kind == Lookup::hit);
}

TEST_CASE("fill completion respects the ready cycle boundary") {
  CacheConfig cfg;
  Cache cache(cfg);
  const AddressParts a = decompose(0x80, cfg);
  const FillResult fr = cache.begin_fill(a, 5);
  REQUIRE(fr.started);
  CHECK(fr.ready_cycle == 15);

  cache.complete_fills(14);
  CHECK(cache.probe(a).kind == Lookup::pending_hit);
  CHECK(cache.pending_fill_count() == 1);

  cache.complete_fills(15);
  CHECK(cache.probe(a).kind == Lookup::hit);
  CHECK(cache.pending_fill_count() == 0);
}

TEST_CASE("complete_fills with nothing pending is a no-op") {
  Cache cache(CacheConfig{});
  cache.complete_fills(100);
  CHECK(cache.pending_fill_count() == 0);
  CHECK(cache.probe(decompose(0x0, cache.config())).kind == Lookup::miss);
}

TEST_CASE("MSHR rejects a second fill when full") {
  CacheConfig cfg;
  cfg.mshr_entries = 1;
  Cache cache(cfg);
  REQUIRE(cache.begin_fill(decompose(0x0, cfg), 0).started);
  CHECK_FALSE(cache.begin_fill(decompose(0x80, cfg), 0).started);
  CHECK(cache.pending_fill_count() == 1);
}

TEST_CASE("a set whose every way is reserved rejects new fills") {
  CacheConfig cfg;
  cfg.sets = 2;
  cfg.ways = 1;
  cfg.mshr_entries = 4;
  Cache cache(cfg);
  // two tags in set 0: block stride = block_size * sets
  const addr_t stride = std::uint64_t(cfg.block_size) * cfg.sets;
  REQUIRE(cache.begin_fill(decompose(0, cfg), 0).started);
  CHECK_FALSE(cache.begin_fill(decompose(stride, cfg), 0).started);
  // set 1 is unaffected
  CHECK(cache.begin_fill(decompose(cfg.block_size, cfg), 0).started);
}

TEST_CASE("LRU evicts the least recently touched way") {
  CacheConfig cfg;
  cfg.sets = 1;
  cfg.ways = 2;
  Cache cache(cfg);
  const addr_t bs = cfg.block_size;
  // A, B, A, then C: B is the LRU victim
  auto hits = lru_replay(cache, {0 * bs, 1 * bs, 0 * bs, 2 * bs});
  CHECK(hits == std::vector<bool>{false, false, true, false});
  CHECK(cache.probe(decompose(0 * bs, cfg)).kind == Lookup::hit);
  CHECK(cache.probe(decompose(1 * bs, cfg)).kind == Lookup::miss);
  CHECK(cache.probe(decompose(2 * bs, cfg)).kind == Lookup::hit);
}

TEST_CASE("untouched lines evict in fill order") {
  CacheConfig cfg;
  cfg.sets = 1;
  Cache cache(cfg);  // 4 ways
  const addr_t bs = cfg.block_size;
  lru_replay(cache, {0 * bs, 1 * bs, 2 * bs, 3 * bs, 4 * bs});
  CHECK(cache.probe(decompose(0 * bs, cfg)).kind == Lookup::miss);  // first filled, evicted
  for (addr_t t = 1; t <= 4; ++t)
    CHECK(cache.probe(decompose(t * bs, cfg)).kind == Lookup::hit);
}

TEST_CASE("a working set of one never evicts") {
  Cache cache(CacheConfig{});
  auto hits = lru_replay(cache, std::vector<addr_t>(50, 0x40));
  CHECK(hits[0] == false);
  for (std::size_t i = 1; i < hits.size(); ++i) CHECK(hits[i] == true);
}

TEST_CASE("capacity: cyclic pattern over <= ways tags misses only on first touch") {
  CacheConfig cfg;
  cfg.sets = 1;
  cfg.ways = 4;
  Cache cache(cfg);
  std::vector<addr_t> seq;
  for (int round = 0; round < 10; ++round)
    for (addr_t t = 0; t < 4; ++t) seq.push_back(t * cfg.block_size);
  auto hits = lru_replay(cache, seq);
  std::size_t misses = 0;
  for (bool h : hits)
    if (!h) ++misses;
  CHECK(misses == 4);
}

TEST_CASE("conflict: cyclic pattern over ways+1 tags thrashes after warm-up") {
  CacheConfig cfg;
  cfg.sets = 1;
  cfg.ways = 4;
  Cache cache(cfg);
  LruOracle oracle(cfg);
  std::vector<addr_t> seq;
  for (int round = 0; round < 10; ++round)
    for (addr_t t = 0; t < 5; ++t) seq.push_back(t * cfg.block_size);
  auto hits = lru_replay(cache, seq);
  for (std::size_t i = 0; i < seq.size(); ++i) {
    CHECK(hits[i] == oracle.access(seq[i]));
    if (i >= 5) CHECK(hits[i] == false);  // every access misses once warm
  }
}

TEST_CASE("random access sequences match the move-to-front oracle") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    CacheConfig cfg;
    cfg.sets = 1u << (rng() % 3);
    cfg.ways = 1 + std::uint32_t(rng() % 6);
    cfg.block_size = 64;
    Cache cache(cfg);
    LruOracle oracle(cfg);
    const std::uint32_t distinct = 1 + std::uint32_t(rng() % (2 * cfg.ways * cfg.sets));
    for (int i = 0; i < 300; ++i) {
      const addr_t a = (rng() % distinct) * cfg.block_size + rng() % cfg.block_size;
      const AddressParts parts = decompose(a, cfg);
      const ProbeResult pr = cache.probe(parts);
      const bool oracle_hit = oracle.access(a);
      CHECK((pr.kind == Lookup::hit) == oracle_hit);
      if (pr.kind == Lookup::hit) {
        cache.touch(parts.set_index, pr.way);
      } else {
        const FillResult fr = cache.begin_fill(parts, cycle_t(i));
        REQUIRE(fr.started);
        cache.complete_fills(fr.ready_cycle);
      }
    }
  }
}

TEST_CASE("pending fills never exceed mshr_entries") {
  std::mt19937_64 rng(4242);
  CacheConfig cfg;
  cfg.sets = 4;
  cfg.ways = 4;
  cfg.mshr_entries = 3;
  Cache cache(cfg);
  cycle_t now = 0;
  for (int i = 0; i < 2000; ++i) {
    const addr_t a = (rng() % 64) * cfg.block_size;
    const AddressParts parts = decompose(a, cfg);
    if (cache.probe(parts).kind == Lookup::miss) cache.begin_fill(parts, now);
    CHECK(cache.pending_fill_count() <= cfg.mshr_entries);
    if (rng() % 4 == 0) cache.complete_fills(now);
    ++now;
  }
}

TEST_CASE("config validation names the offending field") {
  CacheConfig cfg;
  cfg.sets = 3;
  CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("sets"), config_error);
  cfg = CacheConfig{};
  cfg.miss_latency = 0;
  CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("miss_latency"), config_error);
  cfg = CacheConfig{};
  cfg.address_bits = 4;
  CHECK_THROWS_AS(cfg.validate(), config_error);
}
