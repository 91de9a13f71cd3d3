#include <algorithm>

#include "doctest.h"
#include "icsim/workload.hpp"

using namespace icsim;

TEST_CASE("trace grammar: records, first-appearance core order") {
  const auto streams = parse_trace("0 0x0\n0 0x80\n1 0x0\n");
  REQUIRE(streams.size() == 2);
  CHECK(streams[0].core_id == 0);
  CHECK(streams[0].addresses == std::vector<addr_t>{0x0, 0x80});
  CHECK(streams[1].core_id == 1);
  CHECK(streams[1].addresses == std::vector<addr_t>{0x0});
}

TEST_CASE("trace grammar: comments, blank lines, CRLF, no trailing newline") {
  const auto streams = parse_trace("# header\n\n3 0xAb # inline\r\n3 0x10");
  REQUIRE(streams.size() == 1);
  CHECK(streams[0].core_id == 3);
  CHECK(streams[0].addresses == std::vector<addr_t>{0xab, 0x10});
}

TEST_CASE("empty trace gives an empty stream list") {
  CHECK(parse_trace("").empty());
  CHECK(parse_trace("# only a comment\n").empty());
}

TEST_CASE("malformed trace lines report the line number") {
  CHECK_THROWS_WITH_AS(parse_trace("0 zzz"), doctest::Contains("line 1"), config_error);
  CHECK_THROWS_WITH_AS(parse_trace("0 0x0\nx 0x0\n"), doctest::Contains("line 2"),
                       config_error);
  CHECK_THROWS_WITH_AS(parse_trace("0 123\n"), doctest::Contains("0x-prefixed"),
                       config_error);
  CHECK_THROWS_WITH_AS(parse_trace("99999999999 0x0\n"), doctest::Contains("overflow"),
                       config_error);
  CHECK_THROWS_AS(parse_trace("0 0x0 junk\n"), config_error);
}

TEST_CASE("single warp, no divergence: one linear pass") {
  SyntheticSpec spec;
  spec.footprint_instrs = 4;
  spec.warps_per_core = 1;
  const auto streams = generate(spec);
  REQUIRE(streams.size() == 1);
  CHECK(streams[0].addresses == std::vector<addr_t>{0x0, 0x8, 0x10, 0x18});
}

TEST_CASE("two warps interleave round-robin") {
  SyntheticSpec spec;
  spec.footprint_instrs = 2;
  spec.warps_per_core = 2;
  const auto streams = generate(spec);
  CHECK(streams[0].addresses == std::vector<addr_t>{0x0, 0x0, 0x8, 0x8});
}

TEST_CASE("forced divergence appends the side path after the kernel") {
  SyntheticSpec spec;
  spec.footprint_instrs = 2;
  spec.warps_per_core = 1;
  spec.divergence_prob = 1.0;
  spec.side_path_len = 2;
  const auto streams = generate(spec);
  CHECK(streams[0].addresses == std::vector<addr_t>{0x0, 0x8, 0x10, 0x18});
}

TEST_CASE("generation is a pure function of the spec") {
  SyntheticSpec spec;
  spec.num_cores = 3;
  spec.warps_per_core = 4;
  spec.footprint_instrs = 16;
  spec.loop_iterations = 3;
  spec.divergence_prob = 0.5;
  spec.side_path_len = 4;
  spec.seed = 77;
  const auto a = generate(spec);
  const auto b = generate(spec);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].addresses == b[i].addresses);

  SyntheticSpec other = spec;
  other.seed = 78;
  const auto c = generate(other);
  bool any_diff = false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].addresses != c[i].addresses) any_diff = true;
  CHECK(any_diff);
}

TEST_CASE("without divergence every core emits the identical stream") {
  SyntheticSpec spec;
  spec.num_cores = 8;
  spec.warps_per_core = 6;
  spec.footprint_instrs = 32;
  spec.loop_iterations = 2;
  const auto streams = generate(spec);
  for (std::size_t i = 1; i < streams.size(); ++i)
    CHECK(streams[i].addresses == streams[0].addresses);
}

TEST_CASE("every generated address is instruction-aligned and inside the footprint") {
  SyntheticSpec spec;
  spec.num_cores = 4;
  spec.warps_per_core = 8;
  spec.footprint_instrs = 24;
  spec.loop_iterations = 3;
  spec.divergence_prob = 0.3;
  spec.side_path_len = 8;
  spec.seed = 5;
  const std::uint64_t fp = footprint_bytes(spec);
  for (const auto& s : generate(spec)) {
    for (addr_t a : s.addresses) {
      CHECK(a % spec.instr_size == 0);
      CHECK(a < fp);
    }
  }
}

TEST_CASE("stagger drops a per-core prefix") {
  SyntheticSpec spec;
  spec.num_cores = 3;
  spec.warps_per_core = 1;
  spec.footprint_instrs = 8;
  spec.stagger_cycles = 2;
  const auto streams = generate(spec);
  CHECK(streams[0].addresses.size() == 8);
  CHECK(streams[1].addresses.size() == 6);
  CHECK(streams[2].addresses.size() == 4);
  CHECK(streams[1].addresses.front() == 0x10);  // skipped 2 fetches
}

TEST_CASE("footprint_bytes counts kernel plus side path") {
  SyntheticSpec spec;
  spec.footprint_instrs = 64;
  CHECK(footprint_bytes(spec) == 512);

  spec.footprint_instrs = 256;
  CHECK(footprint_bytes(spec) == 2048);  // exactly one 4x4x128 cache

  spec.footprint_instrs = 512;
  CHECK(footprint_bytes(spec) == 4096);  // 2x capacity, thrash regime

  spec.footprint_instrs = 448;
  spec.side_path_len = 64;
  CHECK(footprint_bytes(spec) == 4096);
}

TEST_CASE("trace round-trips through its textual form") {
  SyntheticSpec spec;
  spec.num_cores = 2;
  spec.warps_per_core = 3;
  spec.footprint_instrs = 10;
  spec.divergence_prob = 0.5;
  spec.side_path_len = 2;
  spec.seed = 11;
  const auto streams = generate(spec);
  const auto reparsed = parse_trace(to_trace_text(streams));
  REQUIRE(reparsed.size() == streams.size());
  for (std::size_t i = 0; i < streams.size(); ++i) {
    CHECK(reparsed[i].core_id == streams[i].core_id);
    CHECK(reparsed[i].addresses == streams[i].addresses);
  }
}
