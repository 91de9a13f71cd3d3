#include "icsim/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace icsim {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

[[noreturn]] void fail(std::size_t line_no, const std::string& why) {
  throw config_error("config line " + std::to_string(line_no) + ": " + why);
}

std::uint64_t parse_u64(std::string_view v, std::size_t line_no, const std::string& key) {
  if (v.empty()) fail(line_no, key + " needs a value");
  std::uint64_t out = 0;
  for (char c : v) {
    if (c < '0' || c > '9') fail(line_no, key + " must be an unsigned integer, got \"" + std::string(v) + "\"");
    if (out > (UINT64_MAX - std::uint64_t(c - '0')) / 10) fail(line_no, key + " overflows");
    out = out * 10 + std::uint64_t(c - '0');
  }
  return out;
}

std::uint32_t parse_u32(std::string_view v, std::size_t line_no, const std::string& key) {
  std::uint64_t out = parse_u64(v, line_no, key);
  if (out > 0xffffffffull) fail(line_no, key + " overflows 32 bits");
  return std::uint32_t(out);
}

double parse_prob(std::string_view v, std::size_t line_no, const std::string& key) {
  std::string s(v);
  char* end = nullptr;
  double d = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || s.empty())
    fail(line_no, key + " must be a number, got \"" + s + "\"");
  if (d < 0.0 || d > 1.0) fail(line_no, key + " must be in [0,1]");
  return d;
}

std::vector<std::uint32_t> parse_u32_list(std::string_view v, std::size_t line_no,
                                          const std::string& key) {
  std::vector<std::uint32_t> out;
  std::size_t start = 0;
  while (start <= v.size()) {
    std::size_t comma = v.find(',', start);
    if (comma == std::string_view::npos) comma = v.size();
    std::string_view item = trim(v.substr(start, comma - start));
    if (item.empty()) fail(line_no, key + " has an empty list element");
    out.push_back(parse_u32(item, line_no, key));
    start = comma + 1;
    if (comma == v.size()) break;
  }
  if (out.empty()) fail(line_no, key + " needs at least one value");
  return out;
}

std::vector<std::vector<std::uint32_t>> parse_groups(std::string_view v, std::size_t line_no) {
  std::vector<std::vector<std::uint32_t>> groups;
  std::size_t start = 0;
  while (start <= v.size()) {
    std::size_t bar = v.find('|', start);
    if (bar == std::string_view::npos) bar = v.size();
    std::string_view group = trim(v.substr(start, bar - start));
    if (group.empty()) fail(line_no, "groups has an empty group");
    groups.push_back(parse_u32_list(group, line_no, "groups"));
    start = bar + 1;
    if (bar == v.size()) break;
  }
  return groups;
}

}  // namespace

Topology RunConfig::topology() const {
  if (groups) {
    Topology t = Topology::asymmetric(*groups);
    if (t.num_cores() != num_cores)
      throw config_error("groups cover " + std::to_string(t.num_cores()) +
                         " cores but num_cores = " + std::to_string(num_cores));
    return t;
  }
  return Topology::uniform(num_cores, sharing_degree.value_or(1));
}

RunConfig parse_config(std::string_view text) {
  RunConfig rc;
  SyntheticSpec syn;
  bool saw_num_cores = false;
  bool saw_synthetic = false;
  bool saw_footprint = false;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;

    if (std::size_t hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) fail(line_no, "expected key = value");
    const std::string key{trim(line.substr(0, eq))};
    const std::string_view val = trim(line.substr(eq + 1));
    if (key.empty()) fail(line_no, "empty key");

    if (key == "sets") rc.cache.sets = parse_u32(val, line_no, key);
    else if (key == "ways") rc.cache.ways = parse_u32(val, line_no, key);
    else if (key == "block_size") rc.cache.block_size = parse_u32(val, line_no, key);
    else if (key == "ports") rc.cache.ports = parse_u32(val, line_no, key);
    else if (key == "banks") rc.cache.banks = parse_u32(val, line_no, key);
    else if (key == "hit_latency") rc.cache.hit_latency = parse_u32(val, line_no, key);
    else if (key == "miss_latency") rc.cache.miss_latency = parse_u32(val, line_no, key);
    else if (key == "mshr_entries") rc.cache.mshr_entries = parse_u32(val, line_no, key);
    else if (key == "address_bits") rc.cache.address_bits = parse_u32(val, line_no, key);
    else if (key == "num_cores") {
      rc.num_cores = parse_u32(val, line_no, key);
      saw_num_cores = true;
    } else if (key == "sharing_degree") {
      rc.sharing_degree = parse_u32(val, line_no, key);
    } else if (key == "groups") {
      rc.groups = parse_groups(val, line_no);
    } else if (key == "trace") {
      if (val.empty()) fail(line_no, "trace needs a path");
      rc.trace_path = std::string(val);
    } else if (key == "synthetic.footprint_instrs") {
      syn.footprint_instrs = parse_u32(val, line_no, key);
      saw_synthetic = saw_footprint = true;
    } else if (key == "synthetic.warps_per_core") {
      syn.warps_per_core = parse_u32(val, line_no, key);
      saw_synthetic = true;
    } else if (key == "synthetic.instr_size") {
      syn.instr_size = parse_u32(val, line_no, key);
      saw_synthetic = true;
    } else if (key == "synthetic.loop_iterations") {
      syn.loop_iterations = parse_u32(val, line_no, key);
      saw_synthetic = true;
    } else if (key == "synthetic.divergence_prob") {
      syn.divergence_prob = parse_prob(val, line_no, key);
      saw_synthetic = true;
    } else if (key == "synthetic.side_path_len") {
      syn.side_path_len = parse_u32(val, line_no, key);
      saw_synthetic = true;
    } else if (key == "synthetic.stagger_cycles") {
      syn.stagger_cycles = parse_u32(val, line_no, key);
      saw_synthetic = true;
    } else if (key == "synthetic.seed") {
      syn.seed = parse_u64(val, line_no, key);
      saw_synthetic = true;
    } else if (key == "sweep.method") {
      std::uint32_t m = parse_u32(val, line_no, key);
      if (m != 1 && m != 2) fail(line_no, "sweep.method must be 1 or 2");
      rc.sweep_method = int(m);
    } else if (key == "sweep.degrees") {
      rc.sweep_degrees = parse_u32_list(val, line_no, key);
    } else if (key == "out") {
      if (val.empty()) fail(line_no, "out needs a path");
      rc.out = std::string(val);
    } else {
      fail(line_no, "unknown key \"" + key + "\"");
    }
  }

  if (!saw_num_cores) throw config_error("missing required key num_cores");
  if (rc.num_cores == 0) throw config_error("num_cores must be >= 1");
  if (rc.trace_path && saw_synthetic)
    throw config_error("exactly one workload source: both trace and synthetic.* given");
  if (!rc.trace_path && !saw_synthetic)
    throw config_error("exactly one workload source: give trace or synthetic.* keys");
  if (saw_synthetic) {
    if (!saw_footprint) throw config_error("missing required key synthetic.footprint_instrs");
    syn.num_cores = rc.num_cores;
    syn.validate();
    rc.synthetic = syn;
  }
  if (rc.sharing_degree && rc.groups)
    throw config_error("give either sharing_degree or groups, not both");

  rc.cache.validate();
  rc.topology();  // validates degree/groups against num_cores
  for (std::uint32_t d : rc.sweep_degrees)
    if (d == 0 || rc.num_cores % d != 0)
      throw config_error("sweep degree " + std::to_string(d) +
                         " does not divide core count " + std::to_string(rc.num_cores));
  return rc;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw io_error("cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  if (f.bad()) throw io_error("read from " + path + " failed");
  return ss.str();
}

RunConfig load_config(const std::string& path) { return parse_config(read_file(path)); }

}  // namespace icsim
