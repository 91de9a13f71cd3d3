// Command-line front end: single runs, sharing-degree sweeps, and trace
// generation over the flat key=value config format.

#include <cstdio>
#include <cstring>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "icsim/config.hpp"
#include "icsim/engine.hpp"
#include "icsim/metrics.hpp"

namespace {

using namespace icsim;

void usage(std::FILE* to) {
  std::fputs(
      "usage: icsim <subcommand> [options]\n"
      "\n"
      "  icsim run <config> [--log-accesses <path>] [--seed <n>]\n"
      "  icsim sweep <config> [--seed <n>]\n"
      "  icsim gen-trace <config> -o <path> [--seed <n>]\n"
      "\n"
      "run       simulate once and print a summary\n"
      "sweep     run the configured method-1/method-2 sweep, write CSV to `out`\n"
      "gen-trace write the synthetic workload as a trace file\n"
      "\n"
      "exit codes: 0 ok, 1 configuration error, 2 I/O error\n",
      to);
}

struct Options {
  std::string command;
  std::string config_path;
  std::string out_path;       // -o
  std::string log_path;       // --log-accesses
  std::optional<std::uint64_t> seed;
};

Options parse_argv(int argc, char** argv) {
  if (argc < 2) throw config_error("missing subcommand");
  Options o;
  o.command = argv[1];
  if (o.command != "run" && o.command != "sweep" && o.command != "gen-trace")
    throw config_error("unknown subcommand \"" + o.command + "\"");
  int i = 2;
  auto need_value = [&](const char* flag) -> std::string {
    if (i + 1 >= argc) throw config_error(std::string(flag) + " needs a value");
    return argv[++i];
  };
  for (; i < argc; ++i) {
    if (std::strcmp(argv[i], "-o") == 0) {
      o.out_path = need_value("-o");
    } else if (std::strcmp(argv[i], "--log-accesses") == 0) {
      o.log_path = need_value("--log-accesses");
    } else if (std::strcmp(argv[i], "--seed") == 0) {
      const std::string v = need_value("--seed");
      try {
        o.seed = std::stoull(v);
      } catch (...) {
        throw config_error("--seed must be an unsigned integer, got \"" + v + "\"");
      }
    } else if (argv[i][0] == '-') {
      throw config_error("unknown flag \"" + std::string(argv[i]) + "\"");
    } else if (o.config_path.empty()) {
      o.config_path = argv[i];
    } else {
      throw config_error("unexpected argument \"" + std::string(argv[i]) + "\"");
    }
  }
  if (o.config_path.empty()) throw config_error("missing config path");
  return o;
}

// Builds per-core streams from whichever workload source the config names.
std::vector<FetchStream> make_streams(const RunConfig& rc,
                                      std::optional<std::uint64_t> seed_override) {
  if (rc.trace_path) {
    std::vector<FetchStream> parsed = parse_trace(read_file(*rc.trace_path));
    std::vector<FetchStream> streams(rc.num_cores);
    for (std::uint32_t c = 0; c < rc.num_cores; ++c) streams[c].core_id = c;
    for (FetchStream& s : parsed) {
      if (s.core_id >= rc.num_cores)
        throw config_error("trace names core " + std::to_string(s.core_id) +
                           " but num_cores = " + std::to_string(rc.num_cores));
      streams[s.core_id].addresses = std::move(s.addresses);
    }
    return streams;
  }
  SyntheticSpec spec = *rc.synthetic;
  if (seed_override) spec.seed = *seed_override;
  return generate(spec);
}

void write_file(const std::string& text, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw io_error("cannot open " + path + " for writing");
  f.write(text.data(), std::streamsize(text.size()));
  if (!f) throw io_error("write to " + path + " failed");
}

int cmd_run(const Options& o) {
  const RunConfig rc = load_config(o.config_path);
  const std::vector<FetchStream> streams = make_streams(rc, o.seed);
  EngineConfig ec{rc.cache, rc.topology()};

  std::vector<AccessRecord> log;
  const bool want_log = !o.log_path.empty();
  const SimStats stats = run(ec, streams, want_log ? &log : nullptr);

  std::printf("accesses %llu\n", (unsigned long long)stats.accesses);
  std::printf("misses %llu\n", (unsigned long long)stats.misses);
  std::printf("miss_rate %.6f\n", stats.miss_rate());
  std::printf("stall_rate %.6f\n", stats.stall_rate());
  std::printf("cycles %llu\n", (unsigned long long)stats.total_cycles);

  if (want_log) write_access_csv(log, o.log_path);
  return 0;
}

int cmd_sweep(const Options& o) {
  const RunConfig rc = load_config(o.config_path);
  if (!rc.sweep_method) throw config_error("sweep requires sweep.method");
  if (rc.sweep_degrees.empty()) throw config_error("sweep requires sweep.degrees");
  if (rc.out.empty()) throw config_error("sweep requires out = <path>");

  const std::vector<FetchStream> streams = make_streams(rc, o.seed);
  EngineConfig base{rc.cache, Topology::uniform(rc.num_cores, 1)};
  const std::vector<SweepRow> rows =
      *rc.sweep_method == 1 ? sweep_method1(base, streams, rc.sweep_degrees)
                            : sweep_method2(base, streams, rc.sweep_degrees);
  write_csv(rows, rc.out);
  return 0;
}

int cmd_gen_trace(const Options& o) {
  const RunConfig rc = load_config(o.config_path);
  if (!rc.synthetic) throw config_error("gen-trace requires a synthetic workload");
  if (o.out_path.empty()) throw config_error("gen-trace requires -o <path>");
  SyntheticSpec spec = *rc.synthetic;
  if (o.seed) spec.seed = *o.seed;
  write_file(to_trace_text(generate(spec)), o.out_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  try {
    o = parse_argv(argc, argv);
  } catch (const config_error& e) {
    std::fprintf(stderr, "icsim: %s\n", e.what());
    usage(stderr);
    return 1;
  }
  try {
    if (o.command == "run") return cmd_run(o);
    if (o.command == "sweep") return cmd_sweep(o);
    return cmd_gen_trace(o);
  } catch (const io_error& e) {
    std::fprintf(stderr, "icsim: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "icsim: %s\n", e.what());
    return 1;
  }
}
