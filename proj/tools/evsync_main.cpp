/// Command-line front end: records runs as trace files, decides consistency
/// of recorded traces, explores schedule trees, and drives the bundled
/// experiments.  Exit codes: 0 = success / property holds, 1 = analysis
/// negative (or over the cap), 2 = flag, name, or parse errors.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "evsync/algorithms.hpp"
#include "evsync/checker.hpp"
#include "evsync/demo.hpp"
#include "evsync/errors.hpp"
#include "evsync/explorer.hpp"
#include "evsync/runtime.hpp"

namespace {

using namespace evsync;

constexpr int kExitAnalysis = 1;
constexpr int kExitUsage = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct RunFlags {
  std::string algo;
  int procs = 2;
  int ops = 1;
  std::string schedule = "rr";
  std::string base = "atomic-fac";
  std::string out;
};

/// Builds the schedule policy named by --schedule and reports the header
/// fields it implies.
Schedule make_schedule(const std::string& spec, std::string& kind,
                       std::string& seed_text) {
  kind = "inline";
  seed_text = "none";
  if (spec == "rr") return Schedule::round_robin();
  if (spec == "seq") return Schedule::sequential();
  if (spec.rfind("seed:", 0) == 0) {
    const std::string digits = spec.substr(5);
    std::uint64_t seed = 0;
    std::size_t used = 0;
    try {
      seed = std::stoull(digits, &used);
    } catch (const std::exception&) {
      throw Error("bad seed in '" + spec + "'");
    }
    if (used != digits.size() || digits.empty())
      throw Error("bad seed in '" + spec + "'");
    seed_text = std::to_string(seed);
    return Schedule::seeded(seed);
  }
  if (spec.rfind("file:", 0) == 0) {
    kind = "file";
    return Schedule::fixed(parse_schedule(read_file(spec.substr(5))));
  }
  throw Error("unknown schedule '" + spec +
              "' (expected rr, seq, seed:<u64> or file:<path>)");
}

/// --base only feeds algorithms built over a shared list.
bool consumes_base(const std::string& algo_name) {
  return algo_name == "direct-fac" || algo_name.rfind("universal:", 0) == 0;
}

int cmd_run(const RunFlags& f) {
  Algorithm algo;
  Workload wl;
  Schedule sched = Schedule::round_robin();
  std::string kind;
  std::string seed_text;
  try {
    algo = algorithm_by_name(f.algo, f.base);
    if (algo.required_procs > 0 && f.procs != algo.required_procs)
      throw Error("'" + f.algo + "' requires exactly " +
                  std::to_string(algo.required_procs) + " processes");
    wl = algo.default_workload(f.procs, f.ops);
    sched = make_schedule(f.schedule, kind, seed_text);
  } catch (const Error& e) {
    std::cerr << "evsync: " << e.what() << "\n";
    return kExitUsage;
  }

  RunResult result = run(algo, wl, sched);

  std::ostringstream text;
  text << "# algo=" << f.algo << " procs=" << f.procs << " seed=" << seed_text
       << " schedule=" << kind;
  if (consumes_base(f.algo)) text << " base=" << f.base;
  text << "\n" << format_trace(result.history);

  if (f.out.empty()) {
    std::cout << text.str();
  } else {
    std::ofstream out(f.out, std::ios::binary);
    if (!out) {
      std::cerr << "evsync: cannot write '" << f.out << "'\n";
      return kExitUsage;
    }
    out << text.str();
  }
  return 0;
}

struct CheckFlags {
  std::string trace;
  std::string type;
  std::optional<int> t;
  int cap = kDefaultOpCap;
};

int cmd_check(const CheckFlags& f) {
  History h;
  const TypeSpec* spec = nullptr;
  try {
    h = parse_trace(read_file(f.trace));
    spec = &builtin_spec(f.type);
  } catch (const Error& e) {
    std::cerr << "evsync: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (f.t) {
      if (!is_well_formed(h)) {
        std::cout << "WELL_FORMED: no\nWEAK_CONSISTENT: no\n";
        return kExitAnalysis;
      }
      WeakConsistency wc = check_weak_consistency(h, *spec, f.cap);
      std::optional<Linearization> lin;
      try {
        lin = check_t_linearizable(h, *f.t, *spec, f.cap);
      } catch (const OutOfRange& e) {
        std::cerr << "evsync: " << e.what() << "\n";
        return kExitUsage;
      }
      std::cout << "WEAK_CONSISTENT: " << (wc.ok ? "yes" : "no") << "\n";
      std::cout << "T_LINEARIZABLE: " << (lin ? "yes" : "no") << "\n";
      if (lin) std::cout << render_witness(*lin);
      return wc.ok && lin ? 0 : kExitAnalysis;
    }
    CheckReport report = check_eventual(h, *spec, f.cap);
    std::cout << render_report(report);
    return report.weakly_consistent ? 0 : kExitAnalysis;
  } catch (const TooLarge&) {
    std::cout << "TOO_LARGE\n";
    return kExitAnalysis;
  }
}

struct ExploreFlags {
  std::string algo;
  int procs = 2;
  int ops = 1;
  int depth = 8;
  std::string find;
  std::optional<int> horizon;
  int t = 0;
  std::string base = "atomic-fac";
  int cap = kDefaultOpCap;
};

int cmd_explore(const ExploreFlags& f) {
  Algorithm algo;
  Workload wl;
  try {
    algo = algorithm_by_name(f.algo, f.base);
    if (algo.required_procs > 0 && f.procs != algo.required_procs)
      throw Error("'" + f.algo + "' requires exactly " +
                  std::to_string(algo.required_procs) + " processes");
    wl = algo.default_workload(f.procs, f.ops);
  } catch (const Error& e) {
    std::cerr << "evsync: " << e.what() << "\n";
    return kExitUsage;
  }

  EnumerateOptions opt;
  opt.depth = f.depth;
  opt.op_cap = f.cap;
  try {
    if (f.find == "nonlin") {
      NonLinResult r = find_non_linearizable(algo, wl, opt);
      std::cout << render_nonlin(r);
      return r.history ? 0 : kExitAnalysis;
    }
    if (f.find == "stable") {
      int horizon = f.horizon.value_or(f.depth);
      StableReport r;
      try {
        r = find_stable_node(algo, wl, f.depth, horizon, opt);
      } catch (const OutOfRange& e) {
        std::cerr << "evsync: " << e.what() << "\n";
        return kExitUsage;
      }
      std::cout << render_stable(r);
      return r.candidates.empty() ? kExitAnalysis : 0;
    }
    // CLI11 restricts --find; this is prefix-safety.
    SafetyReport r = prefix_safety_scan(algo, wl, f.depth, f.t, opt);
    std::cout << render_safety(r);
    return r.violations_total == 0 ? 0 : kExitAnalysis;
  } catch (const TooLarge&) {
    std::cout << "TOO_LARGE\n";
    return kExitAnalysis;
  }
}

struct DemoFlags {
  bool list = false;
  std::string mutate;
};

int cmd_demo(const DemoFlags& f) {
  DemoOptions options;
  if (!f.mutate.empty()) {
    if (f.mutate != "skip-write") {
      std::cerr << "evsync: unknown mutation '" << f.mutate << "'\n";
      return kExitUsage;
    }
    options.skip_write = true;
  }
  if (f.list) {
    for (const DemoRecipe& r : demo_recipes(options))
      std::cout << r.token << "  " << r.title << "\n";
    return 0;
  }
  return run_demo(std::cout, options);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Laboratory for eventually linearizable shared objects: record runs, "
      "decide consistency of traces, explore schedule trees."};
  app.require_subcommand(1);

  RunFlags rf;
  CLI::App* run_cmd =
      app.add_subcommand("run", "Execute one schedule and print the trace");
  run_cmd->add_option("--algo", rf.algo,
                      "Algorithm: ev-tas, ev-consensus, 2fac, direct-fac, "
                      "universal:<spec>")
      ->required();
  run_cmd->add_option("--procs", rf.procs, "Number of processes")
      ->check(CLI::PositiveNumber);
  run_cmd->add_option("--ops", rf.ops, "Operations per process")
      ->check(CLI::NonNegativeNumber);
  run_cmd->add_option("--schedule", rf.schedule,
                      "rr, seq, seed:<u64> or file:<path>");
  run_cmd->add_option("--base", rf.base,
                      "Shared list for fac-based algorithms: atomic-fac or "
                      "chaos-fac:<k>; ignored by the others");
  run_cmd->add_option("--out", rf.out, "Write the trace here (default stdout)");

  CheckFlags cf;
  CLI::App* check_cmd =
      app.add_subcommand("check", "Decide consistency of a recorded trace");
  check_cmd->add_option("--trace", cf.trace, "Trace file")->required();
  check_cmd->add_option("--type", cf.type,
                        "Sequential type: register, consensus, tas, faa, fac")
      ->required();
  check_cmd->add_option("--t", cf.t,
                        "Single-offset mode: test exactly this offset");
  check_cmd->add_option("--cap", cf.cap, "Operation-count cap")
      ->check(CLI::PositiveNumber);

  ExploreFlags ef;
  CLI::App* explore_cmd =
      app.add_subcommand("explore", "Walk every schedule up to a depth");
  explore_cmd->add_option("--algo", ef.algo, "Algorithm under study")
      ->required();
  explore_cmd->add_option("--procs", ef.procs, "Number of processes")
      ->check(CLI::PositiveNumber);
  explore_cmd->add_option("--ops", ef.ops, "Operations per process")
      ->check(CLI::NonNegativeNumber);
  explore_cmd->add_option("--depth", ef.depth, "Tick budget from the root")
      ->required()
      ->check(CLI::NonNegativeNumber);
  explore_cmd
      ->add_option("--find", ef.find,
                   "nonlin (shortest non-linearizable prefix), stable "
                   "(settled nodes), prefix-safety (failures must persist)")
      ->required()
      ->check(CLI::IsMember({"nonlin", "stable", "prefix-safety"}));
  explore_cmd->add_option("--horizon", ef.horizon,
                          "Extension budget for --find stable (>= depth)");
  explore_cmd->add_option("--t", ef.t, "Offset for --find prefix-safety")
      ->check(CLI::NonNegativeNumber);
  explore_cmd->add_option("--base", ef.base,
                          "Shared list for fac-based algorithms");
  explore_cmd->add_option("--cap", ef.cap, "Operation-count cap")
      ->check(CLI::PositiveNumber);

  DemoFlags df;
  CLI::App* demo_cmd =
      app.add_subcommand("demo", "Run the bundled end-to-end experiments");
  demo_cmd->add_flag("--list", df.list, "List the experiments without running");
  demo_cmd->add_option("--mutate", df.mutate, "Injected fault (skip-write)")
      ->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  if (run_cmd->parsed()) return cmd_run(rf);
  if (check_cmd->parsed()) return cmd_check(cf);
  if (explore_cmd->parsed()) return cmd_explore(ef);
  return cmd_demo(df);
}
