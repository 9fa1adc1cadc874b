#include "evsync/explorer.hpp"

#include <sstream>
#include <unordered_map>
#include <unordered_set>
#include <utility>

#include "evsync/errors.hpp"

namespace evsync {

namespace {

/// 128-bit FNV-1a.  The duplicate-state set stores hashes instead of full
/// state strings; at 128 bits an accidental collision (which would silently
/// prune a live subtree) is out of the question for any tree this tool can
/// enumerate.
unsigned __int128 fnv1a128(const std::string& s) {
  unsigned __int128 h = (static_cast<unsigned __int128>(0x6c62272e07bb0142ULL)
                         << 64) |
                        0x62b821756295c58dULL;
  const unsigned __int128 prime =
      (static_cast<unsigned __int128>(0x0000000001000000ULL) << 64) |
      0x000000000000013bULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= prime;
  }
  return h;
}

struct U128Hash {
  std::size_t operator()(unsigned __int128 v) const {
    return static_cast<std::size_t>(v ^ (v >> 64));
  }
};

using SeenSet = std::unordered_set<unsigned __int128, U128Hash>;

/// Identity of a tree node.  The tick count participates because two equal
/// machine states reached after different numbers of ticks have different
/// remaining depth and therefore different subtrees.
unsigned __int128 node_fingerprint(const Simulation& sim) {
  std::string key = std::to_string(sim.ticks());
  key.push_back('\x1f');
  key += sim.state_key();
  key.push_back('\x1f');
  key += format_trace(sim.history());
  return fnv1a128(key);
}

/// Verdict memo shared by all checks of one analysis: trace text + t.
class VerdictCache {
 public:
  explicit VerdictCache(int op_cap) : op_cap_(op_cap) {}

  bool t_linearizable(const Simulation& sim, int t, ExplorationStats& stats) {
    std::string key = format_trace(sim.history());
    key.push_back('\x1f');
    key += std::to_string(t);
    auto it = memo_.find(key);
    if (it != memo_.end()) {
      ++stats.cache_hits;
      return it->second;
    }
    ++stats.checked;
    bool ok = check_t_linearizable(sim.history(), t, sim.algorithm().spec,
                                   op_cap_)
                  .has_value();
    memo_.emplace(std::move(key), ok);
    return ok;
  }

 private:
  int op_cap_;
  std::unordered_map<std::string, bool> memo_;
};

/// Pre-order walk over the schedule tree spanned by productive tokens.
/// The visitor sees every node (root included) and returns false to skip
/// the node's subtree; `stop()` abandons the walk entirely.
class TreeWalk {
 public:
  TreeWalk(const Algorithm& algo, const Workload& workload,
           const EnumerateOptions& options)
      : options_(options),
        root_(options.resume ? Simulation(algo, workload, *options.resume)
                             : Simulation(algo, workload)) {
    if (options.depth < 0) throw OutOfRange("depth must be >= 0");
  }

  using Visitor = std::function<bool(const Simulation& sim,
                                     const std::vector<ScheduleToken>& path,
                                     bool is_leaf)>;

  void walk(const Visitor& visit) {
    std::vector<ScheduleToken> path;
    if (options_.prune_duplicates) seen_.insert(node_fingerprint(root_));
    dfs(root_, path, visit);
  }

  void stop() { stopped_ = true; }

  ExplorationStats stats;

 private:
  void dfs(const Simulation& sim, std::vector<ScheduleToken>& path,
           const Visitor& visit) {
    if (stopped_) return;
    ++stats.nodes;
    std::vector<ScheduleToken> tokens = sim.productive_tokens();
    bool is_leaf =
        static_cast<int>(path.size()) >= options_.depth || tokens.empty();
    bool descend = visit(sim, path, is_leaf);
    if (is_leaf) {
      ++stats.leaves;
      return;
    }
    if (!descend || stopped_) return;
    for (const ScheduleToken& tok : tokens) {
      Simulation child = sim;
      child.apply(tok);
      if (options_.prune_duplicates &&
          !seen_.insert(node_fingerprint(child)).second) {
        ++stats.pruned;
        continue;
      }
      path.push_back(tok);
      dfs(child, path, visit);
      path.pop_back();
      if (stopped_) return;
    }
  }

  EnumerateOptions options_;
  Simulation root_;
  SeenSet seen_;
  bool stopped_ = false;
};

std::string comment_schedule(const std::vector<ScheduleToken>& path) {
  if (path.empty()) return "(root)";
  return format_schedule_inline(path);
}

}  // namespace

void enumerate_runs(
    const Algorithm& algo, const Workload& workload,
    const EnumerateOptions& options,
    const std::function<void(const Simulation&, const std::vector<ScheduleToken>&)>&
        on_leaf,
    ExplorationStats* stats) {
  TreeWalk walk(algo, workload, options);
  walk.walk([&](const Simulation& sim, const std::vector<ScheduleToken>& path,
                bool is_leaf) {
    if (is_leaf && on_leaf) on_leaf(sim, path);
    return true;
  });
  if (stats) *stats = walk.stats;
}

NonLinResult find_non_linearizable(const Algorithm& algo,
                                   const Workload& workload,
                                   const EnumerateOptions& options) {
  NonLinResult result;
  VerdictCache cache(options.op_cap);
  TreeWalk walk(algo, workload, options);
  walk.walk([&](const Simulation& sim, const std::vector<ScheduleToken>& path,
                bool) {
    // Histories only grow along a path, so nothing below this node can be
    // strictly shorter than a find already in hand.
    if (result.history && sim.history().size() >= result.history->size())
      return false;
    if (cache.t_linearizable(sim, 0, walk.stats)) return true;
    result.history = sim.history();
    result.schedule = path;
    return false;
  });
  result.stats = walk.stats;
  return result;
}

namespace {

/// True when every node of the subtree rooted at `sim`, explored up to
/// `remaining` further ticks, has a t-linearizable history.
bool subtree_stays_linearizable(const Simulation& sim, int remaining, int t,
                                VerdictCache& cache, SeenSet& seen,
                                bool prune, ExplorationStats& stats) {
  ++stats.nodes;
  if (!cache.t_linearizable(sim, t, stats)) return false;
  if (remaining <= 0) return true;
  for (const ScheduleToken& tok : sim.productive_tokens()) {
    Simulation child = sim;
    child.apply(tok);
    if (prune && !seen.insert(node_fingerprint(child)).second) {
      ++stats.pruned;
      continue;
    }
    if (!subtree_stays_linearizable(child, remaining - 1, t, cache, seen,
                                    prune, stats))
      return false;
  }
  return true;
}

}  // namespace

StableReport find_stable_node(const Algorithm& algo, const Workload& workload,
                              int depth, int horizon,
                              EnumerateOptions options) {
  if (horizon < depth)
    throw OutOfRange("horizon (" + std::to_string(horizon) +
                     ") must be >= depth (" + std::to_string(depth) + ")");
  StableReport report;
  report.depth = depth;
  report.horizon = horizon;
  VerdictCache cache(options.op_cap);
  options.depth = depth;
  TreeWalk walk(algo, workload, options);
  walk.walk([&](const Simulation& sim, const std::vector<ScheduleToken>& path,
                bool) {
    int t = static_cast<int>(sim.history().size());
    SeenSet seen;
    int remaining = horizon - static_cast<int>(path.size());
    if (subtree_stays_linearizable(sim, remaining, t, cache, seen,
                                   options.prune_duplicates, walk.stats)) {
      report.candidates.push_back(StableCandidate{path, t});
    }
    return true;
  });
  report.stats = walk.stats;
  return report;
}

SafetyReport prefix_safety_scan_with(
    const Algorithm& algo, const Workload& workload, int depth, int t,
    const std::function<bool(const Simulation&)>& judge,
    EnumerateOptions options) {
  static constexpr int kMaxSamples = 25;
  SafetyReport report;
  report.t = t;
  options.depth = depth;
  TreeWalk walk(algo, workload, options);
  struct FailPoint {
    std::vector<ScheduleToken> path;
    History history;
  };
  // fail_stack[d] = earliest failing node on the current path at depth <= d.
  // Pre-order visiting keeps it consistent: entering depth d discards the
  // entries of abandoned deeper branches.
  std::vector<std::optional<FailPoint>> fail_stack;
  walk.walk([&](const Simulation& sim, const std::vector<ScheduleToken>& path,
                bool) {
    std::size_t d = path.size();
    fail_stack.resize(d);
    std::optional<FailPoint> inherited;
    if (d > 0) inherited = fail_stack[d - 1];
    bool ok = judge(sim);
    if (!ok && !inherited) {
      inherited = FailPoint{path, sim.history()};
    } else if (ok && inherited) {
      ++report.violations_total;
      if (static_cast<int>(report.samples.size()) < kMaxSamples) {
        report.samples.push_back(SafetyViolation{inherited->path,
                                                 inherited->history, path,
                                                 sim.history()});
      }
    }
    fail_stack.push_back(std::move(inherited));
    return true;
  });
  report.stats = walk.stats;
  return report;
}

SafetyReport prefix_safety_scan(const Algorithm& algo,
                                const Workload& workload, int depth, int t,
                                EnumerateOptions options) {
  VerdictCache cache(options.op_cap);
  ExplorationStats check_stats;
  SafetyReport report = prefix_safety_scan_with(
      algo, workload, depth, t,
      [&](const Simulation& sim) {
        return cache.t_linearizable(sim, t, check_stats);
      },
      options);
  report.stats.checked += check_stats.checked;
  report.stats.cache_hits += check_stats.cache_hits;
  return report;
}

SimConfig run_to_quiescent(const Algorithm& algo, const Workload& workload,
                           Schedule schedule) {
  Simulation sim(algo, workload);
  while (!sim.all_done()) {
    std::optional<ScheduleToken> tok = schedule.next(sim);
    if (!tok) break;
    sim.apply(*tok);
  }
  for (int p = 0; p < sim.procs(); ++p) {
    if (!sim.crashed(p) && sim.busy(p)) sim.run_to_return(p);
  }
  return sim.config();
}

Value probe_response(const Algorithm& algo, const SimConfig& config, int proc,
                     const Invocation& inv) {
  int procs = static_cast<int>(config.persistents.size());
  if (proc < 0 || proc >= procs)
    throw OutOfRange("probe process " + std::to_string(proc) +
                     " out of range for " + std::to_string(procs) +
                     " processes");
  Workload workload(procs);
  workload[proc].push_back(inv);
  Simulation sim(algo, workload, config);
  sim.apply(ScheduleToken{TokenKind::Start, proc});
  sim.run_to_return(proc);
  const Event& last = sim.history()[sim.history().size() - 1];
  if (last.kind != EventKind::Response || last.proc != proc ||
      last.payload.size() != 1)
    throw Error("probe did not end with its own response");
  return last.payload.front();
}

namespace {

/// Removes `l0` from the tail of `resp` (both newest-first lists, so the
/// tail holds the oldest elements).  Throws NotAPrefix when it is not there.
Value strip_stable_tail(const Value& resp, const Value& l0) {
  const auto& suffix = l0.as_list();
  const auto& full = resp.as_list();
  bool ok = full.size() >= suffix.size();
  if (ok) {
    std::size_t off = full.size() - suffix.size();
    for (std::size_t i = 0; i < suffix.size(); ++i) {
      if (!(full[off + i] == suffix[i])) {
        ok = false;
        break;
      }
    }
  }
  if (!ok)
    throw NotAPrefix("response " + resp.str() +
                     " does not extend the stable content " + l0.str());
  return Value::list(std::vector<Value>(full.begin(),
                                        full.end() - suffix.size()));
}

}  // namespace

OffsetAlgorithm stable_offset_wrapper(Algorithm inner, SimConfig stable,
                                      Value l0) {
  l0.as_list();  // reject non-list stable content up front
  OffsetAlgorithm out;
  out.l0 = l0;
  out.start = std::move(stable);
  out.algo = std::move(inner);
  out.algo.name += "+offset";
  StepFn inner_step = out.algo.step;
  out.algo.step = [inner_step, l0](StepCtx& ctx) {
    BaseCommand cmd = inner_step(ctx);
    if (cmd.kind == BaseCommandKind::Return)
      cmd.argument = strip_stable_tail(cmd.argument, l0);
    return cmd;
  };
  return out;
}

std::string render_stats(const ExplorationStats& stats) {
  std::ostringstream out;
  out << "# nodes=" << stats.nodes << " leaves=" << stats.leaves
      << " checked=" << stats.checked << " cache_hits=" << stats.cache_hits
      << " pruned=" << stats.pruned << "\n";
  return out.str();
}

std::string render_nonlin(const NonLinResult& r) {
  std::ostringstream out;
  out << render_stats(r.stats);
  if (!r.history) {
    out << "NONE\n";
    return out.str();
  }
  out << "FOUND " << r.history->size() << " events\n";
  out << "# schedule: " << comment_schedule(r.schedule) << "\n";
  out << format_trace(*r.history);
  return out.str();
}

std::string render_stable(const StableReport& r) {
  std::ostringstream out;
  out << render_stats(r.stats);
  out << "# bounded check: extensions examined up to " << r.horizon
      << " ticks, evidence rather than proof\n";
  out << "STABLE " << r.candidates.size() << "\n";
  for (const StableCandidate& c : r.candidates) {
    out << "stable events=" << c.event_length
        << " path=" << comment_schedule(c.path) << "\n";
  }
  return out.str();
}

std::string render_safety(const SafetyReport& r) {
  std::ostringstream out;
  out << render_stats(r.stats);
  out << "VIOLATIONS " << r.violations_total << "\n";
  for (const SafetyViolation& v : r.samples) {
    out << "violation:\n";
    out << "# failing prefix after: " << comment_schedule(v.failing_path)
        << "\n";
    out << format_trace(v.failing_history);
    out << "# passing extension after: " << comment_schedule(v.passing_path)
        << "\n";
    out << format_trace(v.passing_history);
  }
  return out.str();
}

}  // namespace evsync
