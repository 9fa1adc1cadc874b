#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "evsync/algorithms.hpp"
#include "evsync/checker.hpp"
#include "evsync/runtime.hpp"

namespace evsync {

/// Enumeration controls.  `depth` counts scheduler ticks from the root.
/// Duplicate-state pruning cuts a subtree when an identical machine state —
/// same tick count, same shared and per-process state, same history — was
/// already expanded elsewhere; identical states generate identical subtrees,
/// so the reachable set of leaf histories is unaffected.
struct EnumerateOptions {
  int depth = 8;
  bool prune_duplicates = true;
  int op_cap = kDefaultOpCap;           ///< forwarded to the checker
  std::optional<SimConfig> resume;      ///< start from this configuration
};

struct ExplorationStats {
  long long nodes = 0;    ///< tree nodes visited (root included)
  long long leaves = 0;   ///< nodes at full depth or with no runnable token
  long long checked = 0;  ///< checker invocations (verdict-cache misses)
  long long cache_hits = 0;
  long long pruned = 0;   ///< subtrees cut as duplicate states
};

/// Depth-first enumeration of every schedule over start/step tokens up to
/// `depth` ticks (crashes are not enumerated).  Calls `on_leaf` once per
/// leaf with the leaf's simulation and the token path that reached it, in
/// deterministic order.
void enumerate_runs(
    const Algorithm& algo, const Workload& workload,
    const EnumerateOptions& options,
    const std::function<void(const Simulation&, const std::vector<ScheduleToken>&)>&
        on_leaf,
    ExplorationStats* stats = nullptr);

struct NonLinResult {
  std::optional<History> history;  ///< shortest history failing at t = 0
  std::vector<ScheduleToken> schedule;
  ExplorationStats stats;
};

/// Scans every prefix history in the tree for the shortest one (by event
/// count, ties broken by enumeration order) that is not 0-linearizable.
NonLinResult find_non_linearizable(const Algorithm& algo,
                                   const Workload& workload,
                                   const EnumerateOptions& options);

struct StableCandidate {
  std::vector<ScheduleToken> path;  ///< empty = the tree root
  int event_length = 0;             ///< events on the path's history
};

struct StableReport {
  int depth = 0;
  int horizon = 0;
  std::vector<StableCandidate> candidates;
  ExplorationStats stats;
};

/// Finds nodes at depth <= `depth` all of whose enumerated extensions up to
/// `horizon` ticks (from the root) have histories that stay
/// event_length-linearizable.  A bounded-horizon approximation by nature:
/// the unbounded property is not finitely decidable, so candidates are
/// evidence, never certificates.  Requires horizon >= depth (OutOfRange).
StableReport find_stable_node(const Algorithm& algo, const Workload& workload,
                              int depth, int horizon,
                              EnumerateOptions options = {});

struct SafetyViolation {
  std::vector<ScheduleToken> failing_path;
  History failing_history;
  std::vector<ScheduleToken> passing_path;
  History passing_history;
};

struct SafetyReport {
  int t = 0;
  long long violations_total = 0;
  std::vector<SafetyViolation> samples;  ///< first few violations
  ExplorationStats stats;
};

/// Checks that failing is absorbing: once a prefix history is not
/// t-linearizable, no enumerated extension becomes t-linearizable again.
/// Reports every passing node below a failing ancestor.  Expected empty —
/// appended events sit after every existing response, so the order
/// constraints never let a new operation slot in front of an already
/// unexplainable response; the scan cross-checks that the machinery agrees.
SafetyReport prefix_safety_scan(const Algorithm& algo,
                                const Workload& workload, int depth, int t,
                                EnumerateOptions options = {});

/// The engine behind prefix_safety_scan with the per-node judgment supplied
/// by the caller (true = passing).  Lets tests drive the violation
/// bookkeeping with synthetic judgments, since honest ones cannot produce a
/// violation.  `t` is only echoed into the report.
SafetyReport prefix_safety_scan_with(
    const Algorithm& algo, const Workload& workload, int depth, int t,
    const std::function<bool(const Simulation&)>& judge,
    EnumerateOptions options = {});

/// Runs the schedule to exhaustion, then lets every process with an
/// operation still in flight finish it solo; returns the quiescent shared
/// configuration.
SimConfig run_to_quiescent(const Algorithm& algo, const Workload& workload,
                           Schedule schedule);

/// Response of `inv` executed solo by process `proc` on a copy of the
/// configuration.  The probe is not committed: the returned value reflects
/// the configuration's content without the probe's own contribution.
Value probe_response(const Algorithm& algo, const SimConfig& config, int proc,
                     const Invocation& inv);

/// A derived algorithm anchored at a quiescent configuration.
struct OffsetAlgorithm {
  Algorithm algo;
  SimConfig start;
  Value l0;
};

/// Wraps `inner` so that every response, a list guaranteed to carry the
/// stable content `l0` as its oldest elements, is emitted with that content
/// stripped.  Runs resumed from `stable` then look like a fresh object.
/// A response that does not end with `l0` throws NotAPrefix at run time.
OffsetAlgorithm stable_offset_wrapper(Algorithm inner, SimConfig stable,
                                      Value l0);

/// Report renderings used by the command-line front end.
std::string render_stats(const ExplorationStats& stats);
std::string render_nonlin(const NonLinResult& r);
std::string render_stable(const StableReport& r);
std::string render_safety(const SafetyReport& r);

}  // namespace evsync
