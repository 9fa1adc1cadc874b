#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "evsync/history.hpp"
#include "evsync/type_spec.hpp"
#include "evsync/value.hpp"

namespace evsync {

/// ---------------------------------------------------------------------------
/// Base objects
///
/// Algorithms are programs over a small set of primitive shared objects.  One
/// simulator tick executes exactly one primitive access (or the final Return),
/// so the interleaving of ticks decides the interleaving of accesses.
/// ---------------------------------------------------------------------------

struct AtomicRegister {
  Value value;
};

struct AtomicFaa {
  std::int64_t value = 0;
};

struct AtomicFac {
  Value list = Value::list({});
};

/// A fetch-and-cons list that behaves badly for a while: the first
/// `merge_at - 1` accesses are served from per-process forks that cannot see
/// each other, and access number `merge_at` first merges the forks into one
/// list (highest process id first) and is then served atomically, as is every
/// access after it.
struct ChaosFac {
  int merge_at = 1;
  Value list = Value::list({});
  std::vector<Value> forks;  ///< one per process; emptied by the merge
  int accesses = 0;
  bool merged = false;
};

using BaseObject =
    std::variant<AtomicRegister, AtomicFaa, AtomicFac, ChaosFac>;

/// The merged view of a ChaosFac: forks concatenated by descending process
/// id (each fork is newest-first), followed by whatever is already merged.
Value chaos_canonical(const ChaosFac& c);

/// ---------------------------------------------------------------------------
/// Programs
/// ---------------------------------------------------------------------------

enum class BaseCommandKind { Read, Write, Faa, Fac, Return };

/// One primitive command issued by a program on one tick.
struct BaseCommand {
  BaseCommandKind kind;
  std::string target;  ///< base-object name; empty for Return
  Value argument;      ///< Write/Fac payload, Return value

  static BaseCommand read(std::string target);
  static BaseCommand write(std::string target, Value v);
  static BaseCommand faa(std::string target);
  static BaseCommand fac(std::string target, Value v);
  static BaseCommand ret(Value v);
};

/// What a program sees when asked for its next command.  `pc` and `locals`
/// persist across the ticks of one operation; `persistent` survives across
/// operations of the same process; `last` holds the result of the previous
/// base access of this operation (nil before the first one).
struct StepCtx {
  int proc;
  int procs;
  int& pc;
  std::map<std::string, Value>& locals;
  Value& persistent;
  const Invocation& inv;
  const Value& last;
};

using StepFn = std::function<BaseCommand(StepCtx&)>;

using Workload = std::vector<std::vector<Invocation>>;

/// A shared-object implementation: which base objects it needs, the program
/// every process runs, and bookkeeping used by the harness (access bounds,
/// default workloads, the sequential specification it claims to implement).
struct Algorithm {
  std::string name;
  int required_procs = -1;  ///< -1 = any count >= 1
  TypeSpec spec;
  std::function<std::map<std::string, BaseObject>(int procs)> make_bases;
  /// Register families created on first access; a target counts as lazy when
  /// its name starts with one of these prefixes.
  std::vector<std::string> lazy_register_prefixes;
  StepFn step;
  Value initial_persistent = Value::nil();
  /// Upper bound on primitive accesses per operation (Return excluded),
  /// given the process count and the total number of workload operations.
  std::function<int(int procs, int total_ops)> access_bound;
  std::function<Workload(int procs, int ops_per_proc)> default_workload;
};

/// ---------------------------------------------------------------------------
/// Scheduling
/// ---------------------------------------------------------------------------

enum class TokenKind { Start, Step, Crash };

struct ScheduleToken {
  TokenKind kind;
  int proc;

  bool operator==(const ScheduleToken&) const = default;
};

std::string to_string(const ScheduleToken& t);
/// One token per line, trailing newline: the schedule-file format.
std::string format_schedule(const std::vector<ScheduleToken>& tokens);
/// Comma-separated single line, e.g. "start 0, step 1"; still parseable.
std::string format_schedule_inline(const std::vector<ScheduleToken>& tokens);

/// Parses "start 0" / "step 1" / "crash 0" tokens separated by newlines,
/// commas or semicolons; "#" starts a comment.  Throws ParseError.
std::vector<ScheduleToken> parse_schedule(const std::string& text);

/// Shared quiescent state: everything that outlives operations.  Snapshot of
/// a finished run, and the starting point for a resumed one.
struct SimConfig {
  std::map<std::string, BaseObject> bases;
  std::vector<Value> persistents;  ///< one per process
};

/// ---------------------------------------------------------------------------
/// The simulator
/// ---------------------------------------------------------------------------

/// Deterministic, copyable interpreter state.  Copy it to probe "what would
/// happen if ..." without committing the probe.
class Simulation {
 public:
  Simulation(Algorithm algo, Workload workload);
  /// Resume from a quiescent configuration with a fresh workload and an
  /// empty history.
  Simulation(Algorithm algo, Workload workload, const SimConfig& resume);

  int procs() const { return static_cast<int>(per_proc_.size()); }
  const Algorithm& algorithm() const { return algo_; }
  const History& history() const { return hist_; }

  bool crashed(int p) const;
  bool busy(int p) const;       ///< has an operation in flight
  bool can_start(int p) const;  ///< idle, alive, workload remaining
  bool all_done() const;        ///< every process finished or crashed

  /// Applies one schedule token.  A `step` of an idle process is a no-op;
  /// `start`/`step`/`crash` of a crashed process, a double `start`, and a
  /// `start` with no workload left throw InvalidSchedule.
  void apply(const ScheduleToken& t);

  /// Steps process p until its current operation returns (no-op when idle).
  void run_to_return(int p);

  /// All tokens that would make progress right now, in deterministic order:
  /// for each process ascending, `start p` if it can start, else `step p` if
  /// it has an operation in flight.  Crashes are never proposed.
  std::vector<ScheduleToken> productive_tokens() const;

  /// Snapshot of the shared state (meaningful between operations).
  SimConfig config() const;

  /// Deterministic serialization of everything that shapes future behavior
  /// (bases, per-process program state, workload positions, crash flags) —
  /// but not the history.  Two simulations with equal keys behave
  /// identically from here on.
  std::string state_key() const;

  int declared_bound() const { return bound_; }
  /// Primitive-access counts of completed operations, in completion order.
  const std::vector<int>& op_access_counts() const { return op_accesses_; }
  int ticks() const { return ticks_; }

 private:
  struct Frame {
    int pc = 0;
    std::map<std::string, Value> locals;
    Value last;
    Invocation inv;
    int accesses = 0;
  };
  struct PerProc {
    Value persistent;
    std::optional<Frame> frame;
    std::size_t next_op = 0;
    bool crashed = false;
  };

  void check_proc(int p) const;
  Value base_access(const BaseCommand& cmd, int proc);

  Algorithm algo_;
  Workload workload_;
  std::map<std::string, BaseObject> bases_;
  std::vector<PerProc> per_proc_;
  History hist_;
  std::vector<int> op_accesses_;
  int bound_ = 0;
  int ticks_ = 0;
};

/// A schedule policy: asked once per tick for the next token, given the
/// current simulation.  Returns nothing when it considers the run finished.
class Schedule {
 public:
  /// Cycles over processes; each visit starts an operation if possible,
  /// otherwise steps the one in flight.  Interleaves at access granularity.
  static Schedule round_robin();
  /// Runs process 0 to completion, then process 1, and so on.
  static Schedule sequential();
  /// Picks a random runnable process each tick; with `crash_percent` > 0,
  /// occasionally crashes one instead (each process at most once).
  static Schedule seeded(std::uint64_t seed, int crash_percent = 0);
  /// Replays the given tokens verbatim, then stops.
  static Schedule fixed(std::vector<ScheduleToken> tokens);

  std::optional<ScheduleToken> next(const Simulation& sim);

  const std::string& label() const { return label_; }

 private:
  Schedule(std::string label,
           std::function<std::optional<ScheduleToken>(const Simulation&)> fn);

  std::string label_;
  std::function<std::optional<ScheduleToken>(const Simulation&)> policy_;
};

struct RunResult {
  History history;
  int ticks = 0;
  std::vector<int> op_access_counts;
  int declared_bound = 0;
};

/// Drives a fresh simulation with the given schedule until the schedule
/// stops or every process is finished or crashed.
RunResult run(const Algorithm& algo, const Workload& workload,
              Schedule schedule);

}  // namespace evsync
