#pragma once

#include <optional>
#include <string>
#include <vector>

#include "evsync/history.hpp"
#include "evsync/type_spec.hpp"

namespace evsync {

/// Default cap on the number of operations the decision procedures accept.
/// The search is exponential in the worst case; the cap keeps accidental
/// blow-ups loud instead of slow.  Every entry point takes an override.
inline constexpr int kDefaultOpCap = 12;

/// One operation as placed in a candidate sequential history: the reference
/// to the original operation (its invocation index) plus the return assigned
/// by replaying the specification.
struct LinearizedOp {
  int proc = 0;
  Symbol obj;
  Symbol op;
  std::vector<Value> args;
  Value ret;
  int inv_index = 0;
};

/// A legal sequential arrangement of operations produced by the checker.
struct Linearization {
  std::vector<LinearizedOp> ops;

  /// The arrangement as a sequential history (inv/res pairs in order).
  History to_history() const;
};

/// Decides whether h is t-linearizable: is there a legal sequential history
/// over h's operations that (1) only uses operations invoked in h, (2)
/// completes every operation completed in h, (3) preserves real-time order
/// between operations whose response/invocation events both lie in the
/// suffix after the first t events, and (4) reproduces exactly the responses
/// that lie in that suffix?  Pending operations may be included (their
/// returns are then dictated by the specification) or left out.
///
/// Returns the witness arrangement, or nullopt.  Candidates are explored in
/// (proc, inv_index) order, so the returned witness is deterministic.
/// Throws MalformedHistory, TooLarge.
std::optional<Linearization> check_t_linearizable(const History& h, int t,
                                                  const TypeSpec& spec,
                                                  int op_cap = kDefaultOpCap);

struct MinimalT {
  int t = 0;
  Linearization witness;
};

/// Smallest t for which h is t-linearizable, with its witness.  Total for
/// well-formed histories: t = |h| always succeeds.
MinimalT minimal_t(const History& h, const TypeSpec& spec,
                   int op_cap = kDefaultOpCap);

/// Explanation found for one completed operation: a legal sequential history
/// over operations invoked before the operation returned, containing all of
/// the same process's earlier operations, ending with the operation itself
/// carrying its actual response.  Other responses are free (spec-assigned).
struct OpExplanation {
  int inv_index = 0;
  Linearization explanation;
};

struct WeakConsistency {
  bool ok = false;
  std::vector<OpExplanation> explanations;
  std::optional<int> counterexample_inv_index;
};

/// Checks the per-operation explanation condition for every completed
/// operation of h.  On failure, counterexample_inv_index names the first
/// operation (in invocation order) that has no explanation.
/// Throws MalformedHistory, TooLarge.
WeakConsistency check_weak_consistency(const History& h, const TypeSpec& spec,
                                       int op_cap = kDefaultOpCap);

/// Explanation search for the single completed operation whose invocation
/// event has index inv_index; nullopt when none exists.  The verdict depends
/// only on events up to the operation's response, so appending later events
/// never changes it.  Throws MalformedHistory, TooLarge, OutOfRange.
std::optional<Linearization> explain_operation(const History& h, int inv_index,
                                               const TypeSpec& spec,
                                               int op_cap = kDefaultOpCap);

/// Combined verdict: well-formedness, weak consistency and minimal t.  A
/// history that is weakly consistent and t-linearizable for some finite t
/// (which is every well-formed history, at t = |h| worst case) satisfies the
/// eventual-consistency contract; the interesting content is how small t is
/// and whether weak consistency holds.
///
/// For a malformed history the report carries well_formed = false and no
/// minimal_t instead of throwing.  Throws TooLarge.
struct CheckReport {
  bool well_formed = false;
  bool weakly_consistent = false;
  std::optional<int> minimal_t;
  std::optional<Linearization> witness;
  std::vector<OpExplanation> explanations;
  std::optional<int> counterexample_inv_index;
};

CheckReport check_eventual(const History& h, const TypeSpec& spec,
                           int op_cap = kDefaultOpCap);

/// Renders a report in the fixed line format:
///   WEAK_CONSISTENT: yes|no
///   MIN_T: <int>
///   lin <k> <proc> <op>(<args>) -> <value>     (one line per witness slot)
/// A malformed history renders as WELL_FORMED: no / WEAK_CONSISTENT: no.
std::string render_report(const CheckReport& report);

/// Renders one witness, one "lin <k> ..." line per entry.
std::string render_witness(const Linearization& lin);

}  // namespace evsync
