#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "evsync/runtime.hpp"

namespace evsync {

/// Test-and-set from one shared register: read it, and when it held 0, write
/// 1 and report the win.  Overlapping calls can both win; any solo run is
/// atomic.  At most 2 accesses per operation.
Algorithm ev_tas();

/// Consensus from one proposal register per process: publish the proposal,
/// then scan the registers in ascending order and return the first value
/// found.  Overlapping calls can split; at most n+1 accesses per operation.
Algorithm ev_consensus();

/// Fetch-and-cons for exactly two processes from registers and one shared
/// counter: publish the value, take a ticket, publish the ticket, then read
/// the peer's published cells and rebuild the list from ticket positions.
/// At most 3 + 2 * (total operations) accesses per operation.
Algorithm two_fac();

/// The universal construction over a shared fetch-and-cons list: append the
/// encoded operation with a single access, replay the returned log through
/// the sequential specification, and answer from the reached state.  The
/// shared list may be atomic or a misbehaving variant.  1 access.
Algorithm universal(const TypeSpec& spec, BaseObject shared_list = AtomicFac{});

/// Fetch-and-cons passed straight through to the underlying list object.
/// 1 access.
Algorithm direct_fac(BaseObject shared_list = AtomicFac{});

/// Rebuilds the shared list as seen by a two-process fetch-and-cons
/// operation holding ticket `ind`.  Tickets are unique and count from 0, so
/// the list has exactly `ind` earlier elements (slots 0..ind-1, slot =
/// ticket).  `own` holds this process's earlier (ticket, value) pairs;
/// `other_seq` / `other_idx` are the peer's value and ticket cells 0..ind-1
/// as read (nil = unwritten).  Peer cells with a ticket on record fill their
/// slot; cells with a value but no ticket yet fill the remaining slots in
/// ascending order, cell order, and leftovers are ops that serialized after
/// this one.  Returns the list newest-first (slot ind-1 first).  Throws
/// IncompleteView when the observations cannot fill the slots consistently,
/// OutOfRange on malformed cell vectors.
Value reorder_list(const std::vector<std::pair<std::int64_t, Value>>& own,
                   const std::vector<Value>& other_seq,
                   const std::vector<Value>& other_idx, std::int64_t ind);

/// Shared-list prototypes by name: "atomic-fac", "chaos-fac:<k>" (merge at
/// access k).  Throws Error on an unknown name or a bad merge point.
BaseObject base_by_name(const std::string& name);

/// Algorithms by CLI name: "ev-tas", "ev-consensus", "2fac", "direct-fac",
/// "universal:<spec>" (spec a builtin name).  `base` picks the shared list
/// for the fac-backed algorithms and is ignored by the others.  Throws Error
/// on an unknown name.
Algorithm algorithm_by_name(const std::string& algo,
                            const std::string& base = "atomic-fac");

/// Names accepted by algorithm_by_name, in a fixed order (universal listed
/// once per builtin spec).
std::vector<std::string> algorithm_names();

}  // namespace evsync
