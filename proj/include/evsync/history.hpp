#pragma once

#include <optional>
#include <string>
#include <vector>

#include "evsync/value.hpp"

namespace evsync {

enum class EventKind { Invocation, Response };

/// One history event.  An invocation carries the operation's arguments in
/// payload; a response carries exactly one payload element, the return value.
/// index is the event's position in the history it was taken from; projections
/// and suffixes keep original indices for cross-reference.
struct Event {
  EventKind kind = EventKind::Invocation;
  int proc = 0;
  Symbol obj;
  Symbol op;
  std::vector<Value> payload;
  int index = 0;

  bool operator==(const Event& other) const;
};

/// One operation reconstructed from a history: its invocation and, when the
/// operation completed, its response.
struct OperationRecord {
  int proc = 0;
  Symbol obj;
  Symbol op;
  std::vector<Value> args;
  int inv_index = 0;
  std::optional<int> res_index;
  std::optional<Value> ret;

  bool completed() const { return res_index.has_value(); }
};

/// Finite sequence of events.  Freshly built histories carry consecutive
/// indices from 0; derived histories (projections, suffixes) keep the indices
/// of the history they came from, strictly increasing.
class History {
 public:
  History() = default;

  /// Builds a history from events in order, assigning indices 0,1,...
  static History of(std::vector<Event> events);

  /// Appends an invocation / response, indexing it after the current tail.
  void append_invocation(int proc, Symbol obj, Symbol op,
                         std::vector<Value> args);
  void append_response(int proc, Symbol obj, Symbol op, Value ret);

  const std::vector<Event>& events() const { return events_; }
  std::size_t size() const { return events_.size(); }
  bool empty() const { return events_.empty(); }
  const Event& operator[](std::size_t i) const { return events_[i]; }

  bool operator==(const History& other) const { return events_ == other.events_; }

 private:
  static History derived(std::vector<Event> events);
  friend History project_process(const History&, int);
  friend History project_object(const History&, const Symbol&);
  friend History suffix_after(const History&, int);

  std::vector<Event> events_;
};

/// True when the history alternates invocation/response from the first event
/// on, each response matching the immediately preceding invocation's process,
/// object and operation; one trailing invocation may stay open.  The empty
/// history counts as sequential.
bool is_sequential(const History& h);

/// True when every per-process projection is sequential.
bool is_well_formed(const History& h);

/// Subsequence of events belonging to one process / one object, original
/// indices retained.
History project_process(const History& h, int proc);
History project_object(const History& h, const Symbol& obj);

/// Pairs invocations with their responses, in invocation order.  Requires a
/// well-formed history (throws MalformedHistory otherwise).
std::vector<OperationRecord> match_operations(const History& h);

/// Events with original index >= t.  Throws OutOfRange unless 0 <= t <= |h|.
History suffix_after(const History& h, int t);

/// Parses trace text: one event per line, '#' starts a comment line, blank
/// lines ignored.  Event indices are assigned in file order.  Throws
/// ParseError with the offending line number.
History parse_trace(const std::string& text);

/// Renders a history in trace syntax, one event per line, LF line endings.
/// parse_trace(format_trace(h)) reproduces h exactly.
std::string format_trace(const History& h);

}  // namespace evsync
