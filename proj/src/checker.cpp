#include "evsync/checker.hpp"

#include <algorithm>
#include <cassert>
#include <unordered_set>

#include "evsync/errors.hpp"

namespace evsync {
namespace {

/// Shared search state for the backtracking placement of operations into a
/// candidate sequential order.  Operations are identified by their position
/// in the record vector; masks are bitsets over that position (the op cap
/// keeps them inside 32 bits).
struct Placement {
  const std::vector<OperationRecord>* records = nullptr;
  std::vector<int> candidates;          // record ids in (proc, inv) order
  std::vector<std::uint32_t> preds;     // per record: must-precede mask
  std::vector<bool> fixed_ret;          // per record: response pinned?
  std::uint32_t completed_mask = 0;
  const TypeSpec* spec = nullptr;
  std::unordered_set<std::string> visited;
  std::vector<std::pair<int, Value>> path;  // (record id, assigned return)

  bool dfs(std::uint32_t mask, const Value& state) {
    if ((completed_mask & ~mask) == 0) return true;
    std::string key = std::to_string(mask) + '|' + state.str();
    if (visited.count(key)) return false;
    for (int x : candidates) {
      std::uint32_t bit = 1u << x;
      if (mask & bit) continue;
      if (preds[x] & ~mask) continue;  // some required predecessor missing
      const OperationRecord& r = (*records)[x];
      StepResult step = spec->step(state, Invocation{r.op, r.args});
      if (fixed_ret[x] && step.ret != *r.ret) continue;
      path.emplace_back(x, step.ret);
      if (dfs(mask | bit, step.next_state)) return true;
      path.pop_back();
    }
    visited.insert(std::move(key));
    return false;
  }
};

std::vector<int> sorted_candidates(const std::vector<OperationRecord>& rs) {
  std::vector<int> order(rs.size());
  for (std::size_t i = 0; i < rs.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (rs[a].proc != rs[b].proc) return rs[a].proc < rs[b].proc;
    return rs[a].inv_index < rs[b].inv_index;
  });
  return order;
}

Linearization to_linearization(const std::vector<OperationRecord>& rs,
                               const std::vector<std::pair<int, Value>>& path) {
  Linearization lin;
  lin.ops.reserve(path.size());
  for (const auto& [id, ret] : path) {
    const OperationRecord& r = rs[id];
    lin.ops.push_back({r.proc, r.obj, r.op, r.args, ret, r.inv_index});
  }
  return lin;
}

std::vector<OperationRecord> checked_records(const History& h, int op_cap) {
  std::vector<OperationRecord> records = match_operations(h);
  if (static_cast<int>(records.size()) > op_cap)
    throw TooLarge("history holds " + std::to_string(records.size()) +
                   " operations, cap is " + std::to_string(op_cap));
  return records;
}

}  // namespace

History Linearization::to_history() const {
  History h;
  for (const LinearizedOp& o : ops) {
    h.append_invocation(o.proc, o.obj, o.op, o.args);
    h.append_response(o.proc, o.obj, o.op, o.ret);
  }
  return h;
}

std::optional<Linearization> check_t_linearizable(const History& h, int t,
                                                 const TypeSpec& spec,
                                                 int op_cap) {
  if (t < 0 || static_cast<std::size_t>(t) > h.size())
    throw OutOfRange("t = " + std::to_string(t) +
                     " outside [0, " + std::to_string(h.size()) + "]");
  std::vector<OperationRecord> records = checked_records(h, op_cap);
  const int n = static_cast<int>(records.size());

  Placement p;
  p.records = &records;
  p.candidates = sorted_candidates(records);
  p.preds.assign(n, 0);
  p.fixed_ret.assign(n, false);
  p.spec = &spec;
  for (int i = 0; i < n; ++i) {
    if (records[i].completed()) p.completed_mask |= 1u << i;
    p.fixed_ret[i] = records[i].completed() && *records[i].res_index >= t;
  }
  // Real-time order applies where both boundary events survive the cut: o1's
  // response and o2's invocation both in the suffix, response first.
  for (int i = 0; i < n; ++i) {
    if (!records[i].completed() || *records[i].res_index < t) continue;
    for (int j = 0; j < n; ++j) {
      if (records[j].inv_index >= t && *records[i].res_index < records[j].inv_index)
        p.preds[j] |= 1u << i;
    }
  }
  if (!p.dfs(0, spec.initial())) return std::nullopt;
  return to_linearization(records, p.path);
}

MinimalT minimal_t(const History& h, const TypeSpec& spec, int op_cap) {
  for (int t = 0; static_cast<std::size_t>(t) <= h.size(); ++t) {
    if (auto lin = check_t_linearizable(h, t, spec, op_cap))
      return {t, std::move(*lin)};
  }
  assert(false && "t = |h| places no constraints; search cannot fail");
  throw Error("minimal_t: exhausted all t");
}

namespace {

/// Explanation search for records[target]; shared by the whole-history scan
/// and the single-operation entry point.
std::optional<Linearization> explain_target(
    const std::vector<OperationRecord>& records, int target,
    const TypeSpec& spec) {
  const int n = static_cast<int>(records.size());
  const OperationRecord& o1 = records[target];

  // Candidate pool: operations invoked before o1 returned, minus o1.
  // Required: every earlier operation of o1's process (all completed, since
  // per-process projections are sequential).
  std::vector<int> candidates;
  std::uint32_t required = 0;
  for (int i = 0; i < n; ++i) {
    if (i == target) continue;
    if (records[i].inv_index >= *o1.res_index) continue;
    candidates.push_back(i);
    if (records[i].proc == o1.proc && records[i].inv_index < o1.inv_index)
      required |= 1u << i;
  }
  std::sort(candidates.begin(), candidates.end(), [&](int a, int b) {
    if (records[a].proc != records[b].proc)
      return records[a].proc < records[b].proc;
    return records[a].inv_index < records[b].inv_index;
  });

  // Backtracking over subsets: succeed as soon as the required set is in and
  // o1, appended last, replays to its actual response.  Other returns are
  // free, i.e. whatever the replay assigns.
  std::unordered_set<std::string> visited;
  std::vector<std::pair<int, Value>> path;
  std::function<bool(std::uint32_t, const Value&)> dfs =
      [&](std::uint32_t mask, const Value& state) -> bool {
    if ((required & ~mask) == 0) {
      StepResult last = spec.step(state, Invocation{o1.op, o1.args});
      if (last.ret == *o1.ret) {
        path.emplace_back(target, last.ret);
        return true;
      }
    }
    std::string key = std::to_string(mask) + '|' + state.str();
    if (visited.count(key)) return false;
    for (int x : candidates) {
      std::uint32_t bit = 1u << x;
      if (mask & bit) continue;
      const OperationRecord& r = records[x];
      StepResult step = spec.step(state, Invocation{r.op, r.args});
      path.emplace_back(x, step.ret);
      if (dfs(mask | bit, step.next_state)) return true;
      path.pop_back();
    }
    visited.insert(std::move(key));
    return false;
  };

  if (!dfs(0, spec.initial())) return std::nullopt;
  return to_linearization(records, path);
}

}  // namespace

WeakConsistency check_weak_consistency(const History& h, const TypeSpec& spec,
                                       int op_cap) {
  std::vector<OperationRecord> records = checked_records(h, op_cap);
  const int n = static_cast<int>(records.size());

  WeakConsistency out;
  out.ok = true;
  // Operations under scrutiny, in invocation order.
  for (int target = 0; target < n; ++target) {
    if (!records[target].completed()) continue;
    if (auto lin = explain_target(records, target, spec)) {
      out.explanations.push_back({records[target].inv_index, std::move(*lin)});
    } else {
      out.ok = false;
      out.counterexample_inv_index = records[target].inv_index;
      break;
    }
  }
  return out;
}

std::optional<Linearization> explain_operation(const History& h, int inv_index,
                                               const TypeSpec& spec,
                                               int op_cap) {
  std::vector<OperationRecord> records = checked_records(h, op_cap);
  for (int i = 0; i < static_cast<int>(records.size()); ++i) {
    if (records[i].inv_index != inv_index) continue;
    if (!records[i].completed())
      throw OutOfRange("operation at invocation index " +
                       std::to_string(inv_index) + " never completed");
    return explain_target(records, i, spec);
  }
  throw OutOfRange("no invocation event at index " + std::to_string(inv_index));
}

CheckReport check_eventual(const History& h, const TypeSpec& spec,
                           int op_cap) {
  CheckReport report;
  report.well_formed = is_well_formed(h);
  if (!report.well_formed) return report;
  WeakConsistency wc = check_weak_consistency(h, spec, op_cap);
  report.weakly_consistent = wc.ok;
  report.explanations = std::move(wc.explanations);
  report.counterexample_inv_index = wc.counterexample_inv_index;
  MinimalT mt = minimal_t(h, spec, op_cap);
  report.minimal_t = mt.t;
  report.witness = std::move(mt.witness);
  return report;
}

std::string render_witness(const Linearization& lin) {
  std::string out;
  for (std::size_t k = 0; k < lin.ops.size(); ++k) {
    const LinearizedOp& o = lin.ops[k];
    out += "lin " + std::to_string(k) + ' ' + std::to_string(o.proc) + ' ' +
           o.op + '(';
    for (std::size_t i = 0; i < o.args.size(); ++i) {
      if (i) out += ',';
      out += o.args[i].str();
    }
    out += ") -> " + o.ret.str() + '\n';
  }
  return out;
}

std::string render_report(const CheckReport& report) {
  if (!report.well_formed)
    return "WELL_FORMED: no\nWEAK_CONSISTENT: no\n";
  std::string out;
  out += std::string("WEAK_CONSISTENT: ") +
         (report.weakly_consistent ? "yes" : "no") + '\n';
  if (report.minimal_t) {
    out += "MIN_T: " + std::to_string(*report.minimal_t) + '\n';
    if (report.witness) out += render_witness(*report.witness);
  }
  return out;
}

}  // namespace evsync
