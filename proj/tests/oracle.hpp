#pragma once

// Brute-force reference decisions for the consistency conditions, used to
// validate the production checker.  Everything here enumerates subsets and
// permutations outright; nothing shares search code with src/checker.cpp.

#include <algorithm>
#include <optional>
#include <vector>

#include "evsync/checker.hpp"
#include "evsync/history.hpp"
#include "evsync/type_spec.hpp"

namespace evsync::oracle {

namespace detail {

/// Replays `order` (record ids) from the initial state; returns each
/// assigned return value.
inline std::vector<Value> returns_of(const TypeSpec& spec,
                                     const std::vector<OperationRecord>& rs,
                                     const std::vector<int>& order) {
  std::vector<Value> rets;
  Value state = spec.initial();
  for (int id : order) {
    StepResult r = spec.step(state, Invocation{rs[id].op, rs[id].args});
    rets.push_back(r.ret);
    state = r.next_state;
  }
  return rets;
}

/// Checks the four suffix conditions for one concrete order of record ids.
inline bool order_satisfies(const TypeSpec& spec,
                            const std::vector<OperationRecord>& rs, int t,
                            const std::vector<int>& order) {
  // (1) every placed op is invoked in the history: true by construction.
  // (2) every completed op is placed.
  for (std::size_t i = 0; i < rs.size(); ++i)
    if (rs[i].completed() &&
        std::find(order.begin(), order.end(), static_cast<int>(i)) ==
            order.end())
      return false;
  // Legality is what the replay itself produces; condition (4) pins the
  // replayed returns of ops whose response event survives the cut.
  std::vector<Value> rets = returns_of(spec, rs, order);
  for (std::size_t k = 0; k < order.size(); ++k) {
    const OperationRecord& r = rs[order[k]];
    if (r.completed() && *r.res_index >= t && rets[k] != *r.ret) return false;
  }
  // (3) real-time pairs whose boundary events both lie in the suffix.
  for (std::size_t a = 0; a < order.size(); ++a) {
    for (std::size_t b = 0; b < order.size(); ++b) {
      const OperationRecord& o1 = rs[order[a]];
      const OperationRecord& o2 = rs[order[b]];
      if (!o1.completed()) continue;
      if (*o1.res_index >= t && o2.inv_index >= t &&
          *o1.res_index < o2.inv_index && a >= b)
        return false;
    }
  }
  return true;
}

}  // namespace detail

/// Exhaustive t-linearizability: every subset of pending ops, every
/// permutation of the chosen ops.
inline bool t_linearizable(const History& h, int t, const TypeSpec& spec) {
  std::vector<OperationRecord> rs = match_operations(h);
  std::vector<int> pending;
  std::vector<int> completed;
  for (std::size_t i = 0; i < rs.size(); ++i)
    (rs[i].completed() ? completed : pending).push_back(static_cast<int>(i));
  const std::size_t psets = std::size_t{1} << pending.size();
  for (std::size_t sel = 0; sel < psets; ++sel) {
    std::vector<int> chosen = completed;
    for (std::size_t b = 0; b < pending.size(); ++b)
      if (sel & (std::size_t{1} << b)) chosen.push_back(pending[b]);
    std::sort(chosen.begin(), chosen.end());
    if (chosen.empty()) {
      if (detail::order_satisfies(spec, rs, t, chosen)) return true;
      continue;
    }
    do {
      if (detail::order_satisfies(spec, rs, t, chosen)) return true;
    } while (std::next_permutation(chosen.begin(), chosen.end()));
  }
  return false;
}

inline int minimal_t(const History& h, const TypeSpec& spec) {
  for (int t = 0; static_cast<std::size_t>(t) <= h.size(); ++t)
    if (t_linearizable(h, t, spec)) return t;
  return -1;  // unreachable for well-formed histories
}

/// Exhaustive per-operation explanation search.
inline bool weakly_consistent(const History& h, const TypeSpec& spec) {
  std::vector<OperationRecord> rs = match_operations(h);
  for (std::size_t target = 0; target < rs.size(); ++target) {
    const OperationRecord& o1 = rs[target];
    if (!o1.completed()) continue;
    std::vector<int> pool;
    std::vector<int> required;
    for (std::size_t i = 0; i < rs.size(); ++i) {
      if (i == target) continue;
      if (rs[i].inv_index >= *o1.res_index) continue;
      pool.push_back(static_cast<int>(i));
      if (rs[i].proc == o1.proc && rs[i].inv_index < o1.inv_index)
        required.push_back(static_cast<int>(i));
    }
    bool explained = false;
    const std::size_t subsets = std::size_t{1} << pool.size();
    for (std::size_t sel = 0; sel < subsets && !explained; ++sel) {
      std::vector<int> chosen;
      for (std::size_t b = 0; b < pool.size(); ++b)
        if (sel & (std::size_t{1} << b)) chosen.push_back(pool[b]);
      bool has_required = true;
      for (int r : required)
        has_required = has_required && std::find(chosen.begin(), chosen.end(),
                                                 r) != chosen.end();
      if (!has_required) continue;
      std::sort(chosen.begin(), chosen.end());
      do {
        std::vector<int> order = chosen;
        order.push_back(static_cast<int>(target));
        std::vector<Value> rets = detail::returns_of(spec, rs, order);
        if (rets.back() == *o1.ret) {
          explained = true;
          break;
        }
      } while (std::next_permutation(chosen.begin(), chosen.end()));
    }
    if (!explained) return false;
  }
  return true;
}

/// Independent re-check that a witness emitted by the checker satisfies the
/// suffix conditions and legality for the given t.
inline bool witness_satisfies(const History& h, int t, const TypeSpec& spec,
                              const Linearization& lin) {
  std::vector<OperationRecord> rs = match_operations(h);
  std::vector<int> order;
  for (const LinearizedOp& o : lin.ops) {
    int found = -1;
    for (std::size_t i = 0; i < rs.size(); ++i)
      if (rs[i].inv_index == o.inv_index) found = static_cast<int>(i);
    if (found < 0) return false;  // op not part of the history
    if (std::find(order.begin(), order.end(), found) != order.end())
      return false;  // placed twice
    order.push_back(found);
  }
  // Recorded returns must be exactly the replay outputs (legality).
  std::vector<Value> rets = detail::returns_of(spec, rs, order);
  for (std::size_t k = 0; k < order.size(); ++k)
    if (lin.ops[k].ret != rets[k]) return false;
  return detail::order_satisfies(spec, rs, t, order);
}

}  // namespace evsync::oracle
