#include "evsync/algorithms.hpp"

#include <algorithm>
#include <functional>
#include <optional>

#include "evsync/errors.hpp"

namespace evsync {

namespace {

Workload uniform_workload(int procs, int ops_per_proc,
                          const std::function<Invocation(int p, int j)>& op) {
  Workload w(static_cast<std::size_t>(procs));
  for (int p = 0; p < procs; ++p)
    for (int j = 0; j < ops_per_proc; ++j)
      w[static_cast<std::size_t>(p)].push_back(op(p, j));
  return w;
}

/// Distinct small integers across processes and positions.
std::int64_t distinct_arg(int procs, int p, int j) {
  return 1 + static_cast<std::int64_t>(j) * procs + p;
}

Workload workload_for_spec(const std::string& spec_name, int procs,
                           int ops_per_proc) {
  if (spec_name == "tas")
    return uniform_workload(procs, ops_per_proc,
                            [](int, int) { return Invocation{"tas", {}}; });
  if (spec_name == "faa")
    return uniform_workload(procs, ops_per_proc,
                            [](int, int) { return Invocation{"faa", {}}; });
  if (spec_name == "consensus")
    return uniform_workload(procs, ops_per_proc, [procs](int p, int j) {
      return Invocation{"propose",
                        {Value::integer(distinct_arg(procs, p, j))}};
    });
  if (spec_name == "fac")
    return uniform_workload(procs, ops_per_proc, [procs](int p, int j) {
      return Invocation{"fac", {Value::integer(distinct_arg(procs, p, j))}};
    });
  if (spec_name == "register")
    return uniform_workload(procs, ops_per_proc, [procs](int p, int j) {
      if (j % 2 == 1) return Invocation{"read", {}};
      return Invocation{"write",
                        {Value::integer(distinct_arg(procs, p, j))}};
    });
  throw Error("no default workload for spec '" + spec_name + "'");
}

std::string cell(const char* family, int owner, std::int64_t index) {
  return std::string(family) + std::to_string(owner) + "_" +
         std::to_string(index);
}

/// Decodes a log entry written by the universal construction.
Invocation decode_log_entry(const Value& entry) {
  const Value::List& items = entry.as_list();
  if (items.empty()) throw Error("empty operation log entry");
  Invocation inv{items[0].as_symbol(), {}};
  inv.args.assign(items.begin() + 1, items.end());
  return inv;
}

Value encode_log_entry(const Invocation& inv) {
  Value::List items{Value::symbol(inv.op)};
  items.insert(items.end(), inv.args.begin(), inv.args.end());
  return Value::list(std::move(items));
}

}  // namespace

Algorithm ev_tas() {
  Algorithm a;
  a.name = "ev-tas";
  a.spec = builtin_spec("tas");
  a.make_bases = [](int) {
    return std::map<std::string, BaseObject>{
        {"r", AtomicRegister{Value::integer(0)}}};
  };
  a.step = [](StepCtx& ctx) -> BaseCommand {
    switch (ctx.pc) {
      case 0:
        ctx.pc = 1;
        return BaseCommand::read("r");
      case 1:
        if (ctx.last == Value::integer(0)) {
          ctx.pc = 2;
          return BaseCommand::write("r", Value::integer(1));
        }
        return BaseCommand::ret(Value::boolean(false));
      default:
        return BaseCommand::ret(Value::boolean(true));
    }
  };
  a.access_bound = [](int, int) { return 2; };
  a.default_workload = [](int procs, int k) {
    return workload_for_spec("tas", procs, k);
  };
  return a;
}

Algorithm ev_consensus() {
  Algorithm a;
  a.name = "ev-consensus";
  a.spec = builtin_spec("consensus");
  a.make_bases = [](int procs) {
    std::map<std::string, BaseObject> bases;
    for (int i = 0; i < procs; ++i)
      bases.emplace("prop" + std::to_string(i),
                    AtomicRegister{Value::nil()});
    return bases;
  };
  a.step = [](StepCtx& ctx) -> BaseCommand {
    switch (ctx.pc) {
      case 0:
        ctx.pc = 1;
        return BaseCommand::write("prop" + std::to_string(ctx.proc),
                                  ctx.inv.args.at(0));
      case 1:
        ctx.locals["i"] = Value::integer(0);
        ctx.pc = 2;
        return BaseCommand::read("prop0");
      default: {
        if (!ctx.last.is_null()) return BaseCommand::ret(ctx.last);
        std::int64_t i = ctx.locals["i"].as_int() + 1;
        if (i >= ctx.procs)
          throw Error("proposal scan ran past its own slot");
        ctx.locals["i"] = Value::integer(i);
        return BaseCommand::read("prop" + std::to_string(i));
      }
    }
  };
  a.access_bound = [](int procs, int) { return procs + 1; };
  a.default_workload = [](int procs, int k) {
    return workload_for_spec("consensus", procs, k);
  };
  return a;
}

Value reorder_list(const std::vector<std::pair<std::int64_t, Value>>& own,
                   const std::vector<Value>& other_seq,
                   const std::vector<Value>& other_idx, std::int64_t ind) {
  if (ind < 0) throw OutOfRange("negative ticket");
  std::size_t slots_n = static_cast<std::size_t>(ind);
  if (other_seq.size() != slots_n || other_idx.size() != slots_n)
    throw OutOfRange("peer cell vectors must cover exactly the tickets 0.." +
                     std::to_string(ind) + "-1");
  std::vector<std::optional<Value>> slots(slots_n);
  auto place = [&](std::int64_t t, const Value& v) {
    if (t < 0 || t >= ind || slots[static_cast<std::size_t>(t)])
      throw IncompleteView("two observations claim ticket " +
                           std::to_string(t));
    slots[static_cast<std::size_t>(t)] = v;
  };
  for (const auto& [t, v] : own)
    if (t < ind) place(t, v);
  std::vector<Value> unindexed;  // peer values that published no ticket yet
  for (std::size_t j = 0; j < slots_n; ++j) {
    if (!other_idx[j].is_null()) {
      std::int64_t t = other_idx[j].as_int();
      if (t >= ind) continue;  // serialized after this operation
      if (other_seq[j].is_null())
        throw IncompleteView("ticket " + std::to_string(t) +
                             " observed without its value");
      place(t, other_seq[j]);
    } else if (!other_seq[j].is_null()) {
      unindexed.push_back(other_seq[j]);
    }
  }
  std::size_t next = 0;
  for (std::size_t t = 0; t < slots_n; ++t) {
    if (slots[t]) continue;
    if (next >= unindexed.size())
      throw IncompleteView("no observation for ticket " + std::to_string(t));
    slots[t] = unindexed[next++];
  }
  Value::List result;  // newest-first: highest ticket first
  for (std::size_t t = slots_n; t-- > 0;) result.push_back(*slots[t]);
  return Value::list(std::move(result));
}

Algorithm two_fac() {
  Algorithm a;
  a.name = "2fac";
  a.required_procs = 2;
  a.spec = builtin_spec("fac");
  a.make_bases = [](int) {
    return std::map<std::string, BaseObject>{{"T", AtomicFaa{}}};
  };
  a.lazy_register_prefixes = {"seq", "idx"};
  a.initial_persistent = Value::list({Value::integer(0)});
  a.step = [](StepCtx& ctx) -> BaseCommand {
    int other = 1 - ctx.proc;
    auto finish = [&ctx]() -> BaseCommand {
      std::int64_t ind = ctx.locals["ind"].as_int();
      const Value::List& mem = ctx.persistent.as_list();
      std::vector<std::pair<std::int64_t, Value>> own;
      for (std::size_t i = 1; i < mem.size(); ++i) {
        const Value::List& pair = mem[i].as_list();
        own.emplace_back(pair.at(0).as_int(), pair.at(1));
      }
      auto uncons = [](const Value& acc) {
        std::vector<Value> cells(acc.as_list().rbegin(),
                                 acc.as_list().rend());
        return cells;
      };
      Value result = reorder_list(own, uncons(ctx.locals["oseq"]),
                                  uncons(ctx.locals["oidx"]), ind);
      Value::List mem2 = mem;
      mem2[0] = Value::integer(mem[0].as_int() + 1);
      mem2.push_back(
          Value::list({Value::integer(ind), ctx.inv.args.at(0)}));
      ctx.persistent = Value::list(std::move(mem2));
      return BaseCommand::ret(result);
    };
    switch (ctx.pc) {
      case 0: {
        std::int64_t c = ctx.persistent.as_list().at(0).as_int();
        ctx.locals["c"] = Value::integer(c);
        ctx.pc = 1;
        return BaseCommand::write(cell("seq", ctx.proc, c),
                                  ctx.inv.args.at(0));
      }
      case 1:
        ctx.pc = 2;
        return BaseCommand::faa("T");
      case 2:
        ctx.locals["ind"] = ctx.last;
        ctx.pc = 3;
        return BaseCommand::write(cell("idx", ctx.proc,
                                       ctx.locals["c"].as_int()),
                                  ctx.last);
      case 3: {
        ctx.locals["oidx"] = Value::list({});
        ctx.locals["oseq"] = Value::list({});
        if (ctx.locals["ind"].as_int() == 0) return finish();
        ctx.locals["j"] = Value::integer(0);
        ctx.pc = 4;
        return BaseCommand::read(cell("idx", other, 0));
      }
      case 4: {
        ctx.locals["oidx"] = ctx.locals["oidx"].cons(ctx.last);
        std::int64_t j = ctx.locals["j"].as_int() + 1;
        if (j < ctx.locals["ind"].as_int()) {
          ctx.locals["j"] = Value::integer(j);
          return BaseCommand::read(cell("idx", other, j));
        }
        ctx.locals["j"] = Value::integer(0);
        ctx.pc = 5;
        return BaseCommand::read(cell("seq", other, 0));
      }
      default: {
        ctx.locals["oseq"] = ctx.locals["oseq"].cons(ctx.last);
        std::int64_t j = ctx.locals["j"].as_int() + 1;
        if (j < ctx.locals["ind"].as_int()) {
          ctx.locals["j"] = Value::integer(j);
          return BaseCommand::read(cell("seq", other, j));
        }
        return finish();
      }
    }
  };
  a.access_bound = [](int, int total_ops) { return 3 + 2 * total_ops; };
  a.default_workload = [](int procs, int k) {
    return workload_for_spec("fac", procs, k);
  };
  return a;
}

Algorithm universal(const TypeSpec& spec, BaseObject shared_list) {
  Algorithm a;
  a.name = "universal:" + spec.name();
  a.spec = spec;
  a.make_bases = [shared_list](int) {
    return std::map<std::string, BaseObject>{{"F", shared_list}};
  };
  a.step = [spec](StepCtx& ctx) -> BaseCommand {
    if (ctx.pc == 0) {
      ctx.pc = 1;
      return BaseCommand::fac("F", encode_log_entry(ctx.inv));
    }
    // Replay the log oldest-first (it is stored newest-first), then answer
    // the operation from the reached state.
    Value state = spec.initial();
    const Value::List& log = ctx.last.as_list();
    for (auto it = log.rbegin(); it != log.rend(); ++it)
      state = spec.step(state, decode_log_entry(*it)).next_state;
    return BaseCommand::ret(spec.step(state, ctx.inv).ret);
  };
  a.access_bound = [](int, int) { return 1; };
  std::string spec_name = spec.name();
  a.default_workload = [spec_name](int procs, int k) {
    return workload_for_spec(spec_name, procs, k);
  };
  return a;
}

Algorithm direct_fac(BaseObject shared_list) {
  Algorithm a;
  a.name = "direct-fac";
  a.spec = builtin_spec("fac");
  a.make_bases = [shared_list](int) {
    return std::map<std::string, BaseObject>{{"F", shared_list}};
  };
  a.step = [](StepCtx& ctx) -> BaseCommand {
    if (ctx.pc == 0) {
      ctx.pc = 1;
      return BaseCommand::fac("F", ctx.inv.args.at(0));
    }
    return BaseCommand::ret(ctx.last);
  };
  a.access_bound = [](int, int) { return 1; };
  a.default_workload = [](int procs, int k) {
    return workload_for_spec("fac", procs, k);
  };
  return a;
}

BaseObject base_by_name(const std::string& name) {
  if (name == "atomic-fac") return AtomicFac{};
  const std::string chaos = "chaos-fac:";
  if (name.rfind(chaos, 0) == 0) {
    int k = 0;
    try {
      std::size_t used = 0;
      k = std::stoi(name.substr(chaos.size()), &used);
      if (used != name.size() - chaos.size()) throw Error("trailing text");
    } catch (const std::exception&) {
      throw Error("bad merge point in '" + name + "'");
    }
    if (k < 1) throw Error("merge point must be >= 1 in '" + name + "'");
    ChaosFac c;
    c.merge_at = k;
    return c;
  }
  throw Error("unknown shared-list kind '" + name + "'");
}

Algorithm algorithm_by_name(const std::string& algo, const std::string& base) {
  if (algo == "ev-tas") return ev_tas();
  if (algo == "ev-consensus") return ev_consensus();
  if (algo == "2fac") return two_fac();
  if (algo == "direct-fac") return direct_fac(base_by_name(base));
  const std::string uni = "universal:";
  if (algo.rfind(uni, 0) == 0)
    return universal(builtin_spec(algo.substr(uni.size())),
                     base_by_name(base));
  throw Error("unknown algorithm '" + algo + "'");
}

std::vector<std::string> algorithm_names() {
  std::vector<std::string> names{"ev-tas", "ev-consensus", "2fac",
                                 "direct-fac"};
  for (const Symbol& s : builtin_spec_names())
    names.push_back("universal:" + s);
  return names;
}

}  // namespace evsync
