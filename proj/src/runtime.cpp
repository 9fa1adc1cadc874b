#include "evsync/runtime.hpp"

#include <cctype>
#include <memory>
#include <random>
#include <sstream>
#include <utility>

#include "evsync/errors.hpp"

namespace evsync {

namespace {

bool is_integer_token(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

/// -------------------------------------------------------------- base objects

Value chaos_canonical(const ChaosFac& c) {
  Value::List items;
  for (auto it = c.forks.rbegin(); it != c.forks.rend(); ++it)
    for (const Value& v : it->as_list()) items.push_back(v);
  for (const Value& v : c.list.as_list()) items.push_back(v);
  return Value::list(std::move(items));
}

BaseCommand BaseCommand::read(std::string target) {
  return {BaseCommandKind::Read, std::move(target), Value::nil()};
}
BaseCommand BaseCommand::write(std::string target, Value v) {
  return {BaseCommandKind::Write, std::move(target), std::move(v)};
}
BaseCommand BaseCommand::faa(std::string target) {
  return {BaseCommandKind::Faa, std::move(target), Value::nil()};
}
BaseCommand BaseCommand::fac(std::string target, Value v) {
  return {BaseCommandKind::Fac, std::move(target), std::move(v)};
}
BaseCommand BaseCommand::ret(Value v) {
  return {BaseCommandKind::Return, {}, std::move(v)};
}

/// ----------------------------------------------------------- schedule tokens

std::string to_string(const ScheduleToken& t) {
  const char* kind = t.kind == TokenKind::Start  ? "start"
                     : t.kind == TokenKind::Step ? "step"
                                                 : "crash";
  return std::string(kind) + " " + std::to_string(t.proc);
}

std::string format_schedule(const std::vector<ScheduleToken>& tokens) {
  std::string out;
  for (const ScheduleToken& t : tokens) {
    out += to_string(t);
    out += '\n';
  }
  return out;
}

std::string format_schedule_inline(const std::vector<ScheduleToken>& tokens) {
  std::string out;
  for (const ScheduleToken& t : tokens) {
    if (!out.empty()) out += ", ";
    out += to_string(t);
  }
  return out;
}

std::vector<ScheduleToken> parse_schedule(const std::string& text) {
  std::vector<ScheduleToken> tokens;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string line = text.substr(
        pos, eol == std::string::npos ? std::string::npos : eol - pos);
    ++line_no;
    pos = eol == std::string::npos ? text.size() + 1 : eol + 1;

    if (line.find('\r') != std::string::npos)
      throw ParseError(line_no, "carriage return in schedule");
    if (std::size_t hash = line.find('#'); hash != std::string::npos)
      line.resize(hash);
    for (char& c : line)
      if (c == ',' || c == ';') c = ' ';

    std::istringstream in(line);
    std::string word;
    while (in >> word) {
      TokenKind kind;
      if (word == "start")
        kind = TokenKind::Start;
      else if (word == "step")
        kind = TokenKind::Step;
      else if (word == "crash")
        kind = TokenKind::Crash;
      else
        throw ParseError(line_no, "unknown schedule token '" + word + "'");
      std::string proc;
      if (!(in >> proc) || !is_integer_token(proc))
        throw ParseError(line_no, "'" + word + "' needs a process number");
      tokens.push_back({kind, std::stoi(proc)});
    }
  }
  return tokens;
}

/// -------------------------------------------------------------- the machine

Simulation::Simulation(Algorithm algo, Workload workload)
    : algo_(std::move(algo)), workload_(std::move(workload)) {
  int procs = static_cast<int>(workload_.size());
  if (procs < 1) throw Error("a run needs at least one process");
  if (algo_.required_procs != -1 && procs != algo_.required_procs)
    throw Error("algorithm '" + algo_.name + "' requires exactly " +
                std::to_string(algo_.required_procs) + " processes, got " +
                std::to_string(procs));
  bases_ = algo_.make_bases(procs);
  for (auto& [name, obj] : bases_) {
    if (auto* c = std::get_if<ChaosFac>(&obj)) {
      if (c->merge_at < 1)
        throw Error("base object '" + name + "': merge point must be >= 1");
      if (c->forks.empty())
        c->forks.assign(static_cast<std::size_t>(procs), Value::list({}));
    }
  }
  per_proc_.resize(static_cast<std::size_t>(procs));
  for (PerProc& p : per_proc_) p.persistent = algo_.initial_persistent;
  int total_ops = 0;
  for (const auto& ops : workload_) total_ops += static_cast<int>(ops.size());
  bound_ = algo_.access_bound(procs, total_ops);
}

Simulation::Simulation(Algorithm algo, Workload workload,
                       const SimConfig& resume)
    : Simulation(std::move(algo), std::move(workload)) {
  if (resume.persistents.size() != per_proc_.size())
    throw Error("resume configuration is for " +
                std::to_string(resume.persistents.size()) +
                " processes, workload has " +
                std::to_string(per_proc_.size()));
  bases_ = resume.bases;
  for (std::size_t p = 0; p < per_proc_.size(); ++p)
    per_proc_[p].persistent = resume.persistents[p];
}

void Simulation::check_proc(int p) const {
  if (p < 0 || p >= procs())
    throw InvalidSchedule("no process " + std::to_string(p));
}

bool Simulation::crashed(int p) const {
  check_proc(p);
  return per_proc_[static_cast<std::size_t>(p)].crashed;
}

bool Simulation::busy(int p) const {
  check_proc(p);
  return per_proc_[static_cast<std::size_t>(p)].frame.has_value();
}

bool Simulation::can_start(int p) const {
  check_proc(p);
  const PerProc& pp = per_proc_[static_cast<std::size_t>(p)];
  return !pp.crashed && !pp.frame &&
         pp.next_op < workload_[static_cast<std::size_t>(p)].size();
}

bool Simulation::all_done() const {
  for (int p = 0; p < procs(); ++p) {
    const PerProc& pp = per_proc_[static_cast<std::size_t>(p)];
    if (pp.crashed) continue;
    if (pp.frame || pp.next_op < workload_[static_cast<std::size_t>(p)].size())
      return false;
  }
  return true;
}

void Simulation::apply(const ScheduleToken& t) {
  check_proc(t.proc);
  PerProc& pp = per_proc_[static_cast<std::size_t>(t.proc)];
  switch (t.kind) {
    case TokenKind::Start: {
      if (pp.crashed)
        throw InvalidSchedule("'" + to_string(t) + "': process has crashed");
      if (pp.frame)
        throw InvalidSchedule("'" + to_string(t) +
                              "': an operation is already in flight");
      const auto& ops = workload_[static_cast<std::size_t>(t.proc)];
      if (pp.next_op >= ops.size())
        throw InvalidSchedule("'" + to_string(t) + "': workload exhausted");
      Frame f;
      f.inv = ops[pp.next_op];
      ++pp.next_op;
      hist_.append_invocation(t.proc, "O", f.inv.op, f.inv.args);
      pp.frame = std::move(f);
      break;
    }
    case TokenKind::Step: {
      if (pp.crashed)
        throw InvalidSchedule("'" + to_string(t) + "': process has crashed");
      if (!pp.frame) break;  // stepping an idle process does nothing
      Frame& f = *pp.frame;
      StepCtx ctx{t.proc,  procs(), f.pc, f.locals,
                  pp.persistent, f.inv,   f.last};
      BaseCommand cmd = algo_.step(ctx);
      if (cmd.kind == BaseCommandKind::Return) {
        hist_.append_response(t.proc, "O", f.inv.op, cmd.argument);
        op_accesses_.push_back(f.accesses);
        pp.frame.reset();
      } else {
        ++f.accesses;
        if (f.accesses > bound_)
          throw Error("operation " + f.inv.str() + " of process " +
                      std::to_string(t.proc) + " exceeded the access bound " +
                      std::to_string(bound_));
        f.last = base_access(cmd, t.proc);
      }
      break;
    }
    case TokenKind::Crash: {
      if (pp.crashed)
        throw InvalidSchedule("'" + to_string(t) +
                              "': process has already crashed");
      pp.crashed = true;
      pp.frame.reset();
      break;
    }
  }
  ++ticks_;
}

void Simulation::run_to_return(int p) {
  while (busy(p)) apply({TokenKind::Step, p});
}

std::vector<ScheduleToken> Simulation::productive_tokens() const {
  std::vector<ScheduleToken> out;
  for (int p = 0; p < procs(); ++p) {
    if (can_start(p))
      out.push_back({TokenKind::Start, p});
    else if (busy(p))
      out.push_back({TokenKind::Step, p});
  }
  return out;
}

Value Simulation::base_access(const BaseCommand& cmd, int proc) {
  auto it = bases_.find(cmd.target);
  if (it == bases_.end()) {
    bool lazy = false;
    for (const std::string& prefix : algo_.lazy_register_prefixes)
      if (cmd.target.rfind(prefix, 0) == 0) lazy = true;
    if (!lazy) throw Error("unknown base object '" + cmd.target + "'");
    it = bases_.emplace(cmd.target, AtomicRegister{Value::nil()}).first;
  }
  BaseObject& obj = it->second;
  switch (cmd.kind) {
    case BaseCommandKind::Read: {
      auto* r = std::get_if<AtomicRegister>(&obj);
      if (!r) throw KindMismatch("read on non-register '" + cmd.target + "'");
      return r->value;
    }
    case BaseCommandKind::Write: {
      auto* r = std::get_if<AtomicRegister>(&obj);
      if (!r) throw KindMismatch("write on non-register '" + cmd.target + "'");
      r->value = cmd.argument;
      return Value::nil();
    }
    case BaseCommandKind::Faa: {
      auto* f = std::get_if<AtomicFaa>(&obj);
      if (!f) throw KindMismatch("faa on non-counter '" + cmd.target + "'");
      Value pre = Value::integer(f->value);
      ++f->value;
      return pre;
    }
    case BaseCommandKind::Fac: {
      if (auto* f = std::get_if<AtomicFac>(&obj)) {
        Value pre = f->list;
        f->list = f->list.cons(cmd.argument);
        return pre;
      }
      if (auto* c = std::get_if<ChaosFac>(&obj)) {
        ++c->accesses;
        if (!c->merged && c->accesses < c->merge_at) {
          Value& fork = c->forks[static_cast<std::size_t>(proc)];
          Value pre = fork;
          fork = fork.cons(cmd.argument);
          return pre;
        }
        if (!c->merged) {
          c->list = chaos_canonical(*c);
          c->forks.clear();
          c->merged = true;
        }
        Value pre = c->list;
        c->list = c->list.cons(cmd.argument);
        return pre;
      }
      throw KindMismatch("fac on non-list '" + cmd.target + "'");
    }
    case BaseCommandKind::Return:
      throw Error("return is not a base access");
  }
  throw Error("unreachable base command kind");
}

SimConfig Simulation::config() const {
  SimConfig cfg;
  cfg.bases = bases_;
  for (const PerProc& pp : per_proc_) cfg.persistents.push_back(pp.persistent);
  return cfg;
}

std::string Simulation::state_key() const {
  std::string key = "B{";
  for (const auto& [name, obj] : bases_) {
    key += name;
    key += '=';
    if (const auto* r = std::get_if<AtomicRegister>(&obj)) {
      key += 'r';
      key += r->value.str();
    } else if (const auto* f = std::get_if<AtomicFaa>(&obj)) {
      key += 'a';
      key += std::to_string(f->value);
    } else if (const auto* c = std::get_if<AtomicFac>(&obj)) {
      key += 'c';
      key += c->list.str();
    } else if (const auto* x = std::get_if<ChaosFac>(&obj)) {
      key += 'x';
      key += std::to_string(x->merge_at) + "," +
             std::to_string(x->accesses) + "," + (x->merged ? "1" : "0") +
             "," + x->list.str();
      for (const Value& fork : x->forks) {
        key += '/';
        key += fork.str();
      }
    }
    key += ';';
  }
  key += "}P{";
  for (const PerProc& pp : per_proc_) {
    if (pp.crashed) {
      key += "X;";
      continue;
    }
    key += pp.persistent.str();
    key += '@';
    key += std::to_string(pp.next_op);
    if (pp.frame) {
      const Frame& f = *pp.frame;
      key += ":pc" + std::to_string(f.pc) + ",l" + f.last.str() + ",i" +
             f.inv.str() + ",a" + std::to_string(f.accesses) + ",{";
      for (const auto& [k, v] : f.locals) key += k + "=" + v.str() + ",";
      key += '}';
    }
    key += ';';
  }
  key += '}';
  return key;
}

/// ----------------------------------------------------------------- schedules

Schedule::Schedule(
    std::string label,
    std::function<std::optional<ScheduleToken>(const Simulation&)> fn)
    : label_(std::move(label)), policy_(std::move(fn)) {}

std::optional<ScheduleToken> Schedule::next(const Simulation& sim) {
  return policy_(sim);
}

Schedule Schedule::round_robin() {
  auto cursor = std::make_shared<int>(0);
  return Schedule("rr", [cursor](const Simulation& sim)
                            -> std::optional<ScheduleToken> {
    int n = sim.procs();
    for (int i = 0; i < n; ++i) {
      int p = (*cursor + i) % n;
      if (sim.can_start(p)) {
        *cursor = (p + 1) % n;
        return ScheduleToken{TokenKind::Start, p};
      }
      if (sim.busy(p)) {
        *cursor = (p + 1) % n;
        return ScheduleToken{TokenKind::Step, p};
      }
    }
    return std::nullopt;
  });
}

Schedule Schedule::sequential() {
  return Schedule("seq", [](const Simulation& sim)
                             -> std::optional<ScheduleToken> {
    for (int p = 0; p < sim.procs(); ++p) {
      if (sim.busy(p)) return ScheduleToken{TokenKind::Step, p};
      if (sim.can_start(p)) return ScheduleToken{TokenKind::Start, p};
    }
    return std::nullopt;
  });
}

Schedule Schedule::seeded(std::uint64_t seed, int crash_percent) {
  auto rng = std::make_shared<std::mt19937_64>(seed);
  auto crash_spent = std::make_shared<bool>(false);
  return Schedule(
      "seed=" + std::to_string(seed),
      [rng, crash_percent, crash_spent](const Simulation& sim)
          -> std::optional<ScheduleToken> {
        std::vector<ScheduleToken> candidates = sim.productive_tokens();
        if (candidates.empty()) return std::nullopt;
        // At most one crash per run: the fault model under study is a single
        // crash-stop failure.
        if (crash_percent > 0 && !*crash_spent &&
            static_cast<int>((*rng)() % 100) < crash_percent) {
          *crash_spent = true;
          const ScheduleToken& victim =
              candidates[(*rng)() % candidates.size()];
          return ScheduleToken{TokenKind::Crash, victim.proc};
        }
        return candidates[(*rng)() % candidates.size()];
      });
}

Schedule Schedule::fixed(std::vector<ScheduleToken> tokens) {
  auto state = std::make_shared<
      std::pair<std::vector<ScheduleToken>, std::size_t>>(std::move(tokens),
                                                          0);
  return Schedule("fixed",
                  [state](const Simulation&) -> std::optional<ScheduleToken> {
                    if (state->second >= state->first.size())
                      return std::nullopt;
                    return state->first[state->second++];
                  });
}

RunResult run(const Algorithm& algo, const Workload& workload,
              Schedule schedule) {
  Simulation sim(algo, workload);
  while (auto token = schedule.next(sim)) sim.apply(*token);
  return RunResult{sim.history(), sim.ticks(), sim.op_access_counts(),
                   sim.declared_bound()};
}

}  // namespace evsync
