/// Python module exposing the laboratory's main operations over trace text:
/// record runs, decide consistency verdicts, and explore schedule trees.
/// Histories cross the language boundary as trace text in both directions,
/// so everything the module returns can be fed back in, written to a file
/// for the command-line binary, or diffed as plain strings.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "evsync/algorithms.hpp"
#include "evsync/checker.hpp"
#include "evsync/errors.hpp"
#include "evsync/explorer.hpp"
#include "evsync/history.hpp"
#include "evsync/runtime.hpp"
#include "evsync/type_spec.hpp"

namespace py = pybind11;
using namespace evsync;

namespace {

/// Accepts the policy names the command line takes plus raw schedule text:
/// "rr", "seq", "seed:<u64>", or anything else parsed as schedule tokens.
Schedule schedule_by_spec(const std::string& spec) {
  if (spec == "rr") return Schedule::round_robin();
  if (spec == "seq") return Schedule::sequential();
  if (spec.rfind("seed:", 0) == 0) {
    const std::string digits = spec.substr(5);
    std::size_t used = 0;
    std::uint64_t seed = 0;
    try {
      seed = std::stoull(digits, &used);
    } catch (const std::exception&) {
      throw Error("bad seed in '" + spec + "'");
    }
    if (used != digits.size() || digits.empty())
      throw Error("bad seed in '" + spec + "'");
    return Schedule::seeded(seed);
  }
  return Schedule::fixed(parse_schedule(spec));
}

Algorithm named(const std::string& algo, const std::string& base, int procs) {
  Algorithm a = algorithm_by_name(algo, base);
  if (a.required_procs > 0 && procs != a.required_procs)
    throw Error("'" + algo + "' requires exactly " +
                std::to_string(a.required_procs) + " processes");
  return a;
}

py::object opt_int(const std::optional<int>& v) {
  if (v) return py::int_(*v);
  return py::none();
}

}  // namespace

PYBIND11_MODULE(_evsync, m) {
  m.doc() =
      "Laboratory for eventually linearizable shared objects.  Histories are "
      "passed as trace text: one event per line, 'inv <proc> <obj> <op> "
      "[args]' or 'res <proc> <obj> <op> <value>'.";

  // Subclass translators must be tried before the base's, so the base
  // comes first (translators run newest-first).
  auto base_exc = py::register_exception<Error>(m, "Error");
  py::register_exception<UndeclaredOp>(m, "UndeclaredOp", base_exc);
  py::register_exception<NotSequential>(m, "NotSequential", base_exc);
  py::register_exception<MalformedHistory>(m, "MalformedHistory", base_exc);
  py::register_exception<ParseError>(m, "ParseError", base_exc);
  py::register_exception<TooLarge>(m, "TooLarge", base_exc);
  py::register_exception<OutOfRange>(m, "OutOfRange", base_exc);
  py::register_exception<KindMismatch>(m, "KindMismatch", base_exc);
  py::register_exception<InvalidSchedule>(m, "InvalidSchedule", base_exc);
  py::register_exception<IncompleteView>(m, "IncompleteView", base_exc);
  py::register_exception<NotAPrefix>(m, "NotAPrefix", base_exc);

  m.def("builtin_types", &builtin_spec_names,
        "Names of the sequential type specifications.");
  m.def("algorithms", &algorithm_names,
        "Names accepted by run() and the explorers.");

  m.def(
      "normalize",
      [](const std::string& text) { return format_trace(parse_trace(text)); },
      py::arg("trace"),
      "Parse trace text and print it back in canonical form.");

  m.def(
      "is_legal",
      [](const std::string& type, const std::string& trace) {
        return is_legal(builtin_spec(type), parse_trace(trace));
      },
      py::arg("type"), py::arg("trace"),
      "Whether a sequential trace satisfies the type's specification.");

  m.def(
      "replay",
      [](const std::string& type, const std::string& op,
         const std::vector<int>& int_args, int times) {
        const TypeSpec& spec = builtin_spec(type);
        Invocation inv{op, {}};
        for (int a : int_args) inv.args.push_back(Value::integer(a));
        std::vector<std::string> rets;
        Value state = spec.initial();
        for (int i = 0; i < times; ++i) {
          StepResult r = spec.step(state, inv);
          rets.push_back(r.ret.str());
          state = r.next_state;
        }
        return std::make_pair(rets, state.str());
      },
      py::arg("type"), py::arg("op"), py::arg("args") = std::vector<int>{},
      py::arg("times") = 1,
      "Apply one operation repeatedly from the initial state; returns "
      "(returns, final state) as text.");

  m.def(
      "run",
      [](const std::string& algo, int procs, int ops,
         const std::string& schedule, const std::string& base) {
        Algorithm a = named(algo, base, procs);
        RunResult r = run(a, a.default_workload(procs, ops),
                          schedule_by_spec(schedule));
        return format_trace(r.history);
      },
      py::arg("algo"), py::arg("procs") = 2, py::arg("ops") = 1,
      py::arg("schedule") = "rr", py::arg("base") = "atomic-fac",
      "Drive one run and return its history as trace text.");

  m.def(
      "check",
      [](const std::string& trace, const std::string& type, int cap) {
        CheckReport r = check_eventual(parse_trace(trace), builtin_spec(type),
                                       cap);
        py::dict d;
        d["well_formed"] = r.well_formed;
        d["weakly_consistent"] = r.weakly_consistent;
        d["minimal_t"] = opt_int(r.minimal_t);
        d["witness"] = r.witness ? py::object(py::str(render_witness(
                                       *r.witness)))
                                 : py::none();
        d["report"] = render_report(r);
        return d;
      },
      py::arg("trace"), py::arg("type"), py::arg("cap") = kDefaultOpCap,
      "Full verdict on a trace: well-formedness, weak consistency, and the "
      "smallest accepted offset with its witness.");

  m.def(
      "weakly_consistent",
      [](const std::string& trace, const std::string& type, int cap) {
        return check_weak_consistency(parse_trace(trace), builtin_spec(type),
                                      cap)
            .ok;
      },
      py::arg("trace"), py::arg("type"), py::arg("cap") = kDefaultOpCap,
      "Whether every completed operation has an explanation.");

  m.def(
      "t_linearizable",
      [](const std::string& trace, int t, const std::string& type,
         int cap) -> py::object {
        std::optional<Linearization> lin = check_t_linearizable(
            parse_trace(trace), t, builtin_spec(type), cap);
        if (!lin) return py::none();
        return py::str(render_witness(*lin));
      },
      py::arg("trace"), py::arg("t"), py::arg("type"),
      py::arg("cap") = kDefaultOpCap,
      "Witness text when the trace is linearizable from offset t on, else "
      "None.");

  m.def(
      "find_non_linearizable",
      [](const std::string& algo, int procs, int ops, int depth,
         const std::string& base) -> py::object {
        Algorithm a = named(algo, base, procs);
        EnumerateOptions opt;
        opt.depth = depth;
        NonLinResult r =
            find_non_linearizable(a, a.default_workload(procs, ops), opt);
        if (!r.history) return py::none();
        py::dict d;
        d["trace"] = format_trace(*r.history);
        d["schedule"] = format_schedule_inline(r.schedule);
        return d;
      },
      py::arg("algo"), py::arg("procs") = 2, py::arg("ops") = 1,
      py::arg("depth") = 8, py::arg("base") = "atomic-fac",
      "Shortest history under the depth bound that fails at offset 0, as "
      "{'trace', 'schedule'}, or None.");

  m.def(
      "find_stable",
      [](const std::string& algo, int procs, int ops, int depth, int horizon,
         const std::string& base) {
        Algorithm a = named(algo, base, procs);
        StableReport r = find_stable_node(a, a.default_workload(procs, ops),
                                          depth, horizon);
        std::vector<py::dict> out;
        for (const StableCandidate& c : r.candidates) {
          py::dict d;
          d["path"] = format_schedule_inline(c.path);
          d["events"] = c.event_length;
          out.push_back(std::move(d));
        }
        return out;
      },
      py::arg("algo"), py::arg("procs") = 2, py::arg("ops") = 1,
      py::arg("depth") = 4, py::arg("horizon") = 8,
      py::arg("base") = "atomic-fac",
      "Nodes at or above the depth whose whole subtree (to the horizon) "
      "stays linearizable from the node's own event count on.");

  m.def(
      "prefix_safety",
      [](const std::string& algo, int procs, int ops, int depth, int t,
         const std::string& base) {
        Algorithm a = named(algo, base, procs);
        SafetyReport r =
            prefix_safety_scan(a, a.default_workload(procs, ops), depth, t);
        return r.violations_total;
      },
      py::arg("algo"), py::arg("procs") = 2, py::arg("ops") = 1,
      py::arg("depth") = 8, py::arg("t") = 0, py::arg("base") = "atomic-fac",
      "Counts nodes that pass at offset t under an ancestor that failed; "
      "expected to be zero (failures are permanent).");
}
