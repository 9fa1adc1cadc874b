#include <doctest.h>

#include <random>

#include "evsync/checker.hpp"
#include "evsync/errors.hpp"
#include "fixtures.hpp"
#include "oracle.hpp"

using namespace evsync;
using namespace evsync::testdata;

namespace {

History trace(const char* text) { return parse_trace(text); }

/// Random history that interleaves per-process chains; clean ones assign
/// returns by stepping the spec at the response event (so they are
/// 0-linearizable by construction), corrupted ones then tamper with returns.
History random_history(std::mt19937_64& rng, const TypeSpec& spec,
                       bool corrupt) {
  int procs = 1 + static_cast<int>(rng() % 3);
  struct P {
    int remaining;
    bool open = false;
    Invocation inv;
  };
  std::vector<P> ps(procs);
  for (auto& p : ps) p.remaining = static_cast<int>(rng() % 3);
  History h;
  Value state = spec.initial();
  for (;;) {
    std::vector<int> live;
    for (int p = 0; p < procs; ++p)
      if (ps[p].open || ps[p].remaining > 0) live.push_back(p);
    if (live.empty()) break;
    int p = live[rng() % live.size()];
    if (ps[p].open) {
      StepResult r = spec.step(state, ps[p].inv);
      state = r.next_state;
      h.append_response(p, "O", ps[p].inv.op, r.ret);
      ps[p].open = false;
    } else {
      const auto& sig = spec.ops()[rng() % spec.ops().size()];
      Invocation inv{sig.name, {}};
      for (int a = 0; a < sig.arity; ++a)
        inv.args.push_back(Value::integer(static_cast<std::int64_t>(rng() % 4)));
      h.append_invocation(p, "O", inv.op, inv.args);
      ps[p].inv = std::move(inv);
      ps[p].open = true;
      --ps[p].remaining;
    }
  }
  if (!corrupt || h.empty()) return h;
  // Tamper with one response payload.
  std::vector<Event> events = h.events();
  std::vector<std::size_t> res_positions;
  for (std::size_t i = 0; i < events.size(); ++i)
    if (events[i].kind == EventKind::Response) res_positions.push_back(i);
  if (res_positions.empty()) return h;
  Event& e = events[res_positions[rng() % res_positions.size()]];
  e.payload = {Value::integer(static_cast<std::int64_t>(rng() % 4) + 90)};
  return History::of(std::move(events));
}

}  // namespace

TEST_CASE("verdict battery: checker, oracle and hand analysis agree") {
  for (const Fixture& f : kFixtures) {
    CAPTURE(f.name);
    History h = trace(f.trace);
    const TypeSpec& spec = builtin_spec(f.spec);
    bool oracle_says = oracle::t_linearizable(h, 0, spec);
    auto checker_says = check_t_linearizable(h, 0, spec);
    CHECK(oracle_says == f.linearizable);
    CHECK(checker_says.has_value() == f.linearizable);
    if (checker_says) {
      CHECK(oracle::witness_satisfies(h, 0, spec, *checker_says));
      CHECK(is_legal(spec, checker_says->to_history()));
    }
  }
}

TEST_CASE("minimal_t on the pinned anomalies") {
  // Two overlapping test-and-set calls that both won: dropping the first
  // three events frees the first response, so t = 3.
  History double_true = trace(
      "inv 0 O tas\ninv 1 O tas\nres 0 O tas T\nres 1 O tas T\n");
  CHECK(oracle::minimal_t(double_true, builtin_spec("tas")) == 3);
  MinimalT mt = minimal_t(double_true, builtin_spec("tas"));
  CHECK(mt.t == 3);
  CHECK(oracle::witness_satisfies(double_true, 3, builtin_spec("tas"),
                                  mt.witness));

  // Overlapping proposals that each returned their own value: only the very
  // last response may keep its value, so t = 3 again.
  History split = trace(
      "inv 0 O propose a\ninv 1 O propose b\nres 1 O propose b\n"
      "res 0 O propose a\n");
  CHECK(oracle::minimal_t(split, builtin_spec("consensus")) == 3);
  MinimalT mts = minimal_t(split, builtin_spec("consensus"));
  CHECK(mts.t == 3);
  // The surviving response pins 'a'; the witness must decide a first.
  REQUIRE(mts.witness.ops.size() == 2);
  CHECK(mts.witness.ops[0].ret == Value::symbol("a"));
  CHECK(mts.witness.ops[1].ret == Value::symbol("a"));

  // A first-ever test-and-set that claims to lose can only be repaired by
  // discarding the whole history: t = |h|.
  History lone_loser = trace("inv 0 O tas\nres 0 O tas F\n");
  CHECK(oracle::minimal_t(lone_loser, builtin_spec("tas")) == 2);
  CHECK(minimal_t(lone_loser, builtin_spec("tas")).t == 2);

  // Loser first, then the real winner, fully sequential.  The loser's
  // response sits at index 1, so t = 2 both frees its return value and
  // dissolves the real-time edge into the second call; the reordering
  // [winner, loser] then explains everything.
  History loser_then_winner = trace(
      "inv 0 O tas\nres 0 O tas F\ninv 1 O tas\nres 1 O tas T\n");
  CHECK(oracle::minimal_t(loser_then_winner, builtin_spec("tas")) == 2);
  CHECK(minimal_t(loser_then_winner, builtin_spec("tas")).t == 2);

  // Sequential split consensus: cutting the first decision's events (t = 2)
  // already lets the second decision stand alone.
  History seq_split = trace(
      "inv 0 O propose a\nres 0 O propose a\ninv 1 O propose b\n"
      "res 1 O propose b\n");
  CHECK(oracle::minimal_t(seq_split, builtin_spec("consensus")) == 2);
  CHECK(minimal_t(seq_split, builtin_spec("consensus")).t == 2);

  CHECK(minimal_t(History(), builtin_spec("tas")).t == 0);
}

TEST_CASE("weak consistency verdicts") {
  const TypeSpec& tas = builtin_spec("tas");

  // Both winners are weakly consistent: each is explained alone.
  History double_true = trace(
      "inv 0 O tas\ninv 1 O tas\nres 0 O tas T\nres 1 O tas T\n");
  WeakConsistency wc = check_weak_consistency(double_true, tas);
  CHECK(wc.ok);
  CHECK(oracle::weakly_consistent(double_true, tas));
  REQUIRE(wc.explanations.size() == 2);
  CHECK(wc.explanations[0].explanation.ops.size() == 1);
  CHECK(wc.explanations[1].explanation.ops.size() == 1);

  // A first-ever loser has no explanation ending in F.
  History lone_loser = trace("inv 0 O tas\nres 0 O tas F\n");
  WeakConsistency bad = check_weak_consistency(lone_loser, tas);
  CHECK_FALSE(bad.ok);
  CHECK(bad.counterexample_inv_index == 0);
  CHECK_FALSE(oracle::weakly_consistent(lone_loser, tas));

  History loser_then_winner = trace(
      "inv 0 O tas\nres 0 O tas F\ninv 1 O tas\nres 1 O tas T\n");
  CHECK_FALSE(check_weak_consistency(loser_then_winner, tas).ok);
  CHECK_FALSE(oracle::weakly_consistent(loser_then_winner, tas));

  // Split consensus is weakly consistent even though not 0-linearizable.
  History split = trace(
      "inv 0 O propose a\ninv 1 O propose b\nres 0 O propose a\n"
      "res 1 O propose b\n");
  CHECK(check_weak_consistency(split, builtin_spec("consensus")).ok);
  CHECK(oracle::weakly_consistent(split, builtin_spec("consensus")));

  // Duplicate zeros from fetch-and-add: each op may forget the other.
  History dup = trace(
      "inv 0 O faa\ninv 1 O faa\nres 0 O faa 0\nres 1 O faa 0\n");
  CHECK(check_weak_consistency(dup, builtin_spec("faa")).ok);
  CHECK(oracle::weakly_consistent(dup, builtin_spec("faa")));
}

TEST_CASE("check_eventual combines the verdicts") {
  CheckReport r = check_eventual(
      trace("inv 0 O tas\ninv 1 O tas\nres 0 O tas T\nres 1 O tas T\n"),
      builtin_spec("tas"));
  CHECK(r.well_formed);
  CHECK(r.weakly_consistent);
  CHECK(r.minimal_t == 3);
  REQUIRE(r.witness.has_value());
  CHECK(r.witness->ops.size() == 2);

  // The lone loser still gets a minimal_t (= |h|) but is not weakly
  // consistent, so the overall contract fails.
  CheckReport bad = check_eventual(trace("inv 0 O tas\nres 0 O tas F\n"),
                                   builtin_spec("tas"));
  CHECK(bad.well_formed);
  CHECK_FALSE(bad.weakly_consistent);
  CHECK(bad.minimal_t == 2);
  CHECK(bad.counterexample_inv_index == 0);

  // Malformed input is reported, not thrown.
  History malformed;
  malformed.append_response(0, "O", "tas", Value::boolean(true));
  CheckReport m = check_eventual(malformed, builtin_spec("tas"));
  CHECK_FALSE(m.well_formed);
  CHECK_FALSE(m.weakly_consistent);
  CHECK_FALSE(m.minimal_t.has_value());
}

TEST_CASE("report rendering uses the fixed line format") {
  CheckReport r = check_eventual(
      trace("inv 0 O tas\ninv 1 O tas\nres 0 O tas T\nres 1 O tas T\n"),
      builtin_spec("tas"));
  std::string text = render_report(r);
  CHECK(text.find("WEAK_CONSISTENT: yes\n") == 0);
  CHECK(text.find("MIN_T: 3\n") != std::string::npos);
  CHECK(text.find("lin 0 1 tas() -> T\n") != std::string::npos);
  CHECK(text.find("lin 1 0 tas() -> F\n") != std::string::npos);

  History malformed;
  malformed.append_response(0, "O", "tas", Value::boolean(true));
  CHECK(render_report(check_eventual(malformed, builtin_spec("tas"))) ==
        "WELL_FORMED: no\nWEAK_CONSISTENT: no\n");
}

TEST_CASE("checker agrees with the oracle on random histories") {
  std::mt19937_64 rng(424242);
  const char* specs[] = {"tas", "faa", "register", "consensus", "fac"};
  for (int round = 0; round < 400; ++round) {
    const TypeSpec& spec = builtin_spec(specs[round % 5]);
    History h = random_history(rng, spec, round % 2 == 1);
    CAPTURE(format_trace(h));
    for (int t : {0, 1, 2}) {
      if (static_cast<std::size_t>(t) > h.size()) continue;
      bool o = oracle::t_linearizable(h, t, spec);
      auto c = check_t_linearizable(h, t, spec);
      CHECK(o == c.has_value());
      if (c) CHECK(oracle::witness_satisfies(h, t, spec, *c));
    }
    CHECK(oracle::weakly_consistent(h, spec) ==
          check_weak_consistency(h, spec).ok);
    CHECK(oracle::minimal_t(h, spec) == minimal_t(h, spec).t);
  }
}

TEST_CASE("t-linearizability is monotone in t and total at t = |h|") {
  std::mt19937_64 rng(777);
  const char* specs[] = {"tas", "faa", "consensus", "fac", "register"};
  for (int round = 0; round < 200; ++round) {
    const TypeSpec& spec = builtin_spec(specs[round % 5]);
    History h = random_history(rng, spec, round % 2 == 0);
    CAPTURE(format_trace(h));
    bool prev = false;
    for (int t = 0; static_cast<std::size_t>(t) <= h.size(); ++t) {
      bool now = check_t_linearizable(h, t, spec).has_value();
      if (prev) CHECK(now);  // once linearizable, stays linearizable
      prev = now;
    }
    CHECK(check_t_linearizable(h, static_cast<int>(h.size()), spec)
              .has_value());
  }
}

TEST_CASE("weak-consistency verdicts ignore events after the response") {
  std::mt19937_64 rng(31415);
  for (int round = 0; round < 150; ++round) {
    const TypeSpec& spec = builtin_spec(round % 2 ? "faa" : "tas");
    History h = random_history(rng, spec, round % 3 == 0);
    auto records = match_operations(h);
    // Append a fresh process's completed chatter at the end.
    History extended = h;
    for (int i = 0; i < 2; ++i) {
      const auto& sig = spec.ops()[0];
      extended.append_invocation(7, "O", sig.name, {});
      extended.append_response(7, "O", sig.name,
                               Value::integer(static_cast<std::int64_t>(rng() % 3)));
    }
    for (const auto& r : records) {
      if (!r.completed()) continue;
      bool before = explain_operation(h, r.inv_index, spec).has_value();
      bool after = explain_operation(extended, r.inv_index, spec).has_value();
      CHECK(before == after);
    }
  }
}

TEST_CASE("caps and argument validation") {
  History big;
  for (int i = 0; i < 13; ++i) {
    big.append_invocation(i, "O", "faa", {});
    big.append_response(i, "O", "faa", Value::integer(i));
  }
  CHECK_THROWS_AS(check_t_linearizable(big, 0, builtin_spec("faa")), TooLarge);
  CHECK_THROWS_AS(check_weak_consistency(big, builtin_spec("faa")), TooLarge);
  CHECK_THROWS_AS(check_eventual(big, builtin_spec("faa")), TooLarge);
  // An explicit cap of 13 admits the same history.
  CHECK(check_t_linearizable(big, 0, builtin_spec("faa"), 13).has_value());

  History h = trace("inv 0 O tas\nres 0 O tas T\n");
  CHECK_THROWS_AS(check_t_linearizable(h, 3, builtin_spec("tas")), OutOfRange);
  CHECK_THROWS_AS(check_t_linearizable(h, -1, builtin_spec("tas")),
                  OutOfRange);

  History malformed;
  malformed.append_response(0, "O", "tas", Value::boolean(true));
  CHECK_THROWS_AS(check_t_linearizable(malformed, 0, builtin_spec("tas")),
                  MalformedHistory);
  CHECK_THROWS_AS(check_weak_consistency(malformed, builtin_spec("tas")),
                  MalformedHistory);

  // explain_operation addresses ops by invocation index and only accepts
  // completed ones.
  History pend = trace("inv 0 O tas\n");
  CHECK_THROWS_AS(explain_operation(pend, 0, builtin_spec("tas")), OutOfRange);
  CHECK_THROWS_AS(explain_operation(pend, 5, builtin_spec("tas")), OutOfRange);
}

TEST_CASE("witnesses are deterministic") {
  History h = trace(
      "inv 0 O faa\ninv 1 O faa\nres 0 O faa 1\nres 1 O faa 0\n");
  auto a = check_t_linearizable(h, 0, builtin_spec("faa"));
  auto b = check_t_linearizable(h, 0, builtin_spec("faa"));
  REQUIRE(a.has_value());
  REQUIRE(b.has_value());
  CHECK(format_trace(a->to_history()) == format_trace(b->to_history()));
  // Candidates are explored in (proc, inv) order; p1 must go first here.
  CHECK(a->ops[0].proc == 1);
}
