#include <gtest/gtest.h>

#include <functional>
#include <unordered_set>

#include "support.hpp"

namespace rchor {
namespace {

using test::kM1;
using test::kM2;
using test::kM3;
using test::kM4;
using test::kM5;
using test::kM6;
using test::kM7;
using test::kM8;
using test::run;
using detail::store_string;

std::string store_of(const Monitor& m) { return store_string(m.store, false); }

std::vector<std::string> rules(const Configuration& m, Direction dir) {
  std::vector<std::string> out;
  for (const auto& s : decoupled_steps(m, dir)) out.push_back(to_string(s.redex));
  return out;
}

// -------------------------------------------------------------------- store

TEST(Store, UpdateAndReverse) {
  auto s = Store{}.update("x", val::name(Name::shared("a")));
  EXPECT_EQ(store_string(s, false), "[x->a]");
  auto d = Store{}.update("x", val::name(Name::shared("d")));
  auto t = d.update("t", val::str("Logicomix"));
  EXPECT_EQ(store_string(t, false), "[t->'Logicomix', x->d]");
  EXPECT_EQ(store_string(t.remove("t"), false), "[x->d]");
  EXPECT_TRUE(Store{}.remove("y").bindings().empty());
  EXPECT_TRUE(d.remove("x").bindings().empty());
  try {
    d.update("x", val::name(Name::shared("e")));
    FAIL() << "expected DuplicateBinding";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DuplicateBinding);
  }
}

TEST(StoreProperty, RemoveUndoesUpdate) {
  test::Gen gen(23);
  for (int i = 0; i < 200; ++i) {
    Store s;
    std::vector<std::string> xs;
    for (std::size_t k = 0, n = gen.below(6); k < n; ++k) {
      auto x = "v" + std::to_string(gen.below(10));
      if (s.contains(x)) continue;
      xs.push_back(x);
      auto before = store_string(s, true);
      s = s.update(x, val::nat(k));
      EXPECT_EQ(store_string(s.remove(x), true), before);
    }
    EXPECT_EQ(s.bindings().size(), xs.size());
  }
}

TEST(EvalValue, ConstantsVariablesAndThunks) {
  auto s = Store{}.update("x", val::name(Name::shared("d")));
  EXPECT_EQ(value_key(eval_value(val::str("Logicomix"), s)), value_key(val::str("Logicomix")));
  EXPECT_EQ(value_key(eval_value(val::var("x"), s)), value_key(val::name(Name::shared("d"))));
  try {
    eval_value(val::var("x"), Store{});
    FAIL() << "expected UnboundVariable";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnboundVariable);
  }
  auto m8 = run("three_buyer", kM8);
  const auto& c = test::monitor(m8, "C");
  const auto* code = c.store.lookup("code");
  ASSERT_NE(code, nullptr);
  ASSERT_TRUE(is_abstraction(*code));
  EXPECT_EQ(value_key(eval_value(val::var("code"), c.store)), value_key(*code));
}

TEST(RolesInQueue, ThunkNamesItsParticipant) {
  auto m8 = run("three_buyer", kM8);
  const auto& past = test::queue(m8).past;
  EXPECT_EQ(roles_in_queue("C", past), (std::set<Participant>{"B"}));
  EXPECT_TRUE(roles_in_queue("A", past).empty());
  EXPECT_TRUE(roles_in_queue("p", {}).empty());
  auto m7 = run("three_buyer", kM7);
  EXPECT_TRUE(roles_in_queue("A", test::queue(m7).past).empty());
}

// ------------------------------------------------------------ normalisation

RunningProcess dummy(const std::string& loc) { return RunningProcess{loc, "A", {}, proc::nil()}; }

TEST(Normalize, NilAndRestriction) {
  using namespace cterm;
  auto a = leaf(dummy("l1"));
  EXPECT_EQ(normalize(par(a, nil())), normalize(a));
  EXPECT_EQ(normalize(res("n", nil())), normalize(nil()));
  auto b = leaf(dummy("l2"));
  auto c = leaf(dummy("l3"));
  EXPECT_EQ(normalize(par(a, par(b, c))), normalize(par(par(a, b), c)));
  EXPECT_EQ(normalize(par(a, b)), normalize(par(b, a)));
}

TEST(NormalizeProperty, IdempotentOnReachableStates) {
  for (const auto* name : {"three_buyer", "buyer_seller", "independent4"}) {
    auto lts = explore(test::initial(name), Semantics::Decoupled, 5);
    for (const auto& m : lts.states) {
      auto again = normalize(to_term(m));
      EXPECT_EQ(again, m);
      EXPECT_EQ(again.key(), m.key());
    }
  }
}

// ------------------------------------------------------------ golden trace

TEST(GoldenTrace, M1OffersOnlyAliceAndRInit) {
  auto m1 = run("three_buyer", kM1);
  EXPECT_EQ(rules(m1, Direction::Forward), (std::vector<std::string>{"out@A,l2"}));
  EXPECT_EQ(rules(m1, Direction::Backward), (std::vector<std::string>{"rInit@l1,l2,l3,l4"}));
  EXPECT_TRUE(is_stable(m1));
  EXPECT_EQ(barbs(m1), (std::set<Participant>{"A"}));
}

TEST(GoldenTrace, M2QueuesTheTitle) {
  auto m2 = run("three_buyer", kM2);
  const auto& q = test::queue(m2);
  EXPECT_TRUE(q.past.empty());
  ASSERT_EQ(q.future.size(), 1u);
  EXPECT_EQ(to_string(q.future[0]), "(A,S,'Logicomix')");
  EXPECT_FALSE(is_stable(m2));
}

TEST(GoldenTrace, M3ConsumesTheTitle) {
  auto m3 = run("three_buyer", kM3);
  const auto& q = test::queue(m3);
  ASSERT_EQ(q.past.size(), 1u);
  EXPECT_EQ(to_string(q.past[0]), "(A,S,'Logicomix')");
  EXPECT_TRUE(q.future.empty());
  EXPECT_EQ(store_of(test::monitor(m3, "S")), "[t->'Logicomix', x->d]");
  EXPECT_EQ(test::monitor(m3, "S").tracked, (std::vector<std::string>{"x", "t"}));
  EXPECT_TRUE(is_stable(m3));
  auto back = rules(m3, Direction::Backward);
  EXPECT_NE(std::find(back.begin(), back.end(), "rollS@S,A"), back.end());
}

TEST(GoldenTrace, RollbackRestoresM1) {
  auto m4 = run("three_buyer", kM4);
  EXPECT_EQ(test::monitor(m4, "S").tag, Tag::Full);
  EXPECT_EQ(test::monitor(m4, "A").tag, Tag::Full);
  EXPECT_FALSE(is_stable(m4));
  auto b4 = barbs(m4);
  EXPECT_FALSE(b4.count("S"));
  EXPECT_FALSE(b4.count("A"));

  auto m5 = run("three_buyer", kM5);
  EXPECT_EQ(test::queue(m5).future.size(), 1u);
  EXPECT_FALSE(test::monitor(m5, "S").store.contains("t"));
  auto back = rules(m5, Direction::Backward);
  EXPECT_NE(std::find(back.begin(), back.end(), "rOut@A,l2"), back.end());

  EXPECT_EQ(run("three_buyer", kM6), run("three_buyer", kM1));
}

TEST(GoldenTrace, M7IsStableAndM8OffersBeta) {
  auto m7 = run("three_buyer", kM7);
  EXPECT_TRUE(is_stable(m7));
  EXPECT_EQ(test::monitor(m7, "B").tracked, (std::vector<std::string>{"z", "p", "s"}));
  EXPECT_EQ(store_of(test::monitor(m7, "C")), "[s->120, w->d]");
  auto m8 = run("three_buyer", kM8);
  auto fwd = rules(m8, Direction::Forward);
  EXPECT_NE(std::find(fwd.begin(), fwd.end(), "beta@l4,C"), fwd.end());
}

TEST(GoldenTrace, BetaStartsTheDelegatedCode) {
  auto m9 = run("three_buyer", std::string(kM8) + " beta@l4");
  EXPECT_EQ(m9.indices_of<RunningFunction>().size(), 1u);
  auto fwd = rules(m9, Direction::Forward);
  EXPECT_NE(std::find(fwd.begin(), fwd.end(), "out@B,l4"), fwd.end());
  auto back = rules(m9, Direction::Backward);
  EXPECT_NE(std::find(back.begin(), back.end(), "rBeta@l4,C"), back.end());
}

TEST(Stability, InitialConfigurationsAreStable) {
  for (const auto* name : {"three_buyer", "buyer_seller", "independent4", "recursive_ping"})
    EXPECT_TRUE(is_stable(test::initial(name))) << name;
}

TEST(Barbs, InputsOnlyHaveNone) {
  auto m = run("buyer_seller", "init out@B in@S");
  EXPECT_EQ(barbs(m), (std::set<Participant>{"S"}));
  auto m2 = run("buyer_seller", "init out@B");
  EXPECT_TRUE(barbs(m2).empty());
}

TEST(Enumerate, EmptyConfiguration) {
  Configuration empty;
  EXPECT_TRUE(enumerate_forward(empty).empty());
  EXPECT_TRUE(enumerate_backward(empty).empty());
}

TEST(Enumerate, ApplyMatchesSteps) {
  auto lts = explore(test::initial("buyer_seller"), Semantics::Decoupled, 6);
  for (const auto& m : lts.states) {
    for (auto dir : {Direction::Forward, Direction::Backward})
      for (const auto& s : decoupled_steps(m, dir)) EXPECT_EQ(apply(m, s.redex), s.target);
  }
}

TEST(Spawn, SplitsTheLocation) {
  auto u = parse_source(R"(
    global G = A -> B : <nat>. A -> B : <nat>. end;
    system {
      l1 : request a(x : role G.A). (x!<1>. 0 | x!<2>. 0);
      l2 : accept a(y : role G.B). y?(u). y?(v). 0;
    })");
  Stepper st(initial_configuration(u), Semantics::Decoupled);
  st.step("init");
  st.step("spawn@l1");
  const auto& m = st.current();
  std::vector<std::string> locs;
  for (auto i : m.indices_of<RunningProcess>()) {
    const auto& r = m.get<RunningProcess>(i);
    if (r.participant != "A") continue;
    locs.push_back(r.loc);
    if (r.loc == "l1") EXPECT_EQ(to_string(r.body), "0");
  }
  EXPECT_EQ(locs.size(), 3u);
  EXPECT_NE(std::find(locs.begin(), locs.end(), "l1"), locs.end());
  st.undo();
  EXPECT_EQ(st.current(), st.trail()[0].target);
  EXPECT_EQ(st.trail().back().rule, "rSpawn");
}

// --------------------------------------------------------------- exploration

TEST(Explore, DepthZeroAndOne) {
  auto m0 = test::initial("three_buyer");
  EXPECT_EQ(explore(m0, Semantics::Decoupled, 0).states.size(), 1u);
  EXPECT_EQ(explore(m0, Semantics::Decoupled, 1, false).states.size(), 2u);
}

/// Independent count: depth-first over all paths without sharing, collecting normal forms.
std::size_t naive_count(const Configuration& m0, std::size_t depth) {
  std::unordered_set<std::string> seen;
  std::function<void(const Configuration&, std::size_t)> go = [&](const Configuration& m, std::size_t d) {
    seen.insert(m.key());
    if (d == depth) return;
    for (auto dir : {Direction::Forward, Direction::Backward})
      for (const auto& s : decoupled_steps(m, dir)) go(s.target, d + 1);
  };
  go(m0, 0);
  return seen.size();
}

TEST(Explore, MatchesNaiveEnumerator) {
  auto m0 = test::initial("buyer_seller");
  EXPECT_EQ(explore(m0, Semantics::Decoupled, 6).states.size(), naive_count(m0, 6));
  auto i4 = test::initial("independent4");
  EXPECT_EQ(explore(i4, Semantics::Decoupled, 5).states.size(), naive_count(i4, 5));
}

TEST(Explore, BudgetIsEnforced) {
  try {
    explore(test::initial("independent4"), Semantics::Decoupled, 8, true, 10);
    FAIL() << "expected StateBudgetExceeded";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::StateBudgetExceeded);
  }
}

TEST(Explore, RecursiveProtocolStaysBounded) {
  auto lts = explore(test::initial("recursive_ping"), Semantics::Decoupled, 8);
  EXPECT_GT(lts.states.size(), 3u);
  for (const auto& m : lts.states) EXPECT_EQ(normalize(to_term(m)), m);
}

// -------------------------------------------------------------------- atomic

std::vector<std::string> atomic_rules(const Configuration& m, Direction dir) {
  std::vector<std::string> out;
  for (const auto& s : atomic_steps(m, dir)) out.push_back(to_string(s));
  return out;
}

TEST(Atomic, M1AndM3) {
  auto m1 = run("three_buyer", kM1);
  auto fwd = atomic_steps(m1, Direction::Forward);
  ASSERT_EQ(fwd.size(), 1u);
  EXPECT_EQ(fwd[0].rule, AtomicRule::AC);
  EXPECT_EQ(fwd[0].subjects[0], "A");
  EXPECT_EQ(fwd[0].subjects[1], "S");
  auto m3 = run("three_buyer", kM3);
  EXPECT_EQ(apply_atomic(m1, fwd[0]), m3);

  auto back = atomic_steps(m3, Direction::Backward);
  auto rac = std::find_if(back.begin(), back.end(), [](const auto& s) { return s.rule == AtomicRule::RAC; });
  ASSERT_NE(rac, back.end());
  EXPECT_EQ(rac->subjects[0], "A");
  EXPECT_EQ(rac->subjects[1], "S");
  EXPECT_EQ(apply_atomic(m3, *rac), m1);
  EXPECT_EQ(std::count_if(back.begin(), back.end(), [](const auto& s) { return s.rule == AtomicRule::RAC; }), 1);
}

TEST(Atomic, MidSynchronisationHasNoAtomicStepForThePair) {
  auto m2 = run("three_buyer", kM2);
  for (const auto& s : atomic_steps(m2, Direction::Forward))
    EXPECT_FALSE(s.subjects.size() >= 2 && s.subjects[0] == "A" && s.subjects[1] == "S") << to_string(s);
}

TEST(Atomic, SelectionStacksTheDiscardedBranch) {
  auto m = run("buyer_seller", "init AC@B AC@S", Semantics::Atomic);
  auto steps = atomic_steps(m, Direction::Forward);
  auto as = std::find_if(steps.begin(), steps.end(), [](const auto& s) { return s.rule == AtomicRule::AS && s.label == "ok"; });
  ASSERT_NE(as, steps.end());
  const auto& n = as->target;
  for (auto i : n.indices_of<RunningProcess>()) {
    const auto& r = n.get<RunningProcess>(i);
    ASSERT_EQ(r.stack.size(), 1u) << r.participant;
    EXPECT_EQ(r.stack[0].chosen, "ok");
    const auto& alt = r.stack[0].alternatives.node().v;
    const Branches<Process>* bs = nullptr;
    if (const auto* s = std::get_if<PSelect>(&alt)) bs = &s->branches;
    if (const auto* b = std::get_if<PBranch>(&alt)) bs = &b->branches;
    ASSERT_NE(bs, nullptr);
    ASSERT_EQ(bs->size(), 1u);
    EXPECT_EQ((*bs)[0].first, "quit");
  }
}

TEST(AtomicProperty, ApplyMatchesSteps) {
  auto lts = explore(test::initial("three_buyer"), Semantics::Atomic, 10);
  for (const auto& m : lts.states)
    for (auto dir : {Direction::Forward, Direction::Backward})
      for (const auto& s : atomic_steps(m, dir)) EXPECT_EQ(apply_atomic(m, s), s.target);
}

}  // namespace
}  // namespace rchor
