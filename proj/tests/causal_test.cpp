#include <gtest/gtest.h>

#include "support.hpp"

namespace rchor {
namespace {

using test::run;

Transition find(const std::vector<Transition>& ts, AtomicRule rule, const Participant& first) {
  for (const auto& t : ts)
    if (t.rule == rule && !t.subjects.empty() && t.subjects[0] == first) return t;
  throw std::runtime_error(std::string("no ") + to_string(rule) + " by " + first);
}

Transition inverse_of(const Transition& t) {
  for (const auto& u : transitions(t.target))
    if (is_inverse(t, u)) return u;
  throw std::runtime_error("no inverse of " + identity(t));
}

/// The independent protocol after init: A->B and C->D are both enabled.
Configuration independent_started() { return run("independent4", "init", Semantics::Atomic); }

// ------------------------------------------------------------------ stamps

TEST(Stamps, MatchTheirRules) {
  auto lts = explore(test::initial("three_buyer"), Semantics::Atomic, 12);
  std::size_t n = 0;
  for (const auto& m : lts.states)
    for (const auto& t : transitions(m)) {
      EXPECT_EQ(t.stamp, expected_stamp(t.rule, t.subjects)) << identity(t);
      ++n;
    }
  EXPECT_GT(n, 10u);
}

TEST(Concurrent, DisjointExchangesAndSharedParticipant) {
  auto m = independent_started();
  auto ts = transitions(m);
  const auto ab = find(ts, AtomicRule::AC, "A");
  const auto cd = find(ts, AtomicRule::AC, "C");
  EXPECT_TRUE(concurrent(ab, cd));
  EXPECT_FALSE(concurrent(ab, ab));

  auto m3 = run("three_buyer", test::kM3, Semantics::Decoupled);
  auto ts3 = transitions(m3);
  const auto sa = find(ts3, AtomicRule::AC, "S");
  const auto rac = find(ts3, AtomicRule::RAC, "A");
  EXPECT_FALSE(concurrent(sa, rac));
}

TEST(Concurrent, SessionStartConflictsWithItsParticipants) {
  auto m = independent_started();
  auto ts = transitions(m);
  const auto ab = find(ts, AtomicRule::AC, "A");
  auto rinit = std::find_if(ts.begin(), ts.end(), [](const auto& t) { return t.rule == AtomicRule::RInit; });
  ASSERT_NE(rinit, ts.end());
  EXPECT_FALSE(concurrent(ab, *rinit));
}

TEST(Concurrent, RequiresCoinitialTransitions) {
  auto m = independent_started();
  const auto ab = find(transitions(m), AtomicRule::AC, "A");
  const auto next = find(transitions(ab.target), AtomicRule::AC, "C");
  try {
    concurrent(ab, next);
    FAIL() << "expected NotCoinitial";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotCoinitial);
  }
}

// ---------------------------------------------------------------- residuals

TEST(Residual, ClosesTheSquare) {
  auto m = independent_started();
  auto ts = transitions(m);
  const auto ab = find(ts, AtomicRule::AC, "A");
  const auto cd = find(ts, AtomicRule::AC, "C");
  auto r1 = residual(cd, ab);
  auto r2 = residual(ab, cd);
  EXPECT_EQ(r1.source, ab.target);
  EXPECT_EQ(r2.source, cd.target);
  EXPECT_EQ(r1.target, r2.target);
  EXPECT_EQ(r1.stamp, cd.stamp);
}

TEST(Residual, UndefinedOverItself) {
  auto m = independent_started();
  const auto ab = find(transitions(m), AtomicRule::AC, "A");
  EXPECT_THROW(residual(ab, ab), Error);
}

// --------------------------------------------------------------- equivalence

TEST(TraceEquivalence, StepAndInverseCancel) {
  auto m = independent_started();
  const auto ab = find(transitions(m), AtomicRule::AC, "A");
  Trace r{m, {ab, inverse_of(ab)}};
  ASSERT_TRUE(composable(r));
  EXPECT_TRUE(trace_equivalent(r, Trace{m, {}}));
  EXPECT_TRUE(trace_equivalent(Trace{m, {}}, Trace{m, {}}));
}

TEST(TraceEquivalence, IndependentOrderings) {
  auto m = independent_started();
  auto ts = transitions(m);
  const auto ab = find(ts, AtomicRule::AC, "A");
  const auto cd = find(ts, AtomicRule::AC, "C");
  Trace r1{m, {ab, residual(cd, ab)}};
  Trace r2{m, {cd, residual(ab, cd)}};
  EXPECT_TRUE(trace_equivalent(r1, r2));
  EXPECT_EQ(detail::rewrites(r1).size(), 1u);
}

TEST(TraceEquivalence, DifferentTargetsAreNotEquivalent) {
  auto m = independent_started();
  auto ts = transitions(m);
  Trace r1{m, {find(ts, AtomicRule::AC, "A")}};
  Trace r2{m, {find(ts, AtomicRule::AC, "C")}};
  EXPECT_FALSE(trace_equivalent(r1, r2));
  try {
    trace_equivalent(r1, Trace{r1.target(), {}});
    FAIL() << "expected NotCoinitial";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotCoinitial);
  }
}

TEST(TraceEquivalence, ReplayByIdentity) {
  auto m = independent_started();
  const auto ab = find(transitions(m), AtomicRule::AC, "A");
  auto r = replay(m, {identity(ab), identity(inverse_of(ab))});
  EXPECT_EQ(r.target(), m);
  EXPECT_THROW(replay(m, {"nonsense"}), Error);
}

// ----------------------------------------------------------------- rearrange

TEST(Rearrange, ForwardOnlyIsUnchanged) {
  auto m = independent_started();
  const auto ab = find(transitions(m), AtomicRule::AC, "A");
  Trace r{m, {ab, find(transitions(ab.target), AtomicRule::AC, "C")}};
  auto out = rearrange(r);
  EXPECT_TRUE(out.backward.steps.empty());
  EXPECT_EQ(detail::encode(out.forward), detail::encode(r));
}

TEST(Rearrange, StepAndInverseVanish) {
  auto m = independent_started();
  const auto ab = find(transitions(m), AtomicRule::AC, "A");
  auto out = rearrange(Trace{m, {ab, inverse_of(ab)}});
  EXPECT_TRUE(out.backward.steps.empty());
  EXPECT_TRUE(out.forward.steps.empty());
}

TEST(Rearrange, UndoneStepIsDroppedBeforeTheNext) {
  auto m = independent_started();
  const auto ab = find(transitions(m), AtomicRule::AC, "A");
  const auto cd = find(transitions(m), AtomicRule::AC, "C");
  Trace r{m, {ab, inverse_of(ab), cd}};
  auto out = rearrange(r);
  EXPECT_TRUE(out.backward.steps.empty());
  ASSERT_EQ(out.forward.steps.size(), 1u);
  EXPECT_EQ(identity(out.forward.steps[0]), identity(cd));
  EXPECT_EQ(out.forward.target(), cd.target);
}

TEST(Rearrange, BackwardStepsMoveToTheFront) {
  auto m = independent_started();
  const auto ab = find(transitions(m), AtomicRule::AC, "A");
  const auto cd = find(transitions(ab.target), AtomicRule::AC, "C");
  // from the state after A->B: do C->D, then undo A->B
  Trace r{ab.target, {cd, find(transitions(cd.target), AtomicRule::RAC, "A")}};
  auto out = rearrange(r);
  ASSERT_EQ(out.backward.steps.size(), 1u);
  ASSERT_EQ(out.forward.steps.size(), 1u);
  EXPECT_EQ(out.backward.steps[0].rule, AtomicRule::RAC);
  EXPECT_EQ(out.forward.target(), r.target());
}

TEST(RearrangeProperty, BackwardFirstAndNoLonger) {
  auto traces = enumerate_traces(test::initial("independent4"), 4);
  for (const auto& r : traces) {
    auto out = rearrange(r);
    EXPECT_TRUE(out.backward.backward_only());
    EXPECT_TRUE(out.forward.forward_only());
    EXPECT_EQ(out.forward.start, out.backward.target());
    EXPECT_EQ(out.forward.target(), r.target());
    EXPECT_LE(out.backward.steps.size() + out.forward.steps.size(), r.steps.size());
  }
}

// ------------------------------------------------------------ bounded checks

TEST(CausalConsistency, BuyerSeller) {
  auto rep = check_causal_consistency(test::initial("buyer_seller"), 4);
  EXPECT_TRUE(rep.ok()) << (rep.ok() ? "" : rep.violations.front());
  EXPECT_GT(rep.checked, 0u);
}

TEST(CausalConsistency, LengthZeroIsVacuous) {
  auto rep = check_causal_consistency(test::initial("buyer_seller"), 0);
  EXPECT_TRUE(rep.ok());
  EXPECT_EQ(rep.checked, 0u);
}

TEST(CausalConsistency, ThreeBuyerPrefix) {
  auto rep = check_causal_consistency(test::initial("three_buyer_prefix"), 3);
  EXPECT_TRUE(rep.ok()) << (rep.ok() ? "" : rep.violations.front());
}

TEST(Square, IndependentProtocol) {
  auto rep = check_square(test::initial("independent4"), 5);
  EXPECT_TRUE(rep.ok()) << (rep.ok() ? "" : rep.violations.front());
  EXPECT_GT(rep.checked, 0u);
}

TEST(Loop, BundledProtocols) {
  for (const auto* name : {"buyer_seller", "three_buyer_prefix", "independent4", "recursive_ping"}) {
    auto rep = check_loop(test::initial(name), 6);
    EXPECT_TRUE(rep.ok()) << name << ": " << (rep.ok() ? "" : rep.violations.front());
    EXPECT_EQ(rep.checked, rep.passed);
  }
  EXPECT_EQ(check_loop(test::initial("buyer_seller"), 0).violation_count, 0u);
}

TEST(Loop, ThreeBuyerWithCodeMobility) {
  auto rep = check_loop(test::initial("three_buyer"), 14);
  EXPECT_TRUE(rep.ok()) << (rep.ok() ? "" : rep.violations.front());
}

TEST(Theorem1, BundledProtocols) {
  for (const auto* name : {"buyer_seller", "three_buyer_prefix", "independent4", "three_buyer"}) {
    auto rep = check_theorem1(test::initial(name), name == std::string("three_buyer") ? 14 : 6);
    EXPECT_TRUE(rep.ok()) << name << ": " << (rep.ok() ? "" : rep.violations.front());
  }
}

TEST(DecoupledUndo, OutputAndInputUndoneInThreeSteps) {
  for (const auto* name : {"buyer_seller", "three_buyer_prefix", "independent4"}) {
    auto rep = check_decoupled_undo(test::initial(name), 6);
    EXPECT_TRUE(rep.ok()) << name;
    EXPECT_GT(rep.checked, 0u);
  }
}

TEST(StabilityRecovery, BuyerSeller) {
  auto rep = check_stability_recovery(test::initial("buyer_seller"), 6);
  EXPECT_TRUE(rep.ok()) << (rep.ok() ? "" : rep.violations.front());
}

}  // namespace
}  // namespace rchor
