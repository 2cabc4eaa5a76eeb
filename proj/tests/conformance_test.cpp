#include <gtest/gtest.h>

#include <deque>
#include <unordered_set>

#include "support.hpp"

namespace rchor {
namespace {

using test::run;

GlobalType buyer_seller() { return *test::source("buyer_seller").find_global("BuyerSeller"); }

const ServiceDecl& service(const SourceUnit& u, const Participant& role) {
  for (const auto& s : u.services)
    if (s.role == role) return s;
  throw std::runtime_error("no service for " + role);
}

// ---------------------------------------------------------- well-formedness

TEST(WfProcess, BuyerAndSellerBodies) {
  auto u = test::source("buyer_seller");
  for (const auto* r : {"B", "S"}) {
    const auto& s = service(u, r);
    EXPECT_TRUE(check_wf_process({}, s.body, s.var, project(buyer_seller(), r))) << r;
  }
}

TEST(WfProcess, NilAgainstEndOnly) {
  EXPECT_TRUE(check_wf_process({}, proc::nil(), "x", local::end()));
  EXPECT_FALSE(check_wf_process({}, proc::nil(), "x", parse_local("p!<nat>. end")));
}

TEST(WfProcess, ValuesAndLabels) {
  // free names parse as shared names
  auto wf = [](const char* text, const LocalType& t) {
    return check_wf_process({}, parse_process(text), Name::shared("x"), t);
  };
  auto t = parse_local("p!<nat>. p?<bool>. end");
  EXPECT_TRUE(wf("x!<1>. x?(b). 0", t));
  EXPECT_FALSE(wf("x!<'one'>. x?(b). 0", t));
  EXPECT_FALSE(wf("x!<1>. 0", t));
  EXPECT_FALSE(wf("y!<1>. y?(b). 0", t));
  auto sel = parse_local("q+{a: end, b: end}");
  EXPECT_TRUE(wf("x+{a: 0, b: 0}", sel));
  EXPECT_FALSE(wf("x+{a: 0}", sel));
}

TEST(WfProcess, RecursiveBodies) {
  auto u = test::source("recursive_ping");
  const auto& g = *u.find_global("Ping");
  for (const auto* r : {"P", "Q"}) {
    const auto& s = service(u, r);
    EXPECT_TRUE(check_wf_process({}, s.body, s.var, project(g, r))) << r;
  }
}

TEST(WfValue, OpaqueAndStrictSorts) {
  WfContext g;
  g.vars["n"] = ValueType::base("nat");
  EXPECT_TRUE(value_wf(g, val::var("n"), ValueType::base("nat")));
  EXPECT_FALSE(value_wf(g, val::var("n"), ValueType::base("bool")));
  EXPECT_FALSE(value_wf(g, val::var("m"), ValueType::base("nat")));
  EXPECT_TRUE(value_wf(g, val::str("Logicomix"), ValueType::base("title")));
  EXPECT_TRUE(value_wf(g, val::nat(3), ValueType::base("price")));
  EXPECT_THROW(value_wf(g, val::thunk(proc::nil()), ValueType::base("nat")), Error);
}

TEST(WfConfig, StartOfProtocolReducesToProcessCheck) {
  auto u = test::source("buyer_seller");
  const auto& s = service(u, "B");
  auto t = project(buyer_seller(), "B");
  auto chan = Name::endpoint("s", "B");
  auto body = subst_var(s.body, s.var, chan);
  EXPECT_EQ(check_wf_config({}, body, HistoryLocal::at_start(t), chan),
            check_wf_process({}, body, chan, t));
  EXPECT_TRUE(check_wf_config({}, body, HistoryLocal::at_start(t), chan));
}

TEST(WfConfig, MidProtocolStates) {
  auto m = run("buyer_seller", "init out@B in@S out@S in@B sel@B:ok bra@S out@B");
  auto rep = check_wf_state(m);
  EXPECT_TRUE(rep.ok()) << (rep.ok() ? "" : rep.violations.front());
  EXPECT_EQ(rep.checked, 2u);
}

TEST(WfConfig, StackMismatchFails) {
  auto m = run("buyer_seller", "init out@B in@S out@S in@B sel@B:ok bra@S");
  const auto& mon = test::monitor(m, "S");
  const RunningProcess* r = nullptr;
  for (auto i : m.indices_of<RunningProcess>())
    if (m.get<RunningProcess>(i).participant == "S") r = &m.get<RunningProcess>(i);
  ASSERT_NE(r, nullptr);
  auto chan = Name::endpoint(mon.session, "S");
  std::vector<std::string> received(mon.tracked.begin() + 1, mon.tracked.end());
  EXPECT_TRUE(check_wf_config(r->stack, r->body, mon.history, chan, received));
  EXPECT_FALSE(check_wf_config({}, r->body, mon.history, chan, received));
  auto doubled = r->stack;
  doubled.push_back(doubled.back());
  EXPECT_FALSE(check_wf_config(doubled, r->body, mon.history, chan, received));
}

TEST(Wf, ReachableStatesOfFirstOrderProtocols) {
  for (const auto* name : {"buyer_seller", "three_buyer_prefix", "independent4", "recursive_ping"}) {
    auto rep = check_wf(test::initial(name), 6);
    EXPECT_TRUE(rep.ok()) << name << ": " << (rep.ok() ? "" : rep.violations.front());
  }
}

TEST(Wf, ThreeBuyerIsNotFirstOrder) {
  try {
    check_wf(test::initial("three_buyer"), 3);
    FAIL() << "expected NotFirstOrder";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotFirstOrder);
  }
}

// ---------------------------------------------------------------- queues

/// Oracle: breadth-first search over adjacent swaps of commuting messages.
bool swap_reachable(const std::vector<Message>& a, const std::vector<Message>& b) {
  auto key = [](const std::vector<Message>& h) {
    std::string k;
    for (const auto& m : h) k += message_key(m) + ";";
    return k;
  };
  const auto goal = key(b);
  std::unordered_set<std::string> seen{key(a)};
  std::deque<std::vector<Message>> queue{a};
  while (!queue.empty()) {
    auto h = queue.front();
    queue.pop_front();
    if (key(h) == goal) return true;
    for (std::size_t i = 0; i + 1 < h.size(); ++i) {
      if (!messages_commute(h[i], h[i + 1])) continue;
      auto n = h;
      std::swap(n[i], n[i + 1]);
      if (seen.insert(key(n)).second) queue.push_back(n);
    }
  }
  return false;
}

TEST(QueueEquiv, Examples) {
  auto as = Message::data("A", "S", val::str("v"), val::str("v"));
  auto bc = Message::data("B", "C", val::str("w"), val::str("w"));
  auto ac = Message::data("A", "C", val::str("w"), val::str("w"));
  EXPECT_TRUE(queue_equiv({as, bc}, {bc, as}));
  EXPECT_TRUE(queue_equiv({as, bc}, {as, bc}));
  EXPECT_FALSE(queue_equiv({as, ac}, {ac, as}));
  EXPECT_FALSE(queue_equiv({as}, {as, as}));
}

TEST(QueueEquivProperty, AgreesWithSwapSearch) {
  test::Gen gen(29);
  for (int i = 0; i < 600; ++i) {
    const auto n = gen.below(6);
    auto a = gen.messages(n);
    auto b = gen.coin() ? gen.messages(n) : a;
    if (b.size() > 1 && gen.coin()) std::swap(b[0], b[1 + gen.below(b.size() - 1)]);
    EXPECT_EQ(queue_equiv(a, b), swap_reachable(a, b));
    EXPECT_TRUE(queue_equiv(a, a));
    EXPECT_EQ(queue_equiv(a, b), queue_equiv(b, a));
  }
}

// ------------------------------------------------------------- implements

HistoryGlobal after(const GlobalType& g, std::size_t n) {
  auto h = start(g);
  for (std::size_t i = 0; i < n; ++i) h = global_forward(h).at(0).target;
  return h;
}

TEST(Implements, StartOfSession) {
  auto m1 = run("buyer_seller", "init");
  EXPECT_TRUE(initially_implements(m1, buyer_seller()));
  EXPECT_TRUE(implements(m1, start(buyer_seller()), 4));
  EXPECT_FALSE(initially_implements(test::initial("buyer_seller"), buyer_seller()));
}

TEST(Implements, AfterTheFirstExchange) {
  auto m = run("buyer_seller", "init out@B in@S");
  EXPECT_TRUE(implements(m, after(buyer_seller(), 2), 4));
  EXPECT_TRUE(implements(run("buyer_seller", "init out@B"), after(buyer_seller(), 1), 4));
}

TEST(Implements, OtherProtocolDoesNot) {
  auto m = run("independent4", "init");
  EXPECT_FALSE(implements(m, after(buyer_seller(), 2), 4));
  EXPECT_FALSE(initially_implements(m, buyer_seller()));
}

// ---------------------------------------------------------- correspondence

TEST(Correspondence, EndOnlyIsVacuous) {
  auto rep = check_correspondence(global::end(), 4);
  EXPECT_TRUE(rep.ok());
}

TEST(Correspondence, ForwardTransitionsAreAlwaysMatched) {
  auto g = parse_global("A -> B : <nat>. B -> C : <nat>. C -> A : <nat>. end");
  auto rep = check_correspondence(g, 6, false);
  for (const auto& v : rep.violations) EXPECT_EQ(v.rfind("(a) ", 0), 0u) << v;
  for (const auto& v : rep.violations) EXPECT_EQ(v.find("FVal"), std::string::npos) << v;
  for (const auto& v : rep.violations) EXPECT_EQ(v.find("FCho"), std::string::npos) << v;
}

TEST(Correspondence, BuyerSellerUnreceivedOutputsCannotBeUndone) {
  auto rep = check_correspondence(test::initial("buyer_seller"), 6, false);
  EXPECT_GT(count_part(rep, "(a)"), 0u);
  bool bval1 = false;
  for (const auto& v : rep.violations) bval1 = bval1 || v.find("BVal1") != std::string::npos;
  EXPECT_TRUE(bval1);
}

TEST(Correspondence, ThreeBuyerIsNotFirstOrder) {
  EXPECT_THROW(check_correspondence(test::initial("three_buyer"), 3), Error);
}

// ------------------------------------------------------------ bisimulation

TEST(Bisimulation, Reflexive) {
  auto m1 = run("buyer_seller", "init");
  EXPECT_TRUE(bf_bisimilar(m1, m1, 2));
}

TEST(Bisimulation, StableStateAndItsOutput) {
  auto m1 = run("buyer_seller", "init");
  auto m2 = run("buyer_seller", "init out@B");
  // the barb of B comes back only after in, rollS, rIn, rOut
  EXPECT_FALSE(bf_bisimilar(m1, m2, 2));
  EXPECT_TRUE(bf_bisimilar(m1, m2, 4));
  EXPECT_TRUE(bf_bisimilar(m2, m1, 4));
}

TEST(Bisimulation, EndedConfigurationDiffers) {
  auto m1 = run("buyer_seller", "init");
  auto done = run("buyer_seller", "init out@B in@S out@S in@B sel@B:quit bra@S");
  ASSERT_NE(barbs(m1), barbs(done));
  EXPECT_FALSE(bf_bisimilar(m1, done, 2));
}

// -------------------------------------------------------------- stepping

TEST(StepToken, Parsing) {
  auto t = parse_step_token("sel@B,l2:ok");
  EXPECT_EQ(t.rule, "sel");
  EXPECT_EQ(t.subjects, (std::vector<std::string>{"B", "l2"}));
  EXPECT_EQ(t.label, std::optional<Label>("ok"));
  EXPECT_EQ(parse_step_token("3").index, std::optional<std::size_t>(3));
  EXPECT_THROW(parse_step_token("@A"), Error);
}

TEST(Stepper, EmptyScriptLeavesTheInitialState) {
  Stepper st(test::initial("three_buyer"), Semantics::Decoupled);
  for (const auto& tok : script_tokens("# nothing\n  // here\n")) st.step(tok);
  EXPECT_EQ(st.current(), test::initial("three_buyer"));
}

TEST(Stepper, UndoInBothSemantics) {
  Stepper d(test::initial("three_buyer"), Semantics::Decoupled);
  d.step("init");
  d.step("out@A");
  d.step("in@S");
  auto undone = d.undo();
  ASSERT_EQ(undone.size(), 3u);
  EXPECT_EQ(undone[0].rule, "rollS");
  EXPECT_EQ(d.current(), run("three_buyer", test::kM1));
  d.undo();
  EXPECT_EQ(d.current(), test::initial("three_buyer"));
}

TEST(Stepper, AtomicUndoIsOneStep) {
  Stepper a(test::initial("buyer_seller"), Semantics::Atomic);
  a.step("init");
  a.step("AC@B");
  auto undone = a.undo();
  ASSERT_EQ(undone.size(), 1u);
  EXPECT_EQ(undone[0].rule, "RAC");
  EXPECT_EQ(a.current(), run("buyer_seller", "init"));
}

TEST(Stepper, UnknownStepsAreStale) {
  Stepper st(test::initial("buyer_seller"), Semantics::Decoupled);
  try {
    st.step("out@B");
    FAIL() << "expected StaleRedex";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::StaleRedex);
  }
  EXPECT_THROW(st.step("7"), Error);
  EXPECT_THROW(st.undo(), Error);
}

// ------------------------------------------------------------------- json

TEST(Json, ExploreIsDeterministic) {
  auto m0 = test::initial("buyer_seller");
  auto a = to_json(explore(m0, Semantics::Decoupled, 5), Semantics::Decoupled, 5).dump(2);
  auto b = to_json(explore(test::initial("buyer_seller"), Semantics::Decoupled, 5), Semantics::Decoupled, 5).dump(2);
  EXPECT_EQ(a, b);
  auto j = json::parse(a);
  EXPECT_EQ(j["schema"], kLtsSchema);
  EXPECT_EQ(j["states"].size(), explore(m0, Semantics::Decoupled, 5).states.size());
}

TEST(Json, TraceDumpReplays) {
  Stepper st(test::initial("three_buyer"), Semantics::Decoupled);
  for (const auto& tok : script_tokens(test::kM5)) st.step(tok);
  auto dump = st.dump();
  EXPECT_EQ(dump.dump(), st.dump().dump());
  EXPECT_EQ(replay_dump(json::parse(dump.dump()), test::initial("three_buyer")), st.current());

  auto tampered = dump;
  tampered["steps"][2]["hash"] = "0000000000000000";
  try {
    replay_dump(tampered, test::initial("three_buyer"));
    FAIL() << "expected StaleRedex";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::StaleRedex);
  }
  auto wrong = dump;
  wrong["schema"] = "other";
  EXPECT_THROW(replay_dump(wrong, test::initial("three_buyer")), Error);
}

TEST(Json, ReportShapes) {
  auto causal = to_json(check_causal_consistency(test::initial("buyer_seller"), 2));
  EXPECT_TRUE(causal.contains("pairs_checked"));
  EXPECT_TRUE(causal.contains("equivalent_and_cofinal"));
  EXPECT_EQ(causal["violation_count"], 0);
  auto loop = to_json(check_loop(test::initial("buyer_seller"), 3));
  EXPECT_TRUE(loop.contains("checked"));
  EXPECT_EQ(loop["schema"], kReportSchema);
}

}  // namespace
}  // namespace rchor
