#pragma once

/**
 * @file conformance.hpp
 * @brief Well-formedness of processes and configurations against local types,
 * the implements relation, queue equivalence, the global/local correspondence
 * check and a bounded back-and-forth bisimulation game.
 *
 * Everything here is restricted to first-order protocols; arrow payloads raise
 * NotFirstOrder.
 */

#include <deque>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "rchor/explore.hpp"
#include "rchor/global_semantics.hpp"
#include "rchor/report.hpp"
#include "rchor/swap.hpp"

namespace rchor {

struct WfContext {
  std::map<std::string, ValueType> vars;
  std::map<TypeVar, LocalType> pvars;
};

namespace detail {

inline bool strict_sort(const std::string& s) { return s == "bool" || s == "nat" || s == "str"; }

inline void require_first_order(const ValueType& u) {
  if (!is_first_order(u)) throw Error(ErrorKind::NotFirstOrder, "payload " + to_string(u) + " is not first-order");
}

inline void require_first_order(const LocalType& t) {
  if (!is_first_order(t)) throw Error(ErrorKind::NotFirstOrder, "local type " + to_string(t) + " is not first-order");
}

}  // namespace detail

/// Base sorts bool, nat and str admit only their constants; other base sorts
/// are opaque and admit any constant or shared name. Variables need a matching
/// assumption in the context.
inline bool value_wf(const WfContext& g, const Value& v, const ValueType& u) {
  detail::require_first_order(u);
  const auto& sort = u.base_name();
  if (std::holds_alternative<std::shared_ptr<const Abstraction>>(v))
    throw Error(ErrorKind::NotFirstOrder, "abstraction sent as " + sort);
  if (const auto* c = std::get_if<Constant>(&v)) {
    if (sort == "bool") return std::holds_alternative<bool>(c->v);
    if (sort == "nat") return std::holds_alternative<std::uint64_t>(c->v);
    if (sort == "str") return std::holds_alternative<std::string>(c->v);
    return true;
  }
  const auto& n = std::get<Name>(v);
  if (n.kind == Name::Kind::Shared) return !detail::strict_sort(sort);
  if (n.kind == Name::Kind::Var) {
    auto it = g.vars.find(n.id);
    return it != g.vars.end() && value_type_equal(it->second, u);
  }
  return false;
}

/// A value of sort u, used to rebuild consumed output prefixes.
inline Value witness_value(const ValueType& u) {
  detail::require_first_order(u);
  const auto& sort = u.base_name();
  if (sort == "nat") return val::nat(0);
  if (sort == "bool") return val::boolean(true);
  return val::str("");
}

/// Γ ⊢ P :: chan : T, by syntax-directed descent.
inline bool check_wf_process(const WfContext& g, const Process& p, const Name& chan, const LocalType& t) {
  detail::require_first_order(t);
  const LocalType ty = unfold(t);
  const auto& tn = ty.node().v;
  return std::visit(
      [&](const auto& n) -> bool {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, PNil>) {
          return std::holds_alternative<LEnd>(tn);
        } else if constexpr (std::is_same_v<N, PVar>) {
          auto it = g.pvars.find(n.var);
          return it != g.pvars.end() && type_equal(it->second, t);
        } else if constexpr (std::is_same_v<N, PRec>) {
          WfContext inner = g;
          inner.pvars[n.var] = t;
          return check_wf_process(inner, n.body, chan, t);
        } else if constexpr (std::is_same_v<N, POut>) {
          const auto* s = std::get_if<LSend>(&tn);
          return s && n.chan == chan && value_wf(g, n.value, s->payload) && check_wf_process(g, n.cont, chan, s->cont);
        } else if constexpr (std::is_same_v<N, PIn>) {
          const auto* r = std::get_if<LRecv>(&tn);
          if (!r || n.chan != chan) return false;
          detail::require_first_order(r->payload);
          if (chan.is_var() && chan.id == n.var) return false;
          WfContext inner = g;
          inner.vars.insert_or_assign(n.var, r->payload);
          return check_wf_process(inner, n.cont, chan, r->cont);
        } else if constexpr (std::is_same_v<N, PSelect> || std::is_same_v<N, PBranch>) {
          const Branches<LocalType>* bs = nullptr;
          if constexpr (std::is_same_v<N, PSelect>) {
            if (const auto* s = std::get_if<LSelect>(&tn)) bs = &s->branches;
          } else {
            if (const auto* b = std::get_if<LBranch>(&tn)) bs = &b->branches;
          }
          if (!bs || n.chan != chan || label_set(*bs) != label_set(n.branches)) return false;
          return std::all_of(n.branches.begin(), n.branches.end(),
                             [&](const auto& b) { return check_wf_process(g, b.second, chan, *find_branch(*bs, b.first)); });
        } else {
          return false;
        }
      },
      p.node().v);
}

inline bool check_wf_process(const WfContext& g, const Process& p, const std::string& x, const LocalType& t) {
  return check_wf_process(g, p, Name::var(x), t);
}

/// (stack; P) against a local type with history, along chan. Consumed actions
/// are peeled off the history one frame at a time, rebuilding the prefix they
/// consumed, until the cursor is at the beginning and the plain judgement
/// applies. `received` lists the variables bound by past inputs, oldest first.
inline bool check_wf_config(std::vector<StackEntry> stack, Process p, HistoryLocal h, const Name& chan,
                            std::vector<std::string> received = {}) {
  while (!h.at_beginning()) {
    auto [frame, cont] = h.pop();
    bool ok = std::visit(
        [&](const auto& f) -> bool {
          using F = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<F, LFrameSend>) {
            p = proc::out(chan, witness_value(f.payload), p);
            h.focus = local::send(f.peer, f.payload, cont);
            return true;
          } else if constexpr (std::is_same_v<F, LFrameRecv>) {
            if (received.empty()) return false;
            p = proc::in(chan, received.back(), p);
            received.pop_back();
            h.focus = local::recv(f.peer, f.payload, cont);
            return true;
          } else if constexpr (std::is_same_v<F, LFrameSelect> || std::is_same_v<F, LFrameBranch>) {
            constexpr bool sel = std::is_same_v<F, LFrameSelect>;
            if (stack.empty() || stack.back().chosen != f.chosen) return false;
            const auto& alt = stack.back().alternatives.node().v;
            const auto* ps = std::get_if<PSelect>(&alt);
            const auto* pb = std::get_if<PBranch>(&alt);
            if (sel ? !ps : !pb) return false;
            const auto& pchan = sel ? ps->chan : pb->chan;
            auto pbs = sel ? ps->branches : pb->branches;
            if (pchan != chan || stack.back().index > pbs.size()) return false;
            pbs.insert(pbs.begin() + static_cast<std::ptrdiff_t>(stack.back().index), {f.chosen, p});
            p = sel ? proc::select(chan, std::move(pbs)) : proc::branch(chan, std::move(pbs));
            stack.pop_back();
            auto tbs = f.others;
            tbs.insert(tbs.begin() + static_cast<std::ptrdiff_t>(f.index), {f.chosen, cont});
            h.focus = sel ? local::select(f.peer, std::move(tbs)) : local::branch(f.peer, std::move(tbs));
            return true;
          } else {
            return false;
          }
        },
        frame);
    if (!ok) return false;
  }
  if (!stack.empty() || !received.empty()) return false;
  return check_wf_process({}, p, chan, h.original());
}

/// Every located service and every monitored participant of m is well formed.
inline Report check_wf_state(const Configuration& m) {
  Report rep;
  rep.property = "wf";
  for (auto i : m.indices_of<LocatedService>()) {
    const auto& s = m.get<LocatedService>(i);
    ++rep.checked;
    if (check_wf_process({}, s.body, s.var, s.annot))
      ++rep.passed;
    else
      rep.violation(s.loc + ": body does not implement " + to_string(s.annot));
  }
  for (auto i : m.indices_of<Monitor>()) {
    const auto& mon = m.get<Monitor>(i);
    ++rep.checked;
    const RunningProcess* run = nullptr;
    for (auto r : m.indices_of<RunningProcess>())
      if (m.get<RunningProcess>(r).loc == mon.origin.loc) run = &m.get<RunningProcess>(r);
    std::vector<std::string> received(mon.tracked.begin() + (mon.tracked.empty() ? 0 : 1), mon.tracked.end());
    if (run && mon.tag == Tag::Empty &&
        check_wf_config(run->stack, run->body, mon.history, Name::endpoint(mon.session, mon.participant), received))
      ++rep.passed;
    else
      rep.violation(mon.session + "[" + mon.participant + "] is not well formed in " + state_hash(m));
  }
  return rep;
}

/// Well-formedness of the system and of every decoupled forward state to depth.
inline Report check_wf(const Configuration& m0, std::size_t depth) {
  Report rep;
  rep.property = "wf";
  for (auto i : m0.indices_of<LocatedService>()) {
    const auto& s = m0.get<LocatedService>(i);
    if (!is_first_order(s.protocol))
      throw Error(ErrorKind::NotFirstOrder, s.protocol_name + " carries code; well-formedness covers first-order protocols");
  }
  auto lts = explore(m0, Semantics::Decoupled, depth, false);
  for (const auto& m : lts.states) rep.merge(check_wf_state(m));
  rep.notes.push_back(std::to_string(lts.states.size()) + " forward states to depth " + std::to_string(depth));
  return rep;
}

/// Equal up to swapping adjacent messages with different senders and different receivers.
inline bool queue_equiv(const std::vector<Message>& h1, const std::vector<Message>& h2) {
  if (h1.size() != h2.size()) return false;
  auto a = canonical_queue(h1);
  auto b = canonical_queue(h2);
  for (std::size_t i = 0; i < a.size(); ++i)
    if (message_key(a[i]) != message_key(b[i])) return false;
  return true;
}

// ------------------------------------------------------------- implements

inline bool operator==(const HistoryGlobal& a, const HistoryGlobal& b) { return to_string(a) == to_string(b); }

/// The shape of a configuration that has just started a session of g with
/// well-formed participants.
inline bool initially_implements(const Configuration& m, const GlobalType& g) {
  if (!m.indices_of<LocatedService>().empty() || !m.indices_of<RunningFunction>().empty()) return false;
  const auto queues = m.indices_of<SessionQueue>();
  if (queues.size() != 1) return false;
  const auto& q = m.get<SessionQueue>(queues[0]);
  if (!q.past.empty() || !q.future.empty()) return false;
  const auto parts = participants(g);
  const auto monitors = m.indices_of<Monitor>();
  const auto runs = m.indices_of<RunningProcess>();
  if (monitors.size() != parts.size() || runs.size() != parts.size()) return false;
  for (auto mi : monitors) {
    const auto& mon = m.get<Monitor>(mi);
    if (mon.session != q.session || !parts.count(mon.participant) || mon.tag != Tag::Empty ||
        !mon.history.at_beginning())
      return false;
    const auto t = project(g, mon.participant);
    if (!type_equal(mon.history.original(), t)) return false;
    bool found = false;
    for (auto ri : runs) {
      const auto& run = m.get<RunningProcess>(ri);
      if (run.participant != mon.participant) continue;
      found = run.stack.empty() && check_wf_process({}, run.body, Name::endpoint(q.session, mon.participant), t);
    }
    if (!found) return false;
  }
  return true;
}

namespace detail {

inline std::vector<GlobalType> protocols_of(const Configuration& m) {
  std::vector<GlobalType> out;
  auto add = [&](const GlobalType& g) {
    if (std::none_of(out.begin(), out.end(), [&](const auto& o) { return to_string(o) == to_string(g); }))
      out.push_back(g);
  };
  for (auto i : m.indices_of<LocatedService>()) add(m.get<LocatedService>(i).protocol);
  for (auto i : m.indices_of<Monitor>()) add(m.get<Monitor>(i).origin.protocol);
  return out;
}

/// Histories reachable from ^^g by forward and backward transitions within depth.
inline std::vector<HistoryGlobal> histories(const GlobalType& g, std::size_t depth) {
  std::vector<HistoryGlobal> out{start(g)};
  std::unordered_map<std::string, std::size_t> seen{{to_string(out[0]), 0}};
  std::size_t begin = 0;
  for (std::size_t d = 0; d < depth; ++d) {
    const std::size_t end = out.size();
    for (std::size_t i = begin; i < end; ++i) {
      auto steps = global_forward(out[i]);
      auto back = global_backward(out[i]);
      steps.insert(steps.end(), back.begin(), back.end());
      for (auto& s : steps)
        if (seen.emplace(to_string(s.target), out.size()).second) out.push_back(std::move(s.target));
    }
    begin = end;
  }
  return out;
}

}  // namespace detail

/// n implements h: h is reachable from some g, some configuration initially
/// implementing g lies within depth steps of n, and n is reachable from it
/// within depth steps.
inline bool implements(const Configuration& n, const HistoryGlobal& h, std::size_t depth) {
  for (const auto& g : detail::protocols_of(n)) {
    if (!is_first_order(g)) throw Error(ErrorKind::NotFirstOrder, "protocol " + to_string(g) + " carries code");
    auto hs = detail::histories(g, depth);
    if (std::none_of(hs.begin(), hs.end(), [&](const auto& x) { return x == h; })) continue;
    auto around = explore(n, Semantics::Decoupled, depth);
    for (const auto& m : around.states) {
      if (!initially_implements(m, g)) continue;
      if (explore(m, Semantics::Decoupled, depth).find(n)) return true;
    }
  }
  return false;
}

// ------------------------------------------------------- correspondence

namespace detail {

inline bool forward_match(const GlobalLabel& g, const Redex& r) {
  switch (g.rule) {
    case GlobalRule::FVal1: return r.rule == Rule::Out && r.subjects[0] == g.from;
    case GlobalRule::FVal2: return r.rule == Rule::In && r.subjects[0] == g.to;
    case GlobalRule::FCho1: return r.rule == Rule::Sel && r.subjects[0] == g.from && r.label == g.label;
    case GlobalRule::FCho2: return r.rule == Rule::Bra && r.subjects[0] == g.to && r.label == g.label;
    default: return false;
  }
}

inline bool backward_match(const GlobalLabel& g, const Redex& r) {
  switch (g.rule) {
    case GlobalRule::BVal1: return r.rule == Rule::ROut && r.subjects[0] == g.from;
    case GlobalRule::BVal2: return r.rule == Rule::RIn && r.subjects[0] == g.to;
    case GlobalRule::BCho1: return r.rule == Rule::RSel && r.subjects[0] == g.from && r.label == g.label;
    case GlobalRule::BCho2: return r.rule == Rule::RBra && r.subjects[0] == g.to && r.label == g.label;
    default: return false;
  }
}

inline bool roll_match(const GlobalLabel& g, const Redex& r) {
  const bool data = g.rule == GlobalRule::BVal1 || g.rule == GlobalRule::BVal2;
  return r.rule == (data ? Rule::RollS : Rule::RollC) && r.subjects[0] == g.to && r.subjects[1] == g.from;
}

inline std::string describe(const GlobalLabel& g) {
  return std::string(to_string(g.rule)) + " " + g.from + "->" + g.to + (g.label ? ":" + *g.label : "");
}

/// h together with histories equal to it up to swapping: independent
/// exchanges ahead of the cursor, or the two most recent past frames.
inline std::vector<HistoryGlobal> swapped_histories(const HistoryGlobal& h, std::size_t budget) {
  std::vector<HistoryGlobal> out{h};
  if (const auto* b = std::get_if<GBefore>(&h.focus)) {
    for (const auto& g : swap_closure(b->type, budget)) {
      HistoryGlobal v{h.frames, GBefore{g}};
      detail::settle(v);
      if (!(v == h)) out.push_back(std::move(v));
    }
  }
  std::vector<std::size_t> real;
  for (std::size_t i = 0; i < h.frames.size(); ++i)
    if (!std::holds_alternative<GFrameUnfold>(h.frames[i])) real.push_back(i);
  if (real.size() >= 2) {
    const auto i = real[real.size() - 2], j = real.back();
    const auto* x = std::get_if<GFrameExchange>(&h.frames[i]);
    const auto* y = std::get_if<GFrameExchange>(&h.frames[j]);
    if (x && y && disjoint(x->from, x->to, y->from, y->to)) {
      HistoryGlobal v = h;
      std::swap(v.frames[i], v.frames[j]);
      out.push_back(std::move(v));
    }
  }
  return out;
}

}  // namespace detail

/// Builds a system whose participants follow their projections literally:
/// outputs send a fixed value of the sort, selections offer every label.
inline Configuration synthesize_system(const GlobalType& g, const std::string& name = "G") {
  std::size_t fresh = 0;
  std::function<Process(const LocalType&)> go = [&](const LocalType& t) -> Process {
    return std::visit(
        [&](const auto& n) -> Process {
          using N = std::decay_t<decltype(n)>;
          const Name x = Name::var("x");
          if constexpr (std::is_same_v<N, LSend>) {
            return proc::out(x, witness_value(n.payload), go(n.cont));
          } else if constexpr (std::is_same_v<N, LRecv>) {
            return proc::in(x, "v" + std::to_string(++fresh), go(n.cont));
          } else if constexpr (std::is_same_v<N, LSelect> || std::is_same_v<N, LBranch>) {
            Branches<Process> bs;
            for (const auto& [l, c] : n.branches) bs.emplace_back(l, go(c));
            return std::is_same_v<N, LSelect> ? proc::select(x, std::move(bs)) : proc::branch(x, std::move(bs));
          } else if constexpr (std::is_same_v<N, LRec>) {
            return proc::rec(n.var, go(n.body));
          } else if constexpr (std::is_same_v<N, LVar>) {
            return proc::var(n.var);
          } else {
            return proc::nil();
          }
        },
        t.node().v);
  };
  std::vector<Component> parts;
  std::size_t k = 0;
  for (const auto& p : participants(g)) {
    const auto t = project(g, p);
    parts.push_back(LocatedService{"l" + std::to_string(++k), k == 1 ? ServiceKind::Request : ServiceKind::Accept, "a",
                                   "x", t, name, g, p, go(t)});
  }
  return Configuration({}, std::move(parts));
}

/// Explores pairs (configuration, history) from the start of the session.
/// Part (a): every global transition is matched by the configuration, forward
/// steps by one reduction and backward steps by one, or by a roll and one.
/// Part (b): every reduction of the configuration is matched by a global
/// transition from a history equal up to swapping; a roll is matched together
/// with the reduction it enables. Reconvergence after independent steps is not
/// checked.
inline Report check_correspondence(const Configuration& system, std::size_t depth, bool part_b = true,
                                   std::size_t swap_budget = kDefaultSwapBudget) {
  Report rep;
  rep.property = "correspondence";
  const auto gs = detail::protocols_of(system);
  for (const auto& g : gs)
    if (!is_first_order(g)) throw Error(ErrorKind::NotFirstOrder, "protocol " + to_string(g) + " carries code");

  struct Pair {
    Configuration m;
    HistoryGlobal h;
    std::size_t depth;
  };
  std::deque<Pair> queue;
  std::unordered_set<std::string> seen;
  auto push = [&](const Configuration& m, const HistoryGlobal& h, std::size_t d) {
    if (seen.insert(m.key() + "\n" + to_string(h)).second) queue.push_back({m, h, d});
  };
  for (const auto& s : decoupled_steps(system, Direction::Forward)) {
    if (s.redex.rule != Rule::Init) continue;
    const auto& mon = s.target.get<Monitor>(s.target.indices_of<Monitor>().front());
    push(s.target, start(mon.origin.protocol), 0);
  }
  std::size_t a_checked = 0, b_checked = 0;
  while (!queue.empty()) {
    auto [m, h, d] = std::move(queue.front());
    queue.pop_front();
    if (d >= depth) continue;
    const auto fwd = decoupled_steps(m, Direction::Forward);
    const auto bwd = decoupled_steps(m, Direction::Backward);

    for (const auto& gstep : global_forward(h)) {
      ++rep.checked;
      ++a_checked;
      bool found = false;
      for (const auto& s : fwd)
        if (detail::forward_match(gstep.label, s.redex)) {
          found = true;
          push(s.target, gstep.target, d + 1);
        }
      if (found)
        ++rep.passed;
      else
        rep.violation("(a) " + detail::describe(gstep.label) + " at " + to_string(h) + " unmatched from " +
                      state_hash(m));
    }
    for (const auto& gstep : global_backward(h)) {
      ++rep.checked;
      ++a_checked;
      bool found = false;
      for (const auto& s : bwd) {
        if (detail::backward_match(gstep.label, s.redex)) {
          found = true;
          push(s.target, gstep.target, d + 1);
        } else if (detail::roll_match(gstep.label, s.redex)) {
          for (const auto& t : decoupled_steps(s.target, Direction::Backward))
            if (detail::backward_match(gstep.label, t.redex)) {
              found = true;
              push(t.target, gstep.target, d + 1);
            }
        }
      }
      if (found)
        ++rep.passed;
      else
        rep.violation("(a) " + detail::describe(gstep.label) + " at " + to_string(h) + " unmatched from " +
                      state_hash(m));
    }

    if (!part_b) continue;
    const auto alts = detail::swapped_histories(h, swap_budget);
    auto matched_fwd = [&](const Redex& r) {
      for (const auto& a : alts)
        for (const auto& gstep : global_forward(a))
          if (detail::forward_match(gstep.label, r)) return true;
      return false;
    };
    auto matched_bwd = [&](const Redex& r) {
      for (const auto& a : alts)
        for (const auto& gstep : global_backward(a))
          if (detail::backward_match(gstep.label, r)) return true;
      return false;
    };
    for (const auto& s : fwd) {
      ++rep.checked;
      ++b_checked;
      if (matched_fwd(s.redex))
        ++rep.passed;
      else
        rep.violation("(b) " + to_string(s.redex) + " from " + state_hash(m) + " unmatched at " + to_string(h));
    }
    for (const auto& s : bwd) {
      if (s.redex.rule == Rule::RInit) continue;
      ++rep.checked;
      ++b_checked;
      bool ok = false;
      if (s.redex.rule == Rule::RollS || s.redex.rule == Rule::RollC) {
        for (const auto& t : decoupled_steps(s.target, Direction::Backward)) ok = ok || matched_bwd(t.redex);
      } else {
        ok = matched_bwd(s.redex);
      }
      if (ok)
        ++rep.passed;
      else
        rep.violation("(b) " + to_string(s.redex) + " from " + state_hash(m) + " unmatched at " + to_string(h));
    }
  }
  rep.notes.push_back(std::to_string(seen.size()) + " pairs to depth " + std::to_string(depth));
  rep.notes.push_back("part (a): " + std::to_string(a_checked) + " global transitions");
  if (part_b) rep.notes.push_back("part (b): " + std::to_string(b_checked) + " reductions; reconvergence not checked");
  return rep;
}

inline Report check_correspondence(const GlobalType& g, std::size_t depth, bool part_b = true) {
  return check_correspondence(synthesize_system(g), depth, part_b);
}

inline std::size_t count_part(const Report& r, const std::string& tag) {
  std::size_t n = 0;
  for (const auto& v : r.violations)
    if (v.rfind(tag, 0) == 0) ++n;
  return n;
}

// ------------------------------------------------------- bisimulation

namespace detail {

class BisimGame {
 public:
  explicit BisimGame(std::size_t weak) : weak_(weak) {}

  bool play(const Configuration& m, const Configuration& n, std::size_t depth) {
    const std::string key = m.key() + "\n" + n.key() + "\n" + std::to_string(depth);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    memo_[key] = true;  // coinductive assumption
    bool r = simulates(m, n, depth) && simulates(n, m, depth);
    memo_[key] = r;
    return r;
  }

 private:
  std::size_t weak_;
  std::unordered_map<std::string, bool> memo_;
  std::unordered_map<std::string, std::vector<Configuration>> closure_;

  const std::vector<Configuration>& closure(const Configuration& n) {
    auto it = closure_.find(n.key());
    if (it == closure_.end()) it = closure_.emplace(n.key(), explore(n, Semantics::Decoupled, weak_).states).first;
    return it->second;
  }

  bool simulates(const Configuration& m, const Configuration& n, std::size_t depth) {
    const auto& around = closure(n);
    for (const auto& p : barbs(m)) {
      if (std::none_of(around.begin(), around.end(), [&](const auto& x) { return barbs(x).count(p) > 0; }))
        return false;
    }
    if (depth == 0) return true;
    for (auto dir : {Direction::Forward, Direction::Backward}) {
      for (const auto& s : atomic_steps(m, dir)) {
        bool answered = false;
        for (const auto& x : around) {
          for (const auto& t : decoupled_steps(x, dir))
            if (play(s.target, t.target, depth - 1)) {
              answered = true;
              break;
            }
          if (answered) break;
        }
        if (!answered) return false;
      }
    }
    return true;
  }
};

}  // namespace detail

/// Bounded weak barbed back-and-forth bisimulation: challenges are atomic
/// steps, answers are decoupled weak steps; the weak closure uses `depth`
/// decoupled steps as well.
inline bool bf_bisimilar(const Configuration& m, const Configuration& n, std::size_t depth) {
  detail::BisimGame game(depth);
  return game.play(m, n, depth);
}

}  // namespace rchor
