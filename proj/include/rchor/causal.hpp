#pragma once

/**
 * @file causal.hpp
 * @brief Stamped transitions, residuals, trace equivalence and causal consistency
 * over the atomic semantics.
 *
 * Trace equivalence is decided on the length-non-increasing fragment of the
 * rewriting: commuting adjacent concurrent steps and cancelling a step next to
 * its inverse. Two traces are equivalent when their closures meet.
 */

#include <algorithm>
#include <deque>
#include <unordered_map>
#include <unordered_set>

#include "rchor/atomic.hpp"
#include "rchor/explore.hpp"
#include "rchor/report.hpp"

namespace rchor {

inline constexpr std::size_t kDefaultRewriteBudget = 100000;
inline constexpr std::size_t kDefaultTraceLength = 4;

struct Transition {
  Configuration source, target;
  AtomicRule rule;
  std::string session;
  std::vector<std::string> subjects;
  std::optional<Label> label;
  Stamp stamp;
};

/// Rule, subjects and label; together with the source this fixes the step.
inline std::string identity(const Transition& t) {
  std::string out = to_string(t.rule);
  for (std::size_t i = 0; i < t.subjects.size(); ++i) out += (i ? "," : "@") + t.subjects[i];
  if (t.label) out += ":" + *t.label;
  return out;
}

inline std::string to_string(const Transition& t) { return identity(t); }

inline Transition as_transition(const Configuration& source, const AtomicStep& s) {
  return {source, s.target, s.rule, s.session, s.subjects, s.label, s.stamp};
}

/// Forward transitions first, then backward ones, each in engine order.
inline std::vector<Transition> transitions(const Configuration& m) {
  std::vector<Transition> out;
  for (auto dir : {Direction::Forward, Direction::Backward})
    for (const auto& s : atomic_steps(m, dir)) out.push_back(as_transition(m, s));
  return out;
}

/// The stamp a rule must carry, given the step's subjects.
inline Stamp expected_stamp(AtomicRule rule, const std::vector<std::string>& subjects) {
  Stamp s;
  switch (rule) {
    case AtomicRule::Init:
    case AtomicRule::RInit:
      for (const auto& l : subjects) s.insert("@" + l);
      break;
    case AtomicRule::AC:
    case AtomicRule::AS:
    case AtomicRule::RAC:
    case AtomicRule::RAS:
      s = {"#" + subjects[0], "#" + subjects[1]};
      break;
    default:
      s = {"@" + subjects[0], "#" + subjects[1]};
  }
  return s;
}

inline bool is_inverse(const Transition& t, const Transition& u) {
  return u.rule == inverse(t.rule) && u.subjects == t.subjects && u.label == t.label && u.stamp == t.stamp &&
         u.source == t.target && u.target == t.source;
}

/// "@loc#participant" for every participant running or monitored at a location.
inline std::set<std::string> placement(const Configuration& m) {
  std::set<std::string> out;
  for (auto i : m.indices_of<RunningProcess>())
    out.insert("@" + m.get<RunningProcess>(i).loc + "#" + m.get<RunningProcess>(i).participant);
  for (auto i : m.indices_of<Monitor>())
    out.insert("@" + m.get<Monitor>(i).origin.loc + "#" + m.get<Monitor>(i).participant);
  return out;
}

/// Stamps conflict when they share an element, or when one names a location
/// hosting a participant named by the other.
inline bool concurrent(const Transition& t1, const Transition& t2) {
  if (!(t1.source == t2.source)) throw Error(ErrorKind::NotCoinitial, identity(t1) + " and " + identity(t2));
  if (std::any_of(t1.stamp.begin(), t1.stamp.end(), [&](const auto& x) { return t2.stamp.count(x) > 0; }))
    return false;
  const auto placed = placement(t1.source);
  for (const auto* a : {&t1.stamp, &t2.stamp}) {
    const auto* b = a == &t1.stamp ? &t2.stamp : &t1.stamp;
    for (const auto& x : *a)
      for (const auto& y : *b)
        if (x[0] == '@' && y[0] == '#' && placed.count(x + y)) return false;
  }
  return true;
}

namespace detail {

/// Memoised transitions per state.
class TransitionCache {
 public:
  const std::vector<Transition>& at(const Configuration& m) {
    auto it = memo_.find(m.key());
    if (it == memo_.end()) it = memo_.emplace(m.key(), transitions(m)).first;
    return it->second;
  }

 private:
  std::unordered_map<std::string, std::vector<Transition>> memo_;
};

inline TransitionCache& shared_cache() {
  static TransitionCache cache;
  return cache;
}

}  // namespace detail

/// t2 after t1: the step of t2 enabled once t1 has happened.
inline Transition residual(const Transition& t2, const Transition& t1) {
  if (!concurrent(t1, t2))
    throw Error(ErrorKind::InvalidInput, identity(t2) + " conflicts with " + identity(t1) + "; no residual");
  for (const auto& c : detail::shared_cache().at(t1.target))
    if (identity(c) == identity(t2) && c.stamp == t2.stamp) return c;
  throw Error(ErrorKind::ResidualMissing, identity(t2) + " after " + identity(t1));
}

struct Trace {
  Configuration start;
  std::vector<Transition> steps;

  const Configuration& target() const { return steps.empty() ? start : steps.back().target; }
  bool forward_only() const {
    return std::all_of(steps.begin(), steps.end(), [](const auto& t) { return is_forward(t.rule); });
  }
  bool backward_only() const {
    return std::none_of(steps.begin(), steps.end(), [](const auto& t) { return is_forward(t.rule); });
  }
};

inline bool composable(const Trace& r) {
  const Configuration* cur = &r.start;
  for (const auto& t : r.steps) {
    if (!(t.source == *cur)) return false;
    cur = &t.target;
  }
  return true;
}

inline std::string to_string(const Trace& r) {
  std::string out = "[";
  for (std::size_t i = 0; i < r.steps.size(); ++i) out += (i ? "; " : "") + identity(r.steps[i]);
  return out + "]";
}

/// Replays step identities from a start state.
inline Trace replay(const Configuration& start, const std::vector<std::string>& ids) {
  Trace r{start, {}};
  for (const auto& id : ids) {
    bool found = false;
    for (const auto& t : detail::shared_cache().at(r.target()))
      if (identity(t) == id) {
        r.steps.push_back(t);
        found = true;
        break;
      }
    if (!found) throw Error(ErrorKind::StaleRedex, id + " is not enabled after " + to_string(r));
  }
  return r;
}

namespace detail {

inline std::string encode(const Trace& r) {
  std::string out;
  for (const auto& t : r.steps) out += identity(t) + ">" + state_hash(t.target) + ";";
  return out;
}

/// The adjacent steps t;u rewritten as t2;t1' with t2 = u and t1' = t, when they commute.
inline std::optional<std::pair<Transition, Transition>> commute(const Transition& t, const Transition& u) {
  auto& cache = shared_cache();
  for (const auto& t2 : cache.at(t.source)) {
    if (identity(t2) != identity(u) || t2.stamp != u.stamp || !concurrent(t, t2)) continue;
    for (const auto& t1 : cache.at(t2.target))
      if (identity(t1) == identity(t) && t1.stamp == t.stamp && t1.target == u.target) return std::pair{t2, t1};
  }
  return std::nullopt;
}

/// All traces one rewrite away.
inline std::vector<Trace> rewrites(const Trace& r) {
  std::vector<Trace> out;
  for (std::size_t i = 0; i + 1 < r.steps.size(); ++i) {
    const auto& t = r.steps[i];
    const auto& u = r.steps[i + 1];
    if (is_inverse(t, u)) {
      Trace c{r.start, {}};
      c.steps.insert(c.steps.end(), r.steps.begin(), r.steps.begin() + static_cast<std::ptrdiff_t>(i));
      c.steps.insert(c.steps.end(), r.steps.begin() + static_cast<std::ptrdiff_t>(i + 2), r.steps.end());
      out.push_back(std::move(c));
    }
    if (auto sw = commute(t, u)) {
      Trace c = r;
      c.steps[i] = sw->first;
      c.steps[i + 1] = sw->second;
      out.push_back(std::move(c));
    }
  }
  return out;
}

}  // namespace detail

/// Encodings of every trace reachable from r by commuting and cancelling.
inline std::unordered_set<std::string> trace_closure(const Trace& r, std::size_t budget = kDefaultRewriteBudget) {
  std::unordered_set<std::string> seen{detail::encode(r)};
  std::deque<Trace> queue{r};
  while (!queue.empty()) {
    auto cur = std::move(queue.front());
    queue.pop_front();
    for (auto& n : detail::rewrites(cur)) {
      if (!seen.insert(detail::encode(n)).second) continue;
      if (seen.size() > budget)
        throw Error(ErrorKind::BudgetExhausted, "trace closure exceeds " + std::to_string(budget) + " traces");
      queue.push_back(std::move(n));
    }
  }
  return seen;
}

inline bool trace_equivalent(const Trace& r1, const Trace& r2, std::size_t budget = kDefaultRewriteBudget) {
  if (!(r1.start == r2.start)) throw Error(ErrorKind::NotCoinitial, to_string(r1) + " and " + to_string(r2));
  if (!(r1.target() == r2.target())) return false;
  auto c1 = trace_closure(r1, budget);
  auto c2 = trace_closure(r2, budget);
  const auto& small = c1.size() <= c2.size() ? c1 : c2;
  const auto& large = c1.size() <= c2.size() ? c2 : c1;
  return std::any_of(small.begin(), small.end(), [&](const auto& e) { return large.count(e) > 0; });
}

struct Rearranged {
  Trace backward;  // backward steps only, from the original start
  Trace forward;   // forward steps only, from the end of `backward`
};

/// Moves backward steps to the front: cancel the earliest forward step followed
/// by its inverse, otherwise commute the pair.
inline Rearranged rearrange(const Trace& r, std::size_t budget = kDefaultRewriteBudget) {
  Trace cur = r;
  for (std::size_t iter = 0;; ++iter) {
    if (iter > budget) throw Error(ErrorKind::BudgetExhausted, "rearranging " + to_string(r));
    std::size_t i = 0;
    while (i + 1 < cur.steps.size() && !(is_forward(cur.steps[i].rule) && !is_forward(cur.steps[i + 1].rule))) ++i;
    if (i + 1 >= cur.steps.size()) break;
    const auto& t = cur.steps[i];
    const auto& u = cur.steps[i + 1];
    if (is_inverse(t, u)) {
      cur.steps.erase(cur.steps.begin() + static_cast<std::ptrdiff_t>(i),
                      cur.steps.begin() + static_cast<std::ptrdiff_t>(i + 2));
    } else if (auto sw = detail::commute(t, u)) {
      cur.steps[i] = sw->first;
      cur.steps[i + 1] = sw->second;
    } else {
      throw Error(ErrorKind::EngineError, identity(t) + " and " + identity(u) + " neither cancel nor commute");
    }
  }
  Rearranged out{{cur.start, {}}, {cur.start, {}}};
  std::size_t k = 0;
  while (k < cur.steps.size() && !is_forward(cur.steps[k].rule)) out.backward.steps.push_back(cur.steps[k++]);
  out.forward.start = out.backward.target();
  out.forward.steps.assign(cur.steps.begin() + static_cast<std::ptrdiff_t>(k), cur.steps.end());
  return out;
}

/// All traces of length at most maxlen from m0, shortest first.
inline std::vector<Trace> enumerate_traces(const Configuration& m0, std::size_t maxlen,
                                           std::size_t limit = state_budget()) {
  std::vector<Trace> out{Trace{m0, {}}};
  for (std::size_t begin = 0, len = 0; len < maxlen; ++len) {
    std::size_t end = out.size();
    for (std::size_t i = begin; i < end; ++i) {
      for (const auto& t : detail::shared_cache().at(out[i].target())) {
        Trace n = out[i];
        n.steps.push_back(t);
        out.push_back(std::move(n));
        if (out.size() > limit)
          throw Error(ErrorKind::StateBudgetExceeded, "more than " + std::to_string(limit) + " traces");
      }
    }
    begin = end;
  }
  return out;
}

/// Coinitial traces are equivalent exactly when cofinal; also checks that every
/// trace rearranges to an equivalent backward-then-forward trace, and that a
/// trace cofinal with a forward one rearranges to a forward trace no longer.
inline Report check_causal_consistency(const Configuration& m0, std::size_t maxlen = kDefaultTraceLength,
                                       std::size_t budget = kDefaultRewriteBudget) {
  Report rep;
  rep.property = "causal";
  auto traces = enumerate_traces(m0, maxlen);
  std::vector<std::unordered_set<std::string>> closures;
  closures.reserve(traces.size());
  for (const auto& r : traces) closures.push_back(trace_closure(r, budget));

  std::vector<Rearranged> arranged;
  arranged.reserve(traces.size());
  for (const auto& r : traces) {
    arranged.push_back(rearrange(r, budget));
    Trace joined = arranged.back().backward;
    joined.steps.insert(joined.steps.end(), arranged.back().forward.steps.begin(), arranged.back().forward.steps.end());
    if (!trace_equivalent(r, joined, budget)) rep.violation("rearranged trace not equivalent: " + to_string(r));
  }

  for (std::size_t i = 0; i < traces.size(); ++i) {
    for (std::size_t j = i + 1; j < traces.size(); ++j) {
      ++rep.checked;
      const bool cofinal = traces[i].target() == traces[j].target();
      bool equiv = false;
      if (cofinal) {
        const auto& a = closures[i].size() <= closures[j].size() ? closures[i] : closures[j];
        const auto& b = closures[i].size() <= closures[j].size() ? closures[j] : closures[i];
        equiv = std::any_of(a.begin(), a.end(), [&](const auto& e) { return b.count(e) > 0; });
      }
      if (cofinal && equiv) ++rep.passed;
      if (cofinal != equiv)
        rep.violation(to_string(traces[i]) + " and " + to_string(traces[j]) +
                      (cofinal ? " are cofinal but not equivalent" : " are equivalent but not cofinal"));
      if (!cofinal) continue;
      for (auto [a, b] : {std::pair{i, j}, std::pair{j, i}}) {
        if (!traces[b].forward_only()) continue;
        const auto& ra = arranged[a];
        if (!ra.backward.steps.empty() || ra.forward.steps.size() > traces[a].steps.size())
          rep.violation("shortening fails for " + to_string(traces[a]) + " against " + to_string(traces[b]));
      }
    }
  }
  rep.notes.push_back(std::to_string(traces.size()) + " traces of length <= " + std::to_string(maxlen));
  return rep;
}

/// Every coinitial concurrent pair at the explored states closes a square.
inline Report check_square(const Configuration& m0, std::size_t depth) {
  Report rep;
  rep.property = "square";
  auto lts = explore(m0, Semantics::Atomic, depth);
  auto& cache = detail::shared_cache();
  for (const auto& m : lts.states) {
    const auto ts = cache.at(m);
    for (std::size_t a = 0; a < ts.size(); ++a) {
      if (ts[a].stamp != expected_stamp(ts[a].rule, ts[a].subjects))
        rep.violation("stamp of " + identity(ts[a]) + " at " + state_hash(m));
      for (std::size_t b = a + 1; b < ts.size(); ++b) {
        if (!concurrent(ts[a], ts[b])) continue;
        ++rep.checked;
        bool closed = false;
        for (const auto& r2 : cache.at(ts[a].target)) {
          if (identity(r2) != identity(ts[b]) || r2.stamp != ts[b].stamp) continue;
          for (const auto& r1 : cache.at(ts[b].target))
            if (identity(r1) == identity(ts[a]) && r1.stamp == ts[a].stamp && r1.target == r2.target) closed = true;
        }
        if (closed)
          ++rep.passed;
        else
          rep.violation(identity(ts[a]) + " and " + identity(ts[b]) + " at " + state_hash(m) + " do not commute");
      }
    }
  }
  rep.notes.push_back(std::to_string(lts.states.size()) + " states to depth " + std::to_string(depth));
  return rep;
}

}  // namespace rchor
