#pragma once

/**
 * @file explore.hpp
 * @brief Bounded breadth-first exploration of either reduction relation.
 */

#include <cstdlib>
#include <deque>
#include <unordered_map>

#include "rchor/atomic.hpp"

namespace rchor {

enum class Semantics { Decoupled, Atomic };

inline constexpr std::size_t kDefaultStateBudget = 200000;

/// RCHOR_STATE_BUDGET overrides the default bound on explored states.
inline std::size_t state_budget() {
  if (const char* env = std::getenv("RCHOR_STATE_BUDGET")) {
    char* end = nullptr;
    auto v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return kDefaultStateBudget;
}

/// A uniform view of one step of either semantics.
struct Move {
  std::string rule;
  std::string session;
  std::vector<std::string> subjects;
  std::optional<Label> label;
  bool forward;
  Configuration target;
};

inline std::string to_string(const Move& m) {
  std::string out = m.rule;
  for (std::size_t i = 0; i < m.subjects.size(); ++i) out += (i ? "," : "@") + m.subjects[i];
  if (m.label) out += ":" + *m.label;
  return out;
}

inline std::vector<Move> moves(const Configuration& m, Semantics sem) {
  std::vector<Move> out;
  for (auto dir : {Direction::Forward, Direction::Backward}) {
    if (sem == Semantics::Decoupled) {
      for (auto& s : decoupled_steps(m, dir))
        out.push_back({to_string(s.redex.rule), s.redex.session, s.redex.subjects, s.redex.label,
                       dir == Direction::Forward, std::move(s.target)});
    } else {
      for (auto& s : atomic_steps(m, dir))
        out.push_back(
            {to_string(s.rule), s.session, s.subjects, s.label, dir == Direction::Forward, std::move(s.target)});
    }
  }
  return out;
}

struct LtsEdge {
  std::size_t src, dst;
  std::string rule;
  std::vector<std::string> subjects;
  std::optional<Label> label;
  bool forward;
};

struct Lts {
  std::vector<Configuration> states;
  std::vector<std::size_t> depth;
  std::vector<LtsEdge> edges;
  std::vector<std::vector<std::size_t>> out;  // edge indices per state

  std::optional<std::size_t> find(const Configuration& m) const {
    auto it = index.find(m.key());
    if (it == index.end()) return std::nullopt;
    return it->second;
  }

  std::unordered_map<std::string, std::size_t> index;
};

/// States within `depth` steps of m0; states at the boundary are not expanded.
inline Lts explore(const Configuration& m0, Semantics sem, std::size_t depth, bool backward = true,
                   std::size_t budget = state_budget()) {
  Lts g;
  auto intern = [&](const Configuration& m, std::size_t d) {
    auto [it, fresh] = g.index.emplace(m.key(), g.states.size());
    if (fresh) {
      if (g.states.size() >= budget)
        throw Error(ErrorKind::StateBudgetExceeded, "more than " + std::to_string(budget) + " states");
      g.states.push_back(m);
      g.depth.push_back(d);
      g.out.emplace_back();
    }
    return std::pair{it->second, fresh};
  };
  std::deque<std::size_t> queue{intern(m0, 0).first};
  while (!queue.empty()) {
    auto i = queue.front();
    queue.pop_front();
    if (g.depth[i] >= depth) continue;
    for (auto& mv : moves(g.states[i], sem)) {
      if (!backward && !mv.forward) continue;
      auto [j, fresh] = intern(mv.target, g.depth[i] + 1);
      if (fresh) queue.push_back(j);
      g.out[i].push_back(g.edges.size());
      g.edges.push_back({i, j, mv.rule, mv.subjects, mv.label, mv.forward});
    }
  }
  return g;
}

}  // namespace rchor
