#pragma once

/**
 * @file properties.hpp
 * @brief Bounded checks relating the atomic and decoupled semantics.
 */

#include "rchor/causal.hpp"
#include "rchor/explore.hpp"
#include "rchor/report.hpp"

namespace rchor {

namespace detail {

inline bool has_step(const std::vector<AtomicStep>& steps, AtomicRule rule, const std::vector<std::string>& subjects,
                     const std::optional<Label>& label, const Configuration& target) {
  return std::any_of(steps.begin(), steps.end(), [&](const auto& s) {
    return s.rule == rule && s.subjects == subjects && s.label == label && s.target == target;
  });
}

inline bool has_target(const std::vector<AtomicStep>& steps, AtomicRule rule, const Configuration& target) {
  return std::any_of(steps.begin(), steps.end(), [&](const auto& s) { return s.rule == rule && s.target == target; });
}

}  // namespace detail

/// Between stable atomic-reachable states, m steps forward to n exactly when n
/// steps backward to m by the inverse rule with the same stamp.
inline Report check_loop(const Configuration& m0, std::size_t depth) {
  Report rep;
  rep.property = "loop";
  auto lts = explore(m0, Semantics::Atomic, depth);
  for (std::size_t i = 0; i < lts.states.size(); ++i) {
    const auto& m = lts.states[i];
    if (!is_stable(m)) {
      rep.violation("atomic-reachable state " + state_hash(m) + " is not stable");
      continue;
    }
    for (auto dir : {Direction::Forward, Direction::Backward}) {
      for (const auto& s : atomic_steps(m, dir)) {
        if (!is_stable(s.target)) continue;
        ++rep.checked;
        auto back = atomic_steps(s.target, dir == Direction::Forward ? Direction::Backward : Direction::Forward);
        bool found = std::any_of(back.begin(), back.end(), [&](const auto& b) {
          return b.rule == inverse(s.rule) && b.subjects == s.subjects && b.label == s.label && b.stamp == s.stamp &&
                 b.target == m;
        });
        if (found)
          ++rep.passed;
        else
          rep.violation(to_string(s) + " from " + state_hash(m) + " has no inverse");
      }
    }
  }
  rep.notes.push_back(std::to_string(lts.states.size()) + " states to depth " + std::to_string(depth));
  return rep;
}

/// Every atomic step is one or two decoupled forward steps (one or three
/// backward) between the same states. Conversely, decoupled runs of those shapes
/// between stable states are atomic steps. The converse is checked for the
/// communication shapes and single local steps; runs of two unrelated forward
/// steps are not atomic and are not considered.
inline Report check_theorem1(const Configuration& m0, std::size_t depth) {
  Report rep;
  rep.property = "theorem1";
  auto lts = explore(m0, Semantics::Atomic, depth);
  for (const auto& m : lts.states) {
    for (auto dir : {Direction::Forward, Direction::Backward}) {
      const bool fwd = dir == Direction::Forward;
      const auto atomic = atomic_steps(m, dir);
      for (const auto& s : atomic) {
        ++rep.checked;
        const auto n = s.path.size();
        if (fwd ? (n != 1 && n != 2) : (n != 1 && n != 3)) {
          rep.violation(to_string(s) + " spans " + std::to_string(n) + " decoupled steps");
          continue;
        }
        Configuration cur = m;
        bool ok = true;
        for (const auto& r : s.path) {
          auto steps = decoupled_steps(cur, dir);
          auto it = std::find_if(steps.begin(), steps.end(), [&](const auto& d) { return d.redex == r; });
          if (it == steps.end()) {
            ok = false;
            break;
          }
          cur = it->target;
        }
        if (ok && cur == s.target && is_stable(cur))
          ++rep.passed;
        else
          rep.violation(to_string(s) + " from " + state_hash(m) + " is not a decoupled run to the same state");
      }

      // Converse.
      for (const auto& d1 : decoupled_steps(m, dir)) {
        const Rule r1 = d1.redex.rule;
        AtomicRule single;
        bool is_single = true;
        switch (r1) {
          case Rule::Init: single = AtomicRule::Init; break;
          case Rule::Beta: single = AtomicRule::Beta; break;
          case Rule::Spawn: single = AtomicRule::Spawn; break;
          case Rule::RInit: single = AtomicRule::RInit; break;
          case Rule::RBeta: single = AtomicRule::RBeta; break;
          case Rule::RSpawn: single = AtomicRule::RSpawn; break;
          default: is_single = false;
        }
        if (is_single) {
          ++rep.checked;
          if (detail::has_target(atomic, single, d1.target))
            ++rep.passed;
          else
            rep.violation(to_string(d1.redex) + " from " + state_hash(m) + " has no atomic counterpart");
          continue;
        }
        if (fwd && (r1 == Rule::Out || r1 == Rule::Sel)) {
          for (const auto& d2 : decoupled_steps(d1.target, dir)) {
            if (d2.redex.rule != (r1 == Rule::Out ? Rule::In : Rule::Bra) || !is_stable(d2.target)) continue;
            ++rep.checked;
            if (detail::has_target(atomic, r1 == Rule::Out ? AtomicRule::AC : AtomicRule::AS, d2.target))
              ++rep.passed;
            else
              rep.violation(to_string(d1.redex) + ";" + to_string(d2.redex) + " from " + state_hash(m) +
                            " has no atomic counterpart");
          }
        }
        if (!fwd && (r1 == Rule::RollS || r1 == Rule::RollC)) {
          for (const auto& d2 : decoupled_steps(d1.target, dir))
            for (const auto& d3 : decoupled_steps(d2.target, dir)) {
              if (!is_stable(d3.target)) continue;
              ++rep.checked;
              if (detail::has_target(atomic, r1 == Rule::RollS ? AtomicRule::RAC : AtomicRule::RAS, d3.target))
                ++rep.passed;
              else
                rep.violation(to_string(d1.redex) + ";" + to_string(d2.redex) + ";" + to_string(d3.redex) + " from " +
                              state_hash(m) + " has no atomic counterpart");
            }
        }
      }
    }
  }
  rep.notes.push_back(std::to_string(lts.states.size()) + " states to depth " + std::to_string(depth));
  return rep;
}

/// From a stable state, a forward step into an unstable state is completed by
/// one more forward step, and a backward one by two more backward steps.
inline Report check_stability_recovery(const Configuration& m0, std::size_t depth) {
  Report rep;
  rep.property = "stability";
  auto lts = explore(m0, Semantics::Atomic, depth);
  for (const auto& m : lts.states) {
    for (auto dir : {Direction::Forward, Direction::Backward}) {
      for (const auto& s : decoupled_steps(m, dir)) {
        if (is_stable(s.target)) continue;
        ++rep.checked;
        bool found = false;
        for (const auto& t : decoupled_steps(s.target, dir)) {
          if (dir == Direction::Forward) {
            found = found || is_stable(t.target);
          } else {
            for (const auto& u : decoupled_steps(t.target, dir)) found = found || is_stable(u.target);
          }
        }
        if (found)
          ++rep.passed;
        else
          rep.violation(to_string(s.redex) + " from " + state_hash(m) + " cannot regain stability");
      }
    }
  }
  return rep;
}

/// From a stable state, an output followed by its input is undone by three
/// backward decoupled steps.
inline Report check_decoupled_undo(const Configuration& m0, std::size_t depth) {
  Report rep;
  rep.property = "decoupled-undo";
  auto lts = explore(m0, Semantics::Atomic, depth);
  for (const auto& m : lts.states) {
    for (const auto& a : decoupled_steps(m, Direction::Forward)) {
      if (a.redex.rule != Rule::Out && a.redex.rule != Rule::Sel) continue;
      for (const auto& b : decoupled_steps(a.target, Direction::Forward)) {
        if (b.redex.rule != (a.redex.rule == Rule::Out ? Rule::In : Rule::Bra) || !is_stable(b.target)) continue;
        ++rep.checked;
        bool back = false;
        for (const auto& x : decoupled_steps(b.target, Direction::Backward))
          for (const auto& y : decoupled_steps(x.target, Direction::Backward))
            for (const auto& z : decoupled_steps(y.target, Direction::Backward)) back = back || z.target == m;
        if (back)
          ++rep.passed;
        else
          rep.violation(to_string(a.redex) + ";" + to_string(b.redex) + " from " + state_hash(m) + " is not undone");
      }
    }
  }
  return rep;
}

}  // namespace rchor
