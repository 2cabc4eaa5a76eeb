#pragma once

/**
 * @file atomic.hpp
 * @brief Atomic reduction, built by composing decoupled steps.
 *
 * A communication AC is an output immediately consumed by its input; its
 * inverse RAC rolls both monitors and then undoes the input and the output.
 * Session start, application and spawning are shared with the decoupled rules.
 */

#include <set>
#include <string>
#include <vector>

#include "rchor/decoupled.hpp"

namespace rchor {

enum class AtomicRule { Init, AC, AS, Beta, Spawn, RInit, RAC, RAS, RBeta, RSpawn };

inline const char* to_string(AtomicRule r) {
  switch (r) {
    case AtomicRule::Init: return "init";
    case AtomicRule::AC: return "AC";
    case AtomicRule::AS: return "AS";
    case AtomicRule::Beta: return "beta";
    case AtomicRule::Spawn: return "spawn";
    case AtomicRule::RInit: return "rInit";
    case AtomicRule::RAC: return "RAC";
    case AtomicRule::RAS: return "RAS";
    case AtomicRule::RBeta: return "rBeta";
    case AtomicRule::RSpawn: return "rSpawn";
  }
  return "?";
}

inline bool is_forward(AtomicRule r) { return static_cast<int>(r) <= static_cast<int>(AtomicRule::Spawn); }

inline AtomicRule inverse(AtomicRule r) {
  switch (r) {
    case AtomicRule::Init: return AtomicRule::RInit;
    case AtomicRule::AC: return AtomicRule::RAC;
    case AtomicRule::AS: return AtomicRule::RAS;
    case AtomicRule::Beta: return AtomicRule::RBeta;
    case AtomicRule::Spawn: return AtomicRule::RSpawn;
    case AtomicRule::RInit: return AtomicRule::Init;
    case AtomicRule::RAC: return AtomicRule::AC;
    case AtomicRule::RAS: return AtomicRule::AS;
    case AtomicRule::RBeta: return AtomicRule::Beta;
    case AtomicRule::RSpawn: return AtomicRule::Spawn;
  }
  return r;
}

/// Tagged identities: locations are prefixed "@", participants "#".
using Stamp = std::set<std::string>;

struct AtomicStep {
  AtomicRule rule;
  std::string session;
  std::vector<std::string> subjects;  // sender, receiver, then locations; or as for the decoupled rule
  std::optional<Label> label;
  Stamp stamp;
  std::vector<Redex> path;  // the decoupled redexes composed
  Configuration target;
};

inline std::string to_string(const AtomicStep& s) {
  std::string out = to_string(s.rule);
  for (std::size_t i = 0; i < s.subjects.size(); ++i) out += (i ? "," : "@") + s.subjects[i];
  if (s.label) out += ":" + *s.label;
  return out;
}

namespace detail {

inline AtomicStep lift(AtomicRule rule, const Step& s) {
  Stamp stamp;
  if (rule == AtomicRule::Init || rule == AtomicRule::RInit) {
    for (const auto& l : s.redex.subjects) stamp.insert("@" + l);
  } else {
    stamp = {"@" + s.redex.subjects[0], "#" + s.redex.subjects[1]};
  }
  return {rule, s.redex.session, s.redex.subjects, s.redex.label, stamp, {s.redex}, s.target};
}

inline std::string queue_signature(const Configuration& m, const std::string& session) {
  std::string out;
  for (const auto& msg : m.get<SessionQueue>(*m.queue_index(session)).future) out += message_key(msg) + ";";
  return out;
}

/// Outputs consumed by the matching input from the receiver's side.
inline void atomic_comm(const Configuration& m, std::vector<AtomicStep>& out) {
  for (const auto& first : decoupled_steps(m, Direction::Forward)) {
    const bool data = first.redex.rule == Rule::Out;
    if (!data && first.redex.rule != Rule::Sel) continue;
    const auto& mid = first.target;
    const auto& p = first.redex.subjects[0];
    auto mi = m.monitor_index(first.redex.session, p);
    const auto& focus = m.get<Monitor>(*mi).history.focus.node().v;
    const Participant q = data ? std::get<LSend>(focus).peer : std::get<LSelect>(focus).peer;
    const auto before = queue_signature(m, first.redex.session);
    for (const auto& second : decoupled_steps(mid, Direction::Forward)) {
      if (second.redex.rule != (data ? Rule::In : Rule::Bra) || second.redex.session != first.redex.session ||
          second.redex.subjects[0] != q || second.redex.label != first.redex.label)
        continue;
      // The input must consume exactly the message just sent.
      if (queue_signature(second.target, first.redex.session) != before) continue;
      AtomicStep s{data ? AtomicRule::AC : AtomicRule::AS,
                   first.redex.session,
                   {p, q, first.redex.subjects[1], second.redex.subjects[1]},
                   first.redex.label,
                   {"#" + p, "#" + q},
                   {first.redex, second.redex},
                   second.target};
      out.push_back(std::move(s));
    }
  }
}

inline void atomic_rollback(const Configuration& m, std::vector<AtomicStep>& out) {
  for (const auto& roll : decoupled_steps(m, Direction::Backward)) {
    const bool data = roll.redex.rule == Rule::RollS;
    if (!data && roll.redex.rule != Rule::RollC) continue;
    const auto& receiver = roll.redex.subjects[0];
    const auto& sender = roll.redex.subjects[1];
    for (const auto& undo_in : decoupled_steps(roll.target, Direction::Backward)) {
      if (undo_in.redex.rule != (data ? Rule::RIn : Rule::RBra) || undo_in.redex.session != roll.redex.session ||
          undo_in.redex.subjects[0] != receiver)
        continue;
      for (const auto& undo_out : decoupled_steps(undo_in.target, Direction::Backward)) {
        if (undo_out.redex.rule != (data ? Rule::ROut : Rule::RSel) || undo_out.redex.session != roll.redex.session ||
            undo_out.redex.subjects[0] != sender)
          continue;
        AtomicStep s{data ? AtomicRule::RAC : AtomicRule::RAS,
                     roll.redex.session,
                     {sender, receiver, undo_out.redex.subjects[1], undo_in.redex.subjects[1]},
                     roll.redex.label,
                     {"#" + sender, "#" + receiver},
                     {roll.redex, undo_in.redex, undo_out.redex},
                     undo_out.target};
        out.push_back(std::move(s));
      }
    }
  }
}

}  // namespace detail

/// All atomic steps from m in one direction, in a deterministic order.
inline std::vector<AtomicStep> atomic_steps(const Configuration& m, Direction dir) {
  std::vector<AtomicStep> out;
  auto steps = decoupled_steps(m, dir);
  for (const auto& s : steps) {
    switch (s.redex.rule) {
      case Rule::Init: out.push_back(detail::lift(AtomicRule::Init, s)); break;
      case Rule::Beta: out.push_back(detail::lift(AtomicRule::Beta, s)); break;
      case Rule::Spawn: out.push_back(detail::lift(AtomicRule::Spawn, s)); break;
      case Rule::RInit: out.push_back(detail::lift(AtomicRule::RInit, s)); break;
      case Rule::RBeta: out.push_back(detail::lift(AtomicRule::RBeta, s)); break;
      case Rule::RSpawn: out.push_back(detail::lift(AtomicRule::RSpawn, s)); break;
      default: break;
    }
  }
  if (dir == Direction::Forward)
    detail::atomic_comm(m, out);
  else
    detail::atomic_rollback(m, out);
  return out;
}

inline std::vector<AtomicStep> enumerate_atomic(const Configuration& m, Direction dir) { return atomic_steps(m, dir); }

/// Replays an atomic step, checking that it is still enabled.
inline Configuration apply_atomic(const Configuration& m, const AtomicStep& s) {
  Configuration cur = m;
  for (const auto& r : s.path) cur = apply(cur, r);
  return cur;
}

}  // namespace rchor
