#pragma once

/**
 * @file script.hpp
 * @brief Driving a configuration by named steps, with undo and trace dumps.
 *
 * A step token is either a zero-based index into the current move list or
 * `rule[@s1,s2,...][:label]`. Subjects match as a prefix, so `out@A` selects
 * an output by A from any location. When several moves match, the first in
 * enumeration order is taken.
 */

#include <sstream>

#include "rchor/explore.hpp"
#include "rchor/json_io.hpp"

namespace rchor {

struct StepToken {
  std::string rule;
  std::vector<std::string> subjects;
  std::optional<Label> label;
  std::optional<std::size_t> index;
};

inline StepToken parse_step_token(const std::string& tok) {
  StepToken t;
  if (tok.empty()) throw Error(ErrorKind::InvalidInput, "empty step");
  if (std::all_of(tok.begin(), tok.end(), [](unsigned char c) { return std::isdigit(c); })) {
    t.index = std::stoul(tok);
    return t;
  }
  std::string rest = tok;
  if (auto colon = rest.find(':'); colon != std::string::npos) {
    t.label = rest.substr(colon + 1);
    rest = rest.substr(0, colon);
  }
  if (auto at = rest.find('@'); at != std::string::npos) {
    std::stringstream ss(rest.substr(at + 1));
    for (std::string s; std::getline(ss, s, ',');)
      if (!s.empty()) t.subjects.push_back(s);
    rest = rest.substr(0, at);
  }
  if (rest.empty()) throw Error(ErrorKind::InvalidInput, "step '" + tok + "' names no rule");
  t.rule = rest;
  return t;
}

inline bool matches(const StepToken& t, const Move& mv) {
  if (mv.rule != t.rule || t.subjects.size() > mv.subjects.size()) return false;
  if (!std::equal(t.subjects.begin(), t.subjects.end(), mv.subjects.begin())) return false;
  return !t.label || mv.label == t.label;
}

class Stepper {
 public:
  Stepper(Configuration initial, Semantics sem) : initial_(std::move(initial)), sem_(sem) {}

  const Configuration& current() const { return trail_.empty() ? initial_ : trail_.back().target; }
  const Configuration& initial() const { return initial_; }
  const std::vector<Move>& trail() const { return trail_; }
  Semantics semantics() const { return sem_; }

  std::vector<Move> available() const { return moves(current(), sem_); }

  const Move& step(const std::string& tok) {
    auto t = parse_step_token(tok);
    auto avail = available();
    if (t.index) {
      if (*t.index >= avail.size())
        throw Error(ErrorKind::StaleRedex, "no move " + tok + " (" + std::to_string(avail.size()) + " available)");
      return push(std::move(avail[*t.index]));
    }
    for (auto& mv : avail)
      if (matches(t, mv)) return push(std::move(mv));
    throw Error(ErrorKind::StaleRedex, "no move matches '" + tok + "'");
  }

  /// Returns to the most recent earlier stepped-from state that inverse moves
  /// reach: one move in the atomic semantics, up to three in the decoupled one.
  /// In the decoupled semantics an output cannot be undone alone, so undoing
  /// an input also undoes its output. The moves taken are appended to the trail.
  std::vector<Move> undo() {
    if (marks_.empty()) throw Error(ErrorKind::InvalidInput, "nothing to undo");
    const bool back = !marks_.back().forward;
    const std::size_t limit = sem_ == Semantics::Atomic ? 1 : 3;
    std::vector<std::vector<Move>> paths{{}};
    std::vector<std::vector<Move>> layers;
    for (std::size_t d = 0; d < limit; ++d) {
      std::vector<std::vector<Move>> next;
      for (const auto& path : paths) {
        const Configuration& from = path.empty() ? current() : path.back().target;
        for (auto& mv : moves(from, sem_)) {
          if (mv.forward == !back) continue;
          auto p = path;
          p.push_back(std::move(mv));
          next.push_back(std::move(p));
        }
      }
      paths = next;
      layers.insert(layers.end(), next.begin(), next.end());
    }
    for (std::size_t k = marks_.size(); k-- > 0;) {
      for (const auto& p : layers)
        if (p.back().target == marks_[k].before) {
          marks_.resize(k);
          for (const auto& x : p) trail_.push_back(x);
          return p;
        }
      if (sem_ == Semantics::Atomic) break;
    }
    throw Error(ErrorKind::StaleRedex, "the last step cannot be undone from here");
  }

  json dump() const { return trace_dump(initial_, trail_, sem_); }

 private:
  struct Mark {
    Configuration before;
    bool forward;
  };

  const Move& push(Move mv) {
    marks_.push_back({current(), mv.forward});
    trail_.push_back(std::move(mv));
    return trail_.back();
  }

  Configuration initial_;
  Semantics sem_;
  std::vector<Move> trail_;
  std::vector<Mark> marks_;  // states stepped from, not counting undo moves
};

/// Splits a script into tokens; `#` and `//` start comments.
inline std::vector<std::string> script_tokens(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream lines(text);
  for (std::string line; std::getline(lines, line);) {
    for (auto mark : {"#", "//"})
      if (auto p = line.find(mark); p != std::string::npos) line.resize(p);
    std::stringstream ws(line);
    for (std::string w; ws >> w;) out.push_back(w);
  }
  return out;
}

}  // namespace rchor
