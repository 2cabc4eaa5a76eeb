#pragma once

/**
 * @file local_history.hpp
 * @brief Local types with a history cursor, as carried by monitors.
 */

#include <string>
#include <variant>
#include <vector>

#include "rchor/projection.hpp"

namespace rchor {

struct LFrameSend {
  Participant peer;
  ValueType payload;
};
struct LFrameRecv {
  Participant peer;
  ValueType payload;
};
struct LFrameSelect {
  Participant peer;
  Label chosen;
  std::size_t index;
  Branches<LocalType> others;
};
struct LFrameBranch {
  Participant peer;
  Label chosen;
  std::size_t index;
  Branches<LocalType> others;
};
struct LFrameKey {
  std::string key;
};
struct LFrameSpawn {
  std::string parent, first, second;
};
struct LFrameUnfold {
  TypeVar var;
  LocalType body;
};
using LocalFrame =
    std::variant<LFrameSend, LFrameRecv, LFrameSelect, LFrameBranch, LFrameKey, LFrameSpawn, LFrameUnfold>;

/// frames.^^focus, where focus never starts with a recursion binder.
struct HistoryLocal {
  std::vector<LocalFrame> frames;
  LocalType focus;

  static HistoryLocal at_start(const LocalType& t) {
    HistoryLocal h{{}, t};
    h.settle();
    return h;
  }

  void settle() {
    while (const auto* r = std::get_if<LRec>(&focus.node().v)) {
      frames.push_back(LFrameUnfold{r->var, r->body});
      focus = substitute(r->body, r->var, focus);
    }
  }

  /// Index of the innermost frame that is not an unfolding, or npos.
  std::size_t top_index() const {
    for (std::size_t i = frames.size(); i-- > 0;)
      if (!std::holds_alternative<LFrameUnfold>(frames[i])) return i;
    return npos;
  }
  const LocalFrame* top() const {
    auto i = top_index();
    return i == npos ? nullptr : &frames[i];
  }

  /// True when only unfoldings precede the cursor.
  bool at_beginning() const { return top_index() == npos; }

  /// Pops the innermost real frame, refolding the unfoldings above it, and
  /// returns the popped frame together with the refolded continuation.
  std::pair<LocalFrame, LocalType> pop() {
    LocalType cont = focus;
    while (const auto* u = std::get_if<LFrameUnfold>(&frames.back())) {
      cont = local::rec(u->var, u->body);
      frames.pop_back();
    }
    auto f = frames.back();
    frames.pop_back();
    return {f, cont};
  }

  /// The type as it was before any action: all frames undone.
  LocalType original() const {
    LocalType t = focus;
    for (std::size_t i = frames.size(); i-- > 0;) {
      std::visit(
          [&](const auto& f) {
            using F = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<F, LFrameSend>)
              t = local::send(f.peer, f.payload, t);
            else if constexpr (std::is_same_v<F, LFrameRecv>)
              t = local::recv(f.peer, f.payload, t);
            else if constexpr (std::is_same_v<F, LFrameSelect> || std::is_same_v<F, LFrameBranch>) {
              auto bs = f.others;
              bs.insert(bs.begin() + static_cast<std::ptrdiff_t>(f.index), {f.chosen, t});
              t = std::is_same_v<F, LFrameSelect> ? local::select(f.peer, std::move(bs))
                                                   : local::branch(f.peer, std::move(bs));
            } else if constexpr (std::is_same_v<F, LFrameUnfold>)
              t = local::rec(f.var, f.body);
          },
          frames[i]);
    }
    return t;
  }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

inline std::string to_string(const LocalFrame& f) {
  return std::visit(
      [](const auto& x) -> std::string {
        using F = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<F, LFrameSend>)
          return x.peer + "!<" + to_string(x.payload) + ">";
        else if constexpr (std::is_same_v<F, LFrameRecv>)
          return x.peer + "?<" + to_string(x.payload) + ">";
        else if constexpr (std::is_same_v<F, LFrameSelect> || std::is_same_v<F, LFrameBranch>) {
          std::string s = x.peer + (std::is_same_v<F, LFrameSelect> ? "+{" : "&{");
          for (const auto& [l, t] : x.others) s += l + ": " + to_string(t) + ", ";
          return s + x.chosen + "@" + std::to_string(x.index) + "}";
        } else if constexpr (std::is_same_v<F, LFrameKey>)
          return x.key;
        else if constexpr (std::is_same_v<F, LFrameSpawn>)
          return "(" + x.parent + "," + x.first + "," + x.second + ")";
        else
          return "unfold " + x.var;
      },
      f);
}

inline std::string to_string(const HistoryLocal& h) {
  std::string out;
  for (const auto& f : h.frames) out += to_string(f) + ". ";
  return out + "^^" + to_string(h.focus);
}

}  // namespace rchor
