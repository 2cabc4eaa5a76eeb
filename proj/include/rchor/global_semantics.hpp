#pragma once

/**
 * @file global_semantics.hpp
 * @brief Global types with a history cursor and their forward/backward steps.
 *
 * A history is a zipper: the frames record completed exchanges, committed
 * choices and recursion unfoldings from the outside in; the focus holds the
 * cursor position inside the innermost unfinished part.
 */

#include <deque>
#include <string>
#include <unordered_map>
#include <vector>

#include "rchor/projection.hpp"

namespace rchor {

struct GFrameExchange {
  Participant from, to;
  ValueType payload;
};
struct GFrameChoice {
  Participant from, to;
  Label chosen;
  std::size_t index;  // position of the chosen branch in the original map
  Branches<GlobalType> others;
};
struct GFrameUnfold {
  TypeVar var;
  GlobalType body;
};
using GlobalFrame = std::variant<GFrameExchange, GFrameChoice, GFrameUnfold>;

/// ^^G
struct GBefore {
  GlobalType type;
};
/// p -> ^^q : <U>. G
struct GMid {
  Participant from, to;
  ValueType payload;
  GlobalType cont;
};
/// p -> ^^q : {l_i: G_i ; l_j: G_j}
struct GMidChoice {
  Participant from, to;
  Branches<GlobalType> branches;
  std::size_t chosen;
};
/// G^^ (never produced by the rules; kept for completeness of the syntax)
struct GFinished {
  GlobalType type;
};
using GlobalFocus = std::variant<GBefore, GMid, GMidChoice, GFinished>;

struct HistoryGlobal {
  std::vector<GlobalFrame> frames;
  GlobalFocus focus;
};

enum class GlobalRule { FVal1, FVal2, FCho1, FCho2, BVal1, BVal2, BCho1, BCho2 };

inline const char* to_string(GlobalRule r) {
  switch (r) {
    case GlobalRule::FVal1: return "FVal1";
    case GlobalRule::FVal2: return "FVal2";
    case GlobalRule::FCho1: return "FCho1";
    case GlobalRule::FCho2: return "FCho2";
    case GlobalRule::BVal1: return "BVal1";
    case GlobalRule::BVal2: return "BVal2";
    case GlobalRule::BCho1: return "BCho1";
    case GlobalRule::BCho2: return "BCho2";
  }
  return "?";
}

struct GlobalLabel {
  GlobalRule rule;
  Participant from, to;
  std::optional<Label> label;
};

struct GlobalStep {
  GlobalLabel label;
  HistoryGlobal target;
};

namespace detail {

inline void settle(HistoryGlobal& h) {
  while (true) {
    auto* b = std::get_if<GBefore>(&h.focus);
    if (!b) return;
    const auto* r = std::get_if<GRec>(&b->type.node().v);
    if (!r) return;
    h.frames.push_back(GFrameUnfold{r->var, r->body});
    b->type = substitute(r->body, r->var, b->type);
  }
}

/// Pops unfold frames above a cursor that sits at the start of the unfolded body.
inline void refold(HistoryGlobal& h) {
  while (!h.frames.empty()) {
    const auto* u = std::get_if<GFrameUnfold>(&h.frames.back());
    auto* b = std::get_if<GBefore>(&h.focus);
    if (!u || !b) return;
    b->type = global::rec(u->var, u->body);
    h.frames.pop_back();
  }
}

}  // namespace detail

inline HistoryGlobal start(const GlobalType& g) {
  HistoryGlobal h{{}, GBefore{g}};
  detail::settle(h);
  return h;
}

inline std::string to_string(const HistoryGlobal& h) {
  std::string out;
  for (const auto& f : h.frames) {
    if (const auto* e = std::get_if<GFrameExchange>(&f)) {
      out += e->from + " -> " + e->to + " : <" + to_string(e->payload) + ">. ";
    } else if (const auto* c = std::get_if<GFrameChoice>(&f)) {
      out += c->from + " -> " + c->to + " : {";
      for (const auto& [l, g] : c->others) out += l + ": " + to_string(g) + ", ";
      out += c->chosen + "@" + std::to_string(c->index) + ": ";
    } else {
      const auto& u = std::get<GFrameUnfold>(f);
      out += "unfold " + u.var + ". ";
    }
  }
  out += std::visit(
      [](const auto& n) -> std::string {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, GBefore>)
          return "^^" + to_string(n.type);
        else if constexpr (std::is_same_v<N, GMid>)
          return n.from + " -> ^^" + n.to + " : <" + to_string(n.payload) + ">. " + to_string(n.cont);
        else if constexpr (std::is_same_v<N, GMidChoice>) {
          std::string s = n.from + " -> ^^" + n.to + " : {";
          for (std::size_t i = 0; i < n.branches.size(); ++i)
            s += (i ? ", " : "") + std::string(i == n.chosen ? "*" : "") + n.branches[i].first + ": " +
                 to_string(n.branches[i].second);
          return s + "}";
        } else
          return to_string(n.type) + "^^";
      },
      h.focus);
  for (const auto& f : h.frames)
    if (std::holds_alternative<GFrameChoice>(f)) out += "}";
  return out;
}

inline std::vector<GlobalStep> global_forward(const HistoryGlobal& h) {
  std::vector<GlobalStep> out;
  if (const auto* b = std::get_if<GBefore>(&h.focus)) {
    if (const auto* e = std::get_if<GExchange>(&b->type.node().v)) {
      HistoryGlobal t{h.frames, GMid{e->from, e->to, e->payload, e->cont}};
      out.push_back({{GlobalRule::FVal1, e->from, e->to, std::nullopt}, std::move(t)});
    } else if (const auto* c = std::get_if<GChoice>(&b->type.node().v)) {
      for (std::size_t j = 0; j < c->branches.size(); ++j) {
        HistoryGlobal t{h.frames, GMidChoice{c->from, c->to, c->branches, j}};
        out.push_back({{GlobalRule::FCho1, c->from, c->to, c->branches[j].first}, std::move(t)});
      }
    }
  } else if (const auto* m = std::get_if<GMid>(&h.focus)) {
    HistoryGlobal t{h.frames, GBefore{m->cont}};
    t.frames.push_back(GFrameExchange{m->from, m->to, m->payload});
    detail::settle(t);
    out.push_back({{GlobalRule::FVal2, m->from, m->to, std::nullopt}, std::move(t)});
  } else if (const auto* mc = std::get_if<GMidChoice>(&h.focus)) {
    const auto& [l, g] = mc->branches[mc->chosen];
    Branches<GlobalType> others;
    for (std::size_t i = 0; i < mc->branches.size(); ++i)
      if (i != mc->chosen) others.push_back(mc->branches[i]);
    HistoryGlobal t{h.frames, GBefore{g}};
    t.frames.push_back(GFrameChoice{mc->from, mc->to, l, mc->chosen, std::move(others)});
    detail::settle(t);
    out.push_back({{GlobalRule::FCho2, mc->from, mc->to, l}, std::move(t)});
  }
  return out;
}

inline std::vector<GlobalStep> global_backward(const HistoryGlobal& h) {
  std::vector<GlobalStep> out;
  if (const auto* m = std::get_if<GMid>(&h.focus)) {
    HistoryGlobal t{h.frames, GBefore{global::exchange(m->from, m->to, m->payload, m->cont)}};
    out.push_back({{GlobalRule::BVal1, m->from, m->to, std::nullopt}, std::move(t)});
    return out;
  }
  if (const auto* mc = std::get_if<GMidChoice>(&h.focus)) {
    HistoryGlobal t{h.frames, GBefore{global::choice(mc->from, mc->to, mc->branches)}};
    out.push_back({{GlobalRule::BCho1, mc->from, mc->to, mc->branches[mc->chosen].first}, std::move(t)});
    return out;
  }
  if (!std::holds_alternative<GBefore>(h.focus)) return out;
  HistoryGlobal t = h;
  detail::refold(t);
  if (t.frames.empty()) return out;
  auto cont = std::get<GBefore>(t.focus).type;
  auto frame = t.frames.back();
  t.frames.pop_back();
  if (const auto* e = std::get_if<GFrameExchange>(&frame)) {
    t.focus = GMid{e->from, e->to, e->payload, cont};
    out.push_back({{GlobalRule::BVal2, e->from, e->to, std::nullopt}, std::move(t)});
  } else if (const auto* c = std::get_if<GFrameChoice>(&frame)) {
    auto bs = c->others;
    bs.insert(bs.begin() + static_cast<std::ptrdiff_t>(c->index), {c->chosen, cont});
    t.focus = GMidChoice{c->from, c->to, std::move(bs), c->index};
    out.push_back({{GlobalRule::BCho2, c->from, c->to, c->chosen}, std::move(t)});
  }
  return out;
}

/// Histories reachable from ^^g in at most `depth` forward steps, in breadth-first order.
inline std::vector<HistoryGlobal> global_reachable(const GlobalType& g, std::size_t depth) {
  std::vector<HistoryGlobal> out{start(g)};
  std::unordered_map<std::string, std::size_t> seen{{to_string(out[0]), 0}};
  std::size_t level_begin = 0;
  for (std::size_t d = 0; d < depth; ++d) {
    const std::size_t level_end = out.size();
    for (std::size_t i = level_begin; i < level_end; ++i)
      for (auto& s : global_forward(out[i]))
        if (seen.emplace(to_string(s.target), out.size()).second) out.push_back(std::move(s.target));
    level_begin = level_end;
  }
  return out;
}

}  // namespace rchor
