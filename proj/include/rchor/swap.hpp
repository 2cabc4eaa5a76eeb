#pragma once

/**
 * @file swap.hpp
 * @brief Swapping congruence on global types, decided by bounded search.
 */

#include <deque>
#include <string>
#include <unordered_set>
#include <vector>

#include "rchor/projection.hpp"

namespace rchor {

inline constexpr std::size_t kDefaultSwapBudget = 256;

enum class SwapVerdict { Equivalent, Refuted, BudgetExhausted };

namespace detail {

inline bool disjoint(const Participant& p1, const Participant& q1, const Participant& p2, const Participant& q2) {
  return p1 != p2 && p1 != q2 && q1 != p2 && q1 != q2;
}

inline void root_swaps(const GlobalType& g, std::vector<GlobalType>& out) {
  if (const auto* e = std::get_if<GExchange>(&g.node().v)) {
    if (const auto* e2 = std::get_if<GExchange>(&e->cont.node().v)) {
      if (disjoint(e->from, e->to, e2->from, e2->to))
        out.push_back(global::exchange(e2->from, e2->to, e2->payload,
                                       global::exchange(e->from, e->to, e->payload, e2->cont)));
    } else if (const auto* c = std::get_if<GChoice>(&e->cont.node().v)) {
      if (disjoint(e->from, e->to, c->from, c->to)) {
        Branches<GlobalType> bs;
        for (const auto& [l, b] : c->branches) bs.emplace_back(l, global::exchange(e->from, e->to, e->payload, b));
        out.push_back(global::choice(c->from, c->to, std::move(bs)));
      }
    }
    return;
  }
  const auto* c = std::get_if<GChoice>(&g.node().v);
  if (!c || c->branches.empty()) return;

  // Exchange common to every branch moves out of the choice.
  if (const auto* e0 = std::get_if<GExchange>(&c->branches[0].second.node().v);
      e0 && disjoint(e0->from, e0->to, c->from, c->to)) {
    bool common = true;
    Branches<GlobalType> bs;
    for (const auto& [l, b] : c->branches) {
      const auto* e = std::get_if<GExchange>(&b.node().v);
      if (!e || e->from != e0->from || e->to != e0->to || !value_type_equal(e->payload, e0->payload)) {
        common = false;
        break;
      }
      bs.emplace_back(l, e->cont);
    }
    if (common) out.push_back(global::exchange(e0->from, e0->to, e0->payload, global::choice(c->from, c->to, bs)));
  }

  // Nested choices with a shared inner shape commute.
  if (const auto* i0 = std::get_if<GChoice>(&c->branches[0].second.node().v);
      i0 && disjoint(i0->from, i0->to, c->from, c->to)) {
    auto inner_labels = labels_of(i0->branches);
    for (const auto& [l, b] : c->branches) {
      const auto* i = std::get_if<GChoice>(&b.node().v);
      if (!i || i->from != i0->from || i->to != i0->to || label_set(i->branches) != label_set(i0->branches))
        return;
    }
    Branches<GlobalType> outer;
    for (const auto& lj : inner_labels) {
      Branches<GlobalType> inner;
      for (const auto& [li, b] : c->branches)
        inner.emplace_back(li, *find_branch(std::get<GChoice>(b.node().v).branches, lj));
      outer.emplace_back(lj, global::choice(c->from, c->to, std::move(inner)));
    }
    out.push_back(global::choice(i0->from, i0->to, std::move(outer)));
  }
}

}  // namespace detail

/// All types one swap away from g, at any position.
inline std::vector<GlobalType> swap_neighbours(const GlobalType& g) {
  std::vector<GlobalType> out;
  detail::root_swaps(g, out);
  std::visit(
      [&](const auto& n) {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, GExchange>) {
          for (auto& c : swap_neighbours(n.cont)) out.push_back(global::exchange(n.from, n.to, n.payload, c));
        } else if constexpr (std::is_same_v<N, GChoice>) {
          for (std::size_t i = 0; i < n.branches.size(); ++i)
            for (auto& c : swap_neighbours(n.branches[i].second)) {
              auto bs = n.branches;
              bs[i].second = c;
              out.push_back(global::choice(n.from, n.to, std::move(bs)));
            }
        } else if constexpr (std::is_same_v<N, GRec>) {
          for (auto& c : swap_neighbours(n.body)) out.push_back(global::rec(n.var, c));
        }
      },
      g.node().v);
  return out;
}

/// Breadth-first closure of g under swapping, capped at `budget` distinct types.
/// `complete` is false when the cap cut the search short.
inline std::vector<GlobalType> swap_closure(const GlobalType& g, std::size_t budget, bool* complete = nullptr) {
  std::vector<GlobalType> seen_types{g};
  std::unordered_set<std::string> seen{to_string(g, true)};
  std::size_t head = 0;
  bool full = true;
  while (head < seen_types.size()) {
    auto cur = seen_types[head++];
    for (auto& n : swap_neighbours(cur)) {
      if (!seen.insert(to_string(n, true)).second) continue;
      if (seen_types.size() >= budget) {
        full = false;
        break;
      }
      seen_types.push_back(n);
    }
    if (!full) break;
  }
  if (complete) *complete = full;
  return seen_types;
}

inline SwapVerdict swap_search(const GlobalType& g1, const GlobalType& g2, std::size_t budget = kDefaultSwapBudget) {
  const auto target = to_string(g2, true);
  bool complete = true;
  for (const auto& g : swap_closure(g1, budget, &complete))
    if (to_string(g, true) == target) return SwapVerdict::Equivalent;
  return complete ? SwapVerdict::Refuted : SwapVerdict::BudgetExhausted;
}

inline bool swap_equivalent(const GlobalType& g1, const GlobalType& g2, std::size_t budget = kDefaultSwapBudget) {
  switch (swap_search(g1, g2, budget)) {
    case SwapVerdict::Equivalent: return true;
    case SwapVerdict::Refuted: return false;
    case SwapVerdict::BudgetExhausted: break;
  }
  throw Error(ErrorKind::BudgetExhausted, "swap search exceeded " + std::to_string(budget) + " types");
}

}  // namespace rchor
