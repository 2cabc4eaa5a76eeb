#pragma once

/**
 * @file projection.hpp
 * @brief Equi-recursive type equality and projection of global types onto roles.
 */

#include <deque>
#include <set>
#include <string>
#include <utility>

#include "rchor/types.hpp"

namespace rchor {

bool type_equal(const LocalType& a, const LocalType& b);

inline bool value_type_equal(const ValueType& a, const ValueType& b) {
  if (a.is_base() != b.is_base()) return false;
  if (a.is_base()) return a.base_name() == b.base_name();
  return type_equal(a.argument(), b.argument());
}

/// Bisimulation over unfoldings; branch order is ignored.
inline bool type_equal(const LocalType& a, const LocalType& b) {
  std::set<std::pair<std::string, std::string>> seen;
  std::deque<std::pair<LocalType, LocalType>> work{{a, b}};
  while (!work.empty()) {
    auto [x, y] = work.front();
    work.pop_front();
    x = unfold(x);
    y = unfold(y);
    if (!seen.emplace(to_string(x), to_string(y)).second) continue;
    const auto& nx = x.node().v;
    const auto& ny = y.node().v;
    if (nx.index() != ny.index()) return false;
    if (const auto* s = std::get_if<LSend>(&nx)) {
      const auto& t = std::get<LSend>(ny);
      if (s->peer != t.peer || !value_type_equal(s->payload, t.payload)) return false;
      work.emplace_back(s->cont, t.cont);
    } else if (const auto* s = std::get_if<LRecv>(&nx)) {
      const auto& t = std::get<LRecv>(ny);
      if (s->peer != t.peer || !value_type_equal(s->payload, t.payload)) return false;
      work.emplace_back(s->cont, t.cont);
    } else if (std::holds_alternative<LSelect>(nx) || std::holds_alternative<LBranch>(nx)) {
      const auto& [p1, b1] = std::holds_alternative<LSelect>(nx)
                                 ? std::pair(std::get<LSelect>(nx).peer, std::get<LSelect>(nx).branches)
                                 : std::pair(std::get<LBranch>(nx).peer, std::get<LBranch>(nx).branches);
      const auto& [p2, b2] = std::holds_alternative<LSelect>(ny)
                                 ? std::pair(std::get<LSelect>(ny).peer, std::get<LSelect>(ny).branches)
                                 : std::pair(std::get<LBranch>(ny).peer, std::get<LBranch>(ny).branches);
      if (p1 != p2 || label_set(b1) != label_set(b2)) return false;
      for (const auto& [l, c] : b1) work.emplace_back(c, *find_branch(b2, l));
    } else if (const auto* v = std::get_if<LVar>(&nx)) {
      if (v->var != std::get<LVar>(ny).var) return false;
    }
  }
  return true;
}

inline bool type_equal(const GlobalType& a, const GlobalType& b) {
  std::set<std::pair<std::string, std::string>> seen;
  std::deque<std::pair<GlobalType, GlobalType>> work{{a, b}};
  while (!work.empty()) {
    auto [x, y] = work.front();
    work.pop_front();
    x = unfold(x);
    y = unfold(y);
    if (!seen.emplace(to_string(x), to_string(y)).second) continue;
    const auto& nx = x.node().v;
    const auto& ny = y.node().v;
    if (nx.index() != ny.index()) return false;
    if (const auto* e = std::get_if<GExchange>(&nx)) {
      const auto& f = std::get<GExchange>(ny);
      if (e->from != f.from || e->to != f.to || !value_type_equal(e->payload, f.payload)) return false;
      work.emplace_back(e->cont, f.cont);
    } else if (const auto* c = std::get_if<GChoice>(&nx)) {
      const auto& d = std::get<GChoice>(ny);
      if (c->from != d.from || c->to != d.to || label_set(c->branches) != label_set(d.branches)) return false;
      for (const auto& [l, g] : c->branches) work.emplace_back(g, *find_branch(d.branches, l));
    } else if (const auto* v = std::get_if<GVar>(&nx)) {
      if (v->var != std::get<GVar>(ny).var) return false;
    }
  }
  return true;
}

inline LocalType project(const GlobalType& g, const Participant& r) {
  return std::visit(
      [&](const auto& n) -> LocalType {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, GExchange>) {
          if (r == n.from) return local::send(n.to, n.payload, project(n.cont, r));
          if (r == n.to) return local::recv(n.from, n.payload, project(n.cont, r));
          return project(n.cont, r);
        } else if constexpr (std::is_same_v<N, GChoice>) {
          Branches<LocalType> bs;
          for (const auto& [l, c] : n.branches) bs.emplace_back(l, project(c, r));
          if (r == n.from) return local::select(n.to, std::move(bs));
          if (r == n.to) return local::branch(n.from, std::move(bs));
          if (bs.empty()) return local::end();
          for (std::size_t i = 1; i < bs.size(); ++i)
            if (!type_equal(bs[0].second, bs[i].second))
              throw Error(ErrorKind::ProjectionUndefined,
                          "branches '" + bs[0].first + "' and '" + bs[i].first + "' differ for role " + r);
          return bs[0].second;
        } else if constexpr (std::is_same_v<N, GRec>) {
          if (!participants(n.body).count(r)) return local::end();
          return local::rec(n.var, project(n.body, r));
        } else if constexpr (std::is_same_v<N, GVar>) {
          return local::var(n.var);
        } else {
          return local::end();
        }
      },
      g.node().v);
}

}  // namespace rchor
