#pragma once

/**
 * @file types.hpp
 * @brief Global and local session types, value types, printing and unfolding.
 */

#include <algorithm>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "rchor/error.hpp"

namespace rchor {

using Participant = std::string;
using Label = std::string;
using TypeVar = std::string;

template <class T>
using Branches = std::vector<std::pair<Label, T>>;

template <class T>
const T* find_branch(const Branches<T>& bs, const Label& l) {
  for (const auto& [name, t] : bs)
    if (name == l) return &t;
  return nullptr;
}

template <class T>
std::vector<Label> labels_of(const Branches<T>& bs) {
  std::vector<Label> out;
  for (const auto& b : bs) out.push_back(b.first);
  return out;
}

template <class T>
std::set<Label> label_set(const Branches<T>& bs) {
  std::set<Label> out;
  for (const auto& b : bs) out.insert(b.first);
  return out;
}

// ---------------------------------------------------------------- local types

struct LocalNode;

class LocalType {
 public:
  LocalType();
  explicit LocalType(std::shared_ptr<const LocalNode> n) : node_(std::move(n)) {}

  const LocalNode& node() const { return *node_; }
  bool same_node(const LocalType& o) const { return node_ == o.node_; }

 private:
  std::shared_ptr<const LocalNode> node_;
};

/// A payload type: a base sort name, or an abstraction type T -> <>.
class ValueType {
 public:
  ValueType() : base_("nat") {}

  static ValueType base(std::string name) {
    ValueType v;
    v.base_ = std::move(name);
    return v;
  }
  static ValueType arrow(LocalType arg) {
    ValueType v;
    v.base_.clear();
    v.arg_ = std::move(arg);
    return v;
  }
  static ValueType thunk();

  bool is_base() const { return !arg_.has_value(); }
  const std::string& base_name() const { return base_; }
  const LocalType& argument() const { return *arg_; }

 private:
  std::string base_;
  std::optional<LocalType> arg_;
};

struct LSend {
  Participant peer;
  ValueType payload;
  LocalType cont;
};
struct LRecv {
  Participant peer;
  ValueType payload;
  LocalType cont;
};
struct LSelect {
  Participant peer;
  Branches<LocalType> branches;
};
struct LBranch {
  Participant peer;
  Branches<LocalType> branches;
};
struct LRec {
  TypeVar var;
  LocalType body;
};
struct LVar {
  TypeVar var;
};
struct LEnd {};

struct LocalNode {
  std::variant<LSend, LRecv, LSelect, LBranch, LRec, LVar, LEnd> v;
};

inline LocalType::LocalType() : node_(std::make_shared<const LocalNode>(LocalNode{LEnd{}})) {}

inline ValueType ValueType::thunk() { return arrow(LocalType()); }

namespace local {
inline LocalType make(LocalNode n) { return LocalType(std::make_shared<const LocalNode>(std::move(n))); }
inline LocalType end() { return LocalType(); }
inline LocalType send(Participant q, ValueType u, LocalType t) { return make({LSend{std::move(q), std::move(u), std::move(t)}}); }
inline LocalType recv(Participant q, ValueType u, LocalType t) { return make({LRecv{std::move(q), std::move(u), std::move(t)}}); }
inline LocalType select(Participant q, Branches<LocalType> bs) { return make({LSelect{std::move(q), std::move(bs)}}); }
inline LocalType branch(Participant q, Branches<LocalType> bs) { return make({LBranch{std::move(q), std::move(bs)}}); }
inline LocalType rec(TypeVar x, LocalType body) { return make({LRec{std::move(x), std::move(body)}}); }
inline LocalType var(TypeVar x) { return make({LVar{std::move(x)}}); }
}  // namespace local

// --------------------------------------------------------------- global types

struct GlobalNode;

class GlobalType {
 public:
  GlobalType();
  explicit GlobalType(std::shared_ptr<const GlobalNode> n) : node_(std::move(n)) {}

  const GlobalNode& node() const { return *node_; }

 private:
  std::shared_ptr<const GlobalNode> node_;
};

struct GExchange {
  Participant from;
  Participant to;
  ValueType payload;
  GlobalType cont;
};
struct GChoice {
  Participant from;
  Participant to;
  Branches<GlobalType> branches;
};
struct GRec {
  TypeVar var;
  GlobalType body;
};
struct GVar {
  TypeVar var;
};
struct GEnd {};

struct GlobalNode {
  std::variant<GExchange, GChoice, GRec, GVar, GEnd> v;
};

inline GlobalType::GlobalType() : node_(std::make_shared<const GlobalNode>(GlobalNode{GEnd{}})) {}

namespace global {
inline GlobalType make(GlobalNode n) { return GlobalType(std::make_shared<const GlobalNode>(std::move(n))); }
inline GlobalType end() { return GlobalType(); }
inline GlobalType exchange(Participant p, Participant q, ValueType u, GlobalType g) {
  return make({GExchange{std::move(p), std::move(q), std::move(u), std::move(g)}});
}
inline GlobalType choice(Participant p, Participant q, Branches<GlobalType> bs) {
  return make({GChoice{std::move(p), std::move(q), std::move(bs)}});
}
inline GlobalType rec(TypeVar x, GlobalType body) { return make({GRec{std::move(x), std::move(body)}}); }
inline GlobalType var(TypeVar x) { return make({GVar{std::move(x)}}); }
}  // namespace global

// ------------------------------------------------------------------ printing

std::string to_string(const LocalType& t, bool sorted = false);

inline std::string to_string(const ValueType& u, bool sorted = false) {
  if (u.is_base()) return u.base_name();
  if (std::holds_alternative<LEnd>(u.argument().node().v)) return "{{}}";
  return "{{" + to_string(u.argument(), sorted) + "}}";
}

template <class T, class F>
std::string print_branches(const Branches<T>& bs, bool sorted, F&& print) {
  std::vector<std::string> items;
  for (const auto& [l, t] : bs) items.push_back(l + ": " + print(t));
  if (sorted) std::sort(items.begin(), items.end());
  std::string out = "{";
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? ", " : "") + items[i];
  return out + "}";
}

inline std::string to_string(const LocalType& t, bool sorted) {
  auto rec = [sorted](const LocalType& x) { return to_string(x, sorted); };
  return std::visit(
      [&](const auto& n) -> std::string {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, LSend>)
          return n.peer + "!<" + to_string(n.payload, sorted) + ">. " + rec(n.cont);
        else if constexpr (std::is_same_v<N, LRecv>)
          return n.peer + "?<" + to_string(n.payload, sorted) + ">. " + rec(n.cont);
        else if constexpr (std::is_same_v<N, LSelect>)
          return n.peer + "+" + print_branches(n.branches, sorted, rec);
        else if constexpr (std::is_same_v<N, LBranch>)
          return n.peer + "&" + print_branches(n.branches, sorted, rec);
        else if constexpr (std::is_same_v<N, LRec>)
          return "rec " + n.var + ". " + rec(n.body);
        else if constexpr (std::is_same_v<N, LVar>)
          return n.var;
        else
          return "end";
      },
      t.node().v);
}

inline std::string to_string(const GlobalType& g, bool sorted = false) {
  auto rec = [sorted](const GlobalType& x) { return to_string(x, sorted); };
  return std::visit(
      [&](const auto& n) -> std::string {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, GExchange>)
          return n.from + " -> " + n.to + " : <" + to_string(n.payload, sorted) + ">. " + rec(n.cont);
        else if constexpr (std::is_same_v<N, GChoice>)
          return n.from + " -> " + n.to + " : " + print_branches(n.branches, sorted, rec);
        else if constexpr (std::is_same_v<N, GRec>)
          return "rec " + n.var + ". " + rec(n.body);
        else if constexpr (std::is_same_v<N, GVar>)
          return n.var;
        else
          return "end";
      },
      g.node().v);
}

// ------------------------------------------------------ substitution/unfold

inline LocalType substitute(const LocalType& t, const TypeVar& x, const LocalType& r) {
  return std::visit(
      [&](const auto& n) -> LocalType {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, LSend>)
          return local::send(n.peer, n.payload, substitute(n.cont, x, r));
        else if constexpr (std::is_same_v<N, LRecv>)
          return local::recv(n.peer, n.payload, substitute(n.cont, x, r));
        else if constexpr (std::is_same_v<N, LSelect> || std::is_same_v<N, LBranch>) {
          Branches<LocalType> bs;
          for (const auto& [l, c] : n.branches) bs.emplace_back(l, substitute(c, x, r));
          return local::make({N{n.peer, std::move(bs)}});
        } else if constexpr (std::is_same_v<N, LRec>)
          return n.var == x ? t : local::rec(n.var, substitute(n.body, x, r));
        else if constexpr (std::is_same_v<N, LVar>)
          return n.var == x ? r : t;
        else
          return t;
      },
      t.node().v);
}

inline GlobalType substitute(const GlobalType& g, const TypeVar& x, const GlobalType& r) {
  return std::visit(
      [&](const auto& n) -> GlobalType {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, GExchange>)
          return global::exchange(n.from, n.to, n.payload, substitute(n.cont, x, r));
        else if constexpr (std::is_same_v<N, GChoice>) {
          Branches<GlobalType> bs;
          for (const auto& [l, c] : n.branches) bs.emplace_back(l, substitute(c, x, r));
          return global::choice(n.from, n.to, std::move(bs));
        } else if constexpr (std::is_same_v<N, GRec>)
          return n.var == x ? g : global::rec(n.var, substitute(n.body, x, r));
        else if constexpr (std::is_same_v<N, GVar>)
          return n.var == x ? r : g;
        else
          return g;
      },
      g.node().v);
}

/// Unfolds leading recursion binders. Guardedness bounds the loop.
inline LocalType unfold(LocalType t) {
  for (int guard = 0; guard < 1024; ++guard) {
    const auto* r = std::get_if<LRec>(&t.node().v);
    if (!r) return t;
    t = substitute(r->body, r->var, t);
  }
  throw Error(ErrorKind::InvalidInput, "unguarded recursion in local type");
}

inline GlobalType unfold(GlobalType g) {
  for (int guard = 0; guard < 1024; ++guard) {
    const auto* r = std::get_if<GRec>(&g.node().v);
    if (!r) return g;
    g = substitute(r->body, r->var, g);
  }
  throw Error(ErrorKind::InvalidInput, "unguarded recursion in global type");
}

// -------------------------------------------------------------- inspection

inline void collect_participants(const GlobalType& g, std::set<Participant>& out) {
  std::visit(
      [&](const auto& n) {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, GExchange>) {
          out.insert(n.from);
          out.insert(n.to);
          collect_participants(n.cont, out);
        } else if constexpr (std::is_same_v<N, GChoice>) {
          out.insert(n.from);
          out.insert(n.to);
          for (const auto& b : n.branches) collect_participants(b.second, out);
        } else if constexpr (std::is_same_v<N, GRec>) {
          collect_participants(n.body, out);
        }
      },
      g.node().v);
}

inline std::set<Participant> participants(const GlobalType& g) {
  std::set<Participant> out;
  collect_participants(g, out);
  return out;
}

inline bool is_first_order(const ValueType& u) { return u.is_base(); }

inline bool is_first_order(const LocalType& t) {
  return std::visit(
      [&](const auto& n) -> bool {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, LSend> || std::is_same_v<N, LRecv>)
          return is_first_order(n.payload) && is_first_order(n.cont);
        else if constexpr (std::is_same_v<N, LSelect> || std::is_same_v<N, LBranch>)
          return std::all_of(n.branches.begin(), n.branches.end(),
                             [](const auto& b) { return is_first_order(b.second); });
        else if constexpr (std::is_same_v<N, LRec>)
          return is_first_order(n.body);
        else
          return true;
      },
      t.node().v);
}

inline bool is_first_order(const GlobalType& g) {
  return std::visit(
      [&](const auto& n) -> bool {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, GExchange>)
          return is_first_order(n.payload) && is_first_order(n.cont);
        else if constexpr (std::is_same_v<N, GChoice>)
          return std::all_of(n.branches.begin(), n.branches.end(),
                             [](const auto& b) { return is_first_order(b.second); });
        else if constexpr (std::is_same_v<N, GRec>)
          return is_first_order(n.body);
        else
          return true;
      },
      g.node().v);
}

}  // namespace rchor
