#pragma once

/**
 * @file configuration.hpp
 * @brief Runtime configurations: services, running processes, monitors, queues.
 *
 * A Configuration is always kept in normal form: restrictions are hoisted to
 * a sorted list, components are canonicalised and sorted, and restrictions
 * of names that no longer occur are dropped. Two configurations are
 * structurally congruent iff their keys are equal.
 */

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "rchor/local_history.hpp"
#include "rchor/process.hpp"

namespace rchor {

// --------------------------------------------------------------------- store

class Store {
 public:
  /// sigma[x -> v]; undefined when x is already bound.
  Store update(const std::string& x, Value v) const {
    if (bindings_.count(x)) throw Error(ErrorKind::DuplicateBinding, "variable '" + x + "' is already bound");
    Store s = *this;
    s.bindings_.emplace(x, std::move(v));
    return s;
  }

  /// sigma \ x
  Store remove(const std::string& x) const {
    Store s = *this;
    s.bindings_.erase(x);
    return s;
  }

  const Value* lookup(const std::string& x) const {
    auto it = bindings_.find(x);
    return it == bindings_.end() ? nullptr : &it->second;
  }

  bool contains(const std::string& x) const { return bindings_.count(x) > 0; }
  const std::map<std::string, Value>& bindings() const { return bindings_; }

 private:
  std::map<std::string, Value> bindings_;
};

/// sigma(V): variables are looked up, abstraction bodies are closed over sigma.
inline Value eval_value(const Value& v, const Store& s) {
  for (const auto& x : free_vars(v))
    if (!s.contains(x)) throw Error(ErrorKind::UnboundVariable, "variable '" + x + "' is not in the store");
  if (const auto* n = std::get_if<Name>(&v)) return n->is_var() ? *s.lookup(n->id) : v;
  if (!is_abstraction(v)) return v;
  const auto& a = as_abstraction(v);
  NameMap m{[&](const Name& n) -> std::optional<Value> {
    if (n.is_var() && s.contains(n.id)) return *s.lookup(n.id);
    return std::nullopt;
  }};
  return val::abs(a.param, rename(a.body, m, {a.param}));
}

inline Name eval_name(const Name& n, const Store& s) {
  if (!n.is_var()) return n;
  const auto* v = s.lookup(n.id);
  if (!v) throw Error(ErrorKind::UnboundVariable, "variable '" + n.id + "' is not in the store");
  if (const auto* nn = std::get_if<Name>(v)) return *nn;
  throw Error(ErrorKind::EngineError, "variable '" + n.id + "' does not denote a name");
}

// ------------------------------------------------------------------ messages

struct Message {
  Participant from, to;
  std::optional<Label> label;  // set for selections
  Value value;                 // evaluated payload
  Value source;                // payload as written by the sender

  static Message data(Participant p, Participant q, Value v, Value src) {
    return {std::move(p), std::move(q), std::nullopt, std::move(v), std::move(src)};
  }
  static Message choice(Participant p, Participant q, Label l) {
    return {std::move(p), std::move(q), std::move(l), Name::star(), Name::star()};
  }
};

inline std::string to_string(const Message& m) {
  return "(" + m.from + "," + m.to + "," + (m.label ? *m.label : to_string(m.value)) + ")";
}

inline std::string message_key(const Message& m) {
  if (m.label) return "(" + m.from + "," + m.to + ",:" + *m.label + ")";
  return "(" + m.from + "," + m.to + "," + value_key(m.value) + "<=" + value_key(m.source) + ")";
}

/// Two messages commute in a queue when both senders and both receivers differ.
inline bool messages_commute(const Message& a, const Message& b) { return a.from != b.from && a.to != b.to; }

/// Lexicographically least representative of a queue modulo message commutation.
inline std::vector<Message> canonical_queue(const std::vector<Message>& h) {
  std::vector<Message> rest = h, out;
  while (!rest.empty()) {
    std::size_t best = rest.size();
    std::string best_key;
    for (std::size_t i = 0; i < rest.size(); ++i) {
      bool free = true;
      for (std::size_t j = 0; j < i && free; ++j) free = messages_commute(rest[j], rest[i]);
      if (!free) continue;
      auto k = message_key(rest[i]);
      if (best == rest.size() || k < best_key) best = i, best_key = k;
    }
    out.push_back(rest[best]);
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(best));
  }
  return out;
}

/// Indices of messages that can be commuted to the front (resp. back) of h.
inline std::vector<std::size_t> queue_fronts(const std::vector<Message>& h) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < h.size(); ++i) {
    bool free = true;
    for (std::size_t j = 0; j < i && free; ++j) free = messages_commute(h[j], h[i]);
    if (free) out.push_back(i);
  }
  return out;
}

inline std::vector<std::size_t> queue_backs(const std::vector<Message>& h) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < h.size(); ++i) {
    bool free = true;
    for (std::size_t j = i + 1; j < h.size() && free; ++j) free = messages_commute(h[i], h[j]);
    if (free) out.push_back(i);
  }
  return out;
}

// ---------------------------------------------------------------- components

enum class ServiceKind { Request, Accept };
enum class Tag { Empty, Full };

/// l{a!(x:T).P} or l{a?(x:T).P}; the role names the global type and participant T projects from.
struct LocatedService {
  std::string loc;
  ServiceKind kind;
  std::string shared;
  std::string var;
  LocalType annot;
  std::string protocol_name;
  GlobalType protocol;
  Participant participant;
  Process body;
};

/// A suspended alternative set pushed by a committed choice, with the
/// position the committed branch is restored to.
struct StackEntry {
  Process alternatives;  // PSelect or PBranch
  Label chosen;
  std::size_t index;
};

/// l[p]<C; P>
struct RunningProcess {
  std::string loc;
  Participant participant;
  std::vector<StackEntry> stack;  // most recent last
  Process body;
};

/// Where a session endpoint came from, so that its service can be restored.
struct MonitorOrigin {
  std::string loc;
  ServiceKind kind;
  std::string protocol_name;
  GlobalType protocol;
};

/// s_p|_H . x~ . sigma_| with its tag.
struct Monitor {
  std::string session;
  Participant participant;
  Tag tag = Tag::Empty;
  HistoryLocal history;
  std::vector<std::string> tracked;
  Store store;
  MonitorOrigin origin;
};

/// s[h_i * h_o]
struct SessionQueue {
  std::string session;
  std::vector<Message> past;    // h_i: consumed
  std::vector<Message> future;  // h_o: in transit
};

/// k(V u)@l
struct RunningFunction {
  std::string key;
  Process saved;
  std::string loc;
};

using Component = std::variant<LocatedService, RunningProcess, Monitor, SessionQueue, RunningFunction>;

// ------------------------------------------------------------------ printing

namespace detail {

inline std::string stack_string(const std::vector<StackEntry>& c, bool key) {
  if (c.empty()) return "0";
  std::string out;
  for (std::size_t i = 0; i < c.size(); ++i) {
    out += (i ? ", " : "") + (key ? process_key(c[i].alternatives) : to_string(c[i].alternatives));
    if (key) out += "@" + c[i].chosen + ":" + std::to_string(c[i].index);
  }
  return out;
}

inline std::string store_string(const Store& s, bool key) {
  std::string out = "[";
  bool first = true;
  for (const auto& [x, v] : s.bindings()) {
    out += (first ? "" : ", ") + x + "->" + (key ? value_key(v) : to_string(v));
    first = false;
  }
  return out + "]";
}

inline std::string queue_string(const std::vector<Message>& h, bool key) {
  if (h.empty()) return "e";
  std::string out;
  for (std::size_t i = 0; i < h.size(); ++i) out += (i ? "." : "") + (key ? message_key(h[i]) : to_string(h[i]));
  return out;
}

}  // namespace detail

inline std::string component_string(const Component& c, bool key) {
  auto pr = [key](const Process& p) { return key ? process_key(p) : to_string(p); };
  return std::visit(
      [&](const auto& x) -> std::string {
        using C = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<C, LocatedService>) {
          return x.loc + "{" + x.shared + (x.kind == ServiceKind::Request ? "!(" : "?(") + x.var + " : role " +
                 x.protocol_name + "." + x.participant + "). " + pr(x.body) + "}";
        } else if constexpr (std::is_same_v<C, RunningProcess>) {
          return x.loc + "[" + x.participant + "]<" + detail::stack_string(x.stack, key) + "; " + pr(x.body) + ">";
        } else if constexpr (std::is_same_v<C, Monitor>) {
          std::string vars;
          for (std::size_t i = 0; i < x.tracked.size(); ++i) vars += (i ? "," : "") + x.tracked[i];
          std::string s = x.session + "_" + x.participant + (x.tag == Tag::Empty ? "<>" : "<#>") + "|" +
                          to_string(x.history) + " ; " + vars + " ; " + detail::store_string(x.store, key) + "|";
          if (key) s += "@" + x.origin.loc + (x.origin.kind == ServiceKind::Request ? "!" : "?") + x.origin.protocol_name;
          return s;
        } else if constexpr (std::is_same_v<C, SessionQueue>) {
          return x.session + "[" + detail::queue_string(x.past, key) + " * " + detail::queue_string(x.future, key) + "]";
        } else {
          return x.key + "(" + pr(x.saved) + ")@" + x.loc;
        }
      },
      c);
}

inline int component_rank(const Component& c) { return static_cast<int>(c.index()); }

/// Sort key: kind, location, participant, session, then the full rendering.
inline std::tuple<int, std::string, std::string, std::string> component_sort_prefix(const Component& c) {
  return std::visit(
      [](const auto& x) -> std::tuple<int, std::string, std::string, std::string> {
        using C = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<C, LocatedService>)
          return {0, x.loc, x.participant, ""};
        else if constexpr (std::is_same_v<C, RunningProcess>)
          return {1, x.loc, x.participant, ""};
        else if constexpr (std::is_same_v<C, Monitor>)
          return {2, "", x.participant, x.session};
        else if constexpr (std::is_same_v<C, SessionQueue>)
          return {3, "", "", x.session};
        else
          return {4, x.loc, "", x.key};
      },
      c);
}

/// Names a component mentions, for pruning restrictions.
inline void mentioned_names(const Component& c, std::set<std::string>& out) {
  auto proc_names = [&](const Process& p) {
    auto fn = free_names(p);
    out.insert(fn.shared.begin(), fn.shared.end());
    out.insert(fn.sessions.begin(), fn.sessions.end());
  };
  auto value_names = [&](const Value& v) {
    auto fn = free_names(v);
    out.insert(fn.shared.begin(), fn.shared.end());
    out.insert(fn.sessions.begin(), fn.sessions.end());
  };
  std::visit(
      [&](const auto& x) {
        using C = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<C, LocatedService>) {
          out.insert(x.loc);
          out.insert(x.shared);
          proc_names(x.body);
        } else if constexpr (std::is_same_v<C, RunningProcess>) {
          out.insert(x.loc);
          proc_names(x.body);
          for (const auto& e : x.stack) proc_names(e.alternatives);
        } else if constexpr (std::is_same_v<C, Monitor>) {
          out.insert(x.session);
          for (const auto& [k, v] : x.store.bindings()) value_names(v);
          for (const auto& f : x.history.frames) {
            if (const auto* kf = std::get_if<LFrameKey>(&f)) out.insert(kf->key);
            if (const auto* sf = std::get_if<LFrameSpawn>(&f)) {
              out.insert(sf->parent);
              out.insert(sf->first);
              out.insert(sf->second);
            }
          }
        } else if constexpr (std::is_same_v<C, SessionQueue>) {
          out.insert(x.session);
          for (const auto* h : {&x.past, &x.future})
            for (const auto& m : *h) {
              value_names(m.value);
              value_names(m.source);
            }
        } else {
          out.insert(x.key);
          out.insert(x.loc);
          proc_names(x.saved);
        }
      },
      c);
}

inline Component canonical_component(Component c) {
  std::visit(
      [](auto& x) {
        using C = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<C, LocatedService>) {
          x.body = normalize(x.body);
        } else if constexpr (std::is_same_v<C, RunningProcess>) {
          x.body = normalize(x.body);
          for (auto& e : x.stack) e.alternatives = normalize(e.alternatives);
        } else if constexpr (std::is_same_v<C, SessionQueue>) {
          x.past = canonical_queue(x.past);
          x.future = canonical_queue(x.future);
        } else if constexpr (std::is_same_v<C, RunningFunction>) {
          x.saved = normalize(x.saved);
        }
      },
      c);
  return c;
}

// ------------------------------------------------------------- configuration

class Configuration {
 public:
  Configuration() = default;

  /// Builds the normal form of nu restricted.(parts).
  Configuration(std::vector<std::string> restricted, std::vector<Component> parts) {
    std::vector<std::pair<std::tuple<int, std::string, std::string, std::string, std::string>, Component>> keyed;
    std::set<std::string> used;
    for (auto& c : parts) {
      auto cc = canonical_component(std::move(c));
      mentioned_names(cc, used);
      auto [r, a, b, s] = component_sort_prefix(cc);
      keyed.push_back({{r, a, b, s, component_string(cc, true)}, std::move(cc)});
    }
    std::sort(keyed.begin(), keyed.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    std::set<std::string> names(restricted.begin(), restricted.end());
    for (const auto& n : names)
      if (used.count(n)) restricted_.push_back(n);
    key_ = "new {";
    for (std::size_t i = 0; i < restricted_.size(); ++i) key_ += (i ? "," : "") + restricted_[i];
    key_ += "}";
    for (auto& [k, c] : keyed) {
      key_ += " | " + std::get<4>(k);
      parts_.push_back(std::move(c));
    }
  }

  const std::vector<std::string>& restricted() const { return restricted_; }
  const std::vector<Component>& parts() const { return parts_; }
  const std::string& key() const { return key_; }

  friend bool operator==(const Configuration& a, const Configuration& b) { return a.key_ == b.key_; }

  template <class C>
  std::vector<std::size_t> indices_of() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < parts_.size(); ++i)
      if (std::holds_alternative<C>(parts_[i])) out.push_back(i);
    return out;
  }

  template <class C>
  const C& get(std::size_t i) const {
    return std::get<C>(parts_[i]);
  }

  std::optional<std::size_t> monitor_index(const std::string& session, const Participant& p) const {
    for (std::size_t i = 0; i < parts_.size(); ++i)
      if (const auto* m = std::get_if<Monitor>(&parts_[i]); m && m->session == session && m->participant == p)
        return i;
    return std::nullopt;
  }

  std::optional<std::size_t> queue_index(const std::string& session) const {
    for (std::size_t i = 0; i < parts_.size(); ++i)
      if (const auto* q = std::get_if<SessionQueue>(&parts_[i]); q && q->session == session) return i;
    return std::nullopt;
  }

 private:
  std::vector<std::string> restricted_;
  std::vector<Component> parts_;
  std::string key_ = "new {}";
};

/// Stable 64-bit FNV-1a digest of the normal form, rendered in hex.
inline std::string hash_hex(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) out[static_cast<std::size_t>(i)] = digits[h & 15];
  return out;
}

inline std::string state_hash(const Configuration& m) { return hash_hex(m.key()); }

inline std::string to_string(const Configuration& m) {
  std::string out;
  if (!m.restricted().empty()) {
    out = "(new ";
    for (std::size_t i = 0; i < m.restricted().size(); ++i) out += (i ? ", " : "") + m.restricted()[i];
    out += ") ";
  }
  if (m.parts().empty()) return out + "0";
  for (std::size_t i = 0; i < m.parts().size(); ++i)
    out += (i ? "\n  | " : "") + component_string(m.parts()[i], false);
  return out;
}

// ------------------------------------------------------------ syntax terms

struct ConfigTermNode;

/// Unnormalised configuration syntax: 0, leaves, parallel composition, restriction.
class ConfigTerm {
 public:
  ConfigTerm();
  explicit ConfigTerm(std::shared_ptr<const ConfigTermNode> n) : node_(std::move(n)) {}
  const ConfigTermNode& node() const { return *node_; }

 private:
  std::shared_ptr<const ConfigTermNode> node_;
};

struct CNil {};
struct CLeaf {
  Component component;
};
struct CPar {
  ConfigTerm left, right;
};
struct CRes {
  std::string name;
  ConfigTerm body;
};
struct ConfigTermNode {
  std::variant<CNil, CLeaf, CPar, CRes> v;
};

inline ConfigTerm::ConfigTerm() : node_(std::make_shared<const ConfigTermNode>(ConfigTermNode{CNil{}})) {}

namespace cterm {
inline ConfigTerm make(ConfigTermNode n) { return ConfigTerm(std::make_shared<const ConfigTermNode>(std::move(n))); }
inline ConfigTerm nil() { return ConfigTerm(); }
inline ConfigTerm leaf(Component c) { return make({CLeaf{std::move(c)}}); }
inline ConfigTerm par(ConfigTerm a, ConfigTerm b) { return make({CPar{std::move(a), std::move(b)}}); }
inline ConfigTerm res(std::string n, ConfigTerm b) { return make({CRes{std::move(n), std::move(b)}}); }
}  // namespace cterm

namespace detail {
inline void flatten(const ConfigTerm& t, std::vector<std::string>& names, std::vector<Component>& parts) {
  std::visit(
      [&](const auto& n) {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, CLeaf>) {
          parts.push_back(n.component);
        } else if constexpr (std::is_same_v<N, CPar>) {
          flatten(n.left, names, parts);
          flatten(n.right, names, parts);
        } else if constexpr (std::is_same_v<N, CRes>) {
          if (std::find(names.begin(), names.end(), n.name) != names.end())
            throw Error(ErrorKind::InvalidInput, "name '" + n.name + "' is restricted twice");
          names.push_back(n.name);
          flatten(n.body, names, parts);
        }
      },
      t.node().v);
}
}  // namespace detail

/// Normal form modulo the structural congruence on configurations.
inline Configuration normalize(const ConfigTerm& t) {
  std::vector<std::string> names;
  std::vector<Component> parts;
  detail::flatten(t, names, parts);
  return Configuration(std::move(names), std::move(parts));
}

inline ConfigTerm to_term(const Configuration& m) {
  ConfigTerm body;
  for (std::size_t i = m.parts().size(); i-- > 0;)
    body = i + 1 == m.parts().size() ? cterm::leaf(m.parts()[i]) : cterm::par(cterm::leaf(m.parts()[i]), body);
  for (std::size_t i = m.restricted().size(); i-- > 0;) body = cterm::res(m.restricted()[i], body);
  return body;
}

// ----------------------------------------------------------------- queries

/// Every monitor is empty-tagged and every output queue is drained.
inline bool is_stable(const Configuration& m) {
  for (const auto& c : m.parts()) {
    if (const auto* mon = std::get_if<Monitor>(&c); mon && mon->tag != Tag::Empty) return false;
    if (const auto* q = std::get_if<SessionQueue>(&c); q && !q->future.empty()) return false;
  }
  return true;
}

namespace detail {
inline void top_threads(const Process& p, std::vector<Process>& out) {
  auto q = head_unfold(p);
  if (const auto* par = std::get_if<PPar>(&q.node().v)) {
    top_threads(par->left, out);
    top_threads(par->right, out);
  } else {
    out.push_back(q);
  }
}
}  // namespace detail

/// Participants p with an offered output or selection on s[p] whose monitor is
/// empty-tagged and faces a send or select.
inline std::set<Participant> barbs(const Configuration& m) {
  std::set<Participant> out;
  for (auto i : m.indices_of<RunningProcess>()) {
    std::vector<Process> threads;
    detail::top_threads(m.get<RunningProcess>(i).body, threads);
    for (const auto& t : threads) {
      const Name* chan = nullptr;
      if (const auto* o = std::get_if<POut>(&t.node().v)) chan = &o->chan;
      if (const auto* s = std::get_if<PSelect>(&t.node().v)) chan = &s->chan;
      if (!chan || !chan->is_endpoint()) continue;
      auto mi = m.monitor_index(chan->id, chan->role);
      if (!mi) continue;
      const auto& mon = m.get<Monitor>(*mi);
      if (mon.tag != Tag::Empty) continue;
      const auto& f = mon.history.focus.node().v;
      if (std::holds_alternative<LSend>(f) || std::holds_alternative<LSelect>(f)) out.insert(chan->role);
    }
  }
  return out;
}

/// Participants named in abstraction payloads addressed to p.
inline std::set<Participant> roles_in_queue(const Participant& p, const std::vector<Message>& h) {
  std::set<Participant> out;
  for (const auto& msg : h) {
    if (msg.to != p || msg.label || !is_abstraction(msg.value)) continue;
    auto fn = free_names(as_abstraction(msg.value).body);
    out.insert(fn.participants.begin(), fn.participants.end());
  }
  return out;
}

}  // namespace rchor
