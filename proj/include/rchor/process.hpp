#pragma once

/**
 * @file process.hpp
 * @brief Names, values and processes, with substitution and canonical forms.
 */

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "rchor/types.hpp"

namespace rchor {

/// A variable, a shared name, a session endpoint s[p], or the dummy name *.
struct Name {
  enum class Kind { Var, Shared, Endpoint, Star };
  Kind kind = Kind::Star;
  std::string id;    // variable, shared name or session
  std::string role;  // endpoint participant

  static Name var(std::string x) { return {Kind::Var, std::move(x), {}}; }
  static Name shared(std::string a) { return {Kind::Shared, std::move(a), {}}; }
  static Name endpoint(std::string s, std::string p) { return {Kind::Endpoint, std::move(s), std::move(p)}; }
  static Name star() { return {}; }

  bool is_var() const { return kind == Kind::Var; }
  bool is_endpoint() const { return kind == Kind::Endpoint; }
  friend bool operator==(const Name&, const Name&) = default;
};

struct Constant {
  std::variant<bool, std::uint64_t, std::string> v;
  friend bool operator==(const Constant&, const Constant&) = default;
};

class Process;
struct Abstraction;
using Value = std::variant<Name, Constant, std::shared_ptr<const Abstraction>>;

struct ProcessNode;

class Process {
 public:
  Process();
  explicit Process(std::shared_ptr<const ProcessNode> n) : node_(std::move(n)) {}
  const ProcessNode& node() const { return *node_; }

 private:
  std::shared_ptr<const ProcessNode> node_;
};

/// \x.P ; a thunk {{P}} uses the reserved parameter "_".
struct Abstraction {
  std::string param;
  Process body;
};

inline constexpr const char* kThunkParam = "_";

struct POut {
  Name chan;
  Value value;
  Process cont;
};
struct PIn {
  Name chan;
  std::string var;
  Process cont;
};
struct PSelect {
  Name chan;
  Branches<Process> branches;
};
struct PBranch {
  Name chan;
  Branches<Process> branches;
};
struct PPar {
  Process left, right;
};
struct PRec {
  std::string var;
  Process body;
};
struct PVar {
  std::string var;
};
struct PApp {
  Value fun;
  Name arg;
};
struct PRes {
  std::string name;
  Process body;
};
struct PNil {};

struct ProcessNode {
  std::variant<POut, PIn, PSelect, PBranch, PPar, PRec, PVar, PApp, PRes, PNil> v;
};

inline Process::Process() : node_(std::make_shared<const ProcessNode>(ProcessNode{PNil{}})) {}

namespace proc {
inline Process make(ProcessNode n) { return Process(std::make_shared<const ProcessNode>(std::move(n))); }
inline Process nil() { return Process(); }
inline Process out(Name u, Value v, Process p) { return make({POut{std::move(u), std::move(v), std::move(p)}}); }
inline Process in(Name u, std::string x, Process p) { return make({PIn{std::move(u), std::move(x), std::move(p)}}); }
inline Process select(Name u, Branches<Process> bs) { return make({PSelect{std::move(u), std::move(bs)}}); }
inline Process branch(Name u, Branches<Process> bs) { return make({PBranch{std::move(u), std::move(bs)}}); }
inline Process par(Process p, Process q) { return make({PPar{std::move(p), std::move(q)}}); }
inline Process rec(std::string x, Process p) { return make({PRec{std::move(x), std::move(p)}}); }
inline Process var(std::string x) { return make({PVar{std::move(x)}}); }
inline Process app(Value f, Name a) { return make({PApp{std::move(f), std::move(a)}}); }
inline Process res(std::string n, Process p) { return make({PRes{std::move(n), std::move(p)}}); }
}  // namespace proc

namespace val {
inline Value nat(std::uint64_t n) { return Constant{n}; }
inline Value boolean(bool b) { return Constant{b}; }
inline Value str(std::string s) { return Constant{std::move(s)}; }
inline Value name(Name n) { return n; }
inline Value var(std::string x) { return Name::var(std::move(x)); }
inline Value abs(std::string x, Process p) { return std::make_shared<const Abstraction>(Abstraction{std::move(x), std::move(p)}); }
inline Value thunk(Process p) { return abs(kThunkParam, std::move(p)); }
}  // namespace val

inline bool is_abstraction(const Value& v) { return std::holds_alternative<std::shared_ptr<const Abstraction>>(v); }
inline const Abstraction& as_abstraction(const Value& v) { return *std::get<std::shared_ptr<const Abstraction>>(v); }

// ------------------------------------------------------------------ printing

namespace detail {

/// Bound variables print as names in display mode and as binder depths in key mode,
/// so keys identify alpha-equivalent terms.
struct Printer {
  bool key = false;
  std::vector<std::string> vars;   // value-level binders, innermost last
  std::vector<std::string> pvars;  // recursion binders
  std::vector<std::string> names;  // restricted names

  static std::string quote(const std::string& s) {
    std::string out = "'";
    for (char c : s) {
      if (c == '\'' || c == '\\') out += '\\';
      out += c;
    }
    return out + "'";
  }

  static std::string bound(const std::vector<std::string>& env, const std::string& x, char tag) {
    for (std::size_t i = env.size(); i-- > 0;)
      if (env[i] == x) return std::string(1, tag) + std::to_string(env.size() - 1 - i);
    return {};
  }

  std::string name(const Name& n) const {
    switch (n.kind) {
      case Name::Kind::Star: return "*";
      case Name::Kind::Endpoint: return n.id + "[" + n.role + "]";
      case Name::Kind::Var:
        if (key) {
          auto b = bound(vars, n.id, '#');
          if (!b.empty()) return b;
        }
        return n.id;
      case Name::Kind::Shared:
        if (key) {
          auto b = bound(names, n.id, '%');
          if (!b.empty()) return b;
        }
        return n.id;
    }
    return "?";
  }

  std::string binder(const std::string& x) const { return key ? std::string("_") : x; }

  std::string constant(const Constant& c) const {
    return std::visit(
        [](const auto& x) -> std::string {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, bool>)
            return x ? "true" : "false";
          else if constexpr (std::is_same_v<T, std::uint64_t>)
            return std::to_string(x);
          else
            return quote(x);
        },
        c.v);
  }

  std::string value(const Value& v) {
    if (const auto* n = std::get_if<Name>(&v)) return name(*n);
    if (const auto* c = std::get_if<Constant>(&v)) return constant(*c);
    const auto& a = as_abstraction(v);
    if (a.param == kThunkParam) return "{{" + process(a.body) + "}}";
    vars.push_back(a.param);
    auto body = process(a.body);
    vars.pop_back();
    return "(\\" + binder(a.param) + ". " + body + ")";
  }

  std::string branches(const Branches<Process>& bs) {
    std::string out = "{";
    for (std::size_t i = 0; i < bs.size(); ++i) out += (i ? ", " : "") + bs[i].first + ": " + process(bs[i].second);
    return out + "}";
  }

  std::string atom(const Process& p) {
    if (std::holds_alternative<PPar>(p.node().v) || std::holds_alternative<PRes>(p.node().v) ||
        std::holds_alternative<PRec>(p.node().v))
      return "(" + process(p) + ")";
    return process(p);
  }

  std::string process(const Process& p) {
    return std::visit(
        [&](const auto& n) -> std::string {
          using N = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<N, POut>) {
            return name(n.chan) + "!<" + value(n.value) + ">. " + atom(n.cont);
          } else if constexpr (std::is_same_v<N, PIn>) {
            auto head = name(n.chan) + "?(" + binder(n.var) + "). ";
            vars.push_back(n.var);
            auto body = atom(n.cont);
            vars.pop_back();
            return head + body;
          } else if constexpr (std::is_same_v<N, PSelect>) {
            return name(n.chan) + "+" + branches(n.branches);
          } else if constexpr (std::is_same_v<N, PBranch>) {
            return name(n.chan) + "&" + branches(n.branches);
          } else if constexpr (std::is_same_v<N, PPar>) {
            return atom(n.left) + " | " + atom(n.right);
          } else if constexpr (std::is_same_v<N, PRec>) {
            pvars.push_back(n.var);
            auto body = atom(n.body);
            pvars.pop_back();
            return "rec " + binder(n.var) + ". " + body;
          } else if constexpr (std::is_same_v<N, PVar>) {
            if (key) {
              auto b = bound(pvars, n.var, '$');
              if (!b.empty()) return b;
            }
            return n.var;
          } else if constexpr (std::is_same_v<N, PApp>) {
            auto f = value(n.fun);
            return f + "(" + name(n.arg) + ")";
          } else if constexpr (std::is_same_v<N, PRes>) {
            names.push_back(n.name);
            auto body = atom(n.body);
            names.pop_back();
            return "new " + binder(n.name) + ". " + body;
          } else {
            return "0";
          }
        },
        p.node().v);
  }
};

}  // namespace detail

inline std::string to_string(const Process& p) { return detail::Printer{}.process(p); }
inline std::string to_string(const Value& v) { return detail::Printer{}.value(v); }
inline std::string to_string(const Name& n) { return detail::Printer{}.name(n); }

/// Alpha-invariant rendering used for equality and hashing.
inline std::string process_key(const Process& p) { return detail::Printer{true}.process(p); }
inline std::string value_key(const Value& v) { return detail::Printer{true}.value(v); }

inline bool alpha_equal(const Process& a, const Process& b) { return process_key(a) == process_key(b); }

// -------------------------------------------------------------- free names

inline void free_vars(const Process& p, std::set<std::string>& bound_, std::set<std::string>& out);

inline void free_vars_value(const Value& v, std::set<std::string>& bound_, std::set<std::string>& out) {
  if (const auto* n = std::get_if<Name>(&v)) {
    if (n->is_var() && !bound_.count(n->id)) out.insert(n->id);
  } else if (is_abstraction(v)) {
    const auto& a = as_abstraction(v);
    bool fresh = bound_.insert(a.param).second;
    free_vars(a.body, bound_, out);
    if (fresh) bound_.erase(a.param);
  }
}

inline void free_vars(const Process& p, std::set<std::string>& bound_, std::set<std::string>& out) {
  auto name = [&](const Name& n) {
    if (n.is_var() && !bound_.count(n.id)) out.insert(n.id);
  };
  std::visit(
      [&](const auto& n) {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, POut>) {
          name(n.chan);
          free_vars_value(n.value, bound_, out);
          free_vars(n.cont, bound_, out);
        } else if constexpr (std::is_same_v<N, PIn>) {
          name(n.chan);
          bool fresh = bound_.insert(n.var).second;
          free_vars(n.cont, bound_, out);
          if (fresh) bound_.erase(n.var);
        } else if constexpr (std::is_same_v<N, PSelect> || std::is_same_v<N, PBranch>) {
          name(n.chan);
          for (const auto& b : n.branches) free_vars(b.second, bound_, out);
        } else if constexpr (std::is_same_v<N, PPar>) {
          free_vars(n.left, bound_, out);
          free_vars(n.right, bound_, out);
        } else if constexpr (std::is_same_v<N, PRec> || std::is_same_v<N, PRes>) {
          free_vars(n.body, bound_, out);
        } else if constexpr (std::is_same_v<N, PApp>) {
          free_vars_value(n.fun, bound_, out);
          name(n.arg);
        }
      },
      p.node().v);
}

inline std::set<std::string> free_vars(const Process& p) {
  std::set<std::string> b, out;
  free_vars(p, b, out);
  return out;
}

inline std::set<std::string> free_vars(const Value& v) {
  std::set<std::string> b, out;
  free_vars_value(v, b, out);
  return out;
}

/// Shared names, sessions and endpoint participants occurring free in p.
struct FreeNames {
  std::set<std::string> shared;
  std::set<std::string> sessions;
  std::set<std::string> participants;
};

inline void free_names(const Process& p, std::set<std::string>& restricted, FreeNames& out);

inline void free_names_name(const Name& n, const std::set<std::string>& restricted, FreeNames& out) {
  if (n.kind == Name::Kind::Shared && !restricted.count(n.id)) out.shared.insert(n.id);
  if (n.kind == Name::Kind::Endpoint) {
    if (!restricted.count(n.id)) out.sessions.insert(n.id);
    out.participants.insert(n.role);
  }
}

inline void free_names_value(const Value& v, std::set<std::string>& restricted, FreeNames& out) {
  if (const auto* n = std::get_if<Name>(&v))
    free_names_name(*n, restricted, out);
  else if (is_abstraction(v))
    free_names(as_abstraction(v).body, restricted, out);
}

inline void free_names(const Process& p, std::set<std::string>& restricted, FreeNames& out) {
  std::visit(
      [&](const auto& n) {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, POut>) {
          free_names_name(n.chan, restricted, out);
          free_names_value(n.value, restricted, out);
          free_names(n.cont, restricted, out);
        } else if constexpr (std::is_same_v<N, PIn>) {
          free_names_name(n.chan, restricted, out);
          free_names(n.cont, restricted, out);
        } else if constexpr (std::is_same_v<N, PSelect> || std::is_same_v<N, PBranch>) {
          free_names_name(n.chan, restricted, out);
          for (const auto& b : n.branches) free_names(b.second, restricted, out);
        } else if constexpr (std::is_same_v<N, PPar>) {
          free_names(n.left, restricted, out);
          free_names(n.right, restricted, out);
        } else if constexpr (std::is_same_v<N, PRec>) {
          free_names(n.body, restricted, out);
        } else if constexpr (std::is_same_v<N, PRes>) {
          bool fresh = restricted.insert(n.name).second;
          free_names(n.body, restricted, out);
          if (fresh) restricted.erase(n.name);
        } else if constexpr (std::is_same_v<N, PApp>) {
          free_names_value(n.fun, restricted, out);
          free_names_name(n.arg, restricted, out);
        }
      },
      p.node().v);
}

inline FreeNames free_names(const Process& p) {
  std::set<std::string> r;
  FreeNames out;
  free_names(p, r, out);
  return out;
}

inline FreeNames free_names(const Value& v) {
  std::set<std::string> r;
  FreeNames out;
  free_names_value(v, r, out);
  return out;
}

// ------------------------------------------------------------ substitution

/// Maps names to replacement values. Name positions (channels, arguments)
/// only accept replacements that are themselves names.
struct NameMap {
  std::function<std::optional<Value>(const Name&)> lookup;
};

Process rename(const Process& p, const NameMap& m, const std::set<std::string>& blocked);

inline Name rename_name(const Name& n, const NameMap& m, const std::set<std::string>& blocked) {
  if (n.is_var() && blocked.count(n.id)) return n;
  if (auto r = m.lookup(n))
    if (const auto* nn = std::get_if<Name>(&*r)) return *nn;
  return n;
}

inline Value rename_value(const Value& v, const NameMap& m, const std::set<std::string>& blocked) {
  if (const auto* n = std::get_if<Name>(&v)) {
    if (n->is_var() && blocked.count(n->id)) return v;
    if (auto r = m.lookup(*n)) return *r;
    return v;
  }
  if (is_abstraction(v)) {
    const auto& a = as_abstraction(v);
    auto b = blocked;
    b.insert(a.param);
    return val::abs(a.param, rename(a.body, m, b));
  }
  return v;
}

inline Process rename(const Process& p, const NameMap& m, const std::set<std::string>& blocked) {
  return std::visit(
      [&](const auto& n) -> Process {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, POut>) {
          return proc::out(rename_name(n.chan, m, blocked), rename_value(n.value, m, blocked),
                           rename(n.cont, m, blocked));
        } else if constexpr (std::is_same_v<N, PIn>) {
          auto b = blocked;
          b.insert(n.var);
          return proc::in(rename_name(n.chan, m, blocked), n.var, rename(n.cont, m, b));
        } else if constexpr (std::is_same_v<N, PSelect> || std::is_same_v<N, PBranch>) {
          Branches<Process> bs;
          for (const auto& [l, c] : n.branches) bs.emplace_back(l, rename(c, m, blocked));
          return proc::make({N{rename_name(n.chan, m, blocked), std::move(bs)}});
        } else if constexpr (std::is_same_v<N, PPar>) {
          return proc::par(rename(n.left, m, blocked), rename(n.right, m, blocked));
        } else if constexpr (std::is_same_v<N, PRec>) {
          return proc::rec(n.var, rename(n.body, m, blocked));
        } else if constexpr (std::is_same_v<N, PApp>) {
          return proc::app(rename_value(n.fun, m, blocked), rename_name(n.arg, m, blocked));
        } else if constexpr (std::is_same_v<N, PRes>) {
          return proc::res(n.name, rename(n.body, m, blocked));
        } else {
          return p;
        }
      },
      p.node().v);
}

/// P{v/x} for a variable x.
inline Process subst_var(const Process& p, const std::string& x, const Value& v) {
  NameMap m{[&](const Name& n) -> std::optional<Value> {
    if (n.is_var() && n.id == x) return v;
    return std::nullopt;
  }};
  return rename(p, m, {});
}

/// P{x/n} for a name n, which turns occurrences of n back into the variable x.
inline Process abstract_name(const Process& p, const Name& n, const std::string& x) {
  NameMap m{[&](const Name& k) -> std::optional<Value> {
    if (k == n) return Name::var(x);
    return std::nullopt;
  }};
  return rename(p, m, {});
}

/// P{R/X} for a recursion variable X.
inline Process subst_pvar(const Process& p, const std::string& x, const Process& r) {
  return std::visit(
      [&](const auto& n) -> Process {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, POut>) {
          return proc::out(n.chan, n.value, subst_pvar(n.cont, x, r));
        } else if constexpr (std::is_same_v<N, PIn>) {
          return proc::in(n.chan, n.var, subst_pvar(n.cont, x, r));
        } else if constexpr (std::is_same_v<N, PSelect> || std::is_same_v<N, PBranch>) {
          Branches<Process> bs;
          for (const auto& [l, c] : n.branches) bs.emplace_back(l, subst_pvar(c, x, r));
          return proc::make({N{n.chan, std::move(bs)}});
        } else if constexpr (std::is_same_v<N, PPar>) {
          return proc::par(subst_pvar(n.left, x, r), subst_pvar(n.right, x, r));
        } else if constexpr (std::is_same_v<N, PRec>) {
          return n.var == x ? p : proc::rec(n.var, subst_pvar(n.body, x, r));
        } else if constexpr (std::is_same_v<N, PVar>) {
          return n.var == x ? r : p;
        } else if constexpr (std::is_same_v<N, PRes>) {
          return proc::res(n.name, subst_pvar(n.body, x, r));
        } else {
          return p;
        }
      },
      p.node().v);
}

/// Unfolds leading recursion so that the head constructor is visible.
inline Process head_unfold(Process p) {
  for (int guard = 0; guard < 1024; ++guard) {
    const auto* r = std::get_if<PRec>(&p.node().v);
    if (!r) return p;
    p = subst_pvar(r->body, r->var, p);
  }
  throw Error(ErrorKind::InvalidInput, "unguarded recursion in process");
}

// ----------------------------------------------------------- normalisation

namespace detail {

inline bool has_rec(const Process& p) {
  return std::visit(
      [&](const auto& n) -> bool {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, PRec>)
          return true;
        else if constexpr (std::is_same_v<N, POut> || std::is_same_v<N, PIn>)
          return has_rec(n.cont);
        else if constexpr (std::is_same_v<N, PSelect> || std::is_same_v<N, PBranch>)
          return std::any_of(n.branches.begin(), n.branches.end(), [](const auto& b) { return has_rec(b.second); });
        else if constexpr (std::is_same_v<N, PPar>)
          return has_rec(n.left) || has_rec(n.right);
        else if constexpr (std::is_same_v<N, PRes>)
          return has_rec(n.body);
        else
          return false;
      },
      p.node().v);
}

inline bool closed_pvars(const Process& p, std::set<std::string>& bound_) {
  return std::visit(
      [&](const auto& n) -> bool {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, PVar>)
          return bound_.count(n.var) > 0;
        else if constexpr (std::is_same_v<N, PRec>) {
          bool fresh = bound_.insert(n.var).second;
          bool ok = closed_pvars(n.body, bound_);
          if (fresh) bound_.erase(n.var);
          return ok;
        } else if constexpr (std::is_same_v<N, POut> || std::is_same_v<N, PIn>)
          return closed_pvars(n.cont, bound_);
        else if constexpr (std::is_same_v<N, PSelect> || std::is_same_v<N, PBranch>)
          return std::all_of(n.branches.begin(), n.branches.end(),
                             [&](const auto& b) { return closed_pvars(b.second, bound_); });
        else if constexpr (std::is_same_v<N, PPar>)
          return closed_pvars(n.left, bound_) && closed_pvars(n.right, bound_);
        else if constexpr (std::is_same_v<N, PRes>)
          return closed_pvars(n.body, bound_);
        else
          return true;
      },
      p.node().v);
}

inline void closed_recs(const Process& p, std::vector<Process>& out) {
  std::visit(
      [&](const auto& n) {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, PRec>) {
          std::set<std::string> b;
          if (closed_pvars(p, b)) out.push_back(p);
          closed_recs(n.body, out);
        } else if constexpr (std::is_same_v<N, POut> || std::is_same_v<N, PIn>) {
          closed_recs(n.cont, out);
        } else if constexpr (std::is_same_v<N, PSelect> || std::is_same_v<N, PBranch>) {
          for (const auto& b : n.branches) closed_recs(b.second, out);
        } else if constexpr (std::is_same_v<N, PPar>) {
          closed_recs(n.left, out);
          closed_recs(n.right, out);
        } else if constexpr (std::is_same_v<N, PRes>) {
          closed_recs(n.body, out);
        }
      },
      p.node().v);
}

inline void par_components(const Process& p, std::vector<Process>& out) {
  if (const auto* par = std::get_if<PPar>(&p.node().v)) {
    par_components(par->left, out);
    par_components(par->right, out);
  } else if (!std::holds_alternative<PNil>(p.node().v)) {
    out.push_back(p);
  }
}

}  // namespace detail

Process normalize(const Process& p, bool fold = true);

inline Value normalize(const Value& v, bool fold = true) {
  if (!is_abstraction(v)) return v;
  const auto& a = as_abstraction(v);
  return val::abs(a.param, normalize(a.body, fold));
}

/// Canonical representative modulo the process congruence: parallel
/// composition is flattened, sorted and stripped of 0, unused restrictions
/// are dropped, and an unfolded recursion is folded back into its binder.
inline Process normalize(const Process& p, bool fold) {
  Process q = std::visit(
      [&](const auto& n) -> Process {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, POut>) {
          return proc::out(n.chan, normalize(n.value, fold), normalize(n.cont, fold));
        } else if constexpr (std::is_same_v<N, PIn>) {
          return proc::in(n.chan, n.var, normalize(n.cont, fold));
        } else if constexpr (std::is_same_v<N, PSelect> || std::is_same_v<N, PBranch>) {
          Branches<Process> bs;
          for (const auto& [l, c] : n.branches) bs.emplace_back(l, normalize(c, fold));
          return proc::make({N{n.chan, std::move(bs)}});
        } else if constexpr (std::is_same_v<N, PPar>) {
          std::vector<Process> parts;
          detail::par_components(proc::par(normalize(n.left, fold), normalize(n.right, fold)), parts);
          if (parts.empty()) return proc::nil();
          std::vector<std::pair<std::string, Process>> keyed;
          for (auto& c : parts) keyed.emplace_back(process_key(c), c);
          std::stable_sort(keyed.begin(), keyed.end(),
                           [](const auto& a, const auto& b) { return a.first < b.first; });
          Process acc = keyed.back().second;
          for (std::size_t i = keyed.size() - 1; i-- > 0;) acc = proc::par(keyed[i].second, acc);
          return acc;
        } else if constexpr (std::is_same_v<N, PRec>) {
          return proc::rec(n.var, normalize(n.body, fold));
        } else if constexpr (std::is_same_v<N, PApp>) {
          return proc::app(normalize(n.fun, fold), n.arg);
        } else if constexpr (std::is_same_v<N, PRes>) {
          auto body = normalize(n.body, fold);
          auto fn = free_names(body);
          if (!fn.shared.count(n.name) && !fn.sessions.count(n.name)) return body;
          return proc::res(n.name, body);
        } else {
          return p;
        }
      },
      p.node().v);

  if (!fold || std::holds_alternative<PRec>(q.node().v) || !detail::has_rec(q)) return q;
  std::vector<Process> recs;
  detail::closed_recs(q, recs);
  const auto key = process_key(q);
  for (const auto& r : recs) {
    const auto& rr = std::get<PRec>(r.node().v);
    if (process_key(normalize(subst_pvar(rr.body, rr.var, r), false)) == key) return r;
  }
  return q;
}

}  // namespace rchor
