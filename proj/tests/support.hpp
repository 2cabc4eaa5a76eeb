#pragma once

#include <random>
#include <string>
#include <vector>

#include "rchor/rchor.hpp"

namespace rchor::test {

inline std::string protocol_path(const std::string& name) { return std::string(RCHOR_PROTOCOL_DIR) + "/" + name + ".rch"; }

inline SourceUnit source(const std::string& name) { return load_source(protocol_path(name)); }

inline Configuration initial(const std::string& name) { return initial_configuration(source(name)); }

/// Runs whitespace-separated step tokens from the named protocol's initial state.
inline Configuration run(const std::string& name, const std::string& script, Semantics sem = Semantics::Decoupled) {
  Stepper st(initial(name), sem);
  for (const auto& tok : script_tokens(script)) st.step(tok);
  return st.current();
}

inline const Monitor& monitor(const Configuration& m, const Participant& p) {
  for (auto i : m.indices_of<Monitor>())
    if (m.get<Monitor>(i).participant == p) return m.get<Monitor>(i);
  throw std::runtime_error("no monitor for " + p);
}

inline const SessionQueue& queue(const Configuration& m) { return m.get<SessionQueue>(m.indices_of<SessionQueue>().at(0)); }

/// The three-buyer states of the running example, reached from the initial system.
inline const char* kM1 = "init";
inline const char* kM2 = "init out@A";
inline const char* kM3 = "init out@A in@S";
inline const char* kM4 = "init out@A in@S rollS";
inline const char* kM5 = "init out@A in@S rollS rIn@S";
inline const char* kM6 = "init out@A in@S rollS rIn@S rOut@A";
inline const char* kM7 = "init out@A in@S out@S in@A out@S in@B out@A in@B out@B in@A out@B in@S out@B in@C";
inline const char* kM8 =
    "init out@A in@S out@S in@A out@S in@B out@A in@B out@B in@A out@B in@S out@B in@C out@B in@C";

// ---------------------------------------------------------------- generators

class Gen {
 public:
  explicit Gen(std::uint32_t seed) : rng_(seed) {}

  std::size_t below(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
  bool coin() { return below(2) == 1; }

  template <class T>
  const T& pick(const std::vector<T>& xs) {
    return xs[below(xs.size())];
  }

  ValueType sort() { return ValueType::base(pick<std::string>({"nat", "bool", "str", "title"})); }

  std::pair<Participant, Participant> pair(const std::vector<Participant>& roles) {
    auto p = pick(roles);
    Participant q;
    do q = pick(roles);
    while (q == p);
    return {p, q};
  }

  /// A first-order global type over `roles`; choices carry 1..3 labels.
  GlobalType global(const std::vector<Participant>& roles, std::size_t depth) {
    if (depth == 0 || below(6) == 0) return global::end();
    auto [p, q] = pair(roles);
    if (below(4) == 0) {
      Branches<GlobalType> bs;
      const std::size_t n = 1 + below(3);
      for (std::size_t i = 0; i < n; ++i) bs.emplace_back("l" + std::to_string(i), global(roles, depth - 1));
      return global::choice(p, q, std::move(bs));
    }
    return global::exchange(p, q, sort(), global(roles, depth - 1));
  }

  /// As global(), but choices only between the same two roles whose
  /// continuations involve only those roles, so every projection is defined.
  GlobalType projectable(const std::vector<Participant>& roles, std::size_t depth) {
    if (depth == 0 || below(6) == 0) return global::end();
    auto [p, q] = pair(roles);
    if (below(4) == 0) {
      Branches<GlobalType> bs;
      const std::size_t n = 1 + below(3);
      for (std::size_t i = 0; i < n; ++i) bs.emplace_back("l" + std::to_string(i), projectable({p, q}, depth - 1));
      return global::choice(p, q, std::move(bs));
    }
    return global::exchange(p, q, sort(), projectable(roles, depth - 1));
  }

  /// A local type, possibly recursive, with guarded variables.
  LocalType local(std::size_t depth, std::vector<TypeVar> vars = {}) {
    if (depth == 0) return vars.empty() || coin() ? local::end() : local::var(pick(vars));
    switch (below(6)) {
      case 0: return local::end();
      case 1: {
        auto x = "X" + std::to_string(vars.size());
        vars.push_back(x);
        return local::rec(x, local::send(pick<std::string>({"p", "q"}), sort(), local(depth - 1, vars)));
      }
      case 2: {
        Branches<LocalType> bs;
        for (std::size_t i = 0, n = 1 + below(2); i < n; ++i) bs.emplace_back("l" + std::to_string(i), local(depth - 1, vars));
        return coin() ? local::select("q", std::move(bs)) : local::branch("q", std::move(bs));
      }
      case 3:
        if (!vars.empty()) return local::var(pick(vars));
        [[fallthrough]];
      default:
        return coin() ? local::send(pick<std::string>({"p", "q"}), sort(), local(depth - 1, vars))
                      : local::recv(pick<std::string>({"p", "q"}), sort(), local(depth - 1, vars));
    }
  }

  std::vector<Message> messages(std::size_t n) {
    std::vector<Message> out;
    const std::vector<Participant> roles{"A", "B", "C"};
    for (std::size_t i = 0; i < n; ++i) {
      auto [p, q] = pair(roles);
      out.push_back(Message::data(p, q, val::nat(below(2)), val::nat(0)));
    }
    return out;
  }

 private:
  std::mt19937 rng_;
};

}  // namespace rchor::test
