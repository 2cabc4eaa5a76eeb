#pragma once

/**
 * @file json_io.hpp
 * @brief JSON views of configurations, explored state spaces, trace dumps and reports.
 */

#include <json.hpp>

#include "rchor/explore.hpp"
#include "rchor/report.hpp"

namespace rchor {

using json = nlohmann::ordered_json;

inline constexpr const char* kLtsSchema = "rchor.lts/1";
inline constexpr const char* kTraceSchema = "rchor.trace/1";
inline constexpr const char* kReportSchema = "rchor.report/1";

inline const char* to_string(Semantics s) { return s == Semantics::Atomic ? "atomic" : "decoupled"; }

inline json to_json(const Configuration& m) {
  json parts = json::array();
  for (const auto& c : m.parts()) parts.push_back(component_string(c, false));
  return {{"hash", state_hash(m)}, {"stable", is_stable(m)}, {"restricted", m.restricted()}, {"components", parts}};
}

inline json to_json(const Lts& g, Semantics sem, std::size_t depth) {
  json states = json::array();
  for (std::size_t i = 0; i < g.states.size(); ++i) {
    const auto b = barbs(g.states[i]);
    states.push_back({{"id", i},
                      {"hash", state_hash(g.states[i])},
                      {"depth", g.depth[i]},
                      {"stable", is_stable(g.states[i])},
                      {"barbs", std::vector<std::string>(b.begin(), b.end())}});
  }
  json edges = json::array();
  for (const auto& e : g.edges) {
    json j{{"src", e.src}, {"dst", e.dst}, {"rule", e.rule}, {"subjects", e.subjects}};
    if (e.label) j["label"] = *e.label;
    j["direction"] = e.forward ? "forward" : "backward";
    edges.push_back(std::move(j));
  }
  json out{{"schema", kLtsSchema}, {"semantics", to_string(sem)}, {"depth", depth}};
  out["initial"] = g.states.empty() ? json() : to_json(g.states.front());
  out["states"] = std::move(states);
  out["edges"] = std::move(edges);
  return out;
}

struct TraceStep {
  Move move;
  std::string hash;
};

inline json trace_dump(const Configuration& initial, const std::vector<Move>& steps, Semantics sem) {
  json js = json::array();
  for (const auto& mv : steps) {
    json j{{"rule", mv.rule}, {"subjects", mv.subjects}};
    if (mv.label) j["label"] = *mv.label;
    j["hash"] = state_hash(mv.target);
    js.push_back(std::move(j));
  }
  return {{"schema", kTraceSchema},
          {"semantics", to_string(sem)},
          {"initial", to_json(initial)},
          {"steps", std::move(js)},
          {"final", to_json(steps.empty() ? initial : steps.back().target)}};
}

/// Replays a dump from its initial configuration, checking every hash.
inline Configuration replay_dump(const json& dump, const Configuration& initial) {
  if (dump.value("schema", "") != kTraceSchema) throw Error(ErrorKind::InvalidInput, "not a trace dump");
  const Semantics sem = dump.value("semantics", "") == "atomic" ? Semantics::Atomic : Semantics::Decoupled;
  if (dump["initial"]["hash"] != state_hash(initial))
    throw Error(ErrorKind::InvalidInput, "initial state does not match the dump");
  Configuration cur = initial;
  std::size_t k = 0;
  for (const auto& s : dump["steps"]) {
    ++k;
    std::optional<Label> label;
    if (s.contains("label")) label = s["label"].get<std::string>();
    const auto subjects = s["subjects"].get<std::vector<std::string>>();
    bool found = false;
    for (auto& mv : moves(cur, sem)) {
      if (mv.rule != s["rule"].get<std::string>() || mv.subjects != subjects || mv.label != label ||
          state_hash(mv.target) != s["hash"].get<std::string>())
        continue;
      cur = std::move(mv.target);
      found = true;
      break;
    }
    if (!found) throw Error(ErrorKind::StaleRedex, "step " + std::to_string(k) + " does not replay");
  }
  return cur;
}

inline json to_json(const Report& r) {
  json out{{"schema", kReportSchema}, {"property", r.property}};
  if (r.property == "causal") {
    out["pairs_checked"] = r.checked;
    out["equivalent_and_cofinal"] = r.passed;
  } else {
    out["checked"] = r.checked;
    out["passed"] = r.passed;
  }
  out["violation_count"] = r.violation_count;
  out["violations"] = r.violations;
  out["notes"] = r.notes;
  return out;
}

}  // namespace rchor
