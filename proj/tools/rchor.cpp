// rchor: parse, project, step through and check reversible choreographies.
//
// Exit codes: 0 ok, 1 property violated, 2 budget exhausted or not first
// order, 3 bad input.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "rchor/rchor.hpp"

namespace {

using namespace rchor;

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::BudgetExhausted:
    case ErrorKind::StateBudgetExceeded:
    case ErrorKind::NotFirstOrder: return 2;
    default: return 3;
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidInput, "cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_json(const json& j, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::InvalidInput, "cannot write '" + path + "'");
  out << j.dump(2) << "\n";
}

const GlobalType& pick_global(const SourceUnit& u, const std::string& name) {
  if (u.globals.empty()) throw Error(ErrorKind::InvalidInput, "no global type declared");
  if (name.empty()) return u.globals.front().second;
  if (const auto* g = u.find_global(name)) return *g;
  throw Error(ErrorKind::UnresolvedRole, "unknown global type '" + name + "'");
}

void print_menu(const Stepper& s) {
  std::cout << to_string(s.current()) << "\n";
  auto avail = s.available();
  for (std::size_t i = 0; i < avail.size(); ++i)
    std::cout << "  [" << i << "] " << (avail[i].forward ? "" : "<- ") << to_string(avail[i]) << "\n";
}

int run_step(const std::string& file, bool atomic, const std::string& script, const std::string& dump, bool quiet) {
  Stepper st(initial_configuration(load_source(file)), atomic ? Semantics::Atomic : Semantics::Decoupled);
  auto apply = [&](const std::vector<std::string>& toks) {
    for (std::size_t i = 0; i < toks.size(); ++i) {
      if (toks[i] == "undo") {
        for (const auto& mv : st.undo())
          if (!quiet) std::cout << "undo: " << to_string(mv) << "\n";
      } else if (toks[i] == "dump") {
        if (i + 1 >= toks.size()) throw Error(ErrorKind::InvalidInput, "dump needs a file name");
        write_json(st.dump(), toks[++i]);
      } else {
        const auto& mv = st.step(toks[i]);
        if (!quiet) std::cout << "step: " << to_string(mv) << "\n";
      }
    }
  };
  if (!script.empty()) {
    apply(script_tokens(read_file(script)));
  } else {
    print_menu(st);
    std::cout << "> " << std::flush;
    for (std::string line; std::getline(std::cin, line);) {
      auto toks = script_tokens(line);
      if (!toks.empty() && (toks[0] == "quit" || toks[0] == "q")) break;
      try {
        apply(toks);
      } catch (const Error& e) {
        std::cout << e.what() << "\n";
      }
      print_menu(st);
      std::cout << "> " << std::flush;
    }
  }
  if (!dump.empty()) write_json(st.dump(), dump);
  if (!script.empty()) std::cout << to_string(st.current()) << "\nhash " << state_hash(st.current()) << "\n";
  return 0;
}

Report run_check(const std::string& property, const Configuration& m0, std::size_t depth) {
  if (property == "loop") return check_loop(m0, depth);
  if (property == "theorem1") return check_theorem1(m0, depth);
  if (property == "square") return check_square(m0, depth);
  if (property == "causal") return check_causal_consistency(m0, depth);
  if (property == "wf") return check_wf(m0, depth);
  if (property == "correspondence") return check_correspondence(m0, depth);
  if (property == "stability") return check_stability_recovery(m0, depth);
  if (property == "undo") return check_decoupled_undo(m0, depth);
  throw Error(ErrorKind::InvalidInput, "unknown property '" + property + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reversible choreographies with asynchronous monitors"};
  app.require_subcommand(1);

  std::string file, role, global_name, script, dump, json_out, property = "loop";
  std::size_t depth = 5;
  bool atomic = false, decoupled = false, quiet = false, forward_only = false;

  auto* parse = app.add_subcommand("parse", "Parse a source file and print it back");
  parse->add_option("file", file, "Source file")->required();

  auto* project_cmd = app.add_subcommand("project", "Project a global type onto a role");
  project_cmd->add_option("file", file, "Source file")->required();
  project_cmd->add_option("--role", role, "Participant")->required();
  project_cmd->add_option("--global", global_name, "Global type name (default: the first)");

  auto* step = app.add_subcommand("step", "Step through the reductions of a system");
  step->add_option("file", file, "Source file")->required();
  auto* at = step->add_flag("--atomic", atomic, "Use the atomic semantics");
  step->add_flag("--decoupled", decoupled, "Use the decoupled semantics (default)")->excludes(at);
  step->add_option("--script", script, "Run the steps in this file instead of reading stdin");
  step->add_option("--dump", dump, "Write the trace to this file at the end");
  step->add_flag("--quiet", quiet, "Only print the final state");

  auto* explore_cmd = app.add_subcommand("explore", "Explore the state space to a depth");
  explore_cmd->add_option("file", file, "Source file")->required();
  explore_cmd->add_option("--depth", depth, "Depth bound");
  explore_cmd->add_flag("--atomic", atomic, "Use the atomic semantics");
  explore_cmd->add_flag("--forward-only", forward_only, "Do not take backward steps");
  explore_cmd->add_option("--json", json_out, "Write the state space as JSON ('-' for stdout)")
      ->expected(0, 1)
      ->default_str("-");

  auto* check = app.add_subcommand("check", "Check a property to a depth");
  check->add_option("file", file, "Source file")->required();
  check->add_option("--property", property, "loop, theorem1, square, causal, wf, correspondence, stability, undo");
  check->add_option("--depth", depth, "Depth bound (trace length for causal)");
  check->add_option("--json", json_out, "Write the report as JSON ('-' for stdout)")->expected(0, 1)->default_str("-");

  auto* replay_cmd = app.add_subcommand("replay", "Replay a trace dump against a source file");
  replay_cmd->add_option("file", file, "Source file")->required();
  replay_cmd->add_option("dump", dump, "Trace dump")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*parse) {
      std::cout << to_string(load_source(file));
      return 0;
    }
    if (*project_cmd) {
      auto u = load_source(file);
      const auto& g = pick_global(u, global_name);
      if (!participants(g).count(role)) throw Error(ErrorKind::UnresolvedRole, "'" + role + "' is not a participant");
      std::cout << to_string(project(g, role)) << "\n";
      return 0;
    }
    if (*step) return run_step(file, atomic, script, dump, quiet);
    if (*explore_cmd) {
      const auto sem = atomic ? Semantics::Atomic : Semantics::Decoupled;
      auto lts = explore(initial_configuration(load_source(file)), sem, depth, !forward_only);
      if (explore_cmd->count("--json")) {
        write_json(to_json(lts, sem, depth), json_out);
      } else {
        std::cout << lts.states.size() << " states, " << lts.edges.size() << " edges to depth " << depth << "\n";
      }
      return 0;
    }
    if (*check) {
      auto rep = run_check(property, initial_configuration(load_source(file)), depth);
      if (check->count("--json")) {
        write_json(to_json(rep), json_out);
      } else {
        std::cout << rep.property << ": " << rep.passed << "/" << rep.checked << " passed, " << rep.violation_count
                  << " violations\n";
        for (const auto& v : rep.violations) std::cout << "  " << v << "\n";
        for (const auto& n : rep.notes) std::cout << "  note: " << n << "\n";
      }
      return rep.ok() ? 0 : 1;
    }
    if (*replay_cmd) {
      auto m = replay_dump(json::parse(read_file(dump)), initial_configuration(load_source(file)));
      std::cout << to_string(m) << "\nhash " << state_hash(m) << "\n";
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const json::exception& e) {
    std::cerr << "InvalidInput: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
