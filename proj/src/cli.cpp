#include "aodv/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "aodv/checker.hpp"
#include "aodv/property.hpp"
#include "aodv/scenario.hpp"
#include "aodv/trace.hpp"

namespace aodv {

namespace {

struct CommonArgs {
  std::string path;
  std::vector<std::string> variants;
  std::size_t max_states{kDefaultMaxStates};
};

Scenario load(const CommonArgs& args) {
  std::ifstream in(args.path);
  if (!in) throw std::runtime_error("cannot open scenario file " + args.path);
  std::stringstream buf;
  buf << in.rdbuf();
  Scenario scen;
  try {
    scen = parse_scenario(buf.str());
  } catch (const ScenarioError& e) {
    throw std::runtime_error(args.path + ": " + e.what());
  }
  for (const std::string& v : args.variants) {
    std::string key = v;
    bool value = true;
    if (const auto eq = v.find('='); eq != std::string::npos) {
      key = v.substr(0, eq);
      const std::string rhs = v.substr(eq + 1);
      if (rhs == "true" || rhs == "1") value = true;
      else if (rhs == "false" || rhs == "0") value = false;
      else throw std::runtime_error("bad value in --variant " + v);
    }
    if (key == "events_sequential_first") scen.events_sequential_first = value;
    else if (!set_variant(scen.variants, key, value)) throw std::runtime_error("unknown variant " + key);
  }
  return scen;
}

void print_stats(std::ostream& out, const SearchStats& s) {
  out << "reachable states: " << s.reachable_states << "\n";
  out << "transitions: " << s.transitions << "\n";
  out << "elapsed: " << std::fixed << std::setprecision(3) << s.elapsed.count() << " s\n";
}

int cmd_check(const CommonArgs& common, const std::string& property_override, bool stats, bool quiet,
              const std::string& trace_path, std::ostream& out) {
  Scenario scen = load(common);
  if (!property_override.empty()) scen.property = property_override;
  Property prop;
  try {
    prop = parse_property(scen.property, scen.nodes);
  } catch (const PropertyError& e) {
    throw std::runtime_error("property: " + std::string(e.what()));
  }

  const Verdict v = check_property(scen, prop, CheckOptions{common.max_states, {}});
  const bool holds = v.result == Outcome::holds;
  out << scen.property << " : " << (holds ? "holds" : "refuted") << "\n";
  if (stats) print_stats(out, v.stats);

  if (v.trace) {
    if (!quiet) {
      out << (holds ? "witness:\n" : "counterexample:\n");
      out << render_msc(*v.trace, scen);
    }
    if (!trace_path.empty()) {
      std::ofstream f(trace_path);
      if (!f) throw std::runtime_error("cannot write trace file " + trace_path);
      f << export_trace(*v.trace, scen, {scen.property, holds ? "holds" : "refuted"});
    }
  }
  return holds ? kExitHolds : kExitRefuted;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Explicit-state model checker for AODV scenarios", "aodvmc"};
  app.require_subcommand(1);

  CommonArgs check_args, explore_args;
  std::string property;
  bool stats = false, quiet = false;
  std::string trace_path;

  auto* check = app.add_subcommand("check", "Check the scenario's property (exit 0 holds, 1 refuted, 2 error)");
  check->add_option("scenario", check_args.path, "Scenario file")->required();
  check->add_option("--property", property, "Property text overriding the file's");
  check->add_option("--variant", check_args.variants, "Enable a protocol variant (name or name=false)")
      ->take_all();
  check->add_option("--max-states", check_args.max_states, "State limit");
  check->add_flag("--stats", stats, "Print reachable states, transitions and elapsed time");
  check->add_option("--trace", trace_path, "Write the structured trace to this file");
  check->add_flag("--quiet", quiet, "Do not print the message sequence chart");

  auto* explore_cmd = app.add_subcommand("explore", "Explore the full reachable state space");
  explore_cmd->add_option("scenario", explore_args.path, "Scenario file")->required();
  explore_cmd->add_option("--variant", explore_args.variants, "Enable a protocol variant")->take_all();
  explore_cmd->add_option("--max-states", explore_args.max_states, "State limit");

  std::string bundled;
  auto* show = app.add_subcommand("scenario", "Print a bundled scenario (paper1, paper2, paper3)");
  show->add_option("name", bundled, "Bundled scenario name")->required();

  std::vector<std::string> argv;
  argv.reserve(args.size());
  for (auto it = args.rbegin(); it != args.rend(); ++it) argv.push_back(*it);
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitHolds;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitError;
  }

  try {
    if (*check) return cmd_check(check_args, property, stats, quiet, trace_path, out);
    if (*explore_cmd) {
      const Scenario scen = load(explore_args);
      print_stats(out, explore(scen, CheckOptions{explore_args.max_states, {}}));
      return kExitHolds;
    }
    if (*show) {
      auto text = bundled_scenario(bundled);
      if (!text) {
        err << "error: no bundled scenario named " << bundled << "\n";
        return kExitError;
      }
      out << *text;
      return kExitHolds;
    }
  } catch (const StateLimitExceeded& e) {
    err << "error: " << e.what() << "\n";
    out << "partial statistics:\n";
    print_stats(out, e.partial());
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

}  // namespace aodv
