#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "aodv/scenario.hpp"

namespace fixtures {

inline aodv::Scenario bundled(std::string_view name) { return aodv::parse_scenario(*aodv::bundled_scenario(name)); }

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline std::string scenario_path(const std::string& name) { return std::string(AODV_SCENARIO_DIR) + "/" + name; }

/// Two nodes s-d, one injection s->d.
inline aodv::Scenario two_node(std::string_view property = "A<> rt[s][d].nhop != 0") {
  return aodv::parse_scenario("nodes:\n s\n d\nlinks:\n s d\nevents:\n inject s d\nproperty:\n " +
                              std::string(property) + "\n");
}

/// paper1 with the a-d link dropped after both injections.
inline aodv::Scenario paper1_with_break() {
  aodv::Scenario scen = bundled("paper1");
  scen.name = "paper1-break";
  scen.events.emplace_back(aodv::Disconnect{*scen.find_node("a"), *scen.find_node("d")});
  return scen;
}

}  // namespace fixtures
