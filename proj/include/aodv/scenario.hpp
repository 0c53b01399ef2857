#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "aodv/types.hpp"

namespace aodv {

struct InjectPkt {
  NodeId at{kNoNode};
  NodeId dest{kNoNode};
  Payload data{0};
  bool operator==(const InjectPkt&) const = default;
};

struct Connect {
  NodeId a{kNoNode};
  NodeId b{kNoNode};
  bool operator==(const Connect&) const = default;
};

struct Disconnect {
  NodeId a{kNoNode};
  NodeId b{kNoNode};
  bool operator==(const Disconnect&) const = default;
};

using TesterEvent = std::variant<InjectPkt, Connect, Disconnect>;

/// A scripted experiment: topology, tester program, protocol variant and the
/// property to check. Node i in `nodes` (0-based) has NodeId i+1.
struct Scenario {
  std::string name;
  std::vector<std::string> nodes;
  std::vector<std::pair<NodeId, NodeId>> links;
  std::vector<TesterEvent> events;
  VariantFlags variants;
  /// When set, no protocol step runs until the tester program is exhausted.
  bool events_sequential_first{false};
  std::string property;

  bool operator==(const Scenario&) const = default;

  std::size_t node_count() const { return nodes.size(); }
  const std::string& name_of(NodeId id) const { return nodes.at(to_int(id) - 1); }
  std::optional<NodeId> find_node(std::string_view name) const;
};

/// Parse failure with a 1-based line number (0 when not tied to a line).
class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Parses the line-oriented scenario format. Every referenced node, including
/// those named in the property, must be declared under `nodes:`.
Scenario parse_scenario(std::string_view text);
std::string serialize_scenario(const Scenario& scen);

/// Text of a scenario shipped with the tool ("paper1", "paper2", "paper3"),
/// or nullopt for an unknown name.
std::optional<std::string_view> bundled_scenario(std::string_view name);
std::vector<std::string_view> bundled_scenario_names();

/// Applies a variant by name ("forward_all_rreps" or "dest_forwards_rreq").
/// Returns false for an unknown name.
bool set_variant(VariantFlags& flags, std::string_view name, bool value);

}  // namespace aodv
