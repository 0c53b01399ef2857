#pragma once

// Global semantics of a network of AODV nodes driven by a tester program:
// guaranteed local broadcast, conditional unicast and interleaving of node
// steps with tester events.

#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <variant>
#include <vector>

#include "aodv/core.hpp"
#include "aodv/scenario.hpp"

namespace aodv {

/// Symmetric, irreflexive connectivity relation over nodes 1..n.
class Topology {
 public:
  Topology() = default;
  explicit Topology(std::size_t n) : n_(n), adj_(n * n, false) {}

  std::size_t size() const { return n_; }
  bool connected(NodeId a, NodeId b) const;
  void connect(NodeId a, NodeId b);
  void disconnect(NodeId a, NodeId b);
  std::vector<NodeId> neighbours(NodeId a) const;

  bool operator==(const Topology&) const = default;

 private:
  std::size_t index(NodeId a, NodeId b) const { return (to_int(a) - 1) * n_ + (to_int(b) - 1); }

  std::size_t n_{0};
  std::vector<bool> adj_;
};

struct Delivery {
  NodeId receiver{kNoNode};
  NodeId origin{kNoNode};
  Payload data{0};
  auto operator<=>(const Delivery&) const = default;
};

struct GlobalState {
  std::vector<NodeState> nodes;  // nodes[i] has ip i+1
  Topology topo;
  std::uint32_t tester_pc{0};
  std::set<Delivery> delivered;

  bool operator==(const GlobalState&) const = default;

  const NodeState& node(NodeId id) const { return nodes.at(to_int(id) - 1); }
  NodeState& node(NodeId id) { return nodes.at(to_int(id) - 1); }
};

/// Stable 64-bit hash of the full state; identical across runs and platforms.
std::uint64_t state_hash(const GlobalState& g);

struct StateHasher {
  std::size_t operator()(const GlobalState& g) const { return static_cast<std::size_t>(state_hash(g)); }
};

namespace label {

struct Inject {
  NodeId at{kNoNode};
  NodeId dest{kNoNode};
  Payload data{0};
  bool operator==(const Inject&) const = default;
};
struct LinkUp {
  NodeId a{kNoNode};
  NodeId b{kNoNode};
  bool operator==(const LinkUp&) const = default;
};
struct LinkDown {
  NodeId a{kNoNode};
  NodeId b{kNoNode};
  bool operator==(const LinkDown&) const = default;
};
struct NodeStep {
  NodeId node{kNoNode};
  MessageKind kind{MessageKind::rreq};
  bool operator==(const NodeStep&) const = default;
};
struct Broadcast {
  NodeId sender{kNoNode};
  Message msg;
  std::vector<NodeId> receivers;  // ascending
  bool operator==(const Broadcast&) const = default;
};
struct Unicast {
  NodeId sender{kNoNode};
  NodeId receiver{kNoNode};
  Message msg;
  bool operator==(const Unicast&) const = default;
};
struct UnicastFail {
  NodeId sender{kNoNode};
  NodeId receiver{kNoNode};
  Message msg;
  bool operator==(const UnicastFail&) const = default;
};
struct Delivered {
  NodeId node{kNoNode};
  NodeId origin{kNoNode};
  Payload data{0};
  bool operator==(const Delivered&) const = default;
};

}  // namespace label

using ActionLabel = std::variant<label::Inject, label::Broadcast, label::Unicast, label::UnicastFail,
                                 label::Delivered, label::LinkUp, label::LinkDown, label::NodeStep>;

/// Everything observable in one atomic transition. The first action names the
/// actor (Inject/LinkUp/LinkDown for the tester, NodeStep for a node); the
/// remaining ones are the sends it caused, in order.
struct TransitionLabel {
  std::vector<ActionLabel> actions;
  bool operator==(const TransitionLabel&) const = default;

  /// Acting node, or kNoNode for the tester.
  NodeId actor() const;
};

struct Successor {
  TransitionLabel label;
  GlobalState state;
};

GlobalState initial_state(const Scenario& scen);

/// Delivers the sends produced by a handler run at `sender`.
std::pair<GlobalState, std::vector<ActionLabel>> apply_sends(GlobalState g, NodeId sender,
                                                             const std::vector<SendAction>& actions);

/// All enabled transitions: one per node with a nonempty buffer (ascending
/// id), then the next tester event if any remain.
std::vector<Successor> successors(const GlobalState& g, const Scenario& scen);

}  // namespace aodv
