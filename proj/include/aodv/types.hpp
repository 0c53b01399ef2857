#pragma once

// Value types shared by the AODV node model, the network model and the checker.

#include <compare>
#include <cstdint>
#include <deque>
#include <map>
#include <set>
#include <utility>
#include <variant>
#include <vector>

namespace aodv {

/// Node identifier. Real nodes are numbered 1..N; 0 is the "no next hop" sentinel.
enum class NodeId : std::uint8_t {};

inline constexpr NodeId kNoNode{0};

constexpr NodeId node_id(unsigned v) { return NodeId{static_cast<std::uint8_t>(v)}; }
constexpr unsigned to_int(NodeId id) { return static_cast<unsigned>(id); }

using SeqNum = std::uint32_t;
using Payload = std::uint32_t;

struct RouteEntry {
  NodeId dip{kNoNode};
  SeqNum dsn{0};
  bool dsn_known{false};
  bool valid{false};
  std::uint32_t hops{0};
  NodeId nhop{kNoNode};
  std::set<NodeId> precursors;

  bool operator==(const RouteEntry&) const = default;
};

/// At most one entry per destination; the key always equals the entry's dip.
using RoutingTable = std::map<NodeId, RouteEntry>;

struct Rreq {
  std::uint32_t hops{0};
  std::uint32_t rreq_id{0};
  NodeId dip{kNoNode};
  SeqNum dsn{0};
  bool dsn_known{false};
  NodeId oip{kNoNode};
  SeqNum osn{0};
  NodeId sip{kNoNode};

  bool operator==(const Rreq&) const = default;
};

struct Rrep {
  std::uint32_t hops{0};
  NodeId dip{kNoNode};
  SeqNum dsn{0};
  NodeId oip{kNoNode};
  NodeId sip{kNoNode};

  bool operator==(const Rrep&) const = default;
};

struct Rerr {
  std::map<NodeId, SeqNum> dests;
  NodeId sip{kNoNode};

  bool operator==(const Rerr&) const = default;
};

struct Pkt {
  Payload data{0};
  NodeId dip{kNoNode};
  NodeId oip{kNoNode};
  NodeId sip{kNoNode};

  bool operator==(const Pkt&) const = default;
};

/// Application-layer injection; never travels between nodes.
struct Newpkt {
  Payload data{0};
  NodeId dip{kNoNode};

  bool operator==(const Newpkt&) const = default;
};

using Message = std::variant<Rreq, Rrep, Rerr, Pkt, Newpkt>;

enum class MessageKind : std::uint8_t { rreq, rrep, rerr, pkt, newpkt };

MessageKind kind_of(const Message& m);
const char* kind_name(MessageKind k);

struct NodeState {
  NodeId ip{kNoNode};
  SeqNum sn{1};
  RoutingTable rt;
  std::set<std::pair<NodeId, std::uint32_t>> rreq_seen;
  std::uint32_t next_rreq_id{1};
  std::deque<Message> msg_buf;
  std::map<NodeId, std::vector<Payload>> store;

  bool operator==(const NodeState&) const = default;
};

NodeState make_node(NodeId ip);

/// Protocol variants that repair the two classes of defects.
struct VariantFlags {
  bool forward_all_rreps{false};
  bool dest_forwards_rreq{false};

  bool operator==(const VariantFlags&) const = default;
};

enum class FailurePolicy : std::uint8_t { generate_rerr, discard };

struct BroadcastSend {
  Message msg;
  bool operator==(const BroadcastSend&) const = default;
};

struct UnicastSend {
  NodeId dst{kNoNode};
  Message msg;
  FailurePolicy on_fail{FailurePolicy::discard};
  bool operator==(const UnicastSend&) const = default;
};

struct Deliver {
  Payload data{0};
  NodeId from{kNoNode};
  bool operator==(const Deliver&) const = default;
};

using SendAction = std::variant<BroadcastSend, UnicastSend, Deliver>;

}  // namespace aodv
