#pragma once

// Per-node AODV transition functions. Every handler is pure: it takes a node
// state by value and returns the successor state plus the sends it emits.

#include <vector>

#include "aodv/types.hpp"

namespace aodv {

struct HandlerResult {
  NodeState state;
  std::vector<SendAction> sends;
};

struct RouteUpdate {
  RoutingTable rt;
  bool updated{false};
};

/// Inserts or replaces the entry for cand.dip following the sequence-number and
/// hop-count preference rules. Precursors of a replaced entry carry over.
/// Requires cand.hops >= 1 and cand.dip distinct from the table owner.
RouteUpdate update_route(RoutingTable rt, const RouteEntry& cand);

/// Marks every currently valid entry named in dests invalid and raises its dsn
/// to at least the given value. Unknown or already invalid entries are ignored.
RoutingTable invalidate_routes(RoutingTable rt, const std::map<NodeId, SeqNum>& dests);

const RouteEntry* find_route(const RoutingTable& rt, NodeId dip);
const RouteEntry* find_valid_route(const RoutingTable& rt, NodeId dip);

HandlerResult handle_newpkt(NodeState n, Payload data, NodeId dip);
HandlerResult handle_pkt(NodeState n, const Pkt& m);
HandlerResult handle_rreq(NodeState n, const Rreq& m, const VariantFlags& variants);
HandlerResult handle_rrep(NodeState n, const Rrep& m, const VariantFlags& variants);
HandlerResult handle_rerr(NodeState n, const Rerr& m);

/// Pops the head of the message buffer and runs the matching handler.
/// Requires a nonempty buffer.
HandlerResult step_node(NodeState n, const VariantFlags& variants);

}  // namespace aodv
