#include "aodv/core.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace aodv {

MessageKind kind_of(const Message& m) { return static_cast<MessageKind>(m.index()); }

const char* kind_name(MessageKind k) {
  switch (k) {
    case MessageKind::rreq: return "rreq";
    case MessageKind::rrep: return "rrep";
    case MessageKind::rerr: return "rerr";
    case MessageKind::pkt: return "pkt";
    case MessageKind::newpkt: return "newpkt";
  }
  return "?";
}

NodeState make_node(NodeId ip) {
  NodeState n;
  n.ip = ip;
  return n;
}

namespace {

bool should_replace(const RouteEntry& old, const RouteEntry& cand) {
  if (cand.dsn_known && old.dsn_known) {
    if (cand.dsn > old.dsn) return true;
    if (cand.dsn == old.dsn) return cand.hops < old.hops || !old.valid;
    return false;
  }
  return !cand.dsn_known && !old.valid;
}

}  // namespace

RouteUpdate update_route(RoutingTable rt, const RouteEntry& cand) {
  assert(cand.hops >= 1 && cand.dip != kNoNode);
  auto it = rt.find(cand.dip);
  if (it == rt.end()) {
    rt.emplace(cand.dip, cand);
    return {std::move(rt), true};
  }
  if (!should_replace(it->second, cand)) return {std::move(rt), false};

  RouteEntry next = cand;
  next.precursors.insert(it->second.precursors.begin(), it->second.precursors.end());
  const bool changed = next != it->second;
  it->second = std::move(next);
  return {std::move(rt), changed};
}

RoutingTable invalidate_routes(RoutingTable rt, const std::map<NodeId, SeqNum>& dests) {
  for (const auto& [dip, sn] : dests) {
    auto it = rt.find(dip);
    if (it == rt.end() || !it->second.valid) continue;
    it->second.valid = false;
    it->second.dsn = std::max(it->second.dsn, sn);
  }
  return rt;
}

const RouteEntry* find_route(const RoutingTable& rt, NodeId dip) {
  auto it = rt.find(dip);
  return it == rt.end() ? nullptr : &it->second;
}

const RouteEntry* find_valid_route(const RoutingTable& rt, NodeId dip) {
  const RouteEntry* e = find_route(rt, dip);
  return e != nullptr && e->valid ? e : nullptr;
}

HandlerResult handle_newpkt(NodeState n, Payload data, NodeId dip) {
  std::vector<SendAction> sends;
  if (const RouteEntry* r = find_valid_route(n.rt, dip)) {
    sends.push_back(UnicastSend{r->nhop, Pkt{data, dip, n.ip, n.ip}, FailurePolicy::generate_rerr});
    return {std::move(n), std::move(sends)};
  }

  auto& queued = n.store[dip];
  const bool discovery_pending = !queued.empty();
  queued.push_back(data);
  if (discovery_pending) return {std::move(n), std::move(sends)};

  n.sn += 1;
  const std::uint32_t id = n.next_rreq_id++;
  n.rreq_seen.emplace(n.ip, id);
  const RouteEntry* known = find_route(n.rt, dip);
  Rreq req;
  req.hops = 0;
  req.rreq_id = id;
  req.dip = dip;
  req.dsn = known != nullptr ? known->dsn : 0;
  req.dsn_known = known != nullptr && known->dsn_known;
  req.oip = n.ip;
  req.osn = n.sn;
  req.sip = n.ip;
  sends.push_back(BroadcastSend{req});
  return {std::move(n), std::move(sends)};
}

HandlerResult handle_pkt(NodeState n, const Pkt& m) {
  std::vector<SendAction> sends;
  if (m.dip == n.ip) {
    sends.push_back(Deliver{m.data, m.oip});
    return {std::move(n), std::move(sends)};
  }
  if (const RouteEntry* r = find_valid_route(n.rt, m.dip)) {
    Pkt fwd = m;
    fwd.sip = n.ip;
    sends.push_back(UnicastSend{r->nhop, fwd, FailurePolicy::generate_rerr});
    return {std::move(n), std::move(sends)};
  }

  // No usable route: report the destination as unreachable with a bumped dsn.
  SeqNum reported = 1;
  if (auto it = n.rt.find(m.dip); it != n.rt.end()) {
    it->second.dsn += 1;
    reported = it->second.dsn;
  }
  sends.push_back(BroadcastSend{Rerr{{{m.dip, reported}}, n.ip}});
  return {std::move(n), std::move(sends)};
}

HandlerResult handle_rreq(NodeState n, const Rreq& m, const VariantFlags& variants) {
  std::vector<SendAction> sends;

  if (m.oip != n.ip) {
    RouteEntry reverse;
    reverse.dip = m.oip;
    reverse.dsn = m.osn;
    reverse.dsn_known = true;
    reverse.valid = true;
    reverse.hops = m.hops + 1;
    reverse.nhop = m.sip;
    n.rt = update_route(std::move(n.rt), reverse).rt;
  }

  if (!n.rreq_seen.emplace(m.oip, m.rreq_id).second) return {std::move(n), std::move(sends)};

  Rreq forwarded = m;
  forwarded.hops = m.hops + 1;
  forwarded.sip = n.ip;

  if (m.dip == n.ip) {
    n.sn = std::max(n.sn, m.dsn);
    sends.push_back(UnicastSend{m.sip, Rrep{0, n.ip, n.sn, m.oip, n.ip}, FailurePolicy::discard});
    if (variants.dest_forwards_rreq) sends.push_back(BroadcastSend{forwarded});
    return {std::move(n), std::move(sends)};
  }

  auto it = n.rt.find(m.dip);
  if (it != n.rt.end() && it->second.valid && it->second.dsn_known && m.dsn_known &&
      it->second.dsn >= m.dsn) {
    RouteEntry& entry = it->second;
    entry.precursors.insert(m.sip);
    sends.push_back(
        UnicastSend{m.sip, Rrep{entry.hops, m.dip, entry.dsn, m.oip, n.ip}, FailurePolicy::discard});
    return {std::move(n), std::move(sends)};
  }

  sends.push_back(BroadcastSend{forwarded});
  return {std::move(n), std::move(sends)};
}

HandlerResult handle_rrep(NodeState n, const Rrep& m, const VariantFlags& variants) {
  std::vector<SendAction> sends;
  // A reply about ourselves carries nothing we can store.
  if (m.dip == n.ip) return {std::move(n), std::move(sends)};

  RouteEntry forward;
  forward.dip = m.dip;
  forward.dsn = m.dsn;
  forward.dsn_known = true;
  forward.valid = true;
  forward.hops = m.hops + 1;
  forward.nhop = m.sip;
  auto [rt, updated] = update_route(std::move(n.rt), forward);
  n.rt = std::move(rt);

  if (m.oip == n.ip) {
    const RouteEntry* r = find_valid_route(n.rt, m.dip);
    auto queued = n.store.find(m.dip);
    if (r != nullptr && queued != n.store.end()) {
      for (Payload data : queued->second) {
        sends.push_back(
            UnicastSend{r->nhop, Pkt{data, m.dip, n.ip, n.ip}, FailurePolicy::generate_rerr});
      }
      n.store.erase(queued);
    }
    return {std::move(n), std::move(sends)};
  }

  if (!updated && !variants.forward_all_rreps) return {std::move(n), std::move(sends)};

  const RouteEntry* back = find_valid_route(n.rt, m.oip);
  if (back == nullptr) return {std::move(n), std::move(sends)};
  const NodeId next = back->nhop;
  n.rt.at(m.dip).precursors.insert(next);
  sends.push_back(
      UnicastSend{next, Rrep{m.hops + 1, m.dip, m.dsn, m.oip, n.ip}, FailurePolicy::discard});
  return {std::move(n), std::move(sends)};
}

HandlerResult handle_rerr(NodeState n, const Rerr& m) {
  std::vector<SendAction> sends;
  std::map<NodeId, SeqNum> affected;
  std::set<NodeId> precursors;
  for (const auto& [dip, sn] : m.dests) {
    const RouteEntry* r = find_valid_route(n.rt, dip);
    if (r == nullptr || r->nhop != m.sip || sn <= r->dsn) continue;
    affected.emplace(dip, sn);
    precursors.insert(r->precursors.begin(), r->precursors.end());
  }
  if (affected.empty()) return {std::move(n), std::move(sends)};

  n.rt = invalidate_routes(std::move(n.rt), affected);
  if (!precursors.empty()) sends.push_back(BroadcastSend{Rerr{std::move(affected), n.ip}});
  return {std::move(n), std::move(sends)};
}

HandlerResult step_node(NodeState n, const VariantFlags& variants) {
  if (n.msg_buf.empty()) throw std::logic_error("step_node: empty message buffer");
  Message head = std::move(n.msg_buf.front());
  n.msg_buf.pop_front();

  struct Dispatch {
    NodeState& n;
    const VariantFlags& variants;
    HandlerResult operator()(const Rreq& m) { return handle_rreq(std::move(n), m, variants); }
    HandlerResult operator()(const Rrep& m) { return handle_rrep(std::move(n), m, variants); }
    HandlerResult operator()(const Rerr& m) { return handle_rerr(std::move(n), m); }
    HandlerResult operator()(const Pkt& m) { return handle_pkt(std::move(n), m); }
    HandlerResult operator()(const Newpkt& m) { return handle_newpkt(std::move(n), m.data, m.dip); }
  };
  return std::visit(Dispatch{n, variants}, head);
}

}  // namespace aodv
