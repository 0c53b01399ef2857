#include "aodv/net_model.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>
#include <type_traits>

namespace aodv {

bool Topology::connected(NodeId a, NodeId b) const {
  if (a == kNoNode || b == kNoNode || to_int(a) > n_ || to_int(b) > n_) return false;
  return adj_[index(a, b)];
}

void Topology::connect(NodeId a, NodeId b) {
  if (a == b) throw std::invalid_argument("topology: self-link");
  adj_.at(index(a, b)) = true;
  adj_.at(index(b, a)) = true;
}

void Topology::disconnect(NodeId a, NodeId b) {
  adj_.at(index(a, b)) = false;
  adj_.at(index(b, a)) = false;
}

std::vector<NodeId> Topology::neighbours(NodeId a) const {
  std::vector<NodeId> out;
  for (unsigned x = 1; x <= n_; ++x) {
    if (connected(a, node_id(x))) out.push_back(node_id(x));
  }
  return out;
}

namespace {

// FNV-1a over a word stream.
class StreamHash {
 public:
  template <typename T>
    requires std::is_integral_v<T>
  void add(T value) {
    const auto v = static_cast<std::uint64_t>(value);
    for (int i = 0; i < 8; ++i) {
      h_ ^= (v >> (8 * i)) & 0xffu;
      h_ *= 0x100000001b3ull;
    }
  }
  void add(NodeId id) { add(to_int(id)); }

  void add(const Message& m) {
    add(m.index());
    std::visit([this](const auto& x) { add_fields(x); }, m);
  }

  std::uint64_t value() const { return h_; }

 private:
  void add_fields(const Rreq& r) {
    add(r.hops); add(r.rreq_id); add(r.dip); add(r.dsn); add(r.dsn_known); add(r.oip); add(r.osn); add(r.sip);
  }
  void add_fields(const Rrep& r) { add(r.hops); add(r.dip); add(r.dsn); add(r.oip); add(r.sip); }
  void add_fields(const Rerr& r) {
    add(r.dests.size());
    for (const auto& [d, sn] : r.dests) { add(d); add(sn); }
    add(r.sip);
  }
  void add_fields(const Pkt& p) { add(p.data); add(p.dip); add(p.oip); add(p.sip); }
  void add_fields(const Newpkt& p) { add(p.data); add(p.dip); }

  std::uint64_t h_{0xcbf29ce484222325ull};
};

}  // namespace

std::uint64_t state_hash(const GlobalState& g) {
  StreamHash h;
  h.add(g.nodes.size());
  for (const NodeState& n : g.nodes) {
    h.add(n.ip);
    h.add(n.sn);
    h.add(n.rt.size());
    for (const auto& [d, e] : n.rt) {
      h.add(d); h.add(e.dsn); h.add(e.dsn_known); h.add(e.valid); h.add(e.hops); h.add(e.nhop);
      h.add(e.precursors.size());
      for (NodeId p : e.precursors) h.add(p);
    }
    h.add(n.rreq_seen.size());
    for (const auto& [o, id] : n.rreq_seen) { h.add(o); h.add(id); }
    h.add(n.next_rreq_id);
    h.add(n.msg_buf.size());
    for (const Message& m : n.msg_buf) h.add(m);
    h.add(n.store.size());
    for (const auto& [d, q] : n.store) {
      h.add(d);
      h.add(q.size());
      for (Payload p : q) h.add(p);
    }
  }
  const auto n = static_cast<unsigned>(g.topo.size());
  for (unsigned a = 1; a <= n; ++a) {
    for (unsigned b = a + 1; b <= n; ++b) h.add(g.topo.connected(node_id(a), node_id(b)));
  }
  h.add(g.tester_pc);
  h.add(g.delivered.size());
  for (const Delivery& d : g.delivered) { h.add(d.receiver); h.add(d.origin); h.add(d.data); }
  return h.value();
}

NodeId TransitionLabel::actor() const {
  if (actions.empty()) return kNoNode;
  if (const auto* step = std::get_if<label::NodeStep>(&actions.front())) return step->node;
  return kNoNode;
}

GlobalState initial_state(const Scenario& scen) {
  GlobalState g;
  const auto n = static_cast<unsigned>(scen.node_count());
  g.nodes.reserve(n);
  for (unsigned i = 1; i <= n; ++i) g.nodes.push_back(make_node(node_id(i)));
  g.topo = Topology(n);
  for (const auto& [a, b] : scen.links) g.topo.connect(a, b);
  return g;
}

namespace {

Message with_sip(Message m, NodeId sip) {
  std::visit(
      [sip](auto& x) {
        if constexpr (requires { x.sip; }) x.sip = sip;
      },
      m);
  return m;
}

void broadcast(GlobalState& g, NodeId sender, const Message& msg, std::vector<ActionLabel>& labels) {
  std::vector<NodeId> receivers = g.topo.neighbours(sender);
  for (NodeId r : receivers) g.node(r).msg_buf.push_back(msg);
  labels.emplace_back(label::Broadcast{sender, msg, std::move(receivers)});
}

}  // namespace

std::pair<GlobalState, std::vector<ActionLabel>> apply_sends(GlobalState g, NodeId sender,
                                                             const std::vector<SendAction>& actions) {
  std::vector<ActionLabel> labels;
  for (const SendAction& action : actions) {
    if (const auto* b = std::get_if<BroadcastSend>(&action)) {
      broadcast(g, sender, with_sip(b->msg, sender), labels);
    } else if (const auto* u = std::get_if<UnicastSend>(&action)) {
      const Message msg = with_sip(u->msg, sender);
      if (g.topo.connected(sender, u->dst)) {
        g.node(u->dst).msg_buf.push_back(msg);
        labels.emplace_back(label::Unicast{sender, u->dst, msg});
        continue;
      }
      labels.emplace_back(label::UnicastFail{sender, u->dst, msg});
      if (u->on_fail != FailurePolicy::generate_rerr) continue;
      const auto* pkt = std::get_if<Pkt>(&msg);
      if (pkt == nullptr) continue;
      // Link break detected: drop the route that used it and tell the neighbours.
      NodeState& self = g.node(sender);
      auto it = self.rt.find(pkt->dip);
      if (it == self.rt.end() || !it->second.valid) continue;
      const SeqNum bumped = it->second.dsn + 1;
      self.rt = invalidate_routes(std::move(self.rt), {{pkt->dip, bumped}});
      broadcast(g, sender, Rerr{{{pkt->dip, bumped}}, sender}, labels);
    } else if (const auto* d = std::get_if<Deliver>(&action)) {
      g.delivered.insert(Delivery{sender, d->from, d->data});
      labels.emplace_back(label::Delivered{sender, d->from, d->data});
    }
  }
  return {std::move(g), std::move(labels)};
}

std::vector<Successor> successors(const GlobalState& g, const Scenario& scen) {
  std::vector<Successor> out;
  const bool tester_pending = g.tester_pc < scen.events.size();

  if (!(scen.events_sequential_first && tester_pending)) {
    for (const NodeState& n : g.nodes) {
      if (n.msg_buf.empty()) continue;
      const MessageKind kind = kind_of(n.msg_buf.front());
      HandlerResult r = step_node(n, scen.variants);
      GlobalState next = g;
      next.node(n.ip) = std::move(r.state);
      auto [after, sends] = apply_sends(std::move(next), n.ip, r.sends);
      TransitionLabel lbl;
      lbl.actions.reserve(sends.size() + 1);
      lbl.actions.emplace_back(label::NodeStep{n.ip, kind});
      for (auto& s : sends) lbl.actions.push_back(std::move(s));
      out.push_back(Successor{std::move(lbl), std::move(after)});
    }
  }

  if (tester_pending) {
    GlobalState next = g;
    next.tester_pc += 1;
    TransitionLabel lbl;
    const TesterEvent& ev = scen.events[g.tester_pc];
    if (const auto* inj = std::get_if<InjectPkt>(&ev)) {
      next.node(inj->at).msg_buf.push_back(Newpkt{inj->data, inj->dest});
      lbl.actions.emplace_back(label::Inject{inj->at, inj->dest, inj->data});
    } else if (const auto* up = std::get_if<Connect>(&ev)) {
      next.topo.connect(up->a, up->b);
      lbl.actions.emplace_back(label::LinkUp{up->a, up->b});
    } else if (const auto* down = std::get_if<Disconnect>(&ev)) {
      next.topo.disconnect(down->a, down->b);
      lbl.actions.emplace_back(label::LinkDown{down->a, down->b});
    }
    out.push_back(Successor{std::move(lbl), std::move(next)});
  }
  return out;
}

}  // namespace aodv
