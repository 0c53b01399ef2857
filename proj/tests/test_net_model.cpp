#include <doctest.h>

#include "aodv/checker.hpp"
#include "aodv/net_model.hpp"
#include "fixtures.hpp"

using namespace aodv;

namespace {
constexpr NodeId S = node_id(1), A = node_id(2), D = node_id(3);
}

TEST_CASE("initial_state") {
  SUBCASE("paper1") {
    const Scenario scen = fixtures::bundled("paper1");
    const GlobalState g = initial_state(scen);
    REQUIRE(g.nodes.size() == 3);
    CHECK(g.topo.connected(S, A));
    CHECK(g.topo.connected(A, D));
    CHECK_FALSE(g.topo.connected(S, D));
    CHECK(g.tester_pc == 0);
    CHECK(g.delivered.empty());
    for (const NodeState& n : g.nodes) {
      CHECK(n.sn == 1);
      CHECK(n.next_rreq_id == 1);
      CHECK(n.rt.empty());
      CHECK(n.msg_buf.empty());
      CHECK(n.store.empty());
      CHECK(n.rreq_seen.empty());
    }
  }
  SUBCASE("no events: initial state is terminal") {
    const Scenario scen = parse_scenario("nodes:\n s\n d\nlinks:\n s d\nproperty:\n A[] true\n");
    CHECK(successors(initial_state(scen), scen).empty());
  }
  SUBCASE("adjacency is symmetric and irreflexive") {
    const Scenario scen = fixtures::two_node();
    const GlobalState g = initial_state(scen);
    CHECK(g.topo.connected(node_id(1), node_id(2)));
    CHECK(g.topo.connected(node_id(2), node_id(1)));
    CHECK_FALSE(g.topo.connected(node_id(1), node_id(1)));
  }
}

TEST_CASE("apply_sends") {
  const Scenario scen = fixtures::bundled("paper1");
  const GlobalState g = initial_state(scen);

  SUBCASE("broadcast reaches exactly the neighbours") {
    const Rreq req{0, 1, D, 0, false, A, 2, A};
    auto [next, labels] = apply_sends(g, A, {BroadcastSend{req}});
    CHECK(next.node(S).msg_buf.size() == 1);
    CHECK(next.node(D).msg_buf.size() == 1);
    CHECK(next.node(A).msg_buf.empty());
    REQUIRE(labels.size() == 1);
    CHECK(std::get<label::Broadcast>(labels[0]).receivers == std::vector<NodeId>{S, D});
  }
  SUBCASE("failed unicast with discard policy") {
    GlobalState cut = g;
    cut.topo.disconnect(A, D);
    auto [next, labels] = apply_sends(cut, A, {UnicastSend{D, Rrep{0, D, 1, S, A}, FailurePolicy::discard}});
    CHECK(next == cut);
    REQUIRE(labels.size() == 1);
    CHECK(std::holds_alternative<label::UnicastFail>(labels[0]));
  }
  SUBCASE("failed data unicast invalidates the route and raises an error") {
    GlobalState cut = g;
    cut.topo.disconnect(A, D);
    cut.node(A).rt[D] = RouteEntry{D, 1, true, true, 1, D, {}};
    auto [next, labels] = apply_sends(cut, A, {UnicastSend{D, Pkt{1, D, A, A}, FailurePolicy::generate_rerr}});
    CHECK_FALSE(next.node(A).rt.at(D).valid);
    CHECK(next.node(A).rt.at(D).dsn == 2);
    REQUIRE(labels.size() == 2);
    CHECK(std::holds_alternative<label::UnicastFail>(labels[0]));
    const auto& b = std::get<label::Broadcast>(labels[1]);
    CHECK(std::get<Rerr>(b.msg) == Rerr{{{D, 2}}, A});
    CHECK(b.receivers == std::vector<NodeId>{S});
    CHECK(next.node(S).msg_buf.size() == 1);
  }
  SUBCASE("broadcast from an isolated node") {
    GlobalState iso = g;
    iso.topo.disconnect(S, A);
    auto [next, labels] = apply_sends(iso, S, {BroadcastSend{Rreq{0, 1, D, 0, false, S, 2, S}}});
    CHECK(next == iso);
    CHECK(std::get<label::Broadcast>(labels.at(0)).receivers.empty());
  }
  SUBCASE("delivery is logged") {
    auto [next, labels] = apply_sends(g, D, {Deliver{4, S}});
    CHECK(next.delivered.count(Delivery{D, S, 4}) == 1);
    CHECK(std::get<label::Delivered>(labels.at(0)) == label::Delivered{D, S, 4});
  }
}

TEST_CASE("successors") {
  const Scenario scen = fixtures::bundled("paper1");
  const GlobalState g0 = initial_state(scen);

  SUBCASE("initially only the tester is enabled") {
    const auto succ = successors(g0, scen);
    REQUIRE(succ.size() == 1);
    CHECK(std::holds_alternative<label::Inject>(succ[0].label.actions.at(0)));
    CHECK(succ[0].label.actor() == kNoNode);
  }
  SUBCASE("two busy nodes plus a pending tester event") {
    GlobalState g = g0;
    g.tester_pc = 1;
    g.node(S).msg_buf.push_back(Rreq{0, 1, D, 0, false, A, 2, A});
    g.node(A).msg_buf.push_back(Newpkt{1, D});
    const auto succ = successors(g, scen);
    REQUIRE(succ.size() == 3);
    CHECK(succ[0].label.actor() == S);
    CHECK(succ[1].label.actor() == A);
    CHECK(std::holds_alternative<label::Inject>(succ[2].label.actions.at(0)));
  }
  SUBCASE("terminal state") {
    GlobalState g = g0;
    g.tester_pc = static_cast<std::uint32_t>(scen.events.size());
    CHECK(successors(g, scen).empty());
  }
  SUBCASE("link events toggle adjacency") {
    Scenario s2 = scen;
    s2.events = {Disconnect{A, D}, Connect{S, D}};
    const auto first = successors(initial_state(s2), s2);
    REQUIRE(first.size() == 1);
    CHECK_FALSE(first[0].state.topo.connected(D, A));
    const auto second = successors(first[0].state, s2);
    CHECK(second.at(0).state.topo.connected(D, S));
    CHECK(second.at(0).state.tester_pc == 2);
  }
  SUBCASE("sequential-first tester blocks protocol steps") {
    Scenario s2 = scen;
    s2.events_sequential_first = true;
    GlobalState g = successors(g0, s2).at(0).state;
    const auto succ = successors(g, s2);
    REQUIRE(succ.size() == 1);
    CHECK(succ[0].label.actor() == kNoNode);
  }
}

TEST_CASE("successors is pure and the tester stays live") {
  for (const char* name : {"paper1", "paper2"}) {
    const Scenario scen = fixtures::bundled(name);
    CheckOptions opts;
    std::size_t checked = 0;
    opts.on_transition = [&](const GlobalState& pre, const TransitionLabel&, const GlobalState&) {
      if (checked++ % 7 != 0) return;
      const auto a = successors(pre, scen);
      const auto b = successors(pre, scen);
      REQUIRE(a.size() == b.size());
      for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].label == b[i].label);
        CHECK(a[i].state == b[i].state);
      }
      if (pre.tester_pc < scen.events.size()) {
        CHECK(a.back().label.actor() == kNoNode);
      }
    };
    explore(scen, opts);
    CHECK(checked > 0);
  }
}

TEST_CASE("state hash distinguishes buffer order") {
  const Scenario scen = fixtures::bundled("paper1");
  GlobalState g1 = initial_state(scen), g2 = g1;
  g1.node(S).msg_buf = {Newpkt{1, D}, Newpkt{2, D}};
  g2.node(S).msg_buf = {Newpkt{2, D}, Newpkt{1, D}};
  CHECK_FALSE(g1 == g2);
  CHECK(state_hash(g1) != state_hash(g2));
  CHECK(state_hash(g1) == state_hash(GlobalState(g1)));
}
