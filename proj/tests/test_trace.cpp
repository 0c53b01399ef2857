#include <doctest.h>

#include <regex>
#include <sstream>

#include "aodv/checker.hpp"
#include "aodv/trace.hpp"
#include "fixtures.hpp"

using namespace aodv;

namespace {

// Follows the enabled transition of `actor` (kNoNode = tester).
void take(Trace& t, const Scenario& scen, NodeId actor) {
  for (Successor& s : successors(t.final_state(), scen)) {
    if (s.label.actor() == actor) {
      t.steps.push_back({std::move(s.label), std::move(s.state)});
      return;
    }
  }
  FAIL("actor not enabled");
}

// Both injections first, then the interleaving where a answers its own
// request before seeing the reply d produces for s.
Trace reply_dropped_path(const Scenario& scen) {
  const NodeId s = *scen.find_node("s"), a = *scen.find_node("a"), d = *scen.find_node("d");
  Trace t{initial_state(scen), {}, std::nullopt};
  for (NodeId actor : {kNoNode, kNoNode, a, s, d, a, a, d}) take(t, scen, actor);
  return t;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

// Chart lines that open a row (index in the left margin).
std::vector<std::string> row_starts(const std::string& chart) {
  static const std::regex numbered(R"(^ *\d+ .*)");
  std::vector<std::string> rows;
  for (const std::string& l : lines_of(chart)) {
    if (std::regex_match(l, numbered)) rows.push_back(l);
  }
  return rows;
}

bool contains(const std::string& hay, const std::string& needle) { return hay.find(needle) != std::string::npos; }

}  // namespace

TEST_CASE("chart of the dropped-reply interleaving") {
  const Scenario scen = fixtures::bundled("paper1");
  const Trace t = reply_dropped_path(scen);
  const std::string chart = render_msc(t, scen);
  const auto rows = row_starts(chart);
  REQUIRE(rows.size() == 8);
  CHECK(contains(rows[0], "newpkt(1 for d)"));
  CHECK(contains(rows[1], "newpkt(2 for d)"));
  CHECK(contains(rows[2], "[a takes newpkt] rreq[a] -> {s,d}"));
  CHECK(contains(rows[3], "[s takes newpkt] rreq[s] -> {a}"));
  CHECK(contains(rows[4], "[d takes rreq] rrep d->a"));
  CHECK(contains(rows[7], "[d takes rreq] rrep d->a"));
  CHECK(lines_of(chart).at(0).find("tester") != std::string::npos);

  // State 7 (before row 7) already has a's route to d.
  const GlobalState& g7 = t.state_at(7);
  const RouteEntry& e = g7.node(*scen.find_node("a")).rt.at(*scen.find_node("d"));
  CHECK(e.valid);
  CHECK(e.nhop == *scen.find_node("d"));

  const ImportedTrace doc = import_trace(export_trace(t, scen));
  bool shown = false;
  for (const std::string& l : doc.snapshots.at(7)) {
    shown = shown || contains(l, "rt[a][d] dsn=1 known=1 valid=1 hops=1 nhop=d");
  }
  CHECK(shown);
}

TEST_CASE("chart rendering") {
  const Scenario scen = fixtures::bundled("paper1");

  SUBCASE("empty trace is header only") {
    const Trace t{initial_state(scen), {}, std::nullopt};
    CHECK(render_msc(t, scen) == render_msc_header(scen));
    CHECK(lines_of(render_msc_header(scen)).size() == 2);
  }
  SUBCASE("row count matches the exported step count") {
    Verdict v = check_property(scen, parse_property("A<> rt[s][d].nhop != 0", scen.nodes));
    REQUIRE(v.trace.has_value());
    const std::string doc = export_trace(*v.trace, scen, {"A<> rt[s][d].nhop != 0", "refuted"});
    CHECK(row_starts(render_msc(*v.trace, scen)).size() == v.trace->steps.size());
    CHECK(contains(doc, "steps: " + std::to_string(v.trace->steps.size()) + "\n"));
  }
  SUBCASE("witness for delivery ends with a delivery at d") {
    const Scenario two = fixtures::two_node();
    Verdict v = check_property(two, parse_property("E<> delivered(d, s)", two.nodes));
    REQUIRE(v.trace.has_value());
    const auto rows = row_starts(render_msc(*v.trace, two));
    REQUIRE_FALSE(rows.empty());
    CHECK(contains(rows.back(), "[d takes pkt] deliver(1 from s)"));
    CHECK(contains(rows.back(), "@"));
  }
  SUBCASE("every action kind has a glyph") {
    const NodeId s = node_id(1), a = node_id(2), d = node_id(3);
    const std::vector<TransitionLabel> rows{
        {{label::LinkUp{s, d}}},
        {{label::LinkDown{a, d}}},
        {{label::NodeStep{a, MessageKind::pkt}, label::UnicastFail{a, d, Pkt{1, d, s, a}},
          label::Broadcast{a, Rerr{{{d, 2}}, a}, {s}}}},
        {{label::NodeStep{s, MessageKind::rreq}, label::Broadcast{s, Rreq{}, {}}}},
        {{label::NodeStep{d, MessageKind::pkt}, label::Delivered{d, s, 1}}},
        {{label::NodeStep{s, MessageKind::rerr}}},
    };
    const std::string chart = render_rows(rows, scen, 1);
    const auto lines = lines_of(chart);
    CHECK(contains(chart, "connect(s,d)"));
    CHECK(contains(chart, "disconnect(a,d)"));
    CHECK(contains(chart, "[a takes pkt] pkt a->d (failed)"));
    CHECK(contains(chart, "rerr[a] -> {s}"));
    CHECK(contains(chart, "[s takes rreq] rreq[s] (no receivers)"));
    CHECK(contains(chart, "[d takes pkt] deliver(1 from s)"));
    CHECK(contains(chart, "[s takes rerr] no output"));
    CHECK(contains(chart, "cycle: after row 5 the run is back in the state before row 1"));
    // Row 1 carries the lasso marker; the failed unicast continues on an
    // unnumbered line.
    CHECK(lines.at(3).substr(0, 6) == "   1 @");
    CHECK(row_starts(chart).size() == 6);
    for (char glyph : {'+', '/', 'x', '@', '#', '*', '>', '<'}) {
      CAPTURE(glyph);
      CHECK(chart.find(glyph) != std::string::npos);
    }
  }
}

TEST_CASE("labels") {
  const Scenario scen = fixtures::bundled("paper1");
  const Trace t = reply_dropped_path(scen);
  CHECK(format_label(t.steps[0].label, scen) == "tester injects newpkt(data=1,dip=d) at a");
  CHECK(format_label(t.steps[2].label, scen) ==
        "a handles newpkt; broadcast rreq[a] rreq(hops=0,id=1,dip=d,dsn=?,oip=a,osn=2,sip=a) to {s,d}");
  CHECK(contains(format_label(t.steps[4].label, scen), "d handles rreq; unicast d->a rrep("));
}

TEST_CASE("export, import and rebuild") {
  const Scenario scen = fixtures::bundled("paper1");
  const Property prop = parse_property(scen.property, scen.nodes);
  const Verdict v = check_property(scen, prop);
  REQUIRE(v.trace.has_value());
  const std::string text = export_trace(*v.trace, scen, {scen.property, "refuted"});

  const ImportedTrace doc = import_trace(text);
  CHECK(doc.scenario == scen);
  CHECK(doc.property == scen.property);
  CHECK(doc.verdict == "refuted");
  CHECK(doc.labels.size() == v.trace->steps.size());
  CHECK(doc.state_hashes.size() == v.trace->steps.size() + 1);
  CHECK(doc.state_hashes.back() == state_hash(v.trace->final_state()));

  const Trace rebuilt = rebuild_trace(doc);
  CHECK(rebuilt.final_state() == v.trace->final_state());
  CHECK(state_hash(rebuilt.final_state()) == doc.state_hashes.back());
  CHECK(export_trace(rebuilt, doc.scenario, {doc.property, doc.verdict}) == text);

  SUBCASE("a tampered label is rejected") {
    std::string bad = text;
    const std::size_t at = bad.find("step 2: ");
    REQUIRE(at != std::string::npos);
    bad.replace(bad.find("rreq", at), 4, "rrep");
    CHECK_THROWS_AS(rebuild_trace(import_trace(bad)), ReplayMismatch);
  }
  SUBCASE("a tampered hash is rejected") {
    ImportedTrace d2 = doc;
    d2.state_hashes[3] ^= 1;
    CHECK_THROWS_AS(rebuild_trace(d2), ReplayMismatch);
  }
  SUBCASE("a tampered step is rejected by replay") {
    Trace t = *v.trace;
    t.steps[1].state.tester_pc += 1;
    CHECK_THROWS_AS(replay(t, scen), ReplayMismatch);
    CHECK_THROWS_AS(render_msc(t, scen), ReplayMismatch);
  }
  SUBCASE("a false lasso is rejected") {
    Trace t = *v.trace;
    t.lasso_start = 0;
    CHECK_THROWS_AS(replay(t, scen), ReplayMismatch);
  }
}
