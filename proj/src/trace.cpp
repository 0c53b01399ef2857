#include "aodv/trace.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <sstream>

namespace aodv {

namespace {

std::string name(const Scenario& scen, NodeId id) {
  if (id == kNoNode) return "-";
  if (to_int(id) > scen.node_count()) return "#" + std::to_string(to_int(id));
  return scen.name_of(id);
}

std::string node_set(const Scenario& scen, const std::vector<NodeId>& ids) {
  std::string out = "{";
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i > 0) out += ",";
    out += name(scen, ids[i]);
  }
  return out + "}";
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

std::string format_message(const Message& m, const Scenario& scen) {
  std::ostringstream o;
  auto dsn = [](SeqNum v, bool known) { return known ? std::to_string(v) : std::string("?"); };
  if (const auto* r = std::get_if<Rreq>(&m)) {
    o << "rreq(hops=" << r->hops << ",id=" << r->rreq_id << ",dip=" << name(scen, r->dip)
      << ",dsn=" << dsn(r->dsn, r->dsn_known) << ",oip=" << name(scen, r->oip) << ",osn=" << r->osn
      << ",sip=" << name(scen, r->sip) << ")";
  } else if (const auto* p = std::get_if<Rrep>(&m)) {
    o << "rrep(hops=" << p->hops << ",dip=" << name(scen, p->dip) << ",dsn=" << p->dsn
      << ",oip=" << name(scen, p->oip) << ",sip=" << name(scen, p->sip) << ")";
  } else if (const auto* e = std::get_if<Rerr>(&m)) {
    o << "rerr({";
    bool first = true;
    for (const auto& [d, sn] : e->dests) {
      o << (first ? "" : ",") << name(scen, d) << ":" << sn;
      first = false;
    }
    o << "},sip=" << name(scen, e->sip) << ")";
  } else if (const auto* k = std::get_if<Pkt>(&m)) {
    o << "pkt(data=" << k->data << ",dip=" << name(scen, k->dip) << ",oip=" << name(scen, k->oip)
      << ",sip=" << name(scen, k->sip) << ")";
  } else if (const auto* n = std::get_if<Newpkt>(&m)) {
    o << "newpkt(data=" << n->data << ",dip=" << name(scen, n->dip) << ")";
  }
  return o.str();
}

namespace {

std::string format_action(const ActionLabel& a, const Scenario& scen) {
  struct Fmt {
    const Scenario& scen;
    std::string operator()(const label::Inject& x) const {
      return "tester injects newpkt(data=" + std::to_string(x.data) + ",dip=" + name(scen, x.dest) +
             ") at " + name(scen, x.at);
    }
    std::string operator()(const label::LinkUp& x) const {
      return "tester connects " + name(scen, x.a) + " " + name(scen, x.b);
    }
    std::string operator()(const label::LinkDown& x) const {
      return "tester disconnects " + name(scen, x.a) + " " + name(scen, x.b);
    }
    std::string operator()(const label::NodeStep& x) const {
      return name(scen, x.node) + " handles " + kind_name(x.kind);
    }
    std::string operator()(const label::Broadcast& x) const {
      return std::string("broadcast ") + kind_name(kind_of(x.msg)) + "[" + name(scen, x.sender) + "] " +
             format_message(x.msg, scen) + " to " + node_set(scen, x.receivers);
    }
    std::string operator()(const label::Unicast& x) const {
      return "unicast " + name(scen, x.sender) + "->" + name(scen, x.receiver) + " " + format_message(x.msg, scen);
    }
    std::string operator()(const label::UnicastFail& x) const {
      return "unicast-failed " + name(scen, x.sender) + "->" + name(scen, x.receiver) + " " +
             format_message(x.msg, scen);
    }
    std::string operator()(const label::Delivered& x) const {
      return "delivered data=" + std::to_string(x.data) + " at " + name(scen, x.node) + " from " +
             name(scen, x.origin);
    }
  };
  return std::visit(Fmt{scen}, a);
}

}  // namespace

std::string format_label(const TransitionLabel& lbl, const Scenario& scen) {
  std::string out;
  for (std::size_t i = 0; i < lbl.actions.size(); ++i) {
    if (i > 0) out += "; ";
    out += format_action(lbl.actions[i], scen);
  }
  return out;
}

void replay(const Trace& t, const Scenario& scen) {
  GlobalState cur = initial_state(scen);
  if (!(cur == t.initial)) throw ReplayMismatch("trace does not start in the initial state");
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    bool matched = false;
    for (Successor& s : successors(cur, scen)) {
      if (s.label == t.steps[i].label) {
        if (!(s.state == t.steps[i].state)) {
          throw ReplayMismatch("step " + std::to_string(i) + " reaches a different state than recorded");
        }
        cur = std::move(s.state);
        matched = true;
        break;
      }
    }
    if (!matched) {
      throw ReplayMismatch("step " + std::to_string(i) + " is not enabled: " +
                           format_label(t.steps[i].label, scen));
    }
  }
  if (t.lasso_start) {
    if (*t.lasso_start > t.steps.size() || !(t.state_at(*t.lasso_start) == t.final_state())) {
      throw ReplayMismatch("lasso does not close");
    }
  }
}

// ---------------------------------------------------------------------------
// Message sequence chart

namespace {

class Chart {
 public:
  explicit Chart(const Scenario& scen) : scen_(scen) {
    std::size_t longest = 6;  // "tester"
    for (const auto& n : scen.nodes) longest = std::max(longest, n.size());
    width_ = std::max<std::size_t>(10, longest + 3);
    columns_ = scen.node_count() + 1;
  }

  std::string header() const {
    std::string names(total(), ' ');
    for (std::size_t c = 0; c < columns_; ++c) {
      const std::string& n = c == 0 ? kTester : scen_.nodes[c - 1];
      const std::size_t at = center(c) - std::min(center(c), n.size() / 2);
      names.replace(at, n.size(), n);
    }
    return rstrip(names) + "\n" + rstrip(lifelines()) + "\n";
  }

  // Column of a participant: 0 is the tester, node i is column i.
  static std::size_t column(NodeId id) { return to_int(id); }

  std::string arrow(std::size_t from, const std::vector<std::size_t>& to, char head_override,
                    const std::string& text) const {
    std::string line = lifelines();
    std::size_t lo = center(from), hi = center(from);
    for (std::size_t t : to) {
      lo = std::min(lo, center(t));
      hi = std::max(hi, center(t));
    }
    for (std::size_t x = lo; x <= hi; ++x) line[x] = '-';
    for (std::size_t t : to) {
      char head = center(t) > center(from) ? '>' : '<';
      if (head_override != 0) head = head_override;
      line[center(t)] = head;
    }
    line[center(from)] = '*';
    return rstrip(line) + "   " + text;
  }

  std::string mark(std::size_t col, char c, const std::string& text) const {
    std::string line = lifelines();
    line[center(col)] = c;
    return rstrip(line) + "   " + text;
  }

  std::size_t prefix() const { return kPrefix; }

 private:
  static constexpr std::size_t kPrefix = 7;
  static inline const std::string kTester = "tester";

  std::size_t center(std::size_t c) const { return kPrefix + c * width_ + width_ / 2; }
  std::size_t total() const { return kPrefix + columns_ * width_; }

  std::string lifelines() const {
    std::string line(total(), ' ');
    for (std::size_t c = 0; c < columns_; ++c) line[center(c)] = '|';
    return line;
  }

  static std::string rstrip(std::string s) {
    s.erase(s.find_last_not_of(' ') + 1);
    return s;
  }

  const Scenario& scen_;
  std::size_t width_;
  std::size_t columns_;
};

std::vector<std::string> row_lines(const Chart& chart, const TransitionLabel& lbl, const Scenario& scen) {
  std::vector<std::string> lines;
  std::string step_note;
  std::size_t actor_col = 0;
  for (const ActionLabel& a : lbl.actions) {
    if (const auto* x = std::get_if<label::Inject>(&a)) {
      lines.push_back(chart.arrow(0, {Chart::column(x->at)}, 0,
                                  "newpkt(" + std::to_string(x->data) + " for " + name(scen, x->dest) + ")"));
    } else if (const auto* x = std::get_if<label::LinkUp>(&a)) {
      lines.push_back(chart.arrow(0, {Chart::column(x->a), Chart::column(x->b)}, '+',
                                  "connect(" + name(scen, x->a) + "," + name(scen, x->b) + ")"));
    } else if (const auto* x = std::get_if<label::LinkDown>(&a)) {
      lines.push_back(chart.arrow(0, {Chart::column(x->a), Chart::column(x->b)}, '/',
                                  "disconnect(" + name(scen, x->a) + "," + name(scen, x->b) + ")"));
    } else if (const auto* x = std::get_if<label::NodeStep>(&a)) {
      actor_col = Chart::column(x->node);
      step_note = std::string("[") + name(scen, x->node) + " takes " + kind_name(x->kind) + "] ";
    } else if (const auto* x = std::get_if<label::Broadcast>(&a)) {
      std::vector<std::size_t> to;
      for (NodeId r : x->receivers) to.push_back(Chart::column(r));
      std::string text = std::string(kind_name(kind_of(x->msg))) + "[" + name(scen, x->sender) + "]";
      text += x->receivers.empty() ? " (no receivers)" : " -> " + node_set(scen, x->receivers);
      lines.push_back(chart.arrow(Chart::column(x->sender), to, 0, step_note + text));
      step_note.clear();
    } else if (const auto* x = std::get_if<label::Unicast>(&a)) {
      lines.push_back(chart.arrow(Chart::column(x->sender), {Chart::column(x->receiver)}, 0,
                                  step_note + kind_name(kind_of(x->msg)) + " " + name(scen, x->sender) +
                                      "->" + name(scen, x->receiver)));
      step_note.clear();
    } else if (const auto* x = std::get_if<label::UnicastFail>(&a)) {
      lines.push_back(chart.arrow(Chart::column(x->sender), {Chart::column(x->receiver)}, 'x',
                                  step_note + kind_name(kind_of(x->msg)) + " " + name(scen, x->sender) +
                                      "->" + name(scen, x->receiver) + " (failed)"));
      step_note.clear();
    } else if (const auto* x = std::get_if<label::Delivered>(&a)) {
      lines.push_back(chart.mark(Chart::column(x->node), '@',
                                 step_note + "deliver(" + std::to_string(x->data) + " from " +
                                     name(scen, x->origin) + ")"));
      step_note.clear();
    }
  }
  if (!step_note.empty()) {
    // The node consumed a message without sending anything.
    step_note.pop_back();
    lines.push_back(chart.mark(actor_col, '#', step_note + " no output"));
  }
  return lines;
}

}  // namespace

std::string render_msc_header(const Scenario& scen) { return Chart(scen).header(); }

std::string render_rows(const std::vector<TransitionLabel>& rows, const Scenario& scen,
                        std::optional<std::size_t> lasso_start) {
  const Chart chart(scen);
  std::string out = chart.header();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::vector<std::string> lines = row_lines(chart, rows[i], scen);
    for (std::size_t k = 0; k < lines.size(); ++k) {
      std::string prefix(chart.prefix(), ' ');
      if (k == 0) {
        const std::string idx = std::to_string(i);
        prefix.replace(4 - std::min<std::size_t>(4, idx.size()), idx.size(), idx);
        if (lasso_start && *lasso_start == i) prefix[5] = '@';
      }
      out += prefix + lines[k].substr(chart.prefix()) + "\n";
    }
  }
  if (lasso_start) {
    out += "cycle: after row " + std::to_string(rows.empty() ? 0 : rows.size() - 1) +
           " the run is back in the state before row " + std::to_string(*lasso_start) + " (marked @)\n";
  }
  return out;
}

std::string render_msc(const Trace& t, const Scenario& scen) {
  replay(t, scen);
  std::vector<TransitionLabel> rows;
  rows.reserve(t.steps.size());
  for (const TraceStep& s : t.steps) rows.push_back(s.label);
  return render_rows(rows, scen, t.lasso_start);
}

// ---------------------------------------------------------------------------
// Structured export

std::vector<std::string> snapshot_lines(const GlobalState& g, const Scenario& scen) {
  std::vector<std::string> out;
  out.push_back("tester_pc " + std::to_string(g.tester_pc));
  std::string links = "links";
  for (unsigned a = 1; a <= g.topo.size(); ++a) {
    for (unsigned b = a + 1; b <= g.topo.size(); ++b) {
      if (g.topo.connected(node_id(a), node_id(b))) links += " " + name(scen, node_id(a)) + "-" + name(scen, node_id(b));
    }
  }
  out.push_back(links);
  std::string delivered = "delivered";
  for (const Delivery& d : g.delivered) {
    delivered += " " + std::to_string(d.data) + ":" + name(scen, d.origin) + "->" + name(scen, d.receiver);
  }
  out.push_back(delivered);

  for (const NodeState& n : g.nodes) {
    std::ostringstream o;
    o << "node " << name(scen, n.ip) << " sn=" << n.sn << " next_rreq_id=" << n.next_rreq_id << " seen={";
    bool first = true;
    for (const auto& [oip, id] : n.rreq_seen) {
      o << (first ? "" : ",") << name(scen, oip) << "#" << id;
      first = false;
    }
    o << "} store={";
    first = true;
    for (const auto& [dip, q] : n.store) {
      o << (first ? "" : ",") << name(scen, dip) << ":[";
      for (std::size_t i = 0; i < q.size(); ++i) o << (i ? "," : "") << q[i];
      o << "]";
      first = false;
    }
    o << "} buf=[";
    for (std::size_t i = 0; i < n.msg_buf.size(); ++i) o << (i ? " " : "") << format_message(n.msg_buf[i], scen);
    o << "]";
    out.push_back(o.str());
    for (const auto& [dip, e] : n.rt) {
      std::ostringstream r;
      r << "  rt[" << name(scen, n.ip) << "][" << name(scen, dip) << "] dsn=" << e.dsn
        << " known=" << e.dsn_known << " valid=" << e.valid << " hops=" << e.hops
        << " nhop=" << name(scen, e.nhop) << " precursors="
        << node_set(scen, std::vector<NodeId>(e.precursors.begin(), e.precursors.end()));
      out.push_back(r.str());
    }
  }
  return out;
}

std::string export_trace(const Trace& t, const Scenario& scen, const TraceExportInfo& info) {
  replay(t, scen);
  std::ostringstream o;
  o << "aodv-trace 1\n";
  o << "property: " << (info.property.empty() ? scen.property : info.property) << "\n";
  o << "verdict: " << (info.verdict.empty() ? "unknown" : info.verdict) << "\n";
  o << "lasso_start: " << (t.lasso_start ? std::to_string(*t.lasso_start) : "none") << "\n";
  o << "steps: " << t.steps.size() << "\n";
  o << "scenario:\n";
  std::istringstream echo(serialize_scenario(scen));
  for (std::string line; std::getline(echo, line);) o << "| " << line << "\n";
  auto state = [&](std::size_t i) {
    const GlobalState& g = t.state_at(i);
    o << "state " << i << "\n";
    o << "  hash " << hex64(state_hash(g)) << "\n";
    for (const std::string& l : snapshot_lines(g, scen)) o << "  " << l << "\n";
  };
  state(0);
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    o << "step " << i << ": " << format_label(t.steps[i].label, scen) << "\n";
    state(i + 1);
  }
  o << "end\n";
  return o.str();
}

ImportedTrace import_trace(std::string_view text) {
  ImportedTrace doc;
  std::string scenario_text;
  std::size_t expected_steps = 0;
  bool seen_magic = false, seen_end = false;
  std::istringstream in{std::string(text)};
  std::size_t line_no = 0;
  auto bad = [&](const std::string& what) {
    return ReplayMismatch("trace document line " + std::to_string(line_no) + ": " + what);
  };
  auto number = [&](std::string_view s) {
    std::size_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) throw bad("expected a number");
    return v;
  };

  for (std::string line; std::getline(in, line);) {
    ++line_no;
    std::string_view l = line;
    if (!seen_magic) {
      if (l != "aodv-trace 1") throw bad("not an aodv-trace document");
      seen_magic = true;
    } else if (l.starts_with("property: ")) {
      doc.property = std::string(l.substr(10));
    } else if (l.starts_with("verdict: ")) {
      doc.verdict = std::string(l.substr(9));
    } else if (l.starts_with("lasso_start: ")) {
      const std::string_view v = l.substr(13);
      if (v != "none") doc.lasso_start = number(v);
    } else if (l.starts_with("steps: ")) {
      expected_steps = number(l.substr(7));
    } else if (l == "scenario:") {
    } else if (l.starts_with("| ")) {
      scenario_text += std::string(l.substr(2)) + "\n";
    } else if (l.starts_with("state ")) {
      if (number(l.substr(6)) != doc.state_hashes.size()) throw bad("state index out of order");
      doc.state_hashes.push_back(0);
      doc.snapshots.emplace_back();
    } else if (l.starts_with("  hash ")) {
      if (doc.state_hashes.empty()) throw bad("hash outside of a state");
      doc.state_hashes.back() = std::stoull(std::string(l.substr(7)), nullptr, 16);
    } else if (l.starts_with("  ")) {
      if (doc.snapshots.empty()) throw bad("snapshot line outside of a state");
      doc.snapshots.back().emplace_back(l.substr(2));
    } else if (l.starts_with("step ")) {
      const auto colon = l.find(": ");
      if (colon == std::string_view::npos) throw bad("malformed step line");
      if (number(l.substr(5, colon - 5)) != doc.labels.size()) throw bad("step index out of order");
      doc.labels.emplace_back(l.substr(colon + 2));
    } else if (l == "end") {
      seen_end = true;
    } else if (!l.empty()) {
      throw bad("unrecognised line");
    }
  }
  if (!seen_end) throw ReplayMismatch("trace document is truncated");
  if (doc.labels.size() != expected_steps || doc.state_hashes.size() != expected_steps + 1) {
    throw ReplayMismatch("trace document step count mismatch");
  }
  try {
    doc.scenario = parse_scenario(scenario_text);
  } catch (const ScenarioError& e) {
    throw ReplayMismatch(std::string("embedded scenario: ") + e.what());
  }
  return doc;
}

Trace rebuild_trace(const ImportedTrace& doc) {
  Trace t;
  t.initial = initial_state(doc.scenario);
  if (state_hash(t.initial) != doc.state_hashes.at(0)) throw ReplayMismatch("initial state hash differs");
  GlobalState cur = t.initial;
  for (std::size_t i = 0; i < doc.labels.size(); ++i) {
    bool matched = false;
    for (Successor& s : successors(cur, doc.scenario)) {
      if (format_label(s.label, doc.scenario) != doc.labels[i]) continue;
      if (state_hash(s.state) != doc.state_hashes.at(i + 1)) {
        throw ReplayMismatch("state hash differs after step " + std::to_string(i));
      }
      cur = s.state;
      t.steps.push_back(TraceStep{std::move(s.label), std::move(s.state)});
      matched = true;
      break;
    }
    if (!matched) throw ReplayMismatch("step " + std::to_string(i) + " is not enabled: " + doc.labels[i]);
  }
  t.lasso_start = doc.lasso_start;
  replay(t, doc.scenario);
  return t;
}

}  // namespace aodv
