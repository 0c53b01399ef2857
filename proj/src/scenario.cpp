#include "aodv/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "aodv/property.hpp"

namespace aodv {

ScenarioError::ScenarioError(std::size_t line, const std::string& what)
    : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

std::optional<NodeId> Scenario::find_node(std::string_view name) const {
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i] == name) return node_id(static_cast<unsigned>(i + 1));
  }
  return std::nullopt;
}

bool set_variant(VariantFlags& flags, std::string_view name, bool value) {
  if (name == "forward_all_rreps") flags.forward_all_rreps = value;
  else if (name == "dest_forwards_rreq") flags.dest_forwards_rreq = value;
  else return false;
  return true;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> words(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    const std::size_t b = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
    if (i > b) out.push_back(s.substr(b, i - b));
  }
  return out;
}

bool valid_name(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  return std::all_of(s.begin(), s.end(),
                     [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

bool reserved_name(std::string_view s) {
  return s == "rt" || s == "delivered" || s == "loop_free" || s == "tester_pc" || s == "true" ||
         s == "false";
}

bool parse_bool(std::string_view s, bool& out) {
  if (s == "true" || s == "yes" || s == "1") out = true;
  else if (s == "false" || s == "no" || s == "0") out = false;
  else return false;
  return true;
}

enum class Section { none, nodes, links, events, variants, property };

}  // namespace

Scenario parse_scenario(std::string_view text) {
  Scenario scen;
  Section section = Section::none;
  std::size_t line_no = 0;
  std::size_t property_line = 0;
  bool have_property = false;
  std::vector<std::pair<std::size_t, std::vector<std::string_view>>> pending_links, pending_events;

  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    const std::string_view line = trim(raw);
    if (line.empty()) continue;

    if (line.starts_with("name:")) {
      scen.name = std::string(trim(line.substr(5)));
      section = Section::none;
      continue;
    }
    static constexpr std::pair<std::string_view, Section> kHeaders[] = {
        {"nodes:", Section::nodes},       {"links:", Section::links},
        {"events:", Section::events},     {"variants:", Section::variants},
        {"property:", Section::property}};
    bool header = false;
    for (const auto& [h, sec] : kHeaders) {
      if (line.starts_with(h)) {
        section = sec;
        header = true;
        const std::string_view rest = trim(line.substr(h.size()));
        if (!rest.empty()) {
          if (sec != Section::property) throw ScenarioError(line_no, "unexpected text after '" + std::string(h) + "'");
          if (have_property) throw ScenarioError(line_no, "duplicate property");
          scen.property = std::string(rest);
          have_property = true;
          property_line = line_no;
        }
        break;
      }
    }
    if (header) continue;

    switch (section) {
      case Section::none:
        throw ScenarioError(line_no, "text outside of a section: '" + std::string(line) + "'");
      case Section::nodes:
        for (std::string_view w : words(line)) {
          if (!valid_name(w) || reserved_name(w)) throw ScenarioError(line_no, "invalid node name '" + std::string(w) + "'");
          if (scen.find_node(w)) throw ScenarioError(line_no, "duplicate node " + std::string(w));
          if (scen.nodes.size() >= 254) throw ScenarioError(line_no, "too many nodes");
          scen.nodes.emplace_back(w);
        }
        break;
      case Section::links: pending_links.emplace_back(line_no, words(line)); break;
      case Section::events: pending_events.emplace_back(line_no, words(line)); break;
      case Section::variants: {
        std::string_view key = line, value = "true";
        if (const auto colon = line.find(':'); colon != std::string_view::npos) {
          key = trim(line.substr(0, colon));
          value = trim(line.substr(colon + 1));
        }
        bool flag = false;
        if (!parse_bool(value, flag)) throw ScenarioError(line_no, "malformed variant value '" + std::string(value) + "'");
        if (key == "events_sequential_first") {
          scen.events_sequential_first = flag;
        } else if (!set_variant(scen.variants, key, flag)) {
          throw ScenarioError(line_no, "unknown variant " + std::string(key));
        }
        break;
      }
      case Section::property:
        if (have_property) throw ScenarioError(line_no, "duplicate property");
        scen.property = std::string(line);
        have_property = true;
        property_line = line_no;
        break;
    }
  }

  auto lookup = [&](std::size_t ln, std::string_view name) {
    auto id = scen.find_node(name);
    if (!id) throw ScenarioError(ln, "unknown node " + std::string(name));
    return *id;
  };

  for (const auto& [ln, w] : pending_links) {
    if (w.size() != 2) throw ScenarioError(ln, "malformed link (expected two node names)");
    const NodeId a = lookup(ln, w[0]);
    const NodeId b = lookup(ln, w[1]);
    if (a == b) throw ScenarioError(ln, "self-link " + std::string(w[0]));
    const auto key = std::minmax(a, b);
    for (const auto& [x, y] : scen.links) {
      if (std::minmax(x, y) == key) throw ScenarioError(ln, "duplicate link " + std::string(w[0]) + " " + std::string(w[1]));
    }
    scen.links.emplace_back(a, b);
  }

  Payload next_token = 1;
  for (const auto& [ln, w] : pending_events) {
    const std::string_view verb = w.empty() ? std::string_view{} : w[0];
    if (verb == "inject") {
      if (w.size() != 3 && w.size() != 4) throw ScenarioError(ln, "malformed event: inject <at> <dest> [data]");
      InjectPkt ev{lookup(ln, w[1]), lookup(ln, w[2]), next_token};
      if (ev.at == ev.dest) throw ScenarioError(ln, "malformed event: self-addressed inject");
      if (w.size() == 4) {
        auto [p, ec] = std::from_chars(w[3].data(), w[3].data() + w[3].size(), ev.data);
        if (ec != std::errc{} || p != w[3].data() + w[3].size()) throw ScenarioError(ln, "malformed event: bad payload '" + std::string(w[3]) + "'");
      }
      ++next_token;
      scen.events.emplace_back(ev);
    } else if (verb == "connect" || verb == "disconnect") {
      if (w.size() != 3) throw ScenarioError(ln, "malformed event: " + std::string(verb) + " <a> <b>");
      const NodeId a = lookup(ln, w[1]);
      const NodeId b = lookup(ln, w[2]);
      if (a == b) throw ScenarioError(ln, "malformed event: self-link " + std::string(w[1]));
      if (verb == "connect") scen.events.emplace_back(Connect{a, b});
      else scen.events.emplace_back(Disconnect{a, b});
    } else {
      throw ScenarioError(ln, "malformed event '" + std::string(verb) + "'");
    }
  }

  if (scen.nodes.empty()) throw ScenarioError(0, "no nodes declared");
  if (!have_property) throw ScenarioError(0, "missing property");
  try {
    parse_property(scen.property, scen.nodes);
  } catch (const PropertyError& e) {
    throw ScenarioError(property_line, std::string("property: ") + e.what());
  }
  return scen;
}

std::string serialize_scenario(const Scenario& scen) {
  std::ostringstream out;
  auto nm = [&](NodeId id) -> const std::string& { return scen.name_of(id); };
  if (!scen.name.empty()) out << "name: " << scen.name << "\n";
  out << "nodes:\n";
  for (const auto& n : scen.nodes) out << "  " << n << "\n";
  out << "links:\n";
  for (const auto& [a, b] : scen.links) out << "  " << nm(a) << " " << nm(b) << "\n";
  out << "events:\n";
  for (const TesterEvent& ev : scen.events) {
    if (const auto* inj = std::get_if<InjectPkt>(&ev)) {
      out << "  inject " << nm(inj->at) << " " << nm(inj->dest) << " " << inj->data << "\n";
    } else if (const auto* c = std::get_if<Connect>(&ev)) {
      out << "  connect " << nm(c->a) << " " << nm(c->b) << "\n";
    } else if (const auto* d = std::get_if<Disconnect>(&ev)) {
      out << "  disconnect " << nm(d->a) << " " << nm(d->b) << "\n";
    }
  }
  out << "variants:\n";
  out << "  forward_all_rreps: " << (scen.variants.forward_all_rreps ? "true" : "false") << "\n";
  out << "  dest_forwards_rreq: " << (scen.variants.dest_forwards_rreq ? "true" : "false") << "\n";
  if (scen.events_sequential_first) out << "  events_sequential_first: true\n";
  out << "property:\n  " << scen.property << "\n";
  return out.str();
}

namespace {

constexpr std::string_view kPaper1 = R"(# Failed route discovery: s and a both need a route to d over a line s-a-d.
name: paper1
nodes:
  s
  a
  d
links:
  s a
  a d
events:
  inject a d
  inject s d
variants:
  forward_all_rreps: false
  dest_forwards_rreq: false
property:
  A<> rt[s][d].nhop != 0
)";

constexpr std::string_view kPaper2 = R"(# Non-optimal route depending on the order in which requests reach d.
name: paper2
nodes:
  s
  a
  b
  c
  d
links:
  s a
  a d
  s b
  b c
  c d
events:
  inject s d
variants:
  forward_all_rreps: false
  dest_forwards_rreq: false
property:
  A<> rt[s][d].hops == 2
)";

constexpr std::string_view kPaper3 = R"(# Non-optimal route caused by the destination swallowing the request.
name: paper3
nodes:
  s
  a
  b
  c
  d
links:
  s d
  s b
  b c
  c a
  a d
events:
  inject s d
  inject a s
variants:
  forward_all_rreps: false
  dest_forwards_rreq: false
property:
  A<> rt[a][s].hops == 2
)";

}  // namespace

std::optional<std::string_view> bundled_scenario(std::string_view name) {
  if (name == "paper1") return kPaper1;
  if (name == "paper2") return kPaper2;
  if (name == "paper3") return kPaper3;
  return std::nullopt;
}

std::vector<std::string_view> bundled_scenario_names() { return {"paper1", "paper2", "paper3"}; }

}  // namespace aodv
