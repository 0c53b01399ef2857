#include "aodv/property.hpp"

#include <cctype>
#include <charconv>
#include <optional>

namespace aodv {

PropertyError::PropertyError(std::size_t position, const std::string& what)
    : std::runtime_error("at position " + std::to_string(position) + ": " + what), position_(position) {}

const char* quantifier_text(Quantifier q) {
  switch (q) {
    case Quantifier::af: return "A<>";
    case Quantifier::ag: return "A[]";
    case Quantifier::ef: return "E<>";
  }
  return "?";
}

PredicatePtr make_literal(std::int64_t v) {
  return std::make_shared<const Predicate>(Predicate{pred::Literal{v}});
}

namespace {

enum class Tok { ident, number, lparen, rparen, lbracket, rbracket, dot, comma, op, end };

struct Token {
  Tok kind{Tok::end};
  std::string text;
  std::size_t pos{0};
};

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
      out.push_back({Tok::ident, std::string(s.substr(start, i - start)), start});
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      out.push_back({Tok::number, std::string(s.substr(start, i - start)), start});
      continue;
    }
    auto two = s.substr(i, 2);
    if (two == "==" || two == "!=" || two == "<=" || two == ">=" || two == "&&" || two == "||") {
      out.push_back({Tok::op, std::string(two), start});
      i += 2;
      continue;
    }
    switch (c) {
      case '(': out.push_back({Tok::lparen, "(", start}); break;
      case ')': out.push_back({Tok::rparen, ")", start}); break;
      case '[': out.push_back({Tok::lbracket, "[", start}); break;
      case ']': out.push_back({Tok::rbracket, "]", start}); break;
      case '.': out.push_back({Tok::dot, ".", start}); break;
      case ',': out.push_back({Tok::comma, ",", start}); break;
      case '<': case '>': case '!': out.push_back({Tok::op, std::string(1, c), start}); break;
      default: throw PropertyError(start, std::string("unexpected character '") + c + "'");
    }
    ++i;
  }
  out.push_back({Tok::end, "", s.size()});
  return out;
}

class Parser {
 public:
  Parser(std::vector<Token> toks, const std::vector<std::string>& nodes)
      : toks_(std::move(toks)), nodes_(nodes) {}

  PredicatePtr parse_all() {
    PredicatePtr p = parse_or();
    if (peek().kind != Tok::end) fail("unexpected '" + peek().text + "'");
    return p;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  Token take() { return toks_[pos_++]; }
  [[noreturn]] void fail(const std::string& msg) const { throw PropertyError(peek().pos, msg); }

  bool accept_op(std::string_view op) {
    if (peek().kind == Tok::op && peek().text == op) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(Tok kind, const char* what) {
    if (peek().kind != kind) fail(std::string("expected '") + what + "'");
    ++pos_;
  }

  static PredicatePtr binary(BinaryOp op, PredicatePtr l, PredicatePtr r) {
    return std::make_shared<const Predicate>(Predicate{pred::Binary{op, std::move(l), std::move(r)}});
  }

  PredicatePtr parse_or() {
    PredicatePtr lhs = parse_and();
    while (accept_op("||")) lhs = binary(BinaryOp::lor, lhs, parse_and());
    return lhs;
  }

  PredicatePtr parse_and() {
    PredicatePtr lhs = parse_cmp();
    while (accept_op("&&")) lhs = binary(BinaryOp::land, lhs, parse_cmp());
    return lhs;
  }

  PredicatePtr parse_cmp() {
    PredicatePtr lhs = parse_unary();
    static constexpr std::pair<std::string_view, BinaryOp> kOps[] = {
        {"==", BinaryOp::eq}, {"!=", BinaryOp::ne}, {"<=", BinaryOp::le},
        {">=", BinaryOp::ge}, {"<", BinaryOp::lt},  {">", BinaryOp::gt}};
    for (const auto& [text, op] : kOps) {
      if (accept_op(text)) return binary(op, lhs, parse_unary());
    }
    return lhs;
  }

  PredicatePtr parse_unary() {
    if (accept_op("!")) {
      return std::make_shared<const Predicate>(Predicate{pred::Not{parse_unary()}});
    }
    return parse_primary();
  }

  NodeId resolve(const Token& t) const {
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      if (nodes_[i] == t.text) return node_id(static_cast<unsigned>(i + 1));
    }
    throw PropertyError(t.pos, "unknown node " + t.text);
  }

  NodeId node_ref() {
    if (peek().kind != Tok::ident) fail("expected node name");
    return resolve(take());
  }

  PredicatePtr rt_field(NodeId owner) {
    expect(Tok::lbracket, "[");
    NodeId dest = node_ref();
    expect(Tok::rbracket, "]");
    return field_suffix(owner, dest);
  }

  PredicatePtr field_suffix(NodeId owner, NodeId dest) {
    expect(Tok::dot, ".");
    if (peek().kind != Tok::ident) fail("expected field name");
    const Token f = take();
    RtField field;
    if (f.text == "nhop") field = RtField::nhop;
    else if (f.text == "hops") field = RtField::hops;
    else if (f.text == "dsn") field = RtField::dsn;
    else if (f.text == "valid") field = RtField::valid;
    else throw PropertyError(f.pos, "unknown field " + f.text);
    return std::make_shared<const Predicate>(Predicate{pred::RtAtom{owner, dest, field}});
  }

  PredicatePtr parse_primary() {
    const Token t = peek();
    switch (t.kind) {
      case Tok::lparen: {
        ++pos_;
        PredicatePtr inner = parse_or();
        expect(Tok::rparen, ")");
        return inner;
      }
      case Tok::number: {
        ++pos_;
        std::int64_t v = 0;
        std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        return make_literal(v);
      }
      case Tok::ident: break;
      default: fail(t.kind == Tok::end ? "unexpected end of input" : "unexpected '" + t.text + "'");
    }
    ++pos_;
    if (t.text == "true") return make_literal(1);
    if (t.text == "false") return make_literal(0);
    if (t.text == "loop_free") return std::make_shared<const Predicate>(Predicate{pred::LoopFree{}});
    if (t.text == "tester_pc") return std::make_shared<const Predicate>(Predicate{pred::TesterPc{}});
    if (t.text == "delivered") {
      expect(Tok::lparen, "(");
      NodeId recv = node_ref();
      expect(Tok::comma, ",");
      NodeId origin = node_ref();
      expect(Tok::rparen, ")");
      return std::make_shared<const Predicate>(Predicate{pred::DeliveredAtom{recv, origin}});
    }
    if (t.text == "rt") {
      expect(Tok::lbracket, "[");
      NodeId owner = node_ref();
      expect(Tok::rbracket, "]");
      return rt_field(owner);
    }
    const NodeId id = resolve(t);
    if (peek().kind == Tok::dot) {
      // dotted alias: owner.rt[dest].field
      ++pos_;
      if (peek().kind != Tok::ident || peek().text != "rt") fail("expected 'rt'");
      ++pos_;
      return rt_field(id);
    }
    return make_literal(to_int(id));
  }

  std::vector<Token> toks_;
  std::size_t pos_{0};
  const std::vector<std::string>& nodes_;
};

}  // namespace

PredicatePtr parse_predicate(std::string_view text, const std::vector<std::string>& nodes) {
  return Parser(tokenize(text), nodes).parse_all();
}

Property parse_property(std::string_view text, const std::vector<std::string>& nodes) {
  std::size_t i = 0;
  while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  const std::string_view q = text.substr(i, 3);
  Property p;
  if (q == "A<>") p.quantifier = Quantifier::af;
  else if (q == "A[]") p.quantifier = Quantifier::ag;
  else if (q == "E<>") p.quantifier = Quantifier::ef;
  else throw PropertyError(i, "expected quantifier A<>, A[] or E<>");

  const std::size_t offset = i + 3;
  try {
    p.pred = parse_predicate(text.substr(offset), nodes);
  } catch (const PropertyError& e) {
    // Re-anchor the position to the full property text.
    const std::string what = e.what();
    const auto colon = what.find(": ");
    throw PropertyError(e.position() + offset, colon == std::string::npos ? what : what.substr(colon + 2));
  }
  return p;
}

bool loop_free(const GlobalState& g) {
  const std::size_t n = g.nodes.size();
  for (unsigned d = 1; d <= n; ++d) {
    const NodeId dest = node_id(d);
    // Follow next hops from every node; a walk longer than n revisits a node.
    for (const NodeState& start : g.nodes) {
      NodeId cur = start.ip;
      for (std::size_t steps = 0;; ++steps) {
        if (cur == dest || cur == kNoNode || to_int(cur) > n) break;
        const RouteEntry* r = find_valid_route(g.node(cur).rt, dest);
        if (r == nullptr) break;
        if (steps >= n) return false;
        cur = r->nhop;
      }
    }
  }
  return true;
}

std::int64_t eval_value(const Predicate& p, const GlobalState& g) {
  struct Eval {
    const GlobalState& g;
    std::int64_t operator()(const pred::Literal& l) const { return l.value; }
    std::int64_t operator()(const pred::RtAtom& a) const {
      const RouteEntry* r = find_route(g.node(a.owner).rt, a.dest);
      if (r == nullptr) return 0;
      switch (a.field) {
        case RtField::nhop: return to_int(r->nhop);
        case RtField::hops: return r->hops;
        case RtField::dsn: return r->dsn;
        case RtField::valid: return r->valid ? 1 : 0;
      }
      return 0;
    }
    std::int64_t operator()(const pred::DeliveredAtom& a) const {
      for (const Delivery& d : g.delivered) {
        if (d.receiver == a.receiver && d.origin == a.origin) return 1;
      }
      return 0;
    }
    std::int64_t operator()(const pred::LoopFree&) const { return loop_free(g) ? 1 : 0; }
    std::int64_t operator()(const pred::TesterPc&) const { return g.tester_pc; }
    std::int64_t operator()(const pred::Not& n) const { return eval_value(*n.operand, g) == 0 ? 1 : 0; }
    std::int64_t operator()(const pred::Binary& b) const {
      if (b.op == BinaryOp::land) return eval_value(*b.lhs, g) != 0 && eval_value(*b.rhs, g) != 0;
      if (b.op == BinaryOp::lor) return eval_value(*b.lhs, g) != 0 || eval_value(*b.rhs, g) != 0;
      const std::int64_t l = eval_value(*b.lhs, g);
      const std::int64_t r = eval_value(*b.rhs, g);
      switch (b.op) {
        case BinaryOp::eq: return l == r;
        case BinaryOp::ne: return l != r;
        case BinaryOp::lt: return l < r;
        case BinaryOp::le: return l <= r;
        case BinaryOp::gt: return l > r;
        case BinaryOp::ge: return l >= r;
        default: return 0;
      }
    }
  };
  return std::visit(Eval{g}, p.node);
}

bool eval_pred(const Predicate& p, const GlobalState& g) { return eval_value(p, g) != 0; }

}  // namespace aodv
