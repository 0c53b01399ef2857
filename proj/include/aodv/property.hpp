#pragma once

// State predicates over routing tables and the three temporal quantifiers
// A<> (AF), A[] (AG) and E<> (EF).

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "aodv/net_model.hpp"

namespace aodv {

enum class RtField : std::uint8_t { nhop, hops, dsn, valid };

enum class BinaryOp : std::uint8_t { eq, ne, lt, le, gt, ge, land, lor };

struct Predicate;
using PredicatePtr = std::shared_ptr<const Predicate>;

namespace pred {

struct Literal {
  std::int64_t value{0};
};
/// rt[owner][dest].field; absent entries read as 0 (or false for `valid`).
struct RtAtom {
  NodeId owner{kNoNode};
  NodeId dest{kNoNode};
  RtField field{RtField::nhop};
};
struct DeliveredAtom {
  NodeId receiver{kNoNode};
  NodeId origin{kNoNode};
};
/// True iff, for every destination, the valid next-hop graph is acyclic.
struct LoopFree {};
struct TesterPc {};
struct Not {
  PredicatePtr operand;
};
struct Binary {
  BinaryOp op{BinaryOp::eq};
  PredicatePtr lhs;
  PredicatePtr rhs;
};

}  // namespace pred

struct Predicate {
  std::variant<pred::Literal, pred::RtAtom, pred::DeliveredAtom, pred::LoopFree, pred::TesterPc,
               pred::Not, pred::Binary>
      node;
};

enum class Quantifier : std::uint8_t { af, ag, ef };

struct Property {
  Quantifier quantifier{Quantifier::af};
  PredicatePtr pred;
};

class PropertyError : public std::runtime_error {
 public:
  PropertyError(std::size_t position, const std::string& what);
  /// 0-based character offset into the property text.
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Parses `("A<>" | "A[]" | "E<>") expr`. Node names resolve against `nodes`
/// (name i has NodeId i+1). The dotted form `s.rt[d].nhop` is accepted as an
/// alias for `rt[s][d].nhop`.
Property parse_property(std::string_view text, const std::vector<std::string>& nodes);

/// Parses a bare predicate without a quantifier.
PredicatePtr parse_predicate(std::string_view text, const std::vector<std::string>& nodes);

std::int64_t eval_value(const Predicate& p, const GlobalState& g);
bool eval_pred(const Predicate& p, const GlobalState& g);

bool loop_free(const GlobalState& g);

const char* quantifier_text(Quantifier q);

PredicatePtr make_literal(std::int64_t v);

}  // namespace aodv
