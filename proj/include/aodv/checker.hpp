#pragma once

// Explicit-state exploration of a scenario's reachable graph and verification
// of A<>, A[] and E<> properties with counterexample or witness extraction.

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "aodv/net_model.hpp"
#include "aodv/property.hpp"

namespace aodv {

inline constexpr std::size_t kDefaultMaxStates = 5'000'000;

struct SearchStats {
  std::size_t reachable_states{0};
  std::size_t transitions{0};
  std::chrono::duration<double> elapsed{0};
};

struct TraceStep {
  TransitionLabel label;
  GlobalState state;  // state reached by this step
};

/// A path from the initial state. If lasso_start is set, the path ends in a
/// cycle: the last state equals the state after step `*lasso_start - 1`
/// (or the initial state when lasso_start is 0), i.e. state index lasso_start.
struct Trace {
  GlobalState initial;
  std::vector<TraceStep> steps;
  std::optional<std::size_t> lasso_start;

  /// State index i: 0 is the initial state, i > 0 the state after step i-1.
  const GlobalState& state_at(std::size_t i) const { return i == 0 ? initial : steps.at(i - 1).state; }
  const GlobalState& final_state() const { return steps.empty() ? initial : steps.back().state; }
};

enum class Outcome : std::uint8_t { holds, refuted };

struct Verdict {
  Outcome result{Outcome::holds};
  std::optional<Trace> trace;
  SearchStats stats;
};

class StateLimitExceeded : public std::runtime_error {
 public:
  StateLimitExceeded(std::size_t limit, SearchStats partial);
  const SearchStats& partial() const { return partial_; }

 private:
  SearchStats partial_;
};

/// Called on every explored transition (pre-state, label, post-state).
using TransitionObserver =
    std::function<void(const GlobalState&, const TransitionLabel&, const GlobalState&)>;

struct CheckOptions {
  std::size_t max_states{kDefaultMaxStates};
  TransitionObserver on_transition;
};

SearchStats explore(const Scenario& scen, const CheckOptions& opts = {});

/// Holds with a witness ending in the first state (breadth-first) satisfying
/// pred; Refuted without a trace if none is reachable.
Verdict check_ef(const Scenario& scen, const Predicate& pred, const CheckOptions& opts = {});

/// Holds iff pred is true in every reachable state; otherwise Refuted with a
/// shortest path to a violating state.
Verdict check_ag(const Scenario& scen, const Predicate& pred, const CheckOptions& opts = {});

/// Holds iff every maximal path visits a pred-state. Refutations end in a
/// terminal state or close a lasso, with pred false throughout.
Verdict check_af(const Scenario& scen, const Predicate& pred, const CheckOptions& opts = {});

Verdict check_property(const Scenario& scen, const Property& prop, const CheckOptions& opts = {});

}  // namespace aodv
