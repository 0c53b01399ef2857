#include "aodv/checker.hpp"

#include <deque>
#include <string>
#include <unordered_map>

namespace aodv {

StateLimitExceeded::StateLimitExceeded(std::size_t limit, SearchStats partial)
    : std::runtime_error("state limit of " + std::to_string(limit) + " exceeded after " +
                         std::to_string(partial.reachable_states) + " states and " +
                         std::to_string(partial.transitions) + " transitions"),
      partial_(partial) {}

namespace {

using Clock = std::chrono::steady_clock;
using StateId = std::uint32_t;
inline constexpr StateId kNoState = ~StateId{0};

// Hash-indexed store of full states; ids are dense in discovery order.
class StateStore {
 public:
  StateStore(std::size_t limit, Clock::time_point start) : limit_(limit), start_(start) {}

  /// Returns (id, inserted).
  std::pair<StateId, bool> intern(GlobalState g, SearchStats& stats) {
    auto [it, inserted] = index_.try_emplace(std::move(g), static_cast<StateId>(by_id_.size()));
    if (inserted) {
      by_id_.push_back(&it->first);
      stats.reachable_states = by_id_.size();
      if (by_id_.size() > limit_) {
        stats.elapsed = Clock::now() - start_;
        throw StateLimitExceeded(limit_, stats);
      }
    }
    return {it->second, inserted};
  }

  StateId find(const GlobalState& g) const {
    auto it = index_.find(g);
    return it == index_.end() ? kNoState : it->second;
  }

  const GlobalState& at(StateId id) const { return *by_id_[id]; }
  std::size_t size() const { return by_id_.size(); }

 private:
  std::size_t limit_;
  Clock::time_point start_;
  std::unordered_map<GlobalState, StateId, StateHasher> index_;
  std::vector<const GlobalState*> by_id_;
};

void observe(const CheckOptions& opts, const GlobalState& pre, const Successor& s) {
  if (opts.on_transition) opts.on_transition(pre, s.label, s.state);
}

// Breadth-first search that stops at the first state satisfying `stop`.
// Returns the path to it, or nullopt after exhausting the reachable graph.
template <typename Stop>
std::optional<Trace> bfs(const Scenario& scen, const CheckOptions& opts, SearchStats& stats, Stop stop) {
  const auto start = Clock::now();
  StateStore store(opts.max_states, start);
  std::vector<StateId> parent;

  GlobalState init = initial_state(scen);
  store.intern(init, stats);
  parent.push_back(kNoState);

  auto path_to = [&](StateId target) {
    std::vector<StateId> chain;
    for (StateId s = target; s != kNoState; s = parent[s]) chain.push_back(s);
    Trace t;
    t.initial = store.at(chain.back());
    for (auto it = chain.rbegin(); it + 1 != chain.rend(); ++it) {
      const GlobalState& child = store.at(*(it + 1));
      for (Successor& s : successors(store.at(*it), scen)) {
        if (s.state == child) {
          t.steps.push_back(TraceStep{std::move(s.label), std::move(s.state)});
          break;
        }
      }
    }
    return t;
  };

  std::optional<Trace> found;
  if (stop(store.at(0))) {
    found = path_to(0);
  } else {
    std::deque<StateId> queue{0};
    while (!queue.empty() && !found) {
      const StateId cur = queue.front();
      queue.pop_front();
      for (Successor& s : successors(store.at(cur), scen)) {
        ++stats.transitions;
        observe(opts, store.at(cur), s);
        auto [id, inserted] = store.intern(std::move(s.state), stats);
        if (!inserted) continue;
        parent.push_back(cur);
        if (stop(store.at(id))) {
          found = path_to(id);
          break;
        }
        queue.push_back(id);
      }
    }
  }
  stats.elapsed = Clock::now() - start;
  return found;
}

}  // namespace

SearchStats explore(const Scenario& scen, const CheckOptions& opts) {
  SearchStats stats;
  bfs(scen, opts, stats, [](const GlobalState&) { return false; });
  return stats;
}

Verdict check_ef(const Scenario& scen, const Predicate& pred, const CheckOptions& opts) {
  Verdict v;
  v.trace = bfs(scen, opts, v.stats, [&](const GlobalState& g) { return eval_pred(pred, g); });
  v.result = v.trace ? Outcome::holds : Outcome::refuted;
  return v;
}

Verdict check_ag(const Scenario& scen, const Predicate& pred, const CheckOptions& opts) {
  Verdict v;
  v.trace = bfs(scen, opts, v.stats, [&](const GlobalState& g) { return !eval_pred(pred, g); });
  v.result = v.trace ? Outcome::refuted : Outcome::holds;
  return v;
}

Verdict check_af(const Scenario& scen, const Predicate& pred, const CheckOptions& opts) {
  // Search for a maximal path on which pred never holds (EG !pred): a
  // depth-first walk restricted to !pred states that reports the first
  // terminal state or back edge it meets.
  Verdict v;
  const auto start = Clock::now();
  StateStore store(opts.max_states, start);
  enum : std::uint8_t { kOnStack = 1, kDone = 2 };
  std::vector<std::uint8_t> colour;

  struct Frame {
    StateId id;
    std::vector<Successor> succ;
    std::size_t next{0};
  };
  std::vector<Frame> stack;

  auto finish = [&](std::optional<std::size_t> lasso, const Successor* closing) {
    Trace t;
    t.initial = store.at(stack.front().id);
    for (std::size_t i = 0; i + 1 < stack.size(); ++i) {
      const Successor& s = stack[i].succ[stack[i].next - 1];
      t.steps.push_back(TraceStep{s.label, s.state});
    }
    if (closing != nullptr) t.steps.push_back(TraceStep{closing->label, closing->state});
    t.lasso_start = lasso;
    v.result = Outcome::refuted;
    v.trace = std::move(t);
  };

  GlobalState init = initial_state(scen);
  if (eval_pred(pred, init)) {
    store.intern(std::move(init), v.stats);
    v.stats.elapsed = Clock::now() - start;
    return v;
  }
  store.intern(std::move(init), v.stats);
  colour.push_back(kOnStack);
  stack.push_back(Frame{0, successors(store.at(0), scen)});

  while (!stack.empty()) {
    Frame& top = stack.back();
    if (top.succ.empty()) {
      finish(std::nullopt, nullptr);
      break;
    }
    if (top.next == top.succ.size()) {
      colour[top.id] = kDone;
      stack.pop_back();
      continue;
    }
    const Successor& s = top.succ[top.next++];
    ++v.stats.transitions;
    observe(opts, store.at(top.id), s);
    if (eval_pred(pred, s.state)) continue;

    const StateId known = store.find(s.state);
    if (known != kNoState) {
      if (colour[known] == kOnStack) {
        std::size_t pos = 0;
        while (stack[pos].id != known) ++pos;
        finish(pos, &s);
        break;
      }
      continue;
    }
    auto [id, inserted] = store.intern(s.state, v.stats);
    colour.push_back(kOnStack);
    std::vector<Successor> next = successors(store.at(id), scen);
    stack.push_back(Frame{id, std::move(next)});
  }

  v.stats.elapsed = Clock::now() - start;
  return v;
}

Verdict check_property(const Scenario& scen, const Property& prop, const CheckOptions& opts) {
  switch (prop.quantifier) {
    case Quantifier::af: return check_af(scen, *prop.pred, opts);
    case Quantifier::ag: return check_ag(scen, *prop.pred, opts);
    case Quantifier::ef: return check_ef(scen, *prop.pred, opts);
  }
  return {};
}

}  // namespace aodv
