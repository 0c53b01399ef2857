#pragma once

// Rendering of traces as plain-text message sequence charts and as a
// line-oriented document that can be re-imported and replayed.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "aodv/checker.hpp"

namespace aodv {

class ReplayMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Re-executes the trace from the scenario's initial state and checks that
/// every step is an enabled transition producing the recorded state, and that
/// a lasso closes on the recorded state. Throws ReplayMismatch otherwise.
void replay(const Trace& t, const Scenario& scen);

/// One-line canonical text for a transition, e.g.
/// `a handles rrep; unicast a->s rrep(hops=1,dip=d,dsn=1,oip=s)`.
std::string format_label(const TransitionLabel& lbl, const Scenario& scen);
std::string format_message(const Message& m, const Scenario& scen);

/// Chart body for an arbitrary label sequence, without replay checks.
std::string render_rows(const std::vector<TransitionLabel>& rows, const Scenario& scen,
                        std::optional<std::size_t> lasso_start = std::nullopt);

/// Replays `t`, then renders it. One row per step, numbered from 0.
std::string render_msc(const Trace& t, const Scenario& scen);

/// Header and column rules only; used when there is no trace to show.
std::string render_msc_header(const Scenario& scen);

struct TraceExportInfo {
  std::string property;
  std::string verdict;  // "holds" or "refuted"
};

/// Self-contained document: scenario echo, per-step labels, state hashes and
/// routing-table snapshots of every node.
std::string export_trace(const Trace& t, const Scenario& scen, const TraceExportInfo& info = {});

struct ImportedTrace {
  Scenario scenario;
  std::string property;
  std::string verdict;
  std::optional<std::size_t> lasso_start;
  std::vector<std::string> labels;         // formatted labels, one per step
  std::vector<std::uint64_t> state_hashes;  // index 0 is the initial state
  /// Snapshot lines per state index (same indexing as state_hashes).
  std::vector<std::vector<std::string>> snapshots;
};

ImportedTrace import_trace(std::string_view text);

/// Rebuilds a Trace from an imported document by matching labels against the
/// successor relation. Throws ReplayMismatch if a label or hash does not match.
Trace rebuild_trace(const ImportedTrace& doc);

/// One line per routing-table entry and one summary line per node.
std::vector<std::string> snapshot_lines(const GlobalState& g, const Scenario& scen);

}  // namespace aodv
