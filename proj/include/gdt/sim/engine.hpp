#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "gdt/outcome.hpp"
#include "gdt/sim/model.hpp"

namespace gdt::sim {

inline constexpr double kDefaultHorizon = 10000.0;

struct ObjectStats {
  std::string name;
  std::size_t entered = 0;
  std::size_t exited = 0;
  std::size_t max_content = 0;
  double busy_time = 0.0;     // processing, setup or travelling
  double blocked_time = 0.0;  // holding finished output nobody accepts
  double utilization = 0.0;   // busy_time / simulated_horizon
};

/// Item accounting. Separators spawn items and combiners consume them, so
///   items_created  = source_created + separator_spawned
///   items_departed = sink_absorbed + combiner_consumed
///   items_created  = items_departed + items_in_system
struct RunStats {
  std::size_t items_created = 0;
  std::size_t source_created = 0;
  std::size_t separator_spawned = 0;
  std::size_t items_departed = 0;
  std::size_t sink_absorbed = 0;
  std::size_t combiner_consumed = 0;
  std::size_t items_in_system = 0;
  std::size_t events_processed = 0;
  double simulated_horizon = 0.0;
  std::vector<ObjectStats> objects;

  double throughput() const {
    return simulated_horizon > 0 ? static_cast<double>(sink_absorbed) / simulated_horizon : 0.0;
  }
};

struct RunResult {
  ExecOutcome outcome;
  RunStats stats;
};

// State visible after every processed event.
struct Observation {
  double time = 0.0;
  std::size_t items_created = 0;
  std::size_t items_departed = 0;
  std::size_t items_in_system = 0;  // counted by walking every object
};

struct RunOptions {
  double horizon = kDefaultHorizon;
  std::uint64_t seed = 0;
  // When set, one line per event: time, object, event kind, item id.
  std::ostream* trace = nullptr;
  std::function<void(const Observation&)> observer;
  // Events allowed at a single instant before the run is declared stuck.
  std::size_t max_events_per_instant = 1'000'000;
};

/// Runs the model until the horizon (events at exactly the horizon still
/// fire). Failures are reported in RunResult::outcome; run never throws for
/// model behaviour.
RunResult run(const SimModel& model, const RunOptions& options = {});

/// parse -> build_model -> run, stopping at the first failure. Text with no
/// statements at all fails with ParseEmpty; any unrecognized statement fails
/// with ParseError.
RunResult execute(std::string_view script_text, const RunOptions& options = {});

ExecOutcome exec_outcome(std::string_view script_text, double horizon = kDefaultHorizon,
                         std::uint64_t seed = 0);

// {"outcome": ..., "stats": {...}} as pretty-printed JSON.
std::string stats_json(const RunResult& result);

}  // namespace gdt::sim
