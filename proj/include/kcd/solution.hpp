#pragma once

#include <Eigen/Core>
#include <optional>
#include <span>
#include <vector>

#include "kcd/costmodel.hpp"
#include "kcd/dataset.hpp"
#include "kcd/types.hpp"

namespace kcd {

enum class MetricKind { kDualityGap, kRelativeError, kDualObjective };

const char* metric_name(MetricKind kind);

// One traced measurement: the metric value after `iteration` updates.
struct ConvergenceMetric {
  MetricKind kind = MetricKind::kDualObjective;
  Index iteration = 0;
  double value = 0.0;
};

// Result of a solver run. `trace` is empty unless tracing was requested.
struct DualSolution {
  Eigen::VectorXd alpha;
  Index iterations_run = 0;
  std::vector<ConvergenceMetric> trace;
};

// Optional solver instrumentation. When `partition` or `ledger` is set the
// solver evaluates kernel panels through the sharded executor (if only the
// ledger is given, a balanced partition over its machine's shard count is
// derived) and charges communication and flops to the ledger. Tracing itself
// never charges the ledger.
struct SolveOptions {
  const ColumnPartition* partition = nullptr;
  CostLedger* ledger = nullptr;

  // Record the metric every `trace_interval` iterations (plus iteration 0 and
  // the final iterate); 0 disables tracing.
  Index trace_interval = 0;
  MetricKind metric = MetricKind::kDualObjective;

  // Reference solution for kRelativeError traces.
  std::span<const double> reference;

  // Stop early once a recorded metric value is <= this threshold.
  std::optional<double> stop_below;
};

namespace detail {

// Interval bookkeeping for traces: fires at iteration 0, then at every
// multiple of the interval, and at the final iteration.
class TraceGate {
 public:
  explicit TraceGate(Index interval) : interval_(interval) {}

  bool enabled() const noexcept { return interval_ > 0; }

  bool due(Index iteration, bool final_iterate) {
    if (interval_ <= 0) return false;
    if (iteration < next_ && !final_iterate) return false;
    while (next_ <= iteration) next_ += interval_;
    return true;
  }

 private:
  Index interval_;
  Index next_ = 0;
};

}  // namespace detail

}  // namespace kcd
