#include "kcd/solution.hpp"

namespace kcd {

const char* metric_name(MetricKind kind) {
  switch (kind) {
    case MetricKind::kDualityGap:
      return "duality_gap";
    case MetricKind::kRelativeError:
      return "relative_error";
    case MetricKind::kDualObjective:
      return "dual_objective";
  }
  throw std::invalid_argument("metric_name: unknown metric kind");
}

}  // namespace kcd
