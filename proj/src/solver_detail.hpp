#pragma once

#include <algorithm>
#include <memory>

#include "kcd/sharding.hpp"
#include "kcd/solution.hpp"

namespace kcd::detail {

inline double clip(double x, double lo, double hi) {
  return std::min(std::max(x, lo), hi);
}

// Chooses the execution path for a solver: sharded when a partition or a
// ledger is present, plain local panels otherwise. `scratch` receives the
// derived partition when one has to be built; the provider borrows it, so it
// must outlive the provider.
inline std::unique_ptr<PanelProvider> make_provider(
    const KernelSpec& spec, const SparseMatrix& matrix,
    const SolveOptions& options, ColumnPartition& scratch) {
  if (options.partition) {
    return std::make_unique<ShardedPanelProvider>(
        spec, matrix, *options.partition, options.ledger);
  }
  if (options.ledger) {
    scratch =
        partition_columns(matrix.cols(), options.ledger->machine().shards);
    return std::make_unique<ShardedPanelProvider>(spec, matrix, scratch,
                                                  options.ledger);
  }
  return std::make_unique<LocalPanelProvider>(spec, matrix);
}

inline double l2_norm(std::span<const double> v) {
  double sum = 0.0;
  for (double x : v) sum += x * x;
  return std::sqrt(sum);
}

inline double relative_error_value(const Eigen::VectorXd& alpha,
                                   std::span<const double> reference) {
  double num = 0.0;
  double den = 0.0;
  for (Eigen::Index i = 0; i < alpha.size(); ++i) {
    const double d = alpha[i] - reference[static_cast<std::size_t>(i)];
    num += d * d;
    den += reference[static_cast<std::size_t>(i)] *
           reference[static_cast<std::size_t>(i)];
  }
  if (den == 0.0) {
    throw std::domain_error("relative error against a zero reference");
  }
  return std::sqrt(num) / std::sqrt(den);
}

}  // namespace kcd::detail
