#include "kcd/sharding.hpp"

namespace kcd {

ShardedPanelProvider::ShardedPanelProvider(KernelSpec spec,
                                           const SparseMatrix& matrix,
                                           const ColumnPartition& partition,
                                           CostLedger* ledger)
    : spec_(spec), rows_(matrix.rows()), ledger_(ledger) {
  spec_.validate();
  if (partition.columns != matrix.cols()) {
    throw std::invalid_argument(
        "ShardedPanelProvider: partition does not match matrix columns");
  }
  if (partition.ranges.empty()) {
    throw std::invalid_argument("ShardedPanelProvider: empty partition");
  }
  slices_.reserve(partition.ranges.size());
  for (const auto& [begin, end] : partition.ranges) {
    slices_.push_back(matrix.column_slice(begin, end));
  }
  scatter_.assign(static_cast<std::size_t>(matrix.cols()), 0.0);
  shard_flops_.assign(slices_.size(), 0.0);
  if (spec_.kind == KernelKind::kRbf) {
    row_norms_.assign(static_cast<std::size_t>(rows_), 0.0);
    std::vector<double> norm_flops(slices_.size(), 0.0);
    for (std::size_t p = 0; p < slices_.size(); ++p) {
      const std::vector<double> partial =
          detail::row_squared_norms(slices_[p]);
      for (std::size_t i = 0; i < partial.size(); ++i) {
        row_norms_[i] += partial[i];
      }
      norm_flops[p] = static_cast<double>(slices_[p].nnz());
    }
    if (ledger_) ledger_->charge_panel_flops(norm_flops, 0.0);
  }
}

KernelPanel ShardedPanelProvider::panel(std::span<const Index> rows) {
  detail::check_panel_rows(rows, rows_);
  KernelPanel result;
  result.sampled_rows.assign(rows.begin(), rows.end());
  result.values =
      Eigen::MatrixXd::Zero(rows_, static_cast<Eigen::Index>(rows.size()));
  for (std::size_t p = 0; p < slices_.size(); ++p) {
    shard_flops_[p] =
        detail::accumulate_dot_panel(slices_[p], rows, result.values,
                                     scatter_);
  }
  if (ledger_) {
    const double redundant =
        spec_.nonlinear() ? ledger_->machine().mu *
                                static_cast<double>(rows_) *
                                static_cast<double>(rows.size())
                          : 0.0;
    ledger_->charge_panel_flops(shard_flops_, redundant);
    ledger_->charge_allreduce(
        static_cast<std::uint64_t>(rows.size()) *
            static_cast<std::uint64_t>(rows_),
        static_cast<Index>(slices_.size()));
  }
  detail::apply_kernel_map(spec_, rows, row_norms_, result.values);
  return result;
}

KernelPanel sharded_panel(const KernelSpec& spec, const SparseMatrix& matrix,
                          std::span<const Index> rows,
                          const ColumnPartition& partition,
                          CostLedger& ledger) {
  ShardedPanelProvider provider(spec, matrix, partition, &ledger);
  return provider.panel(rows);
}

}  // namespace kcd
