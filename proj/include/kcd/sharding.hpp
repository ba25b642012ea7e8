#pragma once

#include "kcd/kernel.hpp"

namespace kcd {

// Panel provider simulating a 1D-column data layout: each shard owns a
// contiguous column slice and computes partial inner-product panels, which
// are sum-reduced in shard-index order before the nonlinear map is applied
// once. The ledger (optional) is charged per panel: per-shard GEMM flops at
// the critical path, the redundant nonlinear map, and one allreduce of
// |rows| * data_rows words in ceil(log2 P) rounds.
//
// For the RBF kernel, per-row squared norms are folded across shards once at
// construction. That fold is charged as one-time kernel-compute flops but not
// as communication: the model treats the static norm vector like the
// replicated vectors y and alpha, and the per-iteration communication volume
// stays exactly |rows| * data_rows words per panel.
class ShardedPanelProvider final : public PanelProvider {
 public:
  ShardedPanelProvider(KernelSpec spec, const SparseMatrix& matrix,
                       const ColumnPartition& partition, CostLedger* ledger);

  KernelPanel panel(std::span<const Index> rows) override;
  Index data_rows() const override { return rows_; }
  Index shards() const noexcept { return static_cast<Index>(slices_.size()); }

 private:
  KernelSpec spec_;
  Index rows_ = 0;
  std::vector<SparseMatrix> slices_;
  std::vector<double> row_norms_;
  std::vector<double> scatter_;
  std::vector<double> shard_flops_;
  CostLedger* ledger_;
};

// One-shot convenience; constructing a provider amortizes slicing and norm
// precomputation across panels, which this helper cannot.
KernelPanel sharded_panel(const KernelSpec& spec, const SparseMatrix& matrix,
                          std::span<const Index> rows,
                          const ColumnPartition& partition,
                          CostLedger& ledger);

}  // namespace kcd
