#pragma once

#include <span>
#include <vector>

#include "kcd/types.hpp"

namespace kcd {

// One row of a CSR matrix. `indices` are 0-based global column ids, strictly
// increasing; `values` is parallel to `indices`; `cols` is the logical row
// dimension (not the stored entry count).
struct SparseRowView {
  std::span<const Index> indices;
  std::span<const double> values;
  Index cols = 0;

  Index nnz() const noexcept { return static_cast<Index>(indices.size()); }
};

// Immutable sparse matrix in compressed-sparse-row form. Invariants enforced
// at construction: offsets nondecreasing with offsets[0] == 0 and
// offsets[rows] == nnz, every column id in [0, cols), column ids strictly
// increasing within each row. Stored zeros are permitted.
class SparseMatrix {
 public:
  SparseMatrix() = default;

  SparseMatrix(Index rows, Index cols, std::vector<Index> row_offsets,
               std::vector<Index> col_indices, std::vector<double> values);

  // Builds CSR from a dense row-major buffer, dropping exact zeros.
  static SparseMatrix from_dense(Index rows, Index cols,
                                 std::span<const double> row_major);

  Index rows() const noexcept { return rows_; }
  Index cols() const noexcept { return cols_; }
  Index nnz() const noexcept { return static_cast<Index>(values_.size()); }

  // Fraction of stored entries: nnz / (rows * cols); 0 for an empty shape.
  double density() const noexcept;

  SparseRowView row(Index i) const;
  Index row_nnz(Index i) const;

  std::span<const Index> row_offsets() const noexcept { return row_offsets_; }
  std::span<const Index> col_indices() const noexcept { return col_indices_; }
  std::span<const double> values() const noexcept { return values_; }

  // Restriction to columns [col_begin, col_end). Column ids stay global and
  // the column dimension is unchanged, so dot products against slices of a
  // partition sum to the full-row dot product.
  SparseMatrix column_slice(Index col_begin, Index col_end) const;

  // Dense row-major copy, mostly for tests and tiny oracles.
  std::vector<double> to_dense() const;

  friend bool operator==(const SparseMatrix& a, const SparseMatrix& b);

 private:
  Index rows_ = 0;
  Index cols_ = 0;
  std::vector<Index> row_offsets_ = {0};
  std::vector<Index> col_indices_;
  std::vector<double> values_;
};

}  // namespace kcd
