#include "kcd/sparse.hpp"

#include <algorithm>
#include <utility>

namespace kcd {

namespace {

void require(bool cond, const char* what) {
  if (!cond) throw std::invalid_argument(what);
}

}  // namespace

SparseMatrix::SparseMatrix(Index rows, Index cols,
                           std::vector<Index> row_offsets,
                           std::vector<Index> col_indices,
                           std::vector<double> values)
    : rows_(rows),
      cols_(cols),
      row_offsets_(std::move(row_offsets)),
      col_indices_(std::move(col_indices)),
      values_(std::move(values)) {
  require(rows_ >= 0 && cols_ >= 0, "sparse: negative shape");
  require(row_offsets_.size() == static_cast<std::size_t>(rows_) + 1,
          "sparse: row_offsets must have rows + 1 entries");
  require(row_offsets_.front() == 0, "sparse: row_offsets[0] must be 0");
  require(col_indices_.size() == values_.size(),
          "sparse: col_indices and values must have equal length");
  require(row_offsets_.back() == static_cast<Index>(values_.size()),
          "sparse: row_offsets must end at nnz");
  for (Index i = 0; i < rows_; ++i) {
    const Index begin = row_offsets_[i];
    const Index end = row_offsets_[i + 1];
    require(begin <= end, "sparse: row_offsets must be nondecreasing");
    for (Index k = begin; k < end; ++k) {
      require(col_indices_[k] >= 0 && col_indices_[k] < cols_,
              "sparse: column index out of range");
      if (k > begin) {
        require(col_indices_[k - 1] < col_indices_[k],
                "sparse: column indices must be strictly increasing per row");
      }
    }
  }
}

SparseMatrix SparseMatrix::from_dense(Index rows, Index cols,
                                      std::span<const double> row_major) {
  require(rows >= 0 && cols >= 0, "sparse: negative shape");
  require(row_major.size() == static_cast<std::size_t>(rows * cols),
          "sparse: dense buffer size mismatch");
  std::vector<Index> offsets(static_cast<std::size_t>(rows) + 1, 0);
  std::vector<Index> indices;
  std::vector<double> values;
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) {
      const double v = row_major[static_cast<std::size_t>(i * cols + j)];
      if (v != 0.0) {
        indices.push_back(j);
        values.push_back(v);
      }
    }
    offsets[static_cast<std::size_t>(i) + 1] =
        static_cast<Index>(values.size());
  }
  return SparseMatrix(rows, cols, std::move(offsets), std::move(indices),
                      std::move(values));
}

double SparseMatrix::density() const noexcept {
  if (rows_ == 0 || cols_ == 0) return 0.0;
  return static_cast<double>(nnz()) /
         (static_cast<double>(rows_) * static_cast<double>(cols_));
}

SparseRowView SparseMatrix::row(Index i) const {
  require(i >= 0 && i < rows_, "sparse: row index out of range");
  const auto begin = static_cast<std::size_t>(row_offsets_[i]);
  const auto len = static_cast<std::size_t>(row_offsets_[i + 1]) - begin;
  return SparseRowView{
      std::span<const Index>(col_indices_).subspan(begin, len),
      std::span<const double>(values_).subspan(begin, len), cols_};
}

Index SparseMatrix::row_nnz(Index i) const {
  require(i >= 0 && i < rows_, "sparse: row index out of range");
  return row_offsets_[i + 1] - row_offsets_[i];
}

SparseMatrix SparseMatrix::column_slice(Index col_begin, Index col_end) const {
  require(col_begin >= 0 && col_begin <= col_end && col_end <= cols_,
          "sparse: invalid column range");
  std::vector<Index> offsets(static_cast<std::size_t>(rows_) + 1, 0);
  std::vector<Index> indices;
  std::vector<double> values;
  for (Index i = 0; i < rows_; ++i) {
    const Index begin = row_offsets_[i];
    const Index end = row_offsets_[i + 1];
    const auto row_begin = col_indices_.begin() + begin;
    const auto row_end = col_indices_.begin() + end;
    const auto lo = std::lower_bound(row_begin, row_end, col_begin);
    const auto hi = std::lower_bound(lo, row_end, col_end);
    for (auto it = lo; it != hi; ++it) {
      const auto k = static_cast<std::size_t>(it - col_indices_.begin());
      indices.push_back(col_indices_[k]);
      values.push_back(values_[k]);
    }
    offsets[static_cast<std::size_t>(i) + 1] =
        static_cast<Index>(values.size());
  }
  return SparseMatrix(rows_, cols_, std::move(offsets), std::move(indices),
                      std::move(values));
}

std::vector<double> SparseMatrix::to_dense() const {
  std::vector<double> dense(static_cast<std::size_t>(rows_ * cols_), 0.0);
  for (Index i = 0; i < rows_; ++i) {
    for (Index k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
      dense[static_cast<std::size_t>(i * cols_ + col_indices_[k])] =
          values_[k];
    }
  }
  return dense;
}

bool operator==(const SparseMatrix& a, const SparseMatrix& b) {
  return a.rows_ == b.rows_ && a.cols_ == b.cols_ &&
         a.row_offsets_ == b.row_offsets_ && a.col_indices_ == b.col_indices_ &&
         a.values_ == b.values_;
}

}  // namespace kcd
