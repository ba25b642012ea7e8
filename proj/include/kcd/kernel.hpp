#pragma once

#include <Eigen/Core>
#include <memory>
#include <span>
#include <vector>

#include "kcd/costmodel.hpp"
#include "kcd/dataset.hpp"
#include "kcd/sparse.hpp"
#include "kcd/types.hpp"

namespace kcd {

enum class KernelKind { kLinear, kPolynomial, kRbf };

// Kernel function description. Only the parameters of the active kind are
// meaningful; validate() checks exactly those (polynomial: c >= 0 and integer
// degree >= 2, rbf: sigma > 0).
struct KernelSpec {
  KernelKind kind = KernelKind::kLinear;
  double c = 0.0;
  Index d = 3;
  double sigma = 1.0;

  static KernelSpec linear();
  static KernelSpec polynomial(double c, Index d);
  static KernelSpec rbf(double sigma);

  bool nonlinear() const noexcept { return kind != KernelKind::kLinear; }
  void validate() const;
};

const char* kernel_name(KernelKind kind);

// Dense m x k slice of the implicit kernel matrix: column j holds the kernel
// of every data row against row sampled_rows[j].
struct KernelPanel {
  Eigen::MatrixXd values;
  std::vector<Index> sampled_rows;
};

// Kernel of two rows of equal logical dimension. The RBF path expands the
// squared distance as a.a - 2 a.b + b.b (clamped at zero) so the whole
// library shares one inner-product primitive.
double kernel_scalar(const KernelSpec& spec, const SparseRowView& a,
                     const SparseRowView& b);

// Issues kernel panels against a fixed dataset. Implementations own any
// derived state (row norms, column slices) but only borrow the dataset, which
// must outlive the provider.
class PanelProvider {
 public:
  virtual ~PanelProvider() = default;

  // Panel against the given rows. Rows may repeat within a call; every index
  // must lie in [0, rows of the dataset).
  virtual KernelPanel panel(std::span<const Index> rows) = 0;

  virtual Index data_rows() const = 0;
};

// Single-address-space provider: straight sparse-dense panel products.
class LocalPanelProvider final : public PanelProvider {
 public:
  LocalPanelProvider(KernelSpec spec, const SparseMatrix& matrix);

  KernelPanel panel(std::span<const Index> rows) override;
  Index data_rows() const override { return matrix_->rows(); }

 private:
  KernelSpec spec_;
  const SparseMatrix* matrix_;
  std::vector<double> row_norms_;
  std::vector<double> scatter_;
};

// One-shot convenience over LocalPanelProvider.
KernelPanel sampled_panel(const KernelSpec& spec, const SparseMatrix& matrix,
                          std::span<const Index> rows);

namespace detail {

// Accumulates out(i, j) += dot(mat row i, mat row rows[j]) for every i and j.
// `scatter` is a caller-owned dense buffer of at least mat.cols() entries,
// zero on entry and restored to zero on exit. Returns the flop count charged
// for the product (one per stored entry touched per column).
double accumulate_dot_panel(const SparseMatrix& mat,
                            std::span<const Index> rows, Eigen::MatrixXd& out,
                            std::vector<double>& scatter);

// Sum of squared entries per row, accumulated in row-storage order.
std::vector<double> row_squared_norms(const SparseMatrix& mat);

// In-place map from inner products to kernel values. For RBF, `row_norms`
// must hold the full squared norms; negative expanded distances clamp to
// zero, which keeps the diagonal exactly one.
void apply_kernel_map(const KernelSpec& spec, std::span<const Index> rows,
                      std::span<const double> row_norms, Eigen::MatrixXd& out);

void check_panel_rows(std::span<const Index> rows, Index data_rows);

// x^d by repeated multiplication; d >= 0. Fixed left-to-right order so every
// evaluation path rounds identically.
double pow_int(double x, Index d);

}  // namespace detail

}  // namespace kcd
