#include "kcd/kernel.hpp"

#include <cmath>

namespace kcd {

KernelSpec KernelSpec::linear() { return KernelSpec{KernelKind::kLinear}; }

KernelSpec KernelSpec::polynomial(double c, Index d) {
  KernelSpec spec;
  spec.kind = KernelKind::kPolynomial;
  spec.c = c;
  spec.d = d;
  spec.validate();
  return spec;
}

KernelSpec KernelSpec::rbf(double sigma) {
  KernelSpec spec;
  spec.kind = KernelKind::kRbf;
  spec.sigma = sigma;
  spec.validate();
  return spec;
}

void KernelSpec::validate() const {
  switch (kind) {
    case KernelKind::kLinear:
      return;
    case KernelKind::kPolynomial:
      if (!(c >= 0.0)) {
        throw std::invalid_argument("polynomial kernel requires c >= 0");
      }
      if (d < 2) {
        throw std::invalid_argument(
            "polynomial kernel requires integer degree >= 2");
      }
      return;
    case KernelKind::kRbf:
      if (!(sigma > 0.0)) {
        throw std::invalid_argument("rbf kernel requires sigma > 0");
      }
      return;
  }
  throw std::invalid_argument("unknown kernel kind");
}

const char* kernel_name(KernelKind kind) {
  switch (kind) {
    case KernelKind::kLinear:
      return "linear";
    case KernelKind::kPolynomial:
      return "poly";
    case KernelKind::kRbf:
      return "rbf";
  }
  throw std::invalid_argument("unknown kernel kind");
}

namespace detail {

double pow_int(double x, Index d) {
  if (d < 0) throw std::invalid_argument("pow_int: negative exponent");
  double r = 1.0;
  for (Index k = 0; k < d; ++k) r *= x;
  return r;
}

void check_panel_rows(std::span<const Index> rows, Index data_rows) {
  for (Index r : rows) {
    if (r < 0 || r >= data_rows) {
      throw std::invalid_argument("panel row index out of range");
    }
  }
}

double accumulate_dot_panel(const SparseMatrix& mat,
                            std::span<const Index> rows, Eigen::MatrixXd& out,
                            std::vector<double>& scatter) {
  const Index m = mat.rows();
  double flops = 0.0;
  for (std::size_t j = 0; j < rows.size(); ++j) {
    const SparseRowView pivot = mat.row(rows[j]);
    for (std::size_t k = 0; k < pivot.indices.size(); ++k) {
      scatter[static_cast<std::size_t>(pivot.indices[k])] = pivot.values[k];
    }
    for (Index i = 0; i < m; ++i) {
      const SparseRowView ri = mat.row(i);
      double dot = 0.0;
      for (std::size_t k = 0; k < ri.indices.size(); ++k) {
        dot += ri.values[k] *
               scatter[static_cast<std::size_t>(ri.indices[k])];
      }
      out(i, static_cast<Eigen::Index>(j)) += dot;
    }
    for (std::size_t k = 0; k < pivot.indices.size(); ++k) {
      scatter[static_cast<std::size_t>(pivot.indices[k])] = 0.0;
    }
    flops += static_cast<double>(mat.nnz());
  }
  return flops;
}

std::vector<double> row_squared_norms(const SparseMatrix& mat) {
  std::vector<double> norms(static_cast<std::size_t>(mat.rows()), 0.0);
  for (Index i = 0; i < mat.rows(); ++i) {
    const SparseRowView row = mat.row(i);
    double sum = 0.0;
    for (double v : row.values) sum += v * v;
    norms[static_cast<std::size_t>(i)] = sum;
  }
  return norms;
}

void apply_kernel_map(const KernelSpec& spec, std::span<const Index> rows,
                      std::span<const double> row_norms,
                      Eigen::MatrixXd& out) {
  switch (spec.kind) {
    case KernelKind::kLinear:
      return;
    case KernelKind::kPolynomial:
      for (std::size_t j = 0; j < rows.size(); ++j) {
        for (Eigen::Index i = 0; i < out.rows(); ++i) {
          out(i, static_cast<Eigen::Index>(j)) =
              pow_int(spec.c + out(i, static_cast<Eigen::Index>(j)), spec.d);
        }
      }
      return;
    case KernelKind::kRbf:
      for (std::size_t j = 0; j < rows.size(); ++j) {
        const double pivot_norm =
            row_norms[static_cast<std::size_t>(rows[j])];
        for (Eigen::Index i = 0; i < out.rows(); ++i) {
          double dist = row_norms[static_cast<std::size_t>(i)] -
                        2.0 * out(i, static_cast<Eigen::Index>(j)) +
                        pivot_norm;
          if (dist < 0.0) dist = 0.0;
          out(i, static_cast<Eigen::Index>(j)) =
              std::exp(-spec.sigma * dist);
        }
      }
      return;
  }
  throw std::invalid_argument("unknown kernel kind");
}

}  // namespace detail

double kernel_scalar(const KernelSpec& spec, const SparseRowView& a,
                     const SparseRowView& b) {
  spec.validate();
  if (a.cols != b.cols) {
    throw std::invalid_argument("kernel_scalar: row dimensions differ");
  }
  double dot = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.indices.size() && j < b.indices.size()) {
    if (a.indices[i] == b.indices[j]) {
      dot += a.values[i] * b.values[j];
      ++i;
      ++j;
    } else if (a.indices[i] < b.indices[j]) {
      ++i;
    } else {
      ++j;
    }
  }
  switch (spec.kind) {
    case KernelKind::kLinear:
      return dot;
    case KernelKind::kPolynomial:
      return detail::pow_int(spec.c + dot, spec.d);
    case KernelKind::kRbf: {
      double aa = 0.0;
      for (double v : a.values) aa += v * v;
      double bb = 0.0;
      for (double v : b.values) bb += v * v;
      double dist = aa - 2.0 * dot + bb;
      if (dist < 0.0) dist = 0.0;
      return std::exp(-spec.sigma * dist);
    }
  }
  throw std::invalid_argument("unknown kernel kind");
}

LocalPanelProvider::LocalPanelProvider(KernelSpec spec,
                                       const SparseMatrix& matrix)
    : spec_(spec), matrix_(&matrix) {
  spec_.validate();
  if (spec_.kind == KernelKind::kRbf) {
    row_norms_ = detail::row_squared_norms(matrix);
  }
  scatter_.assign(static_cast<std::size_t>(matrix.cols()), 0.0);
}

KernelPanel LocalPanelProvider::panel(std::span<const Index> rows) {
  detail::check_panel_rows(rows, matrix_->rows());
  KernelPanel result;
  result.sampled_rows.assign(rows.begin(), rows.end());
  result.values = Eigen::MatrixXd::Zero(matrix_->rows(),
                                        static_cast<Eigen::Index>(rows.size()));
  detail::accumulate_dot_panel(*matrix_, rows, result.values, scatter_);
  detail::apply_kernel_map(spec_, rows, row_norms_, result.values);
  return result;
}

KernelPanel sampled_panel(const KernelSpec& spec, const SparseMatrix& matrix,
                          std::span<const Index> rows) {
  LocalPanelProvider provider(spec, matrix);
  return provider.panel(rows);
}

}  // namespace kcd
