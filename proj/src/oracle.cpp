#include "kcd/oracle.hpp"

#include <Eigen/Cholesky>
#include <cmath>

namespace kcd {

namespace {

void check_labels(std::span<const double> labels, Index m) {
  if (labels.size() != static_cast<std::size_t>(m)) {
    throw std::invalid_argument("oracle: label count does not match rows");
  }
}

}  // namespace

Eigen::MatrixXd kernel_gram(const KernelSpec& kernel,
                            const SparseMatrix& features, Index cap) {
  kernel.validate();
  const Index m = features.rows();
  if (m > cap) {
    throw resource_error("kernel_gram: " + std::to_string(m) +
                         " rows exceed the cap of " + std::to_string(cap));
  }
  Eigen::MatrixXd gram(m, m);
  for (Index i = 0; i < m; ++i) {
    const SparseRowView ri = features.row(i);
    for (Index j = 0; j <= i; ++j) {
      const double value = kernel_scalar(kernel, ri, features.row(j));
      gram(i, j) = value;
      gram(j, i) = value;
    }
  }
  return gram;
}

Eigen::VectorXd krr_closed_form(const SparseMatrix& features,
                                std::span<const double> labels, double lambda,
                                const KernelSpec& kernel, Index cap) {
  if (!(lambda > 0.0)) {
    throw std::invalid_argument("krr_closed_form: lambda must be positive");
  }
  const Index m = features.rows();
  check_labels(labels, m);
  Eigen::MatrixXd system = kernel_gram(kernel, features, cap) / lambda;
  system.diagonal().array() += static_cast<double>(m);
  const Eigen::LLT<Eigen::MatrixXd> llt(system);
  if (llt.info() != Eigen::Success) {
    throw numerical_error("krr_closed_form: system is not positive definite");
  }
  return llt.solve(
      Eigen::Map<const Eigen::VectorXd>(labels.data(), m));
}

double krr_dual_objective(const Eigen::VectorXd& alpha,
                          const SparseMatrix& features,
                          std::span<const double> labels, double lambda,
                          const KernelSpec& kernel, Index cap) {
  if (!(lambda > 0.0)) {
    throw std::invalid_argument("krr_dual_objective: lambda must be positive");
  }
  const Index m = features.rows();
  check_labels(labels, m);
  if (alpha.size() != m) {
    throw std::invalid_argument("krr_dual_objective: alpha length mismatch");
  }
  const Eigen::MatrixXd gram = kernel_gram(kernel, features, cap);
  const Eigen::Map<const Eigen::VectorXd> y(labels.data(), m);
  return 0.5 * (alpha.dot(gram * alpha) / lambda +
                static_cast<double>(m) * alpha.squaredNorm()) -
         y.dot(alpha);
}

SvmObjectives::SvmObjectives(const SparseMatrix& features,
                             std::span<const double> labels,
                             const KernelSpec& kernel, const SvmConfig& config,
                             Index cap)
    : config_(config) {
  config_.validate();
  check_labels(labels, features.rows());
  gram_ = kernel_gram(kernel, signed_rows(features, labels), cap);
}

double SvmObjectives::dual(const Eigen::VectorXd& alpha) const {
  if (alpha.size() != gram_.rows()) {
    throw std::invalid_argument("SvmObjectives: alpha length mismatch");
  }
  const double nu = config_.nu();
  for (Eigen::Index i = 0; i < alpha.size(); ++i) {
    if (alpha[i] < 0.0 || alpha[i] > nu) {
      throw std::domain_error("SvmObjectives: alpha is dual-infeasible");
    }
  }
  double value = 0.5 * alpha.dot(gram_ * alpha) - alpha.sum();
  if (config_.variant == SvmVariant::kL2) {
    value += alpha.squaredNorm() / (4.0 * config_.C);
  }
  return value;
}

double SvmObjectives::primal(const Eigen::VectorXd& alpha) const {
  if (alpha.size() != gram_.rows()) {
    throw std::invalid_argument("SvmObjectives: alpha length mismatch");
  }
  const Eigen::VectorXd margins = gram_ * alpha;
  double loss = 0.0;
  for (Eigen::Index i = 0; i < margins.size(); ++i) {
    const double l = std::max(1.0 - margins[i], 0.0);
    loss += config_.variant == SvmVariant::kL1 ? l : l * l;
  }
  return 0.5 * alpha.dot(margins) + config_.C * loss;
}

ConvergenceMetric SvmObjectives::gap(const Eigen::VectorXd& alpha,
                                     Index iteration) const {
  return ConvergenceMetric{MetricKind::kDualityGap, iteration,
                           primal(alpha) + dual(alpha)};
}

double svm_dual_objective(const Eigen::VectorXd& alpha,
                          const SparseMatrix& features,
                          std::span<const double> labels,
                          const KernelSpec& kernel, const SvmConfig& config,
                          Index cap) {
  return SvmObjectives(features, labels, kernel, config, cap).dual(alpha);
}

double svm_primal_objective(const Eigen::VectorXd& alpha,
                            const SparseMatrix& features,
                            std::span<const double> labels,
                            const KernelSpec& kernel, const SvmConfig& config,
                            Index cap) {
  return SvmObjectives(features, labels, kernel, config, cap).primal(alpha);
}

ConvergenceMetric duality_gap(const Eigen::VectorXd& alpha,
                              const SparseMatrix& features,
                              std::span<const double> labels,
                              const KernelSpec& kernel,
                              const SvmConfig& config, Index iteration,
                              Index cap) {
  return SvmObjectives(features, labels, kernel, config, cap)
      .gap(alpha, iteration);
}

ConvergenceMetric relative_error(const Eigen::VectorXd& alpha,
                                 const Eigen::VectorXd& alpha_star,
                                 Index iteration) {
  if (alpha.size() != alpha_star.size()) {
    throw std::invalid_argument("relative_error: length mismatch");
  }
  const double reference = alpha_star.norm();
  if (reference == 0.0) {
    throw std::domain_error("relative_error: reference norm is zero");
  }
  return ConvergenceMetric{MetricKind::kRelativeError, iteration,
                           (alpha - alpha_star).norm() / reference};
}

}  // namespace kcd
