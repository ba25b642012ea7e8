#pragma once

#include <Eigen/Core>

#include "kcd/dcd.hpp"
#include "kcd/kernel.hpp"
#include "kcd/solution.hpp"
#include "kcd/sparse.hpp"

namespace kcd {

// Materializing a full kernel Gram is quadratic in rows; calls that would
// exceed the cap raise resource_error instead of silently allocating.
inline constexpr Index kGramCapDefault = 4096;

// Full kernel Gram of the given rows, built entrywise from kernel_scalar.
// This is deliberately a different code path from the panel machinery so the
// two can check each other.
Eigen::MatrixXd kernel_gram(const KernelSpec& kernel,
                            const SparseMatrix& features,
                            Index cap = kGramCapDefault);

// Exact ridge dual solution: solves ((1/lambda) K + m I) alpha = y by dense
// Cholesky factorization.
Eigen::VectorXd krr_closed_form(const SparseMatrix& features,
                                std::span<const double> labels, double lambda,
                                const KernelSpec& kernel,
                                Index cap = kGramCapDefault);

// Ridge dual objective 0.5 alpha' ((1/lambda) K + m I) alpha - y' alpha,
// evaluated from the materialized Gram.
double krr_dual_objective(const Eigen::VectorXd& alpha,
                          const SparseMatrix& features,
                          std::span<const double> labels, double lambda,
                          const KernelSpec& kernel,
                          Index cap = kGramCapDefault);

// SVM primal/dual objectives over the Gram of the signed rows, which is the
// quadratic form the coordinate-descent solver minimizes (for the linear
// kernel it coincides with the textbook diag(y) K diag(y)). The dual is kept
// in minimization form, so gap = primal + dual and is nonnegative up to
// roundoff, vanishing at the optimum.
class SvmObjectives {
 public:
  SvmObjectives(const SparseMatrix& features, std::span<const double> labels,
                const KernelSpec& kernel, const SvmConfig& config,
                Index cap = kGramCapDefault);

  // Throws domain_error if alpha is infeasible for the configured variant.
  double dual(const Eigen::VectorXd& alpha) const;
  double primal(const Eigen::VectorXd& alpha) const;
  ConvergenceMetric gap(const Eigen::VectorXd& alpha,
                        Index iteration = 0) const;

  const Eigen::MatrixXd& gram() const noexcept { return gram_; }

 private:
  Eigen::MatrixXd gram_;
  SvmConfig config_;
};

double svm_dual_objective(const Eigen::VectorXd& alpha,
                          const SparseMatrix& features,
                          std::span<const double> labels,
                          const KernelSpec& kernel, const SvmConfig& config,
                          Index cap = kGramCapDefault);

double svm_primal_objective(const Eigen::VectorXd& alpha,
                            const SparseMatrix& features,
                            std::span<const double> labels,
                            const KernelSpec& kernel, const SvmConfig& config,
                            Index cap = kGramCapDefault);

ConvergenceMetric duality_gap(const Eigen::VectorXd& alpha,
                              const SparseMatrix& features,
                              std::span<const double> labels,
                              const KernelSpec& kernel,
                              const SvmConfig& config, Index iteration = 0,
                              Index cap = kGramCapDefault);

// ||alpha - alpha_star|| / ||alpha_star||; throws domain_error when the
// reference norm is zero.
ConvergenceMetric relative_error(const Eigen::VectorXd& alpha,
                                 const Eigen::VectorXd& alpha_star,
                                 Index iteration = 0);

}  // namespace kcd
