#pragma once

#include <Eigen/Core>
#include <limits>

#include "kcd/kernel.hpp"
#include "kcd/sampling.hpp"
#include "kcd/solution.hpp"
#include "kcd/sparse.hpp"

namespace kcd {

enum class SvmVariant { kL1, kL2 };

// Hinge-loss (L1) or squared-hinge (L2) SVM dual solved by coordinate
// descent. nu/omega are the variant constants of the update rule: the L1 box
// is [0, C] with no diagonal shift, the L2 cone is [0, inf) with a 1/(2C)
// shift.
struct SvmConfig {
  SvmVariant variant = SvmVariant::kL1;
  double C = 1.0;
  Index iterations = 0;  // H
  Index s = 1;           // recurrence depth of the s-step variant
  std::uint64_t seed = 0;

  double nu() const noexcept {
    return variant == SvmVariant::kL1
               ? C
               : std::numeric_limits<double>::infinity();
  }
  double omega() const noexcept {
    return variant == SvmVariant::kL1 ? 0.0 : 1.0 / (2.0 * C);
  }
  void validate() const;
};

// Row i scaled by label i; the sparsity pattern is unchanged. Labels must be
// +/-1.
SparseMatrix signed_rows(const SparseMatrix& features,
                         std::span<const double> labels);

// One coordinate update in place. `panel_column` must be the kernel of every
// signed row against signed row `coordinate`. Returns the applied step, 0
// when the projected gradient already vanishes. Throws numerical_error when a
// step is needed but the curvature u[coordinate] + omega is not positive.
double dcd_step(Eigen::VectorXd& alpha, Index coordinate,
                const Eigen::Ref<const Eigen::VectorXd>& panel_column,
                const SvmConfig& config);

// Classical coordinate descent: `iterations` sequential steps on coordinates
// drawn from the stream, one kernel panel column per step.
DualSolution solve_dcd(const SparseMatrix& features,
                       std::span<const double> labels, const SvmConfig& config,
                       const KernelSpec& kernel, CoordinateStream& stream,
                       const SolveOptions& options = {});

// Communication-avoiding variant: coordinates are drawn s at a time from the
// same stream, their m x s panel is computed in one shot, and the recurrence
// corrections reproduce the classical iterates exactly in exact arithmetic.
// Updates are applied to alpha only at the end of each s-block. A remainder
// of iterations not divisible by s runs as classical steps.
DualSolution solve_sstep_dcd(const SparseMatrix& features,
                             std::span<const double> labels,
                             const SvmConfig& config, const KernelSpec& kernel,
                             CoordinateStream& stream,
                             const SolveOptions& options = {});

}  // namespace kcd
