#pragma once

#include <Eigen/Core>

#include "kcd/kernel.hpp"
#include "kcd/sampling.hpp"
#include "kcd/solution.hpp"
#include "kcd/sparse.hpp"

namespace kcd {

// Kernel ridge regression dual solved block-wise: each iteration picks
// block_size coordinates without replacement and solves the b x b system
// G = (1/lambda) * K[block, block] + m*I exactly.
struct KrrConfig {
  double lambda = 1.0;
  Index block_size = 1;  // b
  Index iterations = 0;  // H
  Index s = 1;           // recurrence depth of the s-step variant
  std::uint64_t seed = 0;

  void validate() const;
};

// One block update in place. `panel` must be the kernel panel of the data
// against rows `block`. Returns the applied block step delta. Throws
// numerical_error if the block system is not positive definite.
Eigen::VectorXd bdcd_step(Eigen::VectorXd& alpha, const BlockSelection& block,
                          const KernelPanel& panel,
                          std::span<const double> labels,
                          const KrrConfig& config);

// Classical block descent: `iterations` sequential block solves on blocks
// drawn from the stream, one kernel panel per iteration.
DualSolution solve_bdcd(const SparseMatrix& features,
                        std::span<const double> labels,
                        const KrrConfig& config, const KernelSpec& kernel,
                        CoordinateStream& stream,
                        const SolveOptions& options = {});

// Communication-avoiding variant: s blocks are drawn per outer iteration (in
// the same stream order as the classical solver), their m x (s*b) panel is
// computed in one shot, and each inner block system is corrected for the
// steps already taken in this outer iteration: an overlap term for
// coordinates shared between blocks and a Gram term through the panel.
// Updates are applied to alpha only at the end of each outer iteration. A
// remainder of iterations not divisible by s runs as classical steps.
DualSolution solve_sstep_bdcd(const SparseMatrix& features,
                              std::span<const double> labels,
                              const KrrConfig& config,
                              const KernelSpec& kernel,
                              CoordinateStream& stream,
                              const SolveOptions& options = {});

}  // namespace kcd
