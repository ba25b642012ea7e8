#include "kcd/dcd.hpp"

#include <cmath>

#include "solver_detail.hpp"

namespace kcd {

namespace {

using detail::clip;

void check_svm_inputs(const SparseMatrix& features,
                      std::span<const double> labels, const SvmConfig& config,
                      const KernelSpec& kernel, CoordinateStream& stream) {
  config.validate();
  kernel.validate();
  if (labels.size() != static_cast<std::size_t>(features.rows())) {
    throw std::invalid_argument("solve: label count does not match rows");
  }
  if (features.rows() == 0) {
    throw std::invalid_argument("solve: empty dataset");
  }
  if (stream.domain() != features.rows()) {
    throw std::invalid_argument("solve: stream domain does not match rows");
  }
}

// Trace metric from the maintained margin vector z = K(signed rows) * alpha.
// The duality gap is primal + min-form dual of the problem the solver
// actually minimizes; see the oracle module for the exact-Gram counterpart.
double svm_trace_value(const SolveOptions& options, const SvmConfig& config,
                       const Eigen::VectorXd& alpha,
                       const Eigen::VectorXd& margins) {
  if (options.metric == MetricKind::kRelativeError) {
    return detail::relative_error_value(alpha, options.reference);
  }
  const double omega = config.omega();
  const double quad = alpha.dot(margins);
  double dual = 0.5 * quad - alpha.sum();
  if (omega > 0.0) dual += 0.5 * omega * alpha.squaredNorm();
  if (options.metric == MetricKind::kDualObjective) return dual;
  double loss = 0.0;
  for (Eigen::Index i = 0; i < margins.size(); ++i) {
    const double l = std::max(1.0 - margins[i], 0.0);
    loss += config.variant == SvmVariant::kL1 ? l : l * l;
  }
  const double primal = 0.5 * quad + config.C * loss;
  return primal + dual;
}

void check_trace_options(const SolveOptions& options, Index m) {
  if (options.trace_interval < 0) {
    throw std::invalid_argument("solve: negative trace interval");
  }
  if (options.trace_interval > 0 &&
      options.metric == MetricKind::kRelativeError &&
      options.reference.size() != static_cast<std::size_t>(m)) {
    throw std::invalid_argument(
        "solve: relative-error trace needs a reference of matching length");
  }
}

}  // namespace

void SvmConfig::validate() const {
  if (!(C > 0.0)) throw std::invalid_argument("SvmConfig: C must be positive");
  if (iterations < 0) {
    throw std::invalid_argument("SvmConfig: negative iteration count");
  }
  if (s < 1) throw std::invalid_argument("SvmConfig: s must be >= 1");
}

SparseMatrix signed_rows(const SparseMatrix& features,
                         std::span<const double> labels) {
  if (labels.size() != static_cast<std::size_t>(features.rows())) {
    throw std::invalid_argument("signed_rows: label count does not match");
  }
  for (double y : labels) {
    if (y != 1.0 && y != -1.0) {
      throw std::invalid_argument("signed_rows: labels must be +/-1");
    }
  }
  std::vector<Index> offsets(features.row_offsets().begin(),
                             features.row_offsets().end());
  std::vector<Index> indices(features.col_indices().begin(),
                             features.col_indices().end());
  std::vector<double> values(features.values().begin(),
                             features.values().end());
  for (Index i = 0; i < features.rows(); ++i) {
    const double y = labels[static_cast<std::size_t>(i)];
    for (Index k = offsets[static_cast<std::size_t>(i)];
         k < offsets[static_cast<std::size_t>(i) + 1]; ++k) {
      values[static_cast<std::size_t>(k)] *= y;
    }
  }
  return SparseMatrix(features.rows(), features.cols(), std::move(offsets),
                      std::move(indices), std::move(values));
}

double dcd_step(Eigen::VectorXd& alpha, Index coordinate,
                const Eigen::Ref<const Eigen::VectorXd>& panel_column,
                const SvmConfig& config) {
  if (coordinate < 0 || coordinate >= alpha.size()) {
    throw std::invalid_argument("dcd_step: coordinate out of range");
  }
  if (panel_column.size() != alpha.size()) {
    throw std::invalid_argument("dcd_step: panel column length mismatch");
  }
  const double omega = config.omega();
  const double nu = config.nu();
  const double ai = alpha[coordinate];
  const double g = panel_column.dot(alpha) - 1.0 + omega * ai;
  const double projected = clip(ai - g, 0.0, nu);
  if (std::abs(projected - ai) == 0.0) return 0.0;
  const double eta = panel_column[coordinate] + omega;
  if (!(eta > 0.0)) {
    throw numerical_error("dcd_step: coordinate curvature is not positive");
  }
  const double theta = clip(ai - g / eta, 0.0, nu) - ai;
  alpha[coordinate] += theta;
  return theta;
}

DualSolution solve_dcd(const SparseMatrix& features,
                       std::span<const double> labels, const SvmConfig& config,
                       const KernelSpec& kernel, CoordinateStream& stream,
                       const SolveOptions& options) {
  check_svm_inputs(features, labels, config, kernel, stream);
  const Index m = features.rows();
  check_trace_options(options, m);
  const SparseMatrix signed_mat = signed_rows(features, labels);
  ColumnPartition scratch;
  auto provider = detail::make_provider(kernel, signed_mat, options, scratch);

  DualSolution out;
  out.alpha = Eigen::VectorXd::Zero(m);
  detail::TraceGate gate(options.trace_interval);
  Eigen::VectorXd margins;
  const bool track_margins =
      gate.enabled() && options.metric != MetricKind::kRelativeError;
  if (track_margins) margins = Eigen::VectorXd::Zero(m);

  bool stopped = false;
  const auto record = [&](Index iteration) {
    const double value = svm_trace_value(options, config, out.alpha, margins);
    out.trace.push_back({options.metric, iteration, value});
    if (options.stop_below && value <= *options.stop_below) stopped = true;
  };

  Index it = 0;
  if (gate.due(0, config.iterations == 0)) record(0);
  while (it < config.iterations && !stopped) {
    const Index i = stream.next();
    const KernelPanel panel = provider->panel({&i, 1});
    const double theta = dcd_step(out.alpha, i, panel.values.col(0), config);
    ++it;
    if (options.ledger) {
      options.ledger->charge_flops(Phase::kGradientCorrection,
                                   static_cast<double>(m));
      options.ledger->charge_flops(Phase::kSolve, 1.0);
    }
    if (track_margins && theta != 0.0) margins += theta * panel.values.col(0);
    if (gate.due(it, it == config.iterations)) record(it);
  }
  out.iterations_run = it;
  return out;
}

DualSolution solve_sstep_dcd(const SparseMatrix& features,
                             std::span<const double> labels,
                             const SvmConfig& config, const KernelSpec& kernel,
                             CoordinateStream& stream,
                             const SolveOptions& options) {
  check_svm_inputs(features, labels, config, kernel, stream);
  const Index m = features.rows();
  check_trace_options(options, m);
  const SparseMatrix signed_mat = signed_rows(features, labels);
  ColumnPartition scratch;
  auto provider = detail::make_provider(kernel, signed_mat, options, scratch);

  const double omega = config.omega();
  const double nu = config.nu();
  const Index s = config.s;

  DualSolution out;
  out.alpha = Eigen::VectorXd::Zero(m);
  detail::TraceGate gate(options.trace_interval);
  Eigen::VectorXd margins;
  const bool track_margins =
      gate.enabled() && options.metric != MetricKind::kRelativeError;
  if (track_margins) margins = Eigen::VectorXd::Zero(m);

  bool stopped = false;
  const auto record = [&](Index iteration) {
    const double value = svm_trace_value(options, config, out.alpha, margins);
    out.trace.push_back({options.metric, iteration, value});
    if (options.stop_below && value <= *options.stop_below) stopped = true;
  };

  Index it = 0;
  if (gate.due(0, config.iterations == 0)) record(0);

  const Index full_blocks = config.iterations / s;
  std::vector<Index> block(static_cast<std::size_t>(s));
  std::vector<double> theta(static_cast<std::size_t>(s));
  for (Index blk = 0; blk < full_blocks && !stopped; ++blk) {
    for (Index j = 0; j < s; ++j) {
      block[static_cast<std::size_t>(j)] = stream.next();
    }
    const KernelPanel panel = provider->panel(block);
    const Eigen::MatrixXd& U = panel.values;
    // Inner recurrence: alpha itself stays at the block-start iterate; the
    // rho and Sigma-theta corrections account for steps already chosen in
    // this block, including repeats of the same coordinate.
    for (Index j = 0; j < s; ++j) {
      const Index i = block[static_cast<std::size_t>(j)];
      const double ai = out.alpha[i];
      double rho = ai;
      // Bound through Ref so the dot product instantiates exactly as in
      // dcd_step; at s = 1 the two solvers then agree bitwise.
      const Eigen::Ref<const Eigen::VectorXd> uj = U.col(j);
      double g = uj.dot(out.alpha) - 1.0 + omega * ai;
      for (Index t = 0; t < j; ++t) {
        const double th = theta[static_cast<std::size_t>(t)];
        g += U(block[static_cast<std::size_t>(t)], j) * th;
        if (block[static_cast<std::size_t>(t)] == i) {
          rho += th;
          g += omega * th;
        }
      }
      const double projected = clip(rho - g, 0.0, nu);
      if (std::abs(projected - rho) == 0.0) {
        theta[static_cast<std::size_t>(j)] = 0.0;
        continue;
      }
      const double eta = U(i, j) + omega;
      if (!(eta > 0.0)) {
        throw numerical_error(
            "solve_sstep_dcd: coordinate curvature is not positive");
      }
      theta[static_cast<std::size_t>(j)] = clip(rho - g / eta, 0.0, nu) - rho;
    }
    for (Index j = 0; j < s; ++j) {
      out.alpha[block[static_cast<std::size_t>(j)]] +=
          theta[static_cast<std::size_t>(j)];
    }
    it += s;
    if (options.ledger) {
      const double corrections =
          static_cast<double>(s) * static_cast<double>(s - 1) / 2.0;
      options.ledger->charge_flops(
          Phase::kGradientCorrection,
          static_cast<double>(s) * static_cast<double>(m) + corrections);
      options.ledger->charge_flops(Phase::kSolve, static_cast<double>(s));
    }
    if (track_margins) {
      for (Index j = 0; j < s; ++j) {
        const double th = theta[static_cast<std::size_t>(j)];
        if (th != 0.0) margins += th * U.col(j);
      }
    }
    if (gate.due(it, it == config.iterations)) record(it);
  }

  // Remainder iterations run classically; the stream keeps advancing in the
  // same order, so iterates agree with the classical solver.
  while (it < config.iterations && !stopped) {
    const Index i = stream.next();
    const KernelPanel panel = provider->panel({&i, 1});
    const double step = dcd_step(out.alpha, i, panel.values.col(0), config);
    ++it;
    if (options.ledger) {
      options.ledger->charge_flops(Phase::kGradientCorrection,
                                   static_cast<double>(m));
      options.ledger->charge_flops(Phase::kSolve, 1.0);
    }
    if (track_margins && step != 0.0) margins += step * panel.values.col(0);
    if (gate.due(it, it == config.iterations)) record(it);
  }
  out.iterations_run = it;
  return out;
}

}  // namespace kcd
