#include "kcd/bdcd.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <unordered_map>

#include "solver_detail.hpp"

namespace kcd {

namespace {

void check_krr_inputs(const SparseMatrix& features,
                      std::span<const double> labels, const KrrConfig& config,
                      const KernelSpec& kernel, CoordinateStream& stream) {
  config.validate();
  kernel.validate();
  if (labels.size() != static_cast<std::size_t>(features.rows())) {
    throw std::invalid_argument("solve: label count does not match rows");
  }
  if (features.rows() == 0) {
    throw std::invalid_argument("solve: empty dataset");
  }
  if (config.block_size > features.rows()) {
    throw std::invalid_argument("solve: block size exceeds row count");
  }
  if (stream.domain() != features.rows()) {
    throw std::invalid_argument("solve: stream domain does not match rows");
  }
}

void check_trace_options(const SolveOptions& options, Index m) {
  if (options.trace_interval < 0) {
    throw std::invalid_argument("solve: negative trace interval");
  }
  if (options.trace_interval == 0) return;
  if (options.metric == MetricKind::kDualityGap) {
    throw std::invalid_argument(
        "solve: duality-gap traces apply to the SVM solvers only");
  }
  if (options.metric == MetricKind::kRelativeError &&
      options.reference.size() != static_cast<std::size_t>(m)) {
    throw std::invalid_argument(
        "solve: relative-error trace needs a reference of matching length");
  }
}

// Trace metric; `margins` is the maintained product K * alpha, used only for
// the dual-objective metric.
double krr_trace_value(const SolveOptions& options, const KrrConfig& config,
                       std::span<const double> labels,
                       const Eigen::VectorXd& alpha,
                       const Eigen::VectorXd& margins) {
  if (options.metric == MetricKind::kRelativeError) {
    return detail::relative_error_value(alpha, options.reference);
  }
  const auto m = static_cast<double>(alpha.size());
  double fit = 0.0;
  for (Eigen::Index i = 0; i < alpha.size(); ++i) {
    fit += labels[static_cast<std::size_t>(i)] * alpha[i];
  }
  return 0.5 * (alpha.dot(margins) / config.lambda +
                m * alpha.squaredNorm()) -
         fit;
}

// Assembles and solves one block system. rhs_correction, when present, is
// subtracted from the right-hand side before the solve (the s-step
// recurrence terms).
Eigen::VectorXd solve_block(const Eigen::MatrixXd& panel_values,
                            Eigen::Index col_offset,
                            const BlockSelection& block,
                            const Eigen::VectorXd& alpha,
                            std::span<const double> labels, double lambda,
                            const Eigen::VectorXd* rhs_correction) {
  const auto b = static_cast<Eigen::Index>(block.size());
  const auto m = static_cast<double>(alpha.size());
  const double inv_lambda = 1.0 / lambda;
  Eigen::MatrixXd system(b, b);
  Eigen::VectorXd rhs(b);
  for (Eigen::Index r = 0; r < b; ++r) {
    const Index row = block[static_cast<std::size_t>(r)];
    for (Eigen::Index c = 0; c < b; ++c) {
      system(r, c) = inv_lambda * panel_values(row, col_offset + c);
    }
    system(r, r) += m;
    const Eigen::Ref<const Eigen::VectorXd> column =
        panel_values.col(col_offset + r);
    rhs[r] = labels[static_cast<std::size_t>(row)] - m * alpha[row] -
             inv_lambda * column.dot(alpha);
  }
  if (rhs_correction) rhs -= *rhs_correction;
  const Eigen::LLT<Eigen::MatrixXd> llt(system);
  if (llt.info() != Eigen::Success) {
    throw numerical_error("block system is not positive definite");
  }
  return llt.solve(rhs);
}

}  // namespace

void KrrConfig::validate() const {
  if (!(lambda > 0.0)) {
    throw std::invalid_argument("KrrConfig: lambda must be positive");
  }
  if (block_size < 1) {
    throw std::invalid_argument("KrrConfig: block size must be >= 1");
  }
  if (iterations < 0) {
    throw std::invalid_argument("KrrConfig: negative iteration count");
  }
  if (s < 1) throw std::invalid_argument("KrrConfig: s must be >= 1");
}

Eigen::VectorXd bdcd_step(Eigen::VectorXd& alpha, const BlockSelection& block,
                          const KernelPanel& panel,
                          std::span<const double> labels,
                          const KrrConfig& config) {
  config.validate();
  if (block.empty()) throw std::invalid_argument("bdcd_step: empty block");
  if (panel.values.rows() != alpha.size() ||
      panel.values.cols() != static_cast<Eigen::Index>(block.size())) {
    throw std::invalid_argument("bdcd_step: panel shape mismatch");
  }
  if (labels.size() != static_cast<std::size_t>(alpha.size())) {
    throw std::invalid_argument("bdcd_step: label count mismatch");
  }
  for (Index i : block) {
    if (i < 0 || i >= alpha.size()) {
      throw std::invalid_argument("bdcd_step: block index out of range");
    }
  }
  const Eigen::VectorXd delta = solve_block(panel.values, 0, block, alpha,
                                            labels, config.lambda, nullptr);
  for (std::size_t r = 0; r < block.size(); ++r) {
    alpha[block[r]] += delta[static_cast<Eigen::Index>(r)];
  }
  return delta;
}

DualSolution solve_bdcd(const SparseMatrix& features,
                        std::span<const double> labels,
                        const KrrConfig& config, const KernelSpec& kernel,
                        CoordinateStream& stream,
                        const SolveOptions& options) {
  check_krr_inputs(features, labels, config, kernel, stream);
  const Index m = features.rows();
  check_trace_options(options, m);
  ColumnPartition scratch;
  auto provider = detail::make_provider(kernel, features, options, scratch);
  const auto b = config.block_size;

  DualSolution out;
  out.alpha = Eigen::VectorXd::Zero(m);
  detail::TraceGate gate(options.trace_interval);
  Eigen::VectorXd margins;
  const bool track_margins =
      gate.enabled() && options.metric == MetricKind::kDualObjective;
  if (track_margins) margins = Eigen::VectorXd::Zero(m);

  bool stopped = false;
  const auto record = [&](Index iteration) {
    const double value =
        krr_trace_value(options, config, labels, out.alpha, margins);
    out.trace.push_back({options.metric, iteration, value});
    if (options.stop_below && value <= *options.stop_below) stopped = true;
  };

  Index it = 0;
  if (gate.due(0, config.iterations == 0)) record(0);
  while (it < config.iterations && !stopped) {
    const BlockSelection block = stream.next_block(b);
    const KernelPanel panel = provider->panel(block);
    const Eigen::VectorXd delta =
        bdcd_step(out.alpha, block, panel, labels, config);
    ++it;
    if (options.ledger) {
      options.ledger->charge_flops(
          Phase::kGradientCorrection,
          static_cast<double>(b) * static_cast<double>(m));
      options.ledger->charge_flops(Phase::kSolve,
                                   static_cast<double>(b) *
                                       static_cast<double>(b) *
                                       static_cast<double>(b));
    }
    if (track_margins) margins += panel.values * delta;
    if (gate.due(it, it == config.iterations)) record(it);
  }
  out.iterations_run = it;
  return out;
}

DualSolution solve_sstep_bdcd(const SparseMatrix& features,
                              std::span<const double> labels,
                              const KrrConfig& config,
                              const KernelSpec& kernel,
                              CoordinateStream& stream,
                              const SolveOptions& options) {
  check_krr_inputs(features, labels, config, kernel, stream);
  const Index m = features.rows();
  check_trace_options(options, m);
  ColumnPartition scratch;
  auto provider = detail::make_provider(kernel, features, options, scratch);
  const Index b = config.block_size;
  const Index s = config.s;
  const double inv_lambda = 1.0 / config.lambda;
  const auto md = static_cast<double>(m);

  DualSolution out;
  out.alpha = Eigen::VectorXd::Zero(m);
  detail::TraceGate gate(options.trace_interval);
  Eigen::VectorXd margins;
  const bool track_margins =
      gate.enabled() && options.metric == MetricKind::kDualObjective;
  if (track_margins) margins = Eigen::VectorXd::Zero(m);

  bool stopped = false;
  const auto record = [&](Index iteration) {
    const double value =
        krr_trace_value(options, config, labels, out.alpha, margins);
    out.trace.push_back({options.metric, iteration, value});
    if (options.stop_below && value <= *options.stop_below) stopped = true;
  };

  Index it = 0;
  if (gate.due(0, config.iterations == 0)) record(0);

  const Index full_blocks = config.iterations / s;
  std::vector<BlockSelection> blocks(static_cast<std::size_t>(s));
  std::vector<Eigen::VectorXd> deltas(static_cast<std::size_t>(s));
  std::vector<std::unordered_map<Index, Eigen::Index>> positions(
      static_cast<std::size_t>(s));
  std::vector<Index> all_rows(static_cast<std::size_t>(s * b));
  for (Index outer = 0; outer < full_blocks && !stopped; ++outer) {
    for (Index j = 0; j < s; ++j) {
      auto& block = blocks[static_cast<std::size_t>(j)];
      block = stream.next_block(b);
      auto& pos = positions[static_cast<std::size_t>(j)];
      pos.clear();
      for (std::size_t c = 0; c < block.size(); ++c) {
        pos.emplace(block[c], static_cast<Eigen::Index>(c));
        all_rows[static_cast<std::size_t>(j * b) + c] = block[c];
      }
    }
    const KernelPanel panel = provider->panel(all_rows);
    const Eigen::MatrixXd& Q = panel.values;
    // Inner recurrence: alpha stays at the outer-start iterate; each block's
    // right-hand side is corrected for the deltas already computed in this
    // outer iteration (an overlap term where blocks share coordinates and a
    // Gram term through the panel).
    for (Index j = 0; j < s; ++j) {
      const auto& block = blocks[static_cast<std::size_t>(j)];
      const Eigen::Index offset = static_cast<Eigen::Index>(j * b);
      Eigen::VectorXd correction = Eigen::VectorXd::Zero(b);
      for (Index t = 0; t < j; ++t) {
        const auto& prev_block = blocks[static_cast<std::size_t>(t)];
        const auto& prev_pos = positions[static_cast<std::size_t>(t)];
        const Eigen::VectorXd& prev_delta =
            deltas[static_cast<std::size_t>(t)];
        for (Eigen::Index r = 0; r < static_cast<Eigen::Index>(block.size());
             ++r) {
          const Index row = block[static_cast<std::size_t>(r)];
          const auto hit = prev_pos.find(row);
          if (hit != prev_pos.end()) {
            correction[r] += md * prev_delta[hit->second];
          }
          double gram = 0.0;
          for (Eigen::Index c = 0;
               c < static_cast<Eigen::Index>(prev_block.size()); ++c) {
            gram += Q(prev_block[static_cast<std::size_t>(c)], offset + r) *
                    prev_delta[c];
          }
          correction[r] += inv_lambda * gram;
        }
      }
      deltas[static_cast<std::size_t>(j)] =
          solve_block(Q, offset, block, out.alpha, labels, config.lambda,
                      j > 0 ? &correction : nullptr);
    }
    for (Index j = 0; j < s; ++j) {
      const auto& block = blocks[static_cast<std::size_t>(j)];
      const Eigen::VectorXd& delta = deltas[static_cast<std::size_t>(j)];
      for (std::size_t r = 0; r < block.size(); ++r) {
        out.alpha[block[r]] += delta[static_cast<Eigen::Index>(r)];
      }
    }
    it += s;
    if (options.ledger) {
      const double bd = static_cast<double>(b);
      const double sd = static_cast<double>(s);
      const double corrections = sd * (sd - 1.0) / 2.0 * bd * bd;
      options.ledger->charge_flops(Phase::kGradientCorrection,
                                   sd * bd * md + corrections);
      options.ledger->charge_flops(Phase::kSolve, sd * bd * bd * bd);
    }
    if (track_margins) {
      for (Index j = 0; j < s; ++j) {
        margins += Q.middleCols(static_cast<Eigen::Index>(j * b), b) *
                   deltas[static_cast<std::size_t>(j)];
      }
    }
    if (gate.due(it, it == config.iterations)) record(it);
  }

  // Remainder iterations run classically on the same stream.
  while (it < config.iterations && !stopped) {
    const BlockSelection block = stream.next_block(b);
    const KernelPanel panel = provider->panel(block);
    const Eigen::VectorXd delta =
        bdcd_step(out.alpha, block, panel, labels, config);
    ++it;
    if (options.ledger) {
      options.ledger->charge_flops(
          Phase::kGradientCorrection,
          static_cast<double>(b) * static_cast<double>(m));
      options.ledger->charge_flops(Phase::kSolve,
                                   static_cast<double>(b) *
                                       static_cast<double>(b) *
                                       static_cast<double>(b));
    }
    if (track_margins) margins += panel.values * delta;
    if (gate.due(it, it == config.iterations)) record(it);
  }
  out.iterations_run = it;
  return out;
}

}  // namespace kcd
