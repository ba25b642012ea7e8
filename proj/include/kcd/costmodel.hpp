#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "kcd/types.hpp"

namespace kcd {

// Hockney-style machine description. gamma/beta/phi are seconds per flop,
// word, and message round; mu is the cost of one nonlinear kernel map
// relative to a floating-point multiply; shards is the simulated processor
// count P.
struct MachineParams {
  double gamma = 1e-10;
  double beta = 4e-9;
  double phi = 1e-6;
  double mu = 8.0;
  Index shards = 1;

  void validate() const;
};

// Cost phases tracked by the ledger. kKernelCompute covers panel formation
// (GEMM partials plus the redundant nonlinear map), kAllreduce the simulated
// collectives, kGradientCorrection the right-hand-side and recurrence
// correction arithmetic, kSolve the block-system solves.
enum class Phase { kKernelCompute, kAllreduce, kGradientCorrection, kSolve };

inline constexpr int kPhaseCount = 4;

const char* phase_name(Phase phase);

struct PhaseCost {
  double flops = 0.0;
  std::uint64_t words = 0;
  std::uint64_t messages = 0;
};

// ceil(log2(P)) message rounds for one allreduce over P shards; 0 for P = 1.
inline std::uint64_t allreduce_rounds(Index shards) {
  if (shards < 1) throw std::invalid_argument("allreduce_rounds: P < 1");
  return static_cast<std::uint64_t>(
      std::bit_width(static_cast<std::uint64_t>(shards) - 1));
}

// Accumulates critical-path costs of one run. Counts follow the leading-order
// accounting of the analysis: GEMM partials cost one flop per stored entry
// touched, the nonlinear map costs mu per panel entry, a b-block solve costs
// b^3, correction terms b^2 each. Words are charged per allreduce invocation
// regardless of shard count (the word volume of the modeled collective does
// not depend on P, and P = 1 runs must account identically); message rounds
// are ceil(log2 P), so they vanish at P = 1.
class CostLedger {
 public:
  CostLedger() = default;
  explicit CostLedger(MachineParams machine);

  const MachineParams& machine() const noexcept { return machine_; }

  void charge_flops(Phase phase, double flops);

  // Panel-formation work: per-shard GEMM flop totals (the critical path takes
  // the maximum) plus work repeated redundantly on every shard after the
  // reduction (the nonlinear map). Per-shard totals are retained for the
  // load-imbalance report.
  void charge_panel_flops(std::span<const double> per_shard, double redundant);

  void charge_allreduce(std::uint64_t words_per_shard, Index shards);

  double flops() const noexcept;
  std::uint64_t words() const noexcept;
  std::uint64_t messages() const noexcept;
  const PhaseCost& phase(Phase phase) const;
  std::span<const double> shard_flops() const noexcept { return shard_flops_; }

  double predicted_seconds() const;

  // Deterministic JSON report: totals, per-phase breakdown, predicted time,
  // machine parameters, and per-shard kernel flops with an imbalance ratio.
  std::string report_json(int indent = 2) const;

 private:
  MachineParams machine_;
  PhaseCost phases_[kPhaseCount];
  std::vector<double> shard_flops_;
};

void charge_allreduce(CostLedger& ledger, std::uint64_t words_per_shard,
                      Index shards);

double predict_time(const CostLedger& ledger, const MachineParams& machine);

enum class CostAlgorithm { kBdcd, kSstepBdcd };

struct CostBound {
  double flops = 0.0;
  double words = 0.0;
  double messages = 0.0;
};

// Evaluates the leading-order cost formulas with all constants set to 1:
// classical block descent costs H(bfmn/P + mu*bm + b^3) flops, Hbm words,
// H*ceil(log2 P) messages; the s-step variant costs
// (H/s)(sbfmn/P + mu*sbm + sb^3 + C(s,2)b^2) flops, the same Hbm words
// (the factor s cancels algebraically), and (H/s)*ceil(log2 P) messages.
CostBound theorem_bound(CostAlgorithm algorithm, double m, double n, double f,
                        double b, double s, double H, Index P, double mu);

}  // namespace kcd
