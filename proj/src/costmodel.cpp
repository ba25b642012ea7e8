#include "kcd/costmodel.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

namespace kcd {

void MachineParams::validate() const {
  if (!(gamma > 0.0) || !(beta > 0.0) || !(phi > 0.0) || !(mu > 0.0)) {
    throw std::invalid_argument("MachineParams: rates must be positive");
  }
  if (shards < 1) {
    throw std::invalid_argument("MachineParams: shards must be >= 1");
  }
}

const char* phase_name(Phase phase) {
  switch (phase) {
    case Phase::kKernelCompute:
      return "kernel_compute";
    case Phase::kAllreduce:
      return "allreduce";
    case Phase::kGradientCorrection:
      return "gradient_correction";
    case Phase::kSolve:
      return "solve";
  }
  throw std::invalid_argument("phase_name: unknown phase");
}

CostLedger::CostLedger(MachineParams machine) : machine_(machine) {
  machine_.validate();
}

void CostLedger::charge_flops(Phase phase, double flops) {
  if (flops < 0.0) throw std::invalid_argument("charge_flops: negative count");
  phases_[static_cast<int>(phase)].flops += flops;
}

void CostLedger::charge_panel_flops(std::span<const double> per_shard,
                                    double redundant) {
  if (per_shard.empty()) {
    throw std::invalid_argument("charge_panel_flops: no shards");
  }
  if (shard_flops_.empty()) {
    shard_flops_.assign(per_shard.size(), 0.0);
  } else if (shard_flops_.size() != per_shard.size()) {
    throw std::invalid_argument("charge_panel_flops: shard count changed");
  }
  double max_shard = 0.0;
  for (std::size_t p = 0; p < per_shard.size(); ++p) {
    if (per_shard[p] < 0.0) {
      throw std::invalid_argument("charge_panel_flops: negative count");
    }
    shard_flops_[p] += per_shard[p] + redundant;
    max_shard = std::max(max_shard, per_shard[p]);
  }
  phases_[static_cast<int>(Phase::kKernelCompute)].flops +=
      max_shard + redundant;
}

void CostLedger::charge_allreduce(std::uint64_t words_per_shard,
                                  Index shards) {
  auto& phase = phases_[static_cast<int>(Phase::kAllreduce)];
  phase.words += words_per_shard;
  phase.messages += allreduce_rounds(shards);
}

double CostLedger::flops() const noexcept {
  double total = 0.0;
  for (const auto& p : phases_) total += p.flops;
  return total;
}

std::uint64_t CostLedger::words() const noexcept {
  std::uint64_t total = 0;
  for (const auto& p : phases_) total += p.words;
  return total;
}

std::uint64_t CostLedger::messages() const noexcept {
  std::uint64_t total = 0;
  for (const auto& p : phases_) total += p.messages;
  return total;
}

const PhaseCost& CostLedger::phase(Phase phase) const {
  return phases_[static_cast<int>(phase)];
}

double CostLedger::predicted_seconds() const {
  return predict_time(*this, machine_);
}

std::string CostLedger::report_json(int indent) const {
  nlohmann::ordered_json report;
  report["flops"] = flops();
  report["words"] = words();
  report["messages"] = messages();
  nlohmann::ordered_json breakdown;
  for (int p = 0; p < kPhaseCount; ++p) {
    const auto& cost = phases_[p];
    breakdown[phase_name(static_cast<Phase>(p))] = {
        {"flops", cost.flops},
        {"words", cost.words},
        {"messages", cost.messages}};
  }
  report["breakdown"] = std::move(breakdown);
  report["predicted_seconds"] = predicted_seconds();
  report["params"] = {{"gamma", machine_.gamma},
                      {"beta", machine_.beta},
                      {"phi", machine_.phi},
                      {"mu", machine_.mu},
                      {"shards", machine_.shards}};
  if (!shard_flops_.empty()) {
    report["shard_flops"] = shard_flops_;
    const double peak = *std::max_element(shard_flops_.begin(),
                                          shard_flops_.end());
    double mean = 0.0;
    for (double v : shard_flops_) mean += v;
    mean /= static_cast<double>(shard_flops_.size());
    report["shard_imbalance"] = mean > 0.0 ? peak / mean : 1.0;
  }
  return report.dump(indent);
}

void charge_allreduce(CostLedger& ledger, std::uint64_t words_per_shard,
                      Index shards) {
  ledger.charge_allreduce(words_per_shard, shards);
}

double predict_time(const CostLedger& ledger, const MachineParams& machine) {
  machine.validate();
  return machine.gamma * ledger.flops() +
         machine.beta * static_cast<double>(ledger.words()) +
         machine.phi * static_cast<double>(ledger.messages());
}

CostBound theorem_bound(CostAlgorithm algorithm, double m, double n, double f,
                        double b, double s, double H, Index P, double mu) {
  if (!(m > 0.0) || !(n > 0.0) || !(f > 0.0) || !(b > 0.0) || !(s > 0.0) ||
      !(H > 0.0) || mu < 0.0) {
    throw std::invalid_argument("theorem_bound: parameters must be positive");
  }
  if (P < 1) throw std::invalid_argument("theorem_bound: P must be >= 1");
  if (algorithm == CostAlgorithm::kBdcd && s != 1.0) {
    throw std::invalid_argument("theorem_bound: classical bound requires s=1");
  }
  const auto rounds = static_cast<double>(allreduce_rounds(P));
  CostBound bound;
  bound.words = H * b * m;
  if (algorithm == CostAlgorithm::kBdcd) {
    bound.flops =
        H * (b * f * m * n / static_cast<double>(P) + mu * b * m + b * b * b);
    bound.messages = H * rounds;
  } else {
    const double outer = H / s;
    const double corrections = s * (s - 1.0) / 2.0;
    bound.flops = outer * (s * b * f * m * n / static_cast<double>(P) +
                           mu * s * b * m + s * b * b * b +
                           corrections * b * b);
    bound.messages = outer * rounds;
  }
  return bound;
}

}  // namespace kcd
