#include <doctest.h>

#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "kcd/costmodel.hpp"

using kcd::CostAlgorithm;
using kcd::CostBound;
using kcd::CostLedger;
using kcd::Index;
using kcd::MachineParams;
using kcd::Phase;

TEST_CASE("allreduce_rounds is ceil(log2 P)") {
  CHECK(kcd::allreduce_rounds(1) == 0);
  CHECK(kcd::allreduce_rounds(2) == 1);
  CHECK(kcd::allreduce_rounds(3) == 2);
  CHECK(kcd::allreduce_rounds(4) == 2);
  CHECK(kcd::allreduce_rounds(5) == 3);
  CHECK(kcd::allreduce_rounds(8) == 3);
  CHECK(kcd::allreduce_rounds(9) == 4);
  CHECK(kcd::allreduce_rounds(512) == 9);
  CHECK_THROWS_AS((void)kcd::allreduce_rounds(0), std::invalid_argument);
}

TEST_CASE("charge_allreduce accumulates words and log-P message rounds") {
  CostLedger ledger;
  kcd::charge_allreduce(ledger, 1600, 4);
  CHECK(ledger.words() == 1600);
  CHECK(ledger.messages() == 2);

  kcd::charge_allreduce(ledger, 10, 1);  // single shard: no rounds
  CHECK(ledger.words() == 1610);
  CHECK(ledger.messages() == 2);

  // one fused panel reduction for s=8 blocks of size b=2 over m=100 rows
  CostLedger fused;
  kcd::charge_allreduce(fused, 8 * 2 * 100, 4);
  CHECK(fused.words() == 1600);
  CHECK(fused.messages() == 2);
}

TEST_CASE("predict_time is the linear Hockney form") {
  CostLedger empty;
  CHECK(empty.predicted_seconds() == 0.0);

  MachineParams unit;
  unit.gamma = 1.0;
  unit.beta = 1.0;
  unit.phi = 1.0;
  CostLedger ledger(unit);
  ledger.charge_flops(Phase::kSolve, 10.0);
  kcd::charge_allreduce(ledger, 5, 4);  // 5 words, 2 rounds
  CHECK(ledger.flops() == 10.0);
  CHECK(ledger.words() == 5);
  CHECK(ledger.messages() == 2);
  CHECK(ledger.predicted_seconds() == doctest::Approx(17.0));

  MachineParams doubled = unit;
  doubled.phi = 2.0;
  CHECK(kcd::predict_time(ledger, doubled) == doctest::Approx(19.0));
}

TEST_CASE("phase breakdown always sums to the totals") {
  CostLedger ledger;
  ledger.charge_flops(Phase::kGradientCorrection, 3.5);
  ledger.charge_flops(Phase::kSolve, 8.0);
  const std::vector<double> shards{3.0, 5.0, 2.0};
  ledger.charge_panel_flops(shards, 4.0);
  kcd::charge_allreduce(ledger, 12, 8);

  double flop_sum = 0.0;
  std::uint64_t word_sum = 0;
  std::uint64_t message_sum = 0;
  for (int p = 0; p < kcd::kPhaseCount; ++p) {
    const auto& cost = ledger.phase(static_cast<Phase>(p));
    flop_sum += cost.flops;
    word_sum += cost.words;
    message_sum += cost.messages;
  }
  CHECK(flop_sum == ledger.flops());
  CHECK(word_sum == ledger.words());
  CHECK(message_sum == ledger.messages());

  // critical path takes the max shard plus the redundant term
  CHECK(ledger.phase(Phase::kKernelCompute).flops == doctest::Approx(9.0));
  REQUIRE(ledger.shard_flops().size() == 3);
  CHECK(ledger.shard_flops()[0] == doctest::Approx(7.0));
  CHECK(ledger.shard_flops()[1] == doctest::Approx(9.0));
  CHECK(ledger.shard_flops()[2] == doctest::Approx(6.0));
}

TEST_CASE("charge guards reject malformed input") {
  CostLedger ledger;
  CHECK_THROWS_AS(ledger.charge_flops(Phase::kSolve, -1.0),
                  std::invalid_argument);
  const std::vector<double> empty;
  CHECK_THROWS_AS(ledger.charge_panel_flops(empty, 0.0),
                  std::invalid_argument);
  const std::vector<double> three{1.0, 2.0, 3.0};
  const std::vector<double> two{1.0, 2.0};
  ledger.charge_panel_flops(three, 0.0);
  CHECK_THROWS_AS(ledger.charge_panel_flops(two, 0.0), std::invalid_argument);

  MachineParams bad;
  bad.gamma = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  MachineParams bad_shards;
  bad_shards.shards = 0;
  CHECK_THROWS_AS(bad_shards.validate(), std::invalid_argument);
}

TEST_CASE("ledger report serializes to well-formed JSON") {
  CostLedger ledger;
  const std::vector<double> shards{6.0, 2.0};
  ledger.charge_panel_flops(shards, 0.0);
  kcd::charge_allreduce(ledger, 7, 2);
  const auto report = nlohmann::json::parse(ledger.report_json());
  CHECK(report["flops"].get<double>() == 6.0);
  CHECK(report["words"].get<std::uint64_t>() == 7);
  CHECK(report["messages"].get<std::uint64_t>() == 1);
  CHECK(report["breakdown"]["allreduce"]["words"].get<std::uint64_t>() == 7);
  CHECK(report["params"]["shards"].get<Index>() == 1);
  CHECK(report["shard_imbalance"].get<double>() == doctest::Approx(1.5));
}

TEST_CASE("theorem bounds: words are s-invariant and messages shrink by s") {
  // classical: H(bfmn/P + mu*bm + b^3) flops, Hbm words, H log2 P messages
  const CostBound classical = kcd::theorem_bound(
      CostAlgorithm::kBdcd, 100, 200, 0.5, 2, 1, 16, 4, 8.0);
  CHECK(classical.words == 16 * 2 * 100);
  CHECK(classical.messages == 16 * 2);
  CHECK(classical.flops ==
        doctest::Approx(16 * (2 * 0.5 * 100 * 200 / 4 + 8.0 * 2 * 100 + 8)));

  for (double s : {2.0, 4.0, 8.0}) {
    const CostBound fused = kcd::theorem_bound(
        CostAlgorithm::kSstepBdcd, 100, 200, 0.5, 2, s, 16, 4, 8.0);
    CHECK(fused.words == classical.words);  // bandwidth never changes with s
    CHECK(fused.messages == doctest::Approx(classical.messages / s));
  }

  // s = 1 collapses the fused bound onto the classical one (C(1,2) = 0)
  const CostBound degenerate = kcd::theorem_bound(
      CostAlgorithm::kSstepBdcd, 100, 200, 0.5, 2, 1, 16, 4, 8.0);
  CHECK(degenerate.flops == doctest::Approx(classical.flops));
  CHECK(degenerate.words == classical.words);
  CHECK(degenerate.messages == classical.messages);

  // the correction term adds C(s,2) b^2 flops per outer iteration
  const CostBound fused2 = kcd::theorem_bound(
      CostAlgorithm::kSstepBdcd, 100, 200, 0.5, 2, 2, 16, 4, 8.0);
  CHECK(fused2.flops - classical.flops ==
        doctest::Approx((16.0 / 2.0) * 1.0 * 4.0));
}

TEST_CASE("theorem_bound validates its arguments") {
  CHECK_THROWS_AS((void)kcd::theorem_bound(CostAlgorithm::kBdcd, 100, 200,
                                           0.5, 2, 2, 16, 4, 8.0),
                  std::invalid_argument);  // classical requires s = 1
  CHECK_THROWS_AS((void)kcd::theorem_bound(CostAlgorithm::kBdcd, 0, 200, 0.5,
                                           2, 1, 16, 4, 8.0),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)kcd::theorem_bound(CostAlgorithm::kBdcd, 100, 200,
                                           0.5, 2, 1, 16, 0, 8.0),
                  std::invalid_argument);
}
