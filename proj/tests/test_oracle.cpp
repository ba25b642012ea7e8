// Reference oracles: closed-form ridge solutions, SVM primal/dual objectives,
// duality gaps, and relative-error metrics. These are the independent
// yardsticks the solver tests measure against, so they get their own worked
// examples here.

#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "kcd/bdcd.hpp"
#include "kcd/dataset.hpp"
#include "kcd/dcd.hpp"
#include "kcd/oracle.hpp"
#include "kcd/sampling.hpp"
#include "kcd/types.hpp"

namespace {

using kcd::Index;

kcd::SparseMatrix dense(Index rows, Index cols,
                        std::initializer_list<double> entries) {
  std::vector<double> buf(entries);
  return kcd::SparseMatrix::from_dense(rows, cols, buf);
}

}  // namespace

TEST_CASE("kernel_gram matches the panel machinery") {
  const kcd::LabeledDataset data =
      kcd::generate_synthetic(10, 18, 5, 41, kcd::Task::kClassification);
  const kcd::KernelSpec specs[] = {kcd::KernelSpec::linear(),
                                   kcd::KernelSpec::polynomial(1.0, 2),
                                   kcd::KernelSpec::rbf(0.4)};
  std::vector<Index> rows(10);
  for (Index i = 0; i < 10; ++i) rows[static_cast<std::size_t>(i)] = i;
  for (const kcd::KernelSpec& spec : specs) {
    CAPTURE(kcd::kernel_name(spec.kind));
    const Eigen::MatrixXd gram = kcd::kernel_gram(spec, data.features);
    const Eigen::MatrixXd panel =
        kcd::sampled_panel(spec, data.features, rows).values;
    CHECK((gram - panel).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("gram cap guards quadratic allocations") {
  const kcd::LabeledDataset data =
      kcd::generate_synthetic(5, 8, 3, 2, kcd::Task::kRegression);
  CHECK_NOTHROW((void)kcd::kernel_gram(kcd::KernelSpec::linear(),
                                       data.features, 5));
  CHECK_THROWS_AS((void)kcd::kernel_gram(kcd::KernelSpec::linear(),
                                         data.features, 4),
                  kcd::resource_error);
  CHECK_THROWS_AS((void)kcd::krr_closed_form(data.features, data.labels, 1.0,
                                             kcd::KernelSpec::linear(), 4),
                  kcd::resource_error);
}

TEST_CASE("ridge closed form on the identity") {
  // Features I2 make K = I, so ((1/lambda) K + m I) = 3 I at lambda = 1.
  const kcd::SparseMatrix eye = dense(2, 2, {1.0, 0.0, 0.0, 1.0});
  const std::vector<double> y = {1.0, 2.0};
  const Eigen::VectorXd alpha =
      kcd::krr_closed_form(eye, y, 1.0, kcd::KernelSpec::linear());
  REQUIRE(alpha.size() == 2);
  CHECK(alpha[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(alpha[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));

  // The dual objective at the optimum collapses to -0.5 y'alpha = -5/6, and
  // any perturbation can only increase it.
  const double at_opt =
      kcd::krr_dual_objective(alpha, eye, y, 1.0, kcd::KernelSpec::linear());
  CHECK(at_opt == doctest::Approx(-5.0 / 6.0).epsilon(1e-14));
  Eigen::VectorXd nudged = alpha;
  nudged[0] += 0.01;
  CHECK(kcd::krr_dual_objective(nudged, eye, y, 1.0,
                                kcd::KernelSpec::linear()) > at_opt);
}

TEST_CASE("huge lambda washes out the kernel term") {
  const kcd::LabeledDataset data =
      kcd::generate_synthetic(6, 9, 4, 13, kcd::Task::kRegression);
  const Eigen::VectorXd alpha = kcd::krr_closed_form(
      data.features, data.labels, 1e12, kcd::KernelSpec::linear());
  for (Index i = 0; i < 6; ++i) {
    CHECK(alpha[i] ==
          doctest::Approx(data.labels[static_cast<std::size_t>(i)] / 6.0)
              .epsilon(1e-9));
  }
}

TEST_CASE("ridge closed form satisfies the normal equations") {
  const kcd::LabeledDataset data =
      kcd::generate_synthetic(12, 5, 3, 99, kcd::Task::kRegression);
  const kcd::KernelSpec kernel = kcd::KernelSpec::rbf(0.5);
  const double lambda = 0.1;
  const Eigen::VectorXd alpha =
      kcd::krr_closed_form(data.features, data.labels, lambda, kernel);
  const Eigen::MatrixXd gram = kcd::kernel_gram(kernel, data.features);
  const Eigen::Map<const Eigen::VectorXd> y(data.labels.data(), 12);
  const Eigen::VectorXd residual =
      (1.0 / lambda) * (gram * alpha) + 12.0 * alpha - y;
  CHECK(residual.norm() <= 1e-10);
}

TEST_CASE("svm dual objective worked example") {
  // One signed row [2]: quadratic form 4, so the dual at alpha is
  // 0.5*4*alpha^2 - alpha.
  const kcd::SparseMatrix feats = dense(1, 1, {2.0});
  const std::vector<double> labels = {1.0};
  Eigen::VectorXd alpha(1);
  alpha[0] = 0.25;

  kcd::SvmConfig l1;
  l1.variant = kcd::SvmVariant::kL1;
  l1.C = 1.0;

  SUBCASE("zero is the baseline") {
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(1);
    CHECK(kcd::svm_dual_objective(zero, feats, labels,
                                  kcd::KernelSpec::linear(), l1) == 0.0);
  }
  SUBCASE("interior point value") {
    CHECK(kcd::svm_dual_objective(alpha, feats, labels,
                                  kcd::KernelSpec::linear(), l1) ==
          doctest::Approx(-0.125).epsilon(1e-15));
  }
  SUBCASE("squared hinge adds the diagonal shift term") {
    kcd::SvmConfig l1_same_c = l1;
    l1_same_c.C = 0.5;
    kcd::SvmConfig l2 = l1_same_c;
    l2.variant = kcd::SvmVariant::kL2;
    const double base = kcd::svm_dual_objective(
        alpha, feats, labels, kcd::KernelSpec::linear(), l1_same_c);
    const double shifted = kcd::svm_dual_objective(
        alpha, feats, labels, kcd::KernelSpec::linear(), l2);
    // omega/2 * alpha^2 with omega = 1/(2C) = 1: + 0.03125.
    CHECK(shifted == doctest::Approx(base + 0.03125).epsilon(1e-15));
  }
  SUBCASE("infeasible points are rejected") {
    Eigen::VectorXd negative(1);
    negative[0] = -0.1;
    CHECK_THROWS_AS((void)kcd::svm_dual_objective(
                        negative, feats, labels, kcd::KernelSpec::linear(),
                        l1),
                    std::domain_error);
    Eigen::VectorXd above_box(1);
    above_box[0] = 1.5;
    CHECK_THROWS_AS((void)kcd::svm_dual_objective(
                        above_box, feats, labels, kcd::KernelSpec::linear(),
                        l1),
                    std::domain_error);
    // The squared-hinge cone has no upper bound.
    kcd::SvmConfig l2 = l1;
    l2.variant = kcd::SvmVariant::kL2;
    CHECK_NOTHROW((void)kcd::svm_dual_objective(
        above_box, feats, labels, kcd::KernelSpec::linear(), l2));
  }
}

TEST_CASE("svm primal objective worked example") {
  const kcd::SparseMatrix feats = dense(1, 1, {2.0});
  const std::vector<double> labels = {1.0};
  kcd::SvmConfig config;
  config.C = 1.0;

  // At alpha = 0 every margin is violated by exactly 1: primal = C*m.
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(1);
  CHECK(kcd::svm_primal_objective(zero, feats, labels,
                                  kcd::KernelSpec::linear(), config) == 1.0);
  kcd::SvmConfig l2 = config;
  l2.variant = kcd::SvmVariant::kL2;
  CHECK(kcd::svm_primal_objective(zero, feats, labels,
                                  kcd::KernelSpec::linear(), l2) == 1.0);

  // The optimum alpha* = 0.25 gives margin exactly 1 and ||w||^2 = 0.25.
  Eigen::VectorXd opt(1);
  opt[0] = 0.25;
  CHECK(kcd::svm_primal_objective(opt, feats, labels,
                                  kcd::KernelSpec::linear(), config) ==
        doctest::Approx(0.125).epsilon(1e-15));
  const kcd::ConvergenceMetric gap = kcd::duality_gap(
      opt, feats, labels, kcd::KernelSpec::linear(), config, 17);
  CHECK(gap.kind == kcd::MetricKind::kDualityGap);
  CHECK(gap.iteration == 17);
  CHECK(std::abs(gap.value) <= 1e-12);
}

TEST_CASE("duality gap is nonnegative at random feasible points") {
  const kcd::LabeledDataset data =
      kcd::generate_synthetic(14, 20, 6, 3571, kcd::Task::kClassification);
  const kcd::KernelSpec specs[] = {kcd::KernelSpec::linear(),
                                   kcd::KernelSpec::polynomial(1.0, 3),
                                   kcd::KernelSpec::rbf(0.3)};
  std::mt19937_64 engine(7);
  for (const kcd::KernelSpec& spec : specs) {
    CAPTURE(kcd::kernel_name(spec.kind));
    for (kcd::SvmVariant variant :
         {kcd::SvmVariant::kL1, kcd::SvmVariant::kL2}) {
      kcd::SvmConfig config;
      config.variant = variant;
      config.C = 0.75;
      for (int round = 0; round < 5; ++round) {
        Eigen::VectorXd alpha(14);
        for (Index i = 0; i < 14; ++i) {
          const double u =
              static_cast<double>(kcd::rng::uniform_below(engine, 1u << 20)) /
              static_cast<double>(1u << 20);
          alpha[i] = config.C * u;
        }
        const kcd::ConvergenceMetric gap = kcd::duality_gap(
            alpha, data.features, data.labels, spec, config);
        CHECK(gap.value >= -1e-9);
      }
    }
  }
}

TEST_CASE("SvmObjectives exposes the signed gram") {
  const kcd::SparseMatrix feats = dense(2, 1, {2.0, -1.0});
  const std::vector<double> labels = {1.0, -1.0};
  kcd::SvmConfig config;
  kcd::SvmObjectives oracle(feats, labels, kcd::KernelSpec::linear(), config);
  // Signed rows are [2] and [1]; linear gram [[4, 2], [2, 1]].
  CHECK(oracle.gram()(0, 0) == 4.0);
  CHECK(oracle.gram()(0, 1) == 2.0);
  CHECK(oracle.gram()(1, 0) == 2.0);
  CHECK(oracle.gram()(1, 1) == 1.0);

  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(2);
  CHECK(oracle.dual(zero) == 0.0);
  CHECK(oracle.primal(zero) == 2.0);
  CHECK(oracle.gap(zero, 3).iteration == 3);
  CHECK(oracle.gap(zero, 3).value == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("relative_error metric") {
  Eigen::VectorXd reference(3);
  reference << 1.0, -2.0, 2.0;

  SUBCASE("exact match is zero") {
    const kcd::ConvergenceMetric metric =
        kcd::relative_error(reference, reference, 9);
    CHECK(metric.kind == kcd::MetricKind::kRelativeError);
    CHECK(metric.iteration == 9);
    CHECK(metric.value == 0.0);
  }
  SUBCASE("zero candidate scores one") {
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(3);
    CHECK(kcd::relative_error(zero, reference).value ==
          doctest::Approx(1.0).epsilon(1e-15));
  }
  SUBCASE("doubled candidate scores one") {
    const Eigen::VectorXd doubled = 2.0 * reference;
    CHECK(kcd::relative_error(doubled, reference).value ==
          doctest::Approx(1.0).epsilon(1e-15));
  }
  SUBCASE("zero reference is rejected") {
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(3);
    CHECK_THROWS_AS((void)kcd::relative_error(reference, zero),
                    std::domain_error);
  }
}

TEST_CASE("solver traces agree with the oracle objectives") {
  SUBCASE("coordinate descent dual objective") {
    const kcd::LabeledDataset data =
        kcd::generate_synthetic(16, 24, 6, 555, kcd::Task::kClassification);
    kcd::SvmConfig config;
    config.variant = kcd::SvmVariant::kL1;
    config.C = 1.0;
    config.iterations = 64;
    config.seed = 5;
    kcd::CoordinateStream stream(config.seed, 16);
    kcd::SolveOptions options;
    options.trace_interval = 16;
    options.metric = kcd::MetricKind::kDualObjective;
    const kcd::DualSolution sol =
        kcd::solve_dcd(data.features, data.labels, config,
                       kcd::KernelSpec::rbf(0.5), stream, options);
    REQUIRE(!sol.trace.empty());
    const double reported = sol.trace.back().value;
    const double direct = kcd::svm_dual_objective(
        sol.alpha, data.features, data.labels, kcd::KernelSpec::rbf(0.5),
        config);
    CHECK(reported == doctest::Approx(direct).epsilon(1e-10));
  }
  SUBCASE("block descent dual objective") {
    const kcd::LabeledDataset data =
        kcd::generate_synthetic(12, 10, 4, 808, kcd::Task::kRegression);
    kcd::KrrConfig config;
    config.lambda = 0.5;
    config.block_size = 3;
    config.iterations = 32;
    config.seed = 11;
    kcd::CoordinateStream stream(config.seed, 12);
    kcd::SolveOptions options;
    options.trace_interval = 8;
    options.metric = kcd::MetricKind::kDualObjective;
    const kcd::DualSolution sol =
        kcd::solve_bdcd(data.features, data.labels, config,
                        kcd::KernelSpec::linear(), stream, options);
    REQUIRE(!sol.trace.empty());
    const double reported = sol.trace.back().value;
    const double direct =
        kcd::krr_dual_objective(sol.alpha, data.features, data.labels,
                                config.lambda, kcd::KernelSpec::linear());
    CHECK(reported == doctest::Approx(direct).epsilon(1e-10));
  }
}
