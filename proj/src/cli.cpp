#include "kcd/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <system_error>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kcd/dataset.hpp"
#include "kcd/oracle.hpp"
#include "kcd/sampling.hpp"
#include "kcd/types.hpp"

namespace kcd::cli {
namespace {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// All artifacts go through here: write to <path>.tmp, then rename into
// place, so readers never observe a partially written file and a failed run
// leaves nothing behind.
void write_file_atomic(const std::filesystem::path& path,
                       const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw resource_error("cannot open output file: " + tmp.string());
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw resource_error("failed while writing output file: " +
                           tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::error_code ec2;
    std::filesystem::remove(tmp, ec2);
    throw resource_error("cannot move output file into place: " +
                         path.string() + " (" + ec.message() + ")");
  }
}

std::uint64_t problem_seed(const RunSpec& spec) {
  if (const auto* svm = std::get_if<SvmConfig>(&spec.problem)) {
    return svm->seed;
  }
  return std::get<KrrConfig>(spec.problem).seed;
}

LabeledDataset load_dataset(const RunSpec& spec, Task task) {
  if (spec.data_path) {
    LabeledDataset data = parse_libsvm_file(*spec.data_path);
    data.labels = normalize_labels(data.labels, task);
    return data;
  }
  return generate_synthetic(spec.synthetic_rows, spec.synthetic_cols,
                            spec.synthetic_nnz, problem_seed(spec), task);
}

void write_artifacts(const RunSpec& spec, const DualSolution& solution,
                     const CostLedger& ledger, std::vector<std::string>* note) {
  if (!spec.out) {
    return;
  }
  std::filesystem::path trace_path = *spec.out;
  trace_path += ".trace.csv";
  std::filesystem::path cost_path = *spec.out;
  cost_path += ".cost.json";
  emit_trace(solution.trace, trace_path);
  write_file_atomic(cost_path, ledger.report_json(2) + "\n");
  note->push_back(trace_path.string());
  note->push_back(cost_path.string());
}

void print_train_summary(const std::string& command, const LabeledDataset& data,
                         Index s, const DualSolution& solution,
                         const CostLedger& ledger,
                         const std::vector<std::string>& artifacts) {
  const ConvergenceMetric& last = solution.trace.back();
  std::cout << command << ": m=" << data.features.rows()
            << " n=" << data.features.cols() << " s=" << s
            << " iterations=" << solution.iterations_run << " final "
            << metric_name(last.kind) << "=" << format_double(last.value)
            << " predicted_seconds=" << format_double(ledger.predicted_seconds())
            << "\n";
  for (const std::string& path : artifacts) {
    std::cout << "wrote " << path << "\n";
  }
}

int run_train_ksvm(const RunSpec& spec) {
  const SvmConfig& config = std::get<SvmConfig>(spec.problem);
  LabeledDataset data = load_dataset(spec, Task::kClassification);
  const Index m = data.features.rows();

  CostLedger ledger(spec.machine);
  SolveOptions options;
  options.ledger = &ledger;
  options.trace_interval = spec.trace_interval;
  options.metric = MetricKind::kDualityGap;
  if (spec.stop_below >= 0) {
    options.stop_below = spec.stop_below;
  }

  CoordinateStream stream(config.seed, m);
  DualSolution solution =
      config.s > 1
          ? solve_sstep_dcd(data.features, data.labels, config, spec.kernel,
                            stream, options)
          : solve_dcd(data.features, data.labels, config, spec.kernel, stream,
                      options);

  std::vector<std::string> artifacts;
  write_artifacts(spec, solution, ledger, &artifacts);
  print_train_summary("train-ksvm", data, config.s, solution, ledger,
                      artifacts);
  return 0;
}

int run_train_krr(const RunSpec& spec) {
  const KrrConfig& config = std::get<KrrConfig>(spec.problem);
  LabeledDataset data = load_dataset(spec, Task::kRegression);
  const Index m = data.features.rows();

  CostLedger ledger(spec.machine);
  SolveOptions options;
  options.ledger = &ledger;
  options.trace_interval = spec.trace_interval;

  // Against a closed-form reference the trace reports relative error; for
  // problems too large to factor densely it falls back to the objective.
  std::vector<double> reference;
  if (m <= spec.oracle_cap) {
    Eigen::VectorXd exact =
        krr_closed_form(data.features, data.labels, config.lambda, spec.kernel,
                        spec.oracle_cap);
    reference.assign(exact.data(), exact.data() + exact.size());
    options.metric = MetricKind::kRelativeError;
    options.reference = reference;
    if (spec.stop_below >= 0) {
      options.stop_below = spec.stop_below;
    }
  } else {
    options.metric = MetricKind::kDualObjective;
  }

  CoordinateStream stream(config.seed, m);
  DualSolution solution =
      config.s > 1
          ? solve_sstep_bdcd(data.features, data.labels, config, spec.kernel,
                             stream, options)
          : solve_bdcd(data.features, data.labels, config, spec.kernel, stream,
                       options);

  std::vector<std::string> artifacts;
  write_artifacts(spec, solution, ledger, &artifacts);
  print_train_summary("train-krr", data, config.s, solution, ledger,
                      artifacts);
  return 0;
}

double relative_deviation(const Eigen::VectorXd& candidate,
                          const Eigen::VectorXd& baseline) {
  return (candidate - baseline).norm() / std::max(baseline.norm(), 1.0);
}

int run_verify_equivalence(const RunSpec& spec) {
  double deviation = 0;
  Index s = 1;
  if (const auto* svm = std::get_if<SvmConfig>(&spec.problem)) {
    LabeledDataset data = load_dataset(spec, Task::kClassification);
    const Index m = data.features.rows();
    s = svm->s;
    SvmConfig classical = *svm;
    classical.s = 1;
    CoordinateStream stream_classical(svm->seed, m);
    CoordinateStream stream_sstep(svm->seed, m);
    DualSolution base = solve_dcd(data.features, data.labels, classical,
                                  spec.kernel, stream_classical, {});
    DualSolution fused = solve_sstep_dcd(data.features, data.labels, *svm,
                                         spec.kernel, stream_sstep, {});
    deviation = relative_deviation(fused.alpha, base.alpha);
  } else {
    const KrrConfig& krr = std::get<KrrConfig>(spec.problem);
    LabeledDataset data = load_dataset(spec, Task::kRegression);
    const Index m = data.features.rows();
    s = krr.s;
    KrrConfig classical = krr;
    classical.s = 1;
    CoordinateStream stream_classical(krr.seed, m);
    CoordinateStream stream_sstep(krr.seed, m);
    DualSolution base = solve_bdcd(data.features, data.labels, classical,
                                   spec.kernel, stream_classical, {});
    DualSolution fused = solve_sstep_bdcd(data.features, data.labels, krr,
                                          spec.kernel, stream_sstep, {});
    deviation = relative_deviation(fused.alpha, base.alpha);
  }

  std::cout << "verify-equivalence: s=" << s
            << " max relative deviation=" << format_double(deviation)
            << " tolerance=" << format_double(spec.tolerance) << "\n";
  if (deviation <= spec.tolerance) {
    std::cout << "equivalence holds\n";
    return 0;
  }
  std::cout << "equivalence VIOLATED\n";
  return 1;
}

int run_cost_report(const RunSpec& spec) {
  const bool is_svm = std::holds_alternative<SvmConfig>(spec.problem);
  Task task = is_svm ? Task::kClassification : Task::kRegression;
  LabeledDataset data = load_dataset(spec, task);
  const Index m = data.features.rows();
  const Index n = data.features.cols();
  if (data.features.nnz() == 0) {
    throw std::invalid_argument("cost-report requires a nonempty dataset");
  }
  const double density = data.features.density();

  Index s = 1;
  Index block = 1;
  Index iterations = 0;
  std::uint64_t seed = 0;
  if (is_svm) {
    const SvmConfig& svm = std::get<SvmConfig>(spec.problem);
    s = svm.s;
    iterations = svm.iterations;
    seed = svm.seed;
  } else {
    const KrrConfig& krr = std::get<KrrConfig>(spec.problem);
    s = krr.s;
    block = krr.block_size;
    iterations = krr.iterations;
    seed = krr.seed;
  }

  auto solve_with = [&](Index step) {
    CostLedger ledger(spec.machine);
    SolveOptions options;
    options.ledger = &ledger;
    CoordinateStream stream(seed, m);
    if (is_svm) {
      SvmConfig config = std::get<SvmConfig>(spec.problem);
      config.s = step;
      if (step > 1) {
        solve_sstep_dcd(data.features, data.labels, config, spec.kernel,
                        stream, options);
      } else {
        solve_dcd(data.features, data.labels, config, spec.kernel, stream,
                  options);
      }
    } else {
      KrrConfig config = std::get<KrrConfig>(spec.problem);
      config.s = step;
      if (step > 1) {
        solve_sstep_bdcd(data.features, data.labels, config, spec.kernel,
                         stream, options);
      } else {
        solve_bdcd(data.features, data.labels, config, spec.kernel, stream,
                   options);
      }
    }
    return ledger;
  };

  CostLedger classical = solve_with(1);
  CostLedger fused = solve_with(s);

  CostBound bound_classical = theorem_bound(
      CostAlgorithm::kBdcd, static_cast<double>(m), static_cast<double>(n),
      density, static_cast<double>(block), 1.0, static_cast<double>(iterations),
      spec.machine.shards, spec.machine.mu);
  CostBound bound_fused = theorem_bound(
      CostAlgorithm::kSstepBdcd, static_cast<double>(m),
      static_cast<double>(n), density, static_cast<double>(block),
      static_cast<double>(s), static_cast<double>(iterations),
      spec.machine.shards, spec.machine.mu);

  nlohmann::ordered_json doc;
  doc["problem"] = is_svm ? (std::get<SvmConfig>(spec.problem).variant ==
                                     SvmVariant::kL1
                                 ? "ksvm-l1"
                                 : "ksvm-l2")
                          : "krr";
  doc["dataset"] = {{"rows", m},
                    {"cols", n},
                    {"nnz", data.features.nnz()},
                    {"density", density}};
  doc["s"] = s;
  doc["block_size"] = block;
  doc["iterations"] = iterations;
  doc["classical"] = nlohmann::ordered_json::parse(classical.report_json());
  doc["sstep"] = nlohmann::ordered_json::parse(fused.report_json());
  auto bound_json = [](const CostBound& b) {
    return nlohmann::ordered_json{
        {"flops", b.flops}, {"words", b.words}, {"messages", b.messages}};
  };
  doc["theorem_bound"] = {{"classical", bound_json(bound_classical)},
                          {"sstep", bound_json(bound_fused)}};
  nlohmann::ordered_json ratios;
  ratios["words_sstep_over_classical"] =
      classical.words() > 0
          ? static_cast<double>(fused.words()) /
                static_cast<double>(classical.words())
          : 0.0;
  if (fused.messages() > 0) {
    ratios["messages_classical_over_sstep"] =
        static_cast<double>(classical.messages()) /
        static_cast<double>(fused.messages());
  } else {
    ratios["messages_classical_over_sstep"] = nullptr;
  }
  doc["ratios"] = ratios;

  if (spec.out) {
    std::filesystem::path cost_path = *spec.out;
    cost_path += ".cost.json";
    write_file_atomic(cost_path, doc.dump(2) + "\n");
    std::cout << "wrote " << cost_path.string() << "\n";
  } else {
    std::cout << doc.dump(2) << "\n";
  }
  std::cout << "cost-report: messages classical=" << classical.messages()
            << " sstep=" << fused.messages()
            << " words classical=" << classical.words()
            << " sstep=" << fused.words() << "\n";
  return 0;
}

int run_gen_synthetic(const RunSpec& spec) {
  if (!spec.out) {
    throw std::invalid_argument("gen-synthetic requires --out");
  }
  LabeledDataset data =
      generate_synthetic(spec.synthetic_rows, spec.synthetic_cols,
                         spec.synthetic_nnz, problem_seed(spec),
                         spec.synthetic_task);
  write_file_atomic(*spec.out, serialize_libsvm(data));
  std::cout << "gen-synthetic: m=" << data.features.rows()
            << " n=" << data.features.cols()
            << " nnz=" << data.features.nnz()
            << " density=" << format_double(data.features.density()) << "\n";
  std::cout << "wrote " << spec.out->string() << "\n";
  return 0;
}

int run_checked(const RunSpec& spec) {
  switch (spec.command) {
    case Command::kTrainKsvm:
      return run_train_ksvm(spec);
    case Command::kTrainKrr:
      return run_train_krr(spec);
    case Command::kVerifyEquivalence:
      return run_verify_equivalence(spec);
    case Command::kCostReport:
      return run_cost_report(spec);
    case Command::kGenSynthetic:
      return run_gen_synthetic(spec);
  }
  return 1;
}

// Shared flag bundle the subcommand definitions below fill in before the
// RunSpec is assembled.
struct FlagState {
  std::string data_path;
  Index rows = 128;
  Index cols = 256;
  Index nnz = 32;
  std::string task = "classification";

  std::string kernel = "linear";
  Index degree = 3;
  double coef0 = 0;
  double sigma = 1;

  std::string variant = "l1";
  double cost_c = 1;
  double lambda = 1;
  Index block_size = 16;
  Index iterations = 1000;
  Index s = 1;
  std::uint64_t seed = 0;

  double gamma = 1e-10;
  double beta = 4e-9;
  double phi = 1e-6;
  double mu = 8;
  Index shards = 1;

  std::string out;
  Index trace_every = 10;
  double stop_below = 1e-8;
  double tolerance = 1e-8;
  Index oracle_cap = 4096;
  std::string problem = "ksvm-l1";
};

void add_dataset_flags(CLI::App* cmd, FlagState* state) {
  cmd->add_option("--data", state->data_path,
                  "LIBSVM dataset file (synthetic data when omitted)");
  cmd->add_option("--rows", state->rows, "synthetic rows")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--cols", state->cols, "synthetic feature count")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--nnz-per-row", state->nnz,
                  "synthetic nonzeros per row")
      ->check(CLI::PositiveNumber);
}

void add_kernel_flags(CLI::App* cmd, FlagState* state) {
  cmd->add_option("--kernel", state->kernel, "kernel function")
      ->check(CLI::IsMember({"linear", "poly", "rbf"}));
  cmd->add_option("--degree", state->degree, "polynomial degree");
  cmd->add_option("--coef0", state->coef0, "polynomial additive constant");
  cmd->add_option("--sigma", state->sigma, "RBF bandwidth multiplier");
}

void add_solver_flags(CLI::App* cmd, FlagState* state) {
  cmd->add_option("--iters", state->iterations, "coordinate update count")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--s-step", state->s, "updates fused per communication round")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", state->seed, "sampling seed");
}

void add_machine_flags(CLI::App* cmd, FlagState* state) {
  cmd->add_option("--shards", state->shards, "feature-partition count")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--gamma", state->gamma, "seconds per flop");
  cmd->add_option("--beta", state->beta, "seconds per word");
  cmd->add_option("--phi", state->phi, "seconds per message");
  cmd->add_option("--mu", state->mu, "flops per kernel map application");
}

KernelSpec make_kernel(const FlagState& state) {
  if (state.kernel == "poly") {
    return KernelSpec::polynomial(state.coef0, state.degree);
  }
  if (state.kernel == "rbf") {
    return KernelSpec::rbf(state.sigma);
  }
  return KernelSpec::linear();
}

MachineParams make_machine(const FlagState& state) {
  MachineParams machine;
  machine.gamma = state.gamma;
  machine.beta = state.beta;
  machine.phi = state.phi;
  machine.mu = state.mu;
  machine.shards = state.shards;
  machine.validate();
  return machine;
}

SvmConfig make_svm(const FlagState& state, SvmVariant variant) {
  SvmConfig config;
  config.variant = variant;
  config.C = state.cost_c;
  config.iterations = state.iterations;
  config.s = state.s;
  config.seed = state.seed;
  config.validate();
  return config;
}

KrrConfig make_krr(const FlagState& state) {
  KrrConfig config;
  config.lambda = state.lambda;
  config.block_size = state.block_size;
  config.iterations = state.iterations;
  config.s = state.s;
  config.seed = state.seed;
  config.validate();
  return config;
}

RunSpec assemble(Command command, const FlagState& state) {
  RunSpec spec;
  spec.command = command;
  if (!state.data_path.empty()) {
    spec.data_path = state.data_path;
  }
  spec.synthetic_rows = state.rows;
  spec.synthetic_cols = state.cols;
  spec.synthetic_nnz = state.nnz;
  spec.synthetic_task = state.task == "regression" ? Task::kRegression
                                                   : Task::kClassification;
  spec.kernel = make_kernel(state);
  spec.machine = make_machine(state);
  if (!state.out.empty()) {
    spec.out = state.out;
  }
  spec.trace_interval = state.trace_every;
  spec.stop_below = state.stop_below;
  spec.tolerance = state.tolerance;
  spec.oracle_cap = state.oracle_cap;

  std::string problem = state.problem;
  if (command == Command::kTrainKsvm) {
    problem = state.variant == "l2" ? "ksvm-l2" : "ksvm-l1";
  } else if (command == Command::kTrainKrr ||
             command == Command::kGenSynthetic) {
    problem = command == Command::kTrainKrr ? "krr" : problem;
  }
  if (command == Command::kTrainKrr || problem == "krr") {
    spec.problem = make_krr(state);
    if (command == Command::kVerifyEquivalence ||
        command == Command::kCostReport) {
      spec.synthetic_task = Task::kRegression;
    }
  } else if (problem == "ksvm-l2") {
    spec.problem = make_svm(state, SvmVariant::kL2);
  } else {
    spec.problem = make_svm(state, SvmVariant::kL1);
  }
  return spec;
}

}  // namespace

void emit_trace(std::span<const ConvergenceMetric> metrics,
                const std::filesystem::path& path) {
  if (metrics.empty()) {
    throw std::invalid_argument("refusing to write an empty trace");
  }
  std::vector<ConvergenceMetric> rows(metrics.begin(), metrics.end());
  std::stable_sort(rows.begin(), rows.end(),
                   [](const ConvergenceMetric& a, const ConvergenceMetric& b) {
                     return a.iteration < b.iteration;
                   });
  std::string csv = "iteration,metric,value\n";
  for (const ConvergenceMetric& row : rows) {
    csv += std::to_string(row.iteration);
    csv += ',';
    csv += metric_name(row.kind);
    csv += ',';
    csv += format_double(row.value);
    csv += '\n';
  }
  write_file_atomic(path, csv);
}

int run(const RunSpec& spec) {
  try {
    return run_checked(spec);
  } catch (const parse_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const format_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const numerical_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const resource_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

int dispatch(int argc, const char* const* argv) {
  CLI::App app{"kernel coordinate descent toolkit"};
  app.require_subcommand(1);

  // Each subcommand owns its flag state so per-command defaults stay
  // independent.
  FlagState ksvm_state;
  FlagState krr_state;
  FlagState verify_state;
  verify_state.rows = 48;
  verify_state.cols = 24;
  verify_state.nnz = 12;
  verify_state.iterations = 64;
  verify_state.s = 4;
  FlagState cost_state;
  cost_state.iterations = 128;
  cost_state.s = 8;
  FlagState gen_state;
  gen_state.rows = 200;
  gen_state.cols = 80000;
  gen_state.nnz = 800;

  CLI::App* train_ksvm = app.add_subcommand(
      "train-ksvm", "train a kernel SVM by dual coordinate descent");
  add_dataset_flags(train_ksvm, &ksvm_state);
  add_kernel_flags(train_ksvm, &ksvm_state);
  add_solver_flags(train_ksvm, &ksvm_state);
  add_machine_flags(train_ksvm, &ksvm_state);
  train_ksvm->add_option("--variant", ksvm_state.variant, "hinge loss variant")
      ->check(CLI::IsMember({"l1", "l2"}));
  train_ksvm->add_option("--C", ksvm_state.cost_c, "misclassification penalty")
      ->check(CLI::PositiveNumber);
  train_ksvm->add_option("--trace-every", ksvm_state.trace_every,
                         "iterations between trace records")
      ->check(CLI::PositiveNumber);
  train_ksvm->add_option("--stop-gap", ksvm_state.stop_below,
                         "stop once the duality gap falls below this");
  train_ksvm->add_option("--out", ksvm_state.out, "artifact prefix");

  CLI::App* train_krr = app.add_subcommand(
      "train-krr", "train kernel ridge regression by block coordinate descent");
  add_dataset_flags(train_krr, &krr_state);
  add_kernel_flags(train_krr, &krr_state);
  add_solver_flags(train_krr, &krr_state);
  add_machine_flags(train_krr, &krr_state);
  train_krr->add_option("--lambda", krr_state.lambda, "ridge penalty")
      ->check(CLI::PositiveNumber);
  train_krr->add_option("--block-size", krr_state.block_size,
                        "coordinates updated per iteration")
      ->check(CLI::PositiveNumber);
  train_krr->add_option("--trace-every", krr_state.trace_every,
                        "iterations between trace records")
      ->check(CLI::PositiveNumber);
  train_krr->add_option("--stop-rel", krr_state.stop_below,
                        "stop once relative error falls below this");
  train_krr->add_option("--oracle-cap", krr_state.oracle_cap,
                        "largest row count factored for the exact reference")
      ->check(CLI::PositiveNumber);
  train_krr->add_option("--out", krr_state.out, "artifact prefix");

  CLI::App* verify = app.add_subcommand(
      "verify-equivalence",
      "check that fused and classical schedules produce the same iterates");
  add_dataset_flags(verify, &verify_state);
  add_kernel_flags(verify, &verify_state);
  add_solver_flags(verify, &verify_state);
  add_machine_flags(verify, &verify_state);
  verify->add_option("--problem", verify_state.problem, "problem family")
      ->check(CLI::IsMember({"ksvm-l1", "ksvm-l2", "krr"}));
  verify->add_option("--C", verify_state.cost_c, "misclassification penalty")
      ->check(CLI::PositiveNumber);
  verify->add_option("--lambda", verify_state.lambda, "ridge penalty")
      ->check(CLI::PositiveNumber);
  verify->add_option("--block-size", verify_state.block_size,
                     "coordinates updated per iteration")
      ->check(CLI::PositiveNumber);
  verify->add_option("--tolerance", verify_state.tolerance,
                     "largest accepted relative deviation")
      ->check(CLI::PositiveNumber);

  CLI::App* cost = app.add_subcommand(
      "cost-report",
      "account communication and computation for classical vs fused runs");
  add_dataset_flags(cost, &cost_state);
  add_kernel_flags(cost, &cost_state);
  add_solver_flags(cost, &cost_state);
  add_machine_flags(cost, &cost_state);
  cost->add_option("--problem", cost_state.problem, "problem family")
      ->check(CLI::IsMember({"ksvm-l1", "ksvm-l2", "krr"}));
  cost->add_option("--C", cost_state.cost_c, "misclassification penalty")
      ->check(CLI::PositiveNumber);
  cost->add_option("--lambda", cost_state.lambda, "ridge penalty")
      ->check(CLI::PositiveNumber);
  cost->add_option("--block-size", cost_state.block_size,
                   "coordinates updated per iteration")
      ->check(CLI::PositiveNumber);
  cost->add_option("--out", cost_state.out, "artifact prefix");

  CLI::App* gen = app.add_subcommand("gen-synthetic",
                                     "write a synthetic LIBSVM dataset");
  gen->add_option("--rows", gen_state.rows, "rows")
      ->check(CLI::PositiveNumber);
  gen->add_option("--cols", gen_state.cols, "feature count")
      ->check(CLI::PositiveNumber);
  gen->add_option("--nnz-per-row", gen_state.nnz, "nonzeros per row")
      ->check(CLI::PositiveNumber);
  gen->add_option("--task", gen_state.task, "label scheme")
      ->check(CLI::IsMember({"classification", "regression"}));
  gen->add_option("--seed", gen_state.seed, "sampling seed");
  gen->add_option("--out", gen_state.out, "output file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    Command command = Command::kTrainKsvm;
    const FlagState* state = &ksvm_state;
    if (train_krr->parsed()) {
      command = Command::kTrainKrr;
      state = &krr_state;
    } else if (verify->parsed()) {
      command = Command::kVerifyEquivalence;
      state = &verify_state;
    } else if (cost->parsed()) {
      command = Command::kCostReport;
      state = &cost_state;
    } else if (gen->parsed()) {
      command = Command::kGenSynthetic;
      state = &gen_state;
    }
    return run(assemble(command, *state));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

int dispatch(std::span<const std::string> args) {
  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("kcd");
  for (const std::string& arg : args) {
    argv.push_back(arg.c_str());
  }
  return dispatch(static_cast<int>(argv.size()), argv.data());
}

}  // namespace kcd::cli
