#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <variant>

#include "kcd/bdcd.hpp"
#include "kcd/costmodel.hpp"
#include "kcd/dcd.hpp"
#include "kcd/kernel.hpp"
#include "kcd/solution.hpp"

namespace kcd::cli {

enum class Command {
  kTrainKsvm,
  kTrainKrr,
  kVerifyEquivalence,
  kCostReport,
  kGenSynthetic,
};

// A fully parsed invocation. Exactly one problem configuration is present;
// the dataset is either a LIBSVM file or a synthetic shape.
struct RunSpec {
  Command command = Command::kTrainKsvm;

  std::optional<std::filesystem::path> data_path;
  Index synthetic_rows = 128;
  Index synthetic_cols = 256;
  Index synthetic_nnz = 32;
  Task synthetic_task = Task::kClassification;

  KernelSpec kernel;
  std::variant<SvmConfig, KrrConfig> problem;
  MachineParams machine;

  std::optional<std::filesystem::path> out;
  Index trace_interval = 10;
  double stop_below = 1e-8;  // negative disables early stopping
  double tolerance = 1e-8;   // equivalence verdict threshold
  Index oracle_cap = 4096;
};

// Executes a parsed invocation; returns the process exit status. Artifacts
// (trace CSV, cost JSON, datasets) are written via temp-file-plus-rename, so
// a failed run leaves no partial outputs.
int run(const RunSpec& spec);

// Parses command-line arguments and runs. Exit status: 0 success, 2 bad
// input/output path, 3 parse or format error in a dataset, 4 numerical
// failure, 1 other errors (CLI usage errors report through the parser's own
// codes).
int dispatch(int argc, const char* const* argv);
int dispatch(std::span<const std::string> args);

// Writes a trace as CSV ("iteration,metric,value", 17 significant digits,
// sorted by iteration) via temp-file-plus-rename.
void emit_trace(std::span<const ConvergenceMetric> metrics,
                const std::filesystem::path& path);

}  // namespace kcd::cli
