#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kcd/sparse.hpp"
#include "kcd/types.hpp"

namespace kcd {

enum class Task { kClassification, kRegression };

// A feature matrix paired with one label per row.
struct LabeledDataset {
  SparseMatrix features;
  std::vector<double> labels;

  Index rows() const noexcept { return features.rows(); }
  Index cols() const noexcept { return features.cols(); }

  friend bool operator==(const LabeledDataset& a, const LabeledDataset& b) {
    return a.features == b.features && a.labels == b.labels;
  }
};

// Parses LIBSVM text: one example per line, "label idx:val idx:val ...",
// 1-based strictly increasing feature indices per line, blank lines are
// skipped. Feature count is the max index seen unless
// `expected_features` pins it, in which case a larger index is a format
// error. Lexical problems raise parse_error, structural ones format_error,
// both carrying the 1-based line number.
LabeledDataset parse_libsvm(std::istream& in,
                            std::optional<Index> expected_features = {});
LabeledDataset parse_libsvm(std::string_view text,
                            std::optional<Index> expected_features = {});
LabeledDataset parse_libsvm_file(const std::filesystem::path& path,
                                 std::optional<Index> expected_features = {});

// Writes LIBSVM text with round-trip-exact ("%.17g") formatting so that
// parse(serialize(d)) == d exactly.
void serialize_libsvm(const LabeledDataset& dataset, std::ostream& out);
std::string serialize_libsvm(const LabeledDataset& dataset);

// Classification: maps a two-valued label set onto {-1, +1}, the larger raw
// value becoming +1; a one-valued or more-than-two-valued set is a format
// error. Regression: labels pass through unchanged.
std::vector<double> normalize_labels(std::span<const double> raw, Task task);

// Contiguous 1-D partition of columns [0, n) into `shards` half-open ranges.
// Ranges are nonoverlapping, cover [0, n), and sizes differ by at most one
// with larger shards first.
struct ColumnPartition {
  Index columns = 0;
  std::vector<std::pair<Index, Index>> ranges;

  Index shards() const noexcept { return static_cast<Index>(ranges.size()); }
};

ColumnPartition partition_columns(Index columns, Index shards);

// Deterministic synthetic problem: each row has exactly nnz_per_row distinct
// features, uniformly placed, with standard normal values. Classification
// labels are +/-1 from the sign of a planted linear model, regression labels
// are the planted response plus noise. One seed fixes the whole dataset
// bitwise.
LabeledDataset generate_synthetic(Index rows, Index columns, Index nnz_per_row,
                                  std::uint64_t seed, Task task);

}  // namespace kcd
