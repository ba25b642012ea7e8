#include "kcd/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "kcd/sampling.hpp"

namespace kcd {

namespace {

constexpr std::size_t npos = std::string::npos;

double parse_double_token(const std::string& line, std::size_t begin,
                          std::size_t end, std::size_t lineno,
                          const char* what) {
  if (begin >= end) throw parse_error(std::string("empty ") + what, lineno);
  // std::from_chars rejects an explicit leading '+', which LIBSVM labels use.
  if (line[begin] == '+') ++begin;
  double value = 0.0;
  const char* first = line.data() + begin;
  const char* last = line.data() + end;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw parse_error(std::string("malformed ") + what + " '" +
                          line.substr(begin, end - begin) + "'",
                      lineno);
  }
  return value;
}

Index parse_index_token(const std::string& line, std::size_t begin,
                        std::size_t end, std::size_t lineno) {
  if (begin >= end) throw parse_error("empty feature index", lineno);
  Index value = 0;
  const char* first = line.data() + begin;
  const char* last = line.data() + end;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw parse_error("malformed feature index '" +
                          line.substr(begin, end - begin) + "'",
                      lineno);
  }
  return value;
}

void format_real(std::string& out, double value) {
  char buf[40];
  const int len = std::snprintf(buf, sizeof buf, "%.17g", value);
  out.append(buf, static_cast<std::size_t>(len));
}

}  // namespace

LabeledDataset parse_libsvm(std::istream& in,
                            std::optional<Index> expected_features) {
  if (expected_features && *expected_features < 0) {
    throw std::invalid_argument("parse_libsvm: negative expected_features");
  }
  std::vector<double> labels;
  std::vector<Index> offsets{0};
  std::vector<Index> indices;
  std::vector<double> values;
  Index max_index = 0;  // highest 1-based index seen
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t pos = line.find_first_not_of(" \t");
    if (pos == npos) continue;
    std::size_t end = line.find_first_of(" \t", pos);
    if (end == npos) end = line.size();
    labels.push_back(parse_double_token(line, pos, end, lineno, "label"));
    Index prev = 0;
    pos = end;
    for (;;) {
      pos = line.find_first_not_of(" \t", pos);
      if (pos == npos) break;
      end = line.find_first_of(" \t", pos);
      if (end == npos) end = line.size();
      const std::size_t colon = line.find(':', pos);
      if (colon == npos || colon >= end) {
        throw parse_error("expected index:value token, got '" +
                              line.substr(pos, end - pos) + "'",
                          lineno);
      }
      const Index idx = parse_index_token(line, pos, colon, lineno);
      const double val =
          parse_double_token(line, colon + 1, end, lineno, "feature value");
      if (idx <= 0) throw format_error("feature indices are 1-based", lineno);
      if (idx <= prev) {
        throw format_error("feature indices must be strictly increasing",
                           lineno);
      }
      if (expected_features && idx > *expected_features) {
        throw format_error("feature index " + std::to_string(idx) +
                               " exceeds expected feature count " +
                               std::to_string(*expected_features),
                           lineno);
      }
      indices.push_back(idx - 1);
      values.push_back(val);
      prev = idx;
      max_index = std::max(max_index, idx);
      pos = end;
    }
    offsets.push_back(static_cast<Index>(values.size()));
  }
  const Index n = expected_features.value_or(max_index);
  const Index m = static_cast<Index>(labels.size());
  return LabeledDataset{SparseMatrix(m, n, std::move(offsets),
                                     std::move(indices), std::move(values)),
                        std::move(labels)};
}

LabeledDataset parse_libsvm(std::string_view text,
                            std::optional<Index> expected_features) {
  std::istringstream in{std::string(text)};
  return parse_libsvm(in, expected_features);
}

LabeledDataset parse_libsvm_file(const std::filesystem::path& path,
                                 std::optional<Index> expected_features) {
  std::ifstream in(path);
  if (!in) {
    throw resource_error("cannot open input file: " + path.string());
  }
  return parse_libsvm(in, expected_features);
}

void serialize_libsvm(const LabeledDataset& dataset, std::ostream& out) {
  if (dataset.labels.size() !=
      static_cast<std::size_t>(dataset.features.rows())) {
    throw std::invalid_argument("serialize_libsvm: label count mismatch");
  }
  std::string buffer;
  for (Index i = 0; i < dataset.features.rows(); ++i) {
    buffer.clear();
    format_real(buffer, dataset.labels[static_cast<std::size_t>(i)]);
    const SparseRowView row = dataset.features.row(i);
    for (std::size_t k = 0; k < row.indices.size(); ++k) {
      buffer.push_back(' ');
      buffer.append(std::to_string(row.indices[k] + 1));
      buffer.push_back(':');
      format_real(buffer, row.values[k]);
    }
    buffer.push_back('\n');
    out.write(buffer.data(), static_cast<std::streamsize>(buffer.size()));
  }
}

std::string serialize_libsvm(const LabeledDataset& dataset) {
  std::ostringstream out;
  serialize_libsvm(dataset, out);
  return out.str();
}

std::vector<double> normalize_labels(std::span<const double> raw, Task task) {
  std::vector<double> out(raw.begin(), raw.end());
  if (task == Task::kRegression) return out;
  for (double v : out) {
    if (std::isnan(v)) throw format_error("labels contain NaN");
  }
  std::vector<double> distinct(out);
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()),
                 distinct.end());
  if (distinct.size() != 2) {
    throw format_error(
        "classification labels must take exactly two distinct values, got " +
        std::to_string(distinct.size()));
  }
  const double hi = distinct[1];
  for (double& v : out) v = (v == hi) ? 1.0 : -1.0;
  return out;
}

ColumnPartition partition_columns(Index columns, Index shards) {
  if (shards < 1) {
    throw std::invalid_argument("partition_columns: shards must be >= 1");
  }
  if (columns < 0) {
    throw std::invalid_argument("partition_columns: negative column count");
  }
  ColumnPartition partition;
  partition.columns = columns;
  partition.ranges.reserve(static_cast<std::size_t>(shards));
  const Index base = columns / shards;
  const Index extra = columns % shards;
  Index begin = 0;
  for (Index p = 0; p < shards; ++p) {
    const Index size = base + (p < extra ? 1 : 0);
    partition.ranges.emplace_back(begin, begin + size);
    begin += size;
  }
  return partition;
}

LabeledDataset generate_synthetic(Index rows, Index columns, Index nnz_per_row,
                                  std::uint64_t seed, Task task) {
  if (rows < 0 || columns < 0 || nnz_per_row < 0) {
    throw std::invalid_argument("generate_synthetic: negative size");
  }
  if (nnz_per_row > columns) {
    throw std::invalid_argument(
        "generate_synthetic: nnz_per_row exceeds column count");
  }
  std::mt19937_64 engine(seed);
  std::vector<double> weights(static_cast<std::size_t>(columns));
  for (double& w : weights) w = rng::standard_normal(engine);

  std::vector<Index> offsets;
  offsets.reserve(static_cast<std::size_t>(rows) + 1);
  offsets.push_back(0);
  std::vector<Index> indices;
  indices.reserve(static_cast<std::size_t>(rows * nnz_per_row));
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(rows * nnz_per_row));
  std::vector<double> labels(static_cast<std::size_t>(rows));

  std::unordered_set<Index> chosen;
  std::vector<Index> row_cols;
  for (Index i = 0; i < rows; ++i) {
    // Floyd's sampling: nnz_per_row distinct columns, uniform over subsets.
    chosen.clear();
    row_cols.clear();
    for (Index j = columns - nnz_per_row; j < columns; ++j) {
      const auto t = static_cast<Index>(
          rng::uniform_below(engine, static_cast<std::uint64_t>(j) + 1));
      const Index pick = chosen.count(t) ? j : t;
      chosen.insert(pick);
      row_cols.push_back(pick);
    }
    std::sort(row_cols.begin(), row_cols.end());
    double response = 0.0;
    for (Index col : row_cols) {
      const double v = rng::standard_normal(engine);
      indices.push_back(col);
      values.push_back(v);
      response += v * weights[static_cast<std::size_t>(col)];
    }
    offsets.push_back(static_cast<Index>(values.size()));
    if (task == Task::kClassification) {
      labels[static_cast<std::size_t>(i)] = response >= 0.0 ? 1.0 : -1.0;
    } else {
      labels[static_cast<std::size_t>(i)] =
          response + 0.1 * rng::standard_normal(engine);
    }
  }
  return LabeledDataset{SparseMatrix(rows, columns, std::move(offsets),
                                     std::move(indices), std::move(values)),
                        std::move(labels)};
}

}  // namespace kcd
