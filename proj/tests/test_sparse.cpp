#include <doctest.h>

#include <random>
#include <stdexcept>
#include <vector>

#include "kcd/sampling.hpp"
#include "kcd/sparse.hpp"

using kcd::Index;
using kcd::SparseMatrix;

namespace {

SparseMatrix small_matrix() {
  // [ 1 0 2 ]
  // [ 0 0 0 ]
  // [ 0 3 4 ]
  return SparseMatrix(3, 3, {0, 2, 2, 4}, {0, 2, 1, 2}, {1.0, 2.0, 3.0, 4.0});
}

SparseMatrix random_matrix(std::mt19937_64& engine, Index rows, Index cols,
                           double keep_probability) {
  std::vector<double> dense(static_cast<std::size_t>(rows * cols), 0.0);
  for (double& v : dense) {
    const double u =
        static_cast<double>(kcd::rng::uniform_below(engine, 1u << 20)) /
        static_cast<double>(1u << 20);
    if (u < keep_probability) v = kcd::rng::standard_normal(engine);
  }
  return SparseMatrix::from_dense(rows, cols, dense);
}

}  // namespace

TEST_CASE("csr accessors expose the stored structure") {
  const SparseMatrix a = small_matrix();
  CHECK(a.rows() == 3);
  CHECK(a.cols() == 3);
  CHECK(a.nnz() == 4);
  CHECK(a.density() == doctest::Approx(4.0 / 9.0));
  CHECK(a.row_nnz(0) == 2);
  CHECK(a.row_nnz(1) == 0);
  CHECK(a.row_nnz(2) == 2);
  const auto r0 = a.row(0);
  REQUIRE(r0.nnz() == 2);
  CHECK(r0.indices[0] == 0);
  CHECK(r0.indices[1] == 2);
  CHECK(r0.values[0] == 1.0);
  CHECK(r0.values[1] == 2.0);
  CHECK(r0.cols == 3);
  CHECK_THROWS_AS((void)a.row(3), std::invalid_argument);
  CHECK_THROWS_AS((void)a.row(-1), std::invalid_argument);
}

TEST_CASE("construction rejects invariant violations") {
  // offsets must start at zero
  CHECK_THROWS_AS(SparseMatrix(2, 2, {1, 1, 2}, {0, 1}, {1.0, 1.0}),
                  std::invalid_argument);
  // offsets must be nondecreasing
  CHECK_THROWS_AS(SparseMatrix(2, 2, {0, 2, 1}, {0, 1}, {1.0, 1.0}),
                  std::invalid_argument);
  // final offset must equal nnz
  CHECK_THROWS_AS(SparseMatrix(2, 2, {0, 1, 1}, {0, 1}, {1.0, 1.0}),
                  std::invalid_argument);
  // column ids must be in range
  CHECK_THROWS_AS(SparseMatrix(1, 2, {0, 1}, {2}, {1.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(SparseMatrix(1, 2, {0, 1}, {-1}, {1.0}),
                  std::invalid_argument);
  // column ids must be strictly increasing within a row
  CHECK_THROWS_AS(SparseMatrix(1, 3, {0, 2}, {1, 1}, {1.0, 2.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(SparseMatrix(1, 3, {0, 2}, {2, 1}, {1.0, 2.0}),
                  std::invalid_argument);
  // offsets length must be rows + 1
  CHECK_THROWS_AS(SparseMatrix(2, 2, {0, 1}, {0}, {1.0}),
                  std::invalid_argument);
  // indices and values must be parallel
  CHECK_THROWS_AS(SparseMatrix(1, 2, {0, 2}, {0, 1}, {1.0}),
                  std::invalid_argument);
}

TEST_CASE("default-constructed matrix is an empty 0x0") {
  const SparseMatrix empty;
  CHECK(empty.rows() == 0);
  CHECK(empty.cols() == 0);
  CHECK(empty.nnz() == 0);
  CHECK(empty.density() == 0.0);
}

TEST_CASE("from_dense drops exact zeros and to_dense round-trips") {
  const std::vector<double> dense = {1.0, 0.0, 2.0,  //
                                     0.0, 0.0, 0.0,  //
                                     0.0, 3.0, 4.0};
  const SparseMatrix a = SparseMatrix::from_dense(3, 3, dense);
  CHECK(a == small_matrix());
  CHECK(a.to_dense() == dense);

  std::mt19937_64 engine(11);
  for (int round = 0; round < 20; ++round) {
    const SparseMatrix b = random_matrix(engine, 7, 5, 0.4);
    const SparseMatrix again = SparseMatrix::from_dense(7, 5, b.to_dense());
    CHECK(b == again);
  }
}

TEST_CASE("equality compares structure and values exactly") {
  const SparseMatrix a = small_matrix();
  SparseMatrix b = small_matrix();
  CHECK(a == b);
  const SparseMatrix c(3, 3, {0, 2, 2, 4}, {0, 2, 1, 2}, {1.0, 2.0, 3.0, 4.5});
  CHECK_FALSE(a == c);
  const SparseMatrix d(3, 4, {0, 2, 2, 4}, {0, 2, 1, 2}, {1.0, 2.0, 3.0, 4.0});
  CHECK_FALSE(a == d);
}

TEST_CASE("column_slice keeps global column ids and dimension") {
  const SparseMatrix a = small_matrix();
  const SparseMatrix left = a.column_slice(0, 2);
  CHECK(left.rows() == 3);
  CHECK(left.cols() == 3);  // logical dimension unchanged
  CHECK(left.nnz() == 2);   // entries with column in [0, 2)
  CHECK(left.row(0).indices[0] == 0);
  CHECK(left.row(2).indices[0] == 1);

  const SparseMatrix all = a.column_slice(0, 3);
  CHECK(all == a);

  const SparseMatrix none = a.column_slice(1, 1);
  CHECK(none.nnz() == 0);

  CHECK_THROWS_AS((void)a.column_slice(2, 1), std::invalid_argument);
  CHECK_THROWS_AS((void)a.column_slice(-1, 2), std::invalid_argument);
  CHECK_THROWS_AS((void)a.column_slice(0, 4), std::invalid_argument);
}

TEST_CASE("column slices of a partition reassemble the matrix") {
  std::mt19937_64 engine(5);
  const SparseMatrix a = random_matrix(engine, 9, 13, 0.5);
  for (Index shards : {1, 2, 3, 5, 13}) {
    // slice boundaries: contiguous, cover [0, cols)
    std::vector<double> sum(static_cast<std::size_t>(a.rows() * a.cols()),
                            0.0);
    Index nnz = 0;
    for (Index p = 0; p < shards; ++p) {
      const Index begin = a.cols() * p / shards;
      const Index end = a.cols() * (p + 1) / shards;
      const SparseMatrix slice = a.column_slice(begin, end);
      nnz += slice.nnz();
      const std::vector<double> dense = slice.to_dense();
      for (std::size_t k = 0; k < dense.size(); ++k) sum[k] += dense[k];
    }
    CHECK(nnz == a.nnz());
    CHECK(sum == a.to_dense());
  }
}
