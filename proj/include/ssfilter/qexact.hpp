#pragma once

// Exact linear algebra over Q.
//
// Matrices act on column vectors: an r x c matrix is a map Q^c -> Q^r.
// Storage is row-sparse; elimination switches to a dense kernel when the
// matrix has fewer than `kDenseColumnThreshold` columns.

#include <cstddef>
#include <tuple>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace ssfilter {

using Integer = mpz_class;
using Rational = mpq_class;
using RationalVector = std::vector<Rational>;

inline constexpr std::size_t kDenseColumnThreshold = 64;

/// Bit length of numerator plus denominator; the pivot heuristic minimises it.
std::size_t bit_length(const Rational& x);

class RationalMatrix {
 public:
  using Entry = std::pair<std::size_t, Rational>;
  using Row = std::vector<Entry>;  // sorted by column, no explicit zeros
  using Triplet = std::tuple<std::size_t, std::size_t, Rational>;

  RationalMatrix() = default;
  RationalMatrix(std::size_t rows, std::size_t cols);
  /// Duplicate (row, col) triplets are summed; resulting zeros are dropped.
  RationalMatrix(std::size_t rows, std::size_t cols, std::vector<Triplet> triplets);

  static RationalMatrix identity(std::size_t n);
  static RationalMatrix from_dense(const std::vector<RationalVector>& dense);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nnz() const;
  bool is_zero() const { return nnz() == 0; }

  const Row& row(std::size_t i) const { return data_.at(i); }
  Rational at(std::size_t i, std::size_t j) const;
  void set(std::size_t i, std::size_t j, const Rational& value);

  RationalMatrix transpose() const;
  std::vector<RationalVector> to_dense() const;
  RationalMatrix select_columns(const std::vector<std::size_t>& columns) const;

  friend RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b);
  friend bool operator==(const RationalMatrix& a, const RationalMatrix& b) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Row> data_;
};

RationalVector operator*(const RationalMatrix& m, const RationalVector& v);

/// Reduced row echelon form. `reduced` holds only the `rank` nonzero rows,
/// so `m == m.select_columns(pivots) * reduced` (rank factorisation).
struct RowEchelon {
  std::size_t rank = 0;
  std::vector<std::size_t> pivots;
  RationalMatrix reduced;
};

RowEchelon row_reduce(const RationalMatrix& m);

struct RankKernel {
  std::size_t rank = 0;
  std::vector<RationalVector> kernel_basis;
};

RankKernel rank_and_kernel(const RationalMatrix& m);
std::size_t rank(const RationalMatrix& m);

/// dim ker(d_out) - rank(d_in) at the middle term of Q^a -> Q^k -> Q^b.
/// Throws ShapeMismatch if the shapes do not chain and CompositionNonzero if
/// d_out * d_in != 0.
std::size_t complex_cohomology(const RationalMatrix& d_in, const RationalMatrix& d_out);

}  // namespace ssfilter
