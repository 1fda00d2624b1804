#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "oracles/oracles.hpp"
#include "ssfilter/errors.hpp"
#include "ssfilter/qexact.hpp"

using namespace ssfilter;

namespace {

RationalMatrix to_matrix(const std::vector<std::vector<mpz_class>>& a, std::size_t cols) {
  std::vector<RationalMatrix::Triplet> t;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < cols; ++j)
      if (a[i][j] != 0) t.emplace_back(i, j, Rational(a[i][j]));
  return RationalMatrix(a.size(), cols, std::move(t));
}

RationalMatrix random_rational(std::mt19937_64& rng, std::size_t rows, std::size_t cols, double density) {
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<int> num(-9, 9), den(1, 5);
  std::vector<RationalMatrix::Triplet> t;
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      if (coin(rng) < density) {
        Rational v(num(rng), den(rng));
        v.canonicalize();
        t.emplace_back(i, j, v);
      }
  return RationalMatrix(rows, cols, std::move(t));
}

// Unimodular: a product of elementary row operations.
RationalMatrix random_invertible(std::mt19937_64& rng, std::size_t n) {
  RationalMatrix m = RationalMatrix::identity(n);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::uniform_int_distribution<int> scale(-3, 3);
  for (int step = 0; step < 3 * static_cast<int>(n); ++step) {
    const std::size_t a = pick(rng), b = pick(rng);
    if (a == b) continue;
    RationalMatrix e = RationalMatrix::identity(n);
    e.set(a, b, scale(rng));
    m = e * m;
  }
  return m;
}

}  // namespace

TEST(QExact, RankMatchesBareissOnRandomLowRankMatrices) {
  std::mt19937_64 rng(20240611);
  std::uniform_int_distribution<std::size_t> k(0, 6);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto a = oracle::random_low_rank(rng, 6, 9, k(rng), 4);
    ASSERT_EQ(rank(to_matrix(a, 9)), oracle::bareiss_rank(a)) << "trial " << trial;
  }
}

TEST(QExact, RankMatchesBareissOnWideSparseMatrices) {
  // Past the dense threshold, so the sparse kernel runs.
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = oracle::random_low_rank(rng, 30, 90, 12 + trial % 10, 2);
    ASSERT_EQ(rank(to_matrix(a, 90)), oracle::bareiss_rank(a));
  }
}

TEST(QExact, RankOfTransposeIsRank) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const auto m = random_rational(rng, 1 + trial % 9, 1 + (trial * 7) % 11, 0.4);
    EXPECT_EQ(rank(m), rank(m.transpose()));
  }
}

TEST(QExact, RankInvariantUnderBasisChange) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t r = 2 + trial % 6, c = 2 + trial % 8;
    const auto m = random_rational(rng, r, c, 0.5);
    const auto changed = random_invertible(rng, r) * m * random_invertible(rng, c);
    EXPECT_EQ(rank(m), rank(changed));
  }
}

TEST(QExact, EchelonFormRecomposes) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const auto m = random_rational(rng, 1 + trial % 7, 1 + trial % 10, 0.5);
    const RowEchelon e = row_reduce(m);
    ASSERT_EQ(e.pivots.size(), e.rank);
    EXPECT_EQ(m.select_columns(e.pivots) * e.reduced, m);
    for (std::size_t r = 0; r < e.rank; ++r) EXPECT_EQ(e.reduced.at(r, e.pivots[r]), 1);
  }
}

TEST(QExact, KernelBasisIsAKernelBasis) {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 150; ++trial) {
    const auto m = random_rational(rng, 1 + trial % 6, 1 + trial % 9, 0.45);
    const RankKernel rk = rank_and_kernel(m);
    EXPECT_EQ(rk.rank + rk.kernel_basis.size(), m.cols());
    for (const auto& v : rk.kernel_basis)
      for (const auto& x : m * v) EXPECT_EQ(x, 0);
    if (!rk.kernel_basis.empty()) {
      std::vector<RationalVector> rows(rk.kernel_basis.begin(), rk.kernel_basis.end());
      EXPECT_EQ(rank(RationalMatrix::from_dense(rows)), rk.kernel_basis.size());
    }
  }
}

TEST(QExact, ComplexCohomology) {
  // Q -> Q^2 -> Q with d_in = (1, 1)^T and d_out = (1, -1).
  const auto d_in = RationalMatrix::from_dense({{1}, {1}});
  const auto d_out = RationalMatrix::from_dense({{1, -1}});
  EXPECT_EQ(complex_cohomology(d_in, d_out), 0u);
  EXPECT_EQ(complex_cohomology(RationalMatrix(2, 0), d_out), 1u);
  EXPECT_THROW(complex_cohomology(d_in, RationalMatrix::from_dense({{1, 1}})), CompositionNonzero);
  EXPECT_THROW(complex_cohomology(d_in, RationalMatrix(1, 3)), ShapeMismatch);
}

TEST(QExact, LargeEntriesStayExact) {
  // Hilbert matrices are invertible with famously bad conditioning.
  for (std::size_t n = 1; n <= 12; ++n) {
    std::vector<RationalVector> h(n, RationalVector(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) h[i][j] = Rational(1, static_cast<unsigned long>(i + j + 1));
    EXPECT_EQ(rank(RationalMatrix::from_dense(h)), n);
  }
}
