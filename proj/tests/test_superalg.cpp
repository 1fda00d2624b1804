#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "oracles/oracles.hpp"
#include "ssfilter/errors.hpp"
#include "ssfilter/rings.hpp"
#include "ssfilter/superalg.hpp"

using namespace ssfilter;

TEST(Superalg, KoszulSignOnAllOfS4) {
  std::vector<std::size_t> perm(4);
  for (int mask = 0; mask < 16; ++mask) {
    std::vector<int> degs(4);
    for (int k = 0; k < 4; ++k) degs[k] = (mask >> k) & 1 ? 1 + 2 * k : 2 * k;
    std::iota(perm.begin(), perm.end(), 0);
    do {
      EXPECT_EQ(koszul_sign(perm, degs), oracle::bubble_koszul_sign(perm, degs));
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
}

TEST(Superalg, BasisCountMatchesClosedForm) {
  const std::vector<AlgebraPtr> algebras = {curve_algebra(1), curve_algebra(2), picard_algebra(1),
                                            grassmann_algebra(2, 4),
                                            tensor_algebra(curve_algebra(1), grassmann_algebra(2, 3))};
  for (const auto& a : algebras)
    for (int p = 0; p <= 6; ++p) {
      SgnInvariantBasis basis(a, p);
      EXPECT_EQ(basis.dims(), sym_ext_dims(a->betti(), p)) << a->name() << " p=" << p;
    }
}

TEST(Superalg, CurveFirstFactorIsTheFourBlockCount) {
  for (int g = 0; g <= 3; ++g)
    for (int p = 0; p <= 6; ++p) {
      const auto dims = SgnInvariantBasis(curve_algebra(g), p).dims();
      const auto expected = oracle::curve_first_factor(g, p);
      GradedDims want;
      for (const auto& [d, v] : expected) want.add(d, v.get_ui());
      EXPECT_EQ(dims, want) << "g=" << g << " p=" << p;
    }
}

TEST(Superalg, RepresentativesAreTwistedInvariant) {
  const auto a = curve_algebra(1);
  for (int p = 1; p <= 4; ++p) {
    SgnInvariantBasis basis(a, p);
    for (std::size_t k = 0; k < basis.size(); ++k) {
      const TensorElement rep = basis.representative(k);
      for (std::size_t t = 0; t + 1 < static_cast<std::size_t>(p); ++t)
        EXPECT_EQ(rep.twisted_transposition(t), rep) << basis.label(k);
      EXPECT_EQ(rep.terms().size(), basis.orbit_size(k));
    }
  }
}

TEST(Superalg, ProjectionRoundTrip) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> coeff(-4, 4);
  const auto a = curve_algebra(2);
  const auto tail = grassmann_algebra(2, 4);
  for (int p = 1; p <= 3; ++p) {
    SgnInvariantBasis basis(a, p);
    for (int trial = 0; trial < 20; ++trial) {
      InvariantCoordinates coords;
      for (int t = 0; t < 5; ++t) {
        const Rational c = coeff(rng);
        if (c != 0)
          coords[{rng() % basis.size(), rng() % tail->dim()}] = c;
      }
      const TensorElement x = reconstruct(basis, coords, tail);
      EXPECT_EQ(project_to_invariants(basis, x), coords);
    }
  }
}

TEST(Superalg, ProjectionRejectsNonInvariants) {
  const auto a = curve_algebra(1);
  SgnInvariantBasis basis(a, 2);
  TensorElement x(a, 2);
  x.add_term({{1, 2}, 0}, 1);
  EXPECT_THROW(project_to_invariants(basis, x), NotInvariant);
}

TEST(Superalg, TensorProductIsGradedCommutative) {
  // For classes x (slot tensor) and y, x y = (-1)^{|x||y|} y x.
  const auto a = curve_algebra(1);
  const std::size_t n = a->dim();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l) {
          TensorElement x(a, 2), y(a, 2);
          x.add_term({{static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j)}, 0}, 1);
          y.add_term({{static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(l)}, 0}, 1);
          const int sign = (*x.degree() * *y.degree()) % 2 == 0 ? 1 : -1;
          EXPECT_EQ(x * y, (y * x) * Rational(sign));
        }
}

TEST(Superalg, CanonicalizeDropsRepeatedEvenClasses) {
  const auto a = curve_algebra(1);
  SgnInvariantBasis basis(a, 2);
  const std::uint32_t unit = static_cast<std::uint32_t>(a->unit());
  EXPECT_FALSE(basis.canonicalize({unit, unit}).has_value());
  // Odd classes repeat.
  const auto odd = a->basis_in_degree(1);
  ASSERT_FALSE(odd.empty());
  const std::uint32_t x = static_cast<std::uint32_t>(odd[0]);
  EXPECT_TRUE(basis.canonicalize({x, x}).has_value());
}
