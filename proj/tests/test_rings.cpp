#include <vector>

#include <gtest/gtest.h>

#include "oracles/oracles.hpp"
#include "oracles/schubert.hpp"
#include "ssfilter/errors.hpp"
#include "ssfilter/rings.hpp"

using namespace ssfilter;

namespace {

GradedDims from_poly_in_t2(const oracle::Poly& p) {
  GradedDims out;
  for (const auto& [d, c] : p) out.add(2 * d, c.get_ui());
  return out;
}

}  // namespace

TEST(Rings, GrassmannPoincarePolynomialIsGaussianBinomial) {
  for (int N = 2; N <= 12; ++N)
    EXPECT_EQ(grassmann_algebra(2, N)->betti(), from_poly_in_t2(oracle::gaussian_binomial(N, 2))) << N;
  for (int k = 1; k <= 4; ++k)
    for (int N = k; N <= 7; ++N)
      EXPECT_EQ(grassmann_algebra(k, N)->betti(), from_poly_in_t2(oracle::gaussian_binomial(N, k)))
          << "G(" << k << "," << N << ")";
}

TEST(Rings, GrassmannMultiplicationAgreesWithPieri) {
  for (int N = 2; N <= 8; ++N) EXPECT_TRUE(oracle::pieri_agrees(grassmann_algebra(2, N), N)) << N;
}

TEST(Rings, QuotientTopChernIsSigmaTop) {
  for (int N = 3; N <= 8; ++N) {
    const auto a = grassmann_algebra(2, N);
    const oracle::PieriG2 pieri(N);
    const auto images = oracle::schubert_images(a, pieri);
    const auto s = quotient_top_chern(N);
    EXPECT_EQ(oracle::image_of(s.coeffs(), images), (oracle::PieriG2::Vec{{{N - 2, 0}, 1}})) << N;
  }
}

TEST(Rings, GrassmannPointAndShapes) {
  EXPECT_EQ(grassmann_algebra(3, 3)->dim(), 1u);
  EXPECT_TRUE(grassmann_chern_class(3, 3, 1).is_zero());
  EXPECT_THROW(grassmann_algebra(0, 3), InvalidShape);
  EXPECT_THROW(grassmann_algebra(4, 3), InvalidShape);
}

TEST(Rings, MacdonaldSymmetricProducts) {
  const GradedDims p1{{0, 1}, {2, 1}};
  for (int n = 0; n <= 10; ++n) {
    GradedDims want;
    for (int k = 0; k <= n; ++k) want.add(2 * k, 1);
    EXPECT_EQ(macdonald_sym(p1, n), want) << n;
  }
  for (int k = 0; k <= 20; ++k) EXPECT_EQ(macdonald_sym({{2, 1}}, k), GradedDims({{2 * k, 1}})) << k;
  // Sym^n of a genus-g curve below 2g-1 has Betti numbers from Macdonald; a
  // spot value: b_1(Sym^n C) = 2g.
  for (int g = 1; g <= 3; ++g)
    for (int n = 1; n <= 4; ++n)
      EXPECT_EQ(macdonald_sym({{0, 1}, {1, static_cast<std::uint64_t>(2 * g)}, {2, 1}}, n).at(1),
                static_cast<std::uint64_t>(2 * g));
}

TEST(Rings, CurveAndPicardRings) {
  for (int g = 0; g <= 3; ++g) {
    const auto c = curve_algebra(g);
    EXPECT_EQ(c->betti(), GradedDims({{0, 1}, {1, static_cast<std::uint64_t>(2 * g)}, {2, 1}}));
    const auto e = Element::generator(c, "e");
    for (int k = 1; k <= g; ++k) {
      const auto a = Element::generator(c, "α" + std::to_string(k));
      const auto b = Element::generator(c, "α" + std::to_string(g + k));
      EXPECT_EQ(multiply(a, b), e);
      EXPECT_EQ(multiply(b, a), e * Rational(-1));
      EXPECT_TRUE(multiply(a, a).is_zero());
    }
    const auto pic = picard_algebra(g);
    for (int d = 0; d <= 2 * g; ++d) EXPECT_EQ(pic->betti().at(d), oracle::binomial(2 * g, d).get_ui());
    EXPECT_TRUE(pic->associative_on_all_triples());
  }
}

TEST(Rings, RelabelOnlyPermutesTheBasis) {
  const auto plain = curve_algebra(2);
  const auto moved = curve_algebra(2, {3, 0, 2, 1});
  EXPECT_EQ(plain->betti(), moved->betti());
  EXPECT_EQ(moved->label(1), "α4");
  EXPECT_EQ(multiply(Element::generator(moved, "α1"), Element::generator(moved, "α3")),
            Element::generator(moved, "e"));
}

TEST(Rings, CompactSupportAffine) {
  for (int d = 0; d <= 5; ++d) EXPECT_EQ(compact_support_affine(d), GradedDims({{2 * d, 1}}));
}
