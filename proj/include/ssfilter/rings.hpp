#pragma once

// Catalog of the cohomology rings the builtin families are made of.

#include <cstddef>
#include <vector>

#include "ssfilter/algebra.hpp"
#include "ssfilter/graded_dims.hpp"

namespace ssfilter {

/// H^*(C;Q) of a genus-g curve: basis 1, alpha_1..alpha_2g (degree 1), e (degree 2).
/// Pairing convention alpha_k alpha_{g+k} = e = -alpha_{g+k} alpha_k.
///
/// `relabel` (a permutation of 0..2g-1, empty for identity) places the class
/// originally named alpha_{relabel[k]+1} at basis position k+1. Products are
/// computed from the original names, so relabelling only permutes the basis.
AlgebraPtr curve_algebra(int g, const std::vector<std::size_t>& relabel = {});

/// H^*(Pic(C);Q) = exterior algebra on a_1..a_2g (degree 1). `relabel` as above.
AlgebraPtr picard_algebra(int g, const std::vector<std::size_t>& relabel = {});

/// H^*(G(k,N);Q) = Q[c_1..c_k] / (s_j : j > N-k), deg c_i = 2i, where
/// s_0 = 1 and s_j = -(c_1 s_{j-1} + ... + c_k s_{j-k}). The basis consists of
/// standard monomials in the c_i. k == N gives the point.
/// Throws InvalidShape unless 0 < k <= N.
AlgebraPtr grassmann_algebra(int k, int N);

/// c_i of the tautological subbundle of G(k,N), in normal form (zero when
/// the class vanishes, e.g. on the point G(k,k)).
Element grassmann_chern_class(int k, int N, int i);

/// s_j of G(k,N) in normal form.
Element quotient_chern_class(int k, int N, int j);

/// s_{N-2} in H^*(G(2,N)), the top Chern class of the tautological quotient.
Element quotient_top_chern(int N);

/// Koszul-signed tensor product; generators are the union of both sets.
AlgebraPtr tensor_algebra(const AlgebraPtr& a, const AlgebraPtr& b);

/// H_c^*(A^d;Q) = Q in degree 2d.
GradedDims compact_support_affine(int d);

/// Graded dimensions of Sym^n X from the Betti table of X: coefficient of
/// x^n in prod_{i odd}(1 + x t^i)^{b_i} prod_{i even}(1 - x t^i)^{-b_i}.
GradedDims macdonald_sym(const GradedDims& dims, int n);

}  // namespace ssfilter
