#pragma once

// Finite-dimensional graded-commutative algebras over Q given by a basis and
// structure constants, and degree-preserving homomorphisms between them.

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ssfilter/graded_dims.hpp"
#include "ssfilter/qexact.hpp"

namespace ssfilter {

/// Sparse coordinates over a basis; zero coefficients are never stored.
using SparseVector = std::map<std::size_t, Rational>;

void add_scaled(SparseVector& target, const SparseVector& source, const Rational& factor);

struct BasisElement {
  std::string label;
  int degree = 0;
  /// Generator positions whose ordered product is exactly this basis element.
  std::vector<std::size_t> word;
};

struct Generator {
  std::string name;
  std::size_t basis_index = 0;
};

class PresentedAlgebra;
using AlgebraPtr = std::shared_ptr<const PresentedAlgebra>;

class PresentedAlgebra {
 public:
  using ProductFn = std::function<SparseVector(std::size_t, std::size_t)>;

  /// Tabulates `product` on all basis pairs and validates the result: degree
  /// additivity, graded commutativity, unit law, words, and associativity
  /// (complete for dim <= 200, sampled above).
  static AlgebraPtr create(std::string name, std::vector<BasisElement> basis,
                           std::vector<Generator> generators, std::size_t unit,
                           const ProductFn& product);

  /// Koszul-signed tensor product; products are evaluated from the factors.
  /// A one-dimensional factor is the ground field and the other factor is
  /// returned unchanged.
  static AlgebraPtr tensor(const AlgebraPtr& left, const AlgebraPtr& right);

  static AlgebraPtr ground_field();

  const std::string& name() const { return name_; }
  std::size_t dim() const { return basis_.size(); }
  int degree(std::size_t i) const { return basis_.at(i).degree; }
  const std::string& label(std::size_t i) const { return basis_.at(i).label; }
  const std::vector<std::size_t>& word(std::size_t i) const { return basis_.at(i).word; }
  std::size_t unit() const { return unit_; }
  const std::vector<Generator>& generators() const { return generators_; }
  std::optional<std::size_t> find_generator(std::string_view name) const;
  std::optional<std::size_t> find_label(std::string_view label) const;
  std::vector<std::size_t> basis_in_degree(int degree) const;

  GradedDims betti() const;
  int top_degree() const;

  SparseVector multiply_basis(std::size_t i, std::size_t j) const;
  SparseVector multiply(const SparseVector& x, const SparseVector& y) const;
  /// Ordered product of the generators in `word(i)`.
  SparseVector evaluate_word(const std::vector<std::size_t>& word) const;

  /// Exhaustive associativity check on every basis triple.
  bool associative_on_all_triples() const;

  // Tensor factors (null for tabulated algebras).
  const AlgebraPtr& left_factor() const { return left_; }
  const AlgebraPtr& right_factor() const { return right_; }

 private:
  PresentedAlgebra() = default;
  void validate() const;

  std::string name_;
  std::vector<BasisElement> basis_;
  std::vector<Generator> generators_;
  std::size_t unit_ = 0;
  std::vector<SparseVector> table_;  // dim*dim, row-major, tabulated algebras only
  AlgebraPtr left_, right_;
};

/// An element of a specific algebra.
class Element {
 public:
  Element(AlgebraPtr algebra, SparseVector coeffs);

  static Element zero(const AlgebraPtr& algebra);
  static Element unit(const AlgebraPtr& algebra);
  static Element basis(const AlgebraPtr& algebra, std::size_t i);
  /// Throws AlgebraMismatch if no generator has that name.
  static Element generator(const AlgebraPtr& algebra, std::string_view name);

  const AlgebraPtr& algebra() const { return algebra_; }
  const SparseVector& coeffs() const { return coeffs_; }
  Rational coefficient(std::size_t i) const;
  bool is_zero() const { return coeffs_.empty(); }
  /// Degree when homogeneous and nonzero.
  std::optional<int> degree() const;
  std::string to_string() const;

  Element operator+(const Element& other) const;
  Element operator-(const Element& other) const;
  Element operator*(const Rational& scalar) const;
  bool operator==(const Element& other) const;

 private:
  AlgebraPtr algebra_;
  SparseVector coeffs_;
};

/// Throws AlgebraMismatch unless x and y belong to the same algebra object.
Element multiply(const Element& x, const Element& y);
Element power(const Element& x, unsigned exponent);

/// Degree-preserving multiplicative map fixed by the images of the source
/// generators. Images of basis elements are computed through their words.
class AlgebraHom {
 public:
  AlgebraHom(AlgebraPtr source, AlgebraPtr target, std::vector<SparseVector> generator_images);

  const AlgebraPtr& source() const { return source_; }
  const AlgebraPtr& target() const { return target_; }
  const SparseVector& image_of_basis(std::size_t i) const { return basis_images_.at(i); }
  const SparseVector& image_of_generator(std::size_t g) const { return generator_images_.at(g); }
  SparseVector apply(const SparseVector& x) const;
  Element apply(const Element& x) const;

  /// Matrix of the map between the degree-`degree` parts (rows: target).
  RationalMatrix matrix(int degree) const;

  bool degree_preserving() const;
  /// phi(g h) == phi(g) phi(h) for every ordered pair of generators.
  bool multiplicative_on_generators() const;
  /// phi(x y) == phi(x) phi(y) for every pair of basis elements.
  bool multiplicative_on_basis() const;

 private:
  AlgebraPtr source_, target_;
  std::vector<SparseVector> generator_images_;
  std::vector<SparseVector> basis_images_;
};

}  // namespace ssfilter
