#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <string>

namespace ssfilter {

/// Betti table: degree -> rank, finitely supported, zero ranks never stored.
class GradedDims {
 public:
  using Map = std::map<int, std::uint64_t>;

  GradedDims() = default;
  GradedDims(std::initializer_list<Map::value_type> entries);
  explicit GradedDims(const Map& entries);

  std::uint64_t at(int degree) const;
  void set(int degree, std::uint64_t rank);
  void add(int degree, std::uint64_t rank);

  const Map& entries() const { return ranks_; }
  bool empty() const { return ranks_.empty(); }
  std::uint64_t total() const;
  std::int64_t euler_characteristic() const;
  /// Largest degree with nonzero rank; -1 when empty.
  int top_degree() const;

  GradedDims shifted(int by) const;
  /// Kunneth: Betti table of a product.
  GradedDims convolve(const GradedDims& other) const;

  std::string to_string() const;

  friend bool operator==(const GradedDims&, const GradedDims&) = default;

 private:
  Map ranks_;
};

std::ostream& operator<<(std::ostream& os, const GradedDims& dims);

/// Poincare polynomials share the carrier; the alias only changes the reading.
using PoincarePolynomial = GradedDims;

namespace detail {

/// Coefficient of x^n in
///   prod_{i odd} F(x t^i)^{b_i} * prod_{i even} G(x t^i)^{b_i}
/// where, with `exterior_on_odd`, F = (1+y) and G = (1-y)^{-1}; otherwise the
/// roles swap. Returns the t-graded coefficient.
GradedDims sym_lambda_coefficient(const GradedDims& dims, int n, bool exterior_on_odd);

}  // namespace detail

}  // namespace ssfilter
