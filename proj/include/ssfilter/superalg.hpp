#pragma once

// Koszul-signed tensor powers A^{(x)p} (x) B and their sign-twisted
// symmetric-group invariants.
//
// S_p permutes the p slot factors with the Koszul sign; the twisted action
// multiplies by sgn(sigma) as well. Its invariants are Sym on odd-degree
// classes tensor Lambda on even-degree classes.

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ssfilter/algebra.hpp"
#include "ssfilter/graded_dims.hpp"

namespace ssfilter {

/// Sign of rearranging x_0 (x) ... (x) x_{p-1} (degrees `degs`) into
/// x_{perm[0]} (x) ... (x) x_{perm[p-1]}.
int koszul_sign(std::span<const std::size_t> perm, std::span<const int> degs);

/// Closed-form graded dimension of the sum over i+j=p of Sym^i(odd) (x) Lambda^j(even).
GradedDims sym_ext_dims(const GradedDims& dims, int p);

struct TensorKey {
  std::vector<std::uint32_t> slots;
  std::size_t tail = 0;
  auto operator<=>(const TensorKey&) const = default;
};

/// Element of A^{(x)p} (x) B. The tail B defaults to the ground field.
class TensorElement {
 public:
  using Terms = std::map<TensorKey, Rational>;

  TensorElement(AlgebraPtr slot_algebra, std::size_t p,
                AlgebraPtr tail_algebra = PresentedAlgebra::ground_field());

  const AlgebraPtr& slot_algebra() const { return slot_algebra_; }
  const AlgebraPtr& tail_algebra() const { return tail_algebra_; }
  std::size_t p() const { return p_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  Rational coefficient(const TensorKey& key) const;
  int degree_of(const TensorKey& key) const;
  std::optional<int> degree() const;

  void add_term(TensorKey key, const Rational& coeff);
  TensorElement& operator+=(const TensorElement& other);
  TensorElement operator*(const Rational& scalar) const;
  bool operator==(const TensorElement& other) const;

  /// Koszul-signed product in the graded tensor algebra.
  friend TensorElement operator*(const TensorElement& x, const TensorElement& y);

  /// Twisted action of the adjacent transposition (k, k+1).
  TensorElement twisted_transposition(std::size_t k) const;

  std::string to_string() const;

 private:
  void check_compatible(const TensorElement& other) const;

  AlgebraPtr slot_algebra_;
  std::size_t p_;
  AlgebraPtr tail_algebra_;
  Terms terms_;
};

/// Basis of (A^{(x)p} (x) sgn)^{S_p}.
///
/// A monomial is a canonical slot tuple: odd-degree classes first (weakly
/// increasing, repeats allowed) followed by even-degree classes (strictly
/// increasing). Its representative is the signed orbit sum with coefficient
/// +1 on the canonical tuple; no division by the orbit size.
class SgnInvariantBasis {
 public:
  using Monomial = std::vector<std::uint32_t>;

  /// `reverse_order` enumerates monomials in reverse lexicographic order.
  SgnInvariantBasis(AlgebraPtr algebra, std::size_t p, bool reverse_order = false);

  const AlgebraPtr& algebra() const { return algebra_; }
  std::size_t p() const { return p_; }
  std::size_t size() const { return monomials_.size(); }
  const Monomial& monomial(std::size_t k) const { return monomials_.at(k); }
  int degree(std::size_t k) const { return degrees_.at(k); }
  std::string label(std::size_t k) const;
  std::optional<std::size_t> find(const Monomial& m) const;
  GradedDims dims() const;

  /// Position of basis index `i` in the canonical order (odd classes first).
  std::size_t canonical_rank(std::uint32_t i) const { return rank_.at(i); }
  bool is_odd(std::uint32_t i) const { return algebra_->degree(i) % 2 != 0; }

  /// Sorts an arbitrary slot tuple into canonical order. Returns the
  /// canonical monomial and the coefficient of `tuple` in its representative,
  /// or nullopt if the tuple repeats an even-degree class.
  std::optional<std::pair<Monomial, int>> canonicalize(const std::vector<std::uint32_t>& tuple) const;

  /// Number of distinct slot tuples in the orbit of monomial k.
  std::uint64_t orbit_size(std::size_t k) const;

  /// Representative of monomial k tensored with tail basis element `tail`.
  TensorElement representative(std::size_t k,
                               AlgebraPtr tail_algebra = PresentedAlgebra::ground_field(),
                               std::size_t tail = 0) const;

 private:
  AlgebraPtr algebra_;
  std::size_t p_;
  std::vector<std::size_t> rank_;
  std::vector<std::uint32_t> order_;  // basis indices in canonical order
  std::vector<Monomial> monomials_;
  std::vector<int> degrees_;
  std::map<Monomial, std::size_t> index_;
};

/// Coordinates of a sign-invariant element: (monomial, tail basis index) -> value.
using InvariantCoordinates = std::map<std::pair<std::size_t, std::size_t>, Rational>;

/// Throws NotInvariant if any twisted transposition moves x.
InvariantCoordinates project_to_invariants(const SgnInvariantBasis& basis, const TensorElement& x);

/// Inverse of project_to_invariants.
TensorElement reconstruct(const SgnInvariantBasis& basis, const InvariantCoordinates& coords,
                          const AlgebraPtr& tail_algebra = PresentedAlgebra::ground_field());

}  // namespace ssfilter
