#pragma once

// The builtin semi-simplicially filtered families, reduced to what the
// spectral sequence needs: the slot algebra M, the filter gap e, the
// algebras (or Betti tables) of the levels X_k, and the coaction
// X_k -> M (x) X_{k-e} that every face pullback is built from.

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ssfilter/algebra.hpp"
#include "ssfilter/graded_dims.hpp"
#include "ssfilter/superalg.hpp"

namespace ssfilter {

enum class Convergence { CompactSupportDirect, RelativeThenDuality };
enum class CohomologyKind { CompactSupport, Ordinary };

std::string to_string(Convergence c);
std::string to_string(CohomologyKind k);

/// Index bookkeeping for a Koszul tensor product that may have collapsed
/// because one factor was one-dimensional.
class TensorIndexer {
 public:
  TensorIndexer(AlgebraPtr left, AlgebraPtr right);
  const AlgebraPtr& product() const { return product_; }
  std::size_t index(std::size_t a, std::size_t b) const;
  std::pair<std::size_t, std::size_t> decode(std::size_t idx) const;

 private:
  AlgebraPtr left_, right_, product_;
};

struct FamilyDescriptor {
  std::string name;
  std::map<std::string, int> params;  // always contains "n"
  int n = 0;
  int filter_gap = 1;

  GradedDims slot_dims;
  AlgebraPtr slot_algebra;  // null for Betti-level families

  /// Betti table of X_k (k = n - e p for column p).
  std::function<GradedDims(int k)> level_dims;
  /// Presented families only.
  std::function<AlgebraPtr(int k)> level_algebra;
  /// X_k -> slot (x) X_{k-e}, the pullback along one face with the new
  /// slot placed first.
  std::function<AlgebraHom(int k)> coaction;

  std::vector<std::string> pullback_template;

  int p_max = 0;                    // largest valid column
  bool beyond_range_empty = false;  // columns past p_max are zero by construction
  CohomologyKind e1_kind = CohomologyKind::CompactSupport;
  Convergence convergence = Convergence::CompactSupportDirect;
  std::optional<int> duality_dim;  // complex dimension used for duality
  bool degeneration_assumed = false;
  std::string degeneration_justification;
  /// Betti-level families whose only differential is a known scalar between
  /// one-dimensional cells: value of d_{p+1} at column p, if any.
  std::function<std::optional<Rational>(int p)> scalar_differential;
  /// Ordinary degrees the family certifies (dual table), if restricted.
  std::optional<int> valid_up_to_degree;
  std::string range_note;

  bool presented() const { return slot_algebra != nullptr; }
  int level(int p) const { return n - filter_gap * p; }
};

FamilyDescriptor family_uconf_plane(int n);
FamilyDescriptor family_tuples(int r, int n);
FamilyDescriptor family_pencils_p1(int m, int n);
FamilyDescriptor family_pencils_curve(int g, int n, const std::vector<std::size_t>& relabel = {});
FamilyDescriptor family_uconf_general(const GradedDims& dims, int n, CohomologyKind convention);

/// Sign attached to face i (1-based) in the alternating sum; `fault_face`
/// flips one face and exists only to exercise the checks.
int face_sign(int i, std::optional<int> fault_face = std::nullopt);

/// f~_{p,i}: slots^p (x) X_{n-ep} -> slots^{p+1} (x) X_{n-e(p+1)}.
/// Source slot j goes to j (j < i) or j+1 (j >= i); the tail goes through
/// the coaction with its slot factor moved to position i.
class FacePullback {
 public:
  FacePullback(const FamilyDescriptor& fam, int p, int i);
  /// Shares the decoded coaction of `other`, changing only the face index.
  FacePullback(const FacePullback& other, int i);

  int p() const { return p_; }
  int i() const { return i_; }
  const AlgebraPtr& source_tail() const { return source_tail_; }
  const AlgebraPtr& target_tail() const { return target_tail_; }

  /// Image of one basis tensor as (target key, coefficient) pairs.
  std::vector<std::pair<TensorKey, Rational>> apply_key(const TensorKey& key) const;
  TensorElement apply(const TensorElement& x) const;

  bool degree_preserving() const;
  /// f(x y) == f(x) f(y) for every pair of generators of the source.
  bool multiplicative_on_generators() const;

  struct CoTerm {
    std::size_t slot;
    std::size_t tail;
    Rational coeff;
  };
  /// Coaction of a source tail basis element, decoded into slot and tail parts.
  const std::vector<CoTerm>& coaction_terms(std::size_t tail) const { return images_->at(tail); }

 private:
  AlgebraPtr slot_;
  int p_, i_;
  AlgebraPtr source_tail_, target_tail_;
  std::shared_ptr<const std::vector<std::vector<CoTerm>>> images_;  // per source tail basis element
};

/// Throws ColumnRangeError unless 0 <= p, p+1 <= fam.p_max and 1 <= i <= p+1.
FacePullback face_pullback(const FamilyDescriptor& fam, int p, int i);

}  // namespace ssfilter
