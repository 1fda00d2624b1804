#pragma once

// E1 pages, face-pullback differentials, E2 and the Betti tables of the
// zeroth stratum.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ssfilter/families.hpp"
#include "ssfilter/qexact.hpp"
#include "ssfilter/superalg.hpp"

namespace ssfilter {

struct EngineOptions {
  bool reverse_order = false;   // enumerate every basis backwards
  bool attach_labels = true;
  bool verify_differentials = true;
  /// Tensor terms the orbit-level recomputation may touch per differential;
  /// above it a deterministic sample of source vectors is checked.
  std::size_t verify_budget = 400000;
  /// Test hook: flips face `fault_face` in the fast route only, so the
  /// orbit-level verification and d d = 0 both have something to catch.
  std::optional<int> fault_face;
};

using Bidegree = std::pair<int, int>;

struct Cell {
  std::uint64_t dim = 0;
  std::vector<std::string> labels;
};

struct Page {
  int page_index = 1;
  std::string family;
  std::map<std::string, int> params;
  std::map<Bidegree, Cell> cells;  // nonzero cells only
  /// (p, q) -> matrix of E^{p,q} -> E^{p+1,q} (rows: target basis).
  std::map<Bidegree, RationalMatrix> differentials;
  /// Spots where two nonzero cells meet but no differential is known.
  std::vector<Bidegree> missing_differentials;
  /// Last column whose outgoing differential was not computed because the
  /// next column lies outside the family's range.
  std::optional<int> open_column;
  int max_column = 0;

  std::uint64_t dim(int p, int q) const;
  std::uint64_t total_dim() const;
};

/// Basis of one E1 column: pairs (invariant monomial, level basis element)
/// grouped by q.
class Column {
 public:
  Column(const FamilyDescriptor& fam, int p, bool reverse_order = false);

  int p() const { return p_; }
  const SgnInvariantBasis& invariants() const { return invariants_; }
  const AlgebraPtr& tail() const { return tail_; }
  const std::map<int, std::vector<std::pair<std::size_t, std::size_t>>>& blocks() const { return blocks_; }
  const std::vector<std::pair<std::size_t, std::size_t>>& basis(int q) const;
  std::optional<std::size_t> position(int q, std::size_t monomial, std::size_t tail) const;
  std::string label(std::size_t monomial, std::size_t tail) const;
  GradedDims dims() const;

 private:
  int p_;
  SgnInvariantBasis invariants_;
  AlgebraPtr tail_;
  std::map<int, std::vector<std::pair<std::size_t, std::size_t>>> blocks_;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> position_;
};

/// Counts source vectors whose target block is nonempty.
struct VerificationStats {
  std::size_t vectors_checked = 0;
  std::size_t vectors_total = 0;
};

/// Matrices of d_{p+1} = sum_i (-1)^{i-1} f~_{p,i} on invariants, keyed by q.
/// Entries come from inserting the slot factor of the coaction into
/// canonical tuples; with `verify_differentials` they are recomputed on the
/// full orbit representatives and projected back (any disagreement throws).
std::map<int, RationalMatrix> assemble_differential(const FamilyDescriptor& fam, int p,
                                                    const EngineOptions& options = {},
                                                    VerificationStats* stats = nullptr);

Page build_e1(const FamilyDescriptor& fam, const EngineOptions& options = {});

/// Throws DifferentialsUnavailable if two nonzero cells meet without a known
/// differential, CompositionNonzero if consecutive differentials do not compose to 0.
Page compute_e2(const Page& e1);

/// First spot (p, q) with d_{p+2} d_{p+1} != 0, if any.
std::optional<Bidegree> first_nonzero_composite(const Page& page);

std::int64_t euler_characteristic(const Page& page);

struct BettiTable {
  GradedDims dims;
  std::string kind;  // compact-support | relative | ordinary
  bool converged_assumed = false;
  std::optional<int> valid_up_to_degree;
  std::optional<int> valid_from_degree;
  std::optional<int> duality_dim;
};

struct StratumBetti {
  BettiTable primary;            // the abutment of the spectral sequence
  std::optional<BettiTable> dual;  // ordinary cohomology of the stratum
};

/// Collapses E2 by total degree. Throws DegenerationUnknown when a higher
/// differential could connect two nonzero E2 cells and the family does not
/// assume degeneration.
StratumBetti betti_from_e2(const FamilyDescriptor& fam, const Page& e2);
StratumBetti betti_of_stratum(const FamilyDescriptor& fam, const EngineOptions& options = {});

struct StalkLevel {
  int p = 0;
  std::vector<std::uint64_t> term_dims;
  std::vector<std::uint64_t> ranks;
  std::vector<std::uint64_t> cohomology;
  std::int64_t alternating_sum = 0;
  bool exact = false;
};

struct StalkReport {
  std::vector<StalkLevel> levels;
  bool exact = true;
};

/// Augmented coboundary complexes of the simplices on 1..p_max vertices.
StalkReport stalk_acyclicity_check(int p_max);

/// SSFILTER_THREADS when set to a positive integer, else the hardware count.
std::size_t thread_count();
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace ssfilter
