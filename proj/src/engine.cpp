#include "ssfilter/engine.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numeric>
#include <random>
#include <thread>

#include "ssfilter/errors.hpp"

namespace ssfilter {

std::uint64_t Page::dim(int p, int q) const {
  auto it = cells.find({p, q});
  return it == cells.end() ? 0 : it->second.dim;
}

std::uint64_t Page::total_dim() const {
  std::uint64_t t = 0;
  for (const auto& [pq, c] : cells) t += c.dim;
  return t;
}

// ------------------------------------------------------------------ threads

std::size_t thread_count() {
  if (const char* env = std::getenv("SSFILTER_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min(thread_count(), count);
  if (workers <= 1) {
    for (std::size_t k = 0; k < count; ++k) body(k);
    return;
  }
  std::mutex mutex;
  std::size_t next = 0;
  std::exception_ptr error;
  auto run = [&] {
    for (;;) {
      std::size_t k;
      {
        std::lock_guard lock(mutex);
        if (error || next == count) return;
        k = next++;
      }
      try {
        body(k);
      } catch (...) {
        std::lock_guard lock(mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> threads;
  for (std::size_t w = 0; w < workers; ++w) threads.emplace_back(run);
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

// ------------------------------------------------------------------ columns

Column::Column(const FamilyDescriptor& fam, int p, bool reverse_order)
    : p_(p), invariants_(fam.slot_algebra, static_cast<std::size_t>(p), reverse_order) {
  if (!fam.presented()) throw DifferentialsUnavailable("family " + fam.name + " has no presented algebras");
  tail_ = fam.level_algebra(fam.level(p));
  std::vector<std::size_t> tails(tail_->dim());
  std::iota(tails.begin(), tails.end(), 0);
  if (reverse_order) std::reverse(tails.begin(), tails.end());
  for (std::size_t m = 0; m < invariants_.size(); ++m)
    for (std::size_t b : tails) {
      const int q = invariants_.degree(m) + tail_->degree(b);
      auto& block = blocks_[q];
      position_[{m, b}] = block.size();
      block.emplace_back(m, b);
    }
}

const std::vector<std::pair<std::size_t, std::size_t>>& Column::basis(int q) const {
  static const std::vector<std::pair<std::size_t, std::size_t>> empty;
  auto it = blocks_.find(q);
  return it == blocks_.end() ? empty : it->second;
}

std::optional<std::size_t> Column::position(int q, std::size_t monomial, std::size_t tail) const {
  auto it = position_.find({monomial, tail});
  if (it == position_.end()) return std::nullopt;
  if (invariants_.degree(monomial) + tail_->degree(tail) != q) return std::nullopt;
  return it->second;
}

std::string Column::label(std::size_t monomial, std::size_t tail) const {
  return invariants_.label(monomial) + " | " + tail_->label(tail);
}

GradedDims Column::dims() const {
  GradedDims d;
  for (const auto& [q, block] : blocks_) d.add(q, block.size());
  return d;
}

// ------------------------------------------------------------- differentials

namespace {

GradedDims column_dims(const FamilyDescriptor& fam, int p) {
  if (p > fam.p_max) return {};
  return sym_ext_dims(fam.slot_dims, p).convolve(fam.level_dims(fam.level(p)));
}

// Orbit-level recomputation of one matrix column.
void verify_column(const std::vector<FacePullback>& faces, const Column& source, const Column& target,
                   int q, std::size_t col, const RationalMatrix& matrix) {
  const auto [m, b] = source.basis(q)[col];
  const TensorElement rep = source.invariants().representative(m, source.tail(), b);
  TensorElement image(target.invariants().algebra(), target.invariants().p(), target.tail());
  for (const auto& face : faces) image += face.apply(rep) * Rational(face_sign(face.i()));
  const InvariantCoordinates coords = project_to_invariants(target.invariants(), image);
  std::map<std::size_t, Rational> expected;
  for (const auto& [key, v] : coords) {
    auto row = target.position(q, key.first, key.second);
    if (!row) throw Error("differential image leaves degree " + std::to_string(q));
    expected[*row] = v;
  }
  for (std::size_t r = 0; r < matrix.rows(); ++r) {
    auto it = expected.find(r);
    const Rational want = it == expected.end() ? Rational(0) : it->second;
    if (matrix.at(r, col) != want)
      throw Error("differential routes disagree at (p, q) = (" + std::to_string(source.p()) + ", " +
                  std::to_string(q) + "), source " + source.label(m, b));
  }
}

}  // namespace

std::map<int, RationalMatrix> assemble_differential(const FamilyDescriptor& fam, int p,
                                                    const EngineOptions& options, VerificationStats* stats) {
  if (!fam.presented())
    throw DifferentialsUnavailable("family " + fam.name + " is Betti-level; differentials are not defined");
  std::vector<FacePullback> faces;
  faces.push_back(face_pullback(fam, p, 1));
  for (int i = 2; i <= p + 1; ++i) faces.emplace_back(faces.front(), i);

  const Column source(fam, p, options.reverse_order);
  const Column target(fam, p + 1, options.reverse_order);
  const SgnInvariantBasis& inv = source.invariants();
  const AlgebraPtr& slot = fam.slot_algebra;

  std::vector<int> qs;
  for (const auto& [q, block] : source.blocks()) qs.push_back(q);
  std::vector<RationalMatrix> results(qs.size());
  std::vector<VerificationStats> block_stats(qs.size());

  parallel_for(qs.size(), [&](std::size_t k) {
    const int q = qs[k];
    const auto& src = source.basis(q);
    const auto& tgt = target.basis(q);
    std::vector<RationalMatrix::Triplet> triplets;
    for (std::size_t col = 0; col < src.size(); ++col) {
      const auto [m, b] = src[col];
      const auto& t = inv.monomial(m);
      std::vector<int> suffix(t.size() + 1, 0);
      for (std::size_t j = t.size(); j-- > 0;) suffix[j] = suffix[j + 1] + slot->degree(t[j]);
      for (const auto& term : faces.front().coaction_terms(b)) {
        const auto c = static_cast<std::uint32_t>(term.slot);
        const std::size_t rc = inv.canonical_rank(c);
        const bool even = !inv.is_odd(c);
        for (std::size_t pos = 0; pos <= t.size(); ++pos) {
          if (pos > 0) {
            const std::size_t rl = inv.canonical_rank(t[pos - 1]);
            if (rl > rc || (even && rl == rc)) break;
          }
          if (pos < t.size()) {
            const std::size_t rr = inv.canonical_rank(t[pos]);
            if (rc > rr || (even && rr == rc)) continue;
          }
          std::vector<std::uint32_t> inserted(t.begin(), t.end());
          inserted.insert(inserted.begin() + pos, c);
          auto tm = target.invariants().find(inserted);
          if (!tm) throw Error("inserted tuple is not a canonical monomial");
          auto row = target.position(q, *tm, term.tail);
          if (!row) throw Error("face image leaves degree " + std::to_string(q));
          int sign = face_sign(static_cast<int>(pos) + 1, options.fault_face);
          if ((slot->degree(c) * suffix[pos]) % 2 != 0) sign = -sign;
          triplets.emplace_back(*row, col, sign * term.coeff);
        }
      }
    }
    RationalMatrix matrix(tgt.size(), src.size(), std::move(triplets));

    if (options.verify_differentials && !tgt.empty()) {
      const std::size_t budget = std::max<std::size_t>(options.verify_budget / qs.size(), 1);
      std::vector<std::size_t> order(src.size());
      std::iota(order.begin(), order.end(), 0);
      std::mt19937_64 rng(0x5eed + static_cast<std::uint64_t>(q) * 7919 + static_cast<std::uint64_t>(p));
      std::shuffle(order.begin(), order.end(), rng);
      std::size_t spent = 0;
      for (std::size_t col : order) {
        const auto [m, b] = src[col];
        const std::size_t cost =
            inv.orbit_size(m) * static_cast<std::size_t>(p + 1) * std::max<std::size_t>(faces.front().coaction_terms(b).size(), 1);
        if (block_stats[k].vectors_checked > 0 && spent + cost > budget) break;
        spent += cost;
        verify_column(faces, source, target, q, col, matrix);
        ++block_stats[k].vectors_checked;
      }
    }
    block_stats[k].vectors_total = tgt.empty() ? 0 : src.size();
    results[k] = std::move(matrix);
  });

  std::map<int, RationalMatrix> out;
  for (std::size_t k = 0; k < qs.size(); ++k) out.emplace(qs[k], std::move(results[k]));
  if (stats) {
    for (const auto& s : block_stats) {
      stats->vectors_checked += s.vectors_checked;
      stats->vectors_total += s.vectors_total;
    }
  }
  return out;
}

// -------------------------------------------------------------------- pages

Page build_e1(const FamilyDescriptor& fam, const EngineOptions& options) {
  Page page;
  page.page_index = 1;
  page.family = fam.name;
  page.params = fam.params;
  page.max_column = fam.p_max;

  if (fam.presented()) {
    std::vector<Column> columns;
    for (int p = 0; p <= fam.p_max; ++p) {
      columns.emplace_back(fam, p, options.reverse_order);
      const GradedDims dims = columns.back().dims();
      if (!(dims == column_dims(fam, p)))
        throw Error("column " + std::to_string(p) + " basis count " + dims.to_string() +
                    " disagrees with the closed form " + column_dims(fam, p).to_string());
      for (const auto& [q, block] : columns.back().blocks()) {
        Cell cell;
        cell.dim = block.size();
        if (options.attach_labels)
          for (const auto& [m, b] : block) cell.labels.push_back(columns.back().label(m, b));
        page.cells.emplace(Bidegree{p, q}, std::move(cell));
      }
    }
    for (int p = 0; p < fam.p_max; ++p)
      for (auto& [q, matrix] : assemble_differential(fam, p, options))
        page.differentials.emplace(Bidegree{p, q}, std::move(matrix));
    if (!fam.beyond_range_empty && fam.p_max >= 0) page.open_column = fam.p_max;
    return page;
  }

  for (int p = 0; p <= fam.p_max; ++p) {
    const GradedDims dims = column_dims(fam, p);
    for (const auto& [q, d] : dims.entries()) page.cells.emplace(Bidegree{p, q}, Cell{d, {}});
  }
  for (const auto& [pq, cell] : page.cells) {
    const auto [p, q] = pq;
    const std::uint64_t next = page.dim(p + 1, q);
    if (next == 0) continue;
    std::optional<Rational> scalar;
    if (fam.scalar_differential) scalar = fam.scalar_differential(p);
    if (scalar && cell.dim == 1 && next == 1)
      page.differentials.emplace(pq, RationalMatrix(1, 1, {{0, 0, *scalar}}));
    else
      page.missing_differentials.push_back(pq);
  }
  if (!fam.beyond_range_empty) page.open_column = fam.p_max;
  return page;
}

namespace {

RationalMatrix differential_or_zero(const Page& page, int p, int q) {
  auto it = page.differentials.find({p, q});
  if (it != page.differentials.end()) return it->second;
  return RationalMatrix(page.dim(p + 1, q), page.dim(p, q));
}

}  // namespace

std::optional<Bidegree> first_nonzero_composite(const Page& page) {
  for (const auto& [pq, d1] : page.differentials) {
    auto it = page.differentials.find({pq.first + 1, pq.second});
    if (it == page.differentials.end()) continue;
    if (!(it->second * d1).is_zero()) return pq;
  }
  return std::nullopt;
}

Page compute_e2(const Page& e1) {
  if (!e1.missing_differentials.empty()) {
    const auto [p, q] = e1.missing_differentials.front();
    throw DifferentialsUnavailable("E1 cells (" + std::to_string(p) + ", " + std::to_string(q) + ") and (" +
                                   std::to_string(p + 1) + ", " + std::to_string(q) +
                                   ") interact but the family offers no differential there");
  }
  Page e2;
  e2.page_index = 2;
  e2.family = e1.family;
  e2.params = e1.params;
  e2.open_column = e1.open_column;
  e2.max_column = e1.max_column;
  std::vector<Bidegree> spots;
  for (const auto& [pq, cell] : e1.cells) spots.push_back(pq);
  std::vector<std::uint64_t> dims(spots.size());
  parallel_for(spots.size(), [&](std::size_t k) {
    const auto [p, q] = spots[k];
    const RationalMatrix d_in = differential_or_zero(e1, p - 1, q);
    const RationalMatrix d_out = differential_or_zero(e1, p, q);
    dims[k] = complex_cohomology(d_in, d_out);
  });
  for (std::size_t k = 0; k < spots.size(); ++k)
    if (dims[k] > 0) e2.cells.emplace(spots[k], Cell{dims[k], {}});
  return e2;
}

std::int64_t euler_characteristic(const Page& page) {
  std::int64_t chi = 0;
  for (const auto& [pq, cell] : page.cells)
    chi += ((pq.first + pq.second) % 2 == 0 ? 1 : -1) * static_cast<std::int64_t>(cell.dim);
  return chi;
}

// -------------------------------------------------------------------- Betti

StratumBetti betti_from_e2(const FamilyDescriptor& fam, const Page& e2) {
  bool higher_possible = false;
  for (const auto& [pq, cell] : e2.cells)
    for (int r = 2; pq.first + r <= e2.max_column; ++r)
      if (e2.dim(pq.first + r, pq.second - r + 1) > 0) {
        if (!fam.degeneration_assumed)
          throw DegenerationUnknown("E2 cells (" + std::to_string(pq.first) + ", " + std::to_string(pq.second) +
                                    ") and (" + std::to_string(pq.first + r) + ", " +
                                    std::to_string(pq.second - r + 1) + ") could be joined by d_" +
                                    std::to_string(r) + " and the family does not assume degeneration");
        higher_possible = true;
      }

  StratumBetti out;
  BettiTable& primary = out.primary;
  if (fam.e1_kind == CohomologyKind::CompactSupport)
    primary.kind = "compact-support";
  else
    primary.kind = fam.convergence == Convergence::RelativeThenDuality ? "relative" : "ordinary";
  primary.converged_assumed = higher_possible;
  primary.duality_dim = fam.duality_dim;
  for (const auto& [pq, cell] : e2.cells) primary.dims.add(pq.first + pq.second, cell.dim);

  if (fam.valid_up_to_degree && fam.duality_dim) {
    const int from = 2 * *fam.duality_dim - *fam.valid_up_to_degree;
    primary.valid_from_degree = from;
    GradedDims kept;
    for (const auto& [k, d] : primary.dims.entries())
      if (k >= from) kept.set(k, d);
    primary.dims = kept;
  }
  if (fam.duality_dim) {
    BettiTable dual;
    dual.kind = "ordinary";
    dual.converged_assumed = higher_possible;
    dual.duality_dim = fam.duality_dim;
    dual.valid_up_to_degree = fam.valid_up_to_degree;
    for (const auto& [k, d] : primary.dims.entries()) dual.dims.add(2 * *fam.duality_dim - k, d);
    out.dual = std::move(dual);
  }
  return out;
}

StratumBetti betti_of_stratum(const FamilyDescriptor& fam, const EngineOptions& options) {
  EngineOptions quiet = options;
  quiet.attach_labels = false;
  return betti_from_e2(fam, compute_e2(build_e1(fam, quiet)));
}

// -------------------------------------------------------------------- stalks

StalkReport stalk_acyclicity_check(int p_max) {
  if (p_max < 1) throw InvalidShape("stalk check needs p_max >= 1");
  if (p_max > 20) throw InvalidShape("stalk check is limited to p_max <= 20");
  StalkReport report;
  for (int p = 1; p <= p_max; ++p) {
    StalkLevel level;
    level.p = p;
    // Subsets of {0..p-1} as bit masks, grouped by size.
    std::vector<std::vector<std::uint32_t>> by_size(p + 1);
    for (std::uint32_t s = 0; s < (1u << p); ++s) by_size[std::popcount(s)].push_back(s);
    std::vector<std::map<std::uint32_t, std::size_t>> index(p + 1);
    for (int k = 0; k <= p; ++k) {
      for (std::size_t j = 0; j < by_size[k].size(); ++j) index[k][by_size[k][j]] = j;
      level.term_dims.push_back(by_size[k].size());
      level.alternating_sum += (k % 2 == 0 ? 1 : -1) * static_cast<std::int64_t>(by_size[k].size());
    }
    std::vector<RationalMatrix> delta;
    for (int k = 0; k < p; ++k) {
      std::vector<RationalMatrix::Triplet> t;
      for (std::size_t col = 0; col < by_size[k].size(); ++col) {
        const std::uint32_t s = by_size[k][col];
        for (int x = 0; x < p; ++x) {
          if (s & (1u << x)) continue;
          const int below = std::popcount(s & ((1u << x) - 1));
          t.emplace_back(index[k + 1].at(s | (1u << x)), col, below % 2 == 0 ? 1 : -1);
        }
      }
      delta.emplace_back(by_size[k + 1].size(), by_size[k].size(), std::move(t));
      level.ranks.push_back(rank(delta.back()));
    }
    level.exact = true;
    for (int k = 0; k <= p; ++k) {
      const RationalMatrix d_in = k == 0 ? RationalMatrix(1, 0) : delta[k - 1];
      const RationalMatrix d_out = k == p ? RationalMatrix(0, 1) : delta[k];
      const std::size_t h = complex_cohomology(d_in, d_out);
      level.cohomology.push_back(h);
      if (h != 0) level.exact = false;
    }
    if (level.alternating_sum != 0) level.exact = false;
    report.exact = report.exact && level.exact;
    report.levels.push_back(std::move(level));
  }
  return report;
}

}  // namespace ssfilter
