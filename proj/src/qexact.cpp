#include "ssfilter/qexact.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <sstream>

#include "ssfilter/errors.hpp"

namespace ssfilter {

std::size_t bit_length(const Rational& x) {
  return mpz_sizeinbase(x.get_num_mpz_t(), 2) + mpz_sizeinbase(x.get_den_mpz_t(), 2);
}

RationalMatrix::RationalMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows) {}

RationalMatrix::RationalMatrix(std::size_t rows, std::size_t cols, std::vector<Triplet> triplets)
    : rows_(rows), cols_(cols), data_(rows) {
  std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return std::tie(std::get<0>(a), std::get<1>(a)) < std::tie(std::get<0>(b), std::get<1>(b));
  });
  for (std::size_t k = 0; k < triplets.size();) {
    const auto [i, j, first] = triplets[k];
    if (i >= rows || j >= cols) throw ShapeMismatch("matrix entry index out of range");
    Rational sum = first;
    std::size_t next = k + 1;
    while (next < triplets.size() && std::get<0>(triplets[next]) == i &&
           std::get<1>(triplets[next]) == j) {
      sum += std::get<2>(triplets[next]);
      ++next;
    }
    if (sum != 0) data_[i].emplace_back(j, std::move(sum));
    k = next;
  }
}

RationalMatrix RationalMatrix::identity(std::size_t n) {
  RationalMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.data_[i].emplace_back(i, Rational(1));
  return m;
}

RationalMatrix RationalMatrix::from_dense(const std::vector<RationalVector>& dense) {
  const std::size_t cols = dense.empty() ? 0 : dense.front().size();
  RationalMatrix m(dense.size(), cols);
  for (std::size_t i = 0; i < dense.size(); ++i) {
    if (dense[i].size() != cols) throw ShapeMismatch("ragged dense matrix");
    for (std::size_t j = 0; j < cols; ++j)
      if (dense[i][j] != 0) m.data_[i].emplace_back(j, dense[i][j]);
  }
  return m;
}

std::size_t RationalMatrix::nnz() const {
  std::size_t total = 0;
  for (const auto& r : data_) total += r.size();
  return total;
}

Rational RationalMatrix::at(std::size_t i, std::size_t j) const {
  if (i >= rows_ || j >= cols_) throw ShapeMismatch("matrix index out of range");
  const Row& r = data_[i];
  auto it = std::lower_bound(r.begin(), r.end(), j,
                             [](const Entry& e, std::size_t col) { return e.first < col; });
  if (it != r.end() && it->first == j) return it->second;
  return Rational(0);
}

void RationalMatrix::set(std::size_t i, std::size_t j, const Rational& value) {
  if (i >= rows_ || j >= cols_) throw ShapeMismatch("matrix index out of range");
  Row& r = data_[i];
  auto it = std::lower_bound(r.begin(), r.end(), j,
                             [](const Entry& e, std::size_t col) { return e.first < col; });
  const bool present = it != r.end() && it->first == j;
  if (value == 0) {
    if (present) r.erase(it);
  } else if (present) {
    it->second = value;
  } else {
    r.insert(it, Entry{j, value});
  }
}

RationalMatrix RationalMatrix::transpose() const {
  RationalMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (const auto& [j, v] : data_[i]) t.data_[j].emplace_back(i, v);
  return t;
}

std::vector<RationalVector> RationalMatrix::to_dense() const {
  std::vector<RationalVector> dense(rows_, RationalVector(cols_));
  for (std::size_t i = 0; i < rows_; ++i)
    for (const auto& [j, v] : data_[i]) dense[i][j] = v;
  return dense;
}

RationalMatrix RationalMatrix::select_columns(const std::vector<std::size_t>& columns) const {
  std::vector<std::size_t> position(cols_, std::numeric_limits<std::size_t>::max());
  for (std::size_t k = 0; k < columns.size(); ++k) position.at(columns[k]) = k;
  std::vector<Triplet> triplets;
  for (std::size_t i = 0; i < rows_; ++i)
    for (const auto& [j, v] : data_[i])
      if (position[j] != std::numeric_limits<std::size_t>::max())
        triplets.emplace_back(i, position[j], v);
  return RationalMatrix(rows_, columns.size(), std::move(triplets));
}

RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b) {
  if (a.cols_ != b.rows_) {
    std::ostringstream msg;
    msg << "cannot multiply " << a.rows_ << "x" << a.cols_ << " by " << b.rows_ << "x"
        << b.cols_;
    throw ShapeMismatch(msg.str());
  }
  RationalMatrix c(a.rows_, b.cols_);
  std::map<std::size_t, Rational> acc;
  for (std::size_t i = 0; i < a.rows_; ++i) {
    acc.clear();
    for (const auto& [k, x] : a.data_[i])
      for (const auto& [j, y] : b.data_[k]) acc[j] += x * y;
    for (auto& [j, v] : acc)
      if (v != 0) c.data_[i].emplace_back(j, std::move(v));
  }
  return c;
}

RationalVector operator*(const RationalMatrix& m, const RationalVector& v) {
  if (v.size() != m.cols()) throw ShapeMismatch("vector length does not match matrix");
  RationalVector out(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (const auto& [j, x] : m.row(i)) out[i] += x * v[j];
  return out;
}

namespace {

using Row = RationalMatrix::Row;

// target -= factor * source, both sorted sparse rows.
void subtract_multiple(Row& target, const Rational& factor, const Row& source) {
  Row merged;
  merged.reserve(target.size() + source.size());
  auto t = target.begin();
  auto s = source.begin();
  while (t != target.end() || s != source.end()) {
    if (s == source.end() || (t != target.end() && t->first < s->first)) {
      merged.push_back(std::move(*t++));
    } else if (t == target.end() || s->first < t->first) {
      merged.emplace_back(s->first, -factor * s->second);
      ++s;
    } else {
      Rational v = t->second - factor * s->second;
      if (v != 0) merged.emplace_back(t->first, std::move(v));
      ++t;
      ++s;
    }
  }
  target = std::move(merged);
}

void scale_to_monic(Row& r) {
  const Rational lead = r.front().second;
  for (auto& e : r) e.second /= lead;
}

// Gauss-Jordan on sparse rows. Rows are bucketed by leading column so each
// column only visits the rows that can supply its pivot.
RowEchelon reduce_sparse(const RationalMatrix& m) {
  std::vector<Row> rows;
  rows.reserve(m.rows());
  std::vector<std::vector<std::size_t>> by_lead(m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    rows.push_back(m.row(i));
    if (!rows.back().empty()) by_lead[rows.back().front().first].push_back(i);
  }

  RowEchelon out;
  std::vector<std::size_t> pivot_rows;
  for (std::size_t col = 0; col < m.cols(); ++col) {
    auto& bucket = by_lead[col];
    if (bucket.empty()) continue;
    auto best = std::min_element(bucket.begin(), bucket.end(), [&](std::size_t a, std::size_t b) {
      return bit_length(rows[a].front().second) < bit_length(rows[b].front().second);
    });
    const std::size_t pivot = *best;
    scale_to_monic(rows[pivot]);
    for (std::size_t other : bucket) {
      if (other == pivot) continue;
      const Rational factor = rows[other].front().second;
      subtract_multiple(rows[other], factor, rows[pivot]);
      if (!rows[other].empty()) by_lead[rows[other].front().first].push_back(other);
    }
    bucket.clear();
    out.pivots.push_back(col);
    pivot_rows.push_back(pivot);
  }

  // Back substitution, last pivot first.
  for (std::size_t k = pivot_rows.size(); k-- > 0;) {
    const Row& source = rows[pivot_rows[k]];
    const std::size_t col = out.pivots[k];
    for (std::size_t j = 0; j < k; ++j) {
      Row& target = rows[pivot_rows[j]];
      auto it = std::lower_bound(target.begin(), target.end(), col,
                                 [](const auto& e, std::size_t c) { return e.first < c; });
      if (it == target.end() || it->first != col) continue;
      const Rational factor = it->second;
      subtract_multiple(target, factor, source);
    }
  }

  out.rank = pivot_rows.size();
  std::vector<RationalMatrix::Triplet> triplets;
  for (std::size_t k = 0; k < pivot_rows.size(); ++k)
    for (const auto& [j, v] : rows[pivot_rows[k]]) triplets.emplace_back(k, j, v);
  out.reduced = RationalMatrix(out.rank, m.cols(), std::move(triplets));
  return out;
}

RowEchelon reduce_dense(const RationalMatrix& m) {
  auto a = m.to_dense();
  const std::size_t cols = m.cols();
  RowEchelon out;
  std::size_t next = 0;
  for (std::size_t col = 0; col < cols && next < a.size(); ++col) {
    std::size_t pivot = a.size();
    std::size_t best_bits = 0;
    for (std::size_t i = next; i < a.size(); ++i) {
      if (a[i][col] == 0) continue;
      const std::size_t bits = bit_length(a[i][col]);
      if (pivot == a.size() || bits < best_bits) {
        pivot = i;
        best_bits = bits;
      }
    }
    if (pivot == a.size()) continue;
    std::swap(a[pivot], a[next]);
    const Rational lead = a[next][col];
    for (std::size_t j = col; j < cols; ++j) a[next][j] /= lead;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (i == next || a[i][col] == 0) continue;
      const Rational factor = a[i][col];
      for (std::size_t j = col; j < cols; ++j)
        if (a[next][j] != 0) a[i][j] -= factor * a[next][j];
    }
    out.pivots.push_back(col);
    ++next;
  }
  out.rank = next;
  a.resize(next);
  out.reduced = a.empty() ? RationalMatrix(0, cols) : RationalMatrix::from_dense(a);
  return out;
}

}  // namespace

RowEchelon row_reduce(const RationalMatrix& m) {
  if (m.cols() < kDenseColumnThreshold) return reduce_dense(m);
  return reduce_sparse(m);
}

RankKernel rank_and_kernel(const RationalMatrix& m) {
  const RowEchelon ech = row_reduce(m);
  RankKernel out;
  out.rank = ech.rank;
  std::vector<bool> is_pivot(m.cols(), false);
  for (std::size_t c : ech.pivots) is_pivot[c] = true;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    RationalVector v(m.cols());
    v[free] = 1;
    for (std::size_t k = 0; k < ech.rank; ++k) v[ech.pivots[k]] = -ech.reduced.at(k, free);
    out.kernel_basis.push_back(std::move(v));
  }
  return out;
}

std::size_t rank(const RationalMatrix& m) { return row_reduce(m).rank; }

std::size_t complex_cohomology(const RationalMatrix& d_in, const RationalMatrix& d_out) {
  if (d_in.rows() != d_out.cols()) {
    std::ostringstream msg;
    msg << "incoming map lands in Q^" << d_in.rows() << " but outgoing map starts at Q^"
        << d_out.cols();
    throw ShapeMismatch(msg.str());
  }
  if (!(d_out * d_in).is_zero()) throw CompositionNonzero("d_out * d_in is not zero");
  const std::size_t middle = d_in.rows();
  return middle - rank(d_out) - rank(d_in);
}

}  // namespace ssfilter
