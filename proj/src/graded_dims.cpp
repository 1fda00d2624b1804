#include "ssfilter/graded_dims.hpp"

#include <limits>
#include <sstream>
#include <vector>

#include <gmpxx.h>

#include "ssfilter/errors.hpp"
#include "ssfilter/qexact.hpp"

namespace ssfilter {

GradedDims::GradedDims(std::initializer_list<Map::value_type> entries) {
  for (const auto& [d, r] : entries) add(d, r);
}

GradedDims::GradedDims(const Map& entries) {
  for (const auto& [d, r] : entries) add(d, r);
}

std::uint64_t GradedDims::at(int degree) const {
  auto it = ranks_.find(degree);
  return it == ranks_.end() ? 0 : it->second;
}

void GradedDims::set(int degree, std::uint64_t rank) {
  if (rank == 0)
    ranks_.erase(degree);
  else
    ranks_[degree] = rank;
}

void GradedDims::add(int degree, std::uint64_t rank) {
  if (rank != 0) ranks_[degree] += rank;
}

std::uint64_t GradedDims::total() const {
  std::uint64_t t = 0;
  for (const auto& [d, r] : ranks_) t += r;
  return t;
}

std::int64_t GradedDims::euler_characteristic() const {
  std::int64_t chi = 0;
  for (const auto& [d, r] : ranks_) chi += (d % 2 == 0 ? 1 : -1) * static_cast<std::int64_t>(r);
  return chi;
}

int GradedDims::top_degree() const { return ranks_.empty() ? -1 : ranks_.rbegin()->first; }

GradedDims GradedDims::shifted(int by) const {
  GradedDims out;
  for (const auto& [d, r] : ranks_) out.ranks_[d + by] = r;
  return out;
}

GradedDims GradedDims::convolve(const GradedDims& other) const {
  GradedDims out;
  for (const auto& [d1, r1] : ranks_)
    for (const auto& [d2, r2] : other.ranks_) out.add(d1 + d2, r1 * r2);
  return out;
}

std::string GradedDims::to_string() const {
  std::ostringstream os;
  os << *this;
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const GradedDims& dims) {
  os << '{';
  bool first = true;
  for (const auto& [d, r] : dims.entries()) {
    if (!first) os << ", ";
    os << d << ": " << r;
    first = false;
  }
  return os << '}';
}

namespace detail {

GradedDims sym_lambda_coefficient(const GradedDims& dims, int n, bool exterior_on_odd) {
  if (n < 0) return {};
  for (const auto& [d, r] : dims.entries())
    if (d < 0) throw InvalidShape("graded dimensions must live in nonnegative degrees");

  const int top = dims.top_degree() < 0 ? 0 : dims.top_degree();
  const std::size_t t_len = static_cast<std::size_t>(top) * n + 1;
  // series[k][t] = coefficient of x^k t^t, truncated at x^n.
  std::vector<std::vector<Integer>> series(n + 1, std::vector<Integer>(t_len));
  series[0][0] = 1;

  for (const auto& [degree, rank] : dims.entries()) {
    const bool exterior = (degree % 2 == 1) == exterior_on_odd;
    // factor(x) = sum_k coeff_k x^k t^{degree k}
    std::vector<Integer> factor(n + 1);
    for (int k = 0; k <= n; ++k) {
      // (1+y)^b -> C(b, k); (1-y)^{-b} -> C(b+k-1, k). Ranks are never zero.
      const unsigned long top_arg = exterior ? rank : rank + k - 1;
      mpz_bin_uiui(factor[k].get_mpz_t(), top_arg, k);
    }
    std::vector<std::vector<Integer>> next(n + 1, std::vector<Integer>(t_len));
    for (int a = 0; a <= n; ++a)
      for (std::size_t t = 0; t < t_len; ++t) {
        if (series[a][t] == 0) continue;
        for (int k = 0; a + k <= n; ++k) {
          if (factor[k] == 0) continue;
          const std::size_t tt = t + static_cast<std::size_t>(degree) * k;
          if (tt >= t_len) break;
          next[a + k][tt] += series[a][t] * factor[k];
        }
      }
    series = std::move(next);
  }

  GradedDims out;
  for (std::size_t t = 0; t < t_len; ++t) {
    const Integer& c = series[n][t];
    if (c == 0) continue;
    if (!c.fits_ulong_p()) throw RangeError("graded dimension exceeds 64 bits");
    out.set(static_cast<int>(t), c.get_ui());
  }
  return out;
}

}  // namespace detail

}  // namespace ssfilter
