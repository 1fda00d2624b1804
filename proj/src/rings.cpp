#include "ssfilter/rings.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <string>

#include "ssfilter/errors.hpp"

namespace ssfilter {

namespace {

std::vector<std::size_t> checked_relabel(int g, const std::vector<std::size_t>& relabel) {
  std::vector<std::size_t> r = relabel;
  if (r.empty()) {
    r.resize(2 * g);
    std::iota(r.begin(), r.end(), 0);
  }
  std::vector<std::size_t> sorted = r;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t k = 0; k < sorted.size(); ++k)
    if (sorted[k] != k || sorted.size() != static_cast<std::size_t>(2 * g))
      throw InvalidShape("relabelling must be a permutation of the 2g odd classes");
  return r;
}

}  // namespace

AlgebraPtr curve_algebra(int g, const std::vector<std::size_t>& relabel) {
  if (g < 0) throw InvalidShape("genus must be nonnegative");
  const auto original = checked_relabel(g, relabel);
  const std::size_t n = 2 * g + 2;
  const std::size_t e = n - 1;

  std::vector<BasisElement> basis;
  std::vector<Generator> gens;
  basis.push_back({"1", 0, {}});
  for (std::size_t k = 0; k < original.size(); ++k) {
    const std::string name = "α" + std::to_string(original[k] + 1);
    basis.push_back({name, 1, {gens.size()}});
    gens.push_back({name, k + 1});
  }
  basis.push_back({"e", 2, {gens.size()}});
  gens.push_back({"e", e});

  auto product = [=](std::size_t i, std::size_t j) -> SparseVector {
    if (i == 0) return {{j, 1}};
    if (j == 0) return {{i, 1}};
    if (i == e || j == e) return {};
    const std::size_t oi = original[i - 1], oj = original[j - 1];
    const std::size_t gg = static_cast<std::size_t>(g);
    if (oi < gg && oj == oi + gg) return {{e, 1}};
    if (oj < gg && oi == oj + gg) return {{e, -1}};
    return {};
  };
  return PresentedAlgebra::create("H(C_" + std::to_string(g) + ")", std::move(basis),
                                  std::move(gens), 0, product);
}

AlgebraPtr picard_algebra(int g, const std::vector<std::size_t>& relabel) {
  if (g < 0) throw InvalidShape("genus must be nonnegative");
  const auto original = checked_relabel(g, relabel);
  const std::size_t m = original.size();
  if (m > 20) throw InvalidShape("exterior algebra too large");

  // Subsets of generator positions, ordered by size then lexicographically.
  std::vector<std::vector<std::size_t>> subsets;
  for (std::size_t size = 0; size <= m; ++size) {
    std::vector<bool> mask(m, false);
    std::fill(mask.begin(), mask.begin() + size, true);
    do {
      std::vector<std::size_t> s;
      for (std::size_t k = 0; k < m; ++k)
        if (mask[k]) s.push_back(k);
      subsets.push_back(std::move(s));
    } while (std::prev_permutation(mask.begin(), mask.end()));
  }
  std::map<std::vector<std::size_t>, std::size_t> index;
  std::vector<BasisElement> basis;
  for (const auto& s : subsets) {
    std::string label;
    for (std::size_t k : s) label += "a" + std::to_string(original[k] + 1);
    index.emplace(s, basis.size());
    basis.push_back({label.empty() ? "1" : label, static_cast<int>(s.size()), s});
  }
  std::vector<Generator> gens;
  for (std::size_t k = 0; k < m; ++k)
    gens.push_back({"a" + std::to_string(original[k] + 1), index.at({k})});

  auto product = [subsets, index](std::size_t i, std::size_t j) -> SparseVector {
    const auto& x = subsets[i];
    const auto& y = subsets[j];
    std::vector<std::size_t> merged;
    int sign = 1;
    // Count inversions of the concatenation x ++ y.
    for (std::size_t a : x)
      for (std::size_t b : y) {
        if (a == b) return {};
        if (a > b) sign = -sign;
      }
    std::merge(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(merged));
    return {{index.at(merged), sign}};
  };
  return PresentedAlgebra::create("H(Pic_" + std::to_string(g) + ")", std::move(basis),
                                  std::move(gens), 0, product);
}

// ---------------------------------------------------------------- Grassmann

namespace {

using Exponents = std::vector<int>;  // exponent of c_1..c_k
using Polynomial = std::map<Exponents, Rational>;

// All exponent vectors of weight w, in descending lexicographic order.
std::vector<Exponents> monomials_of_weight(int k, int w) {
  std::vector<Exponents> out;
  Exponents cur(k, 0);
  auto rec = [&](auto&& self, int var, int remaining) -> void {
    if (var < 0) {
      if (remaining == 0) out.push_back(cur);
      return;
    }
    for (int a = remaining / (var + 1); a >= 0; --a) {
      cur[var] = a;
      self(self, var - 1, remaining - a * (var + 1));
    }
    cur[var] = 0;
  };
  rec(rec, k - 1, w);
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

Polynomial poly_mul(const Polynomial& a, const Polynomial& b) {
  Polynomial out;
  for (const auto& [ea, ca] : a)
    for (const auto& [eb, cb] : b) {
      Exponents e(ea.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      out[e] += ca * cb;
    }
  std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
  return out;
}

std::string monomial_label(const Exponents& e) {
  std::string s;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i] == 0) continue;
    s += "c" + std::to_string(i + 1);
    if (e[i] > 1) s += "^" + std::to_string(e[i]);
  }
  return s.empty() ? "1" : s;
}

struct GrassmannData {
  int k = 0, N = 0;
  AlgebraPtr algebra;
  std::map<Exponents, SparseVector> normal_form;  // every monomial of weight <= 2*top
  std::vector<Polynomial> quotient;               // s_0 .. s_{2*top + k}

  SparseVector reduce(const Polynomial& poly) const {
    SparseVector out;
    for (const auto& [e, c] : poly) {
      auto it = normal_form.find(e);
      if (it != normal_form.end()) add_scaled(out, it->second, c);
    }
    return out;
  }
};

std::shared_ptr<const GrassmannData> build_grassmann(int k, int N) {
  auto data = std::make_shared<GrassmannData>();
  data->k = k;
  data->N = N;
  const int top = k * (N - k);
  const int max_weight = std::max(2 * top + 1, top + k);

  // s_j via the recursion, as polynomials in c_1..c_k.
  data->quotient.push_back({{Exponents(k, 0), Rational(1)}});
  for (int j = 1; j <= max_weight + k; ++j) {
    Polynomial s;
    for (int i = 1; i <= std::min(j, k); ++i) {
      Exponents ci(k, 0);
      ci[i - 1] = 1;
      for (const auto& [e, c] : poly_mul({{ci, Rational(1)}}, data->quotient[j - i])) s[e] -= c;
    }
    std::erase_if(s, [](const auto& kv) { return kv.second == 0; });
    data->quotient.push_back(std::move(s));
  }

  struct WeightBlock {
    std::vector<Exponents> monomials;
    RowEchelon echelon;
  };
  std::vector<WeightBlock> blocks(max_weight + 1);
  std::vector<BasisElement> basis;
  std::map<Exponents, std::size_t> basis_index;

  for (int w = 0; w <= max_weight; ++w) {
    WeightBlock& block = blocks[w];
    block.monomials = monomials_of_weight(k, w);
    std::map<Exponents, std::size_t> column;
    for (std::size_t c = 0; c < block.monomials.size(); ++c) column[block.monomials[c]] = c;
    std::vector<RationalMatrix::Triplet> triplets;
    std::size_t row = 0;
    for (int j = N - k + 1; j <= std::min(N, w); ++j)
      for (const auto& m : monomials_of_weight(k, w - j)) {
        for (const auto& [e, c] : poly_mul({{m, Rational(1)}}, data->quotient[j]))
          triplets.emplace_back(row, column.at(e), c);
        ++row;
      }
    block.echelon = row_reduce(RationalMatrix(row, block.monomials.size(), std::move(triplets)));
    std::vector<bool> pivot(block.monomials.size(), false);
    for (auto c : block.echelon.pivots) pivot[c] = true;
    for (std::size_t c = 0; c < block.monomials.size(); ++c) {
      if (pivot[c]) continue;
      if (w > top) throw Error("Grassmannian presentation has classes above the top degree");
      basis_index[block.monomials[c]] = basis.size();
      basis.push_back({monomial_label(block.monomials[c]), 2 * w, {}});
    }
  }

  // Normal forms: standard monomials map to themselves; a pivot monomial is
  // minus the free part of its echelon row.
  for (int w = 0; w <= max_weight; ++w) {
    const WeightBlock& block = blocks[w];
    for (std::size_t r = 0; r < block.echelon.rank; ++r) {
      SparseVector nf;
      for (const auto& [c, v] : block.echelon.reduced.row(r)) {
        if (c == block.echelon.pivots[r]) continue;
        nf.emplace(basis_index.at(block.monomials[c]), -v);
      }
      data->normal_form[block.monomials[block.echelon.pivots[r]]] = std::move(nf);
    }
    for (const auto& m : block.monomials)
      if (auto it = basis_index.find(m); it != basis_index.end())
        data->normal_form[m] = {{it->second, 1}};
  }

  // Generators: the standard c_i. Standard monomials are closed under taking
  // divisors, so these generate and every basis word uses only them.
  std::vector<Generator> gens;
  std::map<int, std::size_t> gen_of_var;
  for (int i = 0; i < k; ++i) {
    Exponents ci(k, 0);
    ci[i] = 1;
    if (auto it = basis_index.find(ci); it != basis_index.end()) {
      gen_of_var[i] = gens.size();
      gens.push_back({"c" + std::to_string(i + 1), it->second});
    }
  }
  std::vector<Exponents> exps(basis.size());
  for (const auto& [e, idx] : basis_index) exps[idx] = e;
  for (std::size_t idx = 0; idx < basis.size(); ++idx)
    for (int i = 0; i < k; ++i)
      for (int a = 0; a < exps[idx][i]; ++a) basis[idx].word.push_back(gen_of_var.at(i));

  auto product = [exps, d = data.get(), k](std::size_t i, std::size_t j) -> SparseVector {
    Exponents e(k);
    for (int v = 0; v < k; ++v) e[v] = exps[i][v] + exps[j][v];
    auto it = d->normal_form.find(e);
    return it == d->normal_form.end() ? SparseVector{} : it->second;
  };
  const std::string name = "H(G(" + std::to_string(k) + "," + std::to_string(N) + "))";
  data->algebra = PresentedAlgebra::create(name, std::move(basis), std::move(gens),
                                           basis_index.at(Exponents(k, 0)), product);
  return data;
}

std::shared_ptr<const GrassmannData> grassmann_data(int k, int N) {
  if (k <= 0 || k > N)
    throw InvalidShape("G(" + std::to_string(k) + "," + std::to_string(N) +
                       ") requires 0 < k <= N");
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const GrassmannData>> cache;
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find({k, N}); it != cache.end()) return it->second;
  }
  auto data = build_grassmann(k, N);
  std::lock_guard lock(mutex);
  return cache.try_emplace({k, N}, std::move(data)).first->second;
}

}  // namespace

AlgebraPtr grassmann_algebra(int k, int N) { return grassmann_data(k, N)->algebra; }

Element grassmann_chern_class(int k, int N, int i) {
  const auto data = grassmann_data(k, N);
  if (i < 0 || i > k) return Element::zero(data->algebra);
  Exponents e(k, 0);
  if (i > 0) e[i - 1] = 1;
  return Element(data->algebra, data->reduce({{e, Rational(1)}}));
}

Element quotient_chern_class(int k, int N, int j) {
  const auto data = grassmann_data(k, N);
  if (j < 0) return Element::zero(data->algebra);
  if (static_cast<std::size_t>(j) >= data->quotient.size()) return Element::zero(data->algebra);
  return Element(data->algebra, data->reduce(data->quotient[j]));
}

Element quotient_top_chern(int N) {
  if (N < 3) throw InvalidShape("quotient_top_chern requires N >= 3");
  return quotient_chern_class(2, N, N - 2);
}

AlgebraPtr tensor_algebra(const AlgebraPtr& a, const AlgebraPtr& b) {
  return PresentedAlgebra::tensor(a, b);
}

GradedDims compact_support_affine(int d) {
  if (d < 0) throw InvalidShape("affine space dimension must be nonnegative");
  return GradedDims{{2 * d, 1}};
}

GradedDims macdonald_sym(const GradedDims& dims, int n) {
  if (n < 0) throw InvalidShape("symmetric power must be nonnegative");
  return detail::sym_lambda_coefficient(dims, n, /*exterior_on_odd=*/true);
}

}  // namespace ssfilter
