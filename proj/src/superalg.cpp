#include "ssfilter/superalg.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "ssfilter/errors.hpp"

namespace ssfilter {

int koszul_sign(std::span<const std::size_t> perm, std::span<const int> degs) {
  if (perm.size() != degs.size()) throw ShapeMismatch("permutation and degree list differ in length");
  std::vector<bool> seen(perm.size(), false);
  for (std::size_t x : perm) {
    if (x >= perm.size() || seen[x]) throw ShapeMismatch("not a permutation");
    seen[x] = true;
  }
  int sign = 1;
  for (std::size_t a = 0; a < perm.size(); ++a)
    for (std::size_t b = a + 1; b < perm.size(); ++b)
      if (perm[a] > perm[b] && (degs[perm[a]] * degs[perm[b]]) % 2 != 0) sign = -sign;
  return sign;
}

GradedDims sym_ext_dims(const GradedDims& dims, int p) {
  return detail::sym_lambda_coefficient(dims, p, /*exterior_on_odd=*/false);
}

// ----------------------------------------------------------- TensorElement

TensorElement::TensorElement(AlgebraPtr slot_algebra, std::size_t p, AlgebraPtr tail_algebra)
    : slot_algebra_(std::move(slot_algebra)), p_(p), tail_algebra_(std::move(tail_algebra)) {}

Rational TensorElement::coefficient(const TensorKey& key) const {
  auto it = terms_.find(key);
  return it == terms_.end() ? Rational(0) : it->second;
}

int TensorElement::degree_of(const TensorKey& key) const {
  int d = tail_algebra_->degree(key.tail);
  for (auto s : key.slots) d += slot_algebra_->degree(s);
  return d;
}

std::optional<int> TensorElement::degree() const {
  std::optional<int> d;
  for (const auto& [key, c] : terms_) {
    const int dk = degree_of(key);
    if (d && *d != dk) return std::nullopt;
    d = dk;
  }
  return d;
}

void TensorElement::add_term(TensorKey key, const Rational& coeff) {
  if (coeff == 0) return;
  if (key.slots.size() != p_) throw ShapeMismatch("tensor key has the wrong number of slots");
  auto [it, inserted] = terms_.try_emplace(std::move(key), coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == 0) terms_.erase(it);
  }
}

void TensorElement::check_compatible(const TensorElement& other) const {
  if (slot_algebra_ != other.slot_algebra_ || tail_algebra_ != other.tail_algebra_ ||
      p_ != other.p_)
    throw AlgebraMismatch("tensor elements live in different tensor powers");
}

TensorElement& TensorElement::operator+=(const TensorElement& other) {
  check_compatible(other);
  for (const auto& [key, c] : other.terms_) add_term(key, c);
  return *this;
}

TensorElement TensorElement::operator*(const Rational& scalar) const {
  TensorElement out(slot_algebra_, p_, tail_algebra_);
  if (scalar == 0) return out;
  for (const auto& [key, c] : terms_) out.terms_.emplace(key, c * scalar);
  return out;
}

bool TensorElement::operator==(const TensorElement& other) const {
  return slot_algebra_ == other.slot_algebra_ && tail_algebra_ == other.tail_algebra_ &&
         p_ == other.p_ && terms_ == other.terms_;
}

TensorElement operator*(const TensorElement& x, const TensorElement& y) {
  x.check_compatible(y);
  const auto& A = *x.slot_algebra_;
  const auto& B = *x.tail_algebra_;
  const std::size_t p = x.p_;
  TensorElement out(x.slot_algebra_, p, x.tail_algebra_);

  for (const auto& [kx, cx] : x.terms_) {
    // suffix[l] = total degree of x components strictly after position l.
    std::vector<int> suffix(p + 1, 0);
    for (std::size_t l = p; l-- > 0;)
      suffix[l] = suffix[l + 1] + (l + 1 < p ? A.degree(kx.slots[l + 1]) : B.degree(kx.tail));
    for (const auto& [ky, cy] : y.terms_) {
      int exponent = 0;
      for (std::size_t l = 0; l < p; ++l) exponent += A.degree(ky.slots[l]) * suffix[l];

      std::vector<SparseVector> factors;
      factors.reserve(p + 1);
      bool vanishes = false;
      for (std::size_t l = 0; l < p && !vanishes; ++l) {
        factors.push_back(A.multiply_basis(kx.slots[l], ky.slots[l]));
        vanishes = factors.back().empty();
      }
      if (vanishes) continue;
      factors.push_back(B.multiply_basis(kx.tail, ky.tail));
      if (factors.back().empty()) continue;

      Rational base = cx * cy;
      if (exponent % 2 != 0) base = -base;
      // Expand the product of sparse factors.
      std::vector<SparseVector::const_iterator> pos;
      for (const auto& f : factors) pos.push_back(f.begin());
      while (true) {
        TensorKey key;
        key.slots.resize(p);
        Rational c = base;
        for (std::size_t l = 0; l < p; ++l) {
          key.slots[l] = static_cast<std::uint32_t>(pos[l]->first);
          c *= pos[l]->second;
        }
        key.tail = pos[p]->first;
        c *= pos[p]->second;
        out.add_term(std::move(key), c);
        std::size_t l = 0;
        for (; l <= p; ++l) {
          if (++pos[l] != factors[l].end()) break;
          pos[l] = factors[l].begin();
        }
        if (l > p) break;
      }
    }
  }
  return out;
}

TensorElement TensorElement::twisted_transposition(std::size_t k) const {
  if (k + 1 >= p_) throw ShapeMismatch("transposition outside the slot range");
  TensorElement out(slot_algebra_, p_, tail_algebra_);
  for (const auto& [key, c] : terms_) {
    TensorKey swapped = key;
    std::swap(swapped.slots[k], swapped.slots[k + 1]);
    const int d = slot_algebra_->degree(key.slots[k]) * slot_algebra_->degree(key.slots[k + 1]);
    out.add_term(std::move(swapped), d % 2 == 0 ? -c : c);
  }
  return out;
}

std::string TensorElement::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [key, c] : terms_) {
    if (!first) os << " + ";
    os << c << "*(";
    for (std::size_t l = 0; l < p_; ++l) os << (l ? " x " : "") << slot_algebra_->label(key.slots[l]);
    if (tail_algebra_->dim() > 1) os << (p_ ? " | " : "") << tail_algebra_->label(key.tail);
    os << ")";
    first = false;
  }
  return os.str();
}

// ------------------------------------------------------- SgnInvariantBasis

SgnInvariantBasis::SgnInvariantBasis(AlgebraPtr algebra, std::size_t p, bool reverse_order)
    : algebra_(std::move(algebra)), p_(p) {
  const std::size_t n = algebra_->dim();
  for (std::size_t i = 0; i < n; ++i)
    if (algebra_->degree(i) % 2 != 0) order_.push_back(static_cast<std::uint32_t>(i));
  for (std::size_t i = 0; i < n; ++i)
    if (algebra_->degree(i) % 2 == 0) order_.push_back(static_cast<std::uint32_t>(i));
  rank_.assign(n, 0);
  for (std::size_t r = 0; r < order_.size(); ++r) rank_[order_[r]] = r;

  Monomial current;
  auto generate = [&](auto&& self, std::size_t start) -> void {
    if (current.size() == p_) {
      monomials_.push_back(current);
      return;
    }
    for (std::size_t r = start; r < order_.size(); ++r) {
      const std::uint32_t idx = order_[r];
      current.push_back(idx);
      self(self, is_odd(idx) ? r : r + 1);
      current.pop_back();
    }
  };
  generate(generate, 0);
  if (reverse_order) std::reverse(monomials_.begin(), monomials_.end());

  for (std::size_t k = 0; k < monomials_.size(); ++k) {
    int d = 0;
    for (auto i : monomials_[k]) d += algebra_->degree(i);
    degrees_.push_back(d);
    index_.emplace(monomials_[k], k);
  }
}

std::string SgnInvariantBasis::label(std::size_t k) const {
  const Monomial& m = monomials_.at(k);
  if (m.empty()) return "1";
  std::string sym, ext;
  for (auto i : m) {
    std::string& part = is_odd(i) ? sym : ext;
    if (!part.empty()) part += is_odd(i) ? "*" : "^";
    part += algebra_->label(i);
  }
  if (sym.empty()) return ext;
  if (ext.empty()) return sym;
  return sym + " (x) " + ext;
}

std::optional<std::size_t> SgnInvariantBasis::find(const Monomial& m) const {
  auto it = index_.find(m);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

GradedDims SgnInvariantBasis::dims() const {
  GradedDims d;
  for (int deg : degrees_) d.add(deg, 1);
  return d;
}

std::optional<std::pair<SgnInvariantBasis::Monomial, int>> SgnInvariantBasis::canonicalize(
    const std::vector<std::uint32_t>& tuple) const {
  int sign = 1;
  for (std::size_t a = 0; a < tuple.size(); ++a)
    for (std::size_t b = a + 1; b < tuple.size(); ++b) {
      if (tuple[a] == tuple[b]) {
        if (!is_odd(tuple[a])) return std::nullopt;
        continue;
      }
      if (rank_[tuple[a]] > rank_[tuple[b]]) {
        // twisted transposition sign: -(-1)^{|x||y|}
        const int d = algebra_->degree(tuple[a]) * algebra_->degree(tuple[b]);
        if (d % 2 == 0) sign = -sign;
      }
    }
  Monomial sorted = tuple;
  std::sort(sorted.begin(), sorted.end(),
            [&](std::uint32_t x, std::uint32_t y) { return rank_[x] < rank_[y]; });
  return std::make_pair(std::move(sorted), sign);
}

std::uint64_t SgnInvariantBasis::orbit_size(std::size_t k) const {
  const Monomial& m = monomials_.at(k);
  std::uint64_t size = 1;
  std::uint64_t run = 0;
  for (std::size_t a = 0; a < m.size(); ++a) {
    run = (a > 0 && m[a] == m[a - 1]) ? run + 1 : 1;
    size = size * (a + 1) / run;  // multinomial, built incrementally
  }
  return size;
}

TensorElement SgnInvariantBasis::representative(std::size_t k, AlgebraPtr tail_algebra,
                                                std::size_t tail) const {
  TensorElement out(algebra_, p_, std::move(tail_algebra));
  std::vector<std::size_t> ranks;
  for (auto i : monomials_.at(k)) ranks.push_back(rank_[i]);
  std::sort(ranks.begin(), ranks.end());
  do {
    std::vector<std::uint32_t> tuple;
    for (auto r : ranks) tuple.push_back(order_[r]);
    const auto canon = canonicalize(tuple);
    out.add_term(TensorKey{std::move(tuple), tail}, canon->second);
  } while (std::next_permutation(ranks.begin(), ranks.end()));
  return out;
}

// --------------------------------------------------------------- projection

InvariantCoordinates project_to_invariants(const SgnInvariantBasis& basis, const TensorElement& x) {
  if (x.slot_algebra() != basis.algebra() || x.p() != basis.p())
    throw AlgebraMismatch("element does not live in the tensor power of this basis");
  InvariantCoordinates coords;
  std::map<std::pair<std::size_t, std::size_t>, std::uint64_t> seen;
  for (const auto& [key, c] : x.terms()) {
    const auto canon = basis.canonicalize(key.slots);
    if (!canon) throw NotInvariant("term repeats an even-degree class: " + x.to_string());
    const auto k = basis.find(canon->first);
    if (!k) throw NotInvariant("term outside the invariant basis");
    const std::pair<std::size_t, std::size_t> slot{*k, key.tail};
    const Rational value = canon->second > 0 ? c : Rational(-c);
    auto [it, inserted] = coords.try_emplace(slot, value);
    if (!inserted && it->second != value)
      throw NotInvariant("orbit coefficients disagree for monomial " + basis.label(*k));
    ++seen[slot];
  }
  for (const auto& [slot, count] : seen)
    if (count != basis.orbit_size(slot.first))
      throw NotInvariant("incomplete orbit for monomial " + basis.label(slot.first));
  return coords;
}

TensorElement reconstruct(const SgnInvariantBasis& basis, const InvariantCoordinates& coords,
                          const AlgebraPtr& tail_algebra) {
  TensorElement out(basis.algebra(), basis.p(), tail_algebra);
  for (const auto& [slot, c] : coords) out += basis.representative(slot.first, tail_algebra, slot.second) * c;
  return out;
}

}  // namespace ssfilter
