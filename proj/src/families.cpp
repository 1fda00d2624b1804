#include "ssfilter/families.hpp"

#include <mutex>

#include "ssfilter/errors.hpp"
#include "ssfilter/rings.hpp"

namespace ssfilter {

std::string to_string(Convergence c) {
  return c == Convergence::CompactSupportDirect ? "compact-support-direct" : "relative-then-duality";
}

std::string to_string(CohomologyKind k) {
  return k == CohomologyKind::CompactSupport ? "compact-support" : "ordinary";
}

TensorIndexer::TensorIndexer(AlgebraPtr left, AlgebraPtr right)
    : left_(std::move(left)), right_(std::move(right)) {
  product_ = PresentedAlgebra::tensor(left_, right_);
}

std::size_t TensorIndexer::index(std::size_t a, std::size_t b) const {
  if (right_->dim() == 1) return a;
  if (left_->dim() == 1) return b;
  return a * right_->dim() + b;
}

std::pair<std::size_t, std::size_t> TensorIndexer::decode(std::size_t idx) const {
  if (right_->dim() == 1) return {idx, right_->unit()};
  if (left_->dim() == 1) return {left_->unit(), idx};
  return {idx / right_->dim(), idx % right_->dim()};
}

namespace {

// Per-descriptor memo so that every caller sees the same level algebra object.
class LevelCache {
 public:
  explicit LevelCache(std::function<AlgebraPtr(int)> make) : make_(std::move(make)) {}
  AlgebraPtr get(int k) {
    std::lock_guard lock(mutex_);
    auto it = cache_.find(k);
    if (it == cache_.end()) it = cache_.emplace(k, make_(k)).first;
    return it->second;
  }

 private:
  std::function<AlgebraPtr(int)> make_;
  std::mutex mutex_;
  std::map<int, AlgebraPtr> cache_;
};

void add_into(SparseVector& target, std::size_t idx, const Rational& v) {
  auto [it, inserted] = target.emplace(idx, v);
  if (!inserted) {
    it->second += v;
    if (it->second == 0) target.erase(it);
  }
}

// Image of c_j under the pullback of the tautological subbundle twisted by
// O(-1) on the slot factor: c_j -> c_j - (rank - j + 1) e c_{j-1}.
SparseVector chern_coaction_image(const TensorIndexer& ix, std::size_t slot_unit, std::size_t e_index,
                                  int rank, int N,
                                  int j, const std::function<std::size_t(std::size_t)>& embed) {
  SparseVector out;
  const Element cj = grassmann_chern_class(rank, N, j);
  const Element cj1 = grassmann_chern_class(rank, N, j - 1);
  for (const auto& [b, v] : cj.coeffs())
    add_into(out, ix.index(slot_unit, embed(b)), v);
  for (const auto& [b, v] : cj1.coeffs())
    add_into(out, ix.index(e_index, embed(b)), -Rational(rank - j + 1) * v);
  return out;
}

std::vector<std::string> chern_template(int rank) {
  std::vector<std::string> t;
  for (int j = 1; j <= rank; ++j) {
    const int coeff = rank - j + 1;
    std::string s = "c" + std::to_string(j) + " -> c" + std::to_string(j) + " - ";
    if (coeff != 1) s += std::to_string(coeff) + " ";
    s += "e<i>";
    if (j > 1) s += " c" + std::to_string(j - 1);
    t.push_back(s);
  }
  return t;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidShape(what);
}

}  // namespace

FamilyDescriptor family_uconf_plane(int n) {
  require(n >= 0, "uconf-plane requires n >= 0");
  FamilyDescriptor f;
  f.name = "uconf-plane";
  f.params = {{"n", n}};
  f.n = n;
  f.filter_gap = 2;
  f.slot_dims = compact_support_affine(1);
  f.level_dims = [](int k) { return k < 0 ? GradedDims{} : compact_support_affine(k); };
  f.pullback_template = {"(a<i>, P) -> (x - a<i>)^2 P", "X_k = monic polynomials of degree k, H_c = Q[-2k]"};
  f.p_max = n / 2;
  f.beyond_range_empty = true;
  f.e1_kind = CohomologyKind::CompactSupport;
  f.convergence = Convergence::CompactSupportDirect;
  f.duality_dim = n;
  return f;
}

FamilyDescriptor family_tuples(int r, int n) {
  require(r >= 1, "tuples requires r >= 1");
  require(n >= 0, "tuples requires n >= 0");
  FamilyDescriptor f;
  f.name = "tuples";
  f.params = {{"n", n}, {"r", r}};
  f.n = n;
  f.filter_gap = 1;
  f.slot_dims = compact_support_affine(1);
  f.level_dims = [r](int k) { return k < 0 ? GradedDims{} : compact_support_affine(r * k); };
  f.pullback_template = {"(a<i>, P_1..P_r) -> ((x - a<i>) P_1, ..., (x - a<i>) P_r)",
                         "X_k = r-tuples of monic polynomials of degree k, H_c = Q[-2rk]"};
  f.p_max = n;
  f.beyond_range_empty = true;
  f.e1_kind = CohomologyKind::CompactSupport;
  f.convergence = Convergence::CompactSupportDirect;
  f.duality_dim = r * n;
  if (r == 1) {
    // (a, P) -> (x - a) P is finite of degree n onto the top level; on
    // top-degree compactly supported classes it multiplies by n.
    f.scalar_differential = [n](int p) -> std::optional<Rational> {
      if (p == 0 && n >= 1) return Rational(n);
      return std::nullopt;
    };
    f.pullback_template.push_back("d_1 = n on H_c^{2n} (finite map of degree n)");
  }
  return f;
}

FamilyDescriptor family_pencils_p1(int m, int n) {
  require(m >= 1, "pencils-p1 requires m >= 1");
  require(n >= 2 && n > m, "pencils-p1 requires n >= 2 and n > m");
  const int rank = m + 1;
  FamilyDescriptor f;
  f.name = "pencils-p1";
  f.params = {{"m", m}, {"n", n}};
  f.n = n;
  f.filter_gap = 1;
  f.slot_algebra = curve_algebra(0);
  f.slot_dims = f.slot_algebra->betti();
  auto cache = std::make_shared<LevelCache>([rank](int k) { return grassmann_algebra(rank, k + 1); });
  f.level_algebra = [cache](int k) { return cache->get(k); };
  f.level_dims = [cache, rank](int k) {
    return k + 1 < rank ? GradedDims{} : cache->get(k)->betti();
  };
  const AlgebraPtr slot = f.slot_algebra;
  f.coaction = [cache, slot, rank](int k) {
    const AlgebraPtr source = cache->get(k);
    const TensorIndexer ix(slot, cache->get(k - 1));
    const std::size_t e_index = *slot->find_label("e");
    std::vector<SparseVector> images;
    for (const auto& gen : source->generators()) {
      const int j = std::stoi(gen.name.substr(1));
      images.push_back(chern_coaction_image(ix, slot->unit(), e_index, rank, k, j, [](std::size_t b) { return b; }));
    }
    return AlgebraHom(source, ix.product(), std::move(images));
  };
  f.pullback_template = chern_template(rank);
  f.p_max = n - m;
  f.beyond_range_empty = true;
  f.e1_kind = CohomologyKind::Ordinary;
  f.convergence = Convergence::RelativeThenDuality;
  f.duality_dim = rank * (n - m);
  f.degeneration_assumed = true;
  f.degeneration_justification = "smooth projective levels; E2 degeneration by weights";
  return f;
}

FamilyDescriptor family_pencils_curve(int g, int n, const std::vector<std::size_t>& relabel) {
  require(g >= 0, "pencils-curve requires g >= 0");
  if (n < 2 * g)
    throw StableRangeError("pencils-curve is valid only in the stable range n >= 2g (got g = " +
                           std::to_string(g) + ", n = " + std::to_string(n) + ")");
  require(n >= g + 1 && n >= 2, "pencils-curve requires n >= max(2, g + 1)");
  FamilyDescriptor f;
  f.name = "pencils-curve";
  f.params = {{"g", g}, {"n", n}};
  f.n = n;
  f.filter_gap = 1;
  f.slot_algebra = curve_algebra(g, relabel);
  f.slot_dims = f.slot_algebra->betti();
  const AlgebraPtr pic = picard_algebra(g, relabel);
  auto cache = std::make_shared<LevelCache>([pic, g](int k) {
    return PresentedAlgebra::tensor(pic, grassmann_algebra(2, k - g + 1));
  });
  f.level_algebra = [cache](int k) { return cache->get(k); };
  f.level_dims = [cache, g](int k) {
    return k - g + 1 < 2 ? GradedDims{} : cache->get(k)->betti();
  };
  const AlgebraPtr slot = f.slot_algebra;
  f.coaction = [cache, slot, pic, g](int k) {
    const AlgebraPtr source = cache->get(k);
    const AlgebraPtr target_tail = cache->get(k - 1);
    const AlgebraPtr grass = grassmann_algebra(2, k - g);
    const TensorIndexer tail_ix(pic, grass);
    const TensorIndexer ix(slot, target_tail);
    const std::size_t e_index = *slot->find_label("e");
    std::vector<SparseVector> images;
    for (const auto& gen : source->generators()) {
      if (gen.name[0] == 'c') {
        const int j = std::stoi(gen.name.substr(1));
        images.push_back(chern_coaction_image(ix, slot->unit(), e_index, 2, k - g, j, [&](std::size_t b) {
          return tail_ix.index(pic->unit(), b);
        }));
      } else {
        // a_r -> a_r + alpha_r in the new slot, matched by original index.
        const std::string r = gen.name.substr(1);
        SparseVector img;
        const std::size_t a = pic->generators().at(*pic->find_generator(gen.name)).basis_index;
        add_into(img, ix.index(slot->unit(), tail_ix.index(a, grass->unit())), 1);
        const std::size_t alpha = *slot->find_label("α" + r);
        add_into(img, ix.index(alpha, target_tail->unit()), 1);
        images.push_back(std::move(img));
      }
    }
    return AlgebraHom(source, ix.product(), std::move(images));
  };
  f.pullback_template = chern_template(2);
  if (g > 0) f.pullback_template.push_back("a_r -> a_r + α_r<i>   (r = 1.." + std::to_string(2 * g) + ")");
  if (g == 0) {
    f.p_max = n - 1;
    f.beyond_range_empty = true;
  } else {
    f.p_max = std::min(n - 2 * g, n - g - 1);
    f.valid_up_to_degree = n - 2 * g;
    f.range_note = "valid for p <= n - 2g; Betti numbers certified up to degree n - 2g";
  }
  f.e1_kind = CohomologyKind::Ordinary;
  f.convergence = Convergence::RelativeThenDuality;
  f.duality_dim = g + 2 * (n - g - 1);
  f.degeneration_assumed = true;
  f.degeneration_justification = "smooth projective levels; E2 degeneration by weights";
  return f;
}

FamilyDescriptor family_uconf_general(const GradedDims& dims, int n, CohomologyKind convention) {
  require(n >= 0, "uconf-general requires n >= 0");
  FamilyDescriptor f;
  f.name = "uconf-general";
  f.params = {{"n", n}};
  f.n = n;
  f.filter_gap = 2;
  f.slot_dims = dims;
  f.level_dims = [dims](int k) { return k < 0 ? GradedDims{} : macdonald_sym(dims, k); };
  f.pullback_template = {"(x<i>, S) -> 2 x<i> + S", "X_k = Sym^k X via Macdonald's formula"};
  f.p_max = n / 2;
  f.beyond_range_empty = true;
  f.e1_kind = convention;
  f.convergence = Convergence::CompactSupportDirect;
  return f;
}

int face_sign(int i, std::optional<int> fault_face) {
  int s = (i - 1) % 2 == 0 ? 1 : -1;
  if (fault_face && *fault_face == i) s = -s;
  return s;
}

FacePullback::FacePullback(const FamilyDescriptor& fam, int p, int i)
    : slot_(fam.slot_algebra), p_(p), i_(i) {
  if (!fam.presented())
    throw DifferentialsUnavailable("family " + fam.name + " has no presented algebras");
  source_tail_ = fam.level_algebra(fam.level(p));
  target_tail_ = fam.level_algebra(fam.level(p + 1));
  const AlgebraHom hom = fam.coaction(fam.level(p));
  const TensorIndexer ix(slot_, target_tail_);
  if (hom.target()->dim() != ix.product()->dim())
    throw ShapeMismatch("coaction target does not match slot (x) next level");
  auto images = std::make_shared<std::vector<std::vector<CoTerm>>>(source_tail_->dim());
  for (std::size_t b = 0; b < source_tail_->dim(); ++b)
    for (const auto& [idx, v] : hom.image_of_basis(b)) {
      const auto [c, t] = ix.decode(idx);
      (*images)[b].push_back({c, t, v});
    }
  images_ = std::move(images);
}

FacePullback::FacePullback(const FacePullback& other, int i) : FacePullback(other) { i_ = i; }

std::vector<std::pair<TensorKey, Rational>> FacePullback::apply_key(const TensorKey& key) const {
  std::vector<std::pair<TensorKey, Rational>> out;
  const std::size_t pos = static_cast<std::size_t>(i_ - 1);
  int suffix = 0;
  for (std::size_t j = pos; j < key.slots.size(); ++j) suffix += slot_->degree(key.slots[j]);
  for (const CoTerm& t : images_->at(key.tail)) {
    TensorKey k;
    k.slots.reserve(key.slots.size() + 1);
    k.slots.insert(k.slots.end(), key.slots.begin(), key.slots.begin() + pos);
    k.slots.push_back(static_cast<std::uint32_t>(t.slot));
    k.slots.insert(k.slots.end(), key.slots.begin() + pos, key.slots.end());
    k.tail = t.tail;
    const bool negative = (slot_->degree(t.slot) * suffix) % 2 != 0;
    out.emplace_back(std::move(k), negative ? Rational(-t.coeff) : t.coeff);
  }
  return out;
}

TensorElement FacePullback::apply(const TensorElement& x) const {
  if (x.p() != static_cast<std::size_t>(p_) || x.slot_algebra() != slot_ ||
      x.tail_algebra()->dim() != source_tail_->dim())
    throw AlgebraMismatch("face pullback applied to an element of the wrong column");
  TensorElement out(slot_, p_ + 1, target_tail_);
  for (const auto& [key, v] : x.terms())
    for (auto& [k, c] : apply_key(key)) out.add_term(std::move(k), c * v);
  return out;
}

bool FacePullback::degree_preserving() const {
  for (std::size_t b = 0; b < images_->size(); ++b)
    for (const CoTerm& t : images_->at(b))
      if (slot_->degree(t.slot) + target_tail_->degree(t.tail) != source_tail_->degree(b)) return false;
  return true;
}

bool FacePullback::multiplicative_on_generators() const {
  std::vector<TensorElement> gens;
  const std::vector<std::uint32_t> units(p_, static_cast<std::uint32_t>(slot_->unit()));
  for (int j = 0; j < p_; ++j)
    for (const auto& g : slot_->generators()) {
      TensorElement x(slot_, p_, source_tail_);
      TensorKey k{units, source_tail_->unit()};
      k.slots[j] = static_cast<std::uint32_t>(g.basis_index);
      x.add_term(k, 1);
      gens.push_back(std::move(x));
    }
  for (const auto& g : source_tail_->generators()) {
    TensorElement x(slot_, p_, source_tail_);
    x.add_term({units, g.basis_index}, 1);
    gens.push_back(std::move(x));
  }
  TensorElement one(slot_, p_, source_tail_);
  one.add_term({units, source_tail_->unit()}, 1);
  TensorElement one_image(slot_, p_ + 1, target_tail_);
  one_image.add_term({std::vector<std::uint32_t>(p_ + 1, static_cast<std::uint32_t>(slot_->unit())),
                      target_tail_->unit()},
                     1);
  if (!(apply(one) == one_image)) return false;
  for (const auto& x : gens)
    for (const auto& y : gens)
      if (!(apply(x * y) == apply(x) * apply(y))) return false;
  return true;
}

FacePullback face_pullback(const FamilyDescriptor& fam, int p, int i) {
  if (p < 0 || p + 1 > fam.p_max)
    throw ColumnRangeError("face pullback from column " + std::to_string(p) + " needs columns up to " +
                           std::to_string(p + 1) + "; family " + fam.name + " is valid for p <= " +
                           std::to_string(fam.p_max) +
                           (fam.range_note.empty() ? "" : " (" + fam.range_note + ")"));
  if (i < 1 || i > p + 1)
    throw ColumnRangeError("face index " + std::to_string(i) + " outside 1.." + std::to_string(p + 1));
  return FacePullback(fam, p, i);
}

}  // namespace ssfilter
