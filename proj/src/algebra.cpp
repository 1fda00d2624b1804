#include "ssfilter/algebra.hpp"

#include <random>
#include <sstream>

#include "ssfilter/errors.hpp"

namespace ssfilter {

void add_scaled(SparseVector& target, const SparseVector& source, const Rational& factor) {
  if (factor == 0) return;
  for (const auto& [i, c] : source) {
    auto [it, inserted] = target.try_emplace(i, factor * c);
    if (!inserted) {
      it->second += factor * c;
      if (it->second == 0) target.erase(it);
    }
  }
}

namespace {

constexpr std::size_t kExhaustiveLimit = 200;
constexpr std::size_t kSampledTriples = 4000;

std::string describe(const PresentedAlgebra& a, std::size_t i, std::size_t j) {
  std::ostringstream os;
  os << a.name() << ": (" << a.label(i) << ")*(" << a.label(j) << ")";
  return os.str();
}

}  // namespace

AlgebraPtr PresentedAlgebra::create(std::string name, std::vector<BasisElement> basis,
                                    std::vector<Generator> generators, std::size_t unit,
                                    const ProductFn& product) {
  std::shared_ptr<PresentedAlgebra> alg(new PresentedAlgebra());
  alg->name_ = std::move(name);
  alg->basis_ = std::move(basis);
  alg->generators_ = std::move(generators);
  alg->unit_ = unit;
  const std::size_t n = alg->dim();
  if (unit >= n) throw Error(alg->name_ + ": unit index out of range");
  for (const auto& g : alg->generators_)
    if (g.basis_index >= n) throw Error(alg->name_ + ": generator index out of range");
  alg->table_.resize(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      SparseVector v = product(i, j);
      std::erase_if(v, [](const auto& kv) { return kv.second == 0; });
      alg->table_[i * n + j] = std::move(v);
    }
  alg->validate();
  return alg;
}

AlgebraPtr PresentedAlgebra::ground_field() {
  static const AlgebraPtr q = create("Q", {{"1", 0, {}}}, {}, 0,
                                     [](std::size_t, std::size_t) { return SparseVector{{0, 1}}; });
  return q;
}

AlgebraPtr PresentedAlgebra::tensor(const AlgebraPtr& left, const AlgebraPtr& right) {
  if (right->dim() == 1) return left;
  if (left->dim() == 1) return right;
  std::shared_ptr<PresentedAlgebra> alg(new PresentedAlgebra());
  alg->name_ = left->name() + " (x) " + right->name();
  alg->left_ = left;
  alg->right_ = right;
  const std::size_t nr = right->dim();
  const std::size_t ngen_left = left->generators().size();
  for (std::size_t a = 0; a < left->dim(); ++a)
    for (std::size_t b = 0; b < nr; ++b) {
      BasisElement e;
      const bool a_unit = a == left->unit();
      const bool b_unit = b == right->unit();
      if (a_unit && b_unit)
        e.label = "1";
      else if (a_unit)
        e.label = right->label(b);
      else if (b_unit)
        e.label = left->label(a);
      else
        e.label = left->label(a) + "." + right->label(b);
      e.degree = left->degree(a) + right->degree(b);
      e.word = left->word(a);
      for (std::size_t g : right->word(b)) e.word.push_back(ngen_left + g);
      alg->basis_.push_back(std::move(e));
    }
  for (const auto& g : left->generators())
    alg->generators_.push_back({g.name, g.basis_index * nr + right->unit()});
  for (const auto& g : right->generators())
    alg->generators_.push_back({g.name, left->unit() * nr + g.basis_index});
  alg->unit_ = left->unit() * nr + right->unit();
  return alg;
}

std::optional<std::size_t> PresentedAlgebra::find_generator(std::string_view name) const {
  for (std::size_t g = 0; g < generators_.size(); ++g)
    if (generators_[g].name == name) return g;
  return std::nullopt;
}

std::optional<std::size_t> PresentedAlgebra::find_label(std::string_view label) const {
  for (std::size_t i = 0; i < basis_.size(); ++i)
    if (basis_[i].label == label) return i;
  return std::nullopt;
}

std::vector<std::size_t> PresentedAlgebra::basis_in_degree(int degree) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < basis_.size(); ++i)
    if (basis_[i].degree == degree) out.push_back(i);
  return out;
}

GradedDims PresentedAlgebra::betti() const {
  GradedDims d;
  for (const auto& e : basis_) d.add(e.degree, 1);
  return d;
}

int PresentedAlgebra::top_degree() const { return betti().top_degree(); }

SparseVector PresentedAlgebra::multiply_basis(std::size_t i, std::size_t j) const {
  if (!left_) return table_[i * dim() + j];
  const std::size_t nr = right_->dim();
  const std::size_t ia = i / nr, ib = i % nr, ja = j / nr, jb = j % nr;
  const SparseVector a = left_->multiply_basis(ia, ja);
  if (a.empty()) return {};
  const SparseVector b = right_->multiply_basis(ib, jb);
  if (b.empty()) return {};
  // (x (x) y)(x' (x) y') = (-1)^{|y||x'|} x x' (x) y y'
  const bool negate = (right_->degree(ib) * left_->degree(ja)) % 2 != 0;
  SparseVector out;
  for (const auto& [ka, ca] : a)
    for (const auto& [kb, cb] : b) {
      Rational c = ca * cb;
      if (negate) c = -c;
      out.emplace(ka * nr + kb, std::move(c));
    }
  return out;
}

SparseVector PresentedAlgebra::multiply(const SparseVector& x, const SparseVector& y) const {
  SparseVector out;
  for (const auto& [i, a] : x)
    for (const auto& [j, b] : y) add_scaled(out, multiply_basis(i, j), a * b);
  return out;
}

SparseVector PresentedAlgebra::evaluate_word(const std::vector<std::size_t>& word) const {
  SparseVector acc{{unit_, Rational(1)}};
  for (std::size_t g : word) acc = multiply(acc, SparseVector{{generators_.at(g).basis_index, 1}});
  return acc;
}

bool PresentedAlgebra::associative_on_all_triples() const {
  const std::size_t n = dim();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const SparseVector ij = multiply_basis(i, j);
      for (std::size_t k = 0; k < n; ++k) {
        SparseVector left = multiply(ij, SparseVector{{k, 1}});
        SparseVector right = multiply(SparseVector{{i, 1}}, multiply_basis(j, k));
        if (left != right) return false;
      }
    }
  return true;
}

void PresentedAlgebra::validate() const {
  const std::size_t n = dim();
  if (basis_[unit_].degree != 0) throw Error(name_ + ": unit must sit in degree 0");
  for (std::size_t i = 0; i < n; ++i) {
    if (basis_[i].degree < 0) throw Error(name_ + ": negative degree");
    if (multiply_basis(unit_, i) != SparseVector{{i, 1}} ||
        multiply_basis(i, unit_) != SparseVector{{i, 1}})
      throw Error(name_ + ": unit law fails on " + basis_[i].label);
    for (std::size_t j = 0; j < n; ++j) {
      const SparseVector ij = multiply_basis(i, j);
      for (const auto& [k, c] : ij)
        if (basis_[k].degree != basis_[i].degree + basis_[j].degree)
          throw Error("degree additivity fails for " + describe(*this, i, j));
      SparseVector ji = multiply_basis(j, i);
      if ((basis_[i].degree * basis_[j].degree) % 2 != 0)
        for (auto& [k, c] : ji) c = -c;
      if (ij != ji) throw Error("graded commutativity fails for " + describe(*this, i, j));
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    if (evaluate_word(basis_[i].word) != SparseVector{{i, 1}})
      throw Error(name_ + ": word of " + basis_[i].label + " does not evaluate to it");

  // Every basis element is a word in the generators, so associativity on
  // (generator, x, y) triples implies it on all triples.
  auto check = [&](std::size_t i, std::size_t j, std::size_t k) {
    const SparseVector left = multiply(multiply_basis(i, j), SparseVector{{k, 1}});
    const SparseVector right = multiply(SparseVector{{i, 1}}, multiply_basis(j, k));
    if (left != right) throw Error(name_ + ": associativity fails");
  };
  if (n <= kExhaustiveLimit) {
    for (const auto& g : generators_)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) check(g.basis_index, j, k);
  } else {
    std::mt19937_64 rng(0x5eed);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (std::size_t s = 0; s < kSampledTriples; ++s) check(pick(rng), pick(rng), pick(rng));
  }
}

// ---------------------------------------------------------------- Element

Element::Element(AlgebraPtr algebra, SparseVector coeffs)
    : algebra_(std::move(algebra)), coeffs_(std::move(coeffs)) {
  std::erase_if(coeffs_, [](const auto& kv) { return kv.second == 0; });
  for (const auto& [i, c] : coeffs_)
    if (i >= algebra_->dim()) throw AlgebraMismatch("coordinate outside the algebra's basis");
}

Element Element::zero(const AlgebraPtr& algebra) { return Element(algebra, {}); }

Element Element::unit(const AlgebraPtr& algebra) {
  return Element(algebra, {{algebra->unit(), 1}});
}

Element Element::basis(const AlgebraPtr& algebra, std::size_t i) {
  return Element(algebra, {{i, 1}});
}

Element Element::generator(const AlgebraPtr& algebra, std::string_view name) {
  auto g = algebra->find_generator(name);
  if (!g) throw AlgebraMismatch(algebra->name() + " has no generator named " + std::string(name));
  return basis(algebra, algebra->generators()[*g].basis_index);
}

Rational Element::coefficient(std::size_t i) const {
  auto it = coeffs_.find(i);
  return it == coeffs_.end() ? Rational(0) : it->second;
}

std::optional<int> Element::degree() const {
  std::optional<int> d;
  for (const auto& [i, c] : coeffs_) {
    if (d && *d != algebra_->degree(i)) return std::nullopt;
    d = algebra_->degree(i);
  }
  return d;
}

std::string Element::to_string() const {
  if (coeffs_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [i, c] : coeffs_) {
    if (c < 0)
      os << (first ? "-" : " - ");
    else if (!first)
      os << " + ";
    const Rational mag = abs(c);
    if (mag != 1) os << mag << "*";
    os << algebra_->label(i);
    first = false;
  }
  return os.str();
}

Element Element::operator+(const Element& other) const {
  if (algebra_ != other.algebra_) throw AlgebraMismatch("adding elements of different algebras");
  SparseVector v = coeffs_;
  add_scaled(v, other.coeffs_, 1);
  return Element(algebra_, std::move(v));
}

Element Element::operator-(const Element& other) const { return *this + other * Rational(-1); }

Element Element::operator*(const Rational& scalar) const {
  SparseVector v;
  add_scaled(v, coeffs_, scalar);
  return Element(algebra_, std::move(v));
}

bool Element::operator==(const Element& other) const {
  return algebra_ == other.algebra_ && coeffs_ == other.coeffs_;
}

Element multiply(const Element& x, const Element& y) {
  if (x.algebra() != y.algebra())
    throw AlgebraMismatch("multiplying elements of " + x.algebra()->name() + " and " +
                          y.algebra()->name());
  return Element(x.algebra(), x.algebra()->multiply(x.coeffs(), y.coeffs()));
}

Element power(const Element& x, unsigned exponent) {
  Element acc = Element::unit(x.algebra());
  for (unsigned k = 0; k < exponent; ++k) acc = multiply(acc, x);
  return acc;
}

// ------------------------------------------------------------- AlgebraHom

AlgebraHom::AlgebraHom(AlgebraPtr source, AlgebraPtr target,
                       std::vector<SparseVector> generator_images)
    : source_(std::move(source)),
      target_(std::move(target)),
      generator_images_(std::move(generator_images)) {
  if (generator_images_.size() != source_->generators().size())
    throw AlgebraMismatch("one image per source generator required");
  basis_images_.reserve(source_->dim());
  for (std::size_t i = 0; i < source_->dim(); ++i) {
    SparseVector acc{{target_->unit(), Rational(1)}};
    for (std::size_t g : source_->word(i)) acc = target_->multiply(acc, generator_images_[g]);
    basis_images_.push_back(std::move(acc));
  }
  if (!degree_preserving())
    throw AlgebraMismatch("homomorphism " + source_->name() + " -> " + target_->name() +
                          " does not preserve degree");
}

SparseVector AlgebraHom::apply(const SparseVector& x) const {
  SparseVector out;
  for (const auto& [i, c] : x) add_scaled(out, basis_images_.at(i), c);
  return out;
}

Element AlgebraHom::apply(const Element& x) const {
  if (x.algebra() != source_) throw AlgebraMismatch("element is not in the source algebra");
  return Element(target_, apply(x.coeffs()));
}

RationalMatrix AlgebraHom::matrix(int degree) const {
  const auto cols = source_->basis_in_degree(degree);
  const auto rows = target_->basis_in_degree(degree);
  std::map<std::size_t, std::size_t> row_of;
  for (std::size_t r = 0; r < rows.size(); ++r) row_of[rows[r]] = r;
  std::vector<RationalMatrix::Triplet> triplets;
  for (std::size_t c = 0; c < cols.size(); ++c)
    for (const auto& [k, v] : basis_images_[cols[c]]) triplets.emplace_back(row_of.at(k), c, v);
  return RationalMatrix(rows.size(), cols.size(), std::move(triplets));
}

bool AlgebraHom::degree_preserving() const {
  for (std::size_t i = 0; i < source_->dim(); ++i)
    for (const auto& [k, c] : basis_images_[i])
      if (target_->degree(k) != source_->degree(i)) return false;
  return true;
}

bool AlgebraHom::multiplicative_on_generators() const {
  const auto& gens = source_->generators();
  for (std::size_t g = 0; g < gens.size(); ++g)
    for (std::size_t h = 0; h < gens.size(); ++h) {
      const SparseVector lhs =
          apply(source_->multiply_basis(gens[g].basis_index, gens[h].basis_index));
      const SparseVector rhs = target_->multiply(generator_images_[g], generator_images_[h]);
      if (lhs != rhs) return false;
    }
  return true;
}

bool AlgebraHom::multiplicative_on_basis() const {
  for (std::size_t i = 0; i < source_->dim(); ++i)
    for (std::size_t j = 0; j < source_->dim(); ++j) {
      const SparseVector lhs = apply(source_->multiply_basis(i, j));
      const SparseVector rhs = target_->multiply(basis_images_[i], basis_images_[j]);
      if (lhs != rhs) return false;
    }
  return true;
}

}  // namespace ssfilter
