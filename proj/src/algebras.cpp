#include "dcoh/algebras.hpp"

#include <sstream>
#include <variant>

#include "dcoh/expr_parser.hpp"

namespace dcoh {

namespace {

[[noreturn]] void algebra_mismatch() { throw MismatchError("elements belong to different algebras"); }

Vec unit_vector(std::size_t n, std::size_t i, const Elem& zero) {
  Vec v(n, zero);
  v[i] = zero.one_like();
  return v;
}

Vec kron(const Vec& a, const Vec& b) {
  Vec r;
  r.reserve(a.size() * b.size());
  for (const auto& x : a)
    for (const auto& y : b) r.push_back(x.is_zero() || y.is_zero() ? x.zero_like() : x * y);
  return r;
}

bool all_zero(const Vec& v) {
  for (const auto& x : v)
    if (!x.is_zero()) return false;
  return true;
}

void add_scaled(Vec& acc, const Elem& c, const Vec& v) {
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!v[i].is_zero()) acc[i] += c * v[i];
}

void poly_add_term(SparsePoly& p, const Monomial& m, const Elem& c) {
  if (c.is_zero()) return;
  auto it = p.find(m);
  if (it == p.end()) {
    p.emplace(m, c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) p.erase(it);
}

SparsePoly poly_mul(const SparsePoly& a, const SparsePoly& b) {
  SparsePoly r;
  for (const auto& [ma, ca] : a)
    for (const auto& [mb, cb] : b) {
      Monomial m(ma.size());
      for (std::size_t i = 0; i < m.size(); ++i) m[i] = ma[i] + mb[i];
      poly_add_term(r, m, ca * cb);
    }
  return r;
}

}  // namespace

// ---------------------------------------------------------------- construction

AlgebraPtr SigmaAlgebra::findim(const Field& k, FinDimTables t, std::string name) {
  const std::size_t m = t.dim;
  if (m == 0) throw InvalidInput("the zero algebra is not allowed");
  if (t.mult.size() != m || t.unit.size() != m || t.sigma.size() != m) throw InvalidInput("table sizes do not match the dimension");
  for (const auto& row : t.mult) {
    if (row.size() != m) throw InvalidInput("table sizes do not match the dimension");
    for (const auto& v : row)
      if (v.size() != m) throw InvalidInput("table sizes do not match the dimension");
  }
  for (const auto& v : t.sigma)
    if (v.size() != m) throw InvalidInput("table sizes do not match the dimension");
  for (std::size_t i = 0; i < m; ++i)
    for (const auto& row : t.mult[i])
      for (const auto& x : row)
        if (!k.owns(x)) throw MismatchError("structure constant outside the field");
  if (t.labels.empty())
    for (std::size_t i = 0; i < m; ++i) t.labels.push_back("e" + std::to_string(i + 1));

  auto a = std::shared_ptr<SigmaAlgebra>(new SigmaAlgebra());
  a->field_ = k;
  a->kind_ = Kind::FinDim;
  a->dim_ = m;
  a->labels_ = t.labels;
  a->name_ = std::move(name);
  a->tables_ = std::move(t);
  const SigmaAlgebra& A = *a;
  const Elem zero = k.zero();

  if (all_zero(A.tables_.unit)) throw InvalidInput("unit is zero");
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      if (A.tables_.mult[i][j] != A.tables_.mult[j][i]) throw InvalidInput("multiplication is not commutative");
  for (std::size_t i = 0; i < m; ++i) {
    Vec ei = unit_vector(m, i, zero);
    if (A.mul_coords(A.tables_.unit, ei) != ei) throw InvalidInput("unit coordinates do not act as identity");
  }
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t l = 0; l < m; ++l) {
        Vec lhs = A.mul_coords(A.tables_.mult[i][j], unit_vector(m, l, zero));
        Vec rhs = A.mul_coords(unit_vector(m, i, zero), A.tables_.mult[j][l]);
        if (lhs != rhs) throw InvalidInput("multiplication is not associative");
      }
  auto sigma_of = [&](const Vec& x) {
    Vec r(m, zero);
    for (std::size_t j = 0; j < m; ++j)
      if (!x[j].is_zero()) add_scaled(r, k.sigma(x[j]), A.tables_.sigma[j]);
    return r;
  };
  if (sigma_of(A.tables_.unit) != A.tables_.unit) throw InvalidInput("sigma does not preserve the unit");
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i; j < m; ++j)
      if (sigma_of(A.tables_.mult[i][j]) != A.mul_coords(A.tables_.sigma[i], A.tables_.sigma[j]))
        throw InvalidInput("sigma is not multiplicative");
  return a;
}

AlgebraPtr SigmaAlgebra::laurent(const Field& k, std::vector<LaurentImage> images, std::vector<std::string> names) {
  const std::size_t r = images.size();
  if (r == 0) throw InvalidInput("a Laurent algebra needs at least one generator");
  for (const auto& im : images) {
    if (im.v.size() != r) throw InvalidInput("Laurent image has the wrong number of exponents");
    if (!k.owns(im.c) || im.c.is_zero()) throw InvalidInput("Laurent image constant must be a nonzero field element");
  }
  if (names.empty())
    for (std::size_t i = 0; i < r; ++i) names.push_back("u" + std::to_string(i + 1));
  auto a = std::shared_ptr<SigmaAlgebra>(new SigmaAlgebra());
  a->field_ = k;
  a->kind_ = Kind::Laurent;
  a->dim_ = r;
  a->labels_ = std::move(names);
  a->laurent_ = std::move(images);
  a->name_ = "laurent";
  return a;
}

AlgebraPtr SigmaAlgebra::freepoly(const Field& k, std::vector<AffineImage> images, std::vector<std::string> names) {
  const std::size_t r = images.size();
  if (r == 0) throw InvalidInput("a polynomial algebra needs at least one generator");
  for (const auto& im : images) {
    if (im.m.size() != r) throw InvalidInput("affine image has the wrong number of coefficients");
    if (!k.owns(im.c)) throw MismatchError("affine image constant outside the field");
  }
  if (names.empty())
    for (std::size_t i = 0; i < r; ++i) names.push_back("y" + std::to_string(i + 1));
  auto a = std::shared_ptr<SigmaAlgebra>(new SigmaAlgebra());
  a->field_ = k;
  a->kind_ = Kind::FreePoly;
  a->dim_ = r;
  a->labels_ = std::move(names);
  a->affine_ = std::move(images);
  a->name_ = "freepoly";
  return a;
}

AlgebraPtr SigmaAlgebra::tensor(const AlgebraPtr& L, const AlgebraPtr& R) {
  if (L->field() != R->field()) throw MismatchError("tensor factors over different fields");
  if (L->kind() != R->kind()) throw Unsupported("tensor products of different algebra kinds are not supported");
  auto a = std::shared_ptr<SigmaAlgebra>(new SigmaAlgebra());
  a->field_ = L->field();
  a->kind_ = L->kind();
  a->left_ = L;
  a->right_ = R;
  a->name_ = "(" + L->name() + ")#(" + R->name() + ")";
  const Elem zero = L->field().zero();
  if (L->is_findim()) {
    a->dim_ = L->dim() * R->dim();
    for (const auto& x : L->labels())
      for (const auto& y : R->labels()) a->labels_.push_back(x + "#" + y);
    a->tables_.dim = a->dim_;
    a->tables_.labels = a->labels_;
    a->tables_.unit = kron(L->unit_coords(), R->unit_coords());
    for (std::size_t i = 0; i < L->dim(); ++i)
      for (std::size_t j = 0; j < R->dim(); ++j) a->tables_.sigma.push_back(kron(L->sigma_coords(i), R->sigma_coords(j)));
  } else {
    a->dim_ = L->generators() + R->generators();
    a->labels_ = L->labels();
    a->labels_.insert(a->labels_.end(), R->labels().begin(), R->labels().end());
    const std::size_t nl = L->generators(), n = a->dim_;
    if (L->kind() == Kind::Laurent) {
      for (const auto& im : L->laurent_) {
        Monomial v(n, 0);
        std::copy(im.v.begin(), im.v.end(), v.begin());
        a->laurent_.push_back({im.c, v});
      }
      for (const auto& im : R->laurent_) {
        Monomial v(n, 0);
        std::copy(im.v.begin(), im.v.end(), v.begin() + static_cast<long>(nl));
        a->laurent_.push_back({im.c, v});
      }
    } else {
      for (const auto& im : L->affine_) {
        Vec m(n, zero);
        std::copy(im.m.begin(), im.m.end(), m.begin());
        a->affine_.push_back({im.c, m});
      }
      for (const auto& im : R->affine_) {
        Vec m(n, zero);
        std::copy(im.m.begin(), im.m.end(), m.begin() + static_cast<long>(nl));
        a->affine_.push_back({im.c, m});
      }
    }
  }
  return a;
}

// ---------------------------------------------------------------- tables

const Vec& SigmaAlgebra::sigma_coords(std::size_t j) const {
  if (!is_findim()) throw Unsupported("sigma coordinates exist only for finite-dimensional algebras");
  return tables_.sigma.at(j);
}

const Vec& SigmaAlgebra::unit_coords() const {
  if (!is_findim()) throw Unsupported("unit coordinates exist only for finite-dimensional algebras");
  return tables_.unit;
}

Vec SigmaAlgebra::mul_coords(const Vec& x, const Vec& y) const {
  const Elem zero = field_.zero();
  Vec r(dim_, zero);
  if (explicit_mult()) {
    for (std::size_t i = 0; i < dim_; ++i) {
      if (x[i].is_zero()) continue;
      for (std::size_t j = 0; j < dim_; ++j) {
        if (y[j].is_zero()) continue;
        add_scaled(r, x[i] * y[j], tables_.mult[i][j]);
      }
    }
    return r;
  }
  // factorwise: x = sum_i e_i ⊗ X_i
  const SigmaAlgebra& L = *left_;
  const SigmaAlgebra& R = *right_;
  const std::size_t dl = L.dim(), dr = R.dim();
  std::vector<Vec> X(dl), Y(dl);
  std::vector<bool> xz(dl), yz(dl);
  for (std::size_t i = 0; i < dl; ++i) {
    X[i] = Vec(x.begin() + static_cast<long>(i * dr), x.begin() + static_cast<long>((i + 1) * dr));
    Y[i] = Vec(y.begin() + static_cast<long>(i * dr), y.begin() + static_cast<long>((i + 1) * dr));
    xz[i] = all_zero(X[i]);
    yz[i] = all_zero(Y[i]);
  }
  for (std::size_t i = 0; i < dl; ++i) {
    if (xz[i]) continue;
    for (std::size_t j = 0; j < dl; ++j) {
      if (yz[j]) continue;
      Vec P = L.basis_product(i, j);
      Vec Q = R.mul_coords(X[i], Y[j]);
      for (std::size_t a = 0; a < dl; ++a) {
        if (P[a].is_zero()) continue;
        for (std::size_t b = 0; b < dr; ++b)
          if (!Q[b].is_zero()) r[a * dr + b] += P[a] * Q[b];
      }
    }
  }
  return r;
}

Vec SigmaAlgebra::basis_product(std::size_t i, std::size_t j) const {
  if (explicit_mult()) return tables_.mult[i][j];
  const std::size_t dr = right_->dim();
  return kron(left_->basis_product(i / dr, j / dr), right_->basis_product(i % dr, j % dr));
}

Matrix SigmaAlgebra::sigma_matrix() const {
  if (!is_findim()) throw Unsupported("sigma matrix exists only for finite-dimensional algebras");
  return Matrix::from_columns(tables_.sigma, field_.zero());
}

FinDimTables tables_of(const AlgebraPtr& A) {
  if (!A->is_findim()) throw Unsupported("tables exist only for finite-dimensional algebras");
  FinDimTables t;
  t.dim = A->dim();
  t.labels = A->labels();
  t.unit = A->unit_coords();
  const Elem zero = A->field().zero();
  t.mult.assign(t.dim, std::vector<Vec>(t.dim));
  for (std::size_t i = 0; i < t.dim; ++i)
    for (std::size_t j = 0; j < t.dim; ++j) t.mult[i][j] = A->mul_coords(unit_vector(t.dim, i, zero), unit_vector(t.dim, j, zero));
  for (std::size_t j = 0; j < t.dim; ++j) t.sigma.push_back(A->sigma_coords(j));
  return t;
}

// ---------------------------------------------------------------- element factories

AlgElement SigmaAlgebra::zero() const {
  AlgElement e;
  e.alg_ = shared_from_this();
  if (is_findim()) e.coords_.assign(dim_, field_.zero());
  return e;
}

AlgElement SigmaAlgebra::one() const { return scalar(field_.one()); }

AlgElement SigmaAlgebra::scalar(const Elem& c) const {
  if (!field_.owns(c)) throw MismatchError("scalar outside the base field");
  AlgElement e = zero();
  if (is_findim()) {
    for (std::size_t i = 0; i < dim_; ++i)
      if (!tables_.unit[i].is_zero()) e.coords_[i] = c * tables_.unit[i];
  } else if (!c.is_zero()) {
    e.poly_.emplace(Monomial(dim_, 0), c);
  }
  return e;
}

AlgElement SigmaAlgebra::basis(std::size_t i) const {
  if (i >= dim_) throw InvalidInput("basis index out of range");
  AlgElement e = zero();
  if (is_findim()) {
    e.coords_[i] = field_.one();
  } else {
    Monomial m(dim_, 0);
    m[i] = 1;
    e.poly_.emplace(m, field_.one());
  }
  return e;
}

AlgElement SigmaAlgebra::generator(std::size_t i) const { return basis(i); }

AlgElement SigmaAlgebra::from_coords(Vec coords) const {
  if (!is_findim()) throw Unsupported("coordinates exist only for finite-dimensional algebras");
  if (coords.size() != dim_) throw InvalidInput("coordinate vector has the wrong length");
  for (const auto& c : coords)
    if (!field_.owns(c)) throw MismatchError("coordinate outside the base field");
  AlgElement e;
  e.alg_ = shared_from_this();
  e.coords_ = std::move(coords);
  return e;
}

AlgElement SigmaAlgebra::from_poly(SparsePoly p) const {
  if (is_findim()) throw Unsupported("polynomial representation does not apply to finite-dimensional algebras");
  AlgElement e;
  e.alg_ = shared_from_this();
  for (auto& [m, c] : p) {
    if (m.size() != dim_) throw InvalidInput("monomial has the wrong number of exponents");
    if (kind_ == Kind::FreePoly)
      for (long x : m)
        if (x < 0) throw InvalidInput("negative exponent in a polynomial algebra");
    poly_add_term(e.poly_, m, c);
  }
  return e;
}

std::uint64_t SigmaAlgebra::element_count() const {
  if (!is_findim() || !field_.is_finite()) throw Unsupported("enumeration needs a finite-dimensional algebra over a finite field");
  std::uint64_t n = 1;
  for (std::size_t i = 0; i < dim_; ++i) {
    if (n > (std::uint64_t(1) << 62) / field_.size()) throw BudgetExhausted("algebra too large to enumerate");
    n *= field_.size();
  }
  return n;
}

AlgElement SigmaAlgebra::element_at(std::uint64_t index) const {
  const std::uint64_t q = field_.size();
  Vec c;
  c.reserve(dim_);
  for (std::size_t i = 0; i < dim_; ++i) {
    c.push_back(field_.element_at(index % q));
    index /= q;
  }
  return from_coords(std::move(c));
}

std::string SigmaAlgebra::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::FinDim:
      os << "findim(" << dim_ << ")";
      break;
    case Kind::Laurent:
      os << "laurent(" << dim_ << ")";
      break;
    case Kind::FreePoly:
      os << "freepoly(" << dim_ << ")";
      break;
  }
  if (!name_.empty()) os << " " << name_;
  os << " over " << field_.descriptor();
  return os.str();
}

// ---------------------------------------------------------------- element arithmetic

bool AlgElement::is_zero() const {
  if (alg_->is_findim()) return all_zero(coords_);
  return poly_.empty();
}

bool AlgElement::is_one() const { return *this == alg_->one(); }

std::optional<Elem> AlgElement::as_scalar() const {
  const SigmaAlgebra& A = *alg_;
  if (A.is_findim()) {
    const Vec& u = A.unit_coords();
    std::size_t r = 0;
    while (u[r].is_zero()) ++r;
    Elem c = coords_[r] / u[r];
    if (A.scalar(c) == *this) return c;
    return std::nullopt;
  }
  if (poly_.empty()) return A.field().zero();
  if (poly_.size() == 1 && all_of(poly_.begin()->first.begin(), poly_.begin()->first.end(), [](long e) { return e == 0; }))
    return poly_.begin()->second;
  return std::nullopt;
}

AlgElement AlgElement::operator-() const {
  AlgElement r = *this;
  for (auto& c : r.coords_) c = -c;
  for (auto& [m, c] : r.poly_) c = -c;
  return r;
}

AlgElement operator+(const AlgElement& a, const AlgElement& b) {
  if (a.alg_ != b.alg_) algebra_mismatch();
  AlgElement r = a;
  if (a.alg_->is_findim()) {
    for (std::size_t i = 0; i < r.coords_.size(); ++i)
      if (!b.coords_[i].is_zero()) r.coords_[i] += b.coords_[i];
  } else {
    for (const auto& [m, c] : b.poly_) poly_add_term(r.poly_, m, c);
  }
  return r;
}

AlgElement operator-(const AlgElement& a, const AlgElement& b) { return a + (-b); }

AlgElement operator*(const AlgElement& a, const AlgElement& b) {
  if (a.alg_ != b.alg_) algebra_mismatch();
  AlgElement r;
  r.alg_ = a.alg_;
  if (a.alg_->is_findim())
    r.coords_ = a.alg_->mul_coords(a.coords_, b.coords_);
  else
    r.poly_ = poly_mul(a.poly_, b.poly_);
  return r;
}

AlgElement operator*(const Elem& c, const AlgElement& a) {
  if (!a.alg_->field().owns(c)) throw MismatchError("scalar outside the base field");
  if (c.is_zero()) return a.alg_->zero();
  AlgElement r = a;
  for (auto& x : r.coords_)
    if (!x.is_zero()) x = c * x;
  for (auto& [m, x] : r.poly_) x = c * x;
  return r;
}

bool operator==(const AlgElement& a, const AlgElement& b) {
  if (a.alg_ != b.alg_) algebra_mismatch();
  if (a.alg_->is_findim()) return a.coords_ == b.coords_;
  if (a.poly_.size() != b.poly_.size()) return false;
  auto it = b.poly_.begin();
  for (const auto& [m, c] : a.poly_) {
    if (m != it->first || c != it->second) return false;
    ++it;
  }
  return true;
}

AlgElement AlgElement::sigma(unsigned power) const {
  const SigmaAlgebra& A = *alg_;
  const Field& k = A.field();
  AlgElement x = *this;
  for (unsigned step = 0; step < power; ++step) {
    AlgElement r = A.zero();
    if (A.is_findim()) {
      for (std::size_t j = 0; j < A.dim(); ++j)
        if (!x.coords_[j].is_zero()) add_scaled(r.coords_, k.sigma(x.coords_[j]), A.sigma_coords(j));
    } else if (A.kind() == SigmaAlgebra::Kind::Laurent) {
      for (const auto& [m, c] : x.poly_) {
        Elem coef = k.sigma(c);
        Monomial out(A.dim(), 0);
        for (std::size_t i = 0; i < A.dim(); ++i) {
          if (m[i] == 0) continue;
          const LaurentImage& im = A.laurent_images()[i];
          coef = coef * im.c.pow(m[i]);
          for (std::size_t j = 0; j < A.dim(); ++j) out[j] += m[i] * im.v[j];
        }
        poly_add_term(r.poly_, out, coef);
      }
    } else {
      std::vector<SparsePoly> imgs;
      for (std::size_t i = 0; i < A.dim(); ++i) {
        const AffineImage& im = A.affine_images()[i];
        SparsePoly p;
        poly_add_term(p, Monomial(A.dim(), 0), im.c);
        for (std::size_t j = 0; j < A.dim(); ++j) {
          Monomial mj(A.dim(), 0);
          mj[j] = 1;
          poly_add_term(p, mj, im.m[j]);
        }
        imgs.push_back(std::move(p));
      }
      for (const auto& [m, c] : x.poly_) {
        SparsePoly term;
        term.emplace(Monomial(A.dim(), 0), k.sigma(c));
        for (std::size_t i = 0; i < A.dim(); ++i)
          for (long e = 0; e < m[i]; ++e) term = poly_mul(term, imgs[i]);
        for (const auto& [mm, cc] : term) poly_add_term(r.poly_, mm, cc);
      }
    }
    x = std::move(r);
  }
  return x;
}

std::optional<AlgElement> AlgElement::inverse() const {
  const SigmaAlgebra& A = *alg_;
  if (A.is_findim()) {
    std::vector<Vec> cols;
    const Elem zero = A.field().zero();
    for (std::size_t j = 0; j < A.dim(); ++j) cols.push_back(A.mul_coords(coords_, unit_vector(A.dim(), j, zero)));
    auto z = solve(Matrix::from_columns(cols, zero), A.unit_coords());
    if (!z) return std::nullopt;
    return A.from_coords(std::move(*z));
  }
  if (poly_.size() != 1) return std::nullopt;
  const auto& [m, c] = *poly_.begin();
  if (A.kind() == SigmaAlgebra::Kind::FreePoly) {
    for (long e : m)
      if (e != 0) return std::nullopt;
  }
  Monomial inv(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) inv[i] = -m[i];
  AlgElement r = A.zero();
  r.poly_.emplace(inv, c.inverse());
  return r;
}

AlgElement AlgElement::pow(long e) const {
  AlgElement b = *this;
  if (e < 0) {
    auto inv = inverse();
    if (!inv) throw DivisionByZero("negative power of a non-unit");
    b = *inv;
    e = -e;
  }
  AlgElement r = alg_->one();
  while (e) {
    if (e & 1) r = r * b;
    e >>= 1;
    if (e) b = b * b;
  }
  return r;
}

namespace {

std::string coef_prefix(const Elem& c, bool& negative) {
  std::string s = c.str();
  negative = false;
  if (c.is_rational() && c.rational() < 0) {
    negative = true;
    return (-c).str();
  }
  return s;
}

std::string join_terms(const std::vector<std::pair<Elem, std::string>>& terms) {
  if (terms.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [c, mono] : terms) {
    bool neg = false;
    std::string cs = coef_prefix(c, neg);
    if (!first) os << (neg ? " - " : " + ");
    else if (neg) os << "-";
    first = false;
    bool simple = cs.find_first_of("+-*/ ") == std::string::npos;
    if (mono.empty()) {
      os << (simple ? cs : "(" + cs + ")");
    } else if (cs == "1") {
      os << mono;
    } else {
      os << (simple ? cs : "(" + cs + ")") << "*" << mono;
    }
  }
  return os.str();
}

}  // namespace

std::string AlgElement::str() const {
  const SigmaAlgebra& A = *alg_;
  std::vector<std::pair<Elem, std::string>> terms;
  if (A.is_findim()) {
    for (std::size_t i = 0; i < A.dim(); ++i) {
      if (coords_[i].is_zero()) continue;
      const std::string& l = A.labels()[i];
      std::string mono = l == "1" ? "" : l.find('#') == std::string::npos ? l : "(" + l + ")";
      terms.emplace_back(coords_[i], mono);
    }
    return join_terms(terms);
  }
  for (auto it = poly_.rbegin(); it != poly_.rend(); ++it) {
    std::string mono;
    for (std::size_t i = 0; i < it->first.size(); ++i) {
      long e = it->first[i];
      if (e == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += A.labels()[i];
      if (e != 1) mono += "^" + (e < 0 ? "(" + std::to_string(e) + ")" : std::to_string(e));
    }
    terms.emplace_back(it->second, mono);
  }
  return join_terms(terms);
}

// ---------------------------------------------------------------- tensors

AlgElement pure_tensor(const AlgebraPtr& lr, const AlgElement& a, const AlgElement& b) {
  if (!lr->is_tensor() || a.algebra() != lr->left() || b.algebra() != lr->right())
    throw MismatchError("pure tensor factors do not match the tensor algebra");
  if (lr->is_findim()) return lr->from_coords(kron(a.coords(), b.coords()));
  SparsePoly p;
  const std::size_t nl = lr->left()->generators();
  for (const auto& [ma, ca] : a.poly())
    for (const auto& [mb, cb] : b.poly()) {
      Monomial m(lr->generators(), 0);
      std::copy(ma.begin(), ma.end(), m.begin());
      std::copy(mb.begin(), mb.end(), m.begin() + static_cast<long>(nl));
      poly_add_term(p, m, ca * cb);
    }
  return lr->from_poly(std::move(p));
}

// ---------------------------------------------------------------- morphisms

AlgMorphism AlgMorphism::unchecked(AlgebraPtr source, AlgebraPtr target, std::vector<AlgElement> images) {
  AlgMorphism h;
  h.source_ = std::move(source);
  h.target_ = std::move(target);
  h.images_ = std::move(images);
  return h;
}

AlgMorphism AlgMorphism::make(AlgebraPtr source, AlgebraPtr target, std::vector<AlgElement> images) {
  if (source->field() != target->field()) throw MismatchError("morphism between algebras over different fields");
  if (images.size() != source->dim()) throw InvalidInput("wrong number of images");
  for (const auto& im : images)
    if (im.algebra() != target) throw MismatchError("image outside the target algebra");
  AlgMorphism h = unchecked(source, target, std::move(images));
  if (source->is_findim()) {
    if (h(source->one()) != target->one()) throw InvalidInput("morphism does not preserve the unit");
    for (std::size_t i = 0; i < source->dim(); ++i)
      for (std::size_t j = i; j < source->dim(); ++j)
        if (h(source->basis(i) * source->basis(j)) != h.images_[i] * h.images_[j])
          throw InvalidInput("morphism is not multiplicative");
  } else if (source->kind() == SigmaAlgebra::Kind::Laurent) {
    for (const auto& im : h.images_)
      if (!im.is_unit()) throw InvalidInput("Laurent generator must map to a unit");
  }
  for (std::size_t i = 0; i < source->dim(); ++i)
    if (h(source->basis(i).sigma()) != h.images_[i].sigma()) throw InvalidInput("morphism does not commute with sigma");
  return h;
}

AlgMorphism AlgMorphism::identity(const AlgebraPtr& a) {
  std::vector<AlgElement> imgs;
  for (std::size_t i = 0; i < a->dim(); ++i) imgs.push_back(a->basis(i));
  return unchecked(a, a, std::move(imgs));
}

AlgMorphism AlgMorphism::on_tensor(const AlgebraPtr& lr, const AlgMorphism& f, const AlgMorphism& g) {
  if (!lr->is_tensor() || f.source() != lr->left() || g.source() != lr->right() || f.target() != g.target())
    throw MismatchError("morphisms do not fit the tensor algebra");
  std::vector<AlgElement> imgs;
  if (lr->is_findim()) {
    for (std::size_t i = 0; i < lr->left()->dim(); ++i)
      for (std::size_t j = 0; j < lr->right()->dim(); ++j) imgs.push_back(f.images_[i] * g.images_[j]);
  } else {
    imgs = f.images_;
    imgs.insert(imgs.end(), g.images_.begin(), g.images_.end());
  }
  return unchecked(lr, f.target(), std::move(imgs));
}

AlgMorphism AlgMorphism::compose(const AlgMorphism& after) const {
  if (after.source() != target_) throw MismatchError("morphisms are not composable");
  std::vector<AlgElement> imgs;
  for (const auto& im : images_) imgs.push_back(after(im));
  return unchecked(source_, after.target(), std::move(imgs));
}

AlgElement AlgMorphism::operator()(const AlgElement& x) const {
  if (x.algebra() != source_) throw MismatchError("element outside the morphism source");
  if (source_->is_findim()) {
    AlgElement r = target_->zero();
    if (target_->is_findim()) {
      Vec acc(target_->dim(), target_->field().zero());
      for (std::size_t i = 0; i < source_->dim(); ++i)
        if (!x.coords()[i].is_zero()) add_scaled(acc, x.coords()[i], images_[i].coords());
      return target_->from_coords(std::move(acc));
    }
    for (std::size_t i = 0; i < source_->dim(); ++i)
      if (!x.coords()[i].is_zero()) r += x.coords()[i] * images_[i];
    return r;
  }
  AlgElement r = target_->zero();
  std::vector<std::optional<AlgElement>> inv(images_.size());
  for (const auto& [m, c] : x.poly()) {
    AlgElement term = target_->scalar(c);
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i] > 0) {
        term = term * images_[i].pow(m[i]);
      } else if (m[i] < 0) {
        if (!inv[i]) inv[i] = images_[i].inverse();
        if (!inv[i]) throw InvalidInput("image of a Laurent generator is not a unit");
        term = term * inv[i]->pow(-m[i]);
      }
    }
    r += term;
  }
  return r;
}

Matrix AlgMorphism::matrix() const {
  if (!source_->is_findim() || !target_->is_findim()) throw Unsupported("matrix needs finite-dimensional algebras");
  std::vector<Vec> cols;
  for (const auto& im : images_) cols.push_back(im.coords());
  return Matrix::from_columns(cols, source_->field().zero());
}

TensorContextPtr tensor_context(const AlgebraPtr& A) {
  auto ctx = std::make_shared<TensorContext>();
  ctx->A = A;
  ctx->AA = SigmaAlgebra::tensor(A, A);
  ctx->AAA = SigmaAlgebra::tensor(ctx->AA, A);
  const auto& AA = ctx->AA;
  const auto& AAA = ctx->AAA;
  // all face maps are insertions of 1, so their images are pure tensors
  std::vector<AlgElement> d1, d2, p1, p2, p3, e1, e2, e3;
  AlgElement oneA = A->one(), oneAA = AA->one();
  for (std::size_t i = 0; i < A->dim(); ++i) {
    AlgElement b = A->basis(i);
    d1.push_back(pure_tensor(AA, oneA, b));
    d2.push_back(pure_tensor(AA, b, oneA));
    p1.push_back(pure_tensor(AAA, d2.back(), oneA));
    p2.push_back(pure_tensor(AAA, d1.back(), oneA));
    p3.push_back(pure_tensor(AAA, oneAA, b));
  }
  ctx->d1 = AlgMorphism::unchecked(A, AA, d1);
  ctx->d2 = AlgMorphism::unchecked(A, AA, d2);
  ctx->p1 = AlgMorphism::unchecked(A, AAA, p1);
  ctx->p2 = AlgMorphism::unchecked(A, AAA, p2);
  ctx->p3 = AlgMorphism::unchecked(A, AAA, p3);
  if (A->is_findim()) {
    for (std::size_t i = 0; i < A->dim(); ++i)
      for (std::size_t j = 0; j < A->dim(); ++j) {
        AlgElement a = A->basis(i), b = A->basis(j);
        e1.push_back(pure_tensor(AAA, pure_tensor(AA, oneA, a), b));
        e2.push_back(pure_tensor(AAA, pure_tensor(AA, a, oneA), b));
        e3.push_back(pure_tensor(AAA, pure_tensor(AA, a, b), oneA));
      }
    ctx->e1 = AlgMorphism::unchecked(AA, AAA, e1);
    ctx->e2 = AlgMorphism::unchecked(AA, AAA, e2);
    ctx->e3 = AlgMorphism::unchecked(AA, AAA, e3);
  } else {
    ctx->e1 = AlgMorphism::on_tensor(AA, ctx->p2, ctx->p3);
    ctx->e2 = AlgMorphism::on_tensor(AA, ctx->p1, ctx->p3);
    ctx->e3 = AlgMorphism::on_tensor(AA, ctx->p1, ctx->p2);
  }
  return ctx;
}

}  // namespace dcoh
