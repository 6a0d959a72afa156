#include "dcoh/groups.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "dcoh/expr_parser.hpp"
#include "dcoh/linalg.hpp"

namespace dcoh {

std::string psi_name(Psi p) {
  switch (p) {
    case Psi::Trivial:
      return "trivial";
    case Psi::Identity:
      return "id";
    case Psi::TransposeInverse:
      return "transposeinv";
  }
  return "";
}

// ---------------------------------------------------------------- matrices

std::vector<AlgElement> mat_identity(const AlgebraPtr& R, unsigned n) {
  std::vector<AlgElement> m(n * n, R->zero());
  for (unsigned i = 0; i < n; ++i) m[i * n + i] = R->one();
  return m;
}

std::vector<AlgElement> mat_mul(const std::vector<AlgElement>& a, const std::vector<AlgElement>& b, unsigned n) {
  const AlgebraPtr& R = a.at(0).algebra();
  std::vector<AlgElement> c(n * n, R->zero());
  for (unsigned i = 0; i < n; ++i)
    for (unsigned k = 0; k < n; ++k) {
      if (a[i * n + k].is_zero()) continue;
      for (unsigned j = 0; j < n; ++j) c[i * n + j] += a[i * n + k] * b[k * n + j];
    }
  return c;
}

std::vector<AlgElement> mat_transpose(const std::vector<AlgElement>& m, unsigned n) {
  std::vector<AlgElement> t = m;
  for (unsigned i = 0; i < n; ++i)
    for (unsigned j = 0; j < n; ++j) t[j * n + i] = m[i * n + j];
  return t;
}

namespace {

std::vector<AlgElement> minor_of(const std::vector<AlgElement>& m, unsigned n, unsigned row, unsigned col) {
  std::vector<AlgElement> r;
  for (unsigned i = 0; i < n; ++i)
    for (unsigned j = 0; j < n; ++j)
      if (i != row && j != col) r.push_back(m[i * n + j]);
  return r;
}

}  // namespace

AlgElement mat_det(const std::vector<AlgElement>& m, unsigned n) {
  if (n == 1) return m.at(0);
  if (n == 2) return m[0] * m[3] - m[1] * m[2];
  const AlgebraPtr& R = m.at(0).algebra();
  AlgElement d = R->zero();
  for (unsigned j = 0; j < n; ++j) {
    if (m[j].is_zero()) continue;
    AlgElement c = m[j] * mat_det(minor_of(m, n, 0, j), n - 1);
    d = (j % 2) ? d - c : d + c;
  }
  return d;
}

std::optional<std::vector<AlgElement>> mat_inv(const std::vector<AlgElement>& m, unsigned n) {
  auto dinv = mat_det(m, n).inverse();
  if (!dinv) return std::nullopt;
  if (n == 1) return std::vector<AlgElement>{*dinv};
  std::vector<AlgElement> r(n * n);
  for (unsigned i = 0; i < n; ++i)
    for (unsigned j = 0; j < n; ++j) {
      AlgElement c = mat_det(minor_of(m, n, j, i), n - 1) * *dinv;
      r[i * n + j] = ((i + j) % 2) ? -c : c;
    }
  return r;
}

// ---------------------------------------------------------------- construction

namespace {

std::vector<std::string> matrix_names(unsigned n) {
  std::vector<std::string> v;
  for (unsigned i = 1; i <= n; ++i)
    for (unsigned j = 1; j <= n; ++j) v.push_back("g" + std::to_string(i) + std::to_string(j));
  v.push_back("dinv");
  return v;
}

SigmaPolynomial symbolic_det(const Field& k, unsigned n) {
  std::vector<unsigned> perm(n);
  std::iota(perm.begin(), perm.end(), 0u);
  unsigned vars = n * n + 1;
  SigmaPolynomial det(k, vars);
  do {
    int sign = 1;
    for (unsigned i = 0; i < n; ++i)
      for (unsigned j = i + 1; j < n; ++j)
        if (perm[i] > perm[j]) sign = -sign;
    SigmaPolynomial t = SigmaPolynomial::constant(k, vars, k.from_int(sign));
    for (unsigned i = 0; i < n; ++i) t = t * SigmaPolynomial::variable(k, vars, i * n + perm[i]);
    det = det + t;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return det;
}

}  // namespace

GroupPtr Group::matrix(const Field& k, unsigned n, std::vector<SigmaPolynomial> relations, std::string name) {
  if (n == 0 || n > 9) throw InvalidInput("matrix size must be between 1 and 9");
  for (const auto& r : relations) {
    if (r.arity() != n * n + 1) throw MismatchError("relation arity must be n^2 + 1");
    if (r.field() != k) throw MismatchError("relation over another field");
  }
  auto g = std::shared_ptr<Group>(new Group());
  g->kind_ = Kind::Matrix;
  g->k_ = k;
  g->n_ = n;
  g->relations_ = std::move(relations);
  if (name.empty()) {
    name = "matrix:" + std::to_string(n);
    for (const auto& r : g->relations_) name += ";" + r.str(matrix_names(n));
  }
  g->descriptor_ = name;
  return g;
}

GroupPtr Group::mu2sigma(const Field& k) {
  auto names = matrix_names(1);
  return matrix(k, 1, {SigmaPolynomial::parse(k, 2, "g11^2 - 1", names), SigmaPolynomial::parse(k, 2, "s(g11) - g11", names)},
                "mu2sigma");
}

GroupPtr Group::gl(const Field& k, unsigned n) { return matrix(k, n, {}, n == 1 ? "gm" : "gl:" + std::to_string(n)); }

GroupPtr Group::sl(const Field& k, unsigned n) {
  SigmaPolynomial rel = symbolic_det(k, n) - SigmaPolynomial::constant(k, n * n + 1, k.one());
  return matrix(k, n, {rel}, "sl:" + std::to_string(n));
}

GroupPtr Group::ga(const Field& k) {
  auto g = std::shared_ptr<Group>(new Group());
  g->kind_ = Kind::Additive;
  g->k_ = k;
  g->descriptor_ = "ga";
  return g;
}

GroupPtr Group::additive(const DifferenceOperator& L) {
  auto g = std::shared_ptr<Group>(new Group());
  g->kind_ = Kind::Additive;
  g->k_ = L.field();
  g->op_ = L;
  g->descriptor_ = "addker:" + L.str();
  return g;
}

GroupPtr Group::diagonal(const Field& k, unsigned n, std::vector<MultiplicativeFunction> F) {
  if (n == 0) throw InvalidInput("diagonal group of arity 0");
  for (const auto& f : F)
    if (f.arity() != n) throw MismatchError("multiplicative function of the wrong arity");
  auto g = std::shared_ptr<Group>(new Group());
  g->kind_ = Kind::Diagonal;
  g->k_ = k;
  g->n_ = n;
  g->F_ = std::move(F);
  std::string d = "diag:" + std::to_string(n);
  for (const auto& f : g->F_) d += ";" + f.str();
  g->descriptor_ = d;
  return g;
}

GroupPtr Group::twist(const Field& k, TwistBase base, unsigned n, unsigned d, Psi psi) {
  if (n == 0 || n > 9) throw InvalidInput("matrix size must be between 1 and 9");
  if (d == 0) throw InvalidInput("twist exponent d must be positive");
  auto g = std::shared_ptr<Group>(new Group());
  g->kind_ = Kind::Twist;
  g->k_ = k;
  g->n_ = n;
  g->base_ = base;
  g->d_ = d;
  g->psi_ = psi;
  g->descriptor_ = std::string("twist:") + (base == TwistBase::GL ? "GL" : "SL") + std::to_string(n) + ";d=" + std::to_string(d) +
                   ";psi=" + psi_name(psi);
  return g;
}

GroupPtr Group::product(const GroupPtr& a, const GroupPtr& b) {
  if (a->field() != b->field()) throw MismatchError("product of groups over different fields");
  auto g = std::shared_ptr<Group>(new Group());
  g->kind_ = Kind::Product;
  g->k_ = a->field();
  g->first_ = a;
  g->second_ = b;
  g->descriptor_ = "prod(" + a->descriptor() + "|" + b->descriptor() + ")";
  return g;
}

namespace {

unsigned parse_uint(std::string_view s, const char* what) {
  std::string t = trim_copy(s);
  if (t.empty() || !std::all_of(t.begin(), t.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
    throw ParseError(std::string("expected a positive integer for ") + what + ", got '" + t + "'");
  return static_cast<unsigned>(std::stoul(t));
}

}  // namespace

GroupPtr Group::parse(const Field& k, std::string_view descriptor) {
  std::string d = trim_copy(descriptor);
  auto starts = [&](const char* p) { return d.rfind(p, 0) == 0; };
  if (d == "mu2sigma") return mu2sigma(k);
  if (d == "ga") return ga(k);
  if (d == "gm") return gm(k);
  if (starts("gl:")) return gl(k, parse_uint(d.substr(3), "gl"));
  if (starts("sl:")) return sl(k, parse_uint(d.substr(3), "sl"));
  if (starts("addker:")) return additive(DifferenceOperator::parse(k, d.substr(7)));
  if (starts("diag:")) {
    auto parts = split_top_level(d.substr(5), ';');
    unsigned n = parse_uint(parts.at(0), "diag arity");
    std::vector<MultiplicativeFunction> F;
    for (std::size_t i = 1; i < parts.size(); ++i) F.push_back(MultiplicativeFunction::parse(n, trim_copy(parts[i])));
    return diagonal(k, n, F);
  }
  if (starts("matrix:")) {
    auto parts = split_top_level(d.substr(7), ';');
    unsigned n = parse_uint(parts.at(0), "matrix size");
    std::vector<SigmaPolynomial> rels;
    for (std::size_t i = 1; i < parts.size(); ++i) rels.push_back(SigmaPolynomial::parse(k, n * n + 1, parts[i], matrix_names(n)));
    return matrix(k, n, rels);
  }
  if (starts("twist:")) {
    auto parts = split_top_level(d.substr(6), ';');
    if (parts.size() != 3) throw ParseError("twist descriptor needs base, d and psi: '" + d + "'");
    std::string b = trim_copy(parts[0]);
    TwistBase base;
    if (b.rfind("GL", 0) == 0)
      base = TwistBase::GL;
    else if (b.rfind("SL", 0) == 0)
      base = TwistBase::SL;
    else
      throw ParseError("twist base must be GL<n> or SL<n>: '" + b + "'");
    unsigned n = parse_uint(b.substr(2), "twist size");
    std::string dd = trim_copy(parts[1]), pp = trim_copy(parts[2]);
    if (dd.rfind("d=", 0) != 0) throw ParseError("expected d=<d> in '" + d + "'");
    if (pp.rfind("psi=", 0) != 0) throw ParseError("expected psi=<trivial|id|transposeinv> in '" + d + "'");
    unsigned dv = parse_uint(dd.substr(2), "d");
    std::string ps = pp.substr(4);
    Psi psi;
    if (ps == "trivial")
      psi = Psi::Trivial;
    else if (ps == "id")
      psi = Psi::Identity;
    else if (ps == "transposeinv")
      psi = Psi::TransposeInverse;
    else
      throw ParseError("psi must be trivial, id or transposeinv: '" + ps + "'");
    return twist(k, base, n, dv, psi);
  }
  if (starts("prod(") && d.back() == ')') {
    auto parts = split_top_level(d.substr(5, d.size() - 6), '|');
    if (parts.size() != 2) throw ParseError("prod needs two factors: '" + d + "'");
    return product(parse(k, parts[0]), parse(k, parts[1]));
  }
  throw ParseError("unknown group descriptor '" + d + "'");
}

// ---------------------------------------------------------------- membership and law

std::size_t Group::size() const {
  switch (kind_) {
    case Kind::Matrix:
    case Kind::Twist:
      return n_ * n_;
    case Kind::Additive:
      return 1;
    case Kind::Diagonal:
      return n_;
    case Kind::Product:
      return first_->size() + second_->size();
  }
  return 0;
}

bool Group::is_commutative() const {
  switch (kind_) {
    case Kind::Matrix:
    case Kind::Twist:
      return n_ == 1;
    case Kind::Product:
      return first_->is_commutative() && second_->is_commutative();
    default:
      return true;
  }
}

void Group::check_shape(const GroupElement& x) const {
  if (x.entries.size() != size()) throw MismatchError("group element has " + std::to_string(x.entries.size()) + " entries, expected " + std::to_string(size()));
  const AlgebraPtr& R = x.entries[0].algebra();
  if (!R) throw MismatchError("group element without algebra");
  for (const auto& e : x.entries)
    if (e.algebra() != R) throw MismatchError("group element entries from different algebras");
  if (R->field() != k_) throw MismatchError("group element over another field");
}

GroupElement Group::identity(const AlgebraPtr& R) const {
  switch (kind_) {
    case Kind::Matrix:
    case Kind::Twist:
      return {mat_identity(R, n_)};
    case Kind::Additive:
      return {{R->zero()}};
    case Kind::Diagonal:
      return {std::vector<AlgElement>(n_, R->one())};
    case Kind::Product:
      return merge(first_->identity(R), second_->identity(R));
  }
  return {};
}

std::string Group::violation(const GroupElement& x) const {
  check_shape(x);
  switch (kind_) {
    case Kind::Matrix: {
      auto dinv = mat_det(x.entries, n_).inverse();
      if (!dinv) return "determinant is not a unit";
      std::vector<AlgElement> point = x.entries;
      point.push_back(*dinv);
      for (const auto& r : relations_)
        if (!r.eval(point).is_zero()) return "relation " + r.str(matrix_names(n_)) + " fails";
      return "";
    }
    case Kind::Twist: {
      AlgElement det = mat_det(x.entries, n_);
      if (base_ == TwistBase::SL && !det.is_one()) return "determinant is not 1";
      auto inv = mat_inv(x.entries, n_);
      if (!inv) return "determinant is not a unit";
      std::vector<AlgElement> rhs;
      const AlgebraPtr& R = x.algebra();
      switch (psi_) {
        case Psi::Trivial:
          rhs = mat_identity(R, n_);
          break;
        case Psi::Identity:
          rhs = x.entries;
          break;
        case Psi::TransposeInverse:
          rhs = mat_transpose(*inv, n_);
          break;
      }
      if (sigma(x, d_).entries != rhs) return "sigma^" + std::to_string(d_) + "(g) differs from psi(g)";
      return "";
    }
    case Kind::Additive:
      if (op_ && !(*op_)(x.entries[0]).is_zero()) return "L(g) is not zero";
      return "";
    case Kind::Diagonal: {
      for (const auto& e : x.entries)
        if (!e.is_unit()) return "entry is not a unit";
      for (const auto& f : F_)
        if (!f.eval(x.entries).is_one()) return "f = " + f.str() + " is not 1";
      return "";
    }
    case Kind::Product: {
      std::string a = first_->violation(first_part(x));
      if (!a.empty()) return "first factor: " + a;
      std::string b = second_->violation(second_part(x));
      if (!b.empty()) return "second factor: " + b;
      return "";
    }
  }
  return "unknown group kind";
}

bool Group::contains(const GroupElement& x) const { return violation(x).empty(); }

GroupElement Group::mul(const GroupElement& x, const GroupElement& y) const {
  check_shape(x);
  check_shape(y);
  if (x.algebra() != y.algebra()) throw MismatchError("group elements over different algebras");
  switch (kind_) {
    case Kind::Matrix:
    case Kind::Twist:
      return {mat_mul(x.entries, y.entries, n_)};
    case Kind::Additive:
      return {{x.entries[0] + y.entries[0]}};
    case Kind::Diagonal: {
      GroupElement r = x;
      for (std::size_t i = 0; i < n_; ++i) r.entries[i] = x.entries[i] * y.entries[i];
      return r;
    }
    case Kind::Product:
      return merge(first_->mul(first_part(x), first_part(y)), second_->mul(second_part(x), second_part(y)));
  }
  return {};
}

GroupElement Group::inv(const GroupElement& x) const {
  check_shape(x);
  switch (kind_) {
    case Kind::Matrix:
    case Kind::Twist: {
      auto r = mat_inv(x.entries, n_);
      if (!r) throw InvalidInput("matrix is not invertible");
      return {*r};
    }
    case Kind::Additive:
      return {{-x.entries[0]}};
    case Kind::Diagonal: {
      GroupElement r = x;
      for (auto& e : r.entries) {
        auto i = e.inverse();
        if (!i) throw InvalidInput("entry is not a unit");
        e = *i;
      }
      return r;
    }
    case Kind::Product:
      return merge(first_->inv(first_part(x)), second_->inv(second_part(x)));
  }
  return {};
}

GroupElement Group::map(const GroupElement& x, const AlgMorphism& h) {
  GroupElement r;
  for (const auto& e : x.entries) r.entries.push_back(h(e));
  return r;
}

GroupElement Group::sigma(const GroupElement& x, unsigned power) {
  GroupElement r;
  for (const auto& e : x.entries) r.entries.push_back(e.sigma(power));
  return r;
}

GroupElement Group::first_part(const GroupElement& x) const {
  if (kind_ != Kind::Product) throw MismatchError("not a product group");
  check_shape(x);
  return {std::vector<AlgElement>(x.entries.begin(), x.entries.begin() + static_cast<long>(first_->size()))};
}

GroupElement Group::second_part(const GroupElement& x) const {
  if (kind_ != Kind::Product) throw MismatchError("not a product group");
  check_shape(x);
  return {std::vector<AlgElement>(x.entries.begin() + static_cast<long>(first_->size()), x.entries.end())};
}

GroupElement Group::merge(const GroupElement& a, const GroupElement& b) const {
  if (kind_ != Kind::Product) throw MismatchError("not a product group");
  if (a.entries.size() != first_->size() || b.entries.size() != second_->size()) throw MismatchError("factor shapes do not match");
  if (a.algebra() != b.algebra()) throw MismatchError("factors over different algebras");
  GroupElement r = a;
  r.entries.insert(r.entries.end(), b.entries.begin(), b.entries.end());
  return r;
}

std::string Group::str(const GroupElement& x) const {
  auto wrap = [](const AlgElement& e) {
    std::string s = e.str();
    return s.find_first_of(" +-") == std::string::npos ? s : "(" + s + ")";
  };
  switch (kind_) {
    case Kind::Matrix:
    case Kind::Twist: {
      if (n_ == 1) return x.entries[0].str();
      std::string s = "[";
      for (unsigned i = 0; i < n_; ++i) {
        s += i ? ", [" : "[";
        for (unsigned j = 0; j < n_; ++j) s += (j ? ", " : "") + wrap(x.entries[i * n_ + j]);
        s += "]";
      }
      return s + "]";
    }
    case Kind::Additive:
      return x.entries[0].str();
    case Kind::Diagonal: {
      std::string s = "(";
      for (std::size_t i = 0; i < x.entries.size(); ++i) s += (i ? ", " : "") + wrap(x.entries[i]);
      return s + ")";
    }
    case Kind::Product:
      return "(" + first_->str(first_part(x)) + " | " + second_->str(second_part(x)) + ")";
  }
  return "";
}

// ---------------------------------------------------------------- enumeration

namespace {

void require_finite(const AlgebraPtr& R) {
  if (!R->is_findim()) throw Unsupported("point enumeration needs a finite-dimensional algebra");
  if (!R->field().is_finite()) throw Unsupported("point enumeration needs a finite field");
}

std::uint64_t checked_pow(std::uint64_t b, std::size_t e, std::uint64_t budget, const std::string& what) {
  long double est = 1;
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < e; ++i) {
    est *= static_cast<long double>(b);
    if (est > static_cast<long double>(budget))
      throw BudgetExhausted(what + ": search space exceeds budget " + std::to_string(budget));
    r *= b;
  }
  return r;
}

std::vector<AlgElement> all_elements(const AlgebraPtr& R, std::uint64_t budget) {
  std::uint64_t q = R->field().size();
  std::uint64_t count = checked_pow(q, R->dim(), budget, "algebra elements");
  std::vector<AlgElement> out;
  out.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) out.push_back(R->element_at(i));
  return out;
}

std::vector<AlgElement> all_units(const AlgebraPtr& R, std::uint64_t budget) {
  std::vector<AlgElement> out;
  for (auto& x : all_elements(R, budget))
    if (x.is_unit()) out.push_back(std::move(x));
  return out;
}

/// Coordinate key used to order points.
std::vector<std::uint64_t> key_of(const GroupElement& x) {
  std::vector<std::uint64_t> k;
  for (const auto& e : x.entries)
    for (const auto& c : e.coords()) k.push_back(c.finite().code);
  return k;
}

std::vector<GroupElement> additive_points(const Group& G, const AlgebraPtr& R, std::uint64_t budget) {
  const Field& k = R->field();
  const GFContext& ctx = k.gf();
  if (!G.op()) {
    std::vector<GroupElement> out;
    for (auto& x : all_elements(R, budget)) out.push_back({{x}});
    return out;
  }
  // ker L on R as an F_p-space with basis w^i e_j.
  Field fp = Field::finite(ctx.p(), 1, 0);
  std::size_t m = ctx.m(), dim = R->dim();
  std::vector<AlgElement> basis;
  Elem w = k.generator();
  for (std::size_t j = 0; j < dim; ++j) {
    Elem c = k.one();
    for (std::size_t i = 0; i < m; ++i) {
      basis.push_back(c * R->basis(j));
      c = c * w;
    }
  }
  auto to_fp = [&](const AlgElement& x) {
    Vec v;
    for (const auto& c : x.coords()) {
      auto dg = ctx.digits(c.finite().code);
      dg.resize(m, 0);
      for (auto d : dg) v.push_back(fp.from_int(static_cast<long>(d)));
    }
    return v;
  };
  std::vector<Vec> cols;
  for (const auto& b : basis) cols.push_back(to_fp((*G.op())(b)));
  auto ker = kernel(Matrix::from_columns(cols, fp.zero()));
  std::uint64_t count = checked_pow(ctx.p(), ker.size(), budget, "additive kernel");
  std::vector<GroupElement> out;
  for (std::uint64_t code = 0; code < count; ++code) {
    AlgElement x = R->zero();
    std::uint64_t c = code;
    for (const auto& v : ker) {
      long digit = static_cast<long>(c % ctx.p());
      c /= ctx.p();
      if (digit == 0) continue;
      for (std::size_t i = 0; i < v.size(); ++i)
        if (!v[i].is_zero()) x += k.from_int(digit * static_cast<long>(v[i].finite().code)) * basis[i];
    }
    out.push_back({{x}});
  }
  std::sort(out.begin(), out.end(), [](const GroupElement& a, const GroupElement& b) { return key_of(a) < key_of(b); });
  return out;
}

std::vector<GroupElement> tuple_points(const Group& G, const std::vector<AlgElement>& pool, std::size_t slots, std::uint64_t budget) {
  checked_pow(pool.size(), slots, budget, "group points");
  std::vector<GroupElement> out;
  if (pool.empty()) return out;
  std::vector<std::size_t> idx(slots, 0);
  for (;;) {
    GroupElement x;
    for (auto i : idx) x.entries.push_back(pool[i]);
    if (G.contains(x)) out.push_back(std::move(x));
    std::size_t p = slots;
    while (p > 0) {
      --p;
      if (++idx[p] < pool.size()) break;
      idx[p] = 0;
      if (p == 0) return out;
    }
    if (slots == 0) return out;
  }
}

}  // namespace

std::vector<GroupElement> Group::enumerate_points(const AlgebraPtr& R, std::uint64_t budget) const {
  require_finite(R);
  if (R->field() != k_) throw MismatchError("algebra over another field");
  switch (kind_) {
    case Kind::Additive:
      return additive_points(*this, R, budget);
    case Kind::Diagonal:
      return tuple_points(*this, all_units(R, budget), n_, budget);
    case Kind::Matrix:
    case Kind::Twist:
      if (n_ == 1) return tuple_points(*this, all_units(R, budget), 1, budget);
      return tuple_points(*this, all_elements(R, budget), n_ * n_, budget);
    case Kind::Product: {
      auto a = first_->enumerate_points(R, budget), b = second_->enumerate_points(R, budget);
      if (static_cast<long double>(a.size()) * static_cast<long double>(b.size()) > static_cast<long double>(budget))
        throw BudgetExhausted("product points exceed budget " + std::to_string(budget));
      std::vector<GroupElement> out;
      for (const auto& x : a)
        for (const auto& y : b) out.push_back(merge(x, y));
      return out;
    }
  }
  return {};
}

}  // namespace dcoh
