#include <algorithm>
#include <variant>

#include "dcoh/algebras.hpp"
#include "dcoh/expr_parser.hpp"

namespace dcoh {

namespace {

Vec coords1(const Field& k, std::size_t m, std::size_t i, const Elem& c) {
  Vec v(m, k.zero());
  v[i] = c;
  return v;
}

// Atoms resolve in the leaf algebras of a tensor tree; '#' picks the tensor
// algebra in the tree whose factors match.
struct AlgBuilder {
  using Value = std::variant<Elem, AlgElement>;
  const SigmaAlgebra& target;
  std::vector<AlgebraPtr> leaves, tensors;

  explicit AlgBuilder(const SigmaAlgebra& t) : target(t) {}

  const Field& k() const { return target.field(); }

  static bool is_scalar(const Value& v) { return v.index() == 0; }
  static const Elem& sc(const Value& v) { return std::get<0>(v); }
  static const AlgElement& el(const Value& v) { return std::get<1>(v); }

  static AlgElement lift(const Value& v, const AlgebraPtr& a) {
    if (is_scalar(v)) return a->scalar(sc(v));
    return el(v);
  }

  Value number(const mpz_class& n) { return k().from_rational(mpq_class(n)); }

  Value atom(std::string_view name) {
    for (const auto& a : leaves) {
      const auto& ls = a->labels();
      auto it = std::find(ls.begin(), ls.end(), name);
      if (it != ls.end()) return a->basis(static_cast<std::size_t>(it - ls.begin()));
    }
    return k().parse_element(name);
  }

  template <class F, class G>
  Value binary(const Value& a, const Value& b, F on_scalar, G on_alg) {
    if (is_scalar(a) && is_scalar(b)) return on_scalar(sc(a), sc(b));
    const AlgebraPtr& alg = is_scalar(a) ? el(b).algebra() : el(a).algebra();
    return on_alg(lift(a, alg), lift(b, alg));
  }

  Value add(const Value& a, const Value& b) {
    return binary(a, b, [](const Elem& x, const Elem& y) { return Value(x + y); },
                  [](const AlgElement& x, const AlgElement& y) { return Value(x + y); });
  }
  Value sub(const Value& a, const Value& b) {
    return binary(a, b, [](const Elem& x, const Elem& y) { return Value(x - y); },
                  [](const AlgElement& x, const AlgElement& y) { return Value(x - y); });
  }
  Value mul(const Value& a, const Value& b) {
    return binary(a, b, [](const Elem& x, const Elem& y) { return Value(x * y); },
                  [](const AlgElement& x, const AlgElement& y) { return Value(x * y); });
  }
  Value div(const Value& a, const Value& b) {
    if (is_scalar(b)) {
      if (sc(b).is_zero()) throw ParseError("division by zero");
      if (is_scalar(a)) return sc(a) / sc(b);
      return sc(b).inverse() * el(a);
    }
    auto inv = el(b).inverse();
    if (!inv) throw ParseError("division by a non-unit");
    return lift(a, el(b).algebra()) * *inv;
  }
  Value neg(const Value& a) {
    if (is_scalar(a)) return -sc(a);
    return -el(a);
  }
  Value pow(const Value& a, long e) {
    if (is_scalar(a)) {
      if (e < 0 && sc(a).is_zero()) throw ParseError("division by zero");
      return sc(a).pow(e);
    }
    if (e < 0 && !el(a).is_unit()) throw ParseError("negative power of a non-unit");
    return el(a).pow(e);
  }
  Value sigma(const Value& a, unsigned j) {
    if (is_scalar(a)) return k().sigma(sc(a), j);
    return el(a).sigma(j);
  }
  Value tensor(const Value& a, const Value& b) {
    if (is_scalar(a) && is_scalar(b)) return sc(a) * sc(b);
    for (const auto& t : tensors) {
      bool lok = is_scalar(a) || el(a).algebra() == t->left();
      bool rok = is_scalar(b) || el(b).algebra() == t->right();
      if (lok && rok) return pure_tensor(t, lift(a, t->left()), lift(b, t->right()));
    }
    throw ParseError("no tensor algebra matches the factors of '#'");
  }
};

void collect_tree(const AlgebraPtr& a, std::vector<AlgebraPtr>& leaves, std::vector<AlgebraPtr>& tensors) {
  if (a->is_tensor()) {
    tensors.push_back(a);
    collect_tree(a->left(), leaves, tensors);
    collect_tree(a->right(), leaves, tensors);
  } else if (std::find(leaves.begin(), leaves.end(), a) == leaves.end()) {
    leaves.push_back(a);
  }
}

}  // namespace

AlgElement SigmaAlgebra::parse_element(std::string_view text) const {
  AlgebraPtr self = shared_from_this();
  AlgBuilder b(*this);
  collect_tree(self, b.leaves, b.tensors);
  AlgBuilder::Value v;
  try {
    v = parse_expression(text, b);
  } catch (const DivisionByZero&) {
    throw ParseError("division by zero in '" + std::string(text) + "'");
  }
  if (v.index() == 0) return scalar(std::get<0>(v));
  const AlgElement& e = std::get<1>(v);
  if (e.algebra() != self) throw ParseError("'" + std::string(text) + "' is not an element of the requested algebra");
  return e;
}

AlgebraPtr make_mu_algebra(const Field& k, const Elem& a, const Elem& b) {
  if (!k.owns(a) || !k.owns(b)) throw MismatchError("parameters outside the field");
  if (a.is_zero() || b.is_zero()) throw InvalidInput("mu-algebra parameters must be nonzero");
  if (k.sigma(a) != a * b * b) throw InvalidInput("mu-algebra needs sigma(a) = a*b^2");
  FinDimTables t;
  t.dim = 2;
  t.labels = {"1", "y"};
  const Elem one = k.one(), zero = k.zero();
  t.mult = {{{one, zero}, {zero, one}}, {{zero, one}, {a, zero}}};
  t.unit = {one, zero};
  t.sigma = {{one, zero}, {zero, b}};
  return SigmaAlgebra::findim(k, std::move(t), "mu:" + a.str() + "," + b.str());
}

AlgebraPtr make_split(const Field& k, std::size_t m, std::vector<std::size_t> perm) {
  if (m == 0) throw InvalidInput("split algebra needs m >= 1");
  if (perm.empty())
    for (std::size_t i = 0; i < m; ++i) perm.push_back((i + 1) % m);
  if (perm.size() != m) throw InvalidInput("permutation has the wrong length");
  std::vector<std::size_t> sorted = perm;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < m; ++i)
    if (sorted[i] != i) throw InvalidInput("not a permutation");
  FinDimTables t;
  t.dim = m;
  t.mult.assign(m, std::vector<Vec>(m, Vec(m, k.zero())));
  for (std::size_t i = 0; i < m; ++i) t.mult[i][i] = coords1(k, m, i, k.one());
  t.unit.assign(m, k.one());
  for (std::size_t i = 0; i < m; ++i) t.sigma.push_back(coords1(k, m, perm[i], k.one()));
  std::string name = "split:" + std::to_string(m);
  return SigmaAlgebra::findim(k, std::move(t), name);
}

AlgebraPtr change_basis(const AlgebraPtr& A, const Matrix& P) {
  const std::size_t m = A->dim();
  if (P.rows() != m || P.cols() != m) throw InvalidInput("base change matrix has the wrong size");
  auto Pinv = inverse(P);
  if (!Pinv) throw InvalidInput("base change matrix is singular");
  const Field& k = A->field();
  std::vector<AlgElement> f;
  for (std::size_t j = 0; j < m; ++j) f.push_back(A->from_coords(P.col(j)));
  FinDimTables t;
  t.dim = m;
  t.mult.assign(m, std::vector<Vec>(m));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) t.mult[i][j] = *Pinv * (f[i] * f[j]).coords();
  t.unit = *Pinv * A->unit_coords();
  for (std::size_t j = 0; j < m; ++j) t.sigma.push_back(*Pinv * f[j].sigma().coords());
  return SigmaAlgebra::findim(k, std::move(t), A->name());
}

AlgebraPtr product(const AlgebraPtr& a, const AlgebraPtr& b) {
  if (a->field() != b->field()) throw MismatchError("product of algebras over different fields");
  const Field& k = a->field();
  FinDimTables ta = tables_of(a), tb = tables_of(b);
  const std::size_t m = ta.dim, n = tb.dim, d = m + n;
  auto pad = [&](const Vec& v, std::size_t off) {
    Vec r(d, k.zero());
    std::copy(v.begin(), v.end(), r.begin() + static_cast<long>(off));
    return r;
  };
  FinDimTables t;
  t.dim = d;
  t.mult.assign(d, std::vector<Vec>(d, Vec(d, k.zero())));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) t.mult[i][j] = pad(ta.mult[i][j], 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) t.mult[m + i][m + j] = pad(tb.mult[i][j], m);
  t.unit = pad(ta.unit, 0);
  for (std::size_t i = 0; i < n; ++i) t.unit[m + i] = tb.unit[i];
  for (std::size_t i = 0; i < m; ++i) t.sigma.push_back(pad(ta.sigma[i], 0));
  for (std::size_t i = 0; i < n; ++i) t.sigma.push_back(pad(tb.sigma[i], m));
  return SigmaAlgebra::findim(k, std::move(t), a->name() + "x" + b->name());
}

namespace {

AlgebraPtr base_algebra(const Field& k) {
  FinDimTables t;
  t.dim = 1;
  t.labels = {"1"};
  t.mult = {{{k.one()}}};
  t.unit = {k.one()};
  t.sigma = {{k.one()}};
  return SigmaAlgebra::findim(k, std::move(t), "k");
}

std::size_t parse_count(const std::string& s, const char* what) {
  try {
    std::size_t pos = 0;
    long v = std::stol(s, &pos);
    if (pos != s.size() || v <= 0 || v > 64) throw ParseError("");
    return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
    throw ParseError(std::string("bad ") + what + " '" + s + "'");
  }
}

// Splits "sigma(u1)=expr" into generator index and expression.
std::pair<std::size_t, std::string> parse_sigma_clause(const std::string& clause, const std::vector<std::string>& names) {
  auto eq = clause.find('=');
  if (eq == std::string::npos) throw ParseError("expected sigma(<gen>)=<expr> in '" + clause + "'");
  std::string lhs = trim_copy(clause.substr(0, eq));
  if (lhs.rfind("sigma(", 0) != 0 || lhs.back() != ')') throw ParseError("expected sigma(<gen>) in '" + clause + "'");
  std::string gen = trim_copy(lhs.substr(6, lhs.size() - 7));
  auto it = std::find(names.begin(), names.end(), gen);
  if (it == names.end()) throw ParseError("unknown generator '" + gen + "'");
  return {static_cast<std::size_t>(it - names.begin()), clause.substr(eq + 1)};
}

}  // namespace

AlgebraPtr parse_algebra(const Field& k, std::string_view descriptor) {
  std::string d = trim_copy(descriptor);
  if (d == "k") return base_algebra(k);
  auto colon = d.find(':');
  if (colon == std::string::npos) throw ParseError("unknown algebra descriptor '" + d + "'");
  std::string kind = d.substr(0, colon), rest = d.substr(colon + 1);
  if (kind == "mu") {
    auto parts = split_top_level(rest, ',');
    if (parts.size() != 2) throw ParseError("mu descriptor needs two parameters");
    return make_mu_algebra(k, k.parse_element(parts[0]), k.parse_element(parts[1]));
  }
  auto clauses = split_top_level(rest, ';');
  if (kind == "split") {
    std::size_t m = parse_count(trim_copy(clauses[0]), "dimension");
    std::vector<std::size_t> perm;
    for (std::size_t c = 1; c < clauses.size(); ++c) {
      std::string cl = trim_copy(clauses[c]);
      if (cl.rfind("perm=", 0) != 0) throw ParseError("unknown split option '" + cl + "'");
      for (const auto& p : split_top_level(cl.substr(5), ',')) perm.push_back(parse_count(trim_copy(p), "permutation entry") - 1);
    }
    return make_split(k, m, perm);
  }
  if (kind == "laurent" || kind == "freepoly") {
    std::size_t r = parse_count(trim_copy(clauses[0]), "generator count");
    const bool laurent = kind == "laurent";
    std::vector<std::string> names;
    for (std::size_t i = 0; i < r; ++i) names.push_back((laurent ? "u" : "y") + std::to_string(i + 1));
    std::vector<LaurentImage> li;
    std::vector<AffineImage> ai;
    for (std::size_t i = 0; i < r; ++i) {
      Monomial v(r, 0);
      v[i] = 1;
      li.push_back({k.one(), v});
      Vec m(r, k.zero());
      m[i] = k.one();
      ai.push_back({k.zero(), m});
    }
    AlgebraPtr probe = laurent ? SigmaAlgebra::laurent(k, li, names) : SigmaAlgebra::freepoly(k, ai, names);
    for (std::size_t c = 1; c < clauses.size(); ++c) {
      auto [gi, text] = parse_sigma_clause(trim_copy(clauses[c]), names);
      AlgElement e = probe->parse_element(text);
      if (laurent) {
        if (e.poly().size() != 1) throw ParseError("Laurent sigma image must be a single term c*monomial");
        li[gi] = {e.poly().begin()->second, e.poly().begin()->first};
      } else {
        AffineImage im{k.zero(), Vec(r, k.zero())};
        for (const auto& [mono, coef] : e.poly()) {
          long deg = 0;
          std::size_t at = 0;
          for (std::size_t j = 0; j < r; ++j)
            if (mono[j] != 0) {
              deg += mono[j];
              at = j;
            }
          if (deg == 0)
            im.c = coef;
          else if (deg == 1)
            im.m[at] = coef;
          else
            throw ParseError("polynomial sigma image must be affine-linear");
        }
        ai[gi] = im;
      }
    }
    return laurent ? SigmaAlgebra::laurent(k, li, names) : SigmaAlgebra::freepoly(k, ai, names);
  }
  throw ParseError("unknown algebra kind '" + kind + "'");
}

}  // namespace dcoh
