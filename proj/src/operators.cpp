#include "dcoh/operators.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "dcoh/expr_parser.hpp"

namespace dcoh {

DifferenceOperator::DifferenceOperator(Field k, std::vector<Elem> lambda) : k_(std::move(k)), lambda_(std::move(lambda)) {
  if (lambda_.empty()) throw InvalidInput("difference operator of order 0");
  for (const auto& c : lambda_)
    if (!k_.owns(c)) throw MismatchError("operator coefficient outside the field");
}

std::vector<Elem> DifferenceOperator::coefficients() const {
  std::vector<Elem> c = lambda_;
  c.push_back(k_.one());
  return c;
}

Elem DifferenceOperator::operator()(const Elem& x) const {
  if (!k_.owns(x)) throw MismatchError("operator applied outside its field");
  Elem r = k_.sigma(x, order());
  for (unsigned i = 0; i < order(); ++i)
    if (!lambda_[i].is_zero()) r += lambda_[i] * k_.sigma(x, i);
  return r;
}

AlgElement DifferenceOperator::operator()(const AlgElement& x) const {
  if (x.algebra()->field() != k_) throw MismatchError("operator applied to an algebra over another field");
  AlgElement r = x.sigma(order()), s = x;
  for (unsigned i = 0; i < order(); ++i) {
    if (i > 0) s = s.sigma();
    if (!lambda_[i].is_zero()) r += lambda_[i] * s;
  }
  return r;
}

std::string DifferenceOperator::str() const {
  std::ostringstream os;
  auto power = [](unsigned i) { return i == 0 ? std::string() : i == 1 ? std::string("s") : "s^" + std::to_string(i); };
  os << power(order());
  for (unsigned i = order(); i-- > 0;) {
    const Elem& c = lambda_[i];
    if (c.is_zero()) continue;
    bool neg = c.is_rational() && c.rational() < 0;
    std::string cs = neg ? (-c).str() : c.str();
    os << (neg ? " - " : " + ");
    bool simple = cs.find_first_of("+-*/ ") == std::string::npos;
    if (i == 0)
      os << (simple ? cs : "(" + cs + ")");
    else if (cs == "1")
      os << power(i);
    else
      os << (simple ? cs : "(" + cs + ")") << "*" << power(i);
  }
  return os.str();
}

namespace {

// Ore polynomial: power of s -> coefficient.
struct OpBuilder {
  using Value = std::map<unsigned, Elem>;
  const Field& k;
  static void clean(Value& v) {
    for (auto it = v.begin(); it != v.end();) it = it->second.is_zero() ? v.erase(it) : std::next(it);
  }
  Value constant(const Elem& c) {
    Value v;
    if (!c.is_zero()) v[0] = c;
    return v;
  }
  Value number(const mpz_class& z) { return constant(k.from_rational(mpq_class(z))); }
  Value atom(std::string_view s) {
    if (s == "s") return {{1u, k.one()}};
    return constant(k.parse_element(s));
  }
  Value add(const Value& a, const Value& b) {
    Value r = a;
    for (const auto& [i, c] : b) {
      auto it = r.find(i);
      if (it == r.end())
        r.emplace(i, c);
      else
        it->second += c;
    }
    clean(r);
    return r;
  }
  Value neg(const Value& a) {
    Value r = a;
    for (auto& [i, c] : r) c = -c;
    return r;
  }
  Value sub(const Value& a, const Value& b) { return add(a, neg(b)); }
  Value mul(const Value& a, const Value& b) {
    Value r;
    for (const auto& [i, ca] : a)
      for (const auto& [j, cb] : b) {
        Elem c = ca * k.sigma(cb, i);
        auto it = r.find(i + j);
        if (it == r.end())
          r.emplace(i + j, c);
        else
          it->second += c;
      }
    clean(r);
    return r;
  }
  Value div(const Value& a, const Value& b) {
    if (b.size() != 1 || b.begin()->first != 0) throw ParseError("operators can only be divided by field elements");
    return mul(a, constant(b.begin()->second.inverse()));
  }
  Value pow(const Value& a, long e) {
    if (e < 0) {
      if (a.size() == 1 && a.begin()->first == 0) return constant(a.begin()->second.pow(e));
      throw ParseError("negative power of an operator");
    }
    Value r = constant(k.one());
    for (long i = 0; i < e; ++i) r = mul(r, a);
    return r;
  }
};

}  // namespace

DifferenceOperator DifferenceOperator::parse(const Field& k, std::string_view text) {
  OpBuilder b{k};
  OpBuilder::Value v;
  try {
    v = parse_expression(text, b);
  } catch (const DivisionByZero&) {
    throw ParseError("division by zero in '" + std::string(text) + "'");
  }
  if (v.empty()) throw InvalidInput("zero operator");
  unsigned n = v.rbegin()->first;
  if (n == 0) throw InvalidInput("operator '" + std::string(text) + "' has order 0");
  if (!v.rbegin()->second.is_one()) throw InvalidInput("operator '" + std::string(text) + "' is not monic");
  std::vector<Elem> lambda(n, k.zero());
  for (const auto& [i, c] : v)
    if (i < n) lambda[i] = c;
  return DifferenceOperator(k, std::move(lambda));
}

// ---------------------------------------------------------------- finite fields

namespace {

Field prime_field(const Field& k) { return Field::finite(k.gf().p(), 1, 0); }

Vec to_prime_vec(const Field& fp, const GFContext& ctx, const Elem& x) {
  Vec v;
  for (auto d : ctx.digits(x.finite().code)) v.push_back(fp.from_int(static_cast<long>(d)));
  v.resize(ctx.m(), fp.zero());
  return v;
}

Elem from_prime_vec(const Field& k, const Vec& v) {
  const GFContext& ctx = k.gf();
  std::vector<std::uint64_t> d;
  for (const auto& x : v) d.push_back(x.finite().code);
  return GFElem{&ctx, ctx.from_digits(d)};
}

}  // namespace

Matrix additive_matrix(const DifferenceOperator& L) {
  const Field& k = L.field();
  if (!k.is_finite()) throw Unsupported("F_p-matrix of an operator needs a finite field");
  const GFContext& ctx = k.gf();
  Field fp = prime_field(k);
  std::vector<Vec> cols;
  Elem w = k.generator(), b = k.one();
  for (unsigned i = 0; i < ctx.m(); ++i) {
    cols.push_back(to_prime_vec(fp, ctx, L(b)));
    b = b * w;
  }
  return Matrix::from_columns(cols, fp.zero());
}

namespace {

AdditiveSolution solve_finite(const DifferenceOperator& L, const Elem& a) {
  const Field& k = L.field();
  Field fp = prime_field(k);
  Matrix M = additive_matrix(L);
  AdditiveSolution out;
  for (const auto& v : kernel(M)) out.kernel.push_back(from_prime_vec(k, v));
  auto x = solve(M, to_prime_vec(fp, k.gf(), a));
  if (x)
    out.solution = from_prime_vec(k, *x);
  else
    out.certificate = "not-in-image";
  return out;
}

AdditiveSolution solve_rational(const DifferenceOperator& L, const Elem& a) {
  const Field& k = L.field();
  Elem c = k.one();
  for (const auto& l : L.lambda()) c += l;
  AdditiveSolution out;
  if (!c.is_zero()) {
    out.solution = a / c;
    return out;
  }
  out.kernel.push_back(k.one());
  if (a.is_zero())
    out.solution = k.zero();
  else
    out.certificate = "degenerate-zero-operator";
  return out;
}

// ---------------------------------------------------------------- Abramov

using PolyEq = std::vector<QPoly>;  // sum_i p_i(t) y(t + i)

QPoly lcm_of_denominators(const std::vector<RatFunc>& fs) {
  QPoly d(1);
  for (const auto& f : fs) d = lcm(d, f.den());
  return d;
}

/// Nonnegative integers h with gcd(A(t), B(t + h)) nontrivial.
std::vector<long> dispersion_set(const QPoly& A, const QPoly& B) {
  if (A.degree() <= 0 || B.degree() <= 0) return {};
  long n = A.degree() * B.degree() + 1;
  std::vector<mpq_class> xs, ys;
  for (long h = 0; h <= n; ++h) {
    xs.emplace_back(h);
    ys.push_back(resultant(A, B.shift(mpq_class(h))));
  }
  QPoly R = interpolate(xs, ys);
  std::vector<long> out;
  if (R.is_zero()) throw InvalidInput("dispersion of polynomials with shift-equivalent factors at every offset");
  for (const auto& r : integer_roots(R))
    if (r >= 0) out.push_back(r.get_si());
  return out;
}

/// Binomial change to the Δ basis: y(t+i) = sum_k C(i,k) Δ^k y(t).
long polynomial_degree_bound(const PolyEq& q, const QPoly& rhs) {
  std::size_t n = q.size() - 1;
  std::vector<QPoly> b(n + 1);
  for (std::size_t kk = 0; kk <= n; ++kk) {
    mpz_class binom;
    for (std::size_t i = kk; i <= n; ++i) {
      mpz_bin_uiui(binom.get_mpz_t(), i, kk);
      QPoly term = q[i];
      term *= mpq_class(binom);
      b[kk] += term;
    }
  }
  long top = LONG_MIN;
  for (std::size_t kk = 0; kk <= n; ++kk)
    if (!b[kk].is_zero()) top = std::max(top, b[kk].degree() - static_cast<long>(kk));
  if (top == LONG_MIN) return -1;
  // Indicial polynomial: sum over extremal k of lc(b_k) * d (d-1) ... (d-k+1).
  QPoly P;
  for (std::size_t kk = 0; kk <= n; ++kk) {
    if (b[kk].is_zero() || b[kk].degree() - static_cast<long>(kk) != top) continue;
    QPoly ff(1);
    for (std::size_t j = 0; j < kk; ++j) ff *= QPoly::x() - QPoly(static_cast<long>(j));
    ff *= b[kk].lc();
    P += ff;
  }
  long D = rhs.is_zero() ? -1 : rhs.degree() - top;
  if (P.is_zero()) throw InvalidInput("vanishing indicial polynomial");
  for (const auto& r : integer_roots(P))
    if (r >= 0) D = std::max(D, r.get_si());
  return D;
}

/// Polynomial solutions of sum_i q_i z(t+i) = s with deg z <= D: particular plus kernel.
std::pair<std::optional<QPoly>, std::vector<QPoly>> polynomial_solutions(const PolyEq& q, const QPoly& s, long D) {
  if (D < 0) {
    if (s.is_zero()) return {QPoly(), {}};
    return {std::nullopt, {}};
  }
  long top = s.degree();
  std::vector<QPoly> images;
  for (long e = 0; e <= D; ++e) {
    QPoly img;
    QPoly mono = QPoly::monomial(1, static_cast<std::size_t>(e));
    for (std::size_t i = 0; i < q.size(); ++i)
      if (!q[i].is_zero()) img += q[i] * mono.shift(mpq_class(static_cast<long>(i)));
    top = std::max(top, img.degree());
    images.push_back(img);
  }
  std::size_t rows = static_cast<std::size_t>(std::max(top, 0L)) + 1;
  Elem zero{mpq_class(0)};
  Matrix M(rows, images.size(), zero);
  for (std::size_t e = 0; e < images.size(); ++e)
    for (std::size_t r = 0; r < rows; ++r) M(r, e) = Elem(images[e].coeff(r));
  Vec rhs(rows, zero);
  for (std::size_t r = 0; r < rows; ++r) rhs[r] = Elem(s.coeff(r));
  auto to_poly = [](const Vec& v) {
    std::vector<mpq_class> c;
    for (const auto& x : v) c.push_back(x.rational());
    return QPoly(c);
  };
  std::vector<QPoly> ker;
  for (const auto& v : kernel(M)) ker.push_back(to_poly(v));
  auto x = solve(M, rhs);
  if (!x) return {std::nullopt, ker};
  return {to_poly(*x), ker};
}

}  // namespace

AdditiveSolution solve_shift_rational(const DifferenceOperator& L, const Elem& a, AbramovTrace* trace) {
  const Field& k = L.field();
  if (k.kind() != Field::Kind::Shift) throw Unsupported("rational solver needs QQ(t);shift");
  if (!k.owns(a)) throw MismatchError("right-hand side outside the field");
  std::vector<RatFunc> coeffs;
  for (const auto& c : L.coefficients()) coeffs.push_back(c.ratfunc());
  std::vector<RatFunc> all = coeffs;
  all.push_back(a.ratfunc());
  QPoly den = lcm_of_denominators(all);
  PolyEq p;
  for (const auto& c : coeffs) p.push_back((c * RatFunc(den)).num());
  QPoly r = (a.ratfunc() * RatFunc(den)).num();

  // Drop leading zero coefficients: z(t) = y(t + j0).
  std::size_t j0 = 0;
  while (p[j0].is_zero()) ++j0;
  p.erase(p.begin(), p.begin() + static_cast<long>(j0));
  std::size_t N = p.size() - 1;

  QPoly U(1);
  std::vector<long> H;
  if (N > 0) {
    QPoly A = p[N].shift(mpq_class(-static_cast<long>(N)));
    QPoly B = p[0];
    H = dispersion_set(A, B);
    for (auto it = H.rbegin(); it != H.rend(); ++it) {
      long h = *it;
      QPoly d = gcd(A, B.shift(mpq_class(h)));
      if (d.degree() <= 0) continue;
      A = A.exact_div(d);
      B = B.exact_div(d.shift(mpq_class(-h)));
      for (long i = 0; i <= h; ++i) U *= d.shift(mpq_class(-i));
    }
  }

  // z = U y; multiply through by lcm of the shifted denominators.
  QPoly Lden(1);
  for (std::size_t i = 0; i <= N; ++i) Lden = lcm(Lden, U.shift(mpq_class(static_cast<long>(i))));
  PolyEq q;
  for (std::size_t i = 0; i <= N; ++i) q.push_back(p[i] * Lden.exact_div(U.shift(mpq_class(static_cast<long>(i)))));
  QPoly s = r * Lden;
  QPoly g = s;
  for (const auto& qi : q) g = gcd(g, qi);
  if (!g.is_zero() && g.degree() > 0) {
    for (auto& qi : q) qi = qi.exact_div(g);
    s = s.exact_div(g);
  }
  long D = polynomial_degree_bound(q, s);
  if (trace) {
    trace->lowest_index = j0;
    trace->dispersion = H;
    trace->universal_denominator = U;
    trace->degree_bound = D;
  }
  auto [part, ker] = polynomial_solutions(q, s, D);
  auto back = [&](const QPoly& z) {
    RatFunc y(z, U);
    return Elem(y.shift(mpq_class(-static_cast<long>(j0))));
  };
  AdditiveSolution out;
  for (const auto& z : ker) out.kernel.push_back(back(z));
  if (part)
    out.solution = back(*part);
  else
    out.certificate = "no-rational-solution";
  return out;
}

AdditiveSolution solve_additive(const DifferenceOperator& L, const Elem& a) {
  const Field& k = L.field();
  if (!k.owns(a)) throw MismatchError("right-hand side outside the field");
  switch (k.kind()) {
    case Field::Kind::Finite:
      return solve_finite(L, a);
    case Field::Kind::Rationals:
      return solve_rational(L, a);
    case Field::Kind::Shift:
      return solve_shift_rational(L, a);
    default:
      throw Unsupported("solve_additive is not decided over " + k.descriptor());
  }
}

AdditiveSolution additive_equivalent(const DifferenceOperator& L, const Elem& a, const Elem& a2) {
  return solve_additive(L, a2 - a);
}

AdditiveH1 classify_additive_h1(const DifferenceOperator& L) {
  const Field& k = L.field();
  if (!k.is_finite()) throw Unsupported("explicit k/L(k) needs a finite field");
  const GFContext& ctx = k.gf();
  Field fp = prime_field(k);
  Matrix M = additive_matrix(L);
  unsigned m = ctx.m();
  AdditiveH1 out;
  out.image_dim = static_cast<unsigned>(rank(M));
  out.kernel_dim = m - out.image_dim;
  // Complement of the image spanned greedily by unit vectors.
  std::vector<Vec> span;
  for (unsigned j = 0; j < m; ++j) span.push_back(M.col(j));
  std::vector<Vec> complement;
  std::size_t current = out.image_dim;
  for (unsigned i = 0; i < m && complement.size() < out.kernel_dim; ++i) {
    Vec e(m, fp.zero());
    e[i] = fp.one();
    span.push_back(e);
    std::size_t rk = rank(Matrix::from_columns(span, fp.zero()));
    if (rk > current) {
      current = rk;
      complement.push_back(e);
    } else {
      span.pop_back();
    }
  }
  std::uint64_t p = ctx.p();
  out.count = 1;
  for (unsigned i = 0; i < out.kernel_dim; ++i) out.count *= p;
  for (std::uint64_t code = 0; code < out.count; ++code) {
    Vec v(m, fp.zero());
    std::uint64_t c = code;
    for (const auto& e : complement) {
      Elem d = fp.from_int(static_cast<long>(c % p));
      c /= p;
      for (unsigned i = 0; i < m; ++i) v[i] += d * e[i];
    }
    out.representatives.push_back(from_prime_vec(k, v));
  }
  return out;
}

}  // namespace dcoh
