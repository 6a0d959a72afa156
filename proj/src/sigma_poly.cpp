#include "dcoh/sigma_poly.hpp"

#include <algorithm>
#include <sstream>

#include "dcoh/expr_parser.hpp"

namespace dcoh {

std::vector<std::string> default_names(const std::string& prefix, unsigned n) {
  std::vector<std::string> v;
  for (unsigned i = 0; i < n; ++i) v.push_back(prefix + std::to_string(i + 1));
  return v;
}

namespace {

std::string var_name(const std::vector<std::string>& names, const SigmaVar& v) {
  std::string base = v.first < names.size() ? names[v.first] : "y" + std::to_string(v.first + 1);
  if (v.second == 0) return base;
  if (v.second == 1) return "s(" + base + ")";
  return "s^" + std::to_string(v.second) + "(" + base + ")";
}

long find_name(const std::vector<std::string>& names, std::string_view s) {
  auto it = std::find(names.begin(), names.end(), s);
  return it == names.end() ? -1 : static_cast<long>(it - names.begin());
}

}  // namespace

// ---------------------------------------------------------------- SigmaPolynomial

SigmaPolynomial::SigmaPolynomial(Field k, unsigned n) : k_(std::move(k)), n_(n) {}

SigmaPolynomial SigmaPolynomial::constant(const Field& k, unsigned n, const Elem& c) {
  SigmaPolynomial p(k, n);
  p.add_term({}, c);
  return p;
}

SigmaPolynomial SigmaPolynomial::variable(const Field& k, unsigned n, unsigned i, unsigned j) {
  if (i >= n) throw InvalidInput("variable index out of range");
  SigmaPolynomial p(k, n);
  p.add_term({{{i, j}, 1}}, k.one());
  return p;
}

int SigmaPolynomial::order() const {
  int o = -1;
  for (const auto& [m, c] : terms_)
    for (const auto& [v, e] : m) o = std::max(o, static_cast<int>(v.second));
  return o;
}

void SigmaPolynomial::add_term(const SigmaMonomial& m, const Elem& c) {
  if (c.is_zero()) return;
  if (!k_.owns(c)) throw MismatchError("coefficient outside the field");
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    terms_.emplace(m, c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) terms_.erase(it);
}

void SigmaPolynomial::check_same(const SigmaPolynomial& o) const {
  if (n_ != o.n_) throw MismatchError("sigma-polynomials of different arity");
  if (k_ != o.k_) throw MismatchError("sigma-polynomials over different fields");
}

SigmaPolynomial SigmaPolynomial::operator-() const {
  SigmaPolynomial r = *this;
  for (auto& [m, c] : r.terms_) c = -c;
  return r;
}

SigmaPolynomial operator+(const SigmaPolynomial& a, const SigmaPolynomial& b) {
  a.check_same(b);
  SigmaPolynomial r = a;
  for (const auto& [m, c] : b.terms_) r.add_term(m, c);
  return r;
}

SigmaPolynomial operator-(const SigmaPolynomial& a, const SigmaPolynomial& b) { return a + (-b); }

SigmaPolynomial operator*(const SigmaPolynomial& a, const SigmaPolynomial& b) {
  a.check_same(b);
  SigmaPolynomial r(a.k_, a.n_);
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) {
      SigmaMonomial m = ma;
      for (const auto& [v, e] : mb) m[v] += e;
      r.add_term(m, ca * cb);
    }
  return r;
}

SigmaPolynomial operator*(const Elem& c, const SigmaPolynomial& a) {
  SigmaPolynomial r(a.k_, a.n_);
  for (const auto& [m, x] : a.terms_) r.add_term(m, c * x);
  return r;
}

bool operator==(const SigmaPolynomial& a, const SigmaPolynomial& b) {
  if (a.n_ != b.n_ || a.k_ != b.k_ || a.terms_.size() != b.terms_.size()) return false;
  auto it = b.terms_.begin();
  for (const auto& [m, c] : a.terms_) {
    if (m != it->first || c != it->second) return false;
    ++it;
  }
  return true;
}

SigmaPolynomial SigmaPolynomial::pow(unsigned e) const {
  SigmaPolynomial r = constant(k_, n_, k_.one()), b = *this;
  while (e) {
    if (e & 1) r = r * b;
    e >>= 1;
    if (e) b = b * b;
  }
  return r;
}

SigmaPolynomial SigmaPolynomial::shift(unsigned times) const {
  SigmaPolynomial r(k_, n_);
  for (const auto& [m, c] : terms_) {
    SigmaMonomial s;
    for (const auto& [v, e] : m) s[{v.first, v.second + times}] = e;
    r.add_term(s, k_.sigma(c, times));
  }
  return r;
}

AlgElement SigmaPolynomial::eval(const std::vector<AlgElement>& point) const {
  if (point.size() != n_) throw MismatchError("point has the wrong arity");
  const AlgebraPtr& A = point.at(0).algebra();
  for (const auto& x : point)
    if (x.algebra() != A) throw MismatchError("point entries from different algebras");
  if (A->field() != k_) throw MismatchError("point over a different field");
  std::map<SigmaVar, AlgElement> cache;
  auto value = [&](const SigmaVar& v) -> const AlgElement& {
    auto it = cache.find(v);
    if (it == cache.end()) it = cache.emplace(v, point[v.first].sigma(v.second)).first;
    return it->second;
  };
  AlgElement r = A->zero();
  for (const auto& [m, c] : terms_) {
    AlgElement t = A->scalar(c);
    for (const auto& [v, e] : m) t = t * value(v).pow(e);
    r += t;
  }
  return r;
}

Elem SigmaPolynomial::eval(const std::vector<Elem>& point) const {
  if (point.size() != n_) throw MismatchError("point has the wrong arity");
  Elem r = k_.zero();
  for (const auto& [m, c] : terms_) {
    Elem t = c;
    for (const auto& [v, e] : m) t = t * k_.sigma(point[v.first], v.second).pow(e);
    r += t;
  }
  return r;
}

std::string SigmaPolynomial::str(const std::vector<std::string>& names) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [m, c] = *it;
    std::string mono;
    for (const auto& [v, e] : m) {
      if (!mono.empty()) mono += "*";
      mono += var_name(names, v);
      if (e != 1) mono += "^" + std::to_string(e);
    }
    std::string cs = c.str();
    bool neg = c.is_rational() && c.rational() < 0;
    if (neg) cs = (-c).str();
    if (!first) os << (neg ? " - " : " + ");
    else if (neg) os << "-";
    first = false;
    bool simple = cs.find_first_of("+-*/ ") == std::string::npos;
    if (mono.empty())
      os << (simple ? cs : "(" + cs + ")");
    else if (cs == "1")
      os << mono;
    else
      os << (simple ? cs : "(" + cs + ")") << "*" << mono;
  }
  return os.str();
}

namespace {

struct PolyBuilder {
  using Value = SigmaPolynomial;
  const Field& k;
  unsigned n;
  const std::vector<std::string>& names;
  Value number(const mpz_class& z) { return SigmaPolynomial::constant(k, n, k.from_rational(mpq_class(z))); }
  Value atom(std::string_view s) {
    long i = find_name(names, s);
    if (i >= 0) return SigmaPolynomial::variable(k, n, static_cast<unsigned>(i));
    return SigmaPolynomial::constant(k, n, k.parse_element(s));
  }
  Value add(const Value& a, const Value& b) { return a + b; }
  Value sub(const Value& a, const Value& b) { return a - b; }
  Value mul(const Value& a, const Value& b) { return a * b; }
  Value div(const Value& a, const Value& b) {
    if (b.order() >= 0 || b.terms().size() != 1) {
      if (b.is_zero()) throw ParseError("division by zero");
      throw ParseError("division by a non-constant sigma-polynomial");
    }
    return b.terms().begin()->second.inverse() * a;
  }
  Value neg(const Value& a) { return -a; }
  Value pow(const Value& a, long e) {
    if (e < 0) {
      if (a.order() < 0 && a.terms().size() == 1) return SigmaPolynomial::constant(k, n, a.terms().begin()->second.pow(e));
      throw ParseError("negative power of a sigma-polynomial");
    }
    return a.pow(static_cast<unsigned>(e));
  }
  Value sigma(const Value& a, unsigned j) { return a.shift(j); }
};

}  // namespace

SigmaPolynomial SigmaPolynomial::parse(const Field& k, unsigned n, std::string_view text, const std::vector<std::string>& names) {
  std::vector<std::string> nm = names.empty() ? default_names("y", n) : names;
  PolyBuilder b{k, n, nm};
  try {
    return parse_expression(text, b);
  } catch (const DivisionByZero&) {
    throw ParseError("division by zero in '" + std::string(text) + "'");
  }
}

// ---------------------------------------------------------------- MultiplicativeFunction

MultiplicativeFunction::MultiplicativeFunction(unsigned n, std::vector<std::vector<long>> alpha) : n_(n), alpha_(std::move(alpha)) {
  for (const auto& a : alpha_)
    if (a.size() != n) throw InvalidInput("exponent vector has the wrong arity");
  while (!alpha_.empty() && std::all_of(alpha_.back().begin(), alpha_.back().end(), [](long x) { return x == 0; })) alpha_.pop_back();
}

std::vector<long> MultiplicativeFunction::component(unsigned i) const {
  std::vector<long> c;
  for (const auto& a : alpha_) c.push_back(a.at(i));
  while (!c.empty() && c.back() == 0) c.pop_back();
  return c;
}

AlgElement MultiplicativeFunction::eval(const std::vector<AlgElement>& point) const {
  if (point.size() != n_ || n_ == 0) throw MismatchError("point has the wrong arity");
  const AlgebraPtr& A = point[0].algebra();
  std::vector<std::optional<AlgElement>> inv(n_);
  for (unsigned i = 0; i < n_; ++i) {
    if (point[i].algebra() != A) throw MismatchError("point entries from different algebras");
    bool used = std::any_of(alpha_.begin(), alpha_.end(), [&](const auto& a) { return a[i] != 0; });
    if (!used) continue;
    inv[i] = point[i].inverse();
    if (!inv[i]) throw InvalidInput("multiplicative function evaluated at a non-unit");
  }
  AlgElement r = A->one();
  for (std::size_t j = 0; j < alpha_.size(); ++j) {
    AlgElement t = A->one();
    for (unsigned i = 0; i < n_; ++i) {
      long e = alpha_[j][i];
      if (e == 0) continue;
      if (e < 0) {
        t = t * inv[i]->pow(-e);
      } else {
        t = t * point[i].pow(e);
      }
    }
    r = r * t.sigma(static_cast<unsigned>(j));
  }
  return r;
}

Elem MultiplicativeFunction::eval(const Field& k, const std::vector<Elem>& point) const {
  if (point.size() != n_) throw MismatchError("point has the wrong arity");
  Elem r = k.one();
  for (std::size_t j = 0; j < alpha_.size(); ++j) {
    Elem t = k.one();
    for (unsigned i = 0; i < n_; ++i) {
      long e = alpha_[j][i];
      if (e == 0) continue;
      if (point[i].is_zero()) throw InvalidInput("multiplicative function evaluated at zero");
      t = t * point[i].pow(e);
    }
    r = r * k.sigma(t, static_cast<unsigned>(j));
  }
  return r;
}

SigmaPolynomial MultiplicativeFunction::relation(const Field& k, const Elem& a) const {
  SigmaPolynomial num = SigmaPolynomial::constant(k, n_, k.one()), den = num;
  for (std::size_t j = 0; j < alpha_.size(); ++j)
    for (unsigned i = 0; i < n_; ++i) {
      long e = alpha_[j][i];
      if (e > 0) num = num * SigmaPolynomial::variable(k, n_, i, static_cast<unsigned>(j)).pow(static_cast<unsigned>(e));
      if (e < 0) den = den * SigmaPolynomial::variable(k, n_, i, static_cast<unsigned>(j)).pow(static_cast<unsigned>(-e));
    }
  return num - a * den;
}

std::string MultiplicativeFunction::str(const std::vector<std::string>& names) const {
  std::vector<std::string> nm = names.empty() ? default_names("y", n_) : names;
  std::string out;
  for (std::size_t j = 0; j < alpha_.size(); ++j)
    for (unsigned i = 0; i < n_; ++i) {
      long e = alpha_[j][i];
      if (e == 0) continue;
      if (!out.empty()) out += "*";
      out += var_name(nm, {i, static_cast<unsigned>(j)});
      if (e != 1) out += "^" + (e < 0 ? "(" + std::to_string(e) + ")" : std::to_string(e));
    }
  return out.empty() ? "1" : out;
}

namespace {

struct MultBuilder {
  using Value = std::map<SigmaVar, long>;
  unsigned n;
  const std::vector<std::string>& names;
  Value number(const mpz_class& z) {
    if (z != 1) throw ParseError("multiplicative functions carry no coefficients");
    return {};
  }
  Value atom(std::string_view s) {
    long i = find_name(names, s);
    if (i < 0) throw ParseError("unknown variable '" + std::string(s) + "'");
    return {{{static_cast<unsigned>(i), 0u}, 1}};
  }
  [[noreturn]] Value add(const Value&, const Value&) { throw ParseError("sums are not multiplicative"); }
  [[noreturn]] Value sub(const Value&, const Value&) { throw ParseError("differences are not multiplicative"); }
  [[noreturn]] Value neg(const Value&) { throw ParseError("signs are not multiplicative"); }
  Value mul(const Value& a, const Value& b) {
    Value r = a;
    for (const auto& [v, e] : b) r[v] += e;
    return r;
  }
  Value div(const Value& a, const Value& b) {
    Value r = a;
    for (const auto& [v, e] : b) r[v] -= e;
    return r;
  }
  Value pow(const Value& a, long e) {
    Value r = a;
    for (auto& [v, x] : r) x *= e;
    return r;
  }
  Value sigma(const Value& a, unsigned j) {
    Value r;
    for (const auto& [v, e] : a) r[{v.first, v.second + j}] += e;
    return r;
  }
};

}  // namespace

MultiplicativeFunction MultiplicativeFunction::parse(unsigned n, std::string_view text, const std::vector<std::string>& names) {
  std::vector<std::string> nm = names.empty() ? default_names("y", n) : names;
  MultBuilder b{n, nm};
  auto v = parse_expression(text, b);
  unsigned l = 0;
  for (const auto& [var, e] : v) l = std::max(l, var.second + 1);
  std::vector<std::vector<long>> alpha(l, std::vector<long>(n, 0));
  for (const auto& [var, e] : v) alpha[var.second][var.first] += e;
  return MultiplicativeFunction(n, alpha);
}

}  // namespace dcoh
