#include "dcoh/qpoly.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace dcoh {

QPoly::QPoly(std::vector<mpq_class> coeffs) : c_(std::move(coeffs)) { trim(); }

QPoly::QPoly(const mpq_class& c) {
  if (c != 0) c_.push_back(c);
}

QPoly QPoly::x() { return monomial(1, 1); }

QPoly QPoly::monomial(const mpq_class& c, std::size_t deg) {
  if (c == 0) return {};
  std::vector<mpq_class> v(deg + 1);
  v[deg] = c;
  return QPoly(std::move(v));
}

void QPoly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

QPoly QPoly::operator-() const {
  QPoly r = *this;
  for (auto& c : r.c_) c = -c;
  return r;
}

QPoly& QPoly::operator+=(const QPoly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
  trim();
  return *this;
}

QPoly& QPoly::operator-=(const QPoly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
  trim();
  return *this;
}

QPoly& QPoly::operator*=(const QPoly& o) {
  if (is_zero() || o.is_zero()) {
    c_.clear();
    return *this;
  }
  std::vector<mpq_class> r(c_.size() + o.c_.size() - 1);
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    for (std::size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
  }
  c_ = std::move(r);
  trim();
  return *this;
}

QPoly& QPoly::operator*=(const mpq_class& c) {
  if (c == 0) {
    c_.clear();
    return *this;
  }
  for (auto& x : c_) x *= c;
  return *this;
}

std::pair<QPoly, QPoly> QPoly::divmod(const QPoly& d) const {
  if (d.is_zero()) throw std::domain_error("polynomial division by zero");
  if (degree() < d.degree()) return {QPoly(), *this};
  std::vector<mpq_class> r = c_;
  std::vector<mpq_class> q(c_.size() - d.c_.size() + 1);
  const mpq_class inv = 1 / d.lc();
  const std::size_t dd = d.c_.size() - 1;
  for (std::size_t k = q.size(); k-- > 0;) {
    mpq_class f = r[k + dd] * inv;
    q[k] = f;
    if (f == 0) continue;
    for (std::size_t j = 0; j <= dd; ++j) r[k + j] -= f * d.c_[j];
  }
  return {QPoly(std::move(q)), QPoly(std::move(r))};
}

QPoly QPoly::exact_div(const QPoly& d) const {
  auto [q, r] = divmod(d);
  if (!r.is_zero()) throw std::domain_error("inexact polynomial division");
  return q;
}

QPoly QPoly::monic() const {
  if (is_zero()) return {};
  QPoly r = *this;
  r *= mpq_class(1 / lc());
  return r;
}

QPoly QPoly::derivative() const {
  if (c_.size() <= 1) return {};
  std::vector<mpq_class> r(c_.size() - 1);
  for (std::size_t i = 1; i < c_.size(); ++i) r[i - 1] = c_[i] * static_cast<long>(i);
  return QPoly(std::move(r));
}

QPoly QPoly::pow(unsigned e) const {
  QPoly r(1), b = *this;
  while (e) {
    if (e & 1u) r *= b;
    e >>= 1u;
    if (e) b *= b;
  }
  return r;
}

mpq_class QPoly::eval(const mpq_class& x) const {
  mpq_class r = 0;
  for (std::size_t i = c_.size(); i-- > 0;) r = r * x + c_[i];
  return r;
}

QPoly QPoly::shift(const mpq_class& c) const {
  // Horner in the ring: p(x + c)
  QPoly r;
  const QPoly lin(std::vector<mpq_class>{c, 1});
  for (std::size_t i = c_.size(); i-- > 0;) {
    r *= lin;
    r += QPoly(c_[i]);
  }
  return r;
}

QPoly QPoly::scale(const mpq_class& c) const {
  std::vector<mpq_class> r = c_;
  mpq_class p = 1;
  for (auto& x : r) {
    x *= p;
    p *= c;
  }
  return QPoly(std::move(r));
}

QPoly QPoly::inflate(unsigned k) const {
  if (is_zero()) return {};
  std::vector<mpq_class> r((c_.size() - 1) * k + 1);
  for (std::size_t i = 0; i < c_.size(); ++i) r[i * k] = c_[i];
  return QPoly(std::move(r));
}

bool QPoly::is_even() const {
  for (std::size_t i = 1; i < c_.size(); i += 2)
    if (c_[i] != 0) return false;
  return true;
}

QPoly QPoly::deflate2() const {
  if (!is_even()) throw std::domain_error("deflate2 of a non-even polynomial");
  std::vector<mpq_class> r;
  for (std::size_t i = 0; i < c_.size(); i += 2) r.push_back(c_[i]);
  return QPoly(std::move(r));
}

std::vector<mpz_class> QPoly::primitive_integer() const {
  if (is_zero()) return {};
  mpz_class den = 1;
  for (const auto& c : c_) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
  std::vector<mpz_class> r;
  mpz_class g = 0;
  for (const auto& c : c_) {
    mpz_class v = c.get_num() * (den / c.get_den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
    r.push_back(v);
  }
  if (r.back() < 0) g = -g;
  for (auto& v : r) v /= g;
  return r;
}

std::string QPoly::str(const std::string& var) const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = c_.size(); i-- > 0;) {
    const mpq_class& c = c_[i];
    if (c == 0) continue;
    mpq_class a = abs(c);
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    const bool unit = (a == 1);
    if (i == 0) {
      os << a.get_str();
      continue;
    }
    if (!unit) {
      if (a.get_den() != 1)
        os << "(" << a.get_str() << ")*";
      else
        os << a.get_str() << "*";
    }
    os << var;
    if (i > 1) os << "^" << i;
  }
  return os.str();
}

QPoly gcd(const QPoly& a0, const QPoly& b0) {
  QPoly a = a0, b = b0;
  while (!b.is_zero()) {
    QPoly r = a.divmod(b).second;
    a = std::move(b);
    b = r.monic();
  }
  return a.monic();
}

QPoly lcm(const QPoly& a, const QPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  return (a * b).exact_div(gcd(a, b)).monic();
}

std::vector<std::pair<QPoly, unsigned>> squarefree_decomposition(const QPoly& p0) {
  // Yun's algorithm.
  std::vector<std::pair<QPoly, unsigned>> out;
  QPoly p = p0.monic();
  if (p.degree() <= 0) return out;
  QPoly d = p.derivative();
  QPoly a = gcd(p, d);
  QPoly b = p.exact_div(a);
  QPoly c = d.exact_div(a);
  QPoly e = c - b.derivative();
  unsigned i = 1;
  while (b.degree() > 0) {
    QPoly f = gcd(b, e);
    if (f.degree() > 0) out.emplace_back(f, i);
    b = b.exact_div(f);
    c = e.exact_div(f);
    e = c - b.derivative();
    ++i;
  }
  return out;
}

mpq_class resultant(const QPoly& a, const QPoly& b) {
  if (a.is_zero() || b.is_zero()) return 0;
  const long m = a.degree(), n = b.degree();
  if (n == 0) {
    mpq_class r = 1;
    for (long i = 0; i < m; ++i) r *= b.lc();
    return r;
  }
  if (m < n) {
    mpq_class r = resultant(b, a);
    return ((m * n) % 2) ? mpq_class(-r) : r;
  }
  QPoly r = a.divmod(b).second;
  if (r.is_zero()) return 0;
  mpq_class f = 1;
  for (long i = 0; i < m - r.degree(); ++i) f *= b.lc();
  if ((m * n) % 2) f = -f;
  return f * resultant(b, r);
}

namespace {

std::vector<QPoly> sturm_chain(const QPoly& p) {
  std::vector<QPoly> s{p, p.derivative()};
  while (!s.back().is_zero()) {
    QPoly r = -(s[s.size() - 2].divmod(s.back()).second);
    if (r.is_zero()) break;
    s.push_back(r);
  }
  return s;
}

std::size_t sign_changes(const std::vector<QPoly>& chain, const mpq_class& x) {
  std::size_t n = 0;
  int last = 0;
  for (const auto& q : chain) {
    int s = sgn(q.eval(x));
    if (s == 0) continue;
    if (last != 0 && s != last) ++n;
    last = s;
  }
  return n;
}

}  // namespace

std::size_t sturm_count(const QPoly& p, const mpq_class& lo, const mpq_class& hi) {
  if (p.degree() <= 0) return 0;
  QPoly sf = p.exact_div(gcd(p, p.derivative()));
  auto chain = sturm_chain(sf);
  std::size_t a = sign_changes(chain, lo), b = sign_changes(chain, hi);
  return a > b ? a - b : 0;
}

std::vector<mpz_class> integer_roots(const QPoly& p) {
  std::vector<mpz_class> roots;
  if (p.degree() <= 0) return roots;
  QPoly sf = p.exact_div(gcd(p, p.derivative()));
  auto chain = sturm_chain(sf);
  // Cauchy bound
  mpq_class bound = 0;
  for (std::size_t i = 0; i + 1 < sf.coeffs().size(); ++i) bound = std::max(bound, mpq_class(abs(sf.coeffs()[i] / sf.lc())));
  mpz_class B = bound.get_num() / bound.get_den() + 2;
  struct Iv {
    mpz_class lo, hi;
  };
  std::vector<Iv> stack{{-B, B}};
  while (!stack.empty()) {
    Iv iv = stack.back();
    stack.pop_back();
    std::size_t n = sign_changes(chain, iv.lo) - sign_changes(chain, iv.hi);
    if (n == 0) continue;
    if (iv.hi - iv.lo == 1) {
      if (sf.eval(iv.hi) == 0) roots.push_back(iv.hi);
      continue;
    }
    mpz_class mid = (iv.lo + iv.hi) / 2;
    if (mid <= iv.lo) mid = iv.lo + 1;
    stack.push_back({iv.lo, mid});
    stack.push_back({mid, iv.hi});
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

QPoly interpolate(const std::vector<mpq_class>& xs, const std::vector<mpq_class>& ys) {
  // Newton divided differences.
  const std::size_t n = xs.size();
  std::vector<mpq_class> dd = ys;
  for (std::size_t j = 1; j < n; ++j)
    for (std::size_t i = n - 1; i >= j; --i) {
      dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - j]);
      if (i == j) break;
    }
  QPoly r;
  for (std::size_t i = n; i-- > 0;) {
    r *= QPoly(std::vector<mpq_class>{-xs[i], 1});
    r += QPoly(dd[i]);
  }
  return r;
}

}  // namespace dcoh
