#include <map>
#include <memory>
#include <mutex>
#include <sstream>

#include "dcoh/fields.hpp"

namespace dcoh {

namespace {

using Poly = std::vector<std::uint64_t>;  // coefficients mod p, low degree first

// Moduli shipped per (p, m). Every entry is checked for irreducibility and
// primitivity at load; a failing entry falls back to the search below.
const std::map<std::pair<std::uint64_t, unsigned>, Poly>& modulus_table() {
  static const std::map<std::pair<std::uint64_t, unsigned>, Poly> t = {
      {{2, 2}, {1, 1, 1}},
      {{2, 3}, {1, 1, 0, 1}},
      {{2, 4}, {1, 1, 0, 0, 1}},
      {{2, 5}, {1, 0, 1, 0, 0, 1}},
      {{2, 6}, {1, 1, 0, 1, 1, 0, 1}},
      {{3, 2}, {2, 2, 1}},
      {{3, 3}, {1, 2, 0, 1}},
      {{3, 4}, {2, 0, 0, 2, 1}},
      {{3, 5}, {1, 2, 0, 0, 0, 1}},
      {{5, 2}, {2, 4, 1}},
      {{5, 3}, {3, 3, 0, 1}},
      {{5, 4}, {2, 4, 4, 0, 1}},
      {{7, 2}, {3, 6, 1}},
      {{7, 3}, {4, 0, 6, 1}},
      {{11, 2}, {2, 7, 1}},
      {{13, 2}, {2, 12, 1}},
  };
  return t;
}

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

Poly pmod(Poly a, const Poly& f, std::uint64_t p) {
  trim(a);
  const std::size_t df = f.size() - 1;
  const std::uint64_t inv_lc = [&] {
    std::uint64_t r = 1, b = f.back() % p, e = p - 2;
    while (e) {
      if (e & 1) r = r * b % p;
      b = b * b % p;
      e >>= 1;
    }
    return r;
  }();
  while (a.size() > df) {
    std::uint64_t c = a.back() * inv_lc % p;
    std::size_t shift = a.size() - 1 - df;
    for (std::size_t i = 0; i <= df; ++i) a[shift + i] = (a[shift + i] + (p - c) * f[i]) % p;
    trim(a);
  }
  return a;
}

Poly pmulmod(const Poly& a, const Poly& b, const Poly& f, std::uint64_t p) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  return pmod(std::move(r), f, p);
}

Poly ppowmod(Poly b, mpz_class e, const Poly& f, std::uint64_t p) {
  Poly r{1};
  b = pmod(std::move(b), f, p);
  while (e > 0) {
    if (mpz_odd_p(e.get_mpz_t())) r = pmulmod(r, b, f, p);
    e >>= 1;
    if (e > 0) b = pmulmod(b, b, f, p);
  }
  return r;
}

Poly pgcd(Poly a, Poly b, std::uint64_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = pmod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  if (n > 1) out.push_back(n);
  return out;
}

bool is_irreducible(const Poly& f, std::uint64_t p) {
  const unsigned m = static_cast<unsigned>(f.size() - 1);
  if (m == 1) return true;
  Poly x{0, 1};
  Poly xp = x;
  for (unsigned i = 1; i <= m / 2; ++i) {
    xp = ppowmod(xp, mpz_class(static_cast<unsigned long>(p)), f, p);
    Poly d = xp;
    d.resize(std::max<std::size_t>(d.size(), 2), 0);
    d[1] = (d[1] + p - 1) % p;
    trim(d);
    if (d.empty()) return false;
    if (pgcd(f, d, p).size() > 1) return false;
  }
  return true;
}

bool is_primitive(const Poly& f, std::uint64_t p, std::uint64_t q) {
  Poly x{0, 1};
  for (std::uint64_t r : prime_factors(q - 1)) {
    Poly v = ppowmod(x, mpz_class(static_cast<unsigned long>((q - 1) / r)), f, p);
    if (v == Poly{1}) return false;
  }
  return ppowmod(x, mpz_class(static_cast<unsigned long>(q - 1)), f, p) == Poly{1};
}

Poly search_modulus(std::uint64_t p, unsigned m, std::uint64_t q) {
  // Lexicographically smallest monic primitive polynomial of degree m.
  Poly f(m + 1, 0);
  f[m] = 1;
  std::uint64_t total = q;
  for (std::uint64_t code = 1; code < total; ++code) {
    std::uint64_t c = code;
    for (unsigned i = 0; i < m; ++i) {
      f[i] = c % p;
      c /= p;
    }
    if (f[0] == 0) continue;
    if (is_irreducible(f, p) && is_primitive(f, p, q)) return f;
  }
  throw InvalidInput("no primitive polynomial found");
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

constexpr std::uint64_t kTableLimit = std::uint64_t(1) << 20;

}  // namespace

const GFContext& GFContext::get(std::uint64_t p, unsigned m) {
  static std::mutex mu;
  static std::map<std::pair<std::uint64_t, unsigned>, std::unique_ptr<GFContext>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{p, m}];
  if (!slot) slot.reset(new GFContext(p, m));
  return *slot;
}

GFContext::GFContext(std::uint64_t p, unsigned m) : p_(p), m_(m) {
  if (!is_prime(p)) throw InvalidInput("GF characteristic " + std::to_string(p) + " is not prime");
  if (m == 0) throw InvalidInput("GF degree must be positive");
  q_ = 1;
  for (unsigned i = 0; i < m; ++i) {
    if (q_ > (std::uint64_t(1) << 31) / p) throw Unsupported("finite field too large");
    q_ *= p;
  }
  if (m == 1) {
    // x - g for the least primitive root g, so that w = g generates.
    std::uint64_t g = 1;
    if (p > 2) {
      auto modpow = [p](std::uint64_t b, std::uint64_t e) {
        std::uint64_t r = 1;
        for (b %= p; e; e >>= 1, b = b * b % p)
          if (e & 1) r = r * b % p;
        return r;
      };
      auto fs = prime_factors(p - 1);
      for (g = 2; g < p; ++g) {
        bool ok = true;
        for (auto r : fs)
          if (modpow(g, (p - 1) / r) == 1) ok = false;
        if (ok) break;
      }
    }
    modulus_ = {(p - g) % p, 1};
  } else {
    auto it = modulus_table().find({p, m});
    if (it != modulus_table().end() && is_irreducible(it->second, p) && is_primitive(it->second, p, q_))
      modulus_ = it->second;
    else
      modulus_ = search_modulus(p, m, q_);
  }
  prim_ = generator();
  if (q_ <= kTableLimit) {
    exp_.resize(q_ - 1);
    log_.assign(q_, 0);
    std::uint64_t x = 1;
    for (std::uint64_t i = 0; i + 1 < q_; ++i) {
      exp_[i] = static_cast<std::uint32_t>(x);
      log_[x] = static_cast<std::uint32_t>(i);
      x = mul_slow(x, prim_);
    }
  }
}

std::vector<std::uint64_t> GFContext::digits(std::uint64_t a) const {
  std::vector<std::uint64_t> d(m_);
  for (unsigned i = 0; i < m_; ++i) {
    d[i] = a % p_;
    a /= p_;
  }
  return d;
}

std::uint64_t GFContext::from_digits(const std::vector<std::uint64_t>& d) const {
  std::uint64_t a = 0;
  for (std::size_t i = d.size(); i-- > 0;) a = a * p_ + d[i] % p_;
  return a;
}

std::uint64_t GFContext::add(std::uint64_t a, std::uint64_t b) const {
  if (m_ == 1) return (a + b) % p_;
  std::uint64_t r = 0, w = 1;
  while (a || b) {
    r += ((a % p_ + b % p_) % p_) * w;
    a /= p_;
    b /= p_;
    w *= p_;
  }
  return r;
}

std::uint64_t GFContext::neg(std::uint64_t a) const {
  if (m_ == 1) return (p_ - a) % p_;
  std::uint64_t r = 0, w = 1;
  while (a) {
    r += ((p_ - a % p_) % p_) * w;
    a /= p_;
    w *= p_;
  }
  return r;
}

std::uint64_t GFContext::sub(std::uint64_t a, std::uint64_t b) const { return add(a, neg(b)); }

std::uint64_t GFContext::mul_slow(std::uint64_t a, std::uint64_t b) const {
  if (m_ == 1) return a * b % p_;
  Poly pa = digits(a), pb = digits(b);
  trim(pa);
  trim(pb);
  Poly r = pmulmod(pa, pb, modulus_, p_);
  r.resize(m_, 0);
  return from_digits(r);
}

std::uint64_t GFContext::mul(std::uint64_t a, std::uint64_t b) const {
  if (a == 0 || b == 0) return 0;
  if (!exp_.empty()) return exp_[(static_cast<std::uint64_t>(log_[a]) + log_[b]) % (q_ - 1)];
  return mul_slow(a, b);
}

std::uint64_t GFContext::inv(std::uint64_t a) const {
  if (a == 0) throw DivisionByZero();
  if (!exp_.empty()) return exp_[(q_ - 1 - log_[a]) % (q_ - 1)];
  return pow(a, mpz_class(static_cast<unsigned long>(q_ - 2)));
}

std::uint64_t GFContext::pow(std::uint64_t a, mpz_class e) const {
  if (e < 0) {
    a = inv(a);
    e = -e;
  }
  if (a == 0) return e == 0 ? 1 : 0;
  mpz_class n = static_cast<unsigned long>(q_ - 1);
  e = e % n;
  if (!exp_.empty()) {
    mpz_class l = (mpz_class(static_cast<unsigned long>(log_[a])) * e) % n;
    return exp_[l.get_ui()];
  }
  std::uint64_t r = 1, b = a;
  while (e > 0) {
    if (mpz_odd_p(e.get_mpz_t())) r = mul_slow(r, b);
    e >>= 1;
    if (e > 0) b = mul_slow(b, b);
  }
  return r;
}

std::uint64_t GFContext::frob(std::uint64_t a, unsigned k) const {
  k %= m_;
  if (k == 0 || a == 0) return a;
  mpz_class e;
  mpz_ui_pow_ui(e.get_mpz_t(), p_, k);
  return pow(a, e);
}

std::uint64_t GFContext::generator() const {
  if (m_ == 1) return (p_ - modulus_[0]) % p_;
  return p_;
}

std::uint64_t GFContext::log(std::uint64_t a) const {
  if (a == 0) throw DivisionByZero("log of zero");
  if (exp_.empty()) throw Unsupported("discrete logarithm needs a tabled field");
  return log_[a];
}

std::uint64_t GFContext::exp(std::uint64_t e) const {
  if (exp_.empty()) return pow(prim_, mpz_class(static_cast<unsigned long>(e)));
  return exp_[e % (q_ - 1)];
}

std::string GFContext::str(std::uint64_t a) const {
  if (m_ == 1) return std::to_string(a);
  if (a == 0) return "0";
  auto d = digits(a);
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = d.size(); i-- > 0;) {
    if (d[i] == 0) continue;
    if (!first) os << " + ";
    first = false;
    if (i == 0) {
      os << d[i];
      continue;
    }
    if (d[i] != 1) os << d[i] << "*";
    os << "w";
    if (i > 1) os << "^" << i;
  }
  return os.str();
}

}  // namespace dcoh
