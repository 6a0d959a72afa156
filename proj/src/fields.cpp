#include "dcoh/fields.hpp"

#include <algorithm>
#include <regex>
#include <sstream>

#include "dcoh/expr_parser.hpp"

namespace dcoh {

// ---------------------------------------------------------------- RatFunc

RatFunc::RatFunc(QPoly num) : num_(std::move(num)), den_(1) {}

RatFunc::RatFunc(QPoly num, QPoly den) {
  if (den.is_zero()) throw DivisionByZero();
  if (num.is_zero()) {
    den_ = QPoly(1);
    return;
  }
  QPoly g = gcd(num, den);
  if (g.degree() > 0) {
    num = num.exact_div(g);
    den = den.exact_div(g);
  }
  mpq_class c = den.lc();
  num *= mpq_class(1 / c);
  den *= mpq_class(1 / c);
  num_ = std::move(num);
  den_ = std::move(den);
}

RatFunc operator+(const RatFunc& a, const RatFunc& b) {
  if (a.den_ == b.den_) return RatFunc(a.num_ + b.num_, a.den_);
  return RatFunc(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

RatFunc operator-(const RatFunc& a, const RatFunc& b) {
  if (a.den_ == b.den_) return RatFunc(a.num_ - b.num_, a.den_);
  return RatFunc(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
}

RatFunc operator*(const RatFunc& a, const RatFunc& b) {
  if (a.is_polynomial() && b.is_polynomial()) return RatFunc(a.num_ * b.num_, QPoly(1), true);
  // cross cancellation keeps intermediate sizes down
  QPoly g1 = gcd(a.num_, b.den_), g2 = gcd(b.num_, a.den_);
  return RatFunc(a.num_.exact_div(g1) * b.num_.exact_div(g2), a.den_.exact_div(g2) * b.den_.exact_div(g1));
}

RatFunc operator/(const RatFunc& a, const RatFunc& b) { return a * b.inverse(); }

RatFunc RatFunc::inverse() const {
  if (is_zero()) throw DivisionByZero();
  return RatFunc(den_, num_);
}

std::string RatFunc::str() const {
  if (is_polynomial()) return num_.str();
  std::string n = num_.str(), d = den_.str();
  bool simple_num = num_.degree() <= 0 && num_.coeff(0).get_den() == 1;
  return (simple_num ? n : "(" + n + ")") + "/(" + d + ")";
}

// ---------------------------------------------------------------- Elem

namespace {

[[noreturn]] void mismatch() { throw MismatchError("field element carriers differ"); }

const GFContext* same_ctx(const GFElem& a, const GFElem& b) {
  if (a.ctx != b.ctx) mismatch();
  return a.ctx;
}

}  // namespace

bool Elem::is_zero() const {
  switch (v_.index()) {
    case 0:
      return rational() == 0;
    case 1:
      return ratfunc().is_zero();
    default:
      return finite().code == 0;
  }
}

bool Elem::is_one() const {
  switch (v_.index()) {
    case 0:
      return rational() == 1;
    case 1:
      return ratfunc().is_polynomial() && ratfunc().num() == QPoly(1);
    default:
      return finite().code == 1;
  }
}

Elem Elem::zero_like() const { return from_int(0); }
Elem Elem::one_like() const { return from_int(1); }

Elem Elem::from_int(long n) const {
  switch (v_.index()) {
    case 0:
      return Elem(mpq_class(n));
    case 1:
      return Elem(RatFunc(QPoly(n)));
    default: {
      const GFContext* c = finite().ctx;
      long p = static_cast<long>(c->p());
      long r = ((n % p) + p) % p;
      return Elem(GFElem{c, static_cast<std::uint64_t>(r)});
    }
  }
}

Elem Elem::operator-() const {
  switch (v_.index()) {
    case 0:
      return Elem(mpq_class(-rational()));
    case 1:
      return Elem(-ratfunc());
    default:
      return Elem(GFElem{finite().ctx, finite().ctx->neg(finite().code)});
  }
}

Elem operator+(const Elem& a, const Elem& b) {
  if (a.v_.index() != b.v_.index()) mismatch();
  switch (a.v_.index()) {
    case 0:
      return Elem(mpq_class(a.rational() + b.rational()));
    case 1:
      return Elem(a.ratfunc() + b.ratfunc());
    default: {
      auto c = same_ctx(a.finite(), b.finite());
      return Elem(GFElem{c, c->add(a.finite().code, b.finite().code)});
    }
  }
}

Elem operator-(const Elem& a, const Elem& b) {
  if (a.v_.index() != b.v_.index()) mismatch();
  switch (a.v_.index()) {
    case 0:
      return Elem(mpq_class(a.rational() - b.rational()));
    case 1:
      return Elem(a.ratfunc() - b.ratfunc());
    default: {
      auto c = same_ctx(a.finite(), b.finite());
      return Elem(GFElem{c, c->sub(a.finite().code, b.finite().code)});
    }
  }
}

Elem operator*(const Elem& a, const Elem& b) {
  if (a.v_.index() != b.v_.index()) mismatch();
  switch (a.v_.index()) {
    case 0:
      return Elem(mpq_class(a.rational() * b.rational()));
    case 1:
      return Elem(a.ratfunc() * b.ratfunc());
    default: {
      auto c = same_ctx(a.finite(), b.finite());
      return Elem(GFElem{c, c->mul(a.finite().code, b.finite().code)});
    }
  }
}

Elem operator/(const Elem& a, const Elem& b) {
  if (a.v_.index() != b.v_.index()) mismatch();
  if (b.is_zero()) throw DivisionByZero();
  switch (a.v_.index()) {
    case 0:
      return Elem(mpq_class(a.rational() / b.rational()));
    case 1:
      return Elem(a.ratfunc() / b.ratfunc());
    default: {
      auto c = same_ctx(a.finite(), b.finite());
      return Elem(GFElem{c, c->mul(a.finite().code, c->inv(b.finite().code))});
    }
  }
}

bool operator==(const Elem& a, const Elem& b) {
  if (a.v_.index() != b.v_.index()) mismatch();
  switch (a.v_.index()) {
    case 0:
      return a.rational() == b.rational();
    case 1:
      return a.ratfunc() == b.ratfunc();
    default:
      same_ctx(a.finite(), b.finite());
      return a.finite().code == b.finite().code;
  }
}

Elem Elem::inverse() const {
  if (is_zero()) throw DivisionByZero();
  return one_like() / *this;
}

Elem Elem::pow(long e) const {
  if (is_finite()) {
    if (e < 0 && is_zero()) throw DivisionByZero();
    return Elem(GFElem{finite().ctx, finite().ctx->pow(finite().code, mpz_class(e))});
  }
  Elem b = e < 0 ? inverse() : *this;
  unsigned long n = e < 0 ? static_cast<unsigned long>(-e) : static_cast<unsigned long>(e);
  Elem r = one_like();
  while (n) {
    if (n & 1ul) r *= b;
    n >>= 1ul;
    if (n) b *= b;
  }
  return r;
}

std::string Elem::str() const {
  switch (v_.index()) {
    case 0:
      return rational().get_str();
    case 1:
      return ratfunc().str();
    default:
      return finite().ctx->str(finite().code);
  }
}

namespace {

int cmp_poly(const QPoly& a, const QPoly& b) {
  if (a.degree() != b.degree()) return a.degree() < b.degree() ? -1 : 1;
  for (std::size_t i = a.coeffs().size(); i-- > 0;) {
    int c = cmp(a.coeffs()[i], b.coeffs()[i]);
    if (c) return c < 0 ? -1 : 1;
  }
  return 0;
}

}  // namespace

bool canonical_less(const Elem& a, const Elem& b) {
  if (a.v_.index() != b.v_.index()) return a.v_.index() < b.v_.index();
  switch (a.v_.index()) {
    case 0:
      return a.rational() < b.rational();
    case 1: {
      int c = cmp_poly(a.ratfunc().den(), b.ratfunc().den());
      if (c) return c < 0;
      return cmp_poly(a.ratfunc().num(), b.ratfunc().num()) < 0;
    }
    default:
      return a.finite().code < b.finite().code;
  }
}

// ---------------------------------------------------------------- Field

Field Field::rationals() { return Field(); }

Field Field::shift() {
  Field f;
  f.kind_ = Kind::Shift;
  return f;
}

Field Field::dilate(const mpq_class& q) {
  if (q == 0) throw InvalidInput("dilation factor must be nonzero");
  Field f;
  f.kind_ = Kind::Dilate;
  f.q_ = q;
  return f;
}

Field Field::subst_square() {
  Field f;
  f.kind_ = Kind::SubstSquare;
  return f;
}

Field Field::finite(std::uint64_t p, unsigned m, unsigned e) {
  Field f;
  f.kind_ = Kind::Finite;
  f.gf_ = &GFContext::get(p, m);
  f.e_ = e;
  return f;
}

Field Field::parse(std::string_view d0) {
  std::string d;
  for (char c : d0)
    if (!std::isspace(static_cast<unsigned char>(c))) d.push_back(c);
  if (d == "QQ") return rationals();
  if (d == "QQ(t);shift") return shift();
  if (d == "QQ(t);subst:t^2") return subst_square();
  static const std::regex dil(R"(QQ\(t\);dilate:(-?\d+)(?:/(\d+))?)");
  static const std::regex gf(R"(GF\((\d+)(?:\^(\d+))?\)(?:;frob\^(\d+))?)");
  std::smatch m;
  if (std::regex_match(d, m, dil)) {
    mpq_class q(mpz_class(m[1].str()), m[2].matched ? mpz_class(m[2].str()) : mpz_class(1));
    if (q.get_den() == 0) throw ParseError("zero denominator in dilation factor");
    q.canonicalize();
    return dilate(q);
  }
  if (std::regex_match(d, m, gf)) {
    unsigned long a = std::stoul(m[1].str());
    unsigned e = m[3].matched ? static_cast<unsigned>(std::stoul(m[3].str())) : 1u;
    if (m[2].matched) return finite(a, static_cast<unsigned>(std::stoul(m[2].str())), e);
    // GF(q) with q a prime power
    for (unsigned long p = 2; p <= a; ++p) {
      if (a % p) continue;
      unsigned long r = a;
      unsigned k = 0;
      while (r % p == 0) {
        r /= p;
        ++k;
      }
      if (r != 1) throw InvalidInput("GF order " + std::to_string(a) + " is not a prime power");
      return finite(p, k, e);
    }
    throw InvalidInput("GF order must be a prime power");
  }
  throw ParseError("unknown field descriptor '" + std::string(d0) + "'");
}

std::string Field::descriptor() const {
  switch (kind_) {
    case Kind::Rationals:
      return "QQ";
    case Kind::Shift:
      return "QQ(t);shift";
    case Kind::Dilate:
      return "QQ(t);dilate:" + q_.get_str();
    case Kind::SubstSquare:
      return "QQ(t);subst:t^2";
    case Kind::Finite:
      return "GF(" + std::to_string(gf_->p()) + "^" + std::to_string(gf_->m()) + ");frob^" + std::to_string(e_);
  }
  return "";
}

const GFContext& Field::gf() const {
  if (!gf_) throw Unsupported("not a finite field");
  return *gf_;
}

std::uint64_t Field::size() const { return gf().q(); }

unsigned Field::sigma_order() const {
  unsigned m = gf().m();
  unsigned g = std::gcd(m, e_ % m == 0 ? m : e_ % m);
  return e_ % m == 0 ? 1 : m / g;
}

Elem Field::zero() const { return from_int(0); }
Elem Field::one() const { return from_int(1); }

Elem Field::from_int(long n) const {
  switch (kind_) {
    case Kind::Rationals:
      return Elem(mpq_class(n));
    case Kind::Finite:
      return Elem(GFElem{gf_, 0}).from_int(n);
    default:
      return Elem(RatFunc(QPoly(n)));
  }
}

Elem Field::from_rational(const mpq_class& c) const {
  switch (kind_) {
    case Kind::Rationals:
      return Elem(c);
    case Kind::Finite: {
      mpz_class p = static_cast<unsigned long>(gf_->p());
      if (mpz_divisible_p(c.get_den_mpz_t(), p.get_mpz_t())) throw DivisionByZero("denominator divisible by the characteristic");
      mpz_class n = c.get_num() % p, d = c.get_den() % p;
      if (n < 0) n += p;
      return from_int(static_cast<long>(n.get_si())) / from_int(static_cast<long>(d.get_si()));
    }
    default:
      return Elem(RatFunc(QPoly(c)));
  }
}

Elem Field::generator() const {
  switch (kind_) {
    case Kind::Rationals:
      throw Unsupported("QQ has no generator");
    case Kind::Finite:
      return Elem(GFElem{gf_, gf_->generator()});
    default:
      return Elem(RatFunc(QPoly::x()));
  }
}

bool Field::owns(const Elem& x) const {
  switch (kind_) {
    case Kind::Rationals:
      return x.is_rational();
    case Kind::Finite:
      return x.is_finite() && x.finite().ctx == gf_;
    default:
      return x.is_ratfunc();
  }
}

Elem Field::sigma(const Elem& x, unsigned power) const {
  if (!owns(x)) throw MismatchError("element not in field " + descriptor());
  if (power == 0) return x;
  switch (kind_) {
    case Kind::Rationals:
      return x;
    case Kind::Shift:
      return Elem(x.ratfunc().shift(mpq_class(power)));
    case Kind::Dilate: {
      mpq_class c = 1;
      for (unsigned i = 0; i < power; ++i) c *= q_;
      return Elem(x.ratfunc().scale(c));
    }
    case Kind::SubstSquare: {
      if (power >= 31) throw Unsupported("substitution power too large");
      return Elem(x.ratfunc().inflate(1u << power));
    }
    case Kind::Finite: {
      unsigned long k = (static_cast<unsigned long>(e_) * power) % gf_->m();
      return Elem(GFElem{gf_, gf_->frob(x.finite().code, static_cast<unsigned>(k))});
    }
  }
  return x;
}

std::optional<Elem> Field::sigma_preimage(const Elem& x) const {
  if (!owns(x)) throw MismatchError("element not in field " + descriptor());
  switch (kind_) {
    case Kind::Rationals:
      return x;
    case Kind::Shift:
      return Elem(x.ratfunc().shift(-1));
    case Kind::Dilate:
      return Elem(x.ratfunc().scale(1 / q_));
    case Kind::SubstSquare: {
      const RatFunc& f = x.ratfunc();
      if (!f.num().is_even() || !f.den().is_even()) return std::nullopt;
      return Elem(RatFunc(f.num().deflate2(), f.den().deflate2()));
    }
    case Kind::Finite: {
      unsigned m = gf_->m();
      unsigned k = (m - (e_ % m)) % m;
      return Elem(GFElem{gf_, gf_->frob(x.finite().code, k)});
    }
  }
  return std::nullopt;
}

namespace {

std::optional<mpq_class> rational_sqrt(const mpq_class& c) {
  if (c < 0) return std::nullopt;
  if (!mpz_perfect_square_p(c.get_num_mpz_t()) || !mpz_perfect_square_p(c.get_den_mpz_t())) return std::nullopt;
  mpz_class n, d;
  mpz_sqrt(n.get_mpz_t(), c.get_num_mpz_t());
  mpz_sqrt(d.get_mpz_t(), c.get_den_mpz_t());
  return mpq_class(n, d);
}

// Square root of a monic polynomial, if it is a square.
std::optional<QPoly> monic_poly_sqrt(const QPoly& p) {
  QPoly r(1);
  for (auto& [f, e] : squarefree_decomposition(p)) {
    if (e % 2) return std::nullopt;
    r *= f.pow(e / 2);
  }
  return r;
}

}  // namespace

std::optional<Elem> Field::sqrt(const Elem& x) const {
  if (!owns(x)) throw MismatchError("element not in field " + descriptor());
  switch (kind_) {
    case Kind::Rationals: {
      auto r = rational_sqrt(x.rational());
      if (!r) return std::nullopt;
      return Elem(*r);
    }
    case Kind::Finite: {
      const GFContext& c = *gf_;
      if (c.p() == 2) throw Unsupported("square roots in characteristic 2 are not supported");
      std::uint64_t a = x.finite().code;
      if (a == 0) return x;
      std::uint64_t l = c.log(a);
      if (l % 2) return std::nullopt;
      std::uint64_t r1 = c.exp(l / 2), r2 = c.neg(r1);
      return Elem(GFElem{gf_, std::min(r1, r2)});
    }
    default: {
      const RatFunc& f = x.ratfunc();
      if (f.is_zero()) return x;
      auto lc = rational_sqrt(f.num().lc());
      if (!lc) return std::nullopt;
      auto n = monic_poly_sqrt(f.num().monic());
      if (!n) return std::nullopt;
      auto d = monic_poly_sqrt(f.den());
      if (!d) return std::nullopt;
      QPoly num = *n;
      num *= *lc;
      return Elem(RatFunc(num, *d));
    }
  }
}

std::vector<Elem> Field::elements() const {
  std::vector<Elem> out;
  std::uint64_t q = size();
  out.reserve(q);
  for (std::uint64_t c = 0; c < q; ++c) out.emplace_back(GFElem{gf_, c});
  return out;
}

Elem Field::element_at(std::uint64_t code) const {
  if (code >= size()) throw InvalidInput("element code out of range");
  return Elem(GFElem{gf_, code});
}

Elem Field::random(std::mt19937_64& rng, unsigned sz) const {
  std::uniform_int_distribution<long> coef(-static_cast<long>(sz), static_cast<long>(sz));
  switch (kind_) {
    case Kind::Rationals: {
      long d = 1 + std::abs(coef(rng));
      mpq_class r(coef(rng), d);
      r.canonicalize();
      return Elem(r);
    }
    case Kind::Finite:
      return element_at(std::uniform_int_distribution<std::uint64_t>(0, size() - 1)(rng));
    default: {
      std::uniform_int_distribution<unsigned> deg(0, sz == 0 ? 0 : sz - 1);
      auto poly = [&](unsigned dg) {
        std::vector<mpq_class> c(dg + 1);
        for (auto& v : c) v = coef(rng);
        return QPoly(c);
      };
      QPoly n = poly(deg(rng));
      QPoly dd = poly(deg(rng) / 2);
      if (dd.is_zero()) dd = QPoly(1);
      return Elem(RatFunc(n, dd));
    }
  }
}

namespace {

struct ElemBuilder {
  using Value = Elem;
  const Field& f;
  Value number(const mpz_class& n) const { return f.from_rational(mpq_class(n)); }
  Value atom(std::string_view name) const {
    if (name == "t" && f.is_function_field()) return f.generator();
    if (name == "w" && f.is_finite()) return f.generator();
    throw ParseError("unknown symbol '" + std::string(name) + "' in field " + f.descriptor());
  }
  Value add(const Value& a, const Value& b) const { return a + b; }
  Value sub(const Value& a, const Value& b) const { return a - b; }
  Value mul(const Value& a, const Value& b) const { return a * b; }
  Value div(const Value& a, const Value& b) const { return a / b; }
  Value neg(const Value& a) const { return -a; }
  Value pow(const Value& a, long e) const { return a.pow(e); }
};

}  // namespace

Elem Field::parse_element(std::string_view text) const {
  ElemBuilder b{*this};
  try {
    return parse_expression(text, b);
  } catch (const DivisionByZero&) {
    throw ParseError("division by zero in '" + std::string(text) + "'");
  }
}

bool operator==(const Field& a, const Field& b) {
  return a.kind_ == b.kind_ && a.q_ == b.q_ && a.gf_ == b.gf_ && (a.kind_ != Field::Kind::Finite || a.e_ % a.gf_->m() == b.e_ % b.gf_->m());
}

}  // namespace dcoh
