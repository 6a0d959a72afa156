#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dcoh/errors.hpp"
#include "dcoh/qpoly.hpp"

namespace dcoh {

/// Reduced quotient num/den with den monic and gcd(num, den) = 1.
class RatFunc {
 public:
  RatFunc() : den_(1) {}
  RatFunc(QPoly num);  // NOLINT
  RatFunc(QPoly num, QPoly den);

  const QPoly& num() const { return num_; }
  const QPoly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.degree() == 0; }

  RatFunc operator-() const { return RatFunc(-num_, den_, true); }
  friend RatFunc operator+(const RatFunc& a, const RatFunc& b);
  friend RatFunc operator-(const RatFunc& a, const RatFunc& b);
  friend RatFunc operator*(const RatFunc& a, const RatFunc& b);
  friend RatFunc operator/(const RatFunc& a, const RatFunc& b);
  friend bool operator==(const RatFunc& a, const RatFunc& b) { return a.num_ == b.num_ && a.den_ == b.den_; }

  RatFunc inverse() const;
  /// f(t + c)
  RatFunc shift(const mpq_class& c) const { return RatFunc(num_.shift(c), den_.shift(c)); }
  /// f(c t)
  RatFunc scale(const mpq_class& c) const { return RatFunc(num_.scale(c), den_.scale(c)); }
  /// f(t^k)
  RatFunc inflate(unsigned k) const { return RatFunc(num_.inflate(k), den_.inflate(k)); }

  std::string str() const;

 private:
  RatFunc(QPoly num, QPoly den, bool /*already reduced*/) : num_(std::move(num)), den_(std::move(den)) {}
  QPoly num_, den_;
};

/// Arithmetic tables for GF(p^m). Instances are interned and never freed, so raw
/// pointers to them stay valid for the lifetime of the process.
class GFContext {
 public:
  static const GFContext& get(std::uint64_t p, unsigned m);

  std::uint64_t p() const { return p_; }
  unsigned m() const { return m_; }
  std::uint64_t q() const { return q_; }
  /// Monic modulus, coefficients low degree first.
  const std::vector<std::uint64_t>& modulus() const { return modulus_; }

  std::uint64_t add(std::uint64_t a, std::uint64_t b) const;
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const;
  std::uint64_t neg(std::uint64_t a) const;
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const;
  std::uint64_t inv(std::uint64_t a) const;
  std::uint64_t pow(std::uint64_t a, mpz_class e) const;
  /// a^(p^k)
  std::uint64_t frob(std::uint64_t a, unsigned k) const;
  /// Code of w, the class of x modulo the modulus.
  std::uint64_t generator() const;
  /// Discrete log with respect to a fixed primitive element (a != 0).
  std::uint64_t log(std::uint64_t a) const;
  std::uint64_t exp(std::uint64_t e) const;
  std::uint64_t primitive_element() const { return prim_; }

  std::vector<std::uint64_t> digits(std::uint64_t a) const;
  std::uint64_t from_digits(const std::vector<std::uint64_t>& d) const;
  std::string str(std::uint64_t a) const;

 private:
  GFContext(std::uint64_t p, unsigned m);
  std::uint64_t mul_slow(std::uint64_t a, std::uint64_t b) const;

  std::uint64_t p_;
  unsigned m_;
  std::uint64_t q_;
  std::vector<std::uint64_t> modulus_;
  std::uint64_t prim_ = 0;
  std::vector<std::uint32_t> exp_, log_;
};

struct GFElem {
  const GFContext* ctx;
  std::uint64_t code;
  friend bool operator==(const GFElem& a, const GFElem& b) { return a.ctx == b.ctx && a.code == b.code; }
};

/// Element of one of the supported fields. Arithmetic between different carriers
/// throws MismatchError.
class Elem {
 public:
  Elem() : v_(mpq_class(0)) {}
  Elem(mpq_class q) : v_(std::move(q)) {}  // NOLINT
  Elem(RatFunc f) : v_(std::move(f)) {}    // NOLINT
  Elem(GFElem g) : v_(g) {}                // NOLINT

  bool is_rational() const { return v_.index() == 0; }
  bool is_ratfunc() const { return v_.index() == 1; }
  bool is_finite() const { return v_.index() == 2; }
  const mpq_class& rational() const { return std::get<0>(v_); }
  const RatFunc& ratfunc() const { return std::get<1>(v_); }
  const GFElem& finite() const { return std::get<2>(v_); }

  bool is_zero() const;
  bool is_one() const;
  Elem zero_like() const;
  Elem one_like() const;
  /// Integer n in the same carrier.
  Elem from_int(long n) const;

  Elem operator-() const;
  Elem& operator+=(const Elem& o) { return *this = *this + o; }
  Elem& operator-=(const Elem& o) { return *this = *this - o; }
  Elem& operator*=(const Elem& o) { return *this = *this * o; }
  friend Elem operator+(const Elem& a, const Elem& b);
  friend Elem operator-(const Elem& a, const Elem& b);
  friend Elem operator*(const Elem& a, const Elem& b);
  friend Elem operator/(const Elem& a, const Elem& b);
  friend bool operator==(const Elem& a, const Elem& b);
  friend bool operator!=(const Elem& a, const Elem& b) { return !(a == b); }
  Elem inverse() const;
  Elem pow(long e) const;

  std::string str() const;
  /// Total order on elements of one carrier, used for canonical sorting only.
  friend bool canonical_less(const Elem& a, const Elem& b);

 private:
  std::variant<mpq_class, RatFunc, GFElem> v_;
};

/// A field together with its endomorphism σ.
class Field {
 public:
  enum class Kind { Rationals, Shift, Dilate, SubstSquare, Finite };

  static Field parse(std::string_view descriptor);
  static Field rationals();
  static Field shift();
  static Field dilate(const mpq_class& q);
  static Field subst_square();
  static Field finite(std::uint64_t p, unsigned m, unsigned e);

  Kind kind() const { return kind_; }
  std::string descriptor() const;
  std::uint64_t characteristic() const { return gf_ ? gf_->p() : 0; }
  bool inversive() const { return kind_ != Kind::SubstSquare; }
  bool is_finite() const { return kind_ == Kind::Finite; }
  bool is_function_field() const { return kind_ == Kind::Shift || kind_ == Kind::Dilate || kind_ == Kind::SubstSquare; }
  /// Dilation factor (Dilate only).
  const mpq_class& q() const { return q_; }
  const GFContext& gf() const;
  unsigned frob_exponent() const { return e_; }
  /// Number of elements (finite fields only).
  std::uint64_t size() const;
  /// Order of σ on a finite field, m / gcd(m, e).
  unsigned sigma_order() const;

  Elem zero() const;
  Elem one() const;
  Elem from_int(long n) const;
  Elem from_rational(const mpq_class& c) const;
  /// t for the function fields, w for finite fields.
  Elem generator() const;
  bool owns(const Elem& x) const;

  Elem sigma(const Elem& x, unsigned power = 1) const;
  /// y with σ(y) = x, or nothing. Throws Unsupported where undecidable here.
  std::optional<Elem> sigma_preimage(const Elem& x) const;
  /// Square root, or nothing. Throws Unsupported in characteristic 2.
  std::optional<Elem> sqrt(const Elem& x) const;

  /// All elements in code order (finite fields only).
  std::vector<Elem> elements() const;
  Elem element_at(std::uint64_t code) const;
  Elem random(std::mt19937_64& rng, unsigned size = 3) const;

  Elem parse_element(std::string_view text) const;

  friend bool operator==(const Field& a, const Field& b);
  friend bool operator!=(const Field& a, const Field& b) { return !(a == b); }

 private:
  Kind kind_ = Kind::Rationals;
  mpq_class q_ = 1;
  const GFContext* gf_ = nullptr;
  unsigned e_ = 0;
};

}  // namespace dcoh
