#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace dcoh {

/// Dense univariate polynomial over Q, coefficients stored low degree first.
/// The zero polynomial has an empty coefficient vector.
class QPoly {
 public:
  QPoly() = default;
  explicit QPoly(std::vector<mpq_class> coeffs);
  QPoly(const mpq_class& c);  // NOLINT: constants convert implicitly
  QPoly(long c) : QPoly(mpq_class(c)) {}  // NOLINT

  static QPoly x();
  static QPoly monomial(const mpq_class& c, std::size_t deg);

  bool is_zero() const { return c_.empty(); }
  bool is_constant() const { return c_.size() <= 1; }
  /// Degree, or -1 for the zero polynomial.
  long degree() const { return static_cast<long>(c_.size()) - 1; }
  const mpq_class& lc() const { return c_.back(); }
  mpq_class coeff(std::size_t i) const { return i < c_.size() ? c_[i] : mpq_class(0); }
  const std::vector<mpq_class>& coeffs() const { return c_; }

  QPoly operator-() const;
  QPoly& operator+=(const QPoly& o);
  QPoly& operator-=(const QPoly& o);
  QPoly& operator*=(const QPoly& o);
  QPoly& operator*=(const mpq_class& c);
  friend QPoly operator+(QPoly a, const QPoly& b) { return a += b; }
  friend QPoly operator-(QPoly a, const QPoly& b) { return a -= b; }
  friend QPoly operator*(QPoly a, const QPoly& b) { return a *= b; }
  friend bool operator==(const QPoly& a, const QPoly& b) { return a.c_ == b.c_; }
  friend bool operator!=(const QPoly& a, const QPoly& b) { return !(a == b); }

  /// Euclidean division; throws std::domain_error on division by zero.
  std::pair<QPoly, QPoly> divmod(const QPoly& d) const;
  /// Exact quotient; throws if the division leaves a remainder.
  QPoly exact_div(const QPoly& d) const;

  QPoly monic() const;
  QPoly derivative() const;
  QPoly pow(unsigned e) const;
  mpq_class eval(const mpq_class& x) const;

  /// p(x + c)
  QPoly shift(const mpq_class& c) const;
  /// p(c x)
  QPoly scale(const mpq_class& c) const;
  /// p(x^k)
  QPoly inflate(unsigned k) const;
  /// p(-x) == p(x)
  bool is_even() const;
  /// Inverse of inflate(2) for an even polynomial.
  QPoly deflate2() const;

  /// Primitive integer polynomial associated to *this (positive leading coefficient).
  std::vector<mpz_class> primitive_integer() const;

  std::string str(const std::string& var = "t") const;

 private:
  void trim();
  std::vector<mpq_class> c_;
};

/// Monic gcd (zero if both arguments are zero).
QPoly gcd(const QPoly& a, const QPoly& b);
QPoly lcm(const QPoly& a, const QPoly& b);

/// Squarefree decomposition of a monic polynomial: pairs (f_i, i) with p = prod f_i^i.
std::vector<std::pair<QPoly, unsigned>> squarefree_decomposition(const QPoly& p);

/// Resultant Res_x(a, b).
mpq_class resultant(const QPoly& a, const QPoly& b);

/// Distinct integer roots, ascending.
std::vector<mpz_class> integer_roots(const QPoly& p);

/// Number of distinct real roots in the half-open interval (lo, hi], via Sturm sequences.
std::size_t sturm_count(const QPoly& p, const mpq_class& lo, const mpq_class& hi);

/// Polynomial through the given points (distinct abscissae).
QPoly interpolate(const std::vector<mpq_class>& xs, const std::vector<mpq_class>& ys);

}  // namespace dcoh
