#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "dcoh/algebras.hpp"
#include "dcoh/fields.hpp"

namespace dcoh {

/// (i, j) stands for σ^j(y_i); a monomial maps variables to positive exponents.
using SigmaVar = std::pair<unsigned, unsigned>;
using SigmaMonomial = std::map<SigmaVar, unsigned>;

/// Element of k{y_1..y_n}. Terms are kept in map order with no zero coefficients.
class SigmaPolynomial {
 public:
  SigmaPolynomial(Field k, unsigned n);
  static SigmaPolynomial constant(const Field& k, unsigned n, const Elem& c);
  static SigmaPolynomial variable(const Field& k, unsigned n, unsigned i, unsigned j = 0);
  /// Syntax `s^j(y_i)`, e.g. `s(y1)^2 - 3*y1 + t`. Variable names default to y1..yn.
  static SigmaPolynomial parse(const Field& k, unsigned n, std::string_view text, const std::vector<std::string>& names = {});

  const Field& field() const { return k_; }
  unsigned arity() const { return n_; }
  /// Largest σ-order occurring, -1 for constants.
  int order() const;
  const std::map<SigmaMonomial, Elem>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  SigmaPolynomial operator-() const;
  friend SigmaPolynomial operator+(const SigmaPolynomial& a, const SigmaPolynomial& b);
  friend SigmaPolynomial operator-(const SigmaPolynomial& a, const SigmaPolynomial& b);
  friend SigmaPolynomial operator*(const SigmaPolynomial& a, const SigmaPolynomial& b);
  friend SigmaPolynomial operator*(const Elem& c, const SigmaPolynomial& a);
  friend bool operator==(const SigmaPolynomial& a, const SigmaPolynomial& b);
  SigmaPolynomial pow(unsigned e) const;

  /// σ applied to coefficients and variable orders.
  SigmaPolynomial shift(unsigned times = 1) const;

  AlgElement eval(const std::vector<AlgElement>& point) const;
  Elem eval(const std::vector<Elem>& point) const;

  std::string str(const std::vector<std::string>& names = {}) const;

 private:
  void check_same(const SigmaPolynomial& o) const;
  void add_term(const SigmaMonomial& m, const Elem& c);
  Field k_;
  unsigned n_;
  std::map<SigmaMonomial, Elem> terms_;
};

/// f(y) = Π_j σ^j(y^{α_j}) on unit tuples, α_j ∈ Z^n.
class MultiplicativeFunction {
 public:
  MultiplicativeFunction() = default;
  MultiplicativeFunction(unsigned n, std::vector<std::vector<long>> alpha);
  /// Products, quotients and powers of y_i and s^j(...), e.g. `s(y1)/y1`.
  static MultiplicativeFunction parse(unsigned n, std::string_view text, const std::vector<std::string>& names = {});

  unsigned arity() const { return n_; }
  /// α_0..α_l, trailing zero vectors removed.
  const std::vector<std::vector<long>>& alpha() const { return alpha_; }
  bool is_trivial() const { return alpha_.empty(); }
  /// Component i as an integer polynomial in s (low degree first).
  std::vector<long> component(unsigned i) const;

  AlgElement eval(const std::vector<AlgElement>& point) const;
  Elem eval(const Field& k, const std::vector<Elem>& point) const;

  /// numerator(f) - a * denominator(f) as a σ-polynomial relation.
  SigmaPolynomial relation(const Field& k, const Elem& a) const;

  std::string str(const std::vector<std::string>& names = {}) const;
  friend bool operator==(const MultiplicativeFunction& a, const MultiplicativeFunction& b) {
    return a.n_ == b.n_ && a.alpha_ == b.alpha_;
  }

 private:
  unsigned n_ = 0;
  std::vector<std::vector<long>> alpha_;
};

std::vector<std::string> default_names(const std::string& prefix, unsigned n);

}  // namespace dcoh
