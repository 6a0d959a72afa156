#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dcoh/algebras.hpp"
#include "dcoh/fields.hpp"
#include "dcoh/linalg.hpp"

namespace dcoh {

/// L = σ^n + λ_{n-1} σ^{n-1} + ... + λ_0 over k.
class DifferenceOperator {
 public:
  DifferenceOperator(Field k, std::vector<Elem> lambda);
  /// `s^2 - 3*s + 1`, products compose in the Ore sense (s*t = (t+1)*s on the shift field).
  static DifferenceOperator parse(const Field& k, std::string_view text);

  const Field& field() const { return k_; }
  unsigned order() const { return static_cast<unsigned>(lambda_.size()); }
  /// λ_0..λ_{n-1}.
  const std::vector<Elem>& lambda() const { return lambda_; }
  /// λ_0..λ_{n-1}, 1.
  std::vector<Elem> coefficients() const;

  Elem operator()(const Elem& x) const;
  AlgElement operator()(const AlgElement& x) const;

  std::string str() const;
  friend bool operator==(const DifferenceOperator& a, const DifferenceOperator& b) {
    return a.k_ == b.k_ && a.lambda_ == b.lambda_;
  }

 private:
  Field k_;
  std::vector<Elem> lambda_;
};

struct AdditiveSolution {
  std::optional<Elem> solution;
  /// Reason when no solution exists: "not-in-image", "no-rational-solution", "degenerate-zero-operator".
  std::string certificate;
  /// Basis of ker L over the prime field (finite k), over Q (shift field) or Q (QQ).
  std::vector<Elem> kernel;
};

/// Decides L(b) = a. Throws Unsupported on dilation and substitution fields.
AdditiveSolution solve_additive(const DifferenceOperator& L, const Elem& a);

/// Abramov's rational solver on the shift field, exposed with its internals for auditing.
struct AbramovTrace {
  std::size_t lowest_index = 0;
  std::vector<long> dispersion;  // nonnegative integer roots, ascending
  QPoly universal_denominator;
  long degree_bound = -1;
};
AdditiveSolution solve_shift_rational(const DifferenceOperator& L, const Elem& a, AbramovTrace* trace = nullptr);

struct AdditiveH1 {
  std::vector<Elem> representatives;  // coset representatives of k / L(k)
  std::uint64_t count = 0;
  unsigned kernel_dim = 0;   // over F_p
  unsigned image_dim = 0;    // over F_p
};

/// k / L(k) over a finite field.
AdditiveH1 classify_additive_h1(const DifferenceOperator& L);

/// a ~ a2 iff a2 - a = L(b); returns the search for b.
AdditiveSolution additive_equivalent(const DifferenceOperator& L, const Elem& a, const Elem& a2);

/// Matrix of L on the F_p-basis 1, w, ..., w^{m-1} of GF(p^m), entries in GF(p).
Matrix additive_matrix(const DifferenceOperator& L);

}  // namespace dcoh
