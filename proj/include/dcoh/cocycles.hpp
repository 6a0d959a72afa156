#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dcoh/algebras.hpp"
#include "dcoh/groups.hpp"

namespace dcoh {

/// χ ∈ G(A⊗A). Cocycles built through make_cocycle or coboundary have been checked.
struct Cocycle {
  GroupPtr G;
  TensorContextPtr ctx;
  GroupElement value;

  const AlgebraPtr& algebra() const { return ctx->A; }
};

struct CocycleCheck {
  bool ok = false;
  /// Which condition failed: shape, membership, or the face identity.
  std::string reason;
};

/// Membership in G(A⊗A) and ∂₂(χ) = ∂₁(χ)·∂₃(χ) in G(A⊗A⊗A).
CocycleCheck check_cocycle(const GroupPtr& G, const TensorContextPtr& ctx, const GroupElement& chi);
/// Throws InvalidInput with the failure reason.
Cocycle make_cocycle(const GroupPtr& G, const TensorContextPtr& ctx, GroupElement chi);
Cocycle trivial_cocycle(const GroupPtr& G, const TensorContextPtr& ctx);

/// δ₁(α)·δ₂(α)^{-1}; additive groups: 1⊗α − α⊗1.
Cocycle coboundary(const GroupPtr& G, const TensorContextPtr& ctx, const GroupElement& alpha);
/// δ₁(α)·χ·δ₂(α)^{-1}
GroupElement act(const Cocycle& chi, const GroupElement& alpha);

enum class Verdict { Equivalent, Inequivalent, Undecided };
std::string verdict_name(Verdict v);

struct Decision {
  Verdict verdict = Verdict::Undecided;
  /// α ∈ G(A) with χ₁ = δ₁(α)·χ₂·δ₂(α)^{-1}.
  std::optional<GroupElement> witness;
  /// Reason for Inequivalent or Undecided.
  std::string certificate;
};

enum class EquivMethod {
  Auto,        // family structure first, exhaustive search as a fallback over finite k
  Enumerate,   // exhaustive search over G(A)
  Structured,  // family structure only
};

Decision equivalent(const Cocycle& c1, const Cocycle& c2, EquivMethod method = EquivMethod::Auto, std::uint64_t budget = 2'000'000);
bool verify_equivalence(const Cocycle& c1, const Cocycle& c2, const GroupElement& alpha);

/// Image under G(A⊗A) → G(B⊗B) for h: A → B, where ctxB->A is the target of h.
Cocycle pushforward_algebra(const Cocycle& c, const AlgMorphism& h, const TensorContextPtr& ctxB);
/// Same value seen in H ⊇ G; throws InvalidInput when the value is not in H.
Cocycle pushforward_group(const Cocycle& c, const GroupPtr& H);
/// Image under the group map g ↦ σ^d(g) into H.
Cocycle pushforward_sigma_power(const Cocycle& c, unsigned d, const GroupPtr& H);

std::pair<Cocycle, Cocycle> product_split(const Cocycle& c);
Cocycle product_merge(const GroupPtr& G, const Cocycle& first, const Cocycle& second);

/// A point x of the ambient group of G (GL_n for matrix kinds, Gm^n for diagonal,
/// Ga for additive, componentwise for products) over A with χ = δ₁(x)·δ₂(x)^{-1}.
/// FinDim A by linear algebra; additive cocycles also over Laurent and FreePoly
/// algebras; multiplicative ones of size 1 over Laurent algebras.
GroupElement trivialize(const Cocycle& c);

struct MuInvariant {
  Elem a, b;
  AlgElement alpha;  // χ = α^{-1}⊗α
};
/// (α², σ(α)/α) for the μ₂-group {g² = 1, σ(g) = g}.
MuInvariant mu_invariant(const Cocycle& c);

struct AdditiveInvariant {
  Elem a;
  AlgElement alpha;  // χ = 1⊗α − α⊗1
};
/// L(α); zero for Ga.
AdditiveInvariant additive_invariant(const Cocycle& c);

/// Exhaustive H¹_σ(A/k, G) for FinDim A over a finite field.
struct EnumeratedH1 {
  std::vector<GroupElement> cocycles;       // all of Z¹, in enumeration order
  std::vector<std::size_t> class_of;        // class index of each cocycle
  std::vector<std::size_t> representatives; // first cocycle of each class
  std::size_t classes() const { return representatives.size(); }
};
EnumeratedH1 enumerate_h1(const GroupPtr& G, const TensorContextPtr& ctx, std::uint64_t budget = 2'000'000);

}  // namespace dcoh
