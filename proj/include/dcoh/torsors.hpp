#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dcoh/cocycles.hpp"
#include "dcoh/groups.hpp"
#include "dcoh/operators.hpp"
#include "dcoh/sigma_poly.hpp"
#include "dcoh/zs_module.hpp"

namespace dcoh {

/// A torsor under one of the family groups, or the twisted form of a cocycle.
///   Mu:          {x² = a, σ(x) = b x} under {g² = 1, σ(g) = g}, needs σ(a) = a b²
///   Additive:    {L(x) = a} under ker L
///   Diagonal:    {f_i(x) = a_i} under {f_i(g) = 1} ⊆ Gm^n
///   Twist:       {σ^d(x) = ψ(x) a} under {σ^d(g) = ψ(g)} ⊆ 𝒢 = GL_n or SL_n, a ∈ 𝒢(k)
///   TwistedForm: {g ∈ G(A⊗A) : ∂₃(g) = ∂₂(g)·∂₁(χ)}, points over A only
class Torsor {
 public:
  enum class Family { Mu, Additive, Diagonal, Twist, TwistedForm };

  static Torsor mu(const Field& k, const Elem& a, const Elem& b);
  static Torsor additive(const DifferenceOperator& L, const Elem& a);
  static Torsor diagonal(const Field& k, unsigned n, std::vector<MultiplicativeFunction> F, std::vector<Elem> a);
  static Torsor twist(const Field& k, TwistBase base, unsigned n, unsigned d, Psi psi, std::vector<Elem> a);
  static Torsor twisted_form(const Cocycle& chi);
  /// `mu:<a>,<b>`, `add:<op>;<a>`, `diag:<n>;<f1>;...;<fm>;<a1>,...,<am>`,
  /// `twist:<GL|SL><n>;d=<d>;psi=<trivial|id|transposeinv>;a=<row-major entries>`.
  static Torsor parse(const Field& k, std::string_view descriptor);

  Family family() const { return family_; }
  const Field& field() const { return group_->field(); }
  /// The acting group.
  const GroupPtr& group() const { return group_; }
  std::string descriptor() const;

  /// a (Mu, Additive); b (Mu); a_1..a_m (Diagonal); a row-major (Twist).
  const Elem& a() const { return params_.at(0); }
  const Elem& b() const { return params_.at(1); }
  const std::vector<Elem>& params() const { return params_; }
  const Cocycle& cocycle() const { return chi_.value(); }

  /// Empty when x is a point, otherwise the violated equation.
  std::string violation(const GroupElement& x) const;
  bool contains(const GroupElement& x) const { return violation(x).empty(); }
  /// g.x for g ∈ G(R), x ∈ X(R); for twisted forms g ∈ G(A) acts through a ↦ a⊗1.
  GroupElement act(const GroupElement& g, const GroupElement& x) const;
  /// χ^{-1} (TwistedForm).
  GroupElement canonical_point() const;

 private:
  Torsor() = default;
  Family family_ = Family::Mu;
  GroupPtr group_;
  std::vector<Elem> params_;
  std::optional<Cocycle> chi_;
};

std::string family_name(Torsor::Family f);

struct PointSearch {
  Verdict verdict = Verdict::Undecided;  // Equivalent = point found, Inequivalent = no point
  std::vector<GroupElement> points;
  /// points is the full list X(R).
  bool complete = false;
  std::string certificate;
  bool found() const { return !points.empty(); }
};

/// Finite FinDim R: every point by enumeration. Otherwise a point or a certificate of
/// nonexistence where one of the deciders applies, else Undecided.
PointSearch torsor_points(const Torsor& X, const AlgebraPtr& R, std::uint64_t budget = 2'000'000);

/// The χ ∈ G(A⊗A) with ∂-images f₁(x) = χ.f₂(x) of a point x ∈ X(A).
Cocycle cocycle_from_point(const Torsor& X, const TensorContextPtr& ctx, const GroupElement& x);
Torsor torsor_from_cocycle(const Cocycle& chi);
/// Family normal form of a twisted form; family torsors are returned unchanged.
Torsor normalize(const Torsor& X);

struct IsoDecision {
  Verdict verdict = Verdict::Undecided;
  /// Mu: λ (x ↦ λx); Additive: b (x ↦ x + b); Diagonal: λ_1..λ_n (x ↦ λx);
  /// Twist: c row-major (x ↦ x c).
  std::optional<std::vector<Elem>> witness;
  std::string certificate;
};

IsoDecision isomorphic(const Torsor& X, const Torsor& Y, std::uint64_t budget = 2'000'000);
/// Checks that the witness maps the parameters of X onto those of Y.
bool verify_isomorphism(const Torsor& X, const Torsor& Y, const std::vector<Elem>& witness);

struct H1Classification {
  std::string group;
  /// Explicit list of classes (finite fields).
  bool complete = false;
  std::uint64_t classes = 0;
  std::vector<std::string> representatives;  // torsor descriptors
  /// Parameter set size before taking orbits (|M|, |k|, admissible a, |𝒢(k)|).
  std::uint64_t parameters = 0;
  /// Infinite fields: the normal form and the available isomorphism decider.
  std::string statement;
  /// Diagonal family: generators of the exponent syzygies that constrain a.
  std::vector<ZVec> syzygies;
};

H1Classification classify_h1(const GroupPtr& G, std::uint64_t budget = 2'000'000);

/// Whether Π_i c_i(σ)(a_i) = 1 for every syzygy c of the exponent vectors of F.
bool diagonal_admissible(const Field& k, const std::vector<MultiplicativeFunction>& F, const std::vector<Elem>& a,
                         const std::vector<ZVec>& syz);
std::vector<ZVec> diagonal_syzygies(const std::vector<MultiplicativeFunction>& F, unsigned n);

struct DeltaResult {
  AlgebraPtr A;  // Laurent k[u_1^±, ..., u_d^±], σ(u_i) = u_{i+1}, σ(u_d) = x
  TensorContextPtr ctx;
  GroupPtr N;    // {g ∈ Gm : σ^d(g) = 1}
  Cocycle chi;   // δ₁(u_1)·δ₂(u_1)^{-1} = u_1^{-1}⊗u_1
  /// Equivalent: trivial class, witness α ∈ N(A) with χ = δ₁(α)δ₂(α)^{-1}.
  Decision trivial;
  /// c ∈ k^× with σ^d(c) = x when the class is trivial.
  std::optional<Elem> lift;
};

/// δ: (G/N)(k) → H¹(k, N) for G = Gm and N = ker σ^d.
DeltaResult connecting_delta(const Field& k, unsigned d, const Elem& x);

struct ExactnessReport {
  unsigned d = 1;
  std::uint64_t n_k = 0, g_k = 0, quotient_k = 0, image = 0;
  std::uint64_t delta_trivial = 0;
  std::uint64_t h1_n_classes = 0;
  bool exact_at_n = false, exact_at_g = false, exact_at_quotient = false;
  /// Every N-torsor becomes trivial as a Gm-torsor.
  bool h1_n_to_h1_g_trivial = false;
  bool exact() const { return exact_at_n && exact_at_g && exact_at_quotient && h1_n_to_h1_g_trivial; }
};

/// Exactness of 1 → N(k) → Gm(k) → Gm(k) → H¹(k, N) → H¹(k, Gm) over a finite field.
ExactnessReport exactness_audit(const Field& k, unsigned d, std::uint64_t budget = 2'000'000);

}  // namespace dcoh
