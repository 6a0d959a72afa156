#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dcoh/algebras.hpp"
#include "dcoh/operators.hpp"
#include "dcoh/sigma_poly.hpp"

namespace dcoh {

class Group;
using GroupPtr = std::shared_ptr<const Group>;

/// Point of a group over a σ-algebra: matrix entries row-major (matrix kinds), one
/// scalar (additive), a unit tuple (diagonal), or the concatenation for products.
struct GroupElement {
  std::vector<AlgElement> entries;
  const AlgebraPtr& algebra() const { return entries.at(0).algebra(); }
  friend bool operator==(const GroupElement& a, const GroupElement& b) { return a.entries == b.entries; }
  friend bool operator!=(const GroupElement& a, const GroupElement& b) { return !(a == b); }
};

enum class TwistBase { GL, SL };
enum class Psi { Trivial, Identity, TransposeInverse };

std::string psi_name(Psi p);

class Group {
 public:
  enum class Kind { Matrix, Additive, Diagonal, Twist, Product };

  /// Relations in the n²+1 variables g11..gnn, dinv (dinv = det^{-1}).
  static GroupPtr matrix(const Field& k, unsigned n, std::vector<SigmaPolynomial> relations, std::string name = "");
  /// {g² = 1, σ(g) = g} inside Gm.
  static GroupPtr mu2sigma(const Field& k);
  static GroupPtr gl(const Field& k, unsigned n);
  static GroupPtr sl(const Field& k, unsigned n);
  static GroupPtr gm(const Field& k) { return gl(k, 1); }
  static GroupPtr ga(const Field& k);
  static GroupPtr additive(const DifferenceOperator& L);
  static GroupPtr diagonal(const Field& k, unsigned n, std::vector<MultiplicativeFunction> F);
  /// {g ∈ 𝒢 : σ^d(g) = ψ(g)} with 𝒢 = GL_n or SL_n.
  static GroupPtr twist(const Field& k, TwistBase base, unsigned n, unsigned d, Psi psi);
  static GroupPtr product(const GroupPtr& g, const GroupPtr& h);
  /// {g ∈ 𝒢 : σ^d(g) = 1}.
  static GroupPtr kernel_of_sigma_power(const Field& k, TwistBase base, unsigned n, unsigned d) {
    return twist(k, base, n, d, Psi::Trivial);
  }
  /// `mu2sigma`, `ga`, `gm`, `gl:<n>`, `sl:<n>`, `addker:<op>`, `diag:<n>;<f1>;...`,
  /// `twist:<GL|SL><n>;d=<d>;psi=<trivial|id|transposeinv>`, `prod(<G>|<H>)`.
  static GroupPtr parse(const Field& k, std::string_view descriptor);

  Kind kind() const { return kind_; }
  const Field& field() const { return k_; }
  const std::string& descriptor() const { return descriptor_; }
  /// Entries per point.
  std::size_t size() const;
  /// Matrix size (matrix and twist kinds), arity (diagonal).
  unsigned n() const { return n_; }
  bool is_matrix_like() const { return kind_ == Kind::Matrix || kind_ == Kind::Twist; }
  bool is_commutative() const;

  const std::vector<SigmaPolynomial>& relations() const { return relations_; }
  const std::optional<DifferenceOperator>& op() const { return op_; }
  const std::vector<MultiplicativeFunction>& functions() const { return F_; }
  TwistBase twist_base() const { return base_; }
  unsigned d() const { return d_; }
  Psi psi() const { return psi_; }
  const GroupPtr& first() const { return first_; }
  const GroupPtr& second() const { return second_; }

  GroupElement identity(const AlgebraPtr& R) const;
  /// Throws MismatchError on shape or algebra mismatch.
  bool contains(const GroupElement& x) const;
  /// Empty when x ∈ G, otherwise the violated condition.
  std::string violation(const GroupElement& x) const;
  GroupElement mul(const GroupElement& x, const GroupElement& y) const;
  GroupElement inv(const GroupElement& x) const;
  /// Entrywise image under an algebra morphism.
  static GroupElement map(const GroupElement& x, const AlgMorphism& h);
  static GroupElement sigma(const GroupElement& x, unsigned power = 1);
  /// Complete list of G(R) for FinDim R over a finite field, ordered by coordinates.
  std::vector<GroupElement> enumerate_points(const AlgebraPtr& R, std::uint64_t budget = 2'000'000) const;

  /// Projections and merge for products.
  GroupElement first_part(const GroupElement& x) const;
  GroupElement second_part(const GroupElement& x) const;
  GroupElement merge(const GroupElement& a, const GroupElement& b) const;

  std::string str(const GroupElement& x) const;

 private:
  Group() = default;
  void check_shape(const GroupElement& x) const;
  Kind kind_ = Kind::Matrix;
  Field k_;
  std::string descriptor_;
  unsigned n_ = 1;
  std::vector<SigmaPolynomial> relations_;
  std::optional<DifferenceOperator> op_;
  std::vector<MultiplicativeFunction> F_;
  TwistBase base_ = TwistBase::GL;
  unsigned d_ = 1;
  Psi psi_ = Psi::Trivial;
  GroupPtr first_, second_;
};

// ---- matrices over a σ-algebra (row-major entry vectors)

AlgElement mat_det(const std::vector<AlgElement>& m, unsigned n);
std::vector<AlgElement> mat_mul(const std::vector<AlgElement>& a, const std::vector<AlgElement>& b, unsigned n);
/// Inverse through the adjugate, or nothing if the determinant is not a unit.
std::optional<std::vector<AlgElement>> mat_inv(const std::vector<AlgElement>& m, unsigned n);
std::vector<AlgElement> mat_transpose(const std::vector<AlgElement>& m, unsigned n);
std::vector<AlgElement> mat_identity(const AlgebraPtr& R, unsigned n);

}  // namespace dcoh
