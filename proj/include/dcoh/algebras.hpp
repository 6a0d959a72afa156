#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dcoh/fields.hpp"
#include "dcoh/linalg.hpp"

namespace dcoh {

class SigmaAlgebra;
using AlgebraPtr = std::shared_ptr<const SigmaAlgebra>;

/// Exponent vector -> coefficient; used for Laurent and FreePoly elements.
using Monomial = std::vector<long>;
using SparsePoly = std::map<Monomial, Elem>;

/// Structure tables of a finite-dimensional σ-algebra over k.
struct FinDimTables {
  std::size_t dim = 0;
  std::vector<std::string> labels;
  /// mult[i][j] = coordinates of e_i * e_j
  std::vector<std::vector<Vec>> mult;
  Vec unit;
  /// sigma[j] = coordinates of σ(e_j)
  std::vector<Vec> sigma;
};

/// σ(u_i) = c_i * u^{v_i}
struct LaurentImage {
  Elem c;
  Monomial v;
};

/// σ(y_i) = c_i + sum_j m_i[j] y_j
struct AffineImage {
  Elem c;
  Vec m;
};

class AlgElement;
struct TensorContext;
using TensorContextPtr = std::shared_ptr<const TensorContext>;
TensorContextPtr tensor_context(const AlgebraPtr& A);

class SigmaAlgebra : public std::enable_shared_from_this<SigmaAlgebra> {
 public:
  enum class Kind { FinDim, Laurent, FreePoly };

  /// Validates commutativity, associativity, unit, and multiplicativity of σ.
  static AlgebraPtr findim(const Field& k, FinDimTables t, std::string name = "");
  static AlgebraPtr laurent(const Field& k, std::vector<LaurentImage> images, std::vector<std::string> names = {});
  static AlgebraPtr freepoly(const Field& k, std::vector<AffineImage> images, std::vector<std::string> names = {});
  /// L ⊗_k R with σ acting factorwise. Basis order (FinDim): lexicographic pairs.
  static AlgebraPtr tensor(const AlgebraPtr& left, const AlgebraPtr& right);

  const Field& field() const { return field_; }
  Kind kind() const { return kind_; }
  bool is_findim() const { return kind_ == Kind::FinDim; }
  const std::string& name() const { return name_; }
  /// Dimension (FinDim) or number of generators (Laurent, FreePoly).
  std::size_t dim() const { return dim_; }
  std::size_t generators() const { return dim_; }
  const std::vector<std::string>& labels() const { return labels_; }

  bool is_tensor() const { return static_cast<bool>(left_); }
  const AlgebraPtr& left() const { return left_; }
  const AlgebraPtr& right() const { return right_; }

  AlgElement zero() const;
  AlgElement one() const;
  AlgElement scalar(const Elem& c) const;
  /// e_i (FinDim) or the i-th generator (Laurent, FreePoly).
  AlgElement basis(std::size_t i) const;
  AlgElement generator(std::size_t i) const;
  AlgElement from_coords(Vec coords) const;
  AlgElement from_poly(SparsePoly p) const;

  /// Coordinates of σ(e_j) (FinDim).
  const Vec& sigma_coords(std::size_t j) const;
  const Vec& unit_coords() const;
  /// Coordinates of x * y (FinDim).
  Vec mul_coords(const Vec& x, const Vec& y) const;
  const std::vector<LaurentImage>& laurent_images() const { return laurent_; }
  const std::vector<AffineImage>& affine_images() const { return affine_; }

  /// Matrix whose column j is σ(e_j) (FinDim).
  Matrix sigma_matrix() const;

  /// Parses an element: basis labels / generator names, field constants, s^j(...),
  /// and '#' for tensors of tensor algebras.
  AlgElement parse_element(std::string_view text) const;

  /// Elements enumerated in coordinate order (FinDim over a finite field).
  std::uint64_t element_count() const;
  AlgElement element_at(std::uint64_t index) const;

  std::string describe() const;

 private:
  SigmaAlgebra() = default;
  bool explicit_mult() const { return !tables_.mult.empty(); }
  /// Coordinates of e_i * e_j; tensors combine the factor products.
  Vec basis_product(std::size_t i, std::size_t j) const;

  Field field_;
  Kind kind_ = Kind::FinDim;
  std::string name_;
  std::size_t dim_ = 0;
  std::vector<std::string> labels_;
  // FinDim tables; large tensors keep mult empty and multiply factorwise
  FinDimTables tables_;
  AlgebraPtr left_, right_;
  std::vector<LaurentImage> laurent_;
  std::vector<AffineImage> affine_;

  friend class AlgElement;
  friend AlgElement operator*(const AlgElement&, const AlgElement&);
};

class AlgElement {
 public:
  AlgElement() = default;

  const AlgebraPtr& algebra() const { return alg_; }
  const Vec& coords() const { return coords_; }
  const SparsePoly& poly() const { return poly_; }

  bool is_zero() const;
  bool is_one() const;
  /// c if the element equals c * 1.
  std::optional<Elem> as_scalar() const;

  AlgElement operator-() const;
  friend AlgElement operator+(const AlgElement& a, const AlgElement& b);
  friend AlgElement operator-(const AlgElement& a, const AlgElement& b);
  friend AlgElement operator*(const AlgElement& a, const AlgElement& b);
  friend AlgElement operator*(const Elem& c, const AlgElement& a);
  friend bool operator==(const AlgElement& a, const AlgElement& b);
  friend bool operator!=(const AlgElement& a, const AlgElement& b) { return !(a == b); }
  AlgElement& operator+=(const AlgElement& o) { return *this = *this + o; }
  AlgElement& operator*=(const AlgElement& o) { return *this = *this * o; }

  AlgElement sigma(unsigned power = 1) const;
  std::optional<AlgElement> inverse() const;
  /// Integer power; negative exponents require a unit.
  AlgElement pow(long e) const;
  bool is_unit() const { return inverse().has_value(); }

  std::string str() const;

 private:
  friend class SigmaAlgebra;
  AlgebraPtr alg_;
  Vec coords_;       // FinDim
  SparsePoly poly_;  // Laurent, FreePoly
};

/// k-σ-algebra morphism given by images of the basis (FinDim source) or of the
/// generators (Laurent / FreePoly source).
class AlgMorphism {
 public:
  AlgMorphism() = default;
  /// Validates σ-compatibility and multiplicativity; throws InvalidInput otherwise.
  static AlgMorphism make(AlgebraPtr source, AlgebraPtr target, std::vector<AlgElement> images);
  static AlgMorphism identity(const AlgebraPtr& a);
  /// x ⊗ y ↦ f(x) g(y) for f: L → T and g: R → T.
  static AlgMorphism on_tensor(const AlgebraPtr& lr, const AlgMorphism& f, const AlgMorphism& g);
  AlgMorphism compose(const AlgMorphism& after) const;  // after ∘ this

  const AlgebraPtr& source() const { return source_; }
  const AlgebraPtr& target() const { return target_; }
  const std::vector<AlgElement>& images() const { return images_; }
  AlgElement operator()(const AlgElement& x) const;
  /// Matrix of the k-linear map (FinDim source and target).
  Matrix matrix() const;

 private:
  static AlgMorphism unchecked(AlgebraPtr source, AlgebraPtr target, std::vector<AlgElement> images);
  friend TensorContextPtr tensor_context(const AlgebraPtr& A);
  AlgebraPtr source_, target_;
  std::vector<AlgElement> images_;
};

/// a ⊗ b in the tensor algebra lr = tensor(L, R).
AlgElement pure_tensor(const AlgebraPtr& lr, const AlgElement& a, const AlgElement& b);

struct TensorContext {
  AlgebraPtr A, AA, AAA;  // AAA = (A ⊗ A) ⊗ A
  AlgMorphism d1, d2;     // δ₁(a) = 1⊗a, δ₂(a) = a⊗1
  AlgMorphism e1, e2, e3; // ∂₁, ∂₂, ∂₃ : A⊗A → A⊗A⊗A
  AlgMorphism p1, p2, p3; // a ↦ a⊗1⊗1, 1⊗a⊗1, 1⊗1⊗a
};


// ---- constructors used by descriptors and tests

/// k[y]/(y² - a) with σ(y) = b y; requires σ(a) = a b².
AlgebraPtr make_mu_algebra(const Field& k, const Elem& a, const Elem& b);
/// k^m with σ(e_i) = e_{perm[i]}.
AlgebraPtr make_split(const Field& k, std::size_t m, std::vector<std::size_t> perm = {});
/// The same algebra in the basis given by the columns of P (invertible).
AlgebraPtr change_basis(const AlgebraPtr& A, const Matrix& P);
/// Explicit tables of a FinDim algebra (tensors included).
FinDimTables tables_of(const AlgebraPtr& A);
/// Direct product A × B.
AlgebraPtr product(const AlgebraPtr& a, const AlgebraPtr& b);

/// Parses `mu:a,b`, `split:m[;perm=...]`, `laurent:r;sigma(u1)=...`, `freepoly:r;sigma(y1)=...`, `k`.
AlgebraPtr parse_algebra(const Field& k, std::string_view descriptor);

// ---- Amitsur complex

struct AmitsurReport {
  bool exact = false;
  std::size_t dim = 0;
  std::size_t ker0 = 0;        // dim ker(δ₂ - δ₁)
  std::size_t ker1 = 0;        // dim ker(∂₃ - ∂₂ + ∂₁)
  std::size_t im0 = 0;         // rank(δ₂ - δ₁)
  bool unit_in_ker0 = false;
  std::vector<Vec> ker0_basis, ker1_basis;
};

AmitsurReport amitsur_audit(const AlgebraPtr& A);

// ---- descent

/// φ*: B⊗A → A⊗B given as a k-linear matrix on lexicographic tensor bases,
/// together with the A-structure s: A → B.
struct DescentDatum {
  AlgebraPtr A, B;
  AlgMorphism structure;  // A → B
  Matrix phi;             // (dim A · dim B) square
};

struct DescentResult {
  AlgebraPtr B0;
  std::vector<AlgElement> basis_in_B;  // images of B0's basis
  bool canonical_map_iso = false;
};

/// Checks that φ* is an A⊗A-algebra isomorphism commuting with σ and satisfies
/// the cocycle condition; throws InvalidInput naming the first failure.
void validate_descent_datum(const DescentDatum& d);
DescentDatum canonical_datum(const AlgebraPtr& C0, const AlgebraPtr& A);
DescentResult descend_invariants(const DescentDatum& d);

/// Search for an isomorphism of FinDim σ-algebras over a finite field
/// (budget = number of candidate basis images tried). Returns images of the basis of X.
std::optional<std::vector<Vec>> find_isomorphism(const AlgebraPtr& X, const AlgebraPtr& Y, std::uint64_t budget);

}  // namespace dcoh
