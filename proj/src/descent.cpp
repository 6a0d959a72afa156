#include <functional>

#include "dcoh/algebras.hpp"

namespace dcoh {

namespace {

Matrix sub(const Matrix& a, const Matrix& b, bool add = false) {
  Matrix r = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (!b(i, j).is_zero()) r(i, j) = add ? r(i, j) + b(i, j) : r(i, j) - b(i, j);
  return r;
}

}  // namespace

AmitsurReport amitsur_audit(const AlgebraPtr& A) {
  if (!A->is_findim()) throw Unsupported("the Amitsur audit needs a finite-dimensional algebra");
  auto ctx = tensor_context(A);
  Matrix M0 = sub(ctx->d2.matrix(), ctx->d1.matrix());
  Matrix M1 = sub(sub(ctx->e3.matrix(), ctx->e2.matrix()), ctx->e1.matrix(), true);
  AmitsurReport r;
  r.dim = A->dim();
  r.ker0_basis = kernel(M0);
  r.ker1_basis = kernel(M1);
  r.ker0 = r.ker0_basis.size();
  r.ker1 = r.ker1_basis.size();
  r.im0 = A->dim() - r.ker0;
  r.unit_in_ker0 = M0 * A->unit_coords() == Vec(M0.rows(), A->field().zero());
  // im(δ₂-δ₁) ⊆ ker(∂₃-∂₂+∂₁) always; equal dimensions give equality
  bool composite_zero = true;
  Matrix C = M1 * M0;
  for (std::size_t i = 0; i < C.rows() && composite_zero; ++i)
    for (std::size_t j = 0; j < C.cols(); ++j)
      if (!C(i, j).is_zero()) {
        composite_zero = false;
        break;
      }
  r.exact = composite_zero && r.ker0 == 1 && r.unit_in_ker0 && r.ker1 == r.im0;
  return r;
}

// ---------------------------------------------------------------- descent

namespace {

struct DatumShape {
  std::size_t m, n, N;  // dim A, dim B, m*n
};

DatumShape shape_of(const DescentDatum& d) {
  if (!d.A->is_findim() || !d.B->is_findim()) throw Unsupported("descent needs finite-dimensional algebras");
  DatumShape s{d.A->dim(), d.B->dim(), d.A->dim() * d.B->dim()};
  if (d.phi.rows() != s.N || d.phi.cols() != s.N) throw InvalidInput("descent datum matrix has the wrong size");
  if (d.structure.source() != d.A || d.structure.target() != d.B) throw InvalidInput("structure map must go from A to B");
  return s;
}

// index helpers: B⊗A (i,j) -> i*m+j ; A⊗B (j,i) -> j*n+i
// triple spaces: B⊗A⊗A (i,j,l), A⊗B⊗A (x,i,l), A⊗A⊗B (x,y,i)

}  // namespace

void validate_descent_datum(const DescentDatum& d) {
  const auto [m, n, N] = shape_of(d);
  const Field& k = d.A->field();
  if (!inverse(d.phi)) throw InvalidInput("descent datum is not invertible");
  AlgebraPtr BA = SigmaAlgebra::tensor(d.B, d.A), AB = SigmaAlgebra::tensor(d.A, d.B);
  auto phi = [&](const Vec& x) { return AB->from_coords(d.phi * x); };
  if (phi(BA->unit_coords()) != AB->one()) throw InvalidInput("descent datum does not preserve the unit");
  for (std::size_t p = 0; p < N; ++p) {
    AlgElement bp = BA->basis(p);
    AlgElement ip = phi(bp.coords());
    if (phi(bp.sigma().coords()) != ip.sigma()) throw InvalidInput("descent datum does not commute with sigma");
    for (std::size_t q = p; q < N; ++q) {
      AlgElement bq = BA->basis(q);
      if (phi((bp * bq).coords()) != ip * phi(bq.coords())) throw InvalidInput("descent datum is not multiplicative");
    }
  }
  // A⊗A-linearity on generators: s(a)⊗1 ↦ a⊗1, 1⊗a ↦ 1⊗s(a)
  for (std::size_t j = 0; j < m; ++j) {
    AlgElement a = d.A->basis(j);
    if (phi(pure_tensor(BA, d.structure(a), d.A->one()).coords()) != pure_tensor(AB, a, d.B->one()))
      throw InvalidInput("descent datum is not A⊗A-linear");
    if (phi(pure_tensor(BA, d.B->one(), a).coords()) != pure_tensor(AB, d.A->one(), d.structure(a)))
      throw InvalidInput("descent datum is not A⊗A-linear");
  }
  // cocycle condition φ13 = φ23 ∘ φ12 on B⊗A⊗A
  const std::size_t T = N * m;
  auto col = [&](std::size_t i, std::size_t j) { return d.phi.col(i * m + j); };  // entries indexed (j',i')
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t l = 0; l < m; ++l) {
        // φ12: b_i⊗a_j⊗a_l ↦ Σ c a_j'⊗b_i'⊗a_l  (A⊗B⊗A index (j'*n+i')*m+l)
        Vec mid(T, k.zero());
        Vec c12 = col(i, j);
        for (std::size_t r = 0; r < N; ++r)
          if (!c12[r].is_zero()) mid[r * m + l] = c12[r];
        // φ23: a_x⊗b_i'⊗a_l ↦ Σ c a_x⊗a_l'⊗b_i''  (A⊗A⊗B index x*N + l'*n + i'')
        Vec lhs(T, k.zero());
        for (std::size_t idx = 0; idx < T; ++idx) {
          if (mid[idx].is_zero()) continue;
          std::size_t x = idx / (n * m), ii = (idx / m) % n, ll = idx % m;
          Vec c23 = col(ii, ll);
          for (std::size_t r = 0; r < N; ++r)
            if (!c23[r].is_zero()) lhs[x * N + r] += mid[idx] * c23[r];
        }
        // φ13: b_i⊗a_j⊗a_l ↦ Σ c a_x⊗a_j⊗b_i' where φ(b_i⊗a_l) = Σ c a_x⊗b_i'
        Vec rhs(T, k.zero());
        Vec c13 = col(i, l);
        for (std::size_t r = 0; r < N; ++r)
          if (!c13[r].is_zero()) rhs[(r / n) * N + j * n + r % n] = c13[r];
        if (lhs != rhs) throw InvalidInput("descent datum violates the cocycle condition");
      }
}

DescentDatum canonical_datum(const AlgebraPtr& C0, const AlgebraPtr& A) {
  AlgebraPtr B = SigmaAlgebra::tensor(C0, A);
  const std::size_t m = A->dim(), c = C0->dim(), n = B->dim(), N = n * m;
  const Field& k = A->field();
  std::vector<AlgElement> imgs;
  for (std::size_t j = 0; j < m; ++j) imgs.push_back(pure_tensor(B, C0->one(), A->basis(j)));
  DescentDatum d{A, B, AlgMorphism::make(A, B, imgs), Matrix(N, N, k.zero())};
  // (c⊗a)⊗a' ↦ a⊗(c⊗a')
  for (std::size_t ci = 0; ci < c; ++ci)
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t a2 = 0; a2 < m; ++a2) d.phi(a * n + ci * m + a2, (ci * m + a) * m + a2) = k.one();
  return d;
}

DescentResult descend_invariants(const DescentDatum& d) {
  validate_descent_datum(d);
  const auto [m, n, N] = shape_of(d);
  const Field& k = d.A->field();
  // b ↦ φ*(b⊗1) - 1⊗b
  std::vector<Vec> cols;
  const Vec& ua = d.A->unit_coords();
  for (std::size_t i = 0; i < n; ++i) {
    Vec bt(N, k.zero());
    for (std::size_t j = 0; j < m; ++j) bt[i * m + j] = ua[j];
    Vec v = d.phi * bt;
    for (std::size_t j = 0; j < m; ++j)
      if (!ua[j].is_zero()) v[j * n + i] -= ua[j];
    cols.push_back(std::move(v));
  }
  std::vector<Vec> K = kernel(Matrix::from_columns(cols, k.zero()));
  if (K.empty()) throw InvalidInput("invariant subalgebra is zero");
  const std::size_t r = K.size();
  Matrix KM = Matrix::from_columns(K, k.zero());
  auto in_span = [&](const Vec& v) {
    auto z = solve(KM, v);
    if (!z) throw InvalidInput("invariants are not closed under the algebra operations");
    return *z;
  };
  FinDimTables t;
  t.dim = r;
  t.mult.assign(r, std::vector<Vec>(r));
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) t.mult[i][j] = in_span(d.B->mul_coords(K[i], K[j]));
  t.unit = in_span(d.B->unit_coords());
  for (std::size_t j = 0; j < r; ++j) t.sigma.push_back(in_span(d.B->from_coords(K[j]).sigma().coords()));
  DescentResult res;
  res.B0 = SigmaAlgebra::findim(k, std::move(t), "descended");
  for (const auto& v : K) res.basis_in_B.push_back(d.B->from_coords(v));
  // A⊗B0 → B, a⊗b ↦ s(a) b
  std::vector<Vec> img;
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t i = 0; i < r; ++i) img.push_back((d.structure(d.A->basis(j)) * res.basis_in_B[i]).coords());
  res.canonical_map_iso = m * r == n && rank(Matrix::from_columns(img, k.zero())) == n;
  return res;
}

// ---------------------------------------------------------------- isomorphism search

std::optional<std::vector<Vec>> find_isomorphism(const AlgebraPtr& X, const AlgebraPtr& Y, std::uint64_t budget) {
  if (!X->is_findim() || !Y->is_findim() || X->field() != Y->field()) throw MismatchError("isomorphism search needs FinDim algebras over one field");
  const Field& k = X->field();
  if (!k.is_finite()) throw Unsupported("isomorphism search needs a finite field");
  if (X->dim() != Y->dim()) return std::nullopt;
  const std::size_t m = X->dim();

  // greedy algebra generators of X; monomials with exponents < m span X
  std::vector<AlgElement> gens;
  std::vector<std::vector<long>> monos;
  std::vector<AlgElement> span;  // X-values of monos
  auto rebuild = [&]() {
    monos.assign(1, std::vector<long>(gens.size(), 0));
    span.assign(1, X->one());
    for (std::size_t g = 0; g < gens.size(); ++g) {
      std::size_t cur = monos.size();
      for (std::size_t idx = 0; idx < cur; ++idx) {
        AlgElement v = span[idx];
        for (long e = 1; e < static_cast<long>(m); ++e) {
          v = v * gens[g];
          auto mono = monos[idx];
          mono[g] = e;
          monos.push_back(mono);
          span.push_back(v);
        }
      }
    }
  };
  auto span_rank = [&]() {
    std::vector<Vec> c;
    for (const auto& s : span) c.push_back(s.coords());
    return rank(Matrix::from_columns(c, k.zero()));
  };
  rebuild();
  std::size_t have = span_rank();
  for (std::size_t i = 0; i < m && have < m; ++i) {
    gens.push_back(X->basis(i));
    rebuild();
    std::size_t with = span_rank();
    if (with > have) {
      have = with;
    } else {
      gens.pop_back();
      rebuild();
    }
  }
  const std::size_t r = gens.size();

  // relations among the monomials in the first g generators
  auto relations_upto = [&](std::size_t g) {
    std::vector<std::size_t> idx;
    for (std::size_t j = 0; j < monos.size(); ++j) {
      bool ok = true;
      for (std::size_t h = g; h < r; ++h) ok = ok && monos[j][h] == 0;
      if (ok) idx.push_back(j);
    }
    std::vector<Vec> c;
    for (auto j : idx) c.push_back(span[j].coords());
    return std::make_pair(idx, kernel(Matrix::from_columns(c, k.zero())));
  };
  std::vector<std::pair<std::vector<std::size_t>, std::vector<Vec>>> rel;
  for (std::size_t g = 1; g <= r; ++g) rel.push_back(relations_upto(g));

  const std::uint64_t count = Y->element_count();
  std::vector<AlgElement> img(r);
  std::uint64_t tried = 0;
  std::optional<std::vector<Vec>> found;

  auto mono_value = [&](const std::vector<long>& mono) {
    AlgElement v = Y->one();
    for (std::size_t g = 0; g < r; ++g)
      if (mono[g]) v = v * img[g].pow(mono[g]);
    return v;
  };

  std::function<bool(std::size_t)> search = [&](std::size_t g) -> bool {
    if (g == r) {
      // linear map on a spanning set of X; pick a basis among the monomials
      std::vector<Vec> xs, ys;
      for (std::size_t j = 0; j < monos.size(); ++j) {
        xs.push_back(span[j].coords());
        ys.push_back(mono_value(monos[j]).coords());
      }
      Matrix XM = Matrix::from_columns(xs, k.zero());
      RowReduced rr = rref(XM);
      std::vector<Vec> bx, by;
      for (auto p : rr.pivots) {
        bx.push_back(xs[p]);
        by.push_back(ys[p]);
      }
      auto bxinv = inverse(Matrix::from_columns(bx, k.zero()));
      if (!bxinv) return false;
      Matrix H = Matrix::from_columns(by, k.zero()) * *bxinv;  // coords in X -> coords in Y
      if (!inverse(H)) return false;
      for (std::size_t i = 0; i < m; ++i) {
        AlgElement xi = X->basis(i);
        Vec hi = H * xi.coords();
        if (H * xi.sigma().coords() != Y->from_coords(hi).sigma().coords()) return false;
        for (std::size_t j = i; j < m; ++j)
          if (H * (xi * X->basis(j)).coords() != Y->mul_coords(hi, H * X->basis(j).coords())) return false;
      }
      if (H * X->unit_coords() != Y->unit_coords()) return false;
      std::vector<Vec> out;
      for (std::size_t i = 0; i < m; ++i) out.push_back(H.col(i));
      found = out;
      return true;
    }
    for (std::uint64_t c = 0; c < count; ++c) {
      if (++tried > budget) throw BudgetExhausted("isomorphism search exceeded its budget");
      img[g] = Y->element_at(c);
      const auto& [idx, ker] = rel[g];
      bool ok = true;
      std::vector<AlgElement> vals;
      for (auto j : idx) vals.push_back(mono_value(monos[j]));
      for (const auto& kv : ker) {
        AlgElement s = Y->zero();
        for (std::size_t t = 0; t < idx.size(); ++t)
          if (!kv[t].is_zero()) s += kv[t] * vals[t];
        if (!s.is_zero()) {
          ok = false;
          break;
        }
      }
      if (ok && search(g + 1)) return true;
    }
    return false;
  };
  search(0);
  return found;
}

}  // namespace dcoh
