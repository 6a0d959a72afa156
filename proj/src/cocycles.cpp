#include "dcoh/cocycles.hpp"

#include <algorithm>
#include <map>
#include <random>

namespace dcoh {

namespace {

void require_same_context(const Cocycle& a, const Cocycle& b) {
  if (a.G->descriptor() != b.G->descriptor() || a.G->field() != b.G->field()) throw MismatchError("cocycles for different groups");
  if (a.ctx->A != b.ctx->A) throw MismatchError("cocycles over different algebras");
}

GroupElement face(const GroupElement& x, const AlgMorphism& h) { return Group::map(x, h); }

bool is_additive(const Group& G) { return G.kind() == Group::Kind::Additive; }

std::vector<Elem> mat_identity_scalars(const Field& k, unsigned n) {
  std::vector<Elem> c(n * n, k.zero());
  for (unsigned i = 0; i < n; ++i) c[i * n + i] = k.one();
  return c;
}

// ---- trivialization in the ambient group

std::vector<AlgElement> to_algebra(const AlgebraPtr& A, const Vec& v, std::size_t blocks) {
  std::vector<AlgElement> out;
  const std::size_t D = A->dim();
  for (std::size_t b = 0; b < blocks; ++b) out.push_back(A->from_coords(Vec(v.begin() + static_cast<long>(b * D), v.begin() + static_cast<long>((b + 1) * D))));
  return out;
}

Elem random_scalar(const Field& k, std::mt19937_64& rng) {
  if (k.is_finite()) return k.random(rng);
  return k.from_int(std::uniform_int_distribution<long>(-3, 3)(rng));
}

/// Invertible α ∈ M_n(A) with δ₁(α) = χ·δ₂(α), A finite-dimensional.
std::vector<AlgElement> gl_trivialize_findim(const TensorContext& ctx, const std::vector<AlgElement>& chi, unsigned n) {
  const AlgebraPtr& A = ctx.A;
  const std::size_t D = A->dim(), DD = ctx.AA->dim(), N = n * n;
  const Elem zero = A->field().zero();
  Matrix M(N * DD, N * D, zero);
  for (unsigned l = 0; l < n; ++l)
    for (unsigned j = 0; j < n; ++j)
      for (std::size_t r = 0; r < D; ++r) {
        std::size_t col = (l * n + j) * D + r;
        const Vec& c1 = ctx.d1.images()[r].coords();
        for (std::size_t s = 0; s < DD; ++s) M((l * n + j) * DD + s, col) += c1[s];
        for (unsigned i = 0; i < n; ++i) {
          const AlgElement& c = chi[i * n + l];
          if (c.is_zero()) continue;
          Vec t = (c * ctx.d2.images()[r]).coords();
          for (std::size_t s = 0; s < DD; ++s) M((i * n + j) * DD + s, col) -= t[s];
        }
      }
  auto K = kernel(M);
  if (K.empty()) throw InvalidInput("no trivialization: the value is not a cocycle");
  std::mt19937_64 rng(0x5eed);
  for (int attempt = 0; attempt < 400; ++attempt) {
    Vec v(N * D, zero);
    if (attempt < static_cast<int>(K.size())) {
      v = K[static_cast<std::size_t>(attempt)];
      // first nonzero coordinate 1, so that χ = y^{-1}⊗y gives α = y
      auto lead = std::find_if(v.begin(), v.end(), [](const Elem& e) { return !e.is_zero(); });
      Elem scale = lead->inverse();
      for (auto& e : v) e *= scale;
    } else {
      for (const auto& b : K) {
        Elem c = random_scalar(A->field(), rng);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] += c * b[i];
      }
    }
    auto alpha = to_algebra(A, v, N);
    if (mat_det(alpha, n).is_unit()) return alpha;
  }
  throw InvalidInput("no invertible trivialization found");
}

/// Units of a Laurent algebra are c·u^v; χ = u^{-v}⊗u^v determines x = u^v.
AlgElement gm_trivialize_laurent(const TensorContext& ctx, const AlgElement& chi) {
  const AlgebraPtr& A = ctx.A;
  const std::size_t r = A->generators();
  if (chi.poly().size() == 1) {
    const auto& [m, c] = *chi.poly().begin();
    Monomial v(m.begin() + static_cast<long>(r), m.end());
    AlgElement x = A->from_poly({{v, A->field().one()}});
    if (c.is_one() && ctx.d1(x) * ctx.d2(x).inverse().value() == chi) return x;
  }
  throw InvalidInput("no monomial trivialization over the Laurent algebra");
}

AlgElement ga_trivialize(const TensorContext& ctx, const AlgElement& chi) {
  const AlgebraPtr& A = ctx.A;
  AlgElement alpha;
  if (A->is_findim()) {
    Matrix M1 = ctx.d1.matrix(), M2 = ctx.d2.matrix();
    Matrix M(M1.rows(), M1.cols(), A->field().zero());
    for (std::size_t i = 0; i < M.rows(); ++i)
      for (std::size_t j = 0; j < M.cols(); ++j) M(i, j) = M1(i, j) - M2(i, j);
    auto sol = solve(M, chi.coords());
    if (!sol) throw InvalidInput("no trivialization: the value is not a cocycle");
    alpha = A->from_coords(*sol);
  } else {
    // δ₁ and δ₂ send y^m to distinct monomials of A⊗A, so α is read off the coefficients of 1⊗y^m.
    const std::size_t r = A->generators();
    SparsePoly p;
    for (const auto& [m, c] : chi.poly()) {
      bool left_free = std::all_of(m.begin(), m.begin() + static_cast<long>(r), [](long e) { return e == 0; });
      if (left_free) p[Monomial(m.begin() + static_cast<long>(r), m.end())] = c;
    }
    alpha = A->from_poly(std::move(p));
  }
  if (ctx.d1(alpha) - ctx.d2(alpha) != chi) throw InvalidInput("no trivialization: the value is not a cocycle");
  return alpha;
}

AlgElement gm_trivialize(const TensorContext& ctx, const AlgElement& chi) {
  if (ctx.A->is_findim()) return gl_trivialize_findim(ctx, {chi}, 1)[0];
  if (ctx.A->kind() == SigmaAlgebra::Kind::Laurent) return gm_trivialize_laurent(ctx, chi);
  throw Unsupported("multiplicative trivialization needs a finite-dimensional or Laurent algebra");
}

GroupElement trivialize_value(const Group& G, const TensorContext& ctx, const GroupElement& chi) {
  if (chi == G.identity(ctx.AA)) return G.identity(ctx.A);
  switch (G.kind()) {
    case Group::Kind::Additive:
      return {{ga_trivialize(ctx, chi.entries[0])}};
    case Group::Kind::Diagonal: {
      GroupElement x;
      for (const auto& e : chi.entries) x.entries.push_back(gm_trivialize(ctx, e));
      return x;
    }
    case Group::Kind::Matrix:
    case Group::Kind::Twist:
      if (G.n() == 1) return {{gm_trivialize(ctx, chi.entries[0])}};
      if (!ctx.A->is_findim()) throw Unsupported("GL_n trivialization needs a finite-dimensional algebra");
      return {gl_trivialize_findim(ctx, chi.entries, G.n())};
    case Group::Kind::Product: {
      auto a = trivialize_value(*G.first(), ctx, G.first_part(chi));
      auto b = trivialize_value(*G.second(), ctx, G.second_part(chi));
      return G.merge(a, b);
    }
  }
  throw Unsupported("unknown group kind");
}

// ---- equivalence routes

Decision equivalent_to(GroupElement alpha) { return {Verdict::Equivalent, std::move(alpha), ""}; }
Decision inequivalent(std::string why) { return {Verdict::Inequivalent, std::nullopt, std::move(why)}; }
Decision undecided(std::string why) { return {Verdict::Undecided, std::nullopt, std::move(why)}; }

Decision by_enumeration(const Cocycle& c1, const Cocycle& c2, std::uint64_t budget) {
  const AlgebraPtr& A = c1.algebra();
  if (!A->is_findim() || !A->field().is_finite()) return undecided("exhaustive search needs a finite field and a finite-dimensional algebra");
  std::vector<GroupElement> pts;
  try {
    pts = c1.G->enumerate_points(A, budget);
  } catch (const BudgetExhausted&) {
    return undecided("budget-exhausted");
  }
  for (const auto& alpha : pts)
    if (act(c2, alpha) == c1.value) return equivalent_to(alpha);
  return inequivalent("exhaustive-search");
}

/// α = β + c with L(c) = −L(β), where χ₁ − χ₂ = δ₁(β) − δ₂(β).
Decision additive_route(const Cocycle& c1, const Cocycle& c2) {
  const Group& G = *c1.G;
  const TensorContext& ctx = *c1.ctx;
  AlgElement beta = ga_trivialize(ctx, c1.value.entries[0] - c2.value.entries[0]);
  if (!G.op()) return equivalent_to({{beta}});
  const DifferenceOperator& L = *G.op();
  auto Lb = L(beta).as_scalar();
  if (!Lb) throw InvalidInput("L of the trivialization is not constant");
  AdditiveSolution s;
  try {
    s = solve_additive(L, -*Lb);
  } catch (const Unsupported& e) {
    return undecided(e.what());
  }
  if (!s.solution) return inequivalent(s.certificate);
  return equivalent_to({{beta + ctx.A->scalar(*s.solution)}});
}

/// Candidates α = x₁·c·x₂^{-1} with c ∈ 𝒢(k) for the ambient group 𝒢.
GroupElement from_constant(const Group& G, const GroupElement& x1, const GroupElement& x2inv, const std::vector<Elem>& c) {
  const AlgebraPtr& A = x1.algebra();
  std::vector<AlgElement> cm;
  for (const auto& e : c) cm.push_back(A->scalar(e));
  if (G.kind() == Group::Kind::Diagonal) {
    GroupElement r = x1;
    for (std::size_t i = 0; i < r.entries.size(); ++i) r.entries[i] = x1.entries[i] * cm[i] * x2inv.entries[i];
    return r;
  }
  return {mat_mul(mat_mul(x1.entries, cm, G.n()), x2inv.entries, G.n())};
}

GroupElement ambient_inverse(const Group& G, const GroupElement& x) {
  if (G.kind() == Group::Kind::Diagonal) return G.inv(x);
  auto r = mat_inv(x.entries, G.n());
  if (!r) throw InvalidInput("trivialization is not invertible");
  return {*r};
}

Decision constant_search(const Cocycle& c1, const GroupElement& x1, const GroupElement& x2inv, std::uint64_t budget) {
  const Group& G = *c1.G;
  const Field& k = G.field();
  const std::size_t slots = G.size();
  const std::uint64_t q = k.size();
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < slots; ++i) {
    if (total > budget / q) return undecided("budget-exhausted");
    total *= q;
  }
  auto elems = k.elements();
  std::vector<Elem> c(slots);
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    std::uint64_t rest = idx;
    bool zero_entry = false;
    for (std::size_t i = 0; i < slots; ++i) {
      c[i] = elems[rest % q];
      rest /= q;
      zero_entry = zero_entry || c[i].is_zero();
    }
    if (G.kind() == Group::Kind::Diagonal && zero_entry) continue;
    if (G.kind() != Group::Kind::Diagonal) {
      std::vector<AlgElement> cm;
      for (const auto& e : c) cm.push_back(x1.algebra()->scalar(e));
      if (!mat_det(cm, G.n()).is_unit()) continue;
    }
    GroupElement alpha = from_constant(G, x1, x2inv, c);
    if (G.contains(alpha)) return equivalent_to(alpha);
  }
  return inequivalent("exhaustive-search");
}

std::vector<Elem> scalar_entries(const std::vector<AlgElement>& m) {
  std::vector<Elem> out;
  for (const auto& e : m) {
    auto s = e.as_scalar();
    if (!s) return {};
    out.push_back(*s);
  }
  return out;
}

Decision mu_route(const Cocycle& c1, const GroupElement& x1, const GroupElement& x2inv) {
  const Field& k = c1.G->field();
  AlgElement r = x1.entries[0] * x2inv.entries[0];
  auto s = (r * r).as_scalar();
  if (!s) throw InvalidInput("square of the trivialization quotient is not constant");
  auto root = k.sqrt(s->inverse());
  if (!root) return inequivalent("square-obstruction");
  for (const Elem& c : {*root, -*root}) {
    GroupElement alpha{{c * r}};
    if (c1.G->contains(alpha)) return equivalent_to(alpha);
  }
  return inequivalent("sigma-obstruction");
}

/// Twist groups over infinite fields: trivial ψ through σ^{-d}, GL_1 with ψ = id through
/// the rational kernel of σ^d − m.
Decision twist_route(const Cocycle& c1, const GroupElement& x1, const GroupElement& x2inv) {
  const Group& G = *c1.G;
  const Field& k = G.field();
  const unsigned n = G.n(), d = G.d();
  auto x2 = mat_inv(x2inv.entries, n).value();
  if (G.psi() == Psi::Trivial) {
    auto lhs = mat_inv(Group::sigma(x1, d).entries, n).value();
    auto M = scalar_entries(mat_mul(lhs, Group::sigma({x2}, d).entries, n));
    if (M.empty()) return inequivalent("not-constant");
    std::vector<Elem> c;
    try {
      for (const auto& m : M) {
        std::optional<Elem> y = m;
        for (unsigned i = 0; i < d && y; ++i) y = k.sigma_preimage(*y);
        if (!y) return inequivalent("not-in-sigma-image");
        c.push_back(*y);
      }
    } catch (const Unsupported& e) {
      return undecided(e.what());
    }
    GroupElement alpha = from_constant(G, x1, x2inv, c);
    if (G.contains(alpha)) return equivalent_to(alpha);
    return inequivalent("determinant-obstruction");
  }
  if (G.psi() == Psi::Identity && n == 1 && (k.kind() == Field::Kind::Shift || k.kind() == Field::Kind::Rationals)) {
    // σ^d(r c) = r c with r = x₁/x₂ gives σ^d(c) = m c, m = r / σ^d(r).
    AlgElement r = x1.entries[0] * x2inv.entries[0];
    auto m = (r * r.sigma(d).inverse().value()).as_scalar();
    if (!m) return inequivalent("not-constant");
    std::vector<Elem> lambda(d, k.zero());
    lambda[0] = -*m;
    auto sol = solve_additive(DifferenceOperator(k, lambda), k.zero());
    for (const auto& c : sol.kernel) {
      if (c.is_zero()) continue;
      GroupElement alpha = from_constant(G, x1, x2inv, {c});
      if (G.contains(alpha)) return equivalent_to(alpha);
    }
    return inequivalent("no-rational-solution");
  }
  return undecided("no decision procedure for " + G.descriptor() + " over " + k.descriptor());
}

Decision structured(const Cocycle& c1, const Cocycle& c2, std::uint64_t budget) {
  const Group& G = *c1.G;
  const Field& k = G.field();
  if (is_additive(G)) return additive_route(c1, c2);
  GroupElement x1, x2inv;
  try {
    x1 = trivialize_value(G, *c1.ctx, c1.value);
    x2inv = ambient_inverse(G, trivialize_value(G, *c2.ctx, c2.value));
  } catch (const Unsupported& e) {
    return undecided(e.what());
  }
  if (G.kind() == Group::Kind::Matrix) {
    if (G.relations().empty()) return equivalent_to(from_constant(G, x1, x2inv, mat_identity_scalars(k, G.n())));
  }
  if (G.descriptor() == "mu2sigma") {
    try {
      return mu_route(c1, x1, x2inv);
    } catch (const Unsupported&) {
      // characteristic 2: fall through to the search over constants
    }
  }
  if (k.is_finite()) return constant_search(c1, x1, x2inv, budget);
  if (G.descriptor().rfind("sl:", 0) == 0) {
    std::vector<Elem> c = mat_identity_scalars(k, G.n());
    auto ratio = (mat_det(x1.entries, G.n()) * mat_det(x2inv.entries, G.n())).as_scalar();
    if (!ratio) throw InvalidInput("determinant ratio is not constant");
    c[0] = ratio->inverse();
    return equivalent_to(from_constant(G, x1, x2inv, c));
  }
  if (G.kind() == Group::Kind::Twist) return twist_route(c1, x1, x2inv);
  return undecided("no decision procedure for " + G.descriptor() + " over " + k.descriptor());
}

Decision combine(const Group& G, const Decision& a, const Decision& b) {
  if (a.verdict == Verdict::Inequivalent) return inequivalent("first factor: " + a.certificate);
  if (b.verdict == Verdict::Inequivalent) return inequivalent("second factor: " + b.certificate);
  if (a.verdict == Verdict::Equivalent && b.verdict == Verdict::Equivalent) return equivalent_to(G.merge(*a.witness, *b.witness));
  return undecided(a.verdict == Verdict::Undecided ? "first factor: " + a.certificate : "second factor: " + b.certificate);
}

std::vector<std::uint64_t> key_of(const GroupElement& x) {
  std::vector<std::uint64_t> k;
  for (const auto& e : x.entries)
    for (const auto& c : e.coords()) k.push_back(c.finite().code);
  return k;
}

}  // namespace

CocycleCheck check_cocycle(const GroupPtr& G, const TensorContextPtr& ctx, const GroupElement& chi) {
  if (chi.entries.size() != G->size()) return {false, "shape: expected " + std::to_string(G->size()) + " entries"};
  for (const auto& e : chi.entries)
    if (e.algebra() != ctx->AA) throw MismatchError("cocycle value is not over A#A");
  std::string v = G->violation(chi);
  if (!v.empty()) return {false, "membership: " + v};
  if (face(chi, ctx->e2) != G->mul(face(chi, ctx->e1), face(chi, ctx->e3))) return {false, "cocycle identity: e2(chi) != e1(chi)*e3(chi)"};
  return {true, ""};
}

Cocycle make_cocycle(const GroupPtr& G, const TensorContextPtr& ctx, GroupElement chi) {
  auto r = check_cocycle(G, ctx, chi);
  if (!r.ok) throw InvalidInput("not a cocycle: " + r.reason);
  return {G, ctx, std::move(chi)};
}

Cocycle trivial_cocycle(const GroupPtr& G, const TensorContextPtr& ctx) { return {G, ctx, G->identity(ctx->AA)}; }

Cocycle coboundary(const GroupPtr& G, const TensorContextPtr& ctx, const GroupElement& alpha) {
  if (alpha.entries.empty() || alpha.algebra() != ctx->A) throw MismatchError("coboundary of an element outside A");
  std::string v = G->violation(alpha);
  if (!v.empty()) throw InvalidInput("coboundary of a non-member: " + v);
  return {G, ctx, G->mul(face(alpha, ctx->d1), G->inv(face(alpha, ctx->d2)))};
}

GroupElement act(const Cocycle& chi, const GroupElement& alpha) {
  const Group& G = *chi.G;
  return G.mul(G.mul(face(alpha, chi.ctx->d1), chi.value), G.inv(face(alpha, chi.ctx->d2)));
}

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Equivalent:
      return "equivalent";
    case Verdict::Inequivalent:
      return "inequivalent";
    case Verdict::Undecided:
      return "undecided";
  }
  return "";
}

bool verify_equivalence(const Cocycle& c1, const Cocycle& c2, const GroupElement& alpha) {
  require_same_context(c1, c2);
  if (alpha.entries.size() != c1.G->size() || alpha.algebra() != c1.ctx->A || !c1.G->contains(alpha)) return false;
  return act(c2, alpha) == c1.value;
}

Decision equivalent(const Cocycle& c1, const Cocycle& c2, EquivMethod method, std::uint64_t budget) {
  require_same_context(c1, c2);
  if (c1.value == c2.value) return equivalent_to(c1.G->identity(c1.ctx->A));
  if (method == EquivMethod::Enumerate) return by_enumeration(c1, c2, budget);
  Decision d;
  if (c1.G->kind() == Group::Kind::Product) {
    auto [a1, b1] = product_split(c1);
    auto [a2, b2] = product_split(c2);
    d = combine(*c1.G, equivalent(a1, a2, method, budget), equivalent(b1, b2, method, budget));
  } else {
    d = structured(c1, c2, budget);
  }
  if (d.verdict == Verdict::Equivalent && !verify_equivalence(c1, c2, *d.witness)) throw InvalidInput("equivalence witness failed verification");
  if (d.verdict == Verdict::Undecided && method == EquivMethod::Auto && d.certificate != "budget-exhausted") {
    const AlgebraPtr& A = c1.algebra();
    if (A->is_findim() && A->field().is_finite()) return by_enumeration(c1, c2, budget);
  }
  return d;
}

Cocycle pushforward_algebra(const Cocycle& c, const AlgMorphism& h, const TensorContextPtr& ctxB) {
  if (h.source() != c.ctx->A || h.target() != ctxB->A) throw MismatchError("morphism does not fit the cocycle and target context");
  AlgMorphism hh = AlgMorphism::on_tensor(c.ctx->AA, h.compose(ctxB->d2), h.compose(ctxB->d1));
  return make_cocycle(c.G, ctxB, Group::map(c.value, hh));
}

Cocycle pushforward_group(const Cocycle& c, const GroupPtr& H) {
  if (H->size() != c.G->size()) throw MismatchError("target group has another shape");
  return make_cocycle(H, c.ctx, c.value);
}

Cocycle pushforward_sigma_power(const Cocycle& c, unsigned d, const GroupPtr& H) {
  if (H->size() != c.G->size()) throw MismatchError("target group has another shape");
  return make_cocycle(H, c.ctx, Group::sigma(c.value, d));
}

std::pair<Cocycle, Cocycle> product_split(const Cocycle& c) {
  if (c.G->kind() != Group::Kind::Product) throw MismatchError("not a product group");
  return {make_cocycle(c.G->first(), c.ctx, c.G->first_part(c.value)), make_cocycle(c.G->second(), c.ctx, c.G->second_part(c.value))};
}

Cocycle product_merge(const GroupPtr& G, const Cocycle& first, const Cocycle& second) {
  if (G->kind() != Group::Kind::Product) throw MismatchError("not a product group");
  if (first.ctx->A != second.ctx->A) throw MismatchError("factors over different algebras");
  if (first.G->descriptor() != G->first()->descriptor() || second.G->descriptor() != G->second()->descriptor())
    throw MismatchError("factor groups do not match the product");
  return make_cocycle(G, first.ctx, G->merge(first.value, second.value));
}

GroupElement trivialize(const Cocycle& c) { return trivialize_value(*c.G, *c.ctx, c.value); }

MuInvariant mu_invariant(const Cocycle& c) {
  if (c.G->descriptor() != "mu2sigma") throw MismatchError("mu invariant needs the mu2sigma group");
  AlgElement alpha = trivialize(c).entries[0];
  auto a = (alpha * alpha).as_scalar();
  auto b = (alpha.sigma() * alpha.inverse().value()).as_scalar();
  if (!a || !b) throw InvalidInput("trivialization does not give constant invariants");
  return {*a, *b, alpha};
}

AdditiveInvariant additive_invariant(const Cocycle& c) {
  if (!is_additive(*c.G)) throw MismatchError("additive invariant needs an additive group");
  AlgElement alpha = trivialize(c).entries[0];
  if (!c.G->op()) return {c.G->field().zero(), alpha};
  auto a = (*c.G->op())(alpha).as_scalar();
  if (!a) throw InvalidInput("L of the trivialization is not constant");
  return {*a, alpha};
}

EnumeratedH1 enumerate_h1(const GroupPtr& G, const TensorContextPtr& ctx, std::uint64_t budget) {
  EnumeratedH1 out;
  for (auto& chi : G->enumerate_points(ctx->AA, budget))
    if (check_cocycle(G, ctx, chi).ok) out.cocycles.push_back(std::move(chi));
  std::map<std::vector<std::uint64_t>, std::size_t> index;
  for (std::size_t i = 0; i < out.cocycles.size(); ++i) index[key_of(out.cocycles[i])] = i;
  auto alphas = G->enumerate_points(ctx->A, budget);
  const std::size_t none = out.cocycles.size();
  out.class_of.assign(out.cocycles.size(), none);
  for (std::size_t i = 0; i < out.cocycles.size(); ++i) {
    if (out.class_of[i] != none) continue;
    std::size_t cls = out.representatives.size();
    out.representatives.push_back(i);
    Cocycle c{G, ctx, out.cocycles[i]};
    for (const auto& a : alphas) {
      auto it = index.find(key_of(act(c, a)));
      if (it == index.end()) throw InvalidInput("orbit leaves the cocycle set");
      out.class_of[it->second] = cls;
    }
  }
  return out;
}

}  // namespace dcoh
