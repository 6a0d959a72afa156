#include <map>
#include <random>
#include <set>

#include "doctest.h"
#include "dcoh/cocycles.hpp"
#include "oracles.hpp"
#include "random_algebras.hpp"

using namespace dcoh;

namespace {

Field gf9() { return Field::parse("GF(9);frob^1"); }

oracle::NaiveGF naive(const Field& F) {
  return {F.gf().p(), std::vector<std::uint64_t>(F.gf().modulus().begin(), F.gf().modulus().end())};
}

std::vector<std::pair<Elem, Elem>> mu_pairs(const Field& F) {
  std::vector<std::pair<Elem, Elem>> out;
  for (const auto& a : F.elements())
    for (const auto& b : F.elements())
      if (!a.is_zero() && !b.is_zero() && F.sigma(a) == a * b * b) out.emplace_back(a, b);
  return out;
}

/// Oracle class label of an (a, b) pair over GF(9), σ = frob^1.
std::size_t mu_label(const Field& F, const Elem& a, const Elem& b) {
  static const auto nf = naive(F);
  static const auto pairs = oracle::mu2_pairs(nf, 1);
  static const auto labels = oracle::mu2_orbit_labels(nf, 1);
  for (std::size_t i = 0; i < pairs.size(); ++i)
    if (pairs[i].first == a.finite().code && pairs[i].second == b.finite().code) return labels[i];
  FAIL("pair outside M");
  return 0;
}

GroupElement one_entry(const AlgElement& e) { return {{e}}; }

/// Matrix groups of size 2 are enumerated over GF(3)-algebras to stay within budget.
Field field_for(const char* g) {
  std::string s = g;
  return s.find('2') != std::string::npos && (s.rfind("gl", 0) == 0 || s.rfind("sl", 0) == 0 || s.rfind("twist", 0) == 0)
             ? Field::parse("GF(3)")
             : gf9();
}

}  // namespace

TEST_CASE("cocycle checks") {
  Field Q = Field::rationals();
  Elem a = Q.from_int(2);
  auto A = make_mu_algebra(Q, a, Q.one());
  auto ctx = tensor_context(A);
  auto mu = Group::mu2sigma(Q);
  CHECK(check_cocycle(mu, ctx, mu->identity(ctx->AA)).ok);
  AlgElement y = A->basis(1);
  GroupElement chi = one_entry(a.inverse() * pure_tensor(ctx->AA, y, y));
  CHECK(check_cocycle(mu, ctx, chi).ok);
  CHECK(chi.entries[0] == ctx->AA->parse_element("(1/2)*(y#y)"));

  auto bad = check_cocycle(mu, ctx, one_entry(pure_tensor(ctx->AA, y, A->one())));
  CHECK_FALSE(bad.ok);
  CHECK(bad.reason.find("membership") == 0);

  auto ga = Group::ga(Q);
  auto split = tensor_context(make_split(Q, 2));
  auto constant = check_cocycle(ga, split, one_entry(split->AA->one()));
  CHECK_FALSE(constant.ok);
  CHECK(constant.reason.find("cocycle identity") == 0);
  CHECK_THROWS_AS(check_cocycle(ga, split, one_entry(split->A->one())), MismatchError);
  CHECK(check_cocycle(ga, split, {{split->AA->one(), split->AA->one()}}).reason.find("shape") == 0);
  CHECK_THROWS_AS(make_cocycle(ga, split, one_entry(split->AA->one())), InvalidInput);

  // 1⊗α − α⊗1 with L(α) ∈ k over a polynomial σ-algebra
  Field S = Field::parse("QQ(t);shift");
  auto P = parse_algebra(S, "freepoly:1;sigma(y1)=y1+1/t");
  auto pctx = tensor_context(P);
  auto add = Group::parse(S, "addker:s - 1");
  AlgElement al = P->basis(0);
  CHECK(check_cocycle(add, pctx, one_entry(pctx->d1(al) - pctx->d2(al))).ok);
  // α = y1² has L(α) = 2 y1/t + 1/t², not constant
  CHECK_FALSE(check_cocycle(add, pctx, one_entry(pctx->d1(al * al) - pctx->d2(al * al))).ok);
}

TEST_CASE("coboundaries") {
  Field F = gf9();
  std::mt19937_64 rng(5);
  auto gm = Group::gm(F);
  auto A = testgen::random_findim(F, rng, 3);
  auto ctx = tensor_context(A);
  CHECK(coboundary(gm, ctx, gm->identity(A)).value == gm->identity(ctx->AA));
  for (std::uint64_t i = 0; i < A->element_count(); i += 37) {
    AlgElement u = A->element_at(i);
    if (!u.is_unit()) continue;
    auto c = coboundary(gm, ctx, one_entry(u));
    CHECK(c.value.entries[0] == pure_tensor(ctx->AA, A->one(), u) * pure_tensor(ctx->AA, *u.inverse(), A->one()));
    CHECK(check_cocycle(gm, ctx, c.value).ok);
  }
  auto ga = Group::ga(F);
  AlgElement x = A->element_at(A->element_count() / 3);
  CHECK(coboundary(ga, ctx, one_entry(x)).value.entries[0] == pure_tensor(ctx->AA, A->one(), x) - pure_tensor(ctx->AA, x, A->one()));
  CHECK_THROWS_AS(coboundary(Group::mu2sigma(F), ctx, one_entry(A->scalar(F.parse_element("w")))), InvalidInput);

  // property: coboundaries of members are cocycles
  for (const char* g : {"gl:2", "sl:2", "twist:GL1;d=1;psi=id", "diag:2;y1^2*s(y2)", "prod(mu2sigma|addker:s-1)"}) {
    Field K = field_for(g);
    auto G = Group::parse(K, g);
    auto R = testgen::random_findim(K, rng, 2);
    auto rctx = tensor_context(R);
    auto pts = G->enumerate_points(R);
    for (std::size_t i = 0; i < pts.size(); i += 1 + pts.size() / 8) CHECK(check_cocycle(G, rctx, coboundary(G, rctx, pts[i]).value).ok);
  }
}

TEST_CASE("trivialization recovers a point of the ambient group") {
  std::mt19937_64 rng(17);
  auto ambient = [](const Group& G) {
    if (G.kind() == Group::Kind::Product) return Group::parse(G.field(), "prod(gm|ga)");
    if (G.kind() == Group::Kind::Diagonal) return Group::parse(G.field(), "diag:2");
    return Group::gl(G.field(), G.n());
  };
  for (const char* g : {"gl:2", "sl:2", "twist:SL2;d=1;psi=transposeinv", "diag:2;s(y1)/y1", "prod(gm|ga)"}) {
    Field K = field_for(g);
    auto G = Group::parse(K, g);
    for (int trial = 0; trial < 3; ++trial) {
      auto R = testgen::random_findim(K, rng, 2);
      auto ctx = tensor_context(R);
      auto pts = G->enumerate_points(R);
      const GroupElement& x = pts[static_cast<std::size_t>(rng() % pts.size())];
      auto c = coboundary(G, ctx, x);
      GroupElement t = trivialize(c);
      CHECK(coboundary(ambient(*G), ctx, t).value == c.value);
    }
  }
}

TEST_CASE("mu invariants over GF(9) agree with enumeration") {
  Field F = gf9();
  auto mu = Group::mu2sigma(F);
  auto pairs = mu_pairs(F);
  REQUIRE(pairs.size() == 16);
  std::size_t pair_checks = 0;
  for (const auto& [a, b] : pairs) {
    auto A = make_mu_algebra(F, a, b);
    auto ctx = tensor_context(A);
    AlgElement y = A->basis(1);
    Cocycle chi = make_cocycle(mu, ctx, one_entry(a.inverse() * pure_tensor(ctx->AA, y, y)));
    auto inv = mu_invariant(chi);
    CHECK(inv.alpha == y);
    CHECK(inv.a == a);
    CHECK(inv.b == b);
    auto triv = mu_invariant(trivial_cocycle(mu, ctx));
    CHECK(triv.alpha == A->one());
    CHECK(triv.a == F.one());
    CHECK(triv.b == F.one());

    auto h1 = enumerate_h1(mu, ctx);
    // invariant constant on classes, and distinct classes have distinct invariants
    std::map<std::size_t, std::size_t> label_of_class;
    std::set<std::size_t> labels;
    for (std::size_t i = 0; i < h1.cocycles.size(); ++i) {
      auto m = mu_invariant({mu, ctx, h1.cocycles[i]});
      std::size_t lab = mu_label(F, m.a, m.b);
      auto [it, fresh] = label_of_class.emplace(h1.class_of[i], lab);
      CHECK(it->second == lab);
      labels.insert(lab);
    }
    CHECK(labels.size() == h1.classes());
    for (std::size_t i = 0; i < h1.cocycles.size(); ++i)
      for (std::size_t j = 0; j < h1.cocycles.size(); ++j) {
        Cocycle c1{mu, ctx, h1.cocycles[i]}, c2{mu, ctx, h1.cocycles[j]};
        auto s = equivalent(c1, c2, EquivMethod::Structured);
        auto e = equivalent(c1, c2, EquivMethod::Enumerate);
        CHECK(s.verdict == e.verdict);
        CHECK((s.verdict == Verdict::Equivalent) == (h1.class_of[i] == h1.class_of[j]));
        if (s.witness) CHECK(verify_equivalence(c1, c2, *s.witness));
        ++pair_checks;
      }
  }
  CHECK(pair_checks > 16);
}

TEST_CASE("mu equivalence over QQ uses squares") {
  Field Q = Field::rationals();
  auto mu = Group::mu2sigma(Q);
  auto A = make_mu_algebra(Q, Q.from_int(4), Q.one());
  auto ctx = tensor_context(A);
  AlgElement y = A->basis(1);
  Cocycle c1 = make_cocycle(mu, ctx, one_entry(Q.from_rational(mpq_class(1, 4)) * pure_tensor(ctx->AA, y, y)));
  Cocycle triv = trivial_cocycle(mu, ctx);
  // y/2 squares to 1 and is σ-fixed: χ is a coboundary
  auto d = equivalent(c1, triv);
  REQUIRE(d.verdict == Verdict::Equivalent);
  CHECK(verify_equivalence(c1, triv, *d.witness));

  auto B = make_mu_algebra(Q, Q.from_int(2), Q.one());
  auto bctx = tensor_context(B);
  AlgElement z = B->basis(1);
  Cocycle c2 = make_cocycle(mu, bctx, one_entry(Q.from_rational(mpq_class(1, 2)) * pure_tensor(bctx->AA, z, z)));
  auto d2 = equivalent(c2, trivial_cocycle(mu, bctx));
  CHECK(d2.verdict == Verdict::Inequivalent);
  CHECK(d2.certificate == "square-obstruction");

  auto C = make_mu_algebra(Q, Q.one(), -Q.one());
  auto cctx = tensor_context(C);
  AlgElement v = C->basis(1);
  Cocycle c3 = make_cocycle(mu, cctx, one_entry(pure_tensor(cctx->AA, v, v)));
  auto d3 = equivalent(c3, trivial_cocycle(mu, cctx));
  CHECK(d3.verdict == Verdict::Inequivalent);
  CHECK(d3.certificate == "sigma-obstruction");
}

TEST_CASE("additive equivalence over the shift field") {
  Field S = Field::parse("QQ(t);shift");
  auto add = Group::parse(S, "addker:s - 1");
  auto P = parse_algebra(S, "freepoly:2;sigma(y1)=y1+1/t;sigma(y2)=y2+1/(t^2+t)");
  auto ctx = tensor_context(P);
  auto cob = [&](const AlgElement& a) { return make_cocycle(add, ctx, one_entry(ctx->d1(a) - ctx->d2(a))); };
  Cocycle zero = trivial_cocycle(add, ctx);
  Cocycle c1 = cob(P->basis(0)), c2 = cob(P->basis(1));
  CHECK(additive_invariant(zero).a == S.zero());
  CHECK(additive_invariant(c1).a == S.parse_element("1/t"));
  CHECK(additive_invariant(c1).alpha == P->basis(0));
  CHECK(additive_invariant(c2).a == S.parse_element("1/(t^2+t)"));

  auto d = equivalent(c1, zero);
  CHECK(d.verdict == Verdict::Inequivalent);
  CHECK(d.certificate == "no-rational-solution");
  auto e = equivalent(c2, zero);
  REQUIRE(e.verdict == Verdict::Equivalent);
  CHECK(verify_equivalence(c2, zero, *e.witness));
  // y2 + 1/t lies in ker(σ − 1)
  CHECK(e.witness->entries[0] == P->parse_element("y2 + 1/t"));

  std::mt19937_64 rng(3);
  for (int i = 0; i < 5; ++i) {
    Elem u = S.random(rng, 2), w = S.random(rng, 2);
    Cocycle x = cob(P->scalar(u) + P->basis(0) + P->basis(1));
    Cocycle y = cob(P->scalar(w) + P->basis(1) - P->basis(0) - P->basis(0));
    Cocycle sum = make_cocycle(add, ctx, add->mul(x.value, y.value));
    CHECK(additive_invariant(sum).a == additive_invariant(x).a + additive_invariant(y).a);
  }
}

TEST_CASE("additive invariant of the generic polynomial algebra") {
  // σ(y1) = y2, σ(y2) = −λ1 y2 − λ0 y1 + a gives L(y1) = a for L = σ² + λ1 σ + λ0.
  Field S = Field::parse("QQ(t);shift");
  auto L = DifferenceOperator::parse(S, "s^2 + t*s - 2");
  auto P = parse_algebra(S, "freepoly:2;sigma(y1)=y2;sigma(y2)=-t*y2+2*y1+1/(t+3)");
  auto ctx = tensor_context(P);
  auto G = Group::additive(L);
  AlgElement y1 = P->basis(0);
  Cocycle c = make_cocycle(G, ctx, one_entry(ctx->d1(y1) - ctx->d2(y1)));
  CHECK(additive_invariant(c).a == S.parse_element("1/(t+3)"));
  CHECK(pushforward_group(c, Group::ga(S)).G->descriptor() == "ga");

  // linearity on finite instances
  Field F = gf9();
  auto Lf = DifferenceOperator::parse(F, "s - 1");
  auto Gf = Group::additive(Lf);
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 4; ++trial) {
    auto R = testgen::random_findim(F, rng, 3);
    auto rctx = tensor_context(R);
    std::vector<Cocycle> cs;
    for (std::uint64_t i = 0; i < R->element_count() && cs.size() < 6; i += 1 + R->element_count() / 40) {
      AlgElement x = R->element_at(i);
      if (Lf(x).as_scalar()) cs.push_back(make_cocycle(Gf, rctx, one_entry(rctx->d1(x) - rctx->d2(x))));
    }
    for (std::size_t i = 0; i + 1 < cs.size(); ++i) {
      Cocycle sum = make_cocycle(Gf, rctx, Gf->mul(cs[i].value, cs[i + 1].value));
      CHECK(additive_invariant(sum).a == additive_invariant(cs[i]).a + additive_invariant(cs[i + 1]).a);
    }
  }
}

TEST_CASE("equivalence is an equivalence relation with composable witnesses") {
  std::mt19937_64 rng(23);
  for (const char* g : {"gl:2", "twist:GL1;d=2;psi=transposeinv", "diag:2;y1^2*s(y2)"}) {
    Field K = field_for(g);
    auto G = Group::parse(K, g);
    auto R = testgen::random_findim(K, rng, 2);
    auto ctx = tensor_context(R);
    auto pts = G->enumerate_points(R);
    Cocycle base = coboundary(G, ctx, pts[static_cast<std::size_t>(rng() % pts.size())]);
    const GroupElement& a = pts[static_cast<std::size_t>(rng() % pts.size())];
    const GroupElement& b = pts[static_cast<std::size_t>(rng() % pts.size())];
    Cocycle c2{G, ctx, act(base, b)};
    Cocycle c1{G, ctx, act(c2, a)};
    auto refl = equivalent(c1, c1);
    CHECK(refl.verdict == Verdict::Equivalent);
    CHECK(verify_equivalence(c1, c2, a));
    CHECK(verify_equivalence(c2, c1, G->inv(a)));
    CHECK(verify_equivalence(c1, base, G->mul(a, b)));
    auto d = equivalent(c1, base);
    REQUIRE(d.verdict == Verdict::Equivalent);
    CHECK(verify_equivalence(c1, base, *d.witness));
  }
}

TEST_CASE("pushforwards") {
  Field F = gf9();
  auto mu = Group::mu2sigma(F);
  auto pairs = mu_pairs(F);
  const auto& [a, b] = pairs[3];
  auto A = make_mu_algebra(F, a, b);
  auto ctx = tensor_context(A);
  AlgElement y = A->basis(1);
  Cocycle chi = make_cocycle(mu, ctx, one_entry(a.inverse() * pure_tensor(ctx->AA, y, y)));
  CHECK(pushforward_algebra(chi, AlgMorphism::identity(A), ctx).value == chi.value);

  // y ↦ λ^{-1} y′ into μ-algebra(λ² a, σ(λ)/λ · b)
  Elem lam = F.parse_element("w + 1");
  Elem a2 = lam * lam * a, b2 = F.sigma(lam) / lam * b;
  auto B = make_mu_algebra(F, a2, b2);
  auto bctx = tensor_context(B);
  auto h = AlgMorphism::make(A, B, {B->one(), lam.inverse() * B->basis(1)});
  Cocycle pushed = pushforward_algebra(chi, h, bctx);
  CHECK(pushed.value.entries[0] == a2.inverse() * pure_tensor(bctx->AA, B->basis(1), B->basis(1)));
  auto inv = mu_invariant(pushed);
  CHECK(mu_label(F, inv.a, inv.b) == mu_label(F, a, b));

  // equivalent pairs stay equivalent with the pushed witness
  auto pts = mu->enumerate_points(A);
  for (const auto& al : pts) {
    Cocycle moved{mu, ctx, act(chi, al)};
    Cocycle pm = pushforward_algebra(moved, h, bctx);
    CHECK(verify_equivalence(pm, pushed, Group::map(al, h)));
  }

  // first inclusion into A⊗A
  auto aactx = tensor_context(ctx->AA);
  CHECK(check_cocycle(mu, aactx, pushforward_algebra(chi, ctx->d2, aactx).value).ok);

  // subgroup inclusions and σ^d
  CHECK(pushforward_group(chi, Group::gm(F)).G->descriptor() == "gm");
  CHECK_THROWS_AS(pushforward_group(chi, Group::parse(F, "matrix:1;g11 - 1")), InvalidInput);
  auto gm = Group::gm(F);
  AlgElement u = A->parse_element("1 + y");
  REQUIRE(u.is_unit());
  for (unsigned d : {1u, 2u, 3u}) {
    Cocycle cu = coboundary(gm, ctx, one_entry(u));
    CHECK(pushforward_sigma_power(cu, d, gm).value == coboundary(gm, ctx, one_entry(u.sigma(d))).value);
  }
}

TEST_CASE("product splitting") {
  Field F = gf9();
  auto mu = Group::mu2sigma(F);
  auto G = Group::product(mu, mu);
  auto pairs = mu_pairs(F);
  std::mt19937_64 rng(41);
  auto A = make_mu_algebra(F, pairs[5].first, pairs[5].second);
  auto ctx = tensor_context(A);
  auto [s1, s2] = product_split(trivial_cocycle(G, ctx));
  CHECK(s1.value == mu->identity(ctx->AA));
  CHECK(s2.value == mu->identity(ctx->AA));

  auto h1 = enumerate_h1(mu, ctx);
  for (int trial = 0; trial < 20; ++trial) {
    const auto& x = h1.cocycles[static_cast<std::size_t>(rng() % h1.cocycles.size())];
    const auto& z = h1.cocycles[static_cast<std::size_t>(rng() % h1.cocycles.size())];
    Cocycle c = make_cocycle(G, ctx, G->merge(x, z));
    auto [p, q] = product_split(c);
    CHECK(p.value == x);
    CHECK(q.value == z);
    CHECK(product_merge(G, p, q).value == c.value);
  }
  auto h1prod = enumerate_h1(G, ctx);
  CHECK(h1prod.classes() == h1.classes() * h1.classes());
  CHECK_THROWS_AS(product_split(trivial_cocycle(mu, ctx)), MismatchError);
}
