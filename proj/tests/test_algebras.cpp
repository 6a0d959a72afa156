#include <random>

#include "doctest.h"
#include "dcoh/algebras.hpp"
#include "oracles.hpp"
#include "random_algebras.hpp"

using namespace dcoh;

namespace {

std::vector<Field> audit_fields() {
  return {Field::parse("QQ"), Field::parse("GF(4)"), Field::parse("GF(9);frob^1"), Field::parse("QQ(t);shift")};
}

FinDimTables swap_tables(const Field& k) {
  const Elem o = k.one(), z = k.zero();
  FinDimTables t;
  t.dim = 2;
  t.mult = {{{o, z}, {z, z}}, {{z, z}, {z, o}}};
  t.unit = {o, o};
  t.sigma = {{z, o}, {o, z}};
  return t;
}

}  // namespace

TEST_CASE("finite-dimensional algebra validation") {
  Field Q = Field::rationals();
  CHECK(parse_algebra(Q, "k")->dim() == 1);
  AlgebraPtr kk = SigmaAlgebra::findim(Q, swap_tables(Q));
  CHECK(kk->basis(0).sigma() == kk->basis(1));

  FinDimTables bad = swap_tables(Q);
  bad.sigma = {{Q.one(), Q.one()}, {Q.zero(), Q.one()}};  // σ(e1)=e1+e2 breaks σ(e1 e2) = σ(e1)σ(e2)
  CHECK_THROWS_AS(SigmaAlgebra::findim(Q, bad), InvalidInput);

  FinDimTables nonassoc = swap_tables(Q);
  nonassoc.mult[0][0] = {Q.one(), Q.one()};
  CHECK_THROWS_AS(SigmaAlgebra::findim(Q, nonassoc), InvalidInput);

  FinDimTables zero = swap_tables(Q);
  zero.unit = {Q.zero(), Q.zero()};
  CHECK_THROWS_AS(SigmaAlgebra::findim(Q, zero), InvalidInput);
}

TEST_CASE("mu-algebras") {
  Field Q = Field::rationals();
  AlgebraPtr A = make_mu_algebra(Q, Q.from_int(3), Q.from_int(-1));
  AlgElement y = A->parse_element("y");
  REQUIRE(y.inverse());
  CHECK(*y.inverse() == A->parse_element("y/3"));
  CHECK(A->parse_element("1/y") == Q.from_rational(mpq_class(1, 3)) * y);
  CHECK(y.sigma() == -y);
  CHECK((y * y).as_scalar() == Q.from_int(3));
  CHECK(A->one().inverse() == A->one());
  CHECK_THROWS_AS(make_mu_algebra(Q, Q.from_int(3), Q.from_int(2)), InvalidInput);

  // all valid pairs over GF(9), compared with the brute-force list
  Field F = Field::parse("GF(9);frob^1");
  oracle::NaiveGF nf{3, std::vector<std::uint64_t>(F.gf().modulus().begin(), F.gf().modulus().end())};
  auto pairs = oracle::mu2_pairs(nf, 1);
  CHECK(pairs.size() == 16);
  std::size_t built = 0;
  for (const auto& a : F.elements())
    for (const auto& b : F.elements()) {
      if (a.is_zero() || b.is_zero()) continue;
      bool ok = true;
      try {
        make_mu_algebra(F, a, b);
      } catch (const InvalidInput&) {
        ok = false;
      }
      built += ok;
    }
  CHECK(built == pairs.size());
}

TEST_CASE("zero divisors are not units") {
  Field Q = Field::rationals();
  AlgebraPtr kk = SigmaAlgebra::findim(Q, swap_tables(Q));
  CHECK_FALSE(kk->basis(0).inverse().has_value());
  CHECK(kk->parse_element("2*e1 + 3*e2").inverse() == kk->parse_element("e1/2 + e2/3"));
}

TEST_CASE("tensor context shapes and face maps") {
  Field Q = Field::rationals();
  AlgebraPtr A = make_mu_algebra(Q, Q.from_int(2), Q.one());
  auto ctx = tensor_context(A);
  CHECK(ctx->AA->dim() == 4);
  CHECK(ctx->AAA->dim() == 8);
  AlgElement y = A->parse_element("y");
  CHECK(ctx->d1(y) == pure_tensor(ctx->AA, A->one(), y));
  CHECK(ctx->d1(y).coords() == Vec{Q.zero(), Q.one(), Q.zero(), Q.zero()});
  CHECK(ctx->AA->parse_element("1#y") == ctx->d1(y));
  CHECK(ctx->AAA->parse_element("y#1#y") == pure_tensor(ctx->AAA, ctx->d2(y), y));
}

TEST_CASE("face maps and simplicial identities on random algebras") {
  std::mt19937_64 rng(11);
  for (const auto& k : audit_fields()) {
    for (int rep = 0; rep < 6; ++rep) {
      AlgebraPtr A = testgen::random_findim(k, rng, 4);
      auto c = tensor_context(A);
      for (std::size_t i = 0; i < A->dim(); ++i) {
        AlgElement a = A->basis(i);
        CHECK(c->e3(c->d2(a)) == c->e2(c->d2(a)));
        CHECK(c->e2(c->d1(a)) == c->e1(c->d1(a)));
        CHECK(c->e3(c->d1(a)) == c->e1(c->d2(a)));
        for (std::size_t j = 0; j < A->dim(); ++j) {
          AlgElement b = A->basis(j);
          AlgElement ab = pure_tensor(c->AA, a, b);
          // direct construction from pure tensors
          CHECK(c->e1(ab) == pure_tensor(c->AAA, pure_tensor(c->AA, A->one(), a), b));
          CHECK(c->e2(ab) == pure_tensor(c->AAA, pure_tensor(c->AA, a, A->one()), b));
          CHECK(c->e3(ab) == pure_tensor(c->AAA, pure_tensor(c->AA, a, b), A->one()));
        }
      }
    }
  }
}

TEST_CASE("factorwise sigma on tensor squares is semilinear and multiplicative") {
  std::mt19937_64 rng(5);
  for (const auto& k : audit_fields()) {
    AlgebraPtr A = testgen::random_findim(k, rng, 3);
    AlgebraPtr AA = SigmaAlgebra::tensor(A, A);
    for (std::size_t i = 0; i < AA->dim(); ++i) {
      AlgElement x = AA->basis(i);
      Elem c = k.random(rng, 2);
      CHECK((c * x).sigma() == k.sigma(c) * x.sigma());
      for (std::size_t j = 0; j < AA->dim(); ++j) CHECK((x * AA->basis(j)).sigma() == x.sigma() * AA->basis(j).sigma());
    }
    CHECK(AA->one().sigma() == AA->one());
  }
}

TEST_CASE("inverse property") {
  std::mt19937_64 rng(3);
  for (const auto& k : audit_fields()) {
    AlgebraPtr A = testgen::random_findim(k, rng, 5);
    for (int rep = 0; rep < 20; ++rep) {
      Vec c;
      for (std::size_t i = 0; i < A->dim(); ++i) c.push_back(k.random(rng, 2));
      AlgElement x = A->from_coords(c);
      auto z = x.inverse();
      if (z) CHECK((x * *z).is_one());
    }
  }
}

TEST_CASE("Amitsur audit examples") {
  Field Q = Field::rationals();
  auto r = amitsur_audit(parse_algebra(Q, "k"));
  CHECK(r.exact);
  CHECK(r.ker0 == 1);
  CHECK(r.ker1 == 0);
  r = amitsur_audit(make_mu_algebra(Q, Q.one(), Q.one()));
  CHECK(r.exact);
  CHECK(r.ker0 == 1);
  CHECK(r.ker1 == 1);
  r = amitsur_audit(SigmaAlgebra::findim(Q, swap_tables(Q)));
  CHECK(r.exact);
  CHECK(r.ker0 == 1);
}

TEST_CASE("Amitsur audit on random algebras") {
  std::mt19937_64 rng(2024);
  for (const auto& k : audit_fields())
    for (int rep = 0; rep < 8; ++rep) {
      AlgebraPtr A = testgen::random_findim(k, rng, 5);
      auto r = amitsur_audit(A);
      CHECK(r.exact);
      CHECK(r.ker0 == 1);
      CHECK(r.ker1 == A->dim() - 1);
    }
}

TEST_CASE("element parsing and printing") {
  Field F = Field::parse("GF(9);frob^1");
  AlgebraPtr A = make_mu_algebra(F, F.one(), F.one());
  AlgElement x = A->parse_element("2*y + w");
  CHECK(A->parse_element(x.str()) == x);
  CHECK(A->parse_element("s(y)") == A->parse_element("y"));
  CHECK(A->parse_element("s(w*y)") == A->parse_element("w^3*y"));
  CHECK_THROWS_AS(A->parse_element("z"), ParseError);
  CHECK_THROWS_AS(A->parse_element("1/(1+y)"), ParseError);

  auto ctx = tensor_context(A);
  AlgElement z = ctx->AA->parse_element("y#1 - 1#y + w*(y#y)");
  CHECK(ctx->AA->parse_element(z.str()) == z);
}

TEST_CASE("algebra descriptors") {
  Field S = Field::parse("QQ(t);shift");
  AlgebraPtr sp = parse_algebra(S, "split:3;perm=2,3,1");
  CHECK(sp->basis(0).sigma() == sp->basis(1));
  CHECK(sp->basis(2).sigma() == sp->basis(0));

  AlgebraPtr L = parse_algebra(S, "laurent:2;sigma(u1)=t*u2;sigma(u2)=u1^(-1)");
  AlgElement u1 = L->parse_element("u1");
  CHECK(u1.sigma() == L->parse_element("t*u2"));
  CHECK(u1.sigma(2) == L->parse_element("(t+1)/u1"));
  CHECK(L->parse_element("u1^-2") * L->parse_element("u1^2") == L->one());
  CHECK(L->parse_element("u1 + u2").inverse() == std::nullopt);

  AlgebraPtr P = parse_algebra(S, "freepoly:1;sigma(y1)=y1+t");
  CHECK(P->parse_element("y1^2").sigma() == P->parse_element("y1^2 + 2*t*y1 + t^2"));
  CHECK_THROWS_AS(parse_algebra(S, "freepoly:1;sigma(y1)=y1^2"), ParseError);
  CHECK_THROWS_AS(parse_algebra(S, "laurent:1;sigma(u1)=u1+1"), ParseError);
  CHECK_THROWS_AS(parse_algebra(S, "cube:2"), ParseError);
}

TEST_CASE("Laurent tensor faces") {
  Field Q = Field::rationals();
  AlgebraPtr L = parse_algebra(Q, "laurent:1;sigma(u1)=2*u1");
  auto c = tensor_context(L);
  AlgElement u = L->generator(0);
  AlgElement chi = c->d1(u) * *c->d2(u).inverse();
  CHECK(chi == c->AA->parse_element("u1^(-1)#u1"));
  CHECK(chi.sigma() == chi);
  CHECK(c->e2(chi) == c->e1(chi) * c->e3(chi));
}

TEST_CASE("isomorphism search") {
  Field F = Field::parse("GF(9);frob^1");
  AlgebraPtr mu = make_mu_algebra(F, F.one(), F.one());
  AlgebraPtr id2 = make_split(F, 2, {0, 1});
  AlgebraPtr sw2 = make_split(F, 2, {1, 0});
  AlgebraPtr mu_minus = make_mu_algebra(F, F.one(), -F.one());
  CHECK(find_isomorphism(mu, id2, 1000000).has_value());
  CHECK_FALSE(find_isomorphism(mu, sw2, 1000000).has_value());
  CHECK(find_isomorphism(mu_minus, sw2, 1000000).has_value());
  CHECK_THROWS_AS(find_isomorphism(mu, id2, 1), BudgetExhausted);
}

TEST_CASE("canonical descent recovers the base algebra") {
  std::mt19937_64 rng(77);
  for (const auto& k : {Field::parse("GF(4)"), Field::parse("GF(9);frob^1"), Field::rationals()}) {
    for (int rep = 0; rep < 4; ++rep) {
      AlgebraPtr C0 = testgen::random_findim(k, rng, 3);
      AlgebraPtr A = testgen::random_findim(k, rng, 2);
      DescentResult res = descend_invariants(canonical_datum(C0, A));
      CHECK(res.B0->dim() == C0->dim());
      CHECK(res.canonical_map_iso);
      if (k.is_finite()) CHECK(find_isomorphism(res.B0, C0, 10000000).has_value());
    }
  }
  // B = A⊗A with the datum of the trivial cocycle
  Field Q = Field::rationals();
  AlgebraPtr A = make_mu_algebra(Q, Q.from_int(5), Q.one());
  DescentResult res = descend_invariants(canonical_datum(A, A));
  CHECK(res.B0->dim() == 2);
}

TEST_CASE("descent datum violating the cocycle condition is rejected") {
  Field F = Field::parse("GF(9);frob^1");
  AlgebraPtr C0 = make_split(F, 2, {0, 1});
  AlgebraPtr A = make_mu_algebra(F, F.one(), F.one());
  DescentDatum d = canonical_datum(C0, A);
  // twist the datum by the automorphism y ↦ -y of A in the first tensor slot
  const std::size_t n = d.B->dim(), N = d.phi.rows();
  Matrix phi = d.phi;
  for (std::size_t col = 0; col < N; ++col)
    for (std::size_t row = n; row < N; ++row) phi(row, col) = -phi(row, col);
  d.phi = phi;
  CHECK_THROWS_AS(validate_descent_datum(d), InvalidInput);
}
