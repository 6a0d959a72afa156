#include <random>

#include "doctest.h"
#include "dcoh/sigma_poly.hpp"
#include "random_algebras.hpp"

using namespace dcoh;

TEST_CASE("sigma-polynomial arithmetic") {
  Field Q = Field::parse("QQ(t);shift");
  auto y = SigmaPolynomial::variable(Q, 1, 0);
  auto sy = SigmaPolynomial::variable(Q, 1, 0, 1);
  auto prod = sy * y;
  REQUIRE(prod.terms().size() == 1);
  SigmaMonomial m{{{0, 0}, 1}, {{0, 1}, 1}};
  CHECK(prod.terms().begin()->first == m);
  CHECK(prod.order() == 1);
  CHECK(y + SigmaPolynomial(Q, 1) == y);
  CHECK(SigmaPolynomial::parse(Q, 1, "s(y1)*y1") == prod);

  Field F2 = Field::parse("GF(2^3);frob^1");
  auto p = SigmaPolynomial::parse(F2, 2, "w*s(y1)^2 + y2 + 1");
  CHECK((p + p).is_zero());

  CHECK_THROWS_AS(y + SigmaPolynomial::variable(Q, 2, 0), MismatchError);
  CHECK_THROWS_AS(y + SigmaPolynomial::variable(Field::parse("QQ"), 1, 0), MismatchError);
  CHECK_THROWS_AS(SigmaPolynomial::parse(Q, 1, "y1/y1"), ParseError);
}

TEST_CASE("shift acts on variables and coefficients") {
  Field Q = Field::parse("QQ(t);shift");
  CHECK(SigmaPolynomial::parse(Q, 1, "y1^2").shift() == SigmaPolynomial::parse(Q, 1, "s(y1)^2"));
  CHECK(SigmaPolynomial::parse(Q, 1, "t*y1").shift() == SigmaPolynomial::parse(Q, 1, "(t+1)*s(y1)"));
  CHECK(SigmaPolynomial::parse(Q, 1, "t^2").shift() == SigmaPolynomial::parse(Q, 1, "(t+1)^2"));
  CHECK(SigmaPolynomial::parse(Q, 1, "s^2(y1) - t").shift(2) == SigmaPolynomial::parse(Q, 1, "s^4(y1) - t - 2"));
}

TEST_CASE("evaluation at algebra points") {
  Field F = Field::parse("GF(3^2);frob^1");
  Elem a = F.parse_element("w"), b;
  // b^2 = sigma(a)/a = a^2; b = ±a satisfies it.
  b = a;
  auto A = make_mu_algebra(F, a, b);
  AlgElement y = A->basis(1);
  CHECK(SigmaPolynomial::parse(F, 1, "y1^2 - w").eval({y}).is_zero());
  CHECK(SigmaPolynomial::parse(F, 1, "s(y1) - w*y1").eval({y}).is_zero());

  Field F4 = Field::parse("GF(4);frob^1");
  auto p = SigmaPolynomial::parse(F4, 1, "s(y1) - y1");
  CHECK(p.eval(std::vector<Elem>{F4.parse_element("w")}) == F4.one());
  auto K = make_split(F4, 1);
  CHECK(p.eval({K->scalar(F4.parse_element("w"))}) == K->one());
}

TEST_CASE("eval commutes with sigma and shift is a ring map") {
  std::mt19937_64 rng(11);
  for (const char* desc : {"GF(3^2);frob^1", "GF(5^2);frob^1", "QQ", "QQ(t);shift"}) {
    Field k = Field::parse(desc);
    for (int trial = 0; trial < 12; ++trial) {
      auto A = testgen::random_findim(k, rng, 4);
      auto rnd_poly = [&] {
        SigmaPolynomial p(k, 2);
        for (int i = 0; i < 3; ++i) {
          auto v = SigmaPolynomial::variable(k, 2, rng() % 2, rng() % 3).pow(1 + rng() % 2);
          p = p + k.random(rng, 1) * v;
        }
        return p + SigmaPolynomial::constant(k, 2, k.random(rng, 1));
      };
      auto p = rnd_poly(), q = rnd_poly();
      CHECK((p * q).shift() == p.shift() * q.shift());
      CHECK((p + q).shift() == p.shift() + q.shift());
      std::vector<AlgElement> x;
      for (int i = 0; i < 2; ++i) {
        Vec c;
        for (std::size_t j = 0; j < A->dim(); ++j) c.push_back(k.random(rng, 1));
        x.push_back(A->from_coords(c));
      }
      CHECK(p.shift().eval(x) == p.eval(x).sigma());
    }
  }
}

TEST_CASE("multiplicative functions") {
  Field F = Field::parse("GF(3^2);frob^1");
  Elem a = F.parse_element("w");
  auto A = make_mu_algebra(F, a, a);
  AlgElement y = A->basis(1);
  auto sq = MultiplicativeFunction::parse(1, "y1^2");
  CHECK(sq.eval({y}) == y * y);
  auto ratio = MultiplicativeFunction::parse(1, "s(y1)/y1");
  CHECK(ratio.eval({y}) == A->scalar(a));
  CHECK(ratio.alpha() == std::vector<std::vector<long>>{{-1}, {1}});
  CHECK(ratio.component(0) == std::vector<long>{-1, 1});
  auto f = MultiplicativeFunction::parse(2, "s^2(y1)^3 * y2^(-2) / s(y2)");
  CHECK(f.eval({A->one(), A->one()}).is_one());
  CHECK(MultiplicativeFunction::parse(1, "y1/y1").is_trivial());
  CHECK_THROWS_AS(MultiplicativeFunction::parse(1, "y1 + 1"), ParseError);
  CHECK_THROWS_AS(MultiplicativeFunction::parse(1, "2*y1"), ParseError);
  CHECK_THROWS_AS(sq.eval({A->zero()}), InvalidInput);

  // numerator - a * denominator
  Field Q = Field::parse("QQ(t);shift");
  auto rel = ratio.relation(Q, Q.parse_element("t"));
  CHECK(rel == SigmaPolynomial::parse(Q, 1, "s(y1) - t*y1"));
  CHECK(MultiplicativeFunction::parse(1, "s(y1)*y1^(-1)").str() == "y1^(-1)*s(y1)");
}

TEST_CASE("mult_eval is multiplicative on unit tuples") {
  std::mt19937_64 rng(5);
  for (const char* desc : {"GF(3^2);frob^1", "GF(7)", "QQ(t);shift"}) {
    Field k = Field::parse(desc);
    auto f = MultiplicativeFunction::parse(2, "s(y1)^2*y2/s^2(y2)^3*y1^(-1)");
    for (int trial = 0; trial < 10; ++trial) {
      auto A = testgen::random_findim(k, rng, 4);
      auto unit = [&] {
        for (;;) {
          Vec c;
          for (std::size_t j = 0; j < A->dim(); ++j) c.push_back(k.random(rng, 1));
          auto u = A->from_coords(c);
          if (u.is_unit()) return u;
        }
      };
      std::vector<AlgElement> x{unit(), unit()}, z{unit(), unit()};
      std::vector<AlgElement> xz{x[0] * z[0], x[1] * z[1]};
      CHECK(f.eval(xz) == f.eval(x) * f.eval(z));
    }
  }
}
