#include <random>

#include "doctest.h"
#include "dcoh/groups.hpp"
#include "dcoh/zs_module.hpp"
#include "random_algebras.hpp"

using namespace dcoh;

namespace {

GroupElement scalar_point(const AlgebraPtr& R, const Elem& c) { return {{R->scalar(c)}}; }

void check_closure(const Group& G, const std::vector<GroupElement>& pts) {
  for (std::size_t i = 0; i < pts.size(); i += 1 + pts.size() / 12)
    for (std::size_t j = 0; j < pts.size(); j += 1 + pts.size() / 12) {
      CHECK(G.contains(G.mul(pts[i], pts[j])));
      CHECK(G.contains(G.inv(pts[i])));
      CHECK(G.mul(pts[i], G.inv(pts[i])) == G.identity(pts[i].algebra()));
    }
}

}  // namespace

TEST_CASE("membership examples") {
  Field F5 = Field::parse("GF(5)");
  auto mu = Group::mu2sigma(F5);
  auto K5 = make_split(F5, 1);
  CHECK(mu->contains(mu->identity(K5)));
  auto pts = mu->enumerate_points(K5);
  REQUIRE(pts.size() == 2);
  CHECK(pts[0] == scalar_point(K5, F5.from_int(1)));
  CHECK(pts[1] == scalar_point(K5, F5.from_int(4)));

  Field F9 = Field::parse("GF(3^2);frob^1");
  Elem a = F9.parse_element("w");
  auto A = make_mu_algebra(F9, a, a);
  auto mu9 = Group::mu2sigma(F9);
  GroupElement y{{A->basis(1)}};
  CHECK_FALSE(mu9->contains(y));
  CHECK(mu9->violation(y).find("relation") != std::string::npos);

  Field F4 = Field::parse("GF(4);frob^1");
  auto add = Group::parse(F4, "addker:s - 1");
  auto K4 = make_split(F4, 1);
  CHECK(add->contains(scalar_point(K4, F4.one())));
  CHECK_FALSE(add->contains(scalar_point(K4, F4.parse_element("w"))));
  CHECK(add->enumerate_points(K4).size() == 2);

  auto trivial = Group::parse(F4, "matrix:1;g11 - 1");
  CHECK(trivial->enumerate_points(K4).size() == 1);
  CHECK(trivial->enumerate_points(make_split(F4, 2)).size() == 1);
}

TEST_CASE("group law") {
  Field F9 = Field::parse("GF(9);frob^1");
  auto A = make_split(F9, 2);
  auto add = Group::ga(F9);
  GroupElement x{{A->basis(0)}}, z{{A->basis(1)}};
  CHECK(add->mul(x, z).entries[0] == A->one());
  CHECK(add->inv(x).entries[0] == -A->basis(0));
  auto diag = Group::parse(F9, "diag:2");
  GroupElement u{{A->scalar(F9.parse_element("w")), A->one()}}, v{{A->scalar(F9.parse_element("w")), A->scalar(F9.from_int(2))}};
  CHECK(diag->mul(u, v).entries[0] == A->scalar(F9.parse_element("w^2")));
  CHECK(diag->mul(u, v).entries[1] == A->scalar(F9.from_int(2)));
  auto gl2 = Group::gl(F9, 2);
  GroupElement m{{A->one(), A->basis(0), A->zero(), A->one()}};
  CHECK(gl2->contains(m));
  CHECK(gl2->mul(m, gl2->inv(m)) == gl2->identity(A));
  GroupElement sing{{A->basis(0), A->zero(), A->zero(), A->one()}};
  CHECK_FALSE(gl2->contains(sing));
  CHECK_THROWS_AS(gl2->inv(sing), InvalidInput);
  CHECK_THROWS_AS(gl2->contains(x), MismatchError);
}

TEST_CASE("twist groups and sigma-power kernels") {
  Field F9 = Field::parse("GF(9);frob^1");
  auto K = make_split(F9, 1);
  // σ(g) = g: g^3 = g
  CHECK(Group::parse(F9, "twist:GL1;d=1;psi=id")->enumerate_points(K).size() == 2);
  // σ(g) = g^{-1}: g^4 = 1
  CHECK(Group::parse(F9, "twist:GL1;d=1;psi=transposeinv")->enumerate_points(K).size() == 4);
  // σ²(g) = g on GF(9): all of GF(9)^x
  CHECK(Group::parse(F9, "twist:GL1;d=2;psi=id")->enumerate_points(K).size() == 8);
  auto N = Group::kernel_of_sigma_power(F9, TwistBase::GL, 1, 1);
  CHECK(N->descriptor() == "twist:GL1;d=1;psi=trivial");
  CHECK(N->enumerate_points(K).size() == 1);
  auto N2 = Group::kernel_of_sigma_power(F9, TwistBase::SL, 2, 2);
  CHECK(N2->contains(N2->identity(K)));
  CHECK(N2->enumerate_points(K).size() == 1);
  // SL2 over the prime field: σ = id there.
  Field F3 = Field::parse("GF(3)");
  CHECK(Group::parse(F3, "twist:SL2;d=1;psi=id")->enumerate_points(make_split(F3, 1)).size() == 24);
  CHECK(Group::parse(F3, "sl:2")->enumerate_points(make_split(F3, 1)).size() == 24);
  CHECK(Group::parse(F3, "gl:2")->enumerate_points(make_split(F3, 1)).size() == 48);

  // GL1 over a 2-dim split algebra with σ swapping the factors, d = 1, trivial ψ:
  // (x, y) with (y, x) = (1, 1).
  auto S = make_split(F9, 2, {1, 0});
  CHECK(N->enumerate_points(S).size() == 1);
  auto Nid = Group::parse(F9, "twist:GL1;d=1;psi=id");
  // σ(g) = g on the swap algebra: g = (x, x^3) ... fixed points x = y^3, y = x^3
  CHECK(Nid->enumerate_points(S).size() == 8);
}

TEST_CASE("enumeration agrees with membership and is closed") {
  std::mt19937_64 rng(29);
  for (const char* fd : {"GF(4);frob^1", "GF(9);frob^1", "GF(5)"}) {
    Field k = Field::parse(fd);
    std::vector<GroupPtr> groups = {Group::mu2sigma(k), Group::parse(k, "addker:s - 1"), Group::parse(k, "addker:s^2 + w*s + 1"),
                                    Group::parse(k, "diag:2;y1^2*s(y2);s(y1)/y1"), Group::parse(k, "twist:GL1;d=1;psi=id"),
                                    Group::parse(k, "twist:GL1;d=2;psi=transposeinv"),
                                    Group::parse(k, "prod(mu2sigma|addker:s-1)")};
    for (int trial = 0; trial < 3; ++trial) {
      auto R = testgen::random_findim(k, rng, 2);
      for (const auto& G : groups) {
        auto pts = G->enumerate_points(R);
        REQUIRE_FALSE(pts.empty());
        for (const auto& p : pts) CHECK(G->contains(p));
        check_closure(*G, pts);
        if (G->kind() == Group::Kind::Additive || (G->kind() == Group::Kind::Matrix && G->n() == 1)) {
          std::size_t brute = 0;
          for (std::uint64_t i = 0; i < R->element_count(); ++i)
            if (G->contains({{R->element_at(i)}})) ++brute;
          CHECK(brute == pts.size());
        }
      }
    }
  }
}

TEST_CASE("diagonal membership ignores the order of F") {
  Field k = Field::parse("GF(9);frob^1");
  auto G1 = Group::parse(k, "diag:2;y1^2*s(y2);s(y1)/y1");
  auto G2 = Group::parse(k, "diag:2;s(y1)/y1;y1^2*s(y2)");
  auto R = make_split(k, 2, {1, 0});
  CHECK(G1->enumerate_points(R) == G2->enumerate_points(R));
}

TEST_CASE("group descriptors") {
  Field k = Field::parse("QQ(t);shift");
  CHECK(Group::parse(k, "gm")->descriptor() == "gm");
  CHECK(Group::parse(k, "twist:SL2;d=3;psi=transposeinv")->d() == 3);
  CHECK(Group::parse(k, "prod(gm|prod(ga|mu2sigma))")->size() == 3);
  CHECK_THROWS_AS(Group::parse(k, "twist:GL2;d=0;psi=id"), InvalidInput);
  CHECK_THROWS_AS(Group::parse(k, "twist:GL2;d=1;psi=frob"), ParseError);
  CHECK_THROWS_AS(Group::parse(k, "nope"), ParseError);
  CHECK_THROWS_AS(Group::parse(k, "gl:x"), ParseError);
  CHECK_THROWS_AS(Group::mu2sigma(k)->enumerate_points(make_split(k, 1)), Unsupported);
  Field F9 = Field::parse("GF(9);frob^1");
  CHECK_THROWS_AS(Group::gl(F9, 3)->enumerate_points(make_split(F9, 2), 1000), BudgetExhausted);
}

TEST_CASE("syzygies over Z[s]") {
  // y^2 and σ(y)/y as vectors in Z[s]^1: 2 and s - 1.
  std::vector<ZVec> F = {{zpoly_from({2})}, {zpoly_from({-1, 1})}};
  auto syz = syzygies(F);
  REQUIRE_FALSE(syz.empty());
  auto gb = strong_groebner(syz);
  CHECK(in_submodule(gb, {zpoly_from({-1, 1}), zpoly_from({-2})}));
  CHECK_FALSE(in_submodule(gb, {zpoly_from({-1, 1}), zpoly_from({-1})}));
  for (const auto& c : syz) {
    // c_1 * 2 + c_2 * (s - 1) = 0
    ZPoly sum(3, 0);
    for (std::size_t i = 0; i < c[0].size(); ++i) sum[i] += 2 * c[0][i];
    for (std::size_t i = 0; i < c[1].size(); ++i) {
      sum[i] -= c[1][i];
      if (i + 1 >= sum.size()) sum.resize(i + 2, 0);
      sum[i + 1] += c[1][i];
    }
    for (const auto& x : sum) CHECK(x == 0);
  }

  // Independent vectors have no syzygies.
  CHECK(syzygies({{zpoly_from({1}), {}}, {{}, zpoly_from({0, 1})}}).empty());
  // Two copies of the same vector.
  auto twice = syzygies({{zpoly_from({3, 1})}, {zpoly_from({3, 1})}});
  REQUIRE(twice.size() == 1);
  CHECK(in_submodule(strong_groebner(twice), {zpoly_from({1}), zpoly_from({-1})}));
  // 2 and 4: the relation (2, -1) is primitive.
  auto ev = syzygies({{zpoly_from({2})}, {zpoly_from({4})}});
  CHECK(in_submodule(strong_groebner(ev), {zpoly_from({2}), zpoly_from({-1})}));
  CHECK(zpoly_str(zpoly_from({-1, 0, 3})) == "3*s^2 - 1");
}
