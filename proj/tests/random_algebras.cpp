#include "random_algebras.hpp"

#include <algorithm>
#include <numeric>

using namespace dcoh;

namespace testgen {

Elem nonzero(const Field& k, std::mt19937_64& rng, unsigned size) {
  for (;;) {
    Elem x = k.random(rng, size);
    if (!x.is_zero()) return x;
  }
}

std::pair<Elem, Elem> mu_params(const Field& k, std::mt19937_64& rng) {
  Elem a0 = k.one(), b0 = k.one();
  if (k.is_finite() && k.size() <= 64) {
    std::vector<std::pair<Elem, Elem>> valid;
    for (const auto& a : k.elements())
      for (const auto& b : k.elements())
        if (!a.is_zero() && !b.is_zero() && k.sigma(a) == a * b * b) valid.emplace_back(a, b);
    auto pick = valid[std::uniform_int_distribution<std::size_t>(0, valid.size() - 1)(rng)];
    a0 = pick.first;
    b0 = pick.second;
  } else if (!k.is_finite()) {
    // constants are fixed by sigma
    a0 = k.from_rational(nonzero(Field::rationals(), rng, 4).rational());
    if (rng() % 2) b0 = -b0;
  }
  Elem l = nonzero(k, rng, 2);
  return {l * l * a0, b0 * k.sigma(l) / l};
}

AlgebraPtr dual_numbers(const Field& k, const Elem& c) {
  FinDimTables t;
  t.dim = 2;
  t.labels = {"1", "x"};
  const Elem o = k.one(), z = k.zero();
  t.mult = {{{o, z}, {z, o}}, {{z, o}, {z, z}}};
  t.unit = {o, z};
  t.sigma = {{o, z}, {z, c}};
  return SigmaAlgebra::findim(k, std::move(t), "dual");
}

Matrix random_invertible(const Field& k, std::mt19937_64& rng, std::size_t m) {
  for (;;) {
    Matrix P(m, m, k.zero());
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) P(i, j) = k.random(rng, 1);
    if (inverse(P)) return P;
  }
}

namespace {

AlgebraPtr block(const Field& k, std::mt19937_64& rng, std::size_t max_dim) {
  std::size_t choice = rng() % 4;
  if (max_dim < 2) choice = 0;
  switch (choice) {
    case 0:
      return parse_algebra(k, "k");
    case 1: {
      std::size_t m = 1 + rng() % std::min<std::size_t>(max_dim, 3);
      std::vector<std::size_t> perm(m);
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), rng);
      return make_split(k, m, perm);
    }
    case 2: {
      auto [a, b] = mu_params(k, rng);
      return make_mu_algebra(k, a, b);
    }
    default:
      return dual_numbers(k, nonzero(k, rng, 1));
  }
}

}  // namespace

AlgebraPtr random_findim(const Field& k, std::mt19937_64& rng, std::size_t max_dim) {
  AlgebraPtr a = block(k, rng, max_dim);
  std::size_t mode = rng() % 3;
  if (mode == 1 && a->dim() < max_dim) {
    a = product(a, block(k, rng, max_dim - a->dim()));
  } else if (mode == 2 && 2 * a->dim() <= max_dim) {
    a = SigmaAlgebra::findim(k, tables_of(SigmaAlgebra::tensor(a, block(k, rng, max_dim / a->dim()))), "tensor");
  }
  return change_basis(a, random_invertible(k, rng, a->dim()));
}

}  // namespace testgen
