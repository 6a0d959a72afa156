#include "dcoh/zs_module.hpp"

#include <algorithm>
#include <optional>
#include <sstream>

namespace dcoh {

namespace {

void trim(ZPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

bool is_zero(const ZVec& v) {
  return std::all_of(v.begin(), v.end(), [](const ZPoly& p) { return p.empty(); });
}

struct Lead {
  std::size_t pos;
  std::size_t deg;
  mpz_class coeff;
};

std::optional<Lead> lead(const ZVec& v) {
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!v[i].empty()) return Lead{i, v[i].size() - 1, v[i].back()};
  return std::nullopt;
}

/// v += c s^shift w
void axpy(ZVec& v, const mpz_class& c, std::size_t shift, const ZVec& w) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (w[i].empty()) continue;
    if (v[i].size() < w[i].size() + shift) v[i].resize(w[i].size() + shift, 0);
    for (std::size_t j = 0; j < w[i].size(); ++j) v[i][j + shift] += c * w[i][j];
    trim(v[i]);
  }
}

void normalize_sign(ZVec& v) {
  auto l = lead(v);
  if (l && l->coeff < 0)
    for (auto& p : v)
      for (auto& c : p) c = -c;
}

/// Full strong reduction; the returned vector has no term divisible by a leading term of G.
ZVec reduce(ZVec h, const std::vector<ZVec>& G) {
  ZVec rem(h.size());
  for (;;) {
    auto l = lead(h);
    if (!l) break;
    bool reduced = false;
    for (const auto& g : G) {
      auto lg = lead(g);
      if (lg->pos != l->pos || lg->deg > l->deg) continue;
      if (!mpz_divisible_p(l->coeff.get_mpz_t(), lg->coeff.get_mpz_t())) continue;
      mpz_class q = l->coeff / lg->coeff;
      axpy(h, -q, l->deg - lg->deg, g);
      reduced = true;
      break;
    }
    if (reduced) continue;
    if (rem[l->pos].size() < l->deg + 1) rem[l->pos].resize(l->deg + 1, 0);
    rem[l->pos][l->deg] = l->coeff;
    h[l->pos].pop_back();
    trim(h[l->pos]);
  }
  return rem;
}

}  // namespace

ZPoly zpoly_from(const std::vector<long>& c) {
  ZPoly p;
  for (long x : c) p.emplace_back(x);
  trim(p);
  return p;
}

std::string zpoly_str(const ZPoly& p) {
  if (p.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = p.size(); i-- > 0;) {
    if (p[i] == 0) continue;
    mpz_class c = p[i];
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << "-";
    first = false;
    mpz_class a = abs(c);
    if (i == 0 || a != 1) os << a.get_str();
    if (i > 0 && a != 1) os << "*";
    if (i == 1) os << "s";
    if (i > 1) os << "s^" << i;
  }
  return os.str();
}

std::vector<ZVec> strong_groebner(std::vector<ZVec> gens) {
  std::vector<ZVec> G;
  for (auto& g : gens) {
    ZVec r = reduce(g, G);
    if (!is_zero(r)) {
      normalize_sign(r);
      G.push_back(r);
    }
  }
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t j = 0; j < G.size(); ++j)
    for (std::size_t i = 0; i < j; ++i) pairs.emplace_back(i, j);
  while (!pairs.empty()) {
    auto [i, j] = pairs.back();
    pairs.pop_back();
    auto li = lead(G[i]), lj = lead(G[j]);
    if (li->pos != lj->pos) continue;
    std::size_t D = std::max(li->deg, lj->deg);
    mpz_class L = lcm(li->coeff, lj->coeff), g, u, v;
    mpz_gcdext(g.get_mpz_t(), u.get_mpz_t(), v.get_mpz_t(), li->coeff.get_mpz_t(), lj->coeff.get_mpz_t());
    ZVec S(G[i].size()), Gp(G[i].size());
    axpy(S, L / li->coeff, D - li->deg, G[i]);
    axpy(S, -(L / lj->coeff), D - lj->deg, G[j]);
    axpy(Gp, u, D - li->deg, G[i]);
    axpy(Gp, v, D - lj->deg, G[j]);
    for (ZVec* cand : {&S, &Gp}) {
      ZVec r = reduce(*cand, G);
      if (is_zero(r)) continue;
      normalize_sign(r);
      G.push_back(r);
      for (std::size_t k = 0; k + 1 < G.size(); ++k) pairs.emplace_back(k, G.size() - 1);
    }
  }
  return G;
}

bool in_submodule(const std::vector<ZVec>& groebner, const ZVec& w) { return is_zero(reduce(w, groebner)); }

std::vector<ZVec> syzygies(const std::vector<ZVec>& v) {
  if (v.empty()) return {};
  std::size_t n = v[0].size(), m = v.size();
  std::vector<ZVec> gens;
  for (std::size_t i = 0; i < m; ++i) {
    ZVec row(n + m);
    for (std::size_t j = 0; j < n; ++j) {
      row[j] = v[i].at(j);
      trim(row[j]);
    }
    row[n + i] = ZPoly{1};
    gens.push_back(row);
  }
  std::vector<ZVec> out;
  for (const auto& g : strong_groebner(gens)) {
    bool upper_zero = std::all_of(g.begin(), g.begin() + static_cast<long>(n), [](const ZPoly& p) { return p.empty(); });
    if (upper_zero) out.emplace_back(g.begin() + static_cast<long>(n), g.end());
  }
  return out;
}

}  // namespace dcoh
