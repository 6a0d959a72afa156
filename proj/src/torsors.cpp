#include "dcoh/torsors.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "dcoh/expr_parser.hpp"

namespace dcoh {

namespace {

bool is_dim1(const AlgebraPtr& R) { return R->is_findim() && R->dim() == 1; }

bool finite_findim(const AlgebraPtr& R) { return R->is_findim() && R->field().is_finite(); }

std::string preimage_certificate(const Field& k) {
  return k.kind() == Field::Kind::SubstSquare ? "parity-obstruction" : "not-in-sigma-image";
}

/// y with σ^d(y) = x; nothing when x is not in σ^d(k).
std::optional<Elem> sigma_power_preimage(const Field& k, const Elem& x, unsigned d) {
  std::optional<Elem> y = x;
  for (unsigned i = 0; i < d && y; ++i) y = k.sigma_preimage(*y);
  return y;
}

std::vector<std::uint64_t> key_of(const std::vector<Elem>& v) {
  std::vector<std::uint64_t> k;
  for (const auto& e : v) k.push_back(e.finite().code);
  return k;
}

std::vector<Elem> nonzero_elements(const Field& k) {
  auto all = k.elements();
  all.erase(std::remove_if(all.begin(), all.end(), [](const Elem& e) { return e.is_zero(); }), all.end());
  return all;
}

std::uint64_t checked_power(std::uint64_t base, std::size_t e, std::uint64_t budget) {
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < e; ++i) {
    if (base != 0 && total > budget / base) throw BudgetExhausted("search space exceeds budget " + std::to_string(budget));
    total *= base;
  }
  return total;
}

/// Calls f on every tuple of the given length over pool, stopping when f returns true.
void for_each_tuple(const std::vector<Elem>& pool, std::size_t slots, std::uint64_t budget,
                    const std::function<bool(const std::vector<Elem>&)>& f) {
  std::uint64_t total = checked_power(pool.size(), slots, budget);
  std::vector<Elem> t(slots);
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    std::uint64_t rest = idx;
    for (std::size_t i = 0; i < slots; ++i) {
      t[i] = pool[rest % pool.size()];
      rest /= pool.size();
    }
    if (f(t)) return;
  }
}

// ---- scalar matrices

using SMat = std::vector<Elem>;

SMat smul(const SMat& a, const SMat& b, unsigned n) {
  SMat c(n * n, a[0].zero_like());
  for (unsigned i = 0; i < n; ++i)
    for (unsigned l = 0; l < n; ++l)
      for (unsigned j = 0; j < n; ++j) c[i * n + j] += a[i * n + l] * b[l * n + j];
  return c;
}

std::optional<SMat> sinv(const SMat& a, unsigned n) {
  Matrix m(n, n, a[0].zero_like());
  for (unsigned i = 0; i < n; ++i)
    for (unsigned j = 0; j < n; ++j) m(i, j) = a[i * n + j];
  auto r = inverse(m);
  if (!r) return std::nullopt;
  SMat out;
  for (unsigned i = 0; i < n; ++i)
    for (unsigned j = 0; j < n; ++j) out.push_back((*r)(i, j));
  return out;
}

Elem sdet(const SMat& a, unsigned n) {
  if (n == 1) return a[0];
  Elem d = a[0].zero_like();
  for (unsigned j = 0; j < n; ++j) {
    SMat minor;
    for (unsigned r = 1; r < n; ++r)
      for (unsigned c = 0; c < n; ++c)
        if (c != j) minor.push_back(a[r * n + c]);
    Elem term = a[j] * sdet(minor, n - 1);
    d = (j % 2 == 0) ? d + term : d - term;
  }
  return d;
}

SMat stranspose(const SMat& a, unsigned n) {
  SMat t(a.size());
  for (unsigned i = 0; i < n; ++i)
    for (unsigned j = 0; j < n; ++j) t[j * n + i] = a[i * n + j];
  return t;
}

SMat ssigma(const Field& k, const SMat& a, unsigned d) {
  SMat r;
  for (const auto& e : a) r.push_back(k.sigma(e, d));
  return r;
}

SMat sidentity(const Field& k, unsigned n) {
  SMat c(n * n, k.zero());
  for (unsigned i = 0; i < n; ++i) c[i * n + i] = k.one();
  return c;
}

SMat spsi(const Field& k, Psi psi, const SMat& c, unsigned n) {
  switch (psi) {
    case Psi::Trivial:
      return sidentity(k, n);
    case Psi::Identity:
      return c;
    case Psi::TransposeInverse:
      return stranspose(sinv(c, n).value(), n);
  }
  return c;
}

/// ψ(c)^{-1}·a·σ^d(c)
SMat twist_action(const Field& k, Psi psi, unsigned d, unsigned n, const SMat& a, const SMat& c) {
  return smul(smul(sinv(spsi(k, psi, c, n), n).value(), a, n), ssigma(k, c, d), n);
}

/// 𝒢(k) for a finite field.
std::vector<SMat> base_points(const Field& k, TwistBase base, unsigned n, std::uint64_t budget) {
  std::vector<SMat> out;
  for_each_tuple(k.elements(), n * n, budget, [&](const std::vector<Elem>& t) {
    Elem det = sdet(t, n);
    if (!det.is_zero() && (base == TwistBase::GL || det.is_one())) out.push_back(t);
    return false;
  });
  return out;
}

/// Orbits of params under the given action, in parameter order.
template <typename Act>
std::vector<std::size_t> orbit_representatives(const std::vector<SMat>& params, const std::vector<SMat>& acting, Act act) {
  std::map<std::vector<std::uint64_t>, std::size_t> index;
  for (std::size_t i = 0; i < params.size(); ++i) index[key_of(params[i])] = i;
  std::vector<bool> seen(params.size(), false);
  std::vector<std::size_t> reps;
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (seen[i]) continue;
    reps.push_back(i);
    for (const auto& g : acting) {
      auto it = index.find(key_of(act(params[i], g)));
      if (it == index.end()) throw InvalidInput("orbit leaves the parameter set");
      seen[it->second] = true;
    }
  }
  return reps;
}

std::string join(const std::vector<Elem>& v, const char* sep = ",") {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + v[i].str();
  return s;
}

std::string twist_group_descriptor(TwistBase base, unsigned n, unsigned d, Psi psi) {
  return std::string("twist:") + (base == TwistBase::GL ? "GL" : "SL") + std::to_string(n) + ";d=" + std::to_string(d) + ";psi=" + psi_name(psi);
}

/// x over R as a matrix of R-elements.
std::vector<AlgElement> lift_matrix(const AlgebraPtr& R, const SMat& a) {
  std::vector<AlgElement> m;
  for (const auto& e : a) m.push_back(R->scalar(e));
  return m;
}

std::vector<Elem> scalars_of(const GroupElement& x) {
  std::vector<Elem> out;
  for (const auto& e : x.entries) {
    auto s = e.as_scalar();
    if (!s) throw InvalidInput("expected a constant, got " + e.str());
    out.push_back(*s);
  }
  return out;
}

PointSearch found(std::vector<GroupElement> pts, bool complete) {
  PointSearch p;
  p.verdict = pts.empty() ? Verdict::Inequivalent : Verdict::Equivalent;
  p.points = std::move(pts);
  p.complete = complete;
  if (p.points.empty()) p.certificate = "exhaustive-search";
  return p;
}

PointSearch none(std::string why) {
  PointSearch p;
  p.verdict = Verdict::Inequivalent;
  p.complete = true;
  p.certificate = std::move(why);
  return p;
}

PointSearch open(std::string why) {
  PointSearch p;
  p.certificate = std::move(why);
  return p;
}

}  // namespace

std::string family_name(Torsor::Family f) {
  switch (f) {
    case Torsor::Family::Mu:
      return "mu";
    case Torsor::Family::Additive:
      return "add";
    case Torsor::Family::Diagonal:
      return "diag";
    case Torsor::Family::Twist:
      return "twist";
    case Torsor::Family::TwistedForm:
      return "twisted";
  }
  return "";
}

// ---------------------------------------------------------------- presentations

Torsor Torsor::mu(const Field& k, const Elem& a, const Elem& b) {
  if (!k.owns(a) || !k.owns(b)) throw MismatchError("torsor parameters outside the field");
  if (a.is_zero() || b.is_zero()) throw InvalidInput("mu torsor needs a, b nonzero");
  if (k.sigma(a) != a * b * b) throw InvalidInput("mu torsor needs sigma(a) = a*b^2");
  Torsor X;
  X.family_ = Family::Mu;
  X.group_ = Group::mu2sigma(k);
  X.params_ = {a, b};
  return X;
}

Torsor Torsor::additive(const DifferenceOperator& L, const Elem& a) {
  if (!L.field().owns(a)) throw MismatchError("torsor parameter outside the field");
  Torsor X;
  X.family_ = Family::Additive;
  X.group_ = Group::additive(L);
  X.params_ = {a};
  return X;
}

Torsor Torsor::diagonal(const Field& k, unsigned n, std::vector<MultiplicativeFunction> F, std::vector<Elem> a) {
  if (a.size() != F.size()) throw InvalidInput("diagonal torsor needs one value per function");
  for (const auto& e : a)
    if (!k.owns(e) || e.is_zero()) throw InvalidInput("diagonal torsor values must be nonzero field elements");
  Torsor X;
  X.family_ = Family::Diagonal;
  X.group_ = Group::diagonal(k, n, std::move(F));
  X.params_ = std::move(a);
  return X;
}

Torsor Torsor::twist(const Field& k, TwistBase base, unsigned n, unsigned d, Psi psi, std::vector<Elem> a) {
  if (a.size() != n * n) throw InvalidInput("twist torsor needs an n x n matrix a");
  for (const auto& e : a)
    if (!k.owns(e)) throw MismatchError("torsor parameter outside the field");
  Elem det = sdet(a, n);
  if (det.is_zero()) throw InvalidInput("twist torsor needs an invertible a");
  if (base == TwistBase::SL && !det.is_one()) throw InvalidInput("twist torsor over SL needs det(a) = 1");
  Torsor X;
  X.family_ = Family::Twist;
  X.group_ = Group::twist(k, base, n, d, psi);
  X.params_ = std::move(a);
  return X;
}

Torsor Torsor::twisted_form(const Cocycle& chi) {
  auto r = check_cocycle(chi.G, chi.ctx, chi.value);
  if (!r.ok) throw InvalidInput("twisted form of a non-cocycle: " + r.reason);
  Torsor X;
  X.family_ = Family::TwistedForm;
  X.group_ = chi.G;
  X.chi_ = chi;
  return X;
}

Torsor Torsor::parse(const Field& k, std::string_view descriptor) {
  std::string text = trim_copy(descriptor);
  auto colon = text.find(':');
  if (colon == std::string::npos) throw ParseError("torsor descriptor needs a family prefix");
  std::string kind = text.substr(0, colon), rest = text.substr(colon + 1);
  if (kind == "mu") {
    auto parts = split_top_level(rest, ',');
    if (parts.size() != 2) throw ParseError("mu torsor needs a,b");
    return mu(k, k.parse_element(trim_copy(parts[0])), k.parse_element(trim_copy(parts[1])));
  }
  if (kind == "add") {
    auto parts = split_top_level(rest, ';');
    if (parts.size() != 2) throw ParseError("additive torsor needs <op>;<a>");
    return additive(DifferenceOperator::parse(k, trim_copy(parts[0])), k.parse_element(trim_copy(parts[1])));
  }
  if (kind == "diag") {
    auto parts = split_top_level(rest, ';');
    if (parts.size() < 2) throw ParseError("diagonal torsor needs <n>;<f1>;...;<a1>,...");
    unsigned n = 0;
    try {
      n = static_cast<unsigned>(std::stoul(trim_copy(parts[0])));
    } catch (const std::exception&) {
      throw ParseError("diagonal arity must be a number");
    }
    std::vector<MultiplicativeFunction> F;
    for (std::size_t i = 1; i + 1 < parts.size(); ++i) F.push_back(MultiplicativeFunction::parse(n, trim_copy(parts[i])));
    std::vector<Elem> a;
    if (!F.empty())
      for (const auto& p : split_top_level(parts.back(), ',')) a.push_back(k.parse_element(trim_copy(p)));
    return diagonal(k, n, std::move(F), std::move(a));
  }
  if (kind == "twist") {
    auto parts = split_top_level(rest, ';');
    std::string group = "twist:";
    std::optional<std::string> avalue;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      std::string p = trim_copy(parts[i]);
      if (p.rfind("a=", 0) == 0) {
        avalue = p.substr(2);
      } else {
        group += (group.size() > 6 ? ";" : "") + p;
      }
    }
    if (!avalue) throw ParseError("twist torsor needs a=<matrix>");
    auto G = Group::parse(k, group);
    std::string m = trim_copy(*avalue);
    if (!m.empty() && m.front() == '[' && m.back() == ']') m = m.substr(1, m.size() - 2);
    std::vector<Elem> a;
    for (const auto& p : split_top_level(m, ',')) a.push_back(k.parse_element(trim_copy(p)));
    return twist(k, G->twist_base(), G->n(), G->d(), G->psi(), std::move(a));
  }
  throw ParseError("unknown torsor family '" + kind + "'");
}

std::string Torsor::descriptor() const {
  switch (family_) {
    case Family::Mu:
      return "mu:" + params_[0].str() + "," + params_[1].str();
    case Family::Additive:
      return "add:" + group_->op()->str() + ";" + params_[0].str();
    case Family::Diagonal: {
      std::string s = "diag:" + std::to_string(group_->n());
      for (const auto& f : group_->functions()) s += ";" + f.str();
      if (!group_->functions().empty()) s += ";" + join(params_);
      return s;
    }
    case Family::Twist:
      return group_->descriptor() + ";a=" + join(params_);
    case Family::TwistedForm:
      return "twisted(" + group_->descriptor() + ")";
  }
  return "";
}

std::string Torsor::violation(const GroupElement& x) const {
  if (family_ == Family::TwistedForm) {
    const Cocycle& chi = *chi_;
    if (x.entries.size() != group_->size() || x.algebra() != chi.ctx->AA) throw MismatchError("twisted form points live over A#A");
    std::string v = group_->violation(x);
    if (!v.empty()) return v;
    const auto& c = *chi.ctx;
    if (Group::map(x, c.e3) != group_->mul(Group::map(x, c.e2), Group::map(chi.value, c.e1))) return "e3(g) differs from e2(g)*e1(chi)";
    return "";
  }
  if (x.entries.size() != group_->size()) throw MismatchError("point has the wrong number of entries");
  const AlgebraPtr& R = x.algebra();
  if (R->field() != field()) throw MismatchError("point over another field");
  switch (family_) {
    case Family::Mu: {
      const AlgElement& v = x.entries[0];
      if (v * v != R->scalar(params_[0])) return "x^2 differs from a";
      if (v.sigma() != params_[1] * v) return "sigma(x) differs from b*x";
      return "";
    }
    case Family::Additive:
      if ((*group_->op())(x.entries[0]) != R->scalar(params_[0])) return "L(x) differs from a";
      return "";
    case Family::Diagonal: {
      for (const auto& e : x.entries)
        if (!e.is_unit()) return "entry is not a unit";
      const auto& F = group_->functions();
      for (std::size_t i = 0; i < F.size(); ++i)
        if (F[i].eval(x.entries) != R->scalar(params_[i])) return "f" + std::to_string(i + 1) + "(x) differs from a" + std::to_string(i + 1);
      return "";
    }
    case Family::Twist: {
      const unsigned n = group_->n();
      AlgElement det = mat_det(x.entries, n);
      if (group_->twist_base() == TwistBase::SL && !det.is_one()) return "determinant is not 1";
      auto inv = mat_inv(x.entries, n);
      if (!inv) return "determinant is not a unit";
      std::vector<AlgElement> psi;
      switch (group_->psi()) {
        case Psi::Trivial:
          psi = mat_identity(R, n);
          break;
        case Psi::Identity:
          psi = x.entries;
          break;
        case Psi::TransposeInverse:
          psi = mat_transpose(*inv, n);
          break;
      }
      if (Group::sigma(x, group_->d()).entries != mat_mul(psi, lift_matrix(R, params_), n))
        return "sigma^" + std::to_string(group_->d()) + "(x) differs from psi(x)*a";
      return "";
    }
    case Family::TwistedForm:
      break;
  }
  return "";
}

GroupElement Torsor::act(const GroupElement& g, const GroupElement& x) const {
  if (family_ == Family::TwistedForm) return group_->mul(Group::map(g, chi_->ctx->d2), x);
  if (family_ == Family::Additive) return {{g.entries[0] + x.entries[0]}};
  if (family_ == Family::Diagonal) {
    GroupElement r = x;
    for (std::size_t i = 0; i < r.entries.size(); ++i) r.entries[i] = g.entries[i] * x.entries[i];
    return r;
  }
  return {mat_mul(g.entries, x.entries, group_->n())};
}

GroupElement Torsor::canonical_point() const {
  if (family_ != Family::TwistedForm) throw MismatchError("canonical points belong to twisted forms");
  return group_->inv(chi_->value);
}

// ---------------------------------------------------------------- points

namespace {

PointSearch enumerate_torsor(const Torsor& X, const AlgebraPtr& R, std::uint64_t budget) {
  std::vector<AlgElement> pool;
  const std::size_t slots = X.group()->size();
  std::uint64_t count = R->element_count();
  checked_power(count, slots, budget);
  const bool units_only = X.family() != Torsor::Family::Additive && slots == 1;
  for (std::uint64_t i = 0; i < count; ++i) {
    AlgElement e = R->element_at(i);
    if (!units_only || e.is_unit()) pool.push_back(e);
  }
  std::vector<GroupElement> pts;
  std::uint64_t total = checked_power(pool.size(), slots, budget);
  GroupElement x;
  x.entries.resize(slots);
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    std::uint64_t rest = idx;
    for (std::size_t s = slots; s-- > 0;) {
      x.entries[s] = pool[rest % pool.size()];
      rest /= pool.size();
    }
    if (X.contains(x)) pts.push_back(x);
  }
  return found(std::move(pts), true);
}

/// Generators or basis elements that happen to be points.
std::optional<GroupElement> probe(const Torsor& X, const AlgebraPtr& R) {
  if (X.group()->size() != 1) return std::nullopt;
  std::vector<AlgElement> cands = {R->one()};
  for (std::size_t i = 0; i < R->dim(); ++i) cands.push_back(R->basis(i));
  for (const auto& c : cands) {
    GroupElement x{{c}};
    bool ok = false;
    try {
      ok = X.contains(x);
    } catch (const InvalidInput&) {
      ok = false;
    }
    if (ok) return x;
  }
  return std::nullopt;
}

PointSearch mu_points(const Torsor& X, const AlgebraPtr& R) {
  const Field& k = X.field();
  if (R->is_findim()) {
    // x = c v with v² = s constant and c² = a / s
    std::vector<AlgElement> cands = {R->one()};
    if (!is_dim1(R))
      for (std::size_t i = 0; i < R->dim(); ++i) cands.push_back(R->basis(i));
    bool any_square = false;
    for (const auto& v : cands) {
      auto s = (v * v).as_scalar();
      if (!s || s->is_zero()) continue;
      auto c = k.sqrt(X.a() / *s);
      if (!c) continue;
      any_square = true;
      for (const Elem& sgn : {*c, -*c}) {
        GroupElement x{{sgn * v}};
        if (X.contains(x)) return found({x}, false);
      }
    }
    if (is_dim1(R)) return none(any_square ? "sigma-obstruction" : "square-obstruction");
  }
  return open("no point among scaled basis elements");
}

PointSearch twist_points_k(const Torsor& X, const AlgebraPtr& R) {
  const Group& G = *X.group();
  const Field& k = X.field();
  const unsigned n = G.n(), d = G.d();
  try {
    if (G.psi() == Psi::Trivial) {
      SMat x;
      for (const auto& e : X.params()) {
        auto y = sigma_power_preimage(k, e, d);
        if (!y) return none(preimage_certificate(k));
        x.push_back(*y);
      }
      GroupElement p{lift_matrix(R, x)};
      if (X.contains(p)) return found({p}, false);
      return none("determinant-obstruction");
    }
    if (G.psi() == Psi::Identity && n == 1 && (k.kind() == Field::Kind::Shift || k.kind() == Field::Kind::Rationals)) {
      // σ^d(x) = a x
      std::vector<Elem> lambda(d, k.zero());
      lambda[0] = -X.a();
      auto sol = solve_additive(DifferenceOperator(k, lambda), k.zero());
      for (const auto& c : sol.kernel)
        if (!c.is_zero()) return found({GroupElement{{R->scalar(c)}}}, false);
      return none("no-rational-solution");
    }
  } catch (const Unsupported& e) {
    return open(e.what());
  }
  return open("no decision procedure for " + G.descriptor() + " over " + k.descriptor());
}

}  // namespace

PointSearch torsor_points(const Torsor& X, const AlgebraPtr& R, std::uint64_t budget) {
  if (R->field() != X.field()) throw MismatchError("algebra over another field");
  try {
    if (X.family() == Torsor::Family::TwistedForm) {
      const Cocycle& chi = X.cocycle();
      if (R != chi.ctx->A) throw MismatchError("twisted form points are searched over the cocycle's algebra");
      if (finite_findim(R)) {
        std::vector<GroupElement> pts;
        for (auto& g : X.group()->enumerate_points(chi.ctx->AA, budget))
          if (X.contains(g)) pts.push_back(std::move(g));
        return found(std::move(pts), true);
      }
      return found({X.canonical_point()}, false);
    }
    if (finite_findim(R)) return enumerate_torsor(X, R, budget);
  } catch (const BudgetExhausted&) {
    return open("budget-exhausted");
  }
  PointSearch result = open("no decision procedure for this torsor over " + R->describe());
  switch (X.family()) {
    case Torsor::Family::Mu:
      result = mu_points(X, R);
      break;
    case Torsor::Family::Additive:
      if (is_dim1(R)) {
        try {
          auto s = solve_additive(*X.group()->op(), X.a());
          result = s.solution ? found({GroupElement{{R->scalar(*s.solution)}}}, false) : none(s.certificate);
        } catch (const Unsupported& e) {
          result = open(e.what());
        }
      }
      break;
    case Torsor::Family::Diagonal:
      break;
    case Torsor::Family::Twist:
      if (is_dim1(R)) result = twist_points_k(X, R);
      break;
    case Torsor::Family::TwistedForm:
      break;
  }
  if (result.verdict == Verdict::Undecided) {
    if (auto p = probe(X, R)) return found({*p}, false);
    GroupElement one = X.group()->identity(R);
    if (X.family() != Torsor::Family::Additive && X.contains(one)) return found({one}, false);
  }
  return result;
}

// ---------------------------------------------------------------- cocycles and normal forms

Cocycle cocycle_from_point(const Torsor& X, const TensorContextPtr& ctx, const GroupElement& x) {
  std::string v = X.violation(x);
  if (!v.empty()) throw InvalidInput("not a point: " + v);
  const Group& G = *X.group();
  if (X.family() == Torsor::Family::TwistedForm) {
    const TensorContext& c = *X.cocycle().ctx;
    if (ctx != X.cocycle().ctx) throw MismatchError("twisted form points need the cocycle's context");
    GroupElement y = G.mul(Group::map(x, c.e1), G.inv(Group::map(x, c.e2)));
    // (a⊗b)⊗c ↦ a⊗bc is a left inverse of ∂₃
    AlgMorphism m = AlgMorphism::on_tensor(c.AAA, AlgMorphism::identity(c.AA), c.d1);
    GroupElement chi = Group::map(y, m);
    if (Group::map(chi, c.e3) != y) throw InvalidInput("point does not descend to a cocycle");
    return make_cocycle(X.group(), ctx, chi);
  }
  if (x.algebra() != ctx->A) throw MismatchError("point is not over the context algebra");
  GroupElement d1 = Group::map(x, ctx->d1), d2 = Group::map(x, ctx->d2);
  GroupElement chi;
  if (X.family() == Torsor::Family::Additive) {
    chi = {{d1.entries[0] - d2.entries[0]}};
  } else if (X.family() == Torsor::Family::Diagonal) {
    chi = d1;
    for (std::size_t i = 0; i < chi.entries.size(); ++i) chi.entries[i] = d1.entries[i] * d2.entries[i].inverse().value();
  } else {
    chi = {mat_mul(d1.entries, mat_inv(d2.entries, G.n()).value(), G.n())};
  }
  return make_cocycle(X.group(), ctx, chi);
}

Torsor torsor_from_cocycle(const Cocycle& chi) { return Torsor::twisted_form(chi); }

Torsor normalize(const Torsor& X) {
  if (X.family() != Torsor::Family::TwistedForm) return X;
  const Cocycle& chi = X.cocycle();
  const Group& G = *chi.G;
  const Field& k = G.field();
  if (G.descriptor() == "mu2sigma") {
    auto inv = mu_invariant(chi);
    return Torsor::mu(k, inv.a, inv.b);
  }
  switch (G.kind()) {
    case Group::Kind::Additive: {
      if (!G.op()) throw Unsupported("normal forms need an operator; every Ga-torsor is trivial");
      return Torsor::additive(*G.op(), additive_invariant(chi).a);
    }
    case Group::Kind::Diagonal: {
      GroupElement g = trivialize(chi);
      std::vector<Elem> a;
      for (const auto& f : G.functions()) {
        auto s = f.eval(g.entries).as_scalar();
        if (!s) throw InvalidInput("f(g) is not constant");
        a.push_back(*s);
      }
      return Torsor::diagonal(k, G.n(), G.functions(), a);
    }
    case Group::Kind::Twist: {
      const unsigned n = G.n();
      GroupElement x = trivialize(chi);
      const AlgebraPtr& A = chi.ctx->A;
      if (G.twist_base() == TwistBase::SL) {
        // x·diag(det(x)^{-1}, 1, ..., 1) still trivializes χ and lies in SL_n
        auto det = mat_det(x.entries, n).as_scalar();
        if (!det) throw InvalidInput("determinant of the trivialization is not constant");
        for (unsigned i = 0; i < n; ++i) x.entries[i * n] = det->inverse() * x.entries[i * n];
      }
      auto inv = mat_inv(x.entries, n).value();
      std::vector<AlgElement> psi_inv;
      switch (G.psi()) {
        case Psi::Trivial:
          psi_inv = mat_identity(A, n);
          break;
        case Psi::Identity:
          psi_inv = inv;
          break;
        case Psi::TransposeInverse:
          psi_inv = mat_transpose(x.entries, n);
          break;
      }
      GroupElement a{mat_mul(psi_inv, Group::sigma(x, G.d()).entries, n)};
      return Torsor::twist(k, G.twist_base(), n, G.d(), G.psi(), scalars_of(a));
    }
    default:
      break;
  }
  throw Unsupported("no family normal form for " + G.descriptor());
}

// ---------------------------------------------------------------- isomorphism

namespace {

IsoDecision iso_yes(std::vector<Elem> w) { return {Verdict::Equivalent, std::move(w), ""}; }
IsoDecision iso_no(std::string why) { return {Verdict::Inequivalent, std::nullopt, std::move(why)}; }
IsoDecision iso_open(std::string why) { return {Verdict::Undecided, std::nullopt, std::move(why)}; }

IsoDecision mu_iso(const Torsor& X, const Torsor& Y, std::uint64_t budget) {
  const Field& k = X.field();
  auto accept = [&](const Elem& l) { return k.sigma(l) / l * X.b() == Y.b() && l * l * X.a() == Y.a(); };
  if (k.characteristic() == 2) {
    if (!k.is_finite()) return iso_open("characteristic 2 needs a finite field");
    auto pool = nonzero_elements(k);
    checked_power(pool.size(), 1, budget);
    for (const auto& l : pool)
      if (accept(l)) return iso_yes({l});
    return iso_no("exhaustive-search");
  }
  auto l = k.sqrt(Y.a() / X.a());
  if (!l) return iso_no("square-obstruction");
  for (const Elem& c : {*l, -*l})
    if (accept(c)) return iso_yes({c});
  return iso_no("sigma-obstruction");
}

IsoDecision diagonal_iso(const Torsor& X, const Torsor& Y, std::uint64_t budget) {
  const Field& k = X.field();
  const Group& G = *X.group();
  if (X.params() == Y.params()) return iso_yes(std::vector<Elem>(G.n(), k.one()));
  if (!k.is_finite()) return iso_open("diagonal family over an infinite field");
  std::optional<std::vector<Elem>> hit;
  for_each_tuple(nonzero_elements(k), G.n(), budget, [&](const std::vector<Elem>& l) {
    if (verify_isomorphism(X, Y, l)) hit = l;
    return hit.has_value();
  });
  if (hit) return iso_yes(*hit);
  return iso_no("exhaustive-search");
}

IsoDecision twist_iso(const Torsor& X, const Torsor& Y, std::uint64_t budget) {
  const Field& k = X.field();
  const Group& G = *X.group();
  const unsigned n = G.n(), d = G.d();
  if (k.is_finite()) {
    for (const auto& c : base_points(k, G.twist_base(), n, budget))
      if (twist_action(k, G.psi(), d, n, X.params(), c) == Y.params()) return iso_yes(c);
    return iso_no("exhaustive-search");
  }
  try {
    if (G.psi() == Psi::Trivial) {
      SMat target = smul(sinv(X.params(), n).value(), Y.params(), n);
      SMat c;
      for (const auto& e : target) {
        auto y = sigma_power_preimage(k, e, d);
        if (!y) return iso_no(preimage_certificate(k));
        c.push_back(*y);
      }
      return iso_yes(c);
    }
    if (G.psi() == Psi::Identity && n == 1 && (k.kind() == Field::Kind::Shift || k.kind() == Field::Kind::Rationals)) {
      // a' = a σ^d(c) / c
      std::vector<Elem> lambda(d, k.zero());
      lambda[0] = -(Y.a() / X.a());
      auto sol = solve_additive(DifferenceOperator(k, lambda), k.zero());
      for (const auto& c : sol.kernel)
        if (!c.is_zero()) return iso_yes({c});
      return iso_no("no-rational-solution");
    }
  } catch (const Unsupported& e) {
    return iso_open(e.what());
  }
  return iso_open("no decision procedure for " + G.descriptor() + " over " + k.descriptor());
}

}  // namespace

IsoDecision isomorphic(const Torsor& X, const Torsor& Y, std::uint64_t budget) {
  if (X.family() != Y.family()) throw MismatchError("torsors from different families");
  if (X.field() != Y.field() || X.group()->descriptor() != Y.group()->descriptor()) throw MismatchError("torsors under different groups");
  IsoDecision r;
  try {
    switch (X.family()) {
      case Torsor::Family::Mu:
        r = mu_iso(X, Y, budget);
        break;
      case Torsor::Family::Additive: {
        try {
          auto s = solve_additive(*X.group()->op(), Y.a() - X.a());
          r = s.solution ? iso_yes({*s.solution}) : iso_no(s.certificate);
        } catch (const Unsupported& e) {
          r = iso_open(e.what());
        }
        break;
      }
      case Torsor::Family::Diagonal:
        r = diagonal_iso(X, Y, budget);
        break;
      case Torsor::Family::Twist:
        r = twist_iso(X, Y, budget);
        break;
      case Torsor::Family::TwistedForm: {
        Torsor nx = X, ny = Y;
        try {
          nx = normalize(X);
          ny = normalize(Y);
        } catch (const Unsupported&) {
          if (X.cocycle().ctx->A != Y.cocycle().ctx->A) return iso_open("twisted forms over different algebras");
          auto d = equivalent(X.cocycle(), Y.cocycle(), EquivMethod::Auto, budget);
          return {d.verdict, std::nullopt, d.certificate};
        }
        return isomorphic(nx, ny, budget);
      }
    }
  } catch (const BudgetExhausted&) {
    return iso_open("budget-exhausted");
  }
  if (r.verdict == Verdict::Equivalent && !verify_isomorphism(X, Y, *r.witness)) throw InvalidInput("isomorphism witness failed verification");
  return r;
}

bool verify_isomorphism(const Torsor& X, const Torsor& Y, const std::vector<Elem>& w) {
  const Field& k = X.field();
  const Group& G = *X.group();
  for (const auto& e : w)
    if (!k.owns(e)) return false;
  switch (X.family()) {
    case Torsor::Family::Mu:
      return w.size() == 1 && !w[0].is_zero() && w[0] * w[0] * X.a() == Y.a() && k.sigma(w[0]) / w[0] * X.b() == Y.b();
    case Torsor::Family::Additive:
      return w.size() == 1 && X.a() + (*G.op())(w[0]) == Y.a();
    case Torsor::Family::Diagonal: {
      if (w.size() != G.n()) return false;
      for (const auto& e : w)
        if (e.is_zero()) return false;
      for (std::size_t i = 0; i < G.functions().size(); ++i)
        if (X.params()[i] * G.functions()[i].eval(k, w) != Y.params()[i]) return false;
      return true;
    }
    case Torsor::Family::Twist: {
      const unsigned n = G.n();
      if (w.size() != n * n) return false;
      Elem det = sdet(w, n);
      if (det.is_zero() || (G.twist_base() == TwistBase::SL && !det.is_one())) return false;
      return twist_action(k, G.psi(), G.d(), n, X.params(), w) == Y.params();
    }
    case Torsor::Family::TwistedForm:
      return false;
  }
  return false;
}

// ---------------------------------------------------------------- classification

std::vector<ZVec> diagonal_syzygies(const std::vector<MultiplicativeFunction>& F, unsigned n) {
  std::vector<ZVec> vecs;
  for (const auto& f : F) {
    ZVec v;
    for (unsigned i = 0; i < n; ++i) v.push_back(zpoly_from(f.component(i)));
    vecs.push_back(v);
  }
  return syzygies(vecs);
}

bool diagonal_admissible(const Field& k, const std::vector<MultiplicativeFunction>& F, const std::vector<Elem>& a,
                         const std::vector<ZVec>& syz) {
  for (const auto& c : syz) {
    Elem prod = k.one();
    for (std::size_t i = 0; i < F.size(); ++i)
      for (std::size_t j = 0; j < c[i].size(); ++j) {
        if (c[i][j] == 0) continue;
        if (!c[i][j].fits_slong_p()) throw Unsupported("syzygy coefficient too large");
        prod *= k.sigma(a[i], static_cast<unsigned>(j)).pow(c[i][j].get_si());
      }
    if (!prod.is_one()) return false;
  }
  return true;
}

H1Classification classify_h1(const GroupPtr& G, std::uint64_t budget) {
  const Field& k = G->field();
  H1Classification out;
  out.group = G->descriptor();
  if (G->kind() == Group::Kind::Product) {
    auto a = classify_h1(G->first(), budget), b = classify_h1(G->second(), budget);
    out.complete = a.complete && b.complete;
    out.classes = a.classes * b.classes;
    out.parameters = a.parameters * b.parameters;
    for (const auto& x : a.representatives)
      for (const auto& y : b.representatives) out.representatives.push_back("prod(" + x + "|" + y + ")");
    out.statement = "product of: [" + a.statement + "] and [" + b.statement + "]";
    return out;
  }
  if (G->descriptor() == "mu2sigma") {
    out.statement = "classes of (a,b) with sigma(a) = a*b^2 modulo (a,b) ~ (l^2*a, sigma(l)/l*b); decided by the square test";
    if (!k.is_finite()) return out;
    std::vector<SMat> M;
    auto units = nonzero_elements(k);
    checked_power(units.size(), 2, budget);
    for (const auto& a : units)
      for (const auto& b : units)
        if (k.sigma(a) == a * b * b) M.push_back({a, b});
    std::vector<SMat> lambdas;
    for (const auto& l : units) lambdas.push_back({l});
    auto reps = orbit_representatives(M, lambdas, [&](const SMat& p, const SMat& l) {
      return SMat{l[0] * l[0] * p[0], k.sigma(l[0]) / l[0] * p[1]};
    });
    out.complete = true;
    out.parameters = M.size();
    out.classes = reps.size();
    for (auto i : reps) out.representatives.push_back(Torsor::mu(k, M[i][0], M[i][1]).descriptor());
    return out;
  }
  switch (G->kind()) {
    case Group::Kind::Additive: {
      if (!G->op()) {
        out.complete = true;
        out.classes = 1;
        out.parameters = 1;
        out.representatives = {"trivial"};
        out.statement = "every Ga-torsor is trivial";
        return out;
      }
      const auto& L = *G->op();
      out.statement = "k / L(k): a ~ a' iff L(b) = a' - a is solvable; decided by solve_additive";
      if (!k.is_finite()) return out;
      auto h = classify_additive_h1(L);
      out.complete = true;
      out.classes = h.count;
      out.parameters = k.size();
      for (const auto& r : h.representatives) out.representatives.push_back(Torsor::additive(L, r).descriptor());
      return out;
    }
    case Group::Kind::Diagonal: {
      const auto& F = G->functions();
      out.syzygies = diagonal_syzygies(F, G->n());
      out.statement = "torsors {f_i(x) = a_i} with a admissible for the exponent syzygies, modulo a ~ a*f(l)";
      if (!k.is_finite()) return out;
      auto units = nonzero_elements(k);
      std::vector<SMat> params, lambdas;
      for_each_tuple(units, F.size(), budget, [&](const std::vector<Elem>& a) {
        if (diagonal_admissible(k, F, a, out.syzygies)) params.push_back(a);
        return false;
      });
      for_each_tuple(units, G->n(), budget, [&](const std::vector<Elem>& l) {
        lambdas.push_back(l);
        return false;
      });
      auto reps = orbit_representatives(params, lambdas, [&](const SMat& a, const SMat& l) {
        SMat r = a;
        for (std::size_t i = 0; i < F.size(); ++i) r[i] = a[i] * F[i].eval(k, l);
        return r;
      });
      out.complete = true;
      out.parameters = params.size();
      out.classes = reps.size();
      for (auto i : reps) out.representatives.push_back(Torsor::diagonal(k, G->n(), F, params[i]).descriptor());
      return out;
    }
    case Group::Kind::Twist: {
      const unsigned n = G->n(), d = G->d();
      const Psi psi = G->psi();
      out.statement = "torsors {sigma^d(x) = psi(x)*a}, a ~ psi(c)^(-1)*a*sigma^d(c) for c in the base group over k";
      auto descriptor = [&](const SMat& a) { return twist_group_descriptor(G->twist_base(), n, d, psi) + ";a=" + join(a); };
      if (!k.is_finite()) {
        if (psi == Psi::Trivial && k.inversive()) {
          out.complete = true;
          out.classes = 1;
          out.representatives = {descriptor(sidentity(k, n))};
          out.statement = "every torsor is trivial: sigma is an automorphism of k";
        }
        return out;
      }
      auto pts = base_points(k, G->twist_base(), n, budget);
      auto reps = orbit_representatives(pts, pts, [&](const SMat& a, const SMat& c) { return twist_action(k, psi, d, n, a, c); });
      out.complete = true;
      out.parameters = pts.size();
      out.classes = reps.size();
      for (auto i : reps) out.representatives.push_back(descriptor(pts[i]));
      return out;
    }
    case Group::Kind::Matrix:
      if (G->relations().empty() || G->descriptor().rfind("sl:", 0) == 0) {
        out.complete = true;
        out.classes = 1;
        out.parameters = 1;
        out.representatives = {"trivial"};
        out.statement = "H1 of GL_n and SL_n is trivial";
        return out;
      }
      break;
    default:
      break;
  }
  throw Unsupported("no classification for " + G->descriptor());
}

// ---------------------------------------------------------------- exact sequence

DeltaResult connecting_delta(const Field& k, unsigned d, const Elem& x) {
  if (d == 0) throw InvalidInput("d must be positive");
  if (!k.owns(x) || x.is_zero()) throw InvalidInput("x must be a nonzero field element");
  std::vector<LaurentImage> images;
  for (unsigned i = 0; i < d; ++i) {
    Monomial v(d, 0);
    if (i + 1 < d) v[i + 1] = 1;
    images.push_back({i + 1 < d ? k.one() : x, v});
  }
  std::vector<std::string> names;
  for (unsigned i = 0; i < d; ++i) names.push_back("u" + std::to_string(i + 1));
  DeltaResult r;
  r.A = SigmaAlgebra::laurent(k, images, names);
  r.ctx = tensor_context(r.A);
  r.N = Group::kernel_of_sigma_power(k, TwistBase::GL, 1, d);
  AlgElement g = x.is_one() ? r.A->one() : r.A->generator(0);
  AlgElement chi = r.ctx->d1(g) * r.ctx->d2(g).inverse().value();
  r.chi = make_cocycle(r.N, r.ctx, {{chi}});
  Cocycle one = trivial_cocycle(r.N, r.ctx);
  try {
    r.lift = sigma_power_preimage(k, x, d);
  } catch (const Unsupported& e) {
    r.trivial = {Verdict::Undecided, std::nullopt, e.what()};
    return r;
  }
  if (!r.lift) {
    r.trivial = {Verdict::Inequivalent, std::nullopt, preimage_certificate(k)};
    return r;
  }
  // α = g / c lies in N(A) and has the same coboundary as g
  GroupElement alpha{{r.lift->inverse() * g}};
  if (x.is_one()) alpha = r.N->identity(r.A);
  if (!verify_equivalence(r.chi, one, alpha)) throw InvalidInput("lift does not trivialize the connecting cocycle");
  r.trivial = {Verdict::Equivalent, alpha, ""};
  return r;
}

ExactnessReport exactness_audit(const Field& k, unsigned d, std::uint64_t budget) {
  if (!k.is_finite()) throw Unsupported("exactness audit needs a finite field");
  ExactnessReport rep;
  rep.d = d;
  auto units = nonzero_elements(k);
  checked_power(units.size(), 2, budget);
  auto K = make_split(k, 1);
  auto N = Group::kernel_of_sigma_power(k, TwistBase::GL, 1, d);
  auto gm = Group::gm(k);
  std::set<std::uint64_t> n_pts, kernel, image;
  for (const auto& c : units) {
    if (N->contains({{K->scalar(c)}})) n_pts.insert(c.finite().code);
    Elem s = k.sigma(c, d);
    if (s.is_one()) kernel.insert(c.finite().code);
    image.insert(s.finite().code);
  }
  rep.n_k = n_pts.size();
  rep.g_k = units.size();
  rep.quotient_k = units.size();
  rep.image = image.size();
  rep.exact_at_n = n_pts.count(k.one().finite().code) == 1;
  rep.exact_at_g = kernel == n_pts;

  std::set<std::uint64_t> delta_trivial;
  bool pushed_trivial = true;
  for (const auto& x : units) {
    auto dr = connecting_delta(k, d, x);
    auto dec = equivalent(dr.chi, trivial_cocycle(dr.N, dr.ctx), EquivMethod::Structured, budget);
    if (dec.verdict == Verdict::Undecided) throw InvalidInput("connecting cocycle left undecided: " + dec.certificate);
    if (dec.verdict == Verdict::Equivalent) delta_trivial.insert(x.finite().code);
    auto in_gm = pushforward_group(dr.chi, gm);
    pushed_trivial = pushed_trivial && equivalent(in_gm, trivial_cocycle(gm, dr.ctx), EquivMethod::Structured, budget).verdict == Verdict::Equivalent;
  }
  rep.delta_trivial = delta_trivial.size();
  rep.exact_at_quotient = delta_trivial == image;
  rep.h1_n_classes = classify_h1(N, budget).classes;
  rep.h1_n_to_h1_g_trivial = pushed_trivial;
  return rep;
}

}  // namespace dcoh
