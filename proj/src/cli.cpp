#include "dcoh/cli.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <optional>

#include "CLI11.hpp"
#include "json.hpp"

#include "dcoh/algebras.hpp"
#include "dcoh/cocycles.hpp"
#include "dcoh/errors.hpp"
#include "dcoh/expr_parser.hpp"
#include "dcoh/operators.hpp"
#include "dcoh/torsors.hpp"

namespace dcoh {

namespace {

using json = nlohmann::json;

struct Options {
  std::string field, group = "mu2sigma", algebra = "k", op, family, lhs, rhs, chi, torsor, expr, x, method = "auto",
                     witness, what, c0;
  std::uint64_t budget = 2'000'000;
  unsigned d = 1, sigma = 1;
  bool json_out = false;
};

/// One output line; exit code carried alongside.
struct Reply {
  json result = nullptr;
  json witness = nullptr;
  std::string certificate;
  bool undecided = false;
};

json strings(const std::vector<Elem>& v) {
  json a = json::array();
  for (const auto& e : v) a.push_back(e.str());
  return a;
}

json strings(const GroupElement& g) {
  json a = json::array();
  for (const auto& e : g.entries) a.push_back(e.str());
  return a;
}

Reply from_verdict(Verdict v, json witness, const std::string& certificate) {
  Reply r;
  r.undecided = v == Verdict::Undecided;
  r.result = r.undecided ? json(nullptr) : json(v == Verdict::Equivalent);
  r.witness = std::move(witness);
  r.certificate = certificate;
  return r;
}

std::string need(const std::string& value, const char* flag) {
  if (value.empty()) throw ParseError(std::string("missing ") + flag);
  return value;
}

Field field_of(const Options& o) { return Field::parse(need(o.field, "--field")); }

/// Entries of a group element over R, separated by ';'.
GroupElement parse_group_element(const AlgebraPtr& R, const std::string& text) {
  GroupElement g;
  for (const auto& p : split_top_level(text, ';')) g.entries.push_back(R->parse_element(trim_copy(p)));
  return g;
}

std::vector<Elem> parse_scalars(const Field& k, const std::string& text) {
  std::string t = trim_copy(text);
  if (!t.empty() && t.front() == '[' && t.back() == ']') t = t.substr(1, t.size() - 2);
  std::vector<Elem> out;
  for (const auto& p : split_top_level(t, ',')) out.push_back(k.parse_element(trim_copy(p)));
  return out;
}

Cocycle parse_cocycle(const GroupPtr& G, const TensorContextPtr& ctx, const std::string& text) {
  return make_cocycle(G, ctx, parse_group_element(ctx->AA, text));
}

/// Torsor descriptor from --family/--op/--group and a parameter string.
std::string torsor_descriptor(const Options& o, const std::string& params) {
  if (o.family.empty()) return params;
  if (o.family == "mu") return "mu:" + params;
  if (o.family == "add") return "add:" + need(o.op, "--op") + ";" + params;
  if (o.family == "diag") return need(o.group, "--group") + ";" + params;
  if (o.family == "twist") return need(o.group, "--group") + ";a=" + params;
  throw ParseError("unknown family '" + o.family + "'");
}

EquivMethod method_of(const std::string& m) {
  if (m == "auto") return EquivMethod::Auto;
  if (m == "enumerate") return EquivMethod::Enumerate;
  if (m == "structured") return EquivMethod::Structured;
  throw ParseError("unknown method '" + m + "'");
}

// ---------------------------------------------------------------- commands

Reply field_eval(const Options& o) {
  Field k = field_of(o);
  Elem x = k.parse_element(need(o.expr, "--expr"));
  Reply r;
  r.result = {{"value", x.str()}, {"sigma", k.sigma(x, o.sigma).str()}};
  return r;
}

Reply cocycle_check(const Options& o) {
  Field k = field_of(o);
  auto A = parse_algebra(k, o.algebra);
  auto ctx = tensor_context(A);
  auto G = Group::parse(k, o.group);
  auto c = check_cocycle(G, ctx, parse_group_element(ctx->AA, need(o.chi, "--chi")));
  Reply r;
  r.result = c.ok;
  r.certificate = c.reason;
  return r;
}

Reply cocycle_equiv(const Options& o) {
  Field k = field_of(o);
  auto A = parse_algebra(k, o.algebra);
  auto ctx = tensor_context(A);
  auto G = Group::parse(k, o.group);
  auto c1 = parse_cocycle(G, ctx, need(o.lhs, "--lhs"));
  auto c2 = parse_cocycle(G, ctx, need(o.rhs, "--rhs"));
  auto d = equivalent(c1, c2, method_of(o.method), o.budget);
  return from_verdict(d.verdict, d.witness ? strings(*d.witness) : json(nullptr), d.certificate);
}

Reply classify(const Options& o) {
  Field k = field_of(o);
  auto h = classify_h1(Group::parse(k, o.group), o.budget);
  Reply r;
  r.result = {{"group", h.group}, {"complete", h.complete}, {"statement", h.statement}};
  if (h.complete) {
    r.result["classes"] = h.classes;
    r.result["representatives"] = h.representatives;
    r.result["parameters"] = h.parameters;
  } else {
    r.undecided = true;
  }
  if (!h.syzygies.empty()) {
    json syz = json::array();
    for (const auto& c : h.syzygies) {
      json row = json::array();
      for (const auto& p : c) row.push_back(zpoly_str(p));
      syz.push_back(row);
    }
    r.result["syzygies"] = syz;
  }
  return r;
}

Reply iso(const Options& o) {
  Field k = field_of(o);
  auto X = Torsor::parse(k, torsor_descriptor(o, need(o.lhs, "--lhs")));
  auto Y = Torsor::parse(k, torsor_descriptor(o, need(o.rhs, "--rhs")));
  auto d = isomorphic(X, Y, o.budget);
  return from_verdict(d.verdict, d.witness ? strings(*d.witness) : json(nullptr), d.certificate);
}

Reply torsor_points_cmd(const Options& o) {
  Field k = field_of(o);
  auto X = Torsor::parse(k, torsor_descriptor(o, need(o.torsor, "--torsor")));
  auto R = parse_algebra(k, o.algebra);
  auto p = torsor_points(X, R, o.budget);
  Reply r = from_verdict(p.verdict, p.found() ? strings(p.points[0]) : json(nullptr), p.certificate);
  if (!r.undecided) {
    r.result = {{"found", p.found()}, {"complete", p.complete}};
    if (p.complete) r.result["count"] = p.points.size();
  }
  return r;
}

Reply normalize_cmd(const Options& o) {
  Field k = field_of(o);
  auto A = parse_algebra(k, o.algebra);
  auto ctx = tensor_context(A);
  auto chi = parse_cocycle(Group::parse(k, o.group), ctx, need(o.chi, "--chi"));
  Reply r;
  r.result = normalize(torsor_from_cocycle(chi)).descriptor();
  return r;
}

Reply delta(const Options& o) {
  Field k = field_of(o);
  auto dr = connecting_delta(k, o.d, k.parse_element(need(o.x, "--x")));
  Reply r = from_verdict(dr.trivial.verdict, dr.lift ? json::array({dr.lift->str()}) : json(nullptr), dr.trivial.certificate);
  if (!r.undecided) r.result = {{"trivial", dr.trivial.verdict == Verdict::Equivalent}, {"cocycle", strings(dr.chi.value)}};
  return r;
}

Reply audit_amitsur(const Options& o) {
  Field k = field_of(o);
  auto rep = amitsur_audit(parse_algebra(k, o.algebra));
  Reply r;
  r.result = {{"exact", rep.exact}, {"dim", rep.dim},          {"ker0", rep.ker0},
              {"ker1", rep.ker1},   {"im0", rep.im0},          {"unit_in_ker0", rep.unit_in_ker0}};
  return r;
}

Reply audit_exactness(const Options& o) {
  Field k = field_of(o);
  auto e = exactness_audit(k, o.d, o.budget);
  Reply r;
  r.result = {{"exact", e.exact()},
              {"d", e.d},
              {"n_k", e.n_k},
              {"g_k", e.g_k},
              {"quotient_k", e.quotient_k},
              {"image", e.image},
              {"delta_trivial", e.delta_trivial},
              {"h1_n_classes", e.h1_n_classes},
              {"exact_at_n", e.exact_at_n},
              {"exact_at_g", e.exact_at_g},
              {"exact_at_quotient", e.exact_at_quotient},
              {"h1_n_to_h1_g_trivial", e.h1_n_to_h1_g_trivial}};
  return r;
}

Reply descend(const Options& o) {
  Field k = field_of(o);
  auto C0 = parse_algebra(k, need(o.c0, "--c0"));
  auto A = parse_algebra(k, o.algebra);
  auto res = descend_invariants(canonical_datum(C0, A));
  Reply r;
  r.result = {{"dim", res.B0->dim()}, {"dim_c0", C0->dim()}, {"canonical_map_iso", res.canonical_map_iso}};
  if (k.is_finite() && res.B0->dim() == C0->dim()) {
    auto m = find_isomorphism(res.B0, C0, o.budget);
    r.result["isomorphic"] = m.has_value();
    if (m) {
      json w = json::array();
      for (const auto& v : *m) w.push_back(strings(v));
      r.witness = w;
    }
  }
  return r;
}

/// Re-checks a witness with field and operator arithmetic only.
Reply verify(const Options& o) {
  Field k = field_of(o);
  const std::string what = need(o.what, "--what");
  const std::string w = need(o.witness, "--witness");
  Reply r;
  if (what == "solve") {
    auto L = DifferenceOperator::parse(k, need(o.op, "--op"));
    r.result = L(k.parse_element(w)) == k.parse_element(need(o.rhs, "--rhs"));
  } else if (what == "iso") {
    auto X = Torsor::parse(k, torsor_descriptor(o, need(o.lhs, "--lhs")));
    auto Y = Torsor::parse(k, torsor_descriptor(o, need(o.rhs, "--rhs")));
    r.result = verify_isomorphism(X, Y, parse_scalars(k, w));
  } else if (what == "point") {
    auto X = Torsor::parse(k, torsor_descriptor(o, need(o.torsor, "--torsor")));
    auto R = parse_algebra(k, o.algebra);
    auto x = parse_group_element(R, w);
    r.result = x.entries.size() == X.group()->size() && X.contains(x);
  } else if (what == "equiv") {
    auto A = parse_algebra(k, o.algebra);
    auto ctx = tensor_context(A);
    auto G = Group::parse(k, o.group);
    auto c1 = parse_cocycle(G, ctx, need(o.lhs, "--lhs"));
    auto c2 = parse_cocycle(G, ctx, need(o.rhs, "--rhs"));
    r.result = verify_equivalence(c1, c2, parse_group_element(A, w));
  } else if (what == "delta") {
    r.result = k.sigma(k.parse_element(w), o.d) == k.parse_element(need(o.x, "--x"));
  } else {
    throw ParseError("unknown --what '" + what + "' (solve, iso, point, equiv, delta)");
  }
  return r;
}

json line(bool ok, const Reply& r) {
  json j;
  j["ok"] = ok;
  j["result"] = r.result;
  j["witness"] = r.witness;
  j["certificate"] = r.certificate;
  j["undecided"] = r.undecided;
  return j;
}

json error_line(const std::string& kind, const std::string& message) {
  Reply r;
  json j = line(false, r);
  j["error"] = kind + ": " + message;
  return j;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out) {
  Options o;
  CLI::App app{"Difference-algebraic cohomology and torsor classification", "dcoh"};
  app.require_subcommand(1);

  const std::map<std::string, std::pair<std::string, std::function<Reply(const Options&)>>> commands = {
      {"field-eval", {"Evaluate a field element and its image under sigma^n", field_eval}},
      {"cocycle-check", {"Check the cocycle identity for --chi over --algebra", cocycle_check}},
      {"cocycle-equiv", {"Decide whether --lhs and --rhs are cohomologous", cocycle_equiv}},
      {"classify", {"Classify torsors of --group over --field", classify}},
      {"iso", {"Decide isomorphism of two torsors of one family", iso}},
      {"torsor-points", {"Search for points of --torsor over --algebra", torsor_points_cmd}},
      {"normalize", {"Family normal form of the twisted form of --chi", normalize_cmd}},
      {"delta", {"Connecting map for Gm and ker sigma^d at --x", delta}},
      {"audit-amitsur", {"Exactness of the Amitsur complex of --algebra", audit_amitsur}},
      {"audit-exactness", {"Exactness of the Gm sequence over a finite field", audit_exactness}},
      {"descend", {"Descend the canonical datum of --c0 along --algebra", descend}},
      {"verify", {"Re-check a witness (--what solve|iso|point|equiv|delta)", verify}},
  };

  std::map<CLI::App*, std::function<Reply(const Options&)>> handlers;
  for (const auto& [name, entry] : commands) {
    CLI::App* sub = app.add_subcommand(name, entry.first);
    sub->add_option("--field", o.field, "Difference field, e.g. \"GF(9);frob^1\" or \"QQ(t);shift\"");
    sub->add_option("--group", o.group, "Group descriptor");
    sub->add_option("--algebra", o.algebra, "Algebra descriptor");
    sub->add_option("--budget", o.budget, "Search budget");
    sub->add_flag("--json", o.json_out, "JSON lines output (the only format)");
    sub->add_option("--op", o.op, "Difference operator in s");
    sub->add_option("--family", o.family, "Torsor family: mu, add, diag, twist");
    sub->add_option("--lhs", o.lhs, "First object");
    sub->add_option("--rhs", o.rhs, "Second object");
    sub->add_option("--chi", o.chi, "Cocycle entries over A#A, separated by ';'");
    sub->add_option("--torsor", o.torsor, "Torsor descriptor or family parameters");
    sub->add_option("--expr", o.expr, "Field element");
    sub->add_option("--sigma", o.sigma, "Power of sigma for field-eval");
    sub->add_option("--d", o.d, "Exponent d");
    sub->add_option("--x", o.x, "Field element x");
    sub->add_option("--method", o.method, "auto, enumerate or structured");
    sub->add_option("--witness", o.witness, "Witness to verify");
    sub->add_option("--what", o.what, "Kind of witness for verify");
    sub->add_option("--c0", o.c0, "Algebra over k to descend");
    handlers[sub] = entry.second;
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    out << error_line("parse", e.what()).dump() << "\n";
    return 2;
  }

  CLI::App* chosen = app.get_subcommands().front();
  try {
    Reply r = handlers.at(chosen)(o);
    out << line(true, r).dump() << "\n";
    return r.certificate == "budget-exhausted" ? 3 : 0;
  } catch (const ParseError& e) {
    out << error_line("parse", e.what()).dump() << "\n";
    return 2;
  } catch (const BudgetExhausted& e) {
    out << error_line("budget", e.what()).dump() << "\n";
    return 3;
  } catch (const std::exception& e) {
    out << error_line("invalid", e.what()).dump() << "\n";
    return 1;
  }
}

}  // namespace dcoh
