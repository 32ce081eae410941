#pragma once

#include <CLI11.hpp>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "seirint/numerics.hpp"
#include "seirint/report.hpp"

namespace seirint {

/// Raised for unusable input that the argument parser cannot catch.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace cli_detail {

using nlohmann::json;

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

/// "p", "p/q" or a decimal such as "-1.25e-3", read exactly.
inline Rat parse_number(const std::string& text) {
  if (text.find_first_of(".eE") == std::string::npos) return Rat::parse(text);
  std::size_t e = text.find_first_of("eE");
  std::string mant = text.substr(0, e);
  long exp10 = 0;
  if (e != std::string::npos) {
    std::size_t used = 0;
    exp10 = std::stol(text.substr(e + 1), &used);
    if (used != text.size() - e - 1) throw std::invalid_argument("malformed number '" + text + "'");
  }
  std::size_t dot = mant.find('.');
  if (dot != std::string::npos) {
    exp10 -= static_cast<long>(mant.size() - dot - 1);
    mant.erase(dot, 1);
  }
  if (mant == "" || mant == "-" || mant == "+") throw std::invalid_argument("malformed number '" + text + "'");
  Rat v = Rat::parse(mant[0] == '+' ? mant.substr(1) : mant);
  if (std::labs(exp10) > 400) throw std::invalid_argument("exponent out of range in '" + text + "'");
  Rat ten(10);
  for (long i = 0; i < std::labs(exp10); ++i) v = exp10 > 0 ? v * ten : v / ten;
  return v;
}

/// "k=v,..." with values accepted by parse_number.
inline ParamAssignment parse_numeric_assignment(const std::string& text) {
  ParamAssignment out;
  for (const auto& item : split(text, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw std::invalid_argument("expected k=v, got '" + item + "'");
    out[item.substr(0, eq)] = parse_number(item.substr(eq + 1));
  }
  return out;
}

/// Catalog name, or a path to a `name = expr` system file.
inline VectorField resolve_system(const std::string& name_or_path) {
  const auto& names = catalog_names();
  if (std::find(names.begin(), names.end(), name_or_path) != names.end()) return catalog(name_or_path);
  std::ifstream in(name_or_path);
  if (!in) throw UsageError("unknown system '" + name_or_path + "' (not in catalog, not a readable file)");
  std::stringstream ss;
  ss << in.rdbuf();
  return load_system(ss.str(), std::filesystem::path(name_or_path).stem().string());
}

/// "0" if every entry vanishes, else the nonzero entries labelled by name.
inline std::string residual_text(const std::vector<RatFunc>& res, const std::vector<std::string>& labels) {
  std::string out;
  for (std::size_t i = 0; i < res.size(); ++i) {
    if (res[i].is_zero()) continue;
    if (!out.empty()) out += "; ";
    out += labels[i] + ": " + res[i].to_string();
  }
  return out.empty() ? "0" : out;
}

inline std::vector<std::string> var_names(const VectorField& f) {
  std::vector<std::string> out;
  for (Symbol s : f.vars) out.push_back(s.name());
  return out;
}

inline std::vector<std::string> numbered(const std::string& prefix, std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 1; i <= n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

inline Verdict zero_verdict(const std::string& residual) { return residual == "0" ? Verdict::pass : Verdict::fail; }

// ---- check ----------------------------------------------------------------

inline Report check_integral(const std::string& system, const std::string& F, const std::string& claim,
                             const std::string& params) {
  Report rep;
  if (!claim.empty()) {
    if (!F.empty() || !system.empty()) throw UsageError("--claim excludes --F and --system");
    const IntegralClaim& c = find_claim(claim);
    auto [e, res] = check_claim(c);
    json rel = json::object();
    for (const auto& [k, v] : c.relations) rel[k] = v;
    json ps = json::object();
    for (const auto& [k, v] : c.params) ps[k] = v.str();
    rep.witness = {{"claim", c.id}, {"system", c.system}, {"F", e.str()}, {"params", ps}, {"relations", rel}};
    rep.residual = res.to_string();
    rep.verdict = res.is_zero() ? Verdict::pass : Verdict::discrepancy;
    return rep;
  }
  if (F.empty() || system.empty()) throw UsageError("check integral needs --system and --F, or --claim");
  VectorField f = resolve_system(system);
  auto [e, res] = first_integral_residual(F, f, parse_params(params));
  rep.witness = {{"system", f.name}, {"F", e.str()}, {"field", to_json(f.comps)}, {"vars", var_names(f)}};
  rep.residual = res.to_string();
  rep.verdict = zero_verdict(*rep.residual);
  return rep;
}

inline Report check_commuting(const std::string& system, const std::string& scale) {
  VectorField f = resolve_system(system.empty() ? "seir_ext" : system);
  std::vector<VectorField> fs{f};
  for (const auto& v : split(scale.empty() ? "X,Y,Z" : scale, ',')) {
    auto names = var_names(f);
    if (std::find(names.begin(), names.end(), v) == names.end())
      throw UsageError("'" + v + "' is not a state variable of " + f.name);
    fs.push_back(scaling_field(f, v));
  }
  json brackets = json::array();
  std::vector<RatFunc> all;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < fs.size(); ++i)
    for (std::size_t j = i + 1; j < fs.size(); ++j) {
      VectorField br = lie_bracket(fs[i], fs[j]);
      std::string label = "[" + fs[i].name + "," + fs[j].name + "]";
      brackets.push_back({{"pair", label}, {"bracket", to_json(br.comps)}, {"zero", is_zero(br)}});
      for (std::size_t k = 0; k < br.dim(); ++k) {
        all.push_back(br.comps[k]);
        labels.push_back(label + "." + f.vars[k].name());
      }
    }
  Report rep;
  rep.witness = {{"system", f.name}, {"fields", fs.size()}, {"brackets", brackets}};
  rep.residual = residual_text(all, labels);
  rep.verdict = zero_verdict(*rep.residual);
  return rep;
}

inline Report check_particular(Case c) {
  struct Item {
    std::string name;
    ParticularSolution sol;
    VectorField f;
  };
  std::vector<Item> items{{"plane", plane_solution(c), plane_system(c)},
                          {"extended", extended_solution(), extended_field(c)}};
  json sols = json::array();
  std::vector<RatFunc> all;
  std::vector<std::string> labels;
  for (const auto& it : items) {
    auto res = verify_particular_solution(it.sol, it.f);
    json vals = json::object();
    for (const auto& [k, v] : it.sol.values) vals[k] = v.to_string();
    sols.push_back({{"name", it.name}, {"system", it.f.name}, {"values", vals}, {"residual", to_json(res)}});
    for (std::size_t k = 0; k < res.size(); ++k) {
      all.push_back(res[k]);
      labels.push_back(it.name + "." + it.f.vars[k].name());
    }
  }
  Report rep;
  rep.witness = {{"case", case_name(c)}, {"solutions", sols}};
  rep.residual = residual_text(all, labels);
  rep.verdict = zero_verdict(*rep.residual);
  return rep;
}

// ---- ve -------------------------------------------------------------------

inline json tower_json(const Tower& t) {
  json out = json::array();
  for (const TowerGen* g : t.gens()) {
    json e = {{"name", g->sym.name()}, {"kind", kind_name(g->kind)}};
    if (g->kind != GenKind::base) e["arg"] = g->arg.to_string();
    if (g->kind == GenKind::linear) e["coeff"] = g->coeff.to_string();
    out.push_back(e);
  }
  return out;
}

inline Report ve_build(Case c) {
  LinearSystem sys = build_ve(c);
  Report rep;
  rep.witness = {{"case", case_name(c)}, {"matrix", to_json(sys.m)}, {"tower", tower_json(sys.tower)}};
  rep.verdict = Verdict::pass;
  return rep;
}

inline Report ve_verify(Case c, int column, bool controls) {
  if (column < 0 || column > 6) throw UsageError("--column must be in 1..6");
  FundamentalSet fs = fundamental_columns(c);
  LinearSystem sys = build_ve(c);
  json cols = json::array();
  std::vector<RatFunc> all;
  std::vector<std::string> labels;
  bool ok = true;
  for (std::size_t j = 0; j < 6; ++j) {
    if (column != 0 && static_cast<int>(j) + 1 != column) continue;
    auto res = verify_ve_column(fs.cols[j], sys);
    bool unit = is_unit_vector(initial_value(fs, j), j);
    ok = ok && unit;
    cols.push_back({{"column", j + 1}, {"entries", to_json(std::vector<RatFunc>(fs.cols[j].begin(), fs.cols[j].end()))},
                    {"residual", to_json(res)}, {"initial_value_is_unit", unit}});
    for (std::size_t i = 0; i < res.size(); ++i) {
      all.push_back(res[i]);
      labels.push_back("Phi" + std::to_string(j + 1) + "[" + std::to_string(i + 1) + "]");
    }
  }
  Report rep;
  rep.witness = {{"case", case_name(c)}, {"columns", cols}, {"tower", tower_json(fs.tower)}};
  if (controls) {
    auto ps = perturbation_controls(fs, sys);
    std::size_t detected = 0, by_residual = 0;
    for (const auto& p : ps) {
      detected += p.detected();
      by_residual += p.residual_nonzero;
    }
    rep.witness["controls"] = {{"total", ps.size()}, {"detected", detected}, {"residual_nonzero", by_residual}};
    ok = ok && detected == ps.size();
  }
  rep.residual = residual_text(all, labels);
  rep.verdict = ok && *rep.residual == "0" ? Verdict::pass : Verdict::fail;
  return rep;
}

inline Report ve_sigma(Case c) {
  SigmaActionReport s = sigma_action_check(c);
  std::vector<RatFunc> all = s.residual;
  std::vector<std::string> labels = numbered("sigma(Phi2)-combination[", 6);
  for (auto& l : labels) l += "]";
  json fixed = json::array();
  for (std::size_t j = 0; j < s.fixed_residuals.size(); ++j) {
    fixed.push_back({{"column", j + 3}, {"residual", to_json(s.fixed_residuals[j])}});
    for (std::size_t i = 0; i < 6; ++i) {
      all.push_back(s.fixed_residuals[j][i]);
      labels.push_back("sigma(Phi" + std::to_string(j + 3) + ")-Phi" + std::to_string(j + 3) + "[" +
                       std::to_string(i + 1) + "]");
    }
  }
  json gam = json::object();
  for (const auto& [k, v] : gamma_constants(c)) gam[k] = v.to_string();
  Report rep;
  rep.witness = {{"case", case_name(c)},
                 {"coefficients", s.coefficient_names},
                 {"gamma_constants", gam},
                 {"residual", to_json(s.residual)},
                 {"fixed", fixed}};
  rep.residual = residual_text(all, labels);
  rep.verdict = zero_verdict(*rep.residual);
  return rep;
}

// ---- risch ----------------------------------------------------------------

inline Report risch_gamma(const std::string& alpha_text) {
  Rat alpha = Rat::parse(alpha_text);
  RischVerdict v = gamma_elementary(alpha);
  Report rep;
  rep.witness = {{"alpha", alpha.str()}, {"tower", tower_json(v.tower)}, {"certificate", to_json(v.cert)}};
  if (v.status == RischStatus::elementary) {
    RatFunc x = RatFunc::var("x"), th1 = RatFunc::var("th1");
    RatFunc integrand = x.pow(alpha.to_long() - 1) * th1;
    RatFunc d = v.tower.derive(*v.antiderivative) - integrand;
    rep.witness["integrand"] = integrand.to_string();
    rep.witness["antiderivative"] = v.antiderivative->to_string();
    rep.witness["derivative_residual"] = d.to_string();
    rep.witness["gamma"] = v.gamma->to_string();
    rep.verdict = d.is_zero() ? Verdict::elementary : Verdict::fail;
  } else {
    rep.verdict = check_certificate(v.cert) ? Verdict::non_elementary : Verdict::fail;
  }
  return rep;
}

inline Report risch_ode(const std::string& f_text, const std::string& g_text) {
  Rat f = Rat::parse(f_text);
  if (f.is_zero()) throw UsageError("--f must be nonzero");
  Tower none;
  RatFunc g = parse_into(g_text, none).value();
  for (auto id : g.vars())
    if (Symbol::from_id(id).name() != "x") throw UsageError("--g may only use the variable x");
  RischOdeResult r = solve_risch_ode({f, g});
  Report rep;
  rep.witness = {{"f", f.str()}, {"g", g.to_string()}, {"certificate", to_json(r.cert)}};
  if (r.q) {
    rep.witness["solution"] = r.q->to_string();
    RatFunc d = Tower::over("x").derive(*r.q) + RatFunc(f) * *r.q - g;
    rep.witness["ode_residual"] = d.to_string();
    rep.verdict = d.is_zero() ? Verdict::elementary : Verdict::fail;
  } else {
    rep.witness["solution"] = nullptr;
    rep.verdict = check_certificate(r.cert) ? Verdict::non_elementary : Verdict::fail;
  }
  return rep;
}

inline Report risch_recurrence() {
  auto checks = gamma_recurrence_checks();
  json forms = json::array();
  for (const auto& c : checks) forms.push_back({{"form", c.form}, {"residual", c.residual.to_string()}, {"holds", c.holds()}});
  Report rep;
  rep.witness = {{"forms", forms},
                 {"notation", "rho = x^alpha, th1 = exp(-x), G = Gamma(alpha,x), G1 = Gamma(alpha+1,x)"}};
  // The by-parts form must hold; the variant is the claim under test.
  if (!checks[0].holds()) {
    rep.residual = checks[0].residual.to_string();
    rep.verdict = Verdict::fail;
  } else {
    rep.residual = checks[1].residual.to_string();
    rep.verdict = checks[1].holds() ? Verdict::pass : Verdict::discrepancy;
  }
  return rep;
}

// ---- galois ---------------------------------------------------------------

inline GaloisParams galois_overrides(const std::string& text) {
  GaloisParams out;
  for (const auto& [k, v] : parse_params(text)) out[k] = RatFunc(v);
  return out;
}

inline Report galois_power(Case c, long k, const std::string& params) {
  if (k < 1) throw UsageError("--k must be at least 1");
  PowerReport pr = power_report(c, galois_overrides(params), k);
  Report rep;
  rep.witness = {{"case", case_name(c)},
                 {"k", k},
                 {"display", k == 2 ? "square" : "general"},
                 {"matrix", to_json(pr.computed.m)},
                 {"closed_form_agrees", pr.closed_form_agrees},
                 {"mismatches", to_json(pr.mismatches)}};
  rep.verdict = !pr.closed_form_agrees ? Verdict::fail : pr.discrepancy() ? Verdict::discrepancy : Verdict::pass;
  return rep;
}

inline Report galois_noncommute(Case c) {
  auto cert = noncommutativity_certificate(c);
  Report rep;
  rep.witness = {{"certificate", to_json(cert)}};
  rep.verdict = verify_certificate(cert) ? Verdict::pass : Verdict::fail;
  return rep;
}

// ---- sim ------------------------------------------------------------------

inline std::vector<double> parse_init(const std::string& text, const VectorField& f) {
  auto items = split(text, ',');
  std::vector<double> y(f.dim(), 0.0);
  if (!items.empty() && items[0].find('=') != std::string::npos) {
    std::vector<bool> seen(f.dim(), false);
    for (const auto& [k, v] : parse_numeric_assignment(text)) {
      auto names = var_names(f);
      auto it = std::find(names.begin(), names.end(), k);
      if (it == names.end()) throw UsageError("'" + k + "' is not a state variable of " + f.name);
      y[it - names.begin()] = v.to_double();
      seen[it - names.begin()] = true;
    }
    for (std::size_t i = 0; i < f.dim(); ++i)
      if (!seen[i]) throw UsageError("--init lacks a value for " + f.vars[i].name());
    return y;
  }
  if (items.size() != f.dim())
    throw UsageError("--init needs " + std::to_string(f.dim()) + " values for " + f.name);
  for (std::size_t i = 0; i < f.dim(); ++i) y[i] = parse_number(items[i]).to_double();
  return y;
}

/// Integrals of the catalog entry that hold without specialisation.
inline std::vector<std::string> default_integrals(const std::string& system) {
  std::vector<std::string> out;
  for (const auto& c : known_integrals())
    if (c.system == system && c.params.empty() && c.relations.empty()) out.push_back(c.expr);
  return out;
}

struct SimArgs {
  std::string system, params, init, report = "drift", csv, case_name;
  std::vector<std::string> F;
  double t0 = 0.0, t1 = 1.0;
  ToleranceConfig tol;
};

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline Report sim_run(const SimArgs& a) {
  a.tol.validate();
  Report rep;
  if (a.report == "fundamental") {
    if (a.case_name.empty()) throw UsageError("--report fundamental needs --case");
    Case c = parse_case(a.case_name);
    if (a.t0 != 0.0) throw UsageError("--report fundamental starts at t0 = 0");
    auto chk = check_fundamental(c, parse_numeric_assignment(a.params), a.t1, a.tol);
    json num = json::array(), sym = json::array();
    for (int i = 0; i < 6; ++i) {
      json rn = json::array(), rs = json::array();
      for (int j = 0; j < 6; ++j) {
        rn.push_back(fmt(chk.numeric(i, j)));
        rs.push_back(fmt(chk.symbolic(i, j)));
      }
      num.push_back(rn);
      sym.push_back(rs);
    }
    rep.witness = {{"case", case_name(c)},    {"t", fmt(a.t1)},          {"numeric", num},
                   {"symbolic", sym},          {"max_abs_diff", fmt(chk.max_abs_diff)},
                   {"det", fmt(chk.det)},      {"abel", fmt(chk.abel)},   {"threshold", "1e-08"}};
    rep.verdict = chk.pass() ? Verdict::pass : Verdict::fail;
    return rep;
  }
  if (a.system.empty() || a.init.empty()) throw UsageError("sim run needs --system and --init");
  VectorField f = resolve_system(a.system);
  NumericParams p = numeric_params(parse_numeric_assignment(a.params));
  auto y0 = parse_init(a.init, f);
  Trajectory tr = integrate(f, p, y0, a.t0, a.t1, a.tol);
  json fin = json::object();
  for (std::size_t i = 0; i < f.dim(); ++i) fin[f.vars[i].name()] = fmt(tr.back()[i]);
  rep.witness = {{"system", f.name}, {"steps", tr.steps}, {"rejections", tr.rejections}, {"final", fin}};
  if (a.report == "trajectory") {
    if (!a.csv.empty()) {
      std::ofstream out(a.csv);
      if (!out) throw UsageError("cannot write '" + a.csv + "'");
      out << tr.csv();
      rep.witness["csv_file"] = a.csv;
    } else {
      rep.witness["csv"] = tr.csv();
    }
    rep.verdict = Verdict::pass;
    return rep;
  }
  if (a.report != "drift") throw UsageError("--report must be drift, trajectory or fundamental");
  auto Fs = a.F.empty() ? default_integrals(f.name) : a.F;
  if (Fs.empty()) throw UsageError("no default integrals for " + f.name + "; pass --F");
  double threshold = 100 * a.tol.rtol;
  json drifts = json::array();
  bool ok = true;
  for (const auto& F : Fs) {
    double d = conservation_drift(F, tr, f, p);
    ok = ok && d < threshold;
    drifts.push_back({{"F", F}, {"drift", fmt(d)}});
  }
  rep.witness["drift"] = drifts;
  rep.witness["threshold"] = fmt(threshold);
  rep.verdict = ok ? Verdict::pass : Verdict::fail;
  return rep;
}

/// Option values of the invoked subcommand, keyed by long name.
inline std::map<std::string, std::string> collect_inputs(const CLI::App* sub) {
  std::map<std::string, std::string> out;
  for (const CLI::Option* o : sub->get_options()) {
    if (o->count() == 0 || o->get_name() == "--help") continue;
    std::string v;
    for (const auto& r : o->results()) v += (v.empty() ? "" : ",") + r;
    std::string name = o->get_name(false, true);
    out[name.substr(name.find_first_not_of('-'))] = v;
  }
  return out;
}

}  // namespace cli_detail

/// Runs one command. Writes the JSON report to `out` and a one-line summary
/// to `err`; returns the process exit code.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  using namespace cli_detail;
  CLI::App app{"Exact verification of SEIR first integrals, variational equations, Risch and Galois certificates",
               "seirint"};
  app.require_subcommand(1);

  std::string system, F, claim, params, scale, case_str = "a_ne_b", alpha, f_text, g_text;
  int column = 0;
  bool controls = false;
  long k = 2;
  SimArgs sim;
  std::function<Report()> action;

  auto* check = app.add_subcommand("check", "symbolic checks on vector fields")->require_subcommand(1);
  auto* integral = check->add_subcommand("integral", "first-integral residual DF.f");
  integral->add_option("--system", system, "catalog name or system file");
  integral->add_option("--F", F, "candidate first integral");
  integral->add_option("--claim", claim, "known claim id (F1, F2, F2_sei, F1_a0, F3)");
  integral->add_option("--params", params, "exact parameter values k=v,...");
  integral->callback([&] { action = [&] { return check_integral(system, F, claim, params); }; });

  auto* commuting = check->add_subcommand("commuting", "pairwise Lie brackets with scaling fields");
  commuting->add_option("--system", system, "catalog name or system file (default seir_ext)");
  commuting->add_option("--scale", scale, "variables with scaling fields (default X,Y,Z)");
  commuting->callback([&] { action = [&] { return check_commuting(system, scale); }; });

  auto* particular = check->add_subcommand("particular", "particular solutions on the S = 0 plane");
  particular->add_option("--case", case_str, "a_ne_b or a_eq_b");
  particular->callback([&] { action = [&] { return check_particular(parse_case(case_str)); }; });

  auto* ve = app.add_subcommand("ve", "variational equation")->require_subcommand(1);
  auto* build = ve->add_subcommand("build", "coefficient matrix of the VE");
  build->add_option("--case", case_str, "a_ne_b or a_eq_b");
  build->callback([&] { action = [&] { return ve_build(parse_case(case_str)); }; });
  auto* verify = ve->add_subcommand("verify", "verify fundamental columns");
  verify->add_option("--case", case_str, "a_ne_b or a_eq_b");
  verify->add_option("--column", column, "column 1..6 (default all)");
  verify->add_flag("--controls", controls, "also run single-coefficient perturbation controls");
  verify->callback([&] { action = [&] { return ve_verify(parse_case(case_str), column, controls); }; });
  auto* sigma = ve->add_subcommand("sigma", "sigma action on the fundamental set");
  sigma->add_option("--case", case_str, "a_ne_b or a_eq_b");
  sigma->callback([&] { action = [&] { return ve_sigma(parse_case(case_str)); }; });

  auto* risch = app.add_subcommand("risch", "restricted Risch decisions")->require_subcommand(1);
  auto* gamma = risch->add_subcommand("gamma", "elementarity of Gamma(alpha, x)");
  gamma->add_option("--alpha", alpha, "rational alpha")->required();
  gamma->callback([&] { action = [&] { return risch_gamma(alpha); }; });
  auto* ode = risch->add_subcommand("ode", "rational solution of q' + f q = g");
  ode->add_option("--f", f_text, "nonzero rational constant")->required();
  ode->add_option("--g", g_text, "P(x)/x^beta")->required();
  ode->callback([&] { action = [&] { return risch_ode(f_text, g_text); }; });
  auto* rec = risch->add_subcommand("recurrence", "incomplete-gamma recurrence by differentiation");
  rec->callback([&] { action = [&] { return risch_recurrence(); }; });

  auto* galois = app.add_subcommand("galois", "Galois group matrices")->require_subcommand(1);
  auto* power = galois->add_subcommand("power", "A^k against closed form and display");
  power->add_option("--case", case_str, "a_ne_b or a_eq_b");
  power->add_option("--k", k, "exponent (default 2)");
  power->add_option("--params", params, "rational overrides for c, alpha1..5, gamma*");
  power->callback([&] { action = [&] { return galois_power(parse_case(case_str), k, params); }; });
  auto* noncomm = galois->add_subcommand("noncommute", "non-commutativity certificate");
  noncomm->add_option("--case", case_str, "a_ne_b or a_eq_b");
  noncomm->callback([&] { action = [&] { return galois_noncommute(parse_case(case_str)); }; });

  auto* simc = app.add_subcommand("sim", "numerical integration")->require_subcommand(1);
  auto* runc = simc->add_subcommand("run", "integrate and report");
  runc->add_option("--system", sim.system, "catalog name or system file");
  runc->add_option("--params", sim.params, "parameter values k=v,...");
  runc->add_option("--init", sim.init, "initial values, positional or k=v");
  runc->add_option("--t0", sim.t0, "start time");
  runc->add_option("--t1", sim.t1, "end time");
  runc->add_option("--rtol", sim.tol.rtol, "relative tolerance");
  runc->add_option("--atol", sim.tol.atol, "absolute tolerance");
  runc->add_option("--max-steps", sim.tol.max_steps, "step budget");
  runc->add_option("--report", sim.report, "drift, trajectory or fundamental")
      ->check(CLI::IsMember({"drift", "trajectory", "fundamental"}));
  runc->add_option("--F", sim.F, "integral to monitor (repeatable; default: known integrals)");
  runc->add_option("--csv", sim.csv, "trajectory CSV file (default: embedded in the report)");
  runc->add_option("--case", sim.case_name, "a_ne_b or a_eq_b for --report fundamental");
  runc->callback([&] { action = [&] { return sim_run(sim); }; });

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, e2;
    int code = app.exit(e, o, e2);
    if (code == 0) {
      out << o.str();
      return 0;
    }
    err << e2.str();
    return 2;
  }

  const CLI::App* leaf = &app;
  while (!leaf->get_subcommands().empty()) leaf = leaf->get_subcommands().front();
  std::string command;
  for (const CLI::App* a = leaf; a != &app; a = a->get_parent()) command = a->get_name() + (command.empty() ? "" : " " + command);

  auto start = std::chrono::steady_clock::now();
  Report rep;
  try {
    rep = action();
  } catch (const IntegrationError& e) {
    err << command << ": resource limit: " << e.what() << "\n";
    return 3;
  } catch (const std::bad_alloc&) {
    err << command << ": out of memory\n";
    return 3;
  } catch (const std::exception& e) {
    // Parse errors, bad parameters and out-of-scope inputs.
    err << command << ": " << e.what() << "\n";
    return 2;
  }
  rep.command = command;
  rep.inputs = collect_inputs(leaf);
  rep.runtime_ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
  out << rep.to_json().dump(2) << "\n";
  err << command << ": " << verdict_name(rep.verdict);
  if (rep.residual && *rep.residual != "0") err << " (residual " << *rep.residual << ")";
  err << "\n";
  return verdict_exit_code(rep.verdict);
}

}  // namespace seirint
