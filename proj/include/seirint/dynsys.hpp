#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "seirint/linalg.hpp"
#include "seirint/params.hpp"
#include "seirint/parser.hpp"

namespace seirint {

using Matrix = std::vector<std::vector<RatFunc>>;

/// Autonomous vector field x' = f(x); components are rational in the state
/// variables and parameters.
struct VectorField {
  std::string name;
  std::vector<Symbol> vars;
  std::vector<RatFunc> comps;

  std::size_t dim() const { return vars.size(); }

  VectorField subst(const std::map<std::uint32_t, RatFunc>& m) const {
    VectorField out = *this;
    for (auto& c : out.comps) c = c.subst(m);
    return out;
  }
  VectorField with_params(const ParamAssignment& p) const { return subst(substitution(p)); }
};

inline bool is_zero(const VectorField& f) {
  for (const auto& c : f.comps)
    if (!c.is_zero()) return false;
  return true;
}

inline const std::vector<std::string>& catalog_names() {
  static const std::vector<std::string> names{"sir", "si", "sei", "seir", "seir_ext", "ei"};
  return names;
}

/// Named epidemic models. `ei` is the invariant plane S = 0 of `sei`.
inline VectorField catalog(const std::string& name, const ParamAssignment& params = {}) {
  auto v = [](const char* n) { return RatFunc::var(n); };
  RatFunc S = v("S"), E = v("E"), I = v("I"), X = v("X"), Y = v("Y"), Z = v("Z");
  RatFunc a = v("a"), b = v("b"), r = v("r");
  VectorField f;
  f.name = name;
  auto vars = [](std::initializer_list<const char*> ns) {
    std::vector<Symbol> out;
    for (auto n : ns) out.emplace_back(n);
    return out;
  };
  if (name == "sir") {
    f.vars = vars({"S", "I", "R"});
    f.comps = {-r * S * I, r * S * I - a * I, a * I};
  } else if (name == "si") {
    f.vars = vars({"S", "I"});
    f.comps = {-r * S * I, r * S * I - a * I};
  } else if (name == "sei") {
    f.vars = vars({"S", "E", "I"});
    f.comps = {-r * S * I, r * S * I - b * E, b * E - a * I};
  } else if (name == "seir") {
    f.vars = vars({"S", "E", "I", "R"});
    f.comps = {-r * S * I, r * S * I - b * E, b * E - a * I, a * I};
  } else if (name == "ei") {
    f.vars = vars({"E", "I"});
    f.comps = {-b * E, b * E - a * I};
  } else if (name == "seir_ext") {
    if (auto it = params.find("a"); it != params.end() && it->second.is_zero())
      throw std::domain_error("seir_ext requires a != 0");
    f.vars = vars({"S", "E", "I", "X", "Y", "Z"});
    f.comps = {-r * S * I,         r * S * I - b * E,           b * E - a * I,
               -r * I * X,         -(r * b / a) * E * Y,        -(r * r / a) * S * I * Z};
  } else {
    throw std::invalid_argument("unknown system '" + name + "'");
  }
  return params.empty() ? f : f.with_params(params);
}

/// A user system from `name = expr` lines; bound names are the state
/// variables (in file order), every other identifier is a parameter.
inline VectorField load_system(std::string_view text, std::string name = "user") {
  auto bindings = parse_bindings(text);
  if (bindings.empty()) throw std::invalid_argument("system file defines no equations");
  VectorField f;
  f.name = std::move(name);
  for (const auto& b : bindings) f.vars.emplace_back(b.name);
  for (const auto& b : bindings) {
    Tower t;
    auto e = parse_into(b.text, t);
    if (!t.empty()) throw ParseError("line " + std::to_string(b.line) + ": exp/log not allowed in a vector field", 0);
    f.comps.push_back(e.value());
  }
  return f;
}

inline Matrix jacobian(const VectorField& f) {
  Matrix j(f.dim(), std::vector<RatFunc>(f.dim()));
  for (std::size_t i = 0; i < f.dim(); ++i)
    for (std::size_t k = 0; k < f.dim(); ++k) j[i][k] = f.comps[i].partial(f.vars[k]);
  return j;
}

inline std::vector<RatFunc> mat_vec(const Matrix& m, const std::vector<RatFunc>& x) {
  std::vector<RatFunc> out(m.size());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t k = 0; k < x.size(); ++k)
      if (!m[i][k].is_zero() && !x[k].is_zero()) out[i] += m[i][k] * x[k];
  return out;
}

/// [f, g] = Dg f - Df g.
inline VectorField lie_bracket(const VectorField& f, const VectorField& g) {
  if (f.vars.size() != g.vars.size()) throw std::invalid_argument("lie_bracket: dimension mismatch");
  for (std::size_t i = 0; i < f.vars.size(); ++i)
    if (!(f.vars[i] == g.vars[i])) throw std::invalid_argument("lie_bracket: state variables differ");
  auto dgf = mat_vec(jacobian(g), f.comps), dfg = mat_vec(jacobian(f), g.comps);
  VectorField out{"[" + f.name + "," + g.name + "]", f.vars, {}};
  for (std::size_t i = 0; i < f.dim(); ++i) out.comps.push_back(dgf[i] - dfg[i]);
  return out;
}

/// Fields x_k * e_k used to turn exponential first integrals into rational
/// ones in the extended model.
inline VectorField scaling_field(const VectorField& f, const std::string& var) {
  VectorField out{"scale_" + var, f.vars, std::vector<RatFunc>(f.dim())};
  for (std::size_t i = 0; i < f.dim(); ++i)
    if (f.vars[i].name() == var) out.comps[i] = RatFunc::var(var);
  return out;
}

/// Tower whose base variables are the state variables of f.
inline Tower state_tower(const VectorField& f) {
  Tower t;
  for (Symbol s : f.vars) t = t.add_base(s.name());
  return t;
}

/// DF . f for F in a tower over the state variables of f.
inline RatFunc first_integral_residual(const TowerElem& F, const VectorField& f) {
  RatFunc sum;
  for (std::size_t i = 0; i < f.dim(); ++i) {
    if (f.comps[i].is_zero()) continue;
    RatFunc d = F.tower().partial(F.value(), f.vars[i]);
    if (!d.is_zero()) sum += d * f.comps[i];
  }
  return sum;
}

/// Parses F over the state variables of f (exp of state combinations becomes
/// a formal exponential generator) and returns its residual.
inline std::pair<TowerElem, RatFunc> first_integral_residual(std::string_view F, const VectorField& f,
                                                             const ParamAssignment& params = {}) {
  Tower t = state_tower(f);
  TowerElem e = parse_into(F, t);
  if (!params.empty()) {
    // Substitute before differentiating so that e.g. a = 0 never meets 1/a.
    e = TowerElem(t, e.value().subst(substitution(params)));
  }
  VectorField g = params.empty() ? f : f.with_params(params);
  return {e, first_integral_residual(e, g)};
}

/// A solution candidate: each state variable given as an element of a tower
/// over t.
struct ParticularSolution {
  Tower tower;
  std::map<std::string, RatFunc> values;
};

/// Component-wise d/dt(sol_i) - f_i(sol).
inline std::vector<RatFunc> verify_particular_solution(const ParticularSolution& sol, const VectorField& f) {
  std::map<std::uint32_t, RatFunc> m;
  for (Symbol s : f.vars) {
    auto it = sol.values.find(s.name());
    if (it == sol.values.end()) throw std::invalid_argument("solution lacks state variable '" + s.name() + "'");
    m[s.id()] = it->second;
  }
  std::vector<RatFunc> res;
  for (std::size_t i = 0; i < f.dim(); ++i)
    res.push_back(sol.tower.derive(m.at(f.vars[i].id())) - f.comps[i].subst(m));
  return res;
}

inline bool all_zero(const std::vector<RatFunc>& v) {
  for (const auto& x : v)
    if (!x.is_zero()) return false;
  return true;
}

/// Rank of the given fields at a point (state variables and parameters set
/// from `point`; unassigned symbols default to distinct small rationals).
inline std::size_t rank_at(const std::vector<VectorField>& fields, const std::map<std::string, Rat>& point) {
  std::vector<std::vector<Rat>> m;
  for (const auto& f : fields) {
    std::vector<Rat> row;
    for (const auto& c : f.comps) {
      std::map<std::uint32_t, RatFunc> sub;
      for (auto id : c.vars()) {
        Symbol s = Symbol::from_id(id);
        auto it = point.find(s.name());
        sub[id] = RatFunc(it != point.end() ? it->second : Rat(static_cast<long>(id % 17) + 3, 7));
      }
      RatFunc v = c.subst(sub);
      if (!v.is_constant()) throw std::logic_error("rank_at: point does not fix every symbol");
      row.push_back(v.constant_value());
    }
    m.push_back(std::move(row));
  }
  return rank(std::move(m));
}

// ---- particular solutions of the S = 0 plane ----------------------------

enum class Case { a_ne_b, a_eq_b };

inline const char* case_name(Case c) { return c == Case::a_ne_b ? "a_ne_b" : "a_eq_b"; }
inline Case parse_case(std::string_view s) {
  if (s == "a_ne_b") return Case::a_ne_b;
  if (s == "a_eq_b") return Case::a_eq_b;
  throw std::invalid_argument("unknown case '" + std::string(s) + "' (expected a_ne_b or a_eq_b)");
}

/// (E, I) solving E' = -bE, I' = bE - aI with free C1, C2, as a solution of
/// `sei` on S = 0. For a = b the tower carries w with w' = e^{-at} - a w,
/// i.e. w = t e^{-at}.
inline ParticularSolution plane_solution(Case c) {
  auto v = [](const char* n) { return RatFunc::var(n); };
  RatFunc a = v("a"), b = v("b"), C1 = v("C1"), C2 = v("C2");
  Tower t = Tower::over("t").extend("tha", GenKind::exponential, -a * v("t"));
  ParticularSolution s;
  if (c == Case::a_ne_b) {
    t = t.extend("thb", GenKind::exponential, -b * v("t"));
    RatFunc k = b * C1 / (a - b);
    s.values = {{"S", RatFunc(0)}, {"E", C1 * v("thb")}, {"I", k * v("thb") + (C2 - k) * v("tha")}};
  } else {
    s.values = {{"S", RatFunc(0)}, {"E", C1 * v("tha")}, {"I", a * C1 * v("t") * v("tha") + C2 * v("tha")}};
  }
  s.tower = t;
  return s;
}

/// The system the plane solution is checked against (b = a for a = b).
inline VectorField plane_system(Case c) {
  VectorField f = catalog("sei");
  return c == Case::a_ne_b ? f : f.subst({{Symbol("b").id(), RatFunc::var("a")}});
}

/// (S,E,I,X,Y,Z) = (0, 0, C2 e^{-at}, exp((r C2/a) e^{-at}), 1, 1).
inline ParticularSolution extended_solution() {
  auto v = [](const char* n) { return RatFunc::var(n); };
  Tower t = Tower::over("t")
                .extend("tha", GenKind::exponential, -v("a") * v("t"))
                .extend("thX", GenKind::exponential, v("r") * v("C2") / v("a") * v("tha"));
  ParticularSolution s;
  s.tower = t;
  s.values = {{"S", RatFunc(0)}, {"E", RatFunc(0)}, {"I", v("C2") * v("tha")},
              {"X", v("thX")},   {"Y", RatFunc(1)}, {"Z", RatFunc(1)}};
  return s;
}

// ---- first-integral claims ----------------------------------------------

struct IntegralClaim {
  std::string id;
  std::string system;
  std::string expr;
  ParamAssignment params;  // exact specialisation applied before checking
  std::map<std::string, std::string> relations;  // symbolic substitutions, e.g. b -> -a
};

inline const std::vector<IntegralClaim>& known_integrals() {
  static const std::vector<IntegralClaim> claims{
      {"F1", "seir", "S+E+I+R", {}, {}},
      {"F2", "seir", "S*exp(-(r/a)*(S+E+I))", {}, {}},
      {"F2_sei", "sei", "S*exp(-(r/a)*(S+E+I))", {}, {}},
      {"F1_a0", "sei", "S+E+I", {{"a", Rat(0)}}, {}},
      {"F3", "sei", "-(a/r)*S+1/2*a*I^2-(a+1)*(S+E+I)+1/2*(S+E+I)^2", {}, {{"b", "-a"}}},
  };
  return claims;
}

inline const IntegralClaim& find_claim(const std::string& id) {
  for (const auto& c : known_integrals())
    if (c.id == id) return c;
  throw std::invalid_argument("unknown claim '" + id + "'");
}

/// Residual of an integral claim with its parameter specialisations applied.
inline std::pair<TowerElem, RatFunc> check_claim(const IntegralClaim& c) {
  VectorField f = catalog(c.system, c.params);
  std::map<std::uint32_t, RatFunc> rel;
  for (const auto& [k, v] : c.relations) {
    Tower none;
    rel[Symbol(k).id()] = parse_into(v, none).value();
  }
  if (!rel.empty()) f = f.subst(rel);
  Tower t = state_tower(f);
  TowerElem e = parse_into(c.expr, t);
  std::map<std::uint32_t, RatFunc> all = rel;
  for (const auto& [k, v] : substitution(c.params)) all[k] = v;
  if (!all.empty()) e = TowerElem(t, e.value().subst(all));
  return {e, first_integral_residual(e, f)};
}

}  // namespace seirint
