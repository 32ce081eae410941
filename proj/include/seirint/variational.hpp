#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "seirint/dynsys.hpp"

namespace seirint {

/// Linear system xi' = M(t) xi over a tower in t.
struct LinearSystem {
  Case which = Case::a_ne_b;
  Tower tower;
  Matrix m;
};

using Column = std::vector<RatFunc>;

/// The six fundamental solutions of the variational equation along the
/// extended particular solution, in a tower that realises every nested
/// integral as a primitive generator.
struct FundamentalSet {
  Case which = Case::a_ne_b;
  Tower tower;
  std::array<Column, 6> cols;
  /// Exact values of the generators at t = 0 (uses X(0) = 1/C3).
  std::map<std::uint32_t, RatFunc> at_zero;
};

namespace detail {
inline RatFunc v(const char* n) { return RatFunc::var(n); }
}  // namespace detail

/// The extended field with b = a substituted for the a = b case.
inline VectorField extended_field(Case c) {
  VectorField f = catalog("seir_ext");
  return c == Case::a_ne_b ? f : f.subst({{Symbol("b").id(), RatFunc::var("a")}});
}

/// Tower for the fundamental set:
///   a != b: t, tha = e^{-at}, thb = e^{-bt}, thX = X(t), JE, JI, JX, JY, JZ
///   a == b: t, tha, thX, w = t e^{-at} (linear), JE, JI, JX, JY, JZ
inline Tower fundamental_tower(Case c) {
  using detail::v;
  Tower t = Tower::over("t").extend("tha", GenKind::exponential, -v("a") * v("t"));
  RatFunc rC = v("r") * v("C2") * v("C3");
  if (c == Case::a_ne_b) {
    t = t.extend("thb", GenKind::exponential, -v("b") * v("t"))
            .extend("thX", GenKind::exponential, v("r") * v("C2") / v("a") * v("tha"))
            .extend("JE", GenKind::primitive, v("tha") * v("thX") / v("thb"))
            .extend("JI", GenKind::primitive, rC * v("thb") * v("JE") / v("tha"))
            .extend("JX", GenKind::primitive, v("b") * v("tha") * v("JI"))
            .extend("JY", GenKind::primitive, rC * v("thb") * v("JE"))
            .extend("JZ", GenKind::primitive, v("tha") * v("thX"));
  } else {
    t = t.extend("thX", GenKind::exponential, v("r") * v("C2") / v("a") * v("tha"))
            .extend_linear("w", -v("a"), v("tha"))
            .extend("JE", GenKind::primitive, v("thX"))
            .extend("JI", GenKind::primitive, rC * v("JE"))
            .extend("JX", GenKind::primitive, v("a") * v("tha") * v("JI"))
            .extend("JY", GenKind::primitive, rC * v("tha") * v("JE"))
            .extend("JZ", GenKind::primitive, v("tha") * v("thX"));
  }
  return t;
}

/// Jacobian of f with the particular solution substituted.
inline LinearSystem build_ve(const VectorField& f, const ParticularSolution& sol, Case c, const Tower& tower) {
  std::map<std::uint32_t, RatFunc> m;
  for (Symbol s : f.vars) {
    auto it = sol.values.find(s.name());
    if (it == sol.values.end()) throw std::invalid_argument("solution lacks '" + s.name() + "'");
    m[s.id()] = it->second;
  }
  LinearSystem sys{c, tower, jacobian(f)};
  for (auto& row : sys.m)
    for (auto& e : row) {
      try {
        e = e.subst(m);
      } catch (const std::domain_error&) {
        throw std::domain_error("build_ve: substitution hits a pole");
      }
    }
  return sys;
}

/// The variational equation along (0, 0, C2 e^{-at}, X(t), 1, 1).
inline LinearSystem build_ve(Case c) {
  return build_ve(extended_field(c), extended_solution(), c, fundamental_tower(c));
}

inline FundamentalSet fundamental_columns(Case c) {
  using detail::v;
  FundamentalSet fs;
  fs.which = c;
  fs.tower = fundamental_tower(c);
  RatFunc a = v("a"), b = c == Case::a_ne_b ? v("b") : v("a"), r = v("r"), C2 = v("C2"), C3 = v("C3");
  RatFunc tha = v("tha"), thX = v("thX");
  RatFunc thb = c == Case::a_ne_b ? v("thb") : tha;
  RatFunc zero;
  fs.cols[0] = {C3 * thX,
                r * C2 * C3 * thb * v("JE"),
                b * tha * v("JI"),
                -r * thX * v("JX"),
                -(r * b / a) * v("JY"),
                -(r * r * C2 * C3 / a) * v("JZ")};
  if (c == Case::a_ne_b) {
    RatFunc g = b / (a - b);
    fs.cols[1] = {zero,
                  thb,
                  g * (thb - tha),
                  (r / a) * ((a / (a - b)) * thb - g * tha - 1) * thX,
                  (r / a) * (thb - 1),
                  zero};
  } else {
    RatFunc w = v("w");
    fs.cols[1] = {zero, tha, a * w, (r / a) * (a * w + tha - 1) * thX, (r / a) * (tha - 1), zero};
  }
  fs.cols[2] = {zero, zero, tha, (r / a) * (tha - 1) * thX, zero, zero};
  fs.cols[3] = {zero, zero, zero, C3 * thX, zero, zero};
  fs.cols[4] = {zero, zero, zero, zero, RatFunc(1), zero};
  fs.cols[5] = {zero, zero, zero, zero, zero, RatFunc(1)};

  for (const TowerGen* g : fs.tower.gens()) {
    const std::string& n = g->sym.name();
    RatFunc val;
    if (n == "tha" || n == "thb") val = RatFunc(1);
    else if (n == "thX") val = C3.inverse();
    fs.at_zero[g->sym.id()] = val;  // t, w and every primitive vanish at 0
  }
  return fs;
}

/// d/dt col - M col.
inline Column verify_ve_column(const Column& col, const LinearSystem& sys) {
  Column mc = mat_vec(sys.m, col), res;
  for (std::size_t i = 0; i < col.size(); ++i) res.push_back(sys.tower.derive(col[i]) - mc[i]);
  return res;
}

/// Column j evaluated exactly at t = 0.
inline Column initial_value(const FundamentalSet& fs, std::size_t j) {
  Column out;
  for (const auto& e : fs.cols[j]) out.push_back(e.subst(fs.at_zero));
  return out;
}

inline bool is_unit_vector(const Column& c, std::size_t j) {
  for (std::size_t i = 0; i < c.size(); ++i)
    if (!(c[i] == RatFunc(i == j ? 1 : 0))) return false;
  return true;
}

// ---- negative controls ----------------------------------------------------

struct Perturbation {
  std::size_t column = 0, row = 0, term = 0;
  Column perturbed;
  bool residual_nonzero = false;
  bool initial_value_wrong = false;
  bool detected() const { return residual_nonzero || initial_value_wrong; }
};

/// Doubles one numerator coefficient of one entry at a time. A perturbed
/// column can still solve the equation (e.g. a scalar multiple), so a
/// perturbation counts as detected if it breaks either the equation or the
/// identity initial condition.
inline std::vector<Perturbation> perturbation_controls(const FundamentalSet& fs, const LinearSystem& sys) {
  std::vector<Perturbation> out;
  for (std::size_t j = 0; j < 6; ++j)
    for (std::size_t i = 0; i < 6; ++i) {
      const RatFunc& e = fs.cols[j][i];
      for (std::size_t k = 0; k < e.num().size(); ++k) {
        std::vector<Poly::Term> ts = e.num().terms();
        ts[k].c = ts[k].c * Rat(2);
        Perturbation p{j, i, k, fs.cols[j], false, false};
        p.perturbed[i] = RatFunc::normalize(Poly::from_terms(ts), e.den());
        p.residual_nonzero = !all_zero(verify_ve_column(p.perturbed, sys));
        Column iv;
        for (const auto& x : p.perturbed) iv.push_back(x.subst(fs.at_zero));
        p.initial_value_wrong = !is_unit_vector(iv, j);
        out.push_back(std::move(p));
      }
    }
  return out;
}

// ---- sigma actions --------------------------------------------------------

/// gamma = b/(a-b), gamma1 = (gamma+1) r/(a C3), gamma2 = r/a for a != b;
/// gamma1 = r/(a C3) for a == b (after rescaling a c -> c).
inline std::map<std::string, RatFunc> gamma_constants(Case c) {
  using detail::v;
  if (c == Case::a_ne_b) {
    RatFunc g = v("b") / (v("a") - v("b"));
    return {{"gamma", g}, {"gamma1", (g + 1) * v("r") / (v("a") * v("C3"))}, {"gamma2", v("r") / v("a")}};
  }
  return {{"gamma1", v("r") / (v("a") * v("C3"))}};
}

struct SigmaActionReport {
  Case which = Case::a_ne_b;
  std::vector<std::string> coefficient_names;  // coefficients of Phi_1..Phi_6 in sigma(Phi_2)
  std::vector<RatFunc> coefficients;
  Column residual;                              // sigma(Phi_2) - sum coeff_j Phi_j
  std::vector<Column> fixed_residuals;          // sigma(Phi_j) - Phi_j, j = 3..6
  bool pass() const {
    if (!all_zero(residual)) return false;
    for (const auto& r : fixed_residuals)
      if (!all_zero(r)) return false;
    return true;
  }
};

/// The automorphism acting on Phi_2: e^{-bt} -> c e^{-bt} (a != b) or
/// t e^{-at} -> (t + c) e^{-at} (a == b). Its domain is the part of the
/// tower below the primitives.
inline SigmaSpec sigma_for(Case which, const RatFunc& c) {
  using detail::v;
  Tower t = Tower::over("t").extend("tha", GenKind::exponential, -v("a") * v("t"));
  if (which == Case::a_ne_b) {
    t = t.extend("thb", GenKind::exponential, -v("b") * v("t"))
            .extend("thX", GenKind::exponential, v("r") * v("C2") / v("a") * v("tha"));
    return SigmaSpec(t, {{"thb", c * v("thb")}});
  }
  t = t.extend("thX", GenKind::exponential, v("r") * v("C2") / v("a") * v("tha"))
          .extend_linear("w", -v("a"), v("tha"));
  return SigmaSpec(t, {{"w", v("w") + c * v("tha")}});
}

inline SigmaActionReport sigma_action_check(Case which, const RatFunc& c = RatFunc::var("c")) {
  using detail::v;
  FundamentalSet fs = fundamental_columns(which);
  SigmaSpec sigma = sigma_for(which, c);
  SigmaActionReport rep;
  rep.which = which;
  RatFunc a = v("a"), r = v("r"), C3 = v("C3");
  if (which == Case::a_ne_b) {
    RatFunc g = v("b") / (a - v("b"));
    rep.coefficient_names = {"0", "c", "gamma*(c-1)", "(gamma+1)*(c-1)*r/(a*C3)", "(c-1)*r/a", "0"};
    rep.coefficients = {RatFunc(0), c, g * (c - 1), (g + 1) * (c - 1) * r / (a * C3), (c - 1) * r / a, RatFunc(0)};
  } else {
    rep.coefficient_names = {"0", "1", "a*c", "r*c/C3", "0", "0"};
    rep.coefficients = {RatFunc(0), RatFunc(1), a * c, r * c / C3, RatFunc(0), RatFunc(0)};
  }
  for (std::size_t i = 0; i < 6; ++i) {
    RatFunc lhs = sigma.apply(TowerElem(fs.tower, fs.cols[1][i])).value();
    RatFunc rhs;
    for (std::size_t j = 0; j < 6; ++j)
      if (!rep.coefficients[j].is_zero()) rhs += rep.coefficients[j] * fs.cols[j][i];
    rep.residual.push_back(lhs - rhs);
  }
  for (std::size_t j = 2; j < 6; ++j) {
    Column res;
    for (const auto& e : fs.cols[j]) res.push_back(sigma.apply(TowerElem(fs.tower, e)).value() - e);
    rep.fixed_residuals.push_back(std::move(res));
  }
  return rep;
}

}  // namespace seirint
