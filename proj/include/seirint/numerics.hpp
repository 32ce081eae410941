#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "seirint/variational.hpp"

namespace seirint {

struct ToleranceConfig {
  double rtol = 1e-10;
  double atol = 1e-12;
  std::size_t max_steps = 1000000;

  void validate() const {
    if (!(rtol > 0) || !(atol > 0)) throw std::invalid_argument("rtol and atol must be positive");
    if (max_steps == 0) throw std::invalid_argument("max_steps must be positive");
  }
};

class IntegrationError : public std::runtime_error {
 public:
  enum class Kind { step_underflow, max_steps, non_finite };
  IntegrationError(Kind k, const std::string& what) : std::runtime_error(what), kind_(k) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Accepted steps of an integration, starting with the initial point.
struct Trajectory {
  std::vector<std::string> names;
  std::vector<double> t;
  std::vector<std::vector<double>> y;
  std::size_t steps = 0;
  std::size_t rejections = 0;

  const std::vector<double>& back() const { return y.back(); }

  /// Header of variable names, then one row per accepted step.
  std::string csv() const {
    std::string out = "t";
    for (const auto& n : names) out += "," + n;
    out += "\n";
    char buf[32];
    for (std::size_t i = 0; i < t.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", t[i]);
      out += buf;
      for (double v : y[i]) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out += ",";
        out += buf;
      }
      out += "\n";
    }
    return out;
  }
};

/// A rational function flattened to double coefficients and value slots.
class CompiledRatFunc {
 public:
  CompiledRatFunc() = default;
  CompiledRatFunc(const RatFunc& f, const std::function<std::size_t(Symbol)>& slot)
      : num_(compile(f.num(), slot)), den_(compile(f.den(), slot)), den_one_(f.den() == Poly(1)) {}

  double operator()(const double* v) const {
    double n = eval(num_, v);
    if (den_one_) return n;
    double d = eval(den_, v);
    if (d == 0.0) throw NumericError("pole in numeric evaluation");
    return n / d;
  }

 private:
  struct Term {
    double c;
    std::vector<std::pair<std::size_t, std::uint32_t>> f;
  };

  static std::vector<Term> compile(const Poly& p, const std::function<std::size_t(Symbol)>& slot) {
    std::vector<Term> out;
    for (const auto& t : p.terms()) {
      Term ct{t.c.to_double(), {}};
      for (const auto& [id, e] : t.m.e) ct.f.emplace_back(slot(Symbol::from_id(id)), e);
      out.push_back(std::move(ct));
    }
    return out;
  }

  static double eval(const std::vector<Term>& ts, const double* v) {
    double s = 0.0;
    for (const auto& t : ts) {
      double x = t.c;
      for (const auto& [i, e] : t.f) {
        double b = v[i];
        for (std::uint32_t k = 0; k < e; ++k) x *= b;
      }
      s += x;
    }
    return s;
  }

  std::vector<Term> num_, den_;
  bool den_one_ = true;
};

using Rhs = std::function<void(double t, const double* y, double* dy)>;

namespace numerics_detail {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

// PI controller.
constexpr double safety = 0.9, alpha = 0.17, beta = 0.04, fac_min = 0.2, fac_max = 10.0;

inline bool finite(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace numerics_detail

/// Dormand-Prince 5(4) with PI step control. The error of each accepted step
/// satisfies |e_i| <= atol + rtol * max(|y_i|, |y_i_new|) in every component.
inline Trajectory integrate_rhs(const Rhs& f, std::vector<double> y, double t0, double t1, const ToleranceConfig& tol,
                                std::vector<std::string> names = {}, bool record = true) {
  using namespace numerics_detail;
  tol.validate();
  if (!(t1 >= t0)) throw std::invalid_argument("integration needs t1 >= t0");
  const std::size_t n = y.size();
  Trajectory tr;
  tr.names = std::move(names);
  tr.t.push_back(t0);
  tr.y.push_back(y);
  if (t1 == t0) return tr;
  if (!finite(y)) throw IntegrationError(IntegrationError::Kind::non_finite, "non-finite initial state");

  std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n), ynew(n);
  auto scale = [&](double a, double b) { return tol.atol + tol.rtol * std::max(std::abs(a), std::abs(b)); };
  auto norm = [&](const std::vector<double>& v, const std::vector<double>& ref) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::abs(v[i]) / scale(ref[i], ref[i]));
    return m;
  };

  double t = t0;
  f(t, y.data(), k1.data());
  // Initial step from the usual two-evaluation estimate.
  double h;
  {
    double d0 = norm(y, y), d1 = norm(k1, y);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, t1 - t0);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h0 * k1[i];
    f(t + h0, tmp.data(), k2.data());
    for (std::size_t i = 0; i < n; ++i) k2[i] -= k1[i];
    double d2 = norm(k2, y) / h0;
    double h1 = std::max(d1, d2) <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / std::max(d1, d2), 1.0 / 5);
    h = std::min({100 * h0, h1, t1 - t0});
  }

  double err_prev = 1e-4;
  bool rejected = false;
  while (t < t1) {
    if (tr.steps + tr.rejections >= tol.max_steps)
      throw IntegrationError(IntegrationError::Kind::max_steps, "maximum number of steps exceeded at t=" + std::to_string(t));
    if (h < 16 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t)))
      throw IntegrationError(IntegrationError::Kind::step_underflow, "step size underflow at t=" + std::to_string(t));
    bool last = t + h >= t1;
    if (last) h = t1 - t;

    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * a21 * k1[i];
    f(t + c2 * h, tmp.data(), k2.data());
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    f(t + c3 * h, tmp.data(), k3.data());
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    f(t + c4 * h, tmp.data(), k4.data());
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    f(t + c5 * h, tmp.data(), k5.data());
    for (std::size_t i = 0; i < n; ++i)
      tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    f(t + h, tmp.data(), k6.data());
    for (std::size_t i = 0; i < n; ++i)
      ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    f(t + h, ynew.data(), k7.data());

    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      err = std::max(err, std::abs(e) / scale(y[i], ynew[i]));
    }
    if (!std::isfinite(err) || !finite(ynew)) {
      if (!finite(y)) throw IntegrationError(IntegrationError::Kind::non_finite, "non-finite state");
      err = 1e10;  // shrink and retry; underflow ends hopeless cases
    }

    if (err <= 1.0) {
      double fac = safety * std::pow(std::max(err, 1e-10), -alpha) * std::pow(err_prev, beta);
      fac = std::clamp(fac, fac_min, rejected ? 1.0 : fac_max);
      err_prev = std::max(err, 1e-4);
      t = last ? t1 : t + h;
      y.swap(ynew);
      k1.swap(k7);  // first-same-as-last
      ++tr.steps;
      if (record) {
        tr.t.push_back(t);
        tr.y.push_back(y);
      }
      h *= fac;
      rejected = false;
    } else {
      ++tr.rejections;
      h *= std::max(fac_min, safety * std::pow(err, -alpha));
      rejected = true;
    }
  }
  if (!record) {
    tr.t.push_back(t);
    tr.y.push_back(y);
  }
  if (!finite(y)) throw IntegrationError(IntegrationError::Kind::non_finite, "non-finite state");
  return tr;
}

/// Integrates a catalog vector field with numeric parameters.
inline Trajectory integrate(const VectorField& f, const NumericParams& params, const std::vector<double>& y0, double t0,
                            double t1, const ToleranceConfig& tol = {}) {
  if (y0.size() != f.dim()) throw std::invalid_argument("initial state has wrong dimension");
  const std::size_t n = f.dim();
  std::map<std::uint32_t, std::size_t> slots;
  for (std::size_t i = 0; i < n; ++i) slots[f.vars[i].id()] = i;
  std::vector<double> base(n);
  for (const auto& [k, v] : params) {
    slots.emplace(Symbol(k).id(), base.size());
    base.push_back(v);
  }
  auto slot = [&](Symbol s) {
    auto it = slots.find(s.id());
    if (it == slots.end()) throw NumericError("no numeric value for '" + s.name() + "'");
    return it->second;
  };
  std::vector<CompiledRatFunc> comps;
  for (const auto& c : f.comps) comps.emplace_back(c, slot);
  std::vector<std::string> names;
  for (Symbol s : f.vars) names.push_back(s.name());
  auto rhs = [comps, vals = base, n](double, const double* y, double* dy) mutable {
    std::copy(y, y + n, vals.begin());
    for (std::size_t i = 0; i < n; ++i) dy[i] = comps[i](vals.data());
  };
  return integrate_rhs(rhs, y0, t0, t1, tol, names);
}

/// Value of a tower element at a point where every base variable and
/// parameter has a numeric value. Primitive generators are rejected.
inline double eval_point(const Tower& tower, const RatFunc& f, const NumericParams& values) {
  std::function<double(Symbol)> value = [&](Symbol s) -> double {
    if (const TowerGen* g = tower.find(s)) {
      switch (g->kind) {
        case GenKind::base: break;
        case GenKind::exponential: return std::exp(g->arg.eval(value));
        case GenKind::logarithmic: return std::log(std::abs(g->arg.eval(value)));
        default: throw NumericError("cannot evaluate '" + s.name() + "' pointwise");
      }
    }
    auto it = values.find(s.name());
    if (it == values.end()) throw NumericError("no numeric value for '" + s.name() + "'");
    return it->second;
  };
  try {
    return f.eval(value);
  } catch (const std::domain_error&) {
    throw NumericError("evaluation pole");
  }
}

/// max_i |F(y(t_i)) - F(y(t_0))| with F parsed over the state variables.
inline double conservation_drift(std::string_view F, const Trajectory& traj, const VectorField& f,
                                 const NumericParams& params) {
  Tower t = state_tower(f);
  TowerElem e = parse_into(F, t);
  NumericParams vals = params;
  auto at = [&](std::size_t i) {
    for (std::size_t j = 0; j < traj.names.size(); ++j) vals[traj.names[j]] = traj.y[i][j];
    return eval_point(t, e.value(), vals);
  };
  double f0 = at(0), drift = 0.0;
  for (std::size_t i = 1; i < traj.t.size(); ++i) drift = std::max(drift, std::abs(at(i) - f0));
  return drift;
}

using NumericMatrix = Eigen::Matrix<double, 6, 6>;

/// Integrates Phi' = M(t) Phi from the identity at t = 0. M may use the
/// base, exponential and logarithmic generators of its tower.
inline NumericMatrix numeric_fundamental(const LinearSystem& sys, const NumericParams& params, double t1,
                                         const ToleranceConfig& tol = {}) {
  std::map<std::uint32_t, std::size_t> slots;
  std::vector<const TowerGen*> gens;
  for (const TowerGen* g : sys.tower.gens()) {
    if (g->kind == GenKind::primitive || g->kind == GenKind::linear) continue;
    slots[g->sym.id()] = gens.size();
    gens.push_back(g);
  }
  std::vector<double> base(gens.size());
  for (const auto& [k, v] : params) {
    if (slots.emplace(Symbol(k).id(), base.size()).second) base.push_back(v);
  }
  auto slot = [&](Symbol s) {
    auto it = slots.find(s.id());
    if (it == slots.end()) throw NumericError("no numeric value for '" + s.name() + "'");
    return it->second;
  };
  std::vector<CompiledRatFunc> args;
  for (const TowerGen* g : gens) args.emplace_back(g->kind == GenKind::base ? RatFunc(0) : g->arg, slot);
  std::array<std::array<CompiledRatFunc, 6>, 6> m;
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j) m[i][j] = CompiledRatFunc(sys.m[i][j], slot);
  std::vector<GenKind> kinds;
  for (const TowerGen* g : gens) kinds.push_back(g->kind);

  auto rhs = [=, vals = base](double t, const double* y, double* dy) mutable {
    for (std::size_t g = 0; g < kinds.size(); ++g) {
      switch (kinds[g]) {
        case GenKind::base: vals[g] = t; break;
        case GenKind::exponential: vals[g] = std::exp(args[g](vals.data())); break;
        case GenKind::logarithmic: vals[g] = std::log(std::abs(args[g](vals.data()))); break;
        default: break;
      }
    }
    double M[6][6];
    for (std::size_t i = 0; i < 6; ++i)
      for (std::size_t j = 0; j < 6; ++j) M[i][j] = m[i][j](vals.data());
    // y holds Phi column-major.
    for (std::size_t col = 0; col < 6; ++col)
      for (std::size_t i = 0; i < 6; ++i) {
        double s = 0.0;
        for (std::size_t k = 0; k < 6; ++k) s += M[i][k] * y[col * 6 + k];
        dy[col * 6 + i] = s;
      }
  };
  std::vector<double> y0(36, 0.0);
  for (std::size_t i = 0; i < 6; ++i) y0[i * 6 + i] = 1.0;
  auto tr = integrate_rhs(rhs, y0, 0.0, t1, tol, {}, false);
  NumericMatrix out;
  for (std::size_t col = 0; col < 6; ++col)
    for (std::size_t i = 0; i < 6; ++i) out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(col)) = tr.back()[col * 6 + i];
  return out;
}

/// The symbolic columns evaluated at t (nested integrals by quadrature).
/// Tighter than 1e-10 the inner quadrature noise stalls the outer error
/// estimate of three-deep nests.
inline NumericMatrix symbolic_fundamental(const FundamentalSet& fs, const NumericParams& params, double t,
                                          double prec = 1e-10) {
  TowerEvaluator ev(fs.tower, params, prec);
  NumericMatrix out;
  for (std::size_t j = 0; j < 6; ++j)
    for (std::size_t i = 0; i < 6; ++i)
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = ev.eval(fs.cols[j][i], t);
  return out;
}

/// exp of the integrated trace -2 r I(t) - a - b with I(t) = C2 e^{-at}.
inline double abel_determinant(Case which, const NumericParams& p, double t) {
  double a = p.at("a"), b = which == Case::a_ne_b ? p.at("b") : a, r = p.at("r"), C2 = p.at("C2");
  return std::exp(-(2 * r * C2 / a) * (1 - std::exp(-a * t)) - (a + b) * t);
}

struct FundamentalCheck {
  NumericMatrix numeric, symbolic;
  double max_abs_diff = 0.0;
  double det = 0.0, abel = 0.0;
  bool pass(double tol = 1e-8) const {
    return max_abs_diff < tol && std::abs(det - abel) < tol;
  }
};

/// Cross-validates the fundamental set against direct integration of the VE.
inline FundamentalCheck check_fundamental(Case which, const ParamAssignment& exact, double t1,
                                          const ToleranceConfig& tol = {}) {
  ParamAssignment ex = exact;
  if (which == Case::a_eq_b) ex.erase("b");
  else if (ex.count("b") && ex.at("b") == ex.at("a")) throw std::domain_error("case a_ne_b needs a != b");
  NumericParams p = numeric_params(ex);
  FundamentalCheck out;
  out.numeric = numeric_fundamental(build_ve(which), p, t1, tol);
  out.symbolic = symbolic_fundamental(fundamental_columns(which), p, t1);
  out.max_abs_diff = (out.numeric - out.symbolic).cwiseAbs().maxCoeff();
  out.det = out.numeric.determinant();
  out.abel = abel_determinant(which, p, t1);
  return out;
}

}  // namespace seirint
