#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "seirint/params.hpp"
#include "seirint/ratfunc.hpp"

namespace seirint {

class TowerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Kind of a tower generator.
///
/// - base:        an independent variable (derivative 1 w.r.t. itself)
/// - exponential: theta' = u' * theta
/// - logarithmic: theta' = u' / u
/// - primitive:   theta' = u, an unevaluated integral from `lower`
/// - linear:      theta' = q * theta + p with q a constant, theta(lower) = initial
enum class GenKind { base, exponential, logarithmic, primitive, linear };

inline const char* kind_name(GenKind k) {
  switch (k) {
    case GenKind::base: return "base";
    case GenKind::exponential: return "exponential";
    case GenKind::logarithmic: return "logarithmic";
    case GenKind::primitive: return "primitive";
    case GenKind::linear: return "linear";
  }
  return "?";
}

struct TowerGen {
  Symbol sym;
  GenKind kind = GenKind::base;
  RatFunc arg;    // u for exponential/logarithmic/primitive, p for linear
  RatFunc coeff;  // q for linear
  double lower = 0.0;
  double initial = 0.0;
  /// Derivative with respect to each base generator (missing entry = 0).
  std::map<std::uint32_t, RatFunc> partials;
};

/// Immutable differential-field tower. Extending returns a new tower that
/// shares every lower level with the original, so elements of a tower remain
/// valid elements of all its extensions.
class Tower {
 public:
  Tower() = default;

  static Tower over(std::string_view base) { return Tower().add_base(base); }

  Tower add_base(std::string_view name) const {
    TowerGen g;
    g.sym = Symbol(name);
    g.kind = GenKind::base;
    g.partials[g.sym.id()] = RatFunc(1);
    return push(std::move(g));
  }

  /// Adds an exponential, logarithmic or primitive generator with argument `arg`.
  Tower extend(std::string_view name, GenKind kind, const RatFunc& arg, double lower = 0.0) const {
    if (kind == GenKind::base) return add_base(name);
    if (kind == GenKind::linear)
      throw TowerError("extend: use extend_linear for linear generators");
    check_over_tower(arg, name, "argument");
    TowerGen g;
    g.sym = Symbol(name);
    g.kind = kind;
    g.arg = arg;
    g.lower = lower;
    RatFunc theta = RatFunc::var(g.sym);
    switch (kind) {
      case GenKind::exponential:
        for (auto b : bases()) {
          auto d = partial(arg, b) * theta;
          if (!d.is_zero()) g.partials[b.id()] = d;
        }
        break;
      case GenKind::logarithmic:
        if (arg.is_zero()) throw TowerError("extend: logarithm of zero");
        for (auto b : bases()) {
          auto d = partial(arg, b) / arg;
          if (!d.is_zero()) g.partials[b.id()] = d;
        }
        break;
      case GenKind::primitive:
        g.partials[single_base().id()] = arg;
        break;
      default:
        break;
    }
    return push(std::move(g));
  }

  /// Adds theta with theta' = coeff*theta + inhom and theta(lower) = initial.
  Tower extend_linear(std::string_view name, const RatFunc& coeff, const RatFunc& inhom,
                      double initial = 0.0, double lower = 0.0) const {
    check_over_tower(inhom, name, "inhomogeneous term");
    for (auto v : coeff.vars())
      if (find(Symbol::from_id(v)))
        throw TowerError("extend_linear: coefficient must be a constant");
    TowerGen g;
    g.sym = Symbol(name);
    g.kind = GenKind::linear;
    g.arg = inhom;
    g.coeff = coeff;
    g.lower = lower;
    g.initial = initial;
    g.partials[single_base().id()] = coeff * RatFunc::var(g.sym) + inhom;
    return push(std::move(g));
  }

  std::size_t size() const { return top_ ? top_->depth : 0; }
  bool empty() const { return !top_; }

  const TowerGen* find(Symbol s) const {
    if (!top_) return nullptr;
    auto it = top_->index->find(s.id());
    return it == top_->index->end() ? nullptr : it->second;
  }
  bool is_generator(Symbol s) const { return find(s) != nullptr; }

  /// Generators from the bottom of the tower upward.
  std::vector<const TowerGen*> gens() const {
    std::vector<const TowerGen*> out;
    for (auto n = top_.get(); n; n = n->parent.get()) out.push_back(&n->gen);
    std::reverse(out.begin(), out.end());
    return out;
  }

  std::vector<Symbol> bases() const {
    std::vector<Symbol> out;
    for (auto* g : gens())
      if (g->kind == GenKind::base) out.push_back(g->sym);
    return out;
  }

  Symbol single_base() const {
    auto bs = bases();
    if (bs.size() != 1)
      throw TowerError("tower needs exactly one base variable for this operation (has " +
                       std::to_string(bs.size()) + ")");
    return bs[0];
  }

  /// True if this tower is a (non-strict) lower part of `other`.
  bool is_prefix_of(const Tower& other) const {
    if (!top_) return true;
    auto n = other.top_.get();
    while (n && n->depth > top_->depth) n = n->parent.get();
    return n == top_.get();
  }

  friend bool operator==(const Tower& a, const Tower& b) { return a.top_ == b.top_; }

  /// Partial derivative with respect to the base generator `base`.
  RatFunc partial(const RatFunc& f, Symbol base) const {
    auto image = [&](std::uint32_t v) -> const RatFunc* {
      const TowerGen* g = find(Symbol::from_id(v));
      if (!g) return nullptr;
      auto it = g->partials.find(base.id());
      return it == g->partials.end() ? nullptr : &it->second;
    };
    auto dpoly = [&](const Poly& p) {
      RatFunc sum;
      for (auto v : p.vars())
        if (const RatFunc* img = image(v)) sum += RatFunc(p.partial(Symbol::from_id(v))) * *img;
      return sum;
    };
    RatFunc dn = dpoly(f.num());
    if (f.is_polynomial()) return dn;
    RatFunc dd = dpoly(f.den());
    if (dd.is_zero()) return dn / RatFunc(f.den());
    return (dn - f * dd) / RatFunc(f.den());
  }

  /// The derivation of a single-base tower (d/dt or d/dx).
  RatFunc derive(const RatFunc& f) const { return partial(f, single_base()); }

  /// Generator symbols in f that belong to this tower.
  std::vector<Symbol> generators_in(const RatFunc& f) const {
    std::vector<Symbol> out;
    for (auto v : f.vars())
      if (find(Symbol::from_id(v))) out.push_back(Symbol::from_id(v));
    return out;
  }

  std::string describe(const TowerGen& g) const;

  /// Printer mapping exponential/logarithmic generators back to exp(...)/log(...).
  SymbolNamer namer() const {
    Tower self = *this;
    return [self](Symbol s) -> std::string {
      const TowerGen* g = self.find(s);
      if (!g) return s.name();
      if (g->kind == GenKind::exponential) return "exp(" + g->arg.to_string(self.namer()) + ")";
      if (g->kind == GenKind::logarithmic) return "log(" + g->arg.to_string(self.namer()) + ")";
      return s.name();
    };
  }

 private:
  struct Node {
    std::shared_ptr<const Node> parent;
    TowerGen gen;
    std::size_t depth = 0;
    std::shared_ptr<const std::map<std::uint32_t, const TowerGen*>> index;
  };

  Tower push(TowerGen g) const {
    if (find(g.sym)) throw TowerError("duplicate generator name '" + g.sym.name() + "'");
    auto node = std::make_shared<Node>();
    node->parent = top_;
    node->depth = size() + 1;
    node->gen = std::move(g);
    auto idx = top_ ? std::make_shared<std::map<std::uint32_t, const TowerGen*>>(*top_->index)
                    : std::make_shared<std::map<std::uint32_t, const TowerGen*>>();
    (*idx)[node->gen.sym.id()] = &node->gen;
    node->index = std::move(idx);
    Tower t;
    t.top_ = std::move(node);
    return t;
  }

  // Symbols that are not generators are constants, so the only possible
  // dependency violation is an argument that mentions the generator being added.
  static void check_over_tower(const RatFunc& f, std::string_view name, const char* what) {
    if (f.contains(Symbol(name)))
      throw TowerError(std::string("dependency violation: ") + what + " of '" + std::string(name) +
                       "' refers to the generator itself");
  }

  std::shared_ptr<const Node> top_;
};

/// An element of a tower: a canonical rational function in the generators with
/// coefficients in the parametric constant field.
class TowerElem {
 public:
  TowerElem() = default;
  TowerElem(Tower t, RatFunc v) : tower_(std::move(t)), value_(std::move(v)) {}

  static TowerElem gen(const Tower& t, std::string_view name) {
    Symbol s(name);
    if (!t.find(s)) throw TowerError("no generator named '" + std::string(name) + "'");
    return {t, RatFunc::var(s)};
  }
  static TowerElem constant(const Tower& t, const RatFunc& c) { return {t, c}; }

  const Tower& tower() const { return tower_; }
  const RatFunc& value() const { return value_; }

  bool is_zero() const { return value_.is_zero(); }

  TowerElem derive() const { return {tower_, tower_.derive(value_)}; }
  TowerElem partial(Symbol base) const { return {tower_, tower_.partial(value_, base)}; }

  /// True iff the derivation vanishes. Sound because generators are
  /// algebraically independent by construction.
  bool is_constant() const { return tower_.derive(value_).is_zero(); }

  std::string str() const { return value_.to_string(tower_.namer()); }

  TowerElem operator-() const { return {tower_, -value_}; }
  friend TowerElem operator+(const TowerElem& a, const TowerElem& b) {
    return {common(a, b), a.value_ + b.value_};
  }
  friend TowerElem operator-(const TowerElem& a, const TowerElem& b) {
    return {common(a, b), a.value_ - b.value_};
  }
  friend TowerElem operator*(const TowerElem& a, const TowerElem& b) {
    return {common(a, b), a.value_ * b.value_};
  }
  friend TowerElem operator/(const TowerElem& a, const TowerElem& b) {
    return {common(a, b), a.value_ / b.value_};
  }
  friend TowerElem operator*(const RatFunc& c, const TowerElem& b) { return {b.tower_, c * b.value_}; }
  TowerElem pow(long n) const { return {tower_, value_.pow(n)}; }

  friend bool operator==(const TowerElem& a, const TowerElem& b) {
    (void)common(a, b);
    return a.value_ == b.value_;
  }

  static Tower common(const TowerElem& a, const TowerElem& b) {
    if (a.tower_.is_prefix_of(b.tower_)) return b.tower_;
    if (b.tower_.is_prefix_of(a.tower_)) return a.tower_;
    throw TowerError("elements belong to unrelated towers");
  }

 private:
  Tower tower_;
  RatFunc value_;
};

/// Differential endomorphism given by images of some generators of a domain
/// tower; unmapped generators are fixed. Construction checks that the map
/// commutes with the derivation on every generator of the domain.
class SigmaSpec {
 public:
  SigmaSpec(Tower domain, std::map<std::string, RatFunc> images) : domain_(std::move(domain)) {
    for (auto& [name, img] : images) {
      Symbol s(name);
      if (!domain_.find(s)) throw TowerError("sigma: '" + name + "' is not a generator of the domain");
      images_[s.id()] = img;
    }
    for (const TowerGen* g : domain_.gens()) {
      if (g->kind == GenKind::base && !images_.count(g->sym.id())) continue;
      RatFunc lhs = domain_.derive(apply(RatFunc::var(g->sym)));
      RatFunc rhs = apply(domain_.derive(RatFunc::var(g->sym)));
      if (!(lhs == rhs))
        throw TowerError("sigma does not commute with the derivation on generator '" +
                         g->sym.name() + "'");
    }
  }

  const Tower& domain() const { return domain_; }
  const std::map<std::uint32_t, RatFunc>& images() const { return images_; }

  RatFunc apply(const RatFunc& f) const {
    try {
      return f.subst(images_);
    } catch (const std::domain_error&) {
      throw TowerError("sigma: image denominator vanishes identically");
    }
  }

  TowerElem apply(const TowerElem& e) const {
    for (Symbol s : e.tower().generators_in(e.value()))
      if (!domain_.find(s))
        throw TowerError("sigma: element uses generator '" + s.name() + "' outside the domain");
    return {e.tower(), apply(e.value())};
  }

 private:
  Tower domain_;
  std::map<std::uint32_t, RatFunc> images_;
};

class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numerical evaluation of tower elements over a single real base variable.
/// Primitive and linear generators are evaluated by adaptive Gauss-Kronrod
/// quadrature; each nesting level gets half the error budget of its parent.
class TowerEvaluator {
 public:
  TowerEvaluator(Tower tower, NumericParams params, double prec = 1e-12)
      : tower_(std::move(tower)), params_(std::move(params)), prec_(prec) {}

  double eval(const RatFunc& f, double t) const { return eval_at(f, t, prec_); }
  double eval(const TowerElem& e, double t) const { return eval_at(e.value(), t, prec_); }

  double generator(const TowerGen& g, double t, double tol) const {
    switch (g.kind) {
      case GenKind::base: return t;
      case GenKind::exponential: return std::exp(eval_at(g.arg, t, tol));
      case GenKind::logarithmic: {
        double u = eval_at(g.arg, t, tol);
        if (u == 0.0) throw NumericError("logarithm of zero at t=" + std::to_string(t));
        return std::log(std::abs(u));
      }
      case GenKind::primitive: return integrate([&](double s) { return eval_at(g.arg, s, tol / 2); },
                                                g.lower, t, tol);
      case GenKind::linear: {
        double q = eval_at(g.coeff, t, tol);
        double acc = integrate(
            [&](double s) { return eval_at(g.arg, s, tol / 2) * std::exp(-q * (s - g.lower)); },
            g.lower, t, tol);
        return std::exp(q * (t - g.lower)) * (g.initial + acc);
      }
    }
    return 0.0;
  }

 private:
  double eval_at(const RatFunc& f, double t, double tol) const {
    auto value = [&](Symbol s) -> double {
      if (const TowerGen* g = tower_.find(s)) return generator(*g, t, tol);
      auto it = params_.find(s.name());
      if (it == params_.end()) throw NumericError("no numeric value for parameter '" + s.name() + "'");
      return it->second;
    };
    try {
      return f.eval(value);
    } catch (const std::domain_error&) {
      throw NumericError("pole at evaluation point t=" + std::to_string(t));
    }
  }

  template <class F>
  static double integrate(F&& f, double a, double b, double tol) {
    if (a == b) return 0.0;
    double err = 0.0;
    double v = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        f, a, b, 15, std::max(tol, 1e-15), &err);
    if (!std::isfinite(v)) throw NumericError("quadrature produced a non-finite value");
    return v;
  }

  Tower tower_;
  NumericParams params_;
  double prec_;
};

inline std::string Tower::describe(const TowerGen& g) const {
  auto n = namer();
  switch (g.kind) {
    case GenKind::base: return g.sym.name() + " (base)";
    case GenKind::exponential: return g.sym.name() + " = exp(" + g.arg.to_string(n) + ")";
    case GenKind::logarithmic: return g.sym.name() + " = log(" + g.arg.to_string(n) + ")";
    case GenKind::primitive:
      return g.sym.name() + " = integral of " + g.arg.to_string(n) + " from " + std::to_string(g.lower);
    case GenKind::linear:
      return g.sym.name() + "' = (" + g.coeff.to_string(n) + ")*" + g.sym.name() + " + " +
             g.arg.to_string(n);
  }
  return g.sym.name();
}

}  // namespace seirint
