#pragma once

#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>

#include "seirint/poly.hpp"

namespace seirint {

/// Canonical rational function num/den over Q in any set of symbols.
///
/// Invariants: den != 0, gcd(num, den) = 1, the graded-lex leading
/// coefficient of den is 1. Equal values therefore have identical
/// representations and operator== is structural.
class RatFunc {
 public:
  RatFunc() : den_(1) {}
  RatFunc(const Poly& p) : num_(p), den_(1) {}  // NOLINT(google-explicit-constructor)
  RatFunc(const Rat& c) : num_(c), den_(1) {}   // NOLINT(google-explicit-constructor)
  RatFunc(long c) : num_(c), den_(1) {}         // NOLINT(google-explicit-constructor)

  static RatFunc var(Symbol s) { return RatFunc(Poly::var(s)); }
  static RatFunc var(std::string_view name) { return var(Symbol(name)); }

  static RatFunc normalize(Poly num, Poly den) {
    if (den.is_zero()) throw std::domain_error("RatFunc: zero denominator");
    RatFunc r;
    if (num.is_zero()) return r;
    if (!den.is_constant()) {
      Poly g = gcd(num, den);
      if (!g.is_constant()) {
        num = *num.exact_div(g);
        den = *den.exact_div(g);
      }
    }
    Rat lc = den.lc();
    if (!lc.is_one()) {
      Rat inv = lc.inverse();
      num = num.scaled(inv);
      den = den.scaled(inv);
    }
    r.num_ = std::move(num);
    r.den_ = std::move(den);
    return r;
  }

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }

  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const { return den_.is_constant() && num_ == Poly(1); }
  bool is_polynomial() const { return den_.is_constant(); }
  bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
  Rat constant_value() const { return num_.constant_value(); }
  bool contains(Symbol s) const { return num_.contains(s) || den_.contains(s); }
  std::vector<std::uint32_t> vars() const {
    auto a = num_.vars(), b = den_.vars();
    a.insert(a.end(), b.begin(), b.end());
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
    return a;
  }

  RatFunc operator-() const {
    RatFunc r = *this;
    r.num_ = -r.num_;
    return r;
  }

  friend RatFunc operator+(const RatFunc& a, const RatFunc& b) { return add(a, b, false); }
  friend RatFunc operator-(const RatFunc& a, const RatFunc& b) { return add(a, b, true); }

  friend RatFunc operator*(const RatFunc& a, const RatFunc& b) {
    if (a.is_zero() || b.is_zero()) return {};
    if (a.is_polynomial() && b.is_polynomial()) {
      RatFunc r;
      r.num_ = a.num_ * b.num_;
      return r;
    }
    // Cross-cancel; the product of two canonical forms is then canonical up to
    // the monic scaling of the denominator.
    Poly g1 = gcd(a.num_, b.den_), g2 = gcd(b.num_, a.den_);
    Poly an = g1.is_constant() ? a.num_ : *a.num_.exact_div(g1);
    Poly bd = g1.is_constant() ? b.den_ : *b.den_.exact_div(g1);
    Poly bn = g2.is_constant() ? b.num_ : *b.num_.exact_div(g2);
    Poly ad = g2.is_constant() ? a.den_ : *a.den_.exact_div(g2);
    RatFunc r;
    r.num_ = an * bn;
    r.den_ = ad * bd;
    Rat lc = r.den_.lc();
    if (!lc.is_one()) {
      r.num_ = r.num_.scaled(lc.inverse());
      r.den_ = r.den_.scaled(lc.inverse());
    }
    return r;
  }

  RatFunc inverse() const {
    if (is_zero()) throw std::domain_error("RatFunc: inverse of zero");
    RatFunc r;
    r.num_ = den_;
    r.den_ = num_;
    Rat lc = r.den_.lc();
    if (!lc.is_one()) {
      r.num_ = r.num_.scaled(lc.inverse());
      r.den_ = r.den_.scaled(lc.inverse());
    }
    return r;
  }

  friend RatFunc operator/(const RatFunc& a, const RatFunc& b) { return a * b.inverse(); }

  RatFunc& operator+=(const RatFunc& o) { return *this = *this + o; }
  RatFunc& operator-=(const RatFunc& o) { return *this = *this - o; }
  RatFunc& operator*=(const RatFunc& o) { return *this = *this * o; }
  RatFunc& operator/=(const RatFunc& o) { return *this = *this / o; }

  RatFunc pow(long n) const {
    if (n < 0) return inverse().pow(-n);
    RatFunc r;
    r.num_ = num_.pow(static_cast<unsigned>(n));
    r.den_ = den_.pow(static_cast<unsigned>(n));
    return r;
  }

  /// Partial derivative with respect to a symbol.
  RatFunc partial(Symbol s) const {
    Poly dn = num_.partial(s);
    if (den_.is_constant()) return RatFunc::normalize(dn, den_);
    Poly dd = den_.partial(s);
    return normalize(dn * den_ - num_ * dd, den_ * den_);
  }

  /// Substitutes symbols by rational functions (simultaneously).
  RatFunc subst(const std::map<std::uint32_t, RatFunc>& images) const {
    if (images.empty()) return *this;
    // Bring everything over the common denominator prod(den_v^maxdeg_v) so the
    // whole substitution costs one gcd.
    auto apply = [&](const Poly& p, std::map<std::uint32_t, std::uint32_t>& maxdeg) {
      for (const auto& t : p.terms())
        for (const auto& [v, k] : t.m.e)
          if (images.count(v)) maxdeg[v] = std::max(maxdeg[v], k);
    };
    std::map<std::uint32_t, std::uint32_t> dn, dd;
    apply(num_, dn);
    apply(den_, dd);
    auto image_poly = [&](const Poly& p, const std::map<std::uint32_t, std::uint32_t>& maxdeg,
                          Poly& denom) {
      denom = Poly(1);
      for (const auto& [v, k] : maxdeg) denom *= images.at(v).den().pow(k);
      std::map<std::pair<std::uint32_t, std::uint32_t>, Poly> cache;
      auto power = [&](std::uint32_t v, std::uint32_t k, bool of_num) -> const Poly& {
        auto key = std::make_pair(v, (k << 1U) | (of_num ? 1U : 0U));
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
        const RatFunc& img = images.at(v);
        return cache.emplace(key, (of_num ? img.num() : img.den()).pow(k)).first->second;
      };
      Poly sum;
      for (const auto& t : p.terms()) {
        Monomial rest;
        Poly prod(t.c);
        for (const auto& [v, k] : t.m.e)
          if (!maxdeg.count(v)) rest = rest * Monomial::of(Symbol::from_id(v), k);
        for (const auto& [v, top] : maxdeg) {
          std::uint32_t k = t.m.exponent(v);
          if (k > 0) prod = prod * power(v, k, true);
          if (top > k) prod = prod * power(v, top - k, false);
        }
        sum += prod.mul_term({rest, Rat(1)});
      }
      return sum;
    };
    Poly denom_n, denom_d;
    Poly n = image_poly(num_, dn, denom_n);
    Poly d = image_poly(den_, dd, denom_d);
    return normalize(n * denom_d, d * denom_n);
  }

  RatFunc subst(Symbol s, const RatFunc& image) const { return subst({{s.id(), image}}); }

  double eval(const std::function<double(Symbol)>& value) const {
    double d = den_.eval(value);
    if (d == 0.0) throw std::domain_error("RatFunc: pole at evaluation point");
    return num_.eval(value) / d;
  }

  /// Text in the expression grammar: "num", "num/den", "(num)/(den)".
  std::string to_string(const SymbolNamer& namer = default_name) const {
    std::string n = num_.to_string(namer);
    if (den_.is_constant()) return n;
    bool n_atomic = num_.size() == 1;
    bool d_atomic = den_.size() == 1 && den_.terms()[0].c.is_one() && den_.terms()[0].m.e.size() == 1;
    std::string d = den_.to_string(namer);
    return (n_atomic ? n : "(" + n + ")") + "/" + (d_atomic ? d : "(" + d + ")");
  }

  friend bool operator==(const RatFunc& a, const RatFunc& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

 private:
  static RatFunc add(const RatFunc& a, const RatFunc& b, bool subtract) {
    if (a.den_ == b.den_) {
      Poly n = subtract ? a.num_ - b.num_ : a.num_ + b.num_;
      if (a.den_.is_constant()) {
        RatFunc r;
        r.num_ = std::move(n);
        return r;
      }
      return normalize(std::move(n), a.den_);
    }
    if (b.den_.is_constant()) {
      Poly n = subtract ? a.num_ - b.num_ * a.den_ : a.num_ + b.num_ * a.den_;
      if (n.is_zero()) return {};
      RatFunc r;
      r.num_ = std::move(n);
      r.den_ = a.den_;  // gcd(a.num + k*den, den) = gcd(a.num, den) = 1
      return r;
    }
    if (a.den_.is_constant()) {
      Poly n = subtract ? a.num_ * b.den_ - b.num_ : a.num_ * b.den_ + b.num_;
      if (n.is_zero()) return {};
      RatFunc r;
      r.num_ = std::move(n);
      r.den_ = b.den_;
      return r;
    }
    Poly g = gcd(a.den_, b.den_);
    Poly ad = *a.den_.exact_div(g), bd = *b.den_.exact_div(g);
    Poly n = subtract ? a.num_ * bd - b.num_ * ad : a.num_ * bd + b.num_ * ad;
    return normalize(std::move(n), a.den_ * bd);
  }

  Poly num_;
  Poly den_;
};

}  // namespace seirint
