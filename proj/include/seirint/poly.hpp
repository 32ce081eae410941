#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "seirint/rat.hpp"
#include "seirint/symbol.hpp"

namespace seirint {

/// Power product of symbols, stored sparsely as (symbol id, exponent) pairs
/// sorted by id with strictly positive exponents.
struct Monomial {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> e;
  std::uint32_t deg = 0;

  static Monomial one() { return {}; }
  static Monomial of(Symbol s, std::uint32_t exp = 1) {
    Monomial m;
    if (exp > 0) {
      m.e.emplace_back(s.id(), exp);
      m.deg = exp;
    }
    return m;
  }

  bool is_one() const { return e.empty(); }

  std::uint32_t exponent(std::uint32_t var) const {
    for (const auto& [v, k] : e)
      if (v == var) return k;
    return 0;
  }

  bool divides(const Monomial& o) const {
    auto it = o.e.begin();
    for (const auto& [v, k] : e) {
      while (it != o.e.end() && it->first < v) ++it;
      if (it == o.e.end() || it->first != v || it->second < k) return false;
    }
    return true;
  }

  friend Monomial operator*(const Monomial& a, const Monomial& b) {
    Monomial r;
    r.e.reserve(a.e.size() + b.e.size());
    auto i = a.e.begin(), j = b.e.begin();
    while (i != a.e.end() || j != b.e.end()) {
      if (j == b.e.end() || (i != a.e.end() && i->first < j->first)) {
        r.e.push_back(*i++);
      } else if (i == a.e.end() || j->first < i->first) {
        r.e.push_back(*j++);
      } else {
        r.e.emplace_back(i->first, i->second + j->second);
        ++i;
        ++j;
      }
    }
    r.deg = a.deg + b.deg;
    return r;
  }

  // Precondition: b divides a.
  friend Monomial operator/(const Monomial& a, const Monomial& b) {
    Monomial r;
    auto j = b.e.begin();
    for (const auto& [v, k] : a.e) {
      std::uint32_t sub = 0;
      if (j != b.e.end() && j->first == v) sub = (j++)->second;
      if (k > sub) r.e.emplace_back(v, k - sub);
    }
    r.deg = a.deg - b.deg;
    return r;
  }

  static Monomial gcd(const Monomial& a, const Monomial& b) {
    Monomial r;
    auto j = b.e.begin();
    for (const auto& [v, k] : a.e) {
      while (j != b.e.end() && j->first < v) ++j;
      if (j != b.e.end() && j->first == v) {
        auto m = std::min(k, j->second);
        r.e.emplace_back(v, m);
        r.deg += m;
      }
    }
    return r;
  }

  friend bool operator==(const Monomial& a, const Monomial& b) { return a.e == b.e; }
};

/// Graded lexicographic comparison: >0 if a is the larger monomial.
inline int grlex_cmp(const Monomial& a, const Monomial& b) {
  if (a.deg != b.deg) return a.deg > b.deg ? 1 : -1;
  auto i = a.e.begin(), j = b.e.begin();
  for (; i != a.e.end() && j != b.e.end(); ++i, ++j) {
    if (i->first != j->first) return i->first < j->first ? 1 : -1;
    if (i->second != j->second) return i->second > j->second ? 1 : -1;
  }
  if (i != a.e.end()) return 1;
  if (j != b.e.end()) return -1;
  return 0;
}

struct GrlexGreater {
  bool operator()(const Monomial& a, const Monomial& b) const { return grlex_cmp(a, b) > 0; }
};

using SymbolNamer = std::function<std::string(Symbol)>;

inline std::string default_name(Symbol s) { return s.name(); }

/// Sparse multivariate polynomial over the rationals. Terms are kept in
/// strictly decreasing graded-lex order with no zero coefficients, so two equal
/// polynomials have identical term vectors.
class Poly {
 public:
  struct Term {
    Monomial m;
    Rat c;
    friend bool operator==(const Term&, const Term&) = default;
  };

  Poly() = default;
  Poly(const Rat& c) {  // NOLINT(google-explicit-constructor)
    if (!c.is_zero()) terms_.push_back({Monomial::one(), c});
  }
  Poly(long c) : Poly(Rat(c)) {}  // NOLINT(google-explicit-constructor)

  static Poly var(Symbol s) { return term(Rat(1), Monomial::of(s)); }
  static Poly term(const Rat& c, Monomial m) {
    Poly p;
    if (!c.is_zero()) p.terms_.push_back({std::move(m), c});
    return p;
  }
  /// Builds from arbitrary terms: sorts, combines like terms, drops zeros.
  static Poly from_terms(std::vector<Term> ts) {
    std::sort(ts.begin(), ts.end(),
              [](const Term& x, const Term& y) { return grlex_cmp(x.m, y.m) > 0; });
    Poly p;
    for (auto& t : ts) {
      if (!p.terms_.empty() && p.terms_.back().m == t.m) {
        p.terms_.back().c += t.c;
        if (p.terms_.back().c.is_zero()) p.terms_.pop_back();
      } else if (!t.c.is_zero()) {
        p.terms_.push_back(std::move(t));
      }
    }
    return p;
  }

  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].m.is_one()); }
  bool is_monomial() const { return terms_.size() == 1; }
  Rat constant_value() const {
    if (!is_constant()) throw std::logic_error("Poly: not a constant");
    return terms_.empty() ? Rat(0) : terms_[0].c;
  }
  /// Coefficient of the monomial 1.
  Rat constant_term() const {
    if (!terms_.empty() && terms_.back().m.is_one()) return terms_.back().c;
    return Rat(0);
  }
  const Rat& lc() const { return lead().c; }
  const Monomial& lm() const { return lead().m; }
  std::uint32_t total_degree() const { return terms_.empty() ? 0 : terms_[0].m.deg; }

  std::uint32_t degree_in(Symbol s) const {
    std::uint32_t d = 0;
    for (const auto& t : terms_) d = std::max(d, t.m.exponent(s.id()));
    return d;
  }

  /// Symbol ids occurring in the polynomial, ascending.
  std::vector<std::uint32_t> vars() const {
    std::vector<std::uint32_t> vs;
    for (const auto& t : terms_)
      for (const auto& [v, k] : t.m.e) vs.push_back(v);
    std::sort(vs.begin(), vs.end());
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
    return vs;
  }
  bool contains(Symbol s) const {
    for (const auto& t : terms_)
      if (t.m.exponent(s.id()) > 0) return true;
    return false;
  }

  Poly operator-() const {
    Poly r = *this;
    for (auto& t : r.terms_) t.c = -t.c;
    return r;
  }

  friend Poly operator+(const Poly& a, const Poly& b) { return merge(a, b, false); }
  friend Poly operator-(const Poly& a, const Poly& b) { return merge(a, b, true); }

  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    if (a.terms_.size() == 1) return b.mul_term(a.terms_[0]);
    if (b.terms_.size() == 1) return a.mul_term(b.terms_[0]);
    std::map<Monomial, Rat, GrlexGreater> acc;
    for (const auto& x : a.terms_)
      for (const auto& y : b.terms_) {
        auto m = x.m * y.m;
        auto [it, fresh] = acc.try_emplace(std::move(m), x.c * y.c);
        if (!fresh) it->second += x.c * y.c;
      }
    Poly r;
    r.terms_.reserve(acc.size());
    for (auto& [m, c] : acc)
      if (!c.is_zero()) r.terms_.push_back({m, c});
    return r;
  }

  Poly& operator+=(const Poly& o) { return *this = *this + o; }
  Poly& operator-=(const Poly& o) { return *this = *this - o; }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }

  Poly scaled(const Rat& c) const {
    if (c.is_zero()) return {};
    Poly r = *this;
    for (auto& t : r.terms_) t.c *= c;
    return r;
  }

  Poly mul_term(const Term& t) const {
    Poly r;
    r.terms_.reserve(terms_.size());
    for (const auto& x : terms_) r.terms_.push_back({x.m * t.m, x.c * t.c});
    return r;
  }

  Poly pow(unsigned n) const {
    Poly result(1), base = *this;
    while (n) {
      if (n & 1U) result *= base;
      n >>= 1U;
      if (n) base *= base;
    }
    return result;
  }

  /// Leading coefficient scaled to 1; zero stays zero.
  Poly monic() const {
    if (is_zero() || lc().is_one()) return *this;
    return scaled(lc().inverse());
  }

  Poly partial(Symbol s) const {
    std::vector<Term> out;
    for (const auto& t : terms_) {
      auto k = t.m.exponent(s.id());
      if (k == 0) continue;
      Monomial m = t.m / Monomial::of(s);
      out.push_back({std::move(m), t.c * Rat(static_cast<long>(k))});
    }
    return from_terms(std::move(out));
  }

  /// Greatest monomial dividing every term.
  Monomial monomial_content() const {
    if (terms_.empty()) return {};
    Monomial g = terms_[0].m;
    for (std::size_t i = 1; i < terms_.size() && !g.is_one(); ++i) g = Monomial::gcd(g, terms_[i].m);
    return g;
  }

  Poly div_monomial(const Monomial& m) const {
    if (m.is_one()) return *this;
    Poly r;
    r.terms_.reserve(terms_.size());
    for (const auto& t : terms_) {
      if (!m.divides(t.m)) throw std::logic_error("Poly: monomial does not divide");
      r.terms_.push_back({t.m / m, t.c});
    }
    return r;
  }

  /// Multivariate division w.r.t. the graded-lex leading term: returns (q, r)
  /// with q*d + r == *this and no term of r divisible by lm(d).
  std::pair<Poly, Poly> divrem(const Poly& d) const {
    if (d.is_zero()) throw std::domain_error("Poly: division by zero polynomial");
    Poly q, rem, p = *this;
    const Term& ld = d.lead();
    while (!p.is_zero()) {
      const Term& lp = p.lead();
      if (ld.m.divides(lp.m)) {
        Term t{lp.m / ld.m, lp.c / ld.c};
        q.terms_.push_back(t);  // quotient terms arrive in decreasing order
        p = p - d.mul_term(t);
      } else {
        rem.terms_.push_back(lp);
        p.terms_.erase(p.terms_.begin());
      }
    }
    return {std::move(q), std::move(rem)};
  }

  /// Exact quotient, or nullopt when d does not divide *this.
  std::optional<Poly> exact_div(const Poly& d) const {
    if (d.is_zero()) throw std::domain_error("Poly: division by zero polynomial");
    if (is_zero()) return Poly();
    if (d.is_constant()) return scaled(d.constant_value().inverse());
    if (d.is_monomial()) {
      const Term& t = d.terms_[0];
      if (!t.m.divides(monomial_content())) return std::nullopt;
      return div_monomial(t.m).scaled(t.c.inverse());
    }
    Poly q, p = *this;
    const Term& ld = d.lead();
    while (!p.is_zero()) {
      const Term& lp = p.lead();
      if (!ld.m.divides(lp.m)) return std::nullopt;
      Term t{lp.m / ld.m, lp.c / ld.c};
      q.terms_.push_back(t);
      p = p - d.mul_term(t);
    }
    return q;
  }

  /// Coefficients as a polynomial in s: result[k] is the coefficient of s^k.
  std::vector<Poly> coeffs_in(Symbol s) const {
    std::vector<std::vector<Term>> buckets(degree_in(s) + 1);
    for (const auto& t : terms_) {
      auto k = t.m.exponent(s.id());
      buckets[k].push_back({k ? t.m / Monomial::of(s, k) : t.m, t.c});
    }
    std::vector<Poly> out;
    out.reserve(buckets.size());
    for (auto& b : buckets) out.push_back(from_terms(std::move(b)));
    return out;
  }

  static Poly from_coeffs(const std::vector<Poly>& cs, Symbol s) {
    std::vector<Term> ts;
    for (std::size_t k = 0; k < cs.size(); ++k) {
      auto vk = Monomial::of(s, static_cast<std::uint32_t>(k));
      for (const auto& t : cs[k].terms_) ts.push_back({t.m * vk, t.c});
    }
    return from_terms(std::move(ts));
  }

  double eval(const std::function<double(Symbol)>& value) const {
    double sum = 0;
    for (const auto& t : terms_) {
      double v = t.c.to_double();
      for (const auto& [id, k] : t.m.e) {
        double x = value(Symbol::from_id(id));
        for (std::uint32_t i = 0; i < k; ++i) v *= x;
      }
      sum += v;
    }
    return sum;
  }

  std::string to_string(const SymbolNamer& namer = default_name) const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& t : terms_) {
      bool neg = t.c.sign() < 0;
      if (first) {
        if (neg) out += "-";
      } else {
        out += neg ? "-" : "+";
      }
      first = false;
      Rat ac = t.c.abs();
      if (t.m.is_one()) {
        out += ac.str();
        continue;
      }
      if (!ac.is_one()) out += ac.str() + "*";
      out += monomial_string(t.m, namer);
    }
    return out;
  }

  static std::string monomial_string(const Monomial& m, const SymbolNamer& namer) {
    std::string out;
    bool first = true;
    for (const auto& [id, k] : m.e) {
      if (!first) out += "*";
      first = false;
      out += namer(Symbol::from_id(id));
      if (k > 1) out += "^" + std::to_string(k);
    }
    return out;
  }

  friend bool operator==(const Poly& a, const Poly& b) { return a.terms_ == b.terms_; }

 private:
  const Term& lead() const {
    if (terms_.empty()) throw std::logic_error("Poly: zero polynomial has no leading term");
    return terms_[0];
  }

  static Poly merge(const Poly& a, const Poly& b, bool subtract) {
    Poly r;
    r.terms_.reserve(a.terms_.size() + b.terms_.size());
    auto i = a.terms_.begin(), j = b.terms_.begin();
    while (i != a.terms_.end() || j != b.terms_.end()) {
      int c = i == a.terms_.end() ? -1 : (j == b.terms_.end() ? 1 : grlex_cmp(i->m, j->m));
      if (c > 0) {
        r.terms_.push_back(*i++);
      } else if (c < 0) {
        r.terms_.push_back(subtract ? Term{j->m, -j->c} : *j);
        ++j;
      } else {
        Rat s = subtract ? i->c - j->c : i->c + j->c;
        if (!s.is_zero()) r.terms_.push_back({i->m, std::move(s)});
        ++i;
        ++j;
      }
    }
    return r;
  }

  std::vector<Term> terms_;
};

Poly gcd(const Poly& p, const Poly& q);

namespace detail {

// gcd of `seed` and all coefficients of p in v; smallest coefficients first so
// that the running gcd collapses to 1 as early as possible.
inline Poly content_in(const Poly& p, Symbol v, Poly seed = Poly()) {
  auto cs = p.coeffs_in(v);
  std::stable_sort(cs.begin(), cs.end(), [](const Poly& x, const Poly& y) { return x.size() < y.size(); });
  Poly g = std::move(seed);
  for (const auto& c : cs) {
    if (c.is_zero()) continue;
    g = gcd(g, c);
    if (g.is_constant()) return Poly(1);
  }
  return g;
}

// Univariate image of p in v with every other symbol replaced by point(id).
inline std::vector<Rat> univariate_image(const Poly& p, Symbol v,
                                         const std::function<Rat(std::uint32_t)>& point) {
  std::vector<Rat> out(p.degree_in(v) + 1, Rat(0));
  for (const auto& t : p.terms()) {
    Rat c = t.c;
    std::uint32_t k = 0;
    for (const auto& [id, e] : t.m.e) {
      if (id == v.id()) k = e;
      else c *= point(id).pow(e);
    }
    out[k] += c;
  }
  return out;
}

inline std::size_t univariate_gcd_degree(std::vector<Rat> a, std::vector<Rat> b) {
  auto trim = [](std::vector<Rat>& x) { while (!x.empty() && x.back().is_zero()) x.pop_back(); };
  trim(a);
  trim(b);
  if (a.size() < b.size()) std::swap(a, b);
  while (!b.empty()) {
    Rat inv = b.back().inverse();
    while (a.size() >= b.size() && !a.empty()) {
      Rat f = a.back() * inv;
      std::size_t shift = a.size() - b.size();
      for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= f * b[i];
      trim(a);
    }
    std::swap(a, b);
  }
  return a.empty() ? 0 : a.size() - 1;
}

// Sound coprimality certificate for polynomials primitive in v: if at a point
// where both leading coefficients survive the images are coprime, so are the
// polynomials. A false answer only means "undecided".
inline bool coprime_by_evaluation(const Poly& a, const Poly& b, Symbol v) {
  std::uint32_t da = a.degree_in(v), db = b.degree_in(v);
  for (unsigned trial = 0; trial < 2; ++trial) {
    auto point = [trial](std::uint32_t id) {
      return Rat(static_cast<long>((id * 7919U + trial * 104729U + 13U) % 89U) + 2);
    };
    auto ia = univariate_image(a, v, point), ib = univariate_image(b, v, point);
    if (ia.back().is_zero() || ib.back().is_zero() || ia.size() != da + 1 || ib.size() != db + 1) continue;
    if (univariate_gcd_degree(std::move(ia), std::move(ib)) == 0) return true;
  }
  return false;
}

inline Poly primitive_part_in(const Poly& p, Symbol v) {
  if (p.is_zero()) return p;
  Poly c = content_in(p, v);
  if (c.is_constant()) return p;
  return *p.exact_div(c);
}

// Pseudo-remainder of a by b viewed as univariate polynomials in v
// (the lc(b)^e factor is omitted; callers only need the result up to content).
inline Poly prem(const Poly& a, const Poly& b, Symbol v) {
  auto bc = b.coeffs_in(v);
  auto rc = a.coeffs_in(v);
  std::size_t m = bc.size() - 1;
  const Poly& lb = bc[m];
  while (!rc.empty() && rc.size() - 1 >= m) {
    std::size_t d = rc.size() - 1;
    Poly lr = rc[d];
    if (lr.is_zero()) {
      rc.pop_back();
      continue;
    }
    for (auto& c : rc) c = c * lb;
    for (std::size_t j = 0; j <= m; ++j) rc[d - m + j] -= lr * bc[j];
    while (!rc.empty() && rc.back().is_zero()) rc.pop_back();
  }
  return Poly::from_coeffs(rc, v);
}

inline Poly gcd_primitive(Poly a, Poly b, Symbol v) {
  if (a.degree_in(v) < b.degree_in(v)) std::swap(a, b);
  while (!b.is_zero() && b.degree_in(v) > 0) {
    Poly r = prem(a, b, v);
    a = std::move(b);
    b = primitive_part_in(r, v);
  }
  if (!b.is_zero()) return Poly(1);
  return primitive_part_in(a, v);
}

}  // namespace detail

/// Monic gcd over Q. gcd(0, 0) = 0 and gcd(p, 0) = monic(p).
inline Poly gcd(const Poly& p, const Poly& q) {
  if (p.is_zero()) return q.monic();
  if (q.is_zero()) return p.monic();
  if (p.is_constant() || q.is_constant()) return Poly(1);
  Monomial mp = p.monomial_content(), mq = q.monomial_content();
  Monomial mg = Monomial::gcd(mp, mq);
  if (p.is_monomial() || q.is_monomial()) return Poly::term(Rat(1), mg);
  Poly a = p.div_monomial(mp), b = q.div_monomial(mq);
  if (a.is_constant() || b.is_constant()) return Poly::term(Rat(1), mg);

  auto va = a.vars(), vb = b.vars();
  Poly g;
  auto only_in = [](const std::vector<std::uint32_t>& x, const std::vector<std::uint32_t>& y)
      -> std::optional<std::uint32_t> {
    for (auto v : x)
      if (!std::binary_search(y.begin(), y.end(), v)) return v;
    return std::nullopt;
  };
  if (auto v = only_in(va, vb)) {
    g = detail::content_in(a, Symbol::from_id(*v), b);
  } else if (auto w = only_in(vb, va)) {
    g = detail::content_in(b, Symbol::from_id(*w), a);
  } else {
    // Same variable set: recurse on the variable of smallest combined degree.
    Symbol best;
    std::uint32_t best_deg = UINT32_MAX;
    for (auto id : va) {
      Symbol s = Symbol::from_id(id);
      auto d = std::max(a.degree_in(s), b.degree_in(s));
      if (d < best_deg) {
        best_deg = d;
        best = s;
      }
    }
    Poly ca = detail::content_in(a, best), cb = detail::content_in(b, best);
    Poly pa = ca.is_constant() ? a : *a.exact_div(ca);
    Poly pb = cb.is_constant() ? b : *b.exact_div(cb);
    Poly cg = gcd(ca, cb);
    if (pa.degree_in(best) == 0 || pb.degree_in(best) == 0 || detail::coprime_by_evaluation(pa, pb, best))
      g = cg;
    else
      g = cg * detail::gcd_primitive(pa, pb, best);
  }
  return (g * Poly::term(Rat(1), mg)).monic();
}

}  // namespace seirint
