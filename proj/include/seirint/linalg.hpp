#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "seirint/ratfunc.hpp"

namespace seirint {

/// Solves A x = b over Q by Gauss-Jordan elimination. Returns one solution
/// (free variables set to 0) or nullopt if the system is inconsistent.
inline std::optional<std::vector<Rat>> solve_linear(std::vector<std::vector<Rat>> a, std::vector<Rat> b) {
  const std::size_t rows = a.size(), cols = rows ? a[0].size() : 0;
  std::vector<std::size_t> pivot_col;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && a[p][c].is_zero()) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[r]);
    std::swap(b[p], b[r]);
    Rat inv = a[r][c].inverse();
    for (auto& v : a[r]) v *= inv;
    b[r] *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][c].is_zero()) continue;
      Rat f = a[i][c];
      for (std::size_t j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
      b[i] -= f * b[r];
    }
    pivot_col.push_back(c);
    ++r;
  }
  for (std::size_t i = r; i < rows; ++i)
    if (!b[i].is_zero()) return std::nullopt;
  std::vector<Rat> x(cols, Rat(0));
  for (std::size_t i = 0; i < r; ++i) x[pivot_col[i]] = b[i];
  return x;
}

/// Expresses `target` as a Q-linear combination of `basis` (rational
/// functions, coefficients free of any symbol). nullopt if impossible.
inline std::optional<std::vector<Rat>> rational_combination(const RatFunc& target,
                                                            const std::vector<RatFunc>& basis) {
  // Clear denominators: D*target and D*basis_i are polynomials.
  Poly d = target.den();
  for (const auto& v : basis) d = *(d * v.den()).exact_div(gcd(d, v.den()));
  auto clear = [&](const RatFunc& f) { return f.num() * *d.exact_div(f.den()); };
  Poly t = clear(target);
  std::vector<Poly> vs;
  for (const auto& v : basis) vs.push_back(clear(v));

  std::vector<Monomial> monos;
  auto index_of = [&](const Monomial& m) {
    for (std::size_t i = 0; i < monos.size(); ++i)
      if (monos[i] == m) return i;
    monos.push_back(m);
    return monos.size() - 1;
  };
  for (const auto& term : t.terms()) index_of(term.m);
  for (const auto& v : vs)
    for (const auto& term : v.terms()) index_of(term.m);

  std::vector<std::vector<Rat>> a(monos.size(), std::vector<Rat>(vs.size(), Rat(0)));
  std::vector<Rat> b(monos.size(), Rat(0));
  for (std::size_t j = 0; j < vs.size(); ++j)
    for (const auto& term : vs[j].terms()) a[index_of(term.m)][j] = term.c;
  for (const auto& term : t.terms()) b[index_of(term.m)] = term.c;
  if (vs.empty()) return t.is_zero() ? std::optional<std::vector<Rat>>(std::vector<Rat>{}) : std::nullopt;
  return solve_linear(std::move(a), std::move(b));
}

/// Rank of a rational matrix.
inline std::size_t rank(std::vector<std::vector<Rat>> a) {
  std::size_t rows = a.size(), cols = rows ? a[0].size() : 0, r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && a[p][c].is_zero()) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[r]);
    for (std::size_t i = r + 1; i < rows; ++i) {
      if (a[i][c].is_zero()) continue;
      Rat f = a[i][c] / a[r][c];
      for (std::size_t j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
    }
    ++r;
  }
  return r;
}

}  // namespace seirint
