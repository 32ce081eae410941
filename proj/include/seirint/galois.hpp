#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "seirint/parser.hpp"
#include "seirint/variational.hpp"

namespace seirint {

/// 6x6 matrix over Q(c, alpha1..alpha5, gamma, gamma1, gamma2) acting on the
/// right of the fundamental matrix. Lower triangular with the first two
/// columns carrying all the structure.
struct GaloisMatrix {
  Case which = Case::a_ne_b;
  Matrix m;
  const RatFunc& operator()(std::size_t i, std::size_t j) const { return m[i][j]; }
  friend bool operator==(const GaloisMatrix& a, const GaloisMatrix& b) { return a.m == b.m; }
};

using GaloisParams = std::map<std::string, RatFunc>;

inline const std::vector<std::string>& galois_param_names() {
  static const std::vector<std::string> names{"c",      "alpha1", "alpha2", "alpha3", "alpha4",
                                              "alpha5", "gamma",  "gamma1", "gamma2"};
  return names;
}

/// Every parameter as its own symbol; entries of `over` replace them.
inline GaloisParams galois_params(const GaloisParams& over = {}) {
  GaloisParams p;
  for (const auto& n : galois_param_names()) p[n] = RatFunc::var(n);
  for (const auto& [k, v] : over) {
    if (!p.count(k)) throw std::invalid_argument("unknown Galois parameter '" + k + "'");
    p[k] = v;
  }
  return p;
}

namespace galois_detail {

inline Matrix identity() {
  Matrix m(6, std::vector<RatFunc>(6));
  for (std::size_t i = 0; i < 6; ++i) m[i][i] = RatFunc(1);
  return m;
}

inline Matrix mul(const Matrix& a, const Matrix& b) {
  Matrix out(6, std::vector<RatFunc>(6));
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t k = 0; k < 6; ++k) {
      if (a[i][k].is_zero()) continue;
      for (std::size_t j = 0; j < 6; ++j)
        if (!b[k][j].is_zero()) out[i][j] += a[i][k] * b[k][j];
    }
  return out;
}

/// 1 + c + ... + c^(k-1).
inline RatFunc geometric(const RatFunc& c, long k) {
  RatFunc s, p(1);
  for (long i = 0; i < k; ++i) {
    s += p;
    p *= c;
  }
  return s;
}

using Template = std::array<std::array<const char*, 6>, 6>;

// Displayed A^2 and A^k; "{k}" is replaced by the power before parsing.
inline const Template& printed_square(Case c) {
  static const Template ne{{
      {"1", "0", "0", "0", "0", "0"},
      {"alpha1*(c+1)", "c^2", "0", "0", "0", "0"},
      {"gamma*alpha1*(c-1)+2*alpha2", "gamma*(c^2-1)", "1", "0", "0", "0"},
      {"gamma1*alpha1*(c-1)+2*alpha3", "gamma1*(c^2-1)", "0", "1", "0", "0"},
      {"gamma2*alpha1*(c-1)+2*alpha3", "gamma2*(c^2-1)", "0", "0", "1", "0"},
      {"2*alpha5", "0", "0", "0", "0", "1"},
  }};
  static const Template eq{{
      {"1", "0", "0", "0", "0", "0"},
      {"2*alpha1", "1", "0", "0", "0", "0"},
      {"alpha1*c+2*alpha2", "2*c", "1", "0", "0", "0"},
      {"gamma1*alpha1+2*alpha3", "2*gamma1*c", "0", "1", "0", "0"},
      {"2*alpha4", "0", "0", "0", "1", "0"},
      {"2*alpha5", "0", "0", "0", "0", "1"},
  }};
  return c == Case::a_ne_b ? ne : eq;
}

inline const Template& printed_power(Case c) {
  static const Template ne{{
      {"1", "0", "0", "0", "0", "0"},
      {"alpha1/(c-1)*(c^{k}-1)", "c^{k}", "0", "0", "0", "0"},
      {"gamma*alpha1/(c-1)*(c^{k}-1)+{k}*(alpha2-gamma*alpha1)", "gamma*(c^{k}-1)", "1", "0", "0", "0"},
      {"gamma1*alpha1/(c-1)*(c^{k}-1)+{k}*(alpha3-gamma1*alpha1)", "gamma1*(c^{k}-1)", "0", "1", "0", "0"},
      {"gamma2*alpha1/(c-1)*(c^{k}-1)+{k}*(alpha3-gamma2*alpha1)", "gamma2*(c^{k}-1)", "0", "0", "1", "0"},
      {"{k}*alpha5", "0", "0", "0", "0", "1"},
  }};
  static const Template eq{{
      {"1", "0", "0", "0", "0", "0"},
      {"{k}*alpha1", "1", "0", "0", "0", "0"},
      {"1/2*{k}*({k}-1)*alpha1*c+{k}*alpha2", "{k}*c", "0", "1", "0", "0"},
      {"1/2*{k}*({k}-1)*alpha1*gamma1*c+{k}*alpha2", "{k}*gamma1*c", "0", "1", "0", "0"},
      {"{k}*alpha4", "0", "0", "0", "1", "0"},
      {"{k}*alpha5", "0", "0", "0", "0", "1"},
  }};
  return c == Case::a_ne_b ? ne : eq;
}

inline std::string instantiate(std::string s, long k) {
  const std::string key = "{k}", val = std::to_string(k);
  for (auto p = s.find(key); p != std::string::npos; p = s.find(key, p + val.size())) s.replace(p, key.size(), val);
  return s;
}

inline std::map<std::uint32_t, RatFunc> subst_map(const GaloisParams& p) {
  std::map<std::uint32_t, RatFunc> m;
  for (const auto& [k, v] : p) m[Symbol(k).id()] = v;
  return m;
}

inline RatFunc parse_entry(const std::string& text) {
  Tower t;
  return parse_into(text, t).value();
}

}  // namespace galois_detail

inline GaloisMatrix build_matrix(Case which, const GaloisParams& params = galois_params()) {
  GaloisParams p = galois_params(params);
  GaloisMatrix A{which, galois_detail::identity()};
  for (std::size_t i = 1; i < 6; ++i) A.m[i][0] = p.at("alpha" + std::to_string(i));
  const RatFunc& c = p.at("c");
  if (which == Case::a_ne_b) {
    A.m[1][1] = c;
    A.m[2][1] = p.at("gamma") * (c - 1);
    A.m[3][1] = p.at("gamma1") * (c - 1);
    A.m[4][1] = p.at("gamma2") * (c - 1);
  } else {
    A.m[2][1] = c;
    A.m[3][1] = p.at("gamma1") * c;
  }
  return A;
}

inline GaloisMatrix multiply(const GaloisMatrix& a, const GaloisMatrix& b) {
  return {a.which, galois_detail::mul(a.m, b.m)};
}

inline GaloisMatrix power_iterative(Case which, const GaloisParams& params, long k) {
  if (k < 1) throw std::invalid_argument("matrix power needs k >= 1");
  GaloisMatrix A = build_matrix(which, params), out = A;
  for (long i = 1; i < k; ++i) out = multiply(out, A);
  return out;
}

/// Closed form of A^k, obtained by solving the row recurrences of
/// A^(k+1) = A^k A. The (c^k - 1)/(c - 1) factors are geometric sums, so the
/// form holds at c = 1 as well.
inline GaloisMatrix power_closed_form(Case which, const GaloisParams& params, long k) {
  using galois_detail::geometric;
  if (k < 1) throw std::invalid_argument("matrix power needs k >= 1");
  GaloisParams p = galois_params(params);
  const RatFunc &c = p.at("c"), &a1 = p.at("alpha1");
  RatFunc K(k);
  GaloisMatrix M{which, galois_detail::identity()};
  M.m[5][0] = K * p.at("alpha5");
  if (which == Case::a_ne_b) {
    RatFunc S = geometric(c, k);
    M.m[1][0] = a1 * S;
    M.m[1][1] = c.pow(k);
    const char* g[] = {"gamma", "gamma1", "gamma2"};
    for (std::size_t r = 2; r <= 4; ++r) {
      const RatFunc& gr = p.at(g[r - 2]);
      M.m[r][0] = gr * a1 * S + K * (p.at("alpha" + std::to_string(r)) - gr * a1);
      M.m[r][1] = gr * (c - 1) * S;
    }
  } else {
    RatFunc tri(Rat(k * (k - 1), 2));
    const RatFunc& g1 = p.at("gamma1");
    M.m[1][0] = K * a1;
    M.m[2][0] = tri * a1 * c + K * p.at("alpha2");
    M.m[2][1] = K * c;
    M.m[3][0] = tri * a1 * g1 * c + K * p.at("alpha3");
    M.m[3][1] = K * g1 * c;
    M.m[4][0] = K * p.at("alpha4");
  }
  return M;
}

/// The displayed A^2 (k = 2) or A^k (k != 2 uses the general display; k = 2
/// can request either through `general`).
struct PrintedMatrix {
  std::array<std::array<std::string, 6>, 6> text;
  std::array<std::array<std::optional<RatFunc>, 6>, 6> value;  // empty where the display is undefined
};

inline PrintedMatrix printed_matrix(Case which, const GaloisParams& params, long k, bool general) {
  using namespace galois_detail;
  const Template& tpl = (k == 2 && !general) ? printed_square(which) : printed_power(which);
  auto sub = subst_map(galois_params(params));
  PrintedMatrix out;
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j) {
      out.text[i][j] = instantiate(tpl[i][j], k);
      try {
        out.value[i][j] = parse_entry(out.text[i][j]).subst(sub);
      } catch (const std::domain_error&) {
        out.value[i][j].reset();  // e.g. 1/(c-1) at c = 1
      }
    }
  return out;
}

struct EntryMismatch {
  std::size_t row = 0, col = 0;  // 1-based
  std::string printed;
  std::optional<RatFunc> printed_value;
  RatFunc computed;
  /// Printed positions (1-based) whose value equals the computed entry.
  std::vector<std::pair<std::size_t, std::size_t>> computed_matches;
};

struct PowerReport {
  Case which = Case::a_ne_b;
  long k = 1;
  GaloisMatrix computed;
  bool closed_form_agrees = false;
  std::vector<EntryMismatch> mismatches;  // against the printed display
  bool discrepancy() const { return !mismatches.empty(); }
};

inline std::vector<EntryMismatch> compare_with_printed(const GaloisMatrix& computed, const PrintedMatrix& pm) {
  std::vector<EntryMismatch> out;
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j) {
      const auto& pv = pm.value[i][j];
      if (pv && *pv == computed(i, j)) continue;
      EntryMismatch e{i + 1, j + 1, pm.text[i][j], pv, computed(i, j), {}};
      for (std::size_t a = 0; a < 6; ++a)
        for (std::size_t b = 0; b < 6; ++b)
          if (pm.value[a][b] && *pm.value[a][b] == computed(i, j) && !computed(i, j).is_zero())
            e.computed_matches.emplace_back(a + 1, b + 1);
      out.push_back(std::move(e));
    }
  return out;
}

/// A^k by repeated multiplication, checked against the closed form and the
/// displayed matrix (the A^2 display for k = 2, the general one otherwise).
inline PowerReport power_report(Case which, const GaloisParams& params, long k) {
  PowerReport rep;
  rep.which = which;
  rep.k = k;
  rep.computed = power_iterative(which, params, k);
  rep.closed_form_agrees = power_closed_form(which, params, k) == rep.computed;
  rep.mismatches = compare_with_printed(rep.computed, printed_matrix(which, params, k, false));
  return rep;
}

inline RatFunc determinant(const GaloisMatrix& g) {
  Matrix a = g.m;
  RatFunc det(1);
  for (std::size_t col = 0; col < 6; ++col) {
    std::size_t piv = col;
    while (piv < 6 && a[piv][col].is_zero()) ++piv;
    if (piv == 6) return RatFunc(0);
    if (piv != col) {
      std::swap(a[piv], a[col]);
      det = -det;
    }
    det *= a[col][col];
    RatFunc inv = a[col][col].inverse();
    for (std::size_t r = col + 1; r < 6; ++r) {
      if (a[r][col].is_zero()) continue;
      RatFunc f = a[r][col] * inv;
      for (std::size_t j = col; j < 6; ++j) a[r][j] -= f * a[col][j];
    }
  }
  return det;
}

/// Expected determinant: c for a != b, 1 for a == b.
inline RatFunc expected_determinant(Case which, const GaloisParams& params = galois_params()) {
  return which == Case::a_ne_b ? galois_params(params).at("c") : RatFunc(1);
}

// ---- identity-component families and certificates -------------------------

/// The two displayed subsets of the identity component. Family 1 has a zero
/// (2,1) entry and free c; family 2 carries alpha1*(c-1) (a != b) or
/// alpha1*c (a == b) there, with alpha1 != 0. Unspecified first-column
/// entries are free; members here set them to 0.
///
/// For a == b the second family is also stated elsewhere with alpha1 = 0.
/// A certificate needs one member of each family, which covers either
/// reading.
inline GaloisMatrix family_member(Case which, int family, const Rat& c, const Rat& alpha1, const GaloisParams& gammas) {
  GaloisParams p = galois_params(gammas);
  for (const char* n : {"alpha2", "alpha3", "alpha4", "alpha5"}) p[n] = RatFunc(0);
  p["c"] = RatFunc(c);
  p["alpha1"] = RatFunc(0);
  GaloisMatrix m = build_matrix(which, p);
  if (family == 2) m.m[1][0] = RatFunc(alpha1) * (which == Case::a_ne_b ? RatFunc(c) - 1 : RatFunc(c));
  else if (family != 1) throw std::invalid_argument("family must be 1 or 2");
  return m;
}

/// Checks the displayed shape: identity outside the first two columns,
/// the second column as in build_matrix for some c, and the family's (2,1) rule.
inline bool in_family(const GaloisMatrix& m, int family, const GaloisParams& gammas, const Rat& alpha1 = Rat(0)) {
  GaloisParams p = galois_params(gammas);
  if (m(0, 0) != RatFunc(1) || !m(0, 1).is_zero()) return false;
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 2; j < 6; ++j)
      if (m(i, j) != RatFunc(i == j ? 1 : 0)) return false;
  RatFunc c = m.which == Case::a_ne_b ? m(1, 1) : m(2, 1);
  GaloisParams q = p;
  q["c"] = c;
  GaloisMatrix ref = build_matrix(m.which, q);
  for (std::size_t i = 1; i < 6; ++i)
    if (m(i, 1) != ref(i, 1)) return false;
  if (family == 1) return m(1, 0).is_zero();
  if (alpha1.is_zero()) return false;
  return m(1, 0) == RatFunc(alpha1) * (m.which == Case::a_ne_b ? c - 1 : c);
}

struct NoncommutativityCertificate {
  Case which = Case::a_ne_b;
  GaloisParams gammas;
  Rat c1, c2, alpha1;
  GaloisMatrix m1, m2;
  Matrix commutator;
  std::size_t row = 0, col = 0;  // 1-based
  RatFunc value;
};

inline Matrix commutator(const GaloisMatrix& a, const GaloisMatrix& b) {
  Matrix ab = galois_detail::mul(a.m, b.m), ba = galois_detail::mul(b.m, a.m);
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j) ab[i][j] -= ba[i][j];
  return ab;
}

/// Fixed rational stand-ins for gamma, gamma1, gamma2.
inline GaloisParams certificate_gammas(Case which) {
  if (which == Case::a_ne_b) return {{"gamma", RatFunc(Rat(1, 2))}, {"gamma1", RatFunc(Rat(1, 3))}, {"gamma2", RatFunc(Rat(1, 5))}};
  return {{"gamma1", RatFunc(Rat(1, 3))}};
}

/// Grid search for M1 in family 1 and M2 in family 2 with M1 M2 != M2 M1.
inline NoncommutativityCertificate noncommutativity_certificate(Case which) {
  const std::vector<Rat> grid{Rat(1), Rat(2), Rat(-1), Rat(1, 2), Rat(3)};
  GaloisParams gam = certificate_gammas(which);
  for (const Rat& alpha1 : {Rat(1), Rat(2)})
    for (const Rat& c1 : grid)
      for (const Rat& c2 : grid) {
        GaloisMatrix m1 = family_member(which, 1, c1, alpha1, gam), m2 = family_member(which, 2, c2, alpha1, gam);
        Matrix k = commutator(m1, m2);
        for (std::size_t i = 0; i < 6; ++i)
          for (std::size_t j = 0; j < 6; ++j)
            if (!k[i][j].is_zero()) return {which, gam, c1, c2, alpha1, m1, m2, k, i + 1, j + 1, k[i][j]};
      }
  throw std::logic_error("no non-commuting pair on the search grid");
}

/// Recomputes the commutator from scratch and checks membership and the cited entry.
inline bool verify_certificate(const NoncommutativityCertificate& cert) {
  if (cert.row < 1 || cert.row > 6 || cert.col < 1 || cert.col > 6) return false;
  if (!in_family(cert.m1, 1, cert.gammas) || !in_family(cert.m2, 2, cert.gammas, cert.alpha1)) return false;
  Matrix k = commutator(cert.m1, cert.m2);
  if (k != cert.commutator) return false;
  const RatFunc& v = k[cert.row - 1][cert.col - 1];
  return !v.is_zero() && v == cert.value;
}

/// Replaces gamma, gamma1, gamma2 by their expressions in a, b, r, C3.
inline GaloisMatrix substitute_gammas(const GaloisMatrix& g) {
  std::map<std::uint32_t, RatFunc> m;
  for (const auto& [k, v] : gamma_constants(g.which)) m[Symbol(k).id()] = v;
  GaloisMatrix out = g;
  for (auto& row : out.m)
    for (auto& e : row) e = e.subst(m);
  return out;
}

}  // namespace seirint
