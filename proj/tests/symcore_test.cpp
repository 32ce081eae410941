#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "seirint/ratfunc.hpp"
#include "test_util.hpp"

using namespace seirint;

namespace {

Poly X() { return Poly::var(Symbol("x")); }
Poly Y() { return Poly::var(Symbol("y")); }

// Test-only oracle: determinant of the Sylvester matrix of two univariate
// polynomials in x with rational coefficients, by plain Gaussian elimination.
Rat sylvester_resultant(const Poly& p, const Poly& q) {
  Symbol x("x");
  auto pc = p.coeffs_in(x), qc = q.coeffs_in(x);
  std::size_t m = pc.size() - 1, n = qc.size() - 1, dim = m + n;
  std::vector<std::vector<Rat>> a(dim, std::vector<Rat>(dim, Rat(0)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= m; ++j) a[i][i + j] = pc[m - j].constant_value();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j <= n; ++j) a[n + i][i + j] = qc[n - j].constant_value();
  Rat det(1);
  for (std::size_t col = 0; col < dim; ++col) {
    std::size_t piv = col;
    while (piv < dim && a[piv][col].is_zero()) ++piv;
    if (piv == dim) return Rat(0);
    if (piv != col) {
      std::swap(a[piv], a[col]);
      det = -det;
    }
    det *= a[col][col];
    for (std::size_t r = col + 1; r < dim; ++r) {
      Rat f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < dim; ++c) a[r][c] -= f * a[col][c];
    }
  }
  return det;
}

}  // namespace

TEST(Rat, CanonicalForm) {
  Rat q(6, -4);
  EXPECT_EQ(q.num(), -3);
  EXPECT_EQ(q.den(), 2);
  EXPECT_EQ(Rat(0, 5).den(), 1);
  EXPECT_EQ(Rat::parse("-10/4"), Rat(-5, 2));
  EXPECT_THROW(Rat(1, 0), std::domain_error);
  EXPECT_THROW(Rat::parse("1/0"), std::domain_error);
  EXPECT_THROW(Rat::parse("abc"), std::invalid_argument);
}

TEST(PolyArith, DifferenceOfSquares) {
  EXPECT_EQ((X() + 1) * (X() - 1), X() * X() - 1);
  EXPECT_EQ(((X() + 1) * (X() - 1)).to_string(), "x^2-1");
}

TEST(PolyArith, AdditiveIdentity) {
  Poly p = X() * Y() + Poly(Rat(3, 2));
  EXPECT_EQ(p + Poly(), p);
}

TEST(PolyArith, DivremByMonomial) {
  auto [q, r] = (X() * X() + 1).divrem(X());
  EXPECT_EQ(q, X());
  EXPECT_EQ(r, Poly(1));
  EXPECT_EQ(q * X() + r, X() * X() + 1);
  EXPECT_THROW((void)X().divrem(Poly()), std::domain_error);
}

TEST(PolyArith, GrlexOrderIsDeterministic) {
  // x before y in the symbol table, higher total degree first.
  Poly p = Y() * Y() + X() + X() * Y() + Y() + 1;
  EXPECT_EQ(p.to_string(), "x*y+y^2+x+y+1");
}

TEST(PolyGcd, CommonFactor) {
  EXPECT_EQ(gcd(X() * X() - 1, X() - 1), X() - 1);
}

TEST(PolyGcd, WithZero) {
  Poly p = (X() * 3) + 6;
  EXPECT_EQ(gcd(p, Poly()), X() + 2);
  EXPECT_EQ(gcd(Poly(), p), X() + 2);
  EXPECT_TRUE(gcd(Poly(), Poly()).is_zero());
}

TEST(PolyGcd, CoprimeQuadratics) {
  Poly p = X() * X() + 1, q = X() * X() - 1;
  // Independent check: nonzero resultant means no common factor.
  EXPECT_EQ(sylvester_resultant(p, q), Rat(4));
  EXPECT_EQ(gcd(p, q), Poly(1));
}

TEST(PolyGcd, Multivariate) {
  Poly a = RandomPolys::sym("a"), b = RandomPolys::sym("b");
  Poly f = (X() * a - b) * (Y() + a * a);
  Poly g = (X() * a - b) * (X() + Y() * b + 1);
  EXPECT_EQ(gcd(f, g), (X() * a - b).monic());
}

TEST(RatFuncNormalize, Cancellation) {
  auto r = RatFunc::normalize(X() * X() - 1, X() - 1);
  EXPECT_EQ(r, RatFunc(X() + 1));
  EXPECT_TRUE(r.is_polynomial());
}

TEST(RatFuncNormalize, ContentRemoval) {
  auto r = RatFunc::normalize(X() * 2, Poly(4));
  EXPECT_EQ(r.den(), Poly(1));
  EXPECT_EQ(r.num(), X().scaled(Rat(1, 2)));
  EXPECT_EQ(r.to_string(), "1/2*x");
}

TEST(RatFuncNormalize, ScaledDenominator) {
  auto r = RatFunc::normalize(X() * X() - 1, X() * 2 - 2);
  // Oracle: cross-multiplication (x+1)/2 * (2x-2) == x^2-1.
  EXPECT_EQ(r.num() * (X() * 2 - 2), (X() * X() - 1) * r.den());
  EXPECT_EQ(r.to_string(), "1/2*x+1/2");
}

TEST(RatFuncNormalize, Errors) {
  EXPECT_THROW(RatFunc::normalize(X(), Poly()), std::domain_error);
  EXPECT_THROW(RatFunc(0).inverse(), std::domain_error);
}

TEST(RatFuncNormalize, Idempotent) {
  auto r = RatFunc::normalize(X() * Y() + Y(), X() * X() * Y() - Y());
  EXPECT_EQ(RatFunc::normalize(r.num(), r.den()), r);
  EXPECT_EQ(r.to_string(), "1/(x-1)");
}

TEST(RatFuncSubst, SimultaneousSubstitution) {
  RatFunc f = RatFunc(X()) / RatFunc(Y());
  auto g = f.subst({{Symbol("x").id(), RatFunc(Y())}, {Symbol("y").id(), RatFunc(X())}});
  EXPECT_EQ(g, RatFunc(Y()) / RatFunc(X()));
  auto h = RatFunc(X() * X() + 1).subst(Symbol("x"), RatFunc(1) / RatFunc(Y()));
  EXPECT_EQ(h, RatFunc(Y() * Y() + 1) / RatFunc(Y() * Y()));
}

// ---- properties -----------------------------------------------------------

class SymcoreProperty : public ::testing::TestWithParam<unsigned> {};

TEST_P(SymcoreProperty, CanonicalFormIgnoresCommonFactors) {
  RandomPolys gen(GetParam());
  for (int i = 0; i < 10; ++i) {
    Poly p = gen.poly(), q = gen.nonzero_poly(), r = gen.nonzero_poly();
    EXPECT_EQ(RatFunc::normalize(p * r, q * r), RatFunc::normalize(p, q));
  }
}

TEST_P(SymcoreProperty, FieldAxioms) {
  RandomPolys gen(GetParam());
  for (int i = 0; i < 6; ++i) {
    RatFunc a = gen.ratfunc(), b = gen.ratfunc(), c = gen.ratfunc();
    EXPECT_EQ((a + b) + c, a + (b + c));
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ(a * (b + c), a * b + a * c);
    EXPECT_TRUE((a + (-a)).is_zero());
    EXPECT_EQ(a - a, RatFunc(0));
    if (!a.is_zero()) {
      EXPECT_EQ(a * a.inverse(), RatFunc(1));
    }
  }
}

TEST_P(SymcoreProperty, DivremReconstructs) {
  RandomPolys gen(GetParam());
  for (int i = 0; i < 10; ++i) {
    Poly p = gen.poly(), d = gen.nonzero_poly();
    auto [q, r] = p.divrem(d);
    EXPECT_EQ(q * d + r, p);
    for (const auto& t : r.terms()) EXPECT_FALSE(d.lm().divides(t.m));
  }
}

TEST_P(SymcoreProperty, GcdDividesBoth) {
  RandomPolys gen(GetParam());
  for (int i = 0; i < 8; ++i) {
    Poly f = gen.nonzero_poly(), a = gen.nonzero_poly(), b = gen.nonzero_poly();
    Poly g = gcd(f * a, f * b);
    EXPECT_TRUE((f * a).exact_div(g).has_value());
    EXPECT_TRUE((f * b).exact_div(g).has_value());
    EXPECT_TRUE(g.exact_div(f.monic()).has_value());
    EXPECT_TRUE(g.lc().is_one());
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, SymcoreProperty, ::testing::Values(1u, 2u, 3u, 4u, 5u));
