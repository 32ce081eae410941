#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "seirint/risch.hpp"

using namespace seirint;

namespace {

RatFunc x() { return RatFunc::var("x"); }

const CertStep* step(const Certificate& c, const std::string& name) {
  for (const auto& s : c.steps)
    if (s.name == name) return &s;
  return nullptr;
}

bool all_checked(const Certificate& c) {
  for (const auto& s : c.steps)
    if (!s.checked) return false;
  return !c.steps.empty();
}

double integral(double alpha, double lo, double hi) {
  auto f = [alpha](double y) { return std::pow(y, alpha - 1) * std::exp(-y); };
  return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, lo, hi, 10, 1e-14);
}

}  // namespace

TEST(RischOde, PolynomialSolutions) {
  auto r1 = solve_risch_ode({Rat(-1), RatFunc(1)});
  ASSERT_TRUE(r1.q);
  EXPECT_EQ(*r1.q, RatFunc(-1));
  auto r2 = solve_risch_ode({Rat(-1), x()});
  ASSERT_TRUE(r2.q);
  EXPECT_EQ(*r2.q, -x() - 1);
}

TEST(RischOde, PoleSolution) {
  // q = 1/x solves q' + q = (x - 1)/x^2.
  auto r = solve_risch_ode({Rat(1), (x() - 1) / x().pow(2)});
  ASSERT_TRUE(r.q);
  EXPECT_EQ(*r.q, x().inverse());
  // Pure integration: q' = 1/x^2 gives -1/x; q' = 1/x has no rational solution.
  auto p = solve_risch_ode({Rat(0), x().pow(-2)});
  ASSERT_TRUE(p.q);
  EXPECT_EQ(*p.q, -x().inverse());
  EXPECT_FALSE(solve_risch_ode({Rat(0), x().inverse()}).q);
}

TEST(RischOde, NonexistenceCertificate) {
  auto r = solve_risch_ode({Rat(-1), x().pow(-2)});
  EXPECT_FALSE(r.q);
  ASSERT_NE(step(r.cert, "denominator"), nullptr);
  EXPECT_NE(step(r.cert, "denominator")->conclusion.find("q2 = x^k"), std::string::npos);
  EXPECT_NE(step(r.cert, "degree_matching")->conclusion.find("k = l + beta"), std::string::npos);
  EXPECT_NE(step(r.cert, "recurrence")->conclusion.find("j - k <= -beta"), std::string::npos);
  EXPECT_EQ(step(r.cert, "recurrence")->data.at("max_j_minus_k"), "-2");
  EXPECT_TRUE(all_checked(r.cert));
  EXPECT_TRUE(check_certificate(r.cert));
}

TEST(RischOde, RejectsOtherPoles) {
  EXPECT_THROW(solve_risch_ode({Rat(-1), (x() + 1).inverse()}), RischInputError);
  EXPECT_THROW(solve_risch_ode({Rat(-1), RatFunc::var("y")}), RischInputError);
}

TEST(RischOde, SolutionsVerifyAgainstDerivative) {
  Tower t = Tower::over("x");
  for (long f : {-2L, -1L, 1L, 3L})
    for (long beta = 0; beta <= 3; ++beta)
      for (long d = 0; d <= 3; ++d) {
        // Build g from a known q = (x^d + 2)/x^beta so a solution exists.
        RatFunc q = (x().pow(d) + 2) / x().pow(beta);
        RatFunc g = t.derive(q) + RatFunc(f) * q;
        auto r = solve_risch_ode({Rat(f), g});
        ASSERT_TRUE(r.q) << f << " " << beta << " " << d;
        EXPECT_EQ(t.derive(*r.q) + RatFunc(f) * *r.q, g);
      }
}

TEST(Gamma, IntegerPositive) {
  auto v = gamma_elementary(Rat(3));
  EXPECT_EQ(v.status, RischStatus::elementary);
  ASSERT_TRUE(v.gamma);
  EXPECT_EQ(*v.gamma, (x().pow(2) + 2 * x() + 2) * RatFunc::var("th1"));
  EXPECT_EQ(*gamma_elementary(Rat(1)).gamma, RatFunc::var("th1"));
  for (long a = 1; a <= 8; ++a) {
    auto g = gamma_elementary(Rat(a));
    ASSERT_TRUE(g.antiderivative);
    EXPECT_TRUE(verify_antiderivative(TowerElem(g.tower, *g.antiderivative),
                                      TowerElem(g.tower, x().pow(a - 1) * RatFunc::var("th1"))));
  }
}

TEST(Gamma, NumericCorroboration) {
  for (long a = 1; a <= 4; ++a) {
    auto g = gamma_elementary(Rat(a));
    auto F = [&](double xv) {
      return g.antiderivative->eval([&](Symbol s) { return s.name() == "x" ? xv : std::exp(-xv); });
    };
    EXPECT_NEAR(F(2.0) - F(1.0), integral(static_cast<double>(a), 1.0, 2.0), 1e-8) << a;
    EXPECT_NEAR(-F(1.5), integral(static_cast<double>(a), 1.5, 60.0), 1e-8) << a;
  }
}

TEST(Gamma, IntegerNonPositive) {
  for (long a : {0L, -1L, -4L}) {
    auto v = gamma_elementary(Rat(a));
    EXPECT_EQ(v.status, RischStatus::non_elementary);
    EXPECT_EQ(v.cert.beta, 1 - a);
    EXPECT_TRUE(all_checked(v.cert)) << a;
    EXPECT_TRUE(check_certificate(v.cert)) << a;
  }
}

TEST(Gamma, NonIntegerStages) {
  for (Rat a : {Rat(1, 2), Rat(-3, 2), Rat(7, 3), Rat(5, 2)}) {
    auto v = gamma_elementary(a);
    EXPECT_EQ(v.status, RischStatus::non_elementary);
    ASSERT_EQ(v.cert.kind, Certificate::Kind::exp_log);
    EXPECT_TRUE(all_checked(v.cert)) << a.str();
    EXPECT_TRUE(check_certificate(v.cert)) << a.str();
    const CertStep* s1 = step(v.cert, "theta2_degree");
    ASSERT_NE(s1, nullptr);
    EXPECT_EQ(s1->data.at("s"), (a - Rat(1)).str());
    EXPECT_EQ(s1->data.at("m"), "0");
    for (const auto& st : v.cert.steps)
      if (st.name == "theta1_degree") {  // x a' + (alpha-1+(k-l)x) a = 0 with l = k+2
        EXPECT_EQ(st.data.at("m"), "-2");
      }
  }
}

TEST(Gamma, ForcedSolutions) {
  EXPECT_TRUE(risch_detail::verify_forced_solution(Rat(1, 2), Rat(-3)));
  EXPECT_TRUE(risch_detail::verify_forced_solution(Rat(-2), Rat(0)));
  // x^2 and x^-2 are both rational: only the exponent's integrality matters.
  EXPECT_TRUE(risch_detail::forced_solution_rational(Rat(-2), Rat(0)));
  EXPECT_TRUE(risch_detail::forced_solution_rational(Rat(2), Rat(0)));
  EXPECT_FALSE(risch_detail::forced_solution_rational(Rat(1, 2), Rat(0)));
  EXPECT_FALSE(risch_detail::forced_solution_rational(Rat(0), Rat(1)));
}

TEST(Certificate, TamperingIsCaught) {
  auto c = gamma_elementary(Rat(1, 2)).cert;
  auto bad = c;
  bad.steps[2].data["s"] = "0";  // would make the forced solution rational
  EXPECT_FALSE(check_certificate(bad));
  bad = c;
  bad.steps.pop_back();
  EXPECT_FALSE(check_certificate(bad));
  bad = c;
  bad.alpha = Rat(2);  // integer alpha has no such reduction
  EXPECT_FALSE(check_certificate(bad));
  auto r = solve_risch_ode({Rat(-1), x().pow(-2)}).cert;
  r.P = Poly(0);  // the zero equation has a solution
  EXPECT_FALSE(check_certificate(r));
  EXPECT_FALSE(check_certificate(Certificate{}));
}

TEST(Recurrence, IntegrationByParts) {
  auto checks = gamma_recurrence_checks();
  ASSERT_EQ(checks.size(), 2u);
  EXPECT_TRUE(checks[0].holds());
  EXPECT_FALSE(checks[1].holds());
  // Residual of the sign-flipped variant: 2 x^alpha e^-x - (2 alpha + 1) x^(alpha-1) e^-x.
  RatFunc rho = RatFunc::var("rho"), th1 = RatFunc::var("th1"), al = RatFunc::var("alpha");
  EXPECT_EQ(checks[1].residual, 2 * rho * th1 - (2 * al + 1) * rho * th1 / x());
}

TEST(Recurrence, ConcreteAlpha) {
  RatFunc th1 = RatFunc::var("th1");
  for (long a = 1; a <= 6; ++a) {
    RatFunc g0 = *gamma_elementary(Rat(a)).gamma, g1 = *gamma_elementary(Rat(a + 1)).gamma;
    EXPECT_EQ(g1, RatFunc(a) * g0 + x().pow(a) * th1) << a;
    EXPECT_NE(g1, -x().pow(a) * th1 + RatFunc(a + 1) * g0) << a;
  }
}
