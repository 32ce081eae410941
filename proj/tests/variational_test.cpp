#include <gtest/gtest.h>

#include <chrono>

#include "seirint/variational.hpp"

using namespace seirint;

namespace {

RatFunc V(std::string_view n) { return RatFunc::var(n); }

}  // namespace

TEST(BuildVe, Entries) {
  auto sys = build_ve(Case::a_ne_b);
  EXPECT_EQ(sys.m[3][2], -V("r") * V("thX"));
  EXPECT_EQ(sys.m[3][3], -V("r") * V("C2") * V("tha"));
  EXPECT_EQ(sys.m[0][0], -V("r") * V("C2") * V("tha"));
  EXPECT_TRUE(sys.m[4][0].is_zero());
  EXPECT_EQ(sys.m[4][1], -(V("r") * V("b") / V("a")));
  EXPECT_EQ(sys.m[5][0], -(V("r") * V("r") / V("a")) * V("C2") * V("tha"));
}

TEST(FundamentalColumns, Transcription) {
  auto fs = fundamental_columns(Case::a_ne_b);
  EXPECT_EQ(fs.cols[2][3], (V("r") / V("a")) * (V("tha") - 1) * V("thX"));
  EXPECT_EQ(fs.cols[4], (Column{0, 0, 0, 0, 1, 0}));
  EXPECT_EQ(fs.cols[1][2], V("b") / (V("a") - V("b")) * (V("thb") - V("tha")));
}

TEST(FundamentalColumns, AllVerify) {
  auto start = std::chrono::steady_clock::now();
  for (Case c : {Case::a_ne_b, Case::a_eq_b}) {
    auto sys = build_ve(c);
    auto fs = fundamental_columns(c);
    for (std::size_t j = 0; j < 6; ++j) {
      EXPECT_TRUE(all_zero(verify_ve_column(fs.cols[j], sys))) << case_name(c) << " column " << j + 1;
      EXPECT_TRUE(is_unit_vector(initial_value(fs, j), j)) << case_name(c) << " column " << j + 1;
    }
  }
  EXPECT_LT(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(), 10.0);
}

TEST(FundamentalColumns, SpecificNegativeControl) {
  auto sys = build_ve(Case::a_ne_b);
  auto col = fundamental_columns(Case::a_ne_b).cols[2];
  col[3] = V("r") * (V("tha") - 1) * V("thX");
  EXPECT_FALSE(all_zero(verify_ve_column(col, sys)));
}

TEST(FundamentalColumns, EveryPerturbationDetected) {
  for (Case c : {Case::a_ne_b, Case::a_eq_b}) {
    auto fs = fundamental_columns(c);
    auto ps = perturbation_controls(fs, build_ve(c));
    EXPECT_GT(ps.size(), 15u);
    for (const auto& p : ps) {
      EXPECT_TRUE(p.detected()) << case_name(c) << " col " << p.column << " row " << p.row << " term " << p.term;
      // Entries built from primitives never admit a compensating solution.
      if (p.column == 0) {
        EXPECT_TRUE(p.residual_nonzero);
      }
    }
  }
}

TEST(Sigma, Displays) {
  for (Case c : {Case::a_ne_b, Case::a_eq_b}) {
    auto rep = sigma_action_check(c);
    EXPECT_TRUE(all_zero(rep.residual)) << case_name(c);
    EXPECT_TRUE(rep.pass()) << case_name(c);
  }
}

TEST(Sigma, IdentityValues) {
  // c = 1 for the scaling, c = 0 for the shift: sigma fixes Phi_2.
  auto s1 = sigma_for(Case::a_ne_b, RatFunc(1));
  auto s0 = sigma_for(Case::a_eq_b, RatFunc(0));
  auto f1 = fundamental_columns(Case::a_ne_b), f0 = fundamental_columns(Case::a_eq_b);
  for (std::size_t i = 0; i < 6; ++i) {
    EXPECT_EQ(s1.apply(f1.cols[1][i]), f1.cols[1][i]);
    EXPECT_EQ(s0.apply(f0.cols[1][i]), f0.cols[1][i]);
  }
}

TEST(Sigma, WrongCoefficientsFail) {
  auto fs = fundamental_columns(Case::a_eq_b);
  auto sigma = sigma_for(Case::a_eq_b, V("c"));
  // Dropping the Phi_4 term from the a = b display leaves a residual in the X slot.
  RatFunc lhs = sigma.apply(fs.cols[1][3]);
  RatFunc rhs = fs.cols[1][3] + V("a") * V("c") * fs.cols[2][3];
  EXPECT_FALSE((lhs - rhs).is_zero());
}

TEST(Sigma, RejectsPrimitives) {
  auto fs = fundamental_columns(Case::a_ne_b);
  auto sigma = sigma_for(Case::a_ne_b, V("c"));
  EXPECT_THROW(sigma.apply(TowerElem(fs.tower, fs.cols[0][1])), TowerError);
}

TEST(GammaConstants, Definitions) {
  auto g = gamma_constants(Case::a_ne_b);
  EXPECT_EQ(g.at("gamma1"), V("r") / (V("C3") * (V("a") - V("b"))));
  EXPECT_EQ(g.at("gamma2"), V("r") / V("a"));
}
