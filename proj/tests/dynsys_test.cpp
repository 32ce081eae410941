#include <gtest/gtest.h>

#include "seirint/dynsys.hpp"
#include "test_util.hpp"

using namespace seirint;

namespace {

RatFunc V(std::string_view n) { return RatFunc::var(n); }

VectorField field(std::vector<std::string> vars, std::vector<RatFunc> comps) {
  VectorField f;
  for (auto& v : vars) f.vars.emplace_back(v);
  f.comps = std::move(comps);
  return f;
}

}  // namespace

TEST(Catalog, Shapes) {
  auto si = catalog("si");
  ASSERT_EQ(si.dim(), 2u);
  EXPECT_EQ(si.comps[0], -V("r") * V("S") * V("I"));
  EXPECT_EQ(si.comps[1], V("r") * V("S") * V("I") - V("a") * V("I"));
  EXPECT_EQ(catalog("sei").dim(), 3u);
  auto ext = catalog("seir_ext");
  ASSERT_EQ(ext.dim(), 6u);
  EXPECT_EQ(ext.comps[5], -(V("r") * V("r") / V("a")) * V("S") * V("I") * V("Z"));
  EXPECT_THROW(catalog("nope"), std::invalid_argument);
  EXPECT_THROW(catalog("seir_ext", {{"a", Rat(0)}}), std::domain_error);
}

TEST(Catalog, LoadFromBindings) {
  auto f = load_system("# SI\nS = -r*S*I\nI = r*S*I - a*I\n");
  auto si = catalog("si");
  ASSERT_EQ(f.dim(), 2u);
  EXPECT_EQ(f.comps, si.comps);
  EXPECT_THROW(load_system("S = exp(S)"), ParseError);
  EXPECT_THROW(load_system("# nothing"), std::invalid_argument);
}

TEST(Jacobian, Entries) {
  EXPECT_EQ(jacobian(catalog("si"))[0][1], -V("r") * V("S"));
  EXPECT_EQ(jacobian(catalog("seir_ext"))[3][2], -V("r") * V("X"));
  auto j = jacobian(field({"x", "y"}, {RatFunc(3), V("a")}));
  for (auto& row : j)
    for (auto& e : row) EXPECT_TRUE(e.is_zero());
}

TEST(LieBracket, Examples) {
  auto ext = catalog("seir_ext");
  EXPECT_TRUE(is_zero(lie_bracket(ext, ext)));
  EXPECT_TRUE(is_zero(lie_bracket(ext, scaling_field(ext, "X"))));
  // f = (x, 0), g = (0, x): Dg f - Df g = (0, x) - (0, 0).
  auto br = lie_bracket(field({"x", "y"}, {V("x"), RatFunc(0)}), field({"x", "y"}, {RatFunc(0), V("x")}));
  EXPECT_TRUE(br.comps[0].is_zero());
  EXPECT_EQ(br.comps[1], V("x"));
  EXPECT_THROW(lie_bracket(catalog("si"), catalog("sei")), std::invalid_argument);
}

TEST(LieBracket, AuxiliaryFieldsCommute) {
  auto ext = catalog("seir_ext");
  std::vector<VectorField> fs{ext, scaling_field(ext, "X"), scaling_field(ext, "Y"), scaling_field(ext, "Z")};
  for (std::size_t i = 0; i < fs.size(); ++i)
    for (std::size_t j = 0; j < fs.size(); ++j) EXPECT_TRUE(is_zero(lie_bracket(fs[i], fs[j])));
  std::map<std::string, Rat> point{{"S", Rat(1, 3)}, {"E", Rat(2, 5)}, {"I", Rat(3, 7)}, {"X", Rat(2)},
                                   {"Y", Rat(3)},    {"Z", Rat(5)},    {"a", Rat(1)},    {"b", Rat(2)},
                                   {"r", Rat(3, 2)}};
  EXPECT_EQ(rank_at(fs, point), 4u);
}

TEST(FirstIntegral, Examples) {
  auto f2 = first_integral_residual("S*exp(-(r/a)*(S+E+I))", catalog("sei"));
  EXPECT_TRUE(f2.second.is_zero());
  EXPECT_TRUE(first_integral_residual("S+E+I+R", catalog("seir")).second.is_zero());
  auto sei_sum = first_integral_residual("S+E+I", catalog("sei"));
  EXPECT_EQ(sei_sum.second, -V("a") * V("I"));
  EXPECT_TRUE(first_integral_residual("S+E+I", catalog("sei"), {{"a", Rat(0)}}).second.is_zero());
}

TEST(FirstIntegral, KnownClaims) {
  for (const char* id : {"F1", "F2", "F2_sei", "F1_a0"}) EXPECT_TRUE(check_claim(find_claim(id)).second.is_zero()) << id;
  // F3 with b = -a is not conserved; hand expansion gives a(a+1) I (1 - E - I).
  auto f3 = check_claim(find_claim("F3")).second;
  EXPECT_EQ(f3, V("a") * (V("a") + 1) * V("I") * (RatFunc(1) - V("E") - V("I")));
}

TEST(ParticularSolution, PlaneSolutions) {
  for (Case c : {Case::a_ne_b, Case::a_eq_b}) {
    auto res = verify_particular_solution(plane_solution(c), plane_system(c));
    EXPECT_TRUE(all_zero(res)) << case_name(c);
  }
}

TEST(ParticularSolution, ExtendedSolution) {
  auto sol = extended_solution();
  EXPECT_TRUE(all_zero(verify_particular_solution(sol, catalog("seir_ext"))));
  auto eq = catalog("seir_ext").subst({{Symbol("b").id(), V("a")}});
  EXPECT_TRUE(all_zero(verify_particular_solution(sol, eq)));
}

TEST(ParticularSolution, NegativeControls) {
  auto sol = plane_solution(Case::a_ne_b);
  sol.values["E"] = V("C1") * V("tha");
  EXPECT_FALSE(all_zero(verify_particular_solution(sol, plane_system(Case::a_ne_b))));
  auto ext = extended_solution();
  ext.values["X"] = V("thX") * V("thX");
  EXPECT_FALSE(all_zero(verify_particular_solution(ext, catalog("seir_ext"))));
  ext.values.erase("Y");
  EXPECT_THROW(verify_particular_solution(ext, catalog("seir_ext")), std::invalid_argument);
}

// ---- properties -----------------------------------------------------------

class DynsysProperty : public ::testing::TestWithParam<unsigned> {
 protected:
  VectorField random_field(RandomPolys& gen) {
    VectorField f;
    f.vars = {Symbol("x"), Symbol("y"), Symbol("z")};
    for (int i = 0; i < 3; ++i) f.comps.push_back(RatFunc(gen.poly(3, 2)));
    return f;
  }
};

TEST_P(DynsysProperty, BracketAlgebra) {
  RandomPolys gen(GetParam(), {"x", "y", "z"});
  for (int i = 0; i < 3; ++i) {
    auto f = random_field(gen), g = random_field(gen), h = random_field(gen);
    auto fg = lie_bracket(f, g), gf = lie_bracket(g, f);
    for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(fg.comps[k], -gf.comps[k]);

    RatFunc al(gen.coeff()), be(gen.coeff());
    VectorField comb = f;
    for (std::size_t k = 0; k < 3; ++k) comb.comps[k] = al * f.comps[k] + be * h.comps[k];
    auto lhs = lie_bracket(comb, g);
    auto fgb = lie_bracket(f, g), hgb = lie_bracket(h, g);
    for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(lhs.comps[k], al * fgb.comps[k] + be * hgb.comps[k]);

    auto j1 = lie_bracket(f, lie_bracket(g, h)), j2 = lie_bracket(g, lie_bracket(h, f)),
         j3 = lie_bracket(h, lie_bracket(f, g));
    for (std::size_t k = 0; k < 3; ++k) EXPECT_TRUE((j1.comps[k] + j2.comps[k] + j3.comps[k]).is_zero());
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, DynsysProperty, ::testing::Values(31u, 32u, 33u));
