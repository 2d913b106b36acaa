#include "trs/errors.hpp"
#include "trs/generators.hpp"
#include "trs/oracle.hpp"
#include "trs/trse_solvers.hpp"

#include <gtest/gtest.h>

using namespace trs;

TEST(Generators, Examples) {
  const TrsProblem e1 = example1();
  EXPECT_EQ(e1.op.to_dense().diagonal(), (Vector(2) << -13, 13).finished());
  EXPECT_EQ(e1.c, (Vector(2) << -250.0 / 169.0, 3456.0 / 169.0).finished());
  const TrsProblem e2 = example2(0.01);
  EXPECT_DOUBLE_EQ(e2.op.to_dense()(1, 1), -13.0 + 0.02);
  EXPECT_DOUBLE_EQ(e2.c(1), -0.02 * std::sqrt(165.0) / 13.0);
  const TrseProblem e3 = example3();
  EXPECT_EQ(e3.c, (Vector(2) << -4, 9).finished());
  EXPECT_EQ(std::get<TrsProblem>(generate(InstanceKind::Example1, 0, 0)).c, e1.c);
}

TEST(Generators, ParseKind) {
  EXPECT_EQ(parse_instance_kind("hard2"), InstanceKind::Hard2);
  EXPECT_EQ(to_string(InstanceKind::Ill), "ill");
  EXPECT_THROW(parse_instance_kind("medium"), InputError);
  EXPECT_THROW(generate(InstanceKind::Easy, 0, 1), InputError);
}

TEST(Generators, ProduceTheClaimedCase) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const std::size_t n = 2 + seed % 9;
    EXPECT_EQ(classify_case(std::get<TrsProblem>(generate(InstanceKind::Easy, n, seed))).kind, CaseKind::Easy);
    EXPECT_EQ(classify_case(std::get<TrsProblem>(generate(InstanceKind::Hard2, n, seed))).kind, CaseKind::HardII);
    EXPECT_EQ(classify_case(std::get<TrsProblem>(generate(InstanceKind::Ill, n, seed))).kind, CaseKind::Ill);
    EXPECT_TRUE(classify_case(std::get<TrsProblem>(generate(InstanceKind::Convex, n, seed))).interior);
    const AnyProblem scalar = generate(InstanceKind::Scalar, n, seed);
    EXPECT_EQ(constraint_of(scalar), Constraint::Sphere);
    EXPECT_TRUE(is_scalar_operator(data_of(scalar).op));
    EXPECT_FALSE(is_scalar_operator(data_of(generate(InstanceKind::Sphere, n, seed)).op));
  }
}

TEST(Generators, Deterministic) {
  const AnyProblem a = generate(InstanceKind::Hard2, 6, 42);
  const AnyProblem b = generate(InstanceKind::Hard2, 6, 42);
  EXPECT_EQ(data_of(a).op.to_dense(), data_of(b).op.to_dense());
  EXPECT_EQ(data_of(a).c, data_of(b).c);
  EXPECT_NE(data_of(a).c, data_of(generate(InstanceKind::Hard2, 6, 43)).c);
}

TEST(Generators, IllHitsUnitPseudoinverseNorm) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto p = std::get<TrsProblem>(generate(InstanceKind::Ill, 5, seed));
    const Spectrum& s = p.op.spectrum();
    EXPECT_NEAR(pinv_apply(s, -s.lambda_min(), p.c).x.norm(), 1.0, 1e-12);
  }
}
