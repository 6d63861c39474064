#include <gtest/gtest.h>

#include "mwc/curve_lift.hpp"
#include "mwc/errors.hpp"
#include "mwc/factorizers.hpp"
#include "support.hpp"

using namespace mwc;
using namespace mwc::testing;

namespace {

CMatrix x1(Complex a) {
  CMatrix m = CMatrix::Identity(2, 2);
  m(0, 1) = a;
  return m;
}

CMatrix x2(Complex b) {
  CMatrix m = CMatrix::Identity(2, 2);
  m(1, 0) = b;
  return m;
}

/// A point of the 121212 fiber over g: random leading 12, then 1212 solves the rest.
ParamPoint planted_121212(const CMatrix& g, Rng& rng) {
  const Complex a = rng.complex_normal(), b = rng.complex_normal();
  const Factorization rest = sl2_1212((x1(a) * x2(b)).inverse() * g);
  ParamPoint p = {CVector::Constant(1, a), CVector::Constant(1, b)};
  p.insert(p.end(), rest.params.begin(), rest.params.end());
  return p;
}

}  // namespace

TEST(LiftCurve, ShearPathStaysOnTheCurve) {
  const auto sl2 = catalog_sl2();
  const Word w = Word::parse(sl2, "1212");
  const TargetCurve c = builtin_curve("shear-path");
  const PathLift lift = lift_curve(w, c, unit_point(w), 100);
  ASSERT_EQ(lift.nodes.size(), 101u);
  EXPECT_LT(lift.max_residual, 1e-8);
  EXPECT_TRUE(lift.suspected_jumps.empty());
  for (const auto& node : lift.nodes) EXPECT_LT((evaluate(w, node.params) - c.evaluation(node.t)).norm(), 1e-8);
  EXPECT_DOUBLE_EQ(lift.nodes.back().t, 1.0);
}

TEST(LiftCurve, RefinementDoesNotMoveNodes) {
  const Word w = Word::parse(catalog_sl2(), "1212");
  const TargetCurve c = builtin_curve("shear-path");
  const PathLift a = lift_curve(w, c, unit_point(w), 50);
  const PathLift b = lift_curve(w, c, unit_point(w), 100);
  for (std::size_t k = 0; k < a.nodes.size(); ++k)
    EXPECT_LT((flatten(a.nodes[k].params) - flatten(b.nodes[2 * k].params)).norm(), 1e-4);
}

TEST(LiftCurve, ConstantCurveDoesNotMove) {
  const Word w = Word::parse(catalog_sl2(), "121");
  const TargetCurve c = builtin_curve("constant");
  const ParamPoint start = sl2_121(c.evaluation(0)).params;
  const PathLift lift = lift_curve(w, c, start, 20);
  for (const auto& node : lift.nodes) EXPECT_LT((flatten(node.params) - flatten(start)).norm(), 1e-9);
}

TEST(LiftCurve, CrossLocusFailsNearTheCrossing) {
  const Word w = Word::parse(catalog_sl2(), "121");
  const TargetCurve c = builtin_curve("cross-locus");
  EXPECT_NEAR(std::abs(c.evaluation(cross_locus_crossing())(1, 0)), 0.0, 1e-15);
  try {
    lift_curve(w, c, sl2_121(c.evaluation(0)).params, 100);
    FAIL() << "tracked through the excluded locus";
  } catch (const TrackingFailure& e) {
    EXPECT_NEAR(e.t(), cross_locus_crossing(), 0.05);
  }
}

TEST(LiftCurve, StartMismatchAndBadArguments) {
  const Word w = Word::parse(catalog_sl2(), "1212");
  const TargetCurve c = builtin_curve("constant");
  EXPECT_THROW(lift_curve(w, c, unit_point(w), 10), std::invalid_argument);
  EXPECT_THROW(lift_curve(w, builtin_curve("shear-path"), unit_point(w), 1), std::invalid_argument);
  EXPECT_THROW(builtin_curve("spiral"), std::invalid_argument);
  EXPECT_EQ(builtin_curve_names().size(), 3u);
}

TEST(LiftBetween, ConnectsPlantedEndpointsOf121212) {
  const auto sl2 = catalog_sl2();
  const Word w = Word::parse(sl2, "121212");
  const TargetCurve c{[](double t) { return x1(t); }, "x1(t)", sl2->group};
  Rng rng(61);
  int connected = 0;
  for (int trial = 0; trial < 5; ++trial) {
    const ParamPoint start = planted_121212(c.evaluation(0), rng);
    const ParamPoint end = planted_121212(c.evaluation(1), rng);
    const PathLift lift = lift_between(w, c, start, end, 50);
    EXPECT_TRUE(lift.connection_attempted);
    EXPECT_LT(lift.max_residual, 1e-8);
    connected += lift.connected ? 1 : 0;
  }
  EXPECT_GE(connected, 4);
}

TEST(LiftBetween, SamePointIsConnected) {
  const auto sl2 = catalog_sl2();
  const Word w = Word::parse(sl2, "1212");
  const TargetCurve c = builtin_curve("constant");
  const ParamPoint p = sl2_1212(c.evaluation(0)).params;
  const PathLift lift = lift_between(w, c, p, p, 10);
  EXPECT_TRUE(lift.connected) << lift.connection_note;
}

TEST(ConnectInFiber, TwoLinesOf1212AreNotJoinedByAStraightPath) {
  const Word w = Word::parse(catalog_sl2(), "1212");
  ParamPoint a = unit_point(w), b = unit_point(w);
  a[0](0) = 1.0;
  a[2](0) = -1.0;
  b[1](0) = 1.0;
  b[3](0) = -1.0;
  std::string note;
  EXPECT_FALSE(connect_in_fiber(w, CMatrix::Identity(2, 2), a, b, Tolerances{}, &note));
  EXPECT_FALSE(note.empty());
  // Along one line the straight path is itself on the fiber.
  ParamPoint far = unit_point(w);
  far[0](0) = 4.0;
  far[2](0) = -4.0;
  EXPECT_TRUE(connect_in_fiber(w, CMatrix::Identity(2, 2), a, far, Tolerances{}, &note)) << note;
}

TEST(SampledCurve, InterpolatesAndProjects) {
  const auto sl2 = catalog_sl2();
  CMatrix g1(2, 2);
  g1 << 3, 10, 2, 7;
  const TargetCurve c = sampled_curve({{0.0, CMatrix::Identity(2, 2)}, {1.0, g1}}, sl2->group);
  EXPECT_LT((c.evaluation(0) - CMatrix::Identity(2, 2)).norm(), 1e-12);
  EXPECT_LT((c.evaluation(1) - g1).norm(), 1e-12);
  for (double t : {0.1, 0.5, 0.9}) EXPECT_LT(std::abs(c.evaluation(t).determinant() - 1.0), 1e-10);

  EXPECT_THROW(sampled_curve({{0.0, g1}, {0.0, g1}, {1.0, g1}}, sl2->group), std::invalid_argument);
  EXPECT_THROW(sampled_curve({{0.0, g1}, {0.5, g1}}, sl2->group), std::invalid_argument);
  EXPECT_THROW(sampled_curve({{0.0, g1}, {1.0, CMatrix::Identity(3, 3)}}, sl2->group), std::invalid_argument);
}

TEST(ProjectToGroup, LandsInTheGroup) {
  Rng rng(62);
  const auto sp = catalog_sp2n(2, 0);
  for (int i = 0; i < 5; ++i) {
    const CMatrix g = sp->letter("1").chart(pack_symmetric(random_symmetric(rng, 2))) *
                      sp->letter("2").chart(pack_symmetric(random_symmetric(rng, 2)));
    const CMatrix noisy = g + 1e-4 * random_matrix(rng, 4, 4);
    const CMatrix p = project_to_group(noisy, sp->group);
    EXPECT_LT(sp->group.membership_residual(p), 1e-10);
    EXPECT_LT((p - g).norm(), 1e-2);
  }
  CMatrix m(2, 2);
  m << 2, 0, 0, 1;
  EXPECT_LT(std::abs(project_to_group(m, catalog_sl2()->group).determinant() - 1.0), 1e-12);
  EXPECT_EQ(project_to_group(m, catalog_gln(2)->group), m);
}
