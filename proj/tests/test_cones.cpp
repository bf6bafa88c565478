#include <gtest/gtest.h>

#include <cmath>

#include "strata/cones.hpp"

using namespace strata;

namespace {

Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

// The running example of the cone section: a point at the origin, the open
// ray {y = 0, x > 0}, and a full-dimensional remainder. Ranks 0/1/2, R = 2.
Stratification fig_cones() {
  std::vector<Stratum> strata;
  strata.push_back(Stratum::point(0, v2(0, 0)));
  strata.push_back(Stratum::segment(1, v2(0, 0), v2(1, 0), 0.0, 10.0, true, false));
  strata.push_back(Stratum::region(2, v2(-10, -10), v2(10, 10), {false, false}, {false, false}));
  return Stratification(std::move(strata), Box{v2(-10, -10), v2(10, 10)});
}

NeighborhoodParams desk_params(double gamma, int R) {
  NeighborhoodParams p;
  p.alpha = 1.0 / 12;
  p.beta = 0.25;
  p.gamma = gamma;
  p.gamma0 = 0.1;
  p.R = R;
  p.constants = FrozenConstants{1.0, 1.0, 1.0, 1.0, 1.0, 1.0};
  return p;
}

}  // namespace

TEST(ParamsTest, AutoExponentsFollowCorollaryRule) {
  const auto& f = catalog_get("appendix_fig1");
  const auto p = NeighborhoodParams::auto_for(f, 0.01);
  EXPECT_EQ(p.R, 2);
  EXPECT_DOUBLE_EQ(p.beta, 0.25);
  EXPECT_DOUBLE_EQ(p.alpha, 0.25 / 3.0);
  EXPECT_TRUE(p.hard_violations().empty());
  EXPECT_NO_THROW(p.require_valid());

  const auto& g = catalog_get("two_lines_demo");
  EXPECT_DOUBLE_EQ(NeighborhoodParams::auto_for(g, 0.001).beta, 1.0 / 3.0);
}

TEST(ParamsTest, HardViolationsAreNamed) {
  auto p = desk_params(0.01, 2);
  p.alpha = 0.5;  // alpha >= beta
  const auto v = p.hard_violations();
  ASSERT_FALSE(v.empty());
  EXPECT_NE(v.front().find("alpha < beta"), std::string::npos);
  EXPECT_THROW(p.require_valid(), ConfigError);

  auto q = desk_params(0.2, 2);  // gamma >= gamma0
  EXPECT_FALSE(q.hard_violations().empty());

  auto r = desk_params(0.01, 3);  // (R+1)*beta = 1
  EXPECT_FALSE(r.hard_violations().empty());
}

TEST(ParamsTest, DerivedConstantsMatchFormulas) {
  auto p = desk_params(0.01, 2);
  p.constants.lambda_lo = 0.5;
  p.constants.lambda_hi = 2.0;
  p.constants.L2 = 3.0;
  EXPECT_DOUBLE_EQ(p.A1(), 0.5 / (16.0 * 4.0));
  EXPECT_DOUBLE_EQ(p.A2(), 9.0 * (4.0 * 4.0 / 0.5 + 0.25));
}

TEST(ParamsTest, TheoryTightSatisfiesEverySmallnessInequality) {
  for (const auto& name : catalog_names()) {
    const auto p = NeighborhoodParams::theory_tight(catalog_get(name));
    EXPECT_TRUE(p.hard_violations().empty()) << name;
    EXPECT_TRUE(p.theory_violations().empty()) << name;
    EXPECT_NO_THROW(p.require_valid(/*strict=*/true));
  }
  // Desk-scale parameters violate the smallness system but resolve non-strict.
  const auto desk = NeighborhoodParams::auto_for(catalog_get("appendix_fig1"), 0.01);
  EXPECT_FALSE(desk.theory_violations().empty());
  EXPECT_NO_THROW(desk.require_valid());
  EXPECT_THROW(desk.require_valid(/*strict=*/true), ConfigError);
}

TEST(ParamsTest, JsonRoundTrip) {
  const auto p = desk_params(0.01, 2);
  const auto q = NeighborhoodParams::from_json(p.to_json());
  EXPECT_DOUBLE_EQ(q.alpha, p.alpha);
  EXPECT_DOUBLE_EQ(q.gamma, p.gamma);
  EXPECT_DOUBLE_EQ(q.constants.G, p.constants.G);
  EXPECT_EQ(q.R, p.R);
}

TEST(ConesTest, InnerOuterThresholdArithmetic) {
  // gamma = 0.01, beta = 1/4, alpha = 1/12, ray of rank 1:
  // inner threshold = 0.01^{1/4} * min{0.01^{1/4}, ~1} = 0.1
  // outer threshold = 0.01^{1/12} * 0.01^{1/4}        = 0.01^{1/3} ~ 0.2154
  const Stratification strat = fig_cones();
  const auto p = desk_params(0.01, 2);
  const Stratum& ray = strat.by_id(1);

  EXPECT_TRUE(in_inner(v2(1.0, 1e-4), ray, strat, p));
  EXPECT_TRUE(in_outer(v2(1.0, 1e-4), ray, strat, p));

  EXPECT_FALSE(in_inner(v2(1.0, 0.2), ray, strat, p));
  EXPECT_TRUE(in_outer(v2(1.0, 0.2), ray, strat, p));
  // just beyond the outer threshold 0.21544346900318837
  EXPECT_FALSE(in_outer(v2(1.0, 0.2160), ray, strat, p));

  // on the stratum: both memberships hold
  EXPECT_TRUE(in_inner(v2(1.0, 0.0), ray, strat, p));
  EXPECT_TRUE(in_outer(v2(1.0, 0.0), ray, strat, p));
}

TEST(ConesTest, WellposedUsesTruncatedSkeletonDistance) {
  const Stratification strat = fig_cones();
  const auto p = desk_params(0.01, 2);
  const Stratum& ray = strat.by_id(1);
  // dist to the ray 0.3, truncdist to the origin 1 -> 0.3 > A3 = 0.25.
  EXPECT_FALSE(in_wellposed(v2(5.0, 0.3), ray, strat, p));
  EXPECT_TRUE(in_wellposed(v2(5.0, 0.2), ray, strat, p));
  EXPECT_TRUE(in_wellposed(v2(5.0, 0.0), ray, strat, p));
}

TEST(ConesTest, FullDimensionalStrataUseAnalyticMembership) {
  const Stratification strat = fig_cones();
  const auto p = desk_params(0.01, 2);
  const Stratum& region = strat.by_id(2);
  EXPECT_TRUE(in_inner(v2(3, 3), region, strat, p));
  EXPECT_TRUE(in_outer(v2(3, 3), region, strat, p));
  EXPECT_TRUE(in_wellposed(v2(3, 3), region, strat, p));
  EXPECT_FALSE(in_inner(v2(11, 0), region, strat, p));
}

TEST(ConesTest, UnionQuantifiers) {
  const Stratification strat = fig_cones();
  const auto p = desk_params(0.01, 2);
  // The union below dimension 0 is empty by convention.
  EXPECT_FALSE(in_inner_union(v2(0, 0), strat, p, Quant::Lt, 0));
  EXPECT_FALSE(in_outer_union(v2(0, 0), strat, p, Quant::Lt, 0));
  // x in the inner cone of exactly one 1-dimensional stratum.
  EXPECT_TRUE(in_inner_union(v2(1.0, 1e-4), strat, p, Quant::Eq, 1));
  // far from every stratum of dimension < 2
  EXPECT_FALSE(in_inner_union(v2(5, 5), strat, p, Quant::Lt, 2));
  EXPECT_FALSE(in_outer_union(v2(5, 5), strat, p, Quant::Lt, 2));
  // Le combines both lower classes.
  EXPECT_TRUE(in_inner_union(v2(1.0, 1e-4), strat, p, Quant::Le, 1));
  EXPECT_TRUE(in_inner_union(v2(0.0, 1e-3), strat, p, Quant::Le, 0));
}

TEST(ConesTest, GeomItemExamples) {
  const Stratification strat = fig_cones();
  const auto p = desk_params(0.01, 2);
  const Stratum& ray = strat.by_id(1);

  // Item 1: inner membership forces dist <= gamma^{(1+rank)beta} = 0.1.
  auto rep = geom_items(v2(1.0, 1e-4), v2(5, 5), ray, strat, p);
  EXPECT_TRUE(rep.item1.hypothesis);
  EXPECT_TRUE(rep.item1.conclusion);
  EXPECT_TRUE(rep.item2.hypothesis && rep.item2.conclusion);

  // Item 3: outside every lower inner cone, skeleton distance >= gamma^{rank*beta}.
  EXPECT_TRUE(rep.item3.hypothesis);
  EXPECT_NEAR(rep.item3_bound, std::pow(0.01, 0.25), 1e-15);
  EXPECT_GE(rep.item3_dist, rep.item3_bound);

  // Item 6 with a violated hypothesis is vacuously satisfied.
  auto far = geom_items(v2(5, 5), v2(5.4, 5.2), ray, strat, p);
  EXPECT_FALSE(far.item6.hypothesis);
  EXPECT_TRUE(far.item6.holds());
  EXPECT_TRUE(far.all_hold());
}

TEST(ConesTest, SkeletonLowerBoundExamples) {
  // Derived arithmetic: gamma0 = 0.1, gamma = 0.05, R = 1, beta = 1/4 gives
  // bound = 0.05^{3/4} / 0.1^{1/2} = 0.334370152488211.
  const double bound = std::pow(0.05, 0.75) / std::pow(0.1, 0.5);
  EXPECT_NEAR(bound, 0.334370152488211, 1e-14);

  const auto& f = catalog_get("two_lines_demo");
  NeighborhoodParams p;
  p.alpha = 0.25 / 3;
  p.beta = 0.25;
  p.gamma = 0.05;
  p.gamma0 = 0.1;
  p.R = 1;
  p.constants = f.frozen_constants();
  // Rank-0 stratum with empty lower skeleton: min{1, dist(x, empty)} = 1.
  const double m =
      skeleton_lower_bound(v2(0.7, 0.2), f.stratification().by_id(0), f.stratification(), p);
  EXPECT_DOUBLE_EQ(m, 1.0);
  EXPECT_GE(m, bound);

  // Precondition violated: x on a lower stratum.
  const Stratification cones = fig_cones();
  auto q = desk_params(0.01, 2);
  EXPECT_THROW(skeleton_lower_bound(v2(0, 0), cones.by_id(1), cones, q), PreconditionViolated);
}

TEST(ConesTest, NestingUnderSmallGamma) {
  // inner => outer always (gamma < 1); outer => wellposed once gamma^alpha <= A3.
  const Stratification strat = fig_cones();
  auto p = desk_params(1e-8, 2);
  p.gamma0 = 1e-7;
  ASSERT_LE(std::pow(p.gamma, p.alpha), p.A3);
  Rng rng(99);
  for (int i = 0; i < 2000; ++i) {
    Vec x;
    if (i % 2 == 0) {
      x = v2(rng.uniform(-5, 5), rng.uniform(-5, 5));
    } else {
      x = v2(rng.uniform(0, 5), rng.uniform(-1e-3, 1e-3));
    }
    for (const auto& s : strat.strata()) {
      const bool inner = in_inner(x, s, strat, p);
      const bool outer = in_outer(x, s, strat, p);
      const bool wp = in_wellposed(x, s, strat, p);
      EXPECT_TRUE(!inner || outer);
      EXPECT_TRUE(!outer || wp);
    }
  }
}

TEST(ConesTest, ThresholdsMonotoneInGamma) {
  const Stratification strat = fig_cones();
  Rng rng(4);
  for (int i = 0; i < 500; ++i) {
    const Vec x = v2(rng.uniform(0, 3), rng.uniform(-0.5, 0.5));
    const double g_small = 1e-4, g_large = 1e-2;
    for (const auto& s : strat.strata()) {
      auto ps = desk_params(g_small, 2);
      auto pl = desk_params(g_large, 2);
      if (in_inner(x, s, strat, ps)) EXPECT_TRUE(in_inner(x, s, strat, pl));
      if (in_outer(x, s, strat, ps)) EXPECT_TRUE(in_outer(x, s, strat, pl));
    }
  }
}

TEST(ConesTest, VaryingParamsFreezePerInterval) {
  NeighborhoodParams base = desk_params(0.01, 2);

  // Constant schedule: single interval, frozen gamma equals the constant.
  const auto cs = StepSchedule::constant(0.01);
  const auto civ = doubling_intervals(cs, 1, 100);
  ASSERT_EQ(civ.size(), 1u);
  EXPECT_DOUBLE_EQ(varying_params(base, cs, civ, 0).gamma, 0.01);

  // Strictly halving: singleton intervals, frozen at the next start.
  std::vector<double> halving;
  for (int k = 0; k < 6; ++k) halving.push_back(0.08 / std::pow(2.0, k));
  const auto hs = StepSchedule::explicit_list(halving);
  const auto hiv = doubling_intervals(hs, 1, 6);
  ASSERT_EQ(hiv.size(), 6u);
  for (int i = 0; i + 1 < 6; ++i) {
    EXPECT_DOUBLE_EQ(varying_params(base, hs, hiv, i).gamma, halving[static_cast<size_t>(i + 1)]);
  }
  EXPECT_DOUBLE_EQ(varying_params(base, hs, hiv, 5).gamma, halving[5]);

  // gamma_k = c/k with k(1) = 1: the second interval starts at k = 2.
  const auto is = StepSchedule::inverse_k(0.04);
  const auto iiv = doubling_intervals(is, 1, 8);
  ASSERT_GE(iiv.size(), 2u);
  EXPECT_EQ(iiv[1].lo, 2);
  EXPECT_DOUBLE_EQ(varying_params(base, is, iiv, 0).gamma, 0.04 / 2.0);
}
