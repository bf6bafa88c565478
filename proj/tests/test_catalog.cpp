#include <gtest/gtest.h>

#include <cmath>

#include "strata/catalog.hpp"

using namespace strata;

namespace {

Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

Vec v1(double a) {
  Vec v(1);
  v << a;
  return v;
}

// Central finite differences of f, for checks at smooth points.
Vec fd_gradient(const CatalogFunction& f, const Vec& x, double h = 1e-6) {
  Vec g(x.size());
  for (int i = 0; i < x.size(); ++i) {
    Vec xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    g[i] = (f.value(xp) - f.value(xm)) / (2 * h);
  }
  return g;
}

}  // namespace

TEST(CatalogTest, KnownNamesAndErrors) {
  for (const auto& n : {"appendix_fig1", "abs_diff_sq", "two_lines_demo", "abs_power"}) {
    EXPECT_NO_THROW(catalog_get(n));
  }
  EXPECT_NO_THROW(catalog_get("abs_power(0.5)"));
  EXPECT_THROW(catalog_get("nope"), UnknownCatalogFunction);
  EXPECT_THROW(catalog_get("abs_power(x)"), UnknownCatalogFunction);
}

TEST(CatalogTest, AppendixValueMatchesHighPrecisionReference) {
  const auto& f = catalog_get("appendix_fig1");
  // Closed form evaluated with a 50-digit calculator.
  EXPECT_NEAR(f.value(v2(0.4, 5.5)), 5.6160000000000000141627220724568, 1e-12);
  EXPECT_NEAR(f.value(v2(0.25, 2.0)), 2.25625, 1e-13);
}

TEST(CatalogTest, AppendixGeometryEchoesPaperParameters) {
  // Stratification has the two vertical kink lines at x = 0 and x = c = 0.5,
  // crossing points on {y=0}, and R = 2 on K = [-2,2] x [-1,8].
  const auto& f = catalog_get("appendix_fig1");
  const auto& s = f.stratification();
  EXPECT_EQ(s.R(), 2);
  EXPECT_EQ(s.ambient_dim(), 2);
  EXPECT_DOUBLE_EQ(s.domain().lo[0], -2.0);
  EXPECT_DOUBLE_EQ(s.domain().hi[1], 8.0);
  EXPECT_EQ(s.containing_stratum(v2(0.0, 0.0)), 0);
  EXPECT_EQ(s.containing_stratum(v2(0.5, 0.0)), 1);
  EXPECT_EQ(s.containing_stratum(v2(0.5, 5.5)), 4);
  EXPECT_EQ(s.containing_stratum(v2(0.0, 5.5)), 2);
  EXPECT_EQ(s.strata().size(), 15u);
}

TEST(CatalogTest, AbsDiffSqRestrictionIsXSquared) {
  const auto& f = catalog_get("abs_diff_sq");
  for (double x : {-1.5, -0.3, 0.4, 1.9}) {
    EXPECT_NEAR(f.value(v2(x, 0.0)), x * x, 1e-15);
  }
}

TEST(CatalogSubgradient, AbsPowerSmoothPoint) {
  const auto& f = catalog_get("abs_power");  // exponent 1: f = x^2
  EXPECT_NEAR(f.subgradient(v1(0.5))[0], 1.0, 1e-15);
  EXPECT_NEAR(f.subgradient(v1(0.0))[0], 0.0, 1e-15);
}

TEST(CatalogSubgradient, AbsDiffSqKinkSelection) {
  // sign(0) = 0 termwise: v = 2(|0|-|0.3|) * (0, -sign(0.3)) = (0, 0.6).
  const auto& f = catalog_get("abs_diff_sq");
  const Vec v = f.subgradient(v2(0.0, 0.3));
  EXPECT_NEAR(v[0], 0.0, 1e-15);
  EXPECT_NEAR(v[1], 0.6, 1e-15);
}

TEST(CatalogSubgradient, MatchesFiniteDifferencesAtSmoothPoints) {
  const auto& f = catalog_get("appendix_fig1");
  const Vec p = v2(0.25, 2.0);
  EXPECT_NEAR((f.subgradient(p) - fd_gradient(f, p)).norm(), 0.0, 1e-6);

  Rng rng(101);
  for (const char* name : {"appendix_fig1", "abs_diff_sq", "two_lines_demo"}) {
    const auto& g = catalog_get(name);
    const auto& box = g.stratification().domain();
    int checked = 0;
    while (checked < 40) {
      const Vec x = v2(rng.uniform(box.lo[0] + 0.01, box.hi[0] - 0.01),
                       rng.uniform(box.lo[1] + 0.01, box.hi[1] - 0.01));
      // stay away from the kink lines so central differences are clean
      const double m = std::min({std::abs(x[0]), std::abs(x[0] - 0.5), std::abs(x[1])});
      if (m < 1e-4) continue;
      const Vec fd = fd_gradient(g, x);
      EXPECT_NEAR((g.subgradient(x) - fd).norm(), 0.0,
                  1e-5 * std::max(1.0, fd.norm()));
      ++checked;
    }
  }
}

TEST(CatalogRestricted, RayOfAbsDiffSq) {
  const auto& f = catalog_get("abs_diff_sq");
  // stratum 1 is the ray {y=0, x>0}; f restricted is x^2.
  const Vec g = f.restricted_gradient(1, v2(2.0, 0.0));
  EXPECT_NEAR(g[0], 4.0, 1e-15);
  EXPECT_NEAR(g[1], 0.0, 1e-15);
}

TEST(CatalogRestricted, ZeroDimensionalStrataHaveZeroGradient) {
  const auto& f = catalog_get("appendix_fig1");
  EXPECT_DOUBLE_EQ(f.restricted_gradient(0, v2(0, 0)).norm(), 0.0);
  EXPECT_DOUBLE_EQ(f.restricted_gradient(1, v2(0.5, 0)).norm(), 0.0);
}

TEST(CatalogRestricted, NotOnStratumSignalled) {
  const auto& f = catalog_get("abs_diff_sq");
  EXPECT_THROW(f.restricted_gradient(1, v2(2.0, 0.1)), NotOnStratum);
}

TEST(CatalogRestricted, MatchesLineFiniteDifferences) {
  // 1-D central differences of t -> f(0.5, t) along the vertical line.
  const auto& f = catalog_get("appendix_fig1");
  const double h = 1e-6;
  for (double t : {5.5, 4.0, 2.7, 0.9}) {
    const double fd = (f.value(v2(0.5, t + h)) - f.value(v2(0.5, t - h))) / (2 * h);
    const Vec g = f.restricted_gradient(4, v2(0.5, t));
    EXPECT_NEAR(g[0], 0.0, 1e-15);
    EXPECT_NEAR(g[1], fd, 1e-6 * std::max(1.0, std::abs(fd)));
  }
  // along the x = 0 line as well
  for (double t : {5.5, 3.0, 1.2}) {
    const double fd = (f.value(v2(0.0, t + h)) - f.value(v2(0.0, t - h))) / (2 * h);
    EXPECT_NEAR(f.restricted_gradient(2, v2(0.0, t))[1], fd, 1e-6 * std::max(1.0, std::abs(fd)));
  }
}

TEST(CatalogInvariants, PartitionOn200Grid) {
  for (const auto& name : catalog_names()) {
    const auto& f = catalog_get(name);
    EXPECT_TRUE(f.stratification().partition_violation(200).empty()) << name;
  }
}

TEST(CatalogInvariants, SkeletonDistanceMonotoneInDimension) {
  Rng rng(77);
  for (const auto& name : catalog_names()) {
    const auto& f = catalog_get(name);
    const auto& strat = f.stratification();
    const int first_dim = strat.active_dims().front();
    Rng local(rng.uniform_int(1, 1 << 30));
    for (int i = 0; i < 200; ++i) {
      const Vec x = strat.domain().sample(local);
      // Empty skeletons carry the dist(x, empty) = 1 convention.
      for (int j = -1; j < first_dim; ++j) {
        EXPECT_DOUBLE_EQ(strat.skeleton_distance(x, j), 1.0);
      }
      double prev = strat.skeleton_distance(x, first_dim);
      for (int j = first_dim + 1; j <= strat.ambient_dim(); ++j) {
        const double cur = strat.skeleton_distance(x, j);
        EXPECT_LE(cur, prev + 1e-12);
        prev = cur;
      }
    }
  }
}

TEST(CatalogInvariants, ProjectionFormulaResidual) {
  // sup over 1000 on-stratum samples of ||P_y v(y) - grad_X f(y)|| <= 1e-8.
  Rng rng(12345);
  for (const auto& name : catalog_names()) {
    const auto& f = catalog_get(name);
    const auto& strat = f.stratification();
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const auto& s = strat.strata()[static_cast<size_t>(
          rng.uniform_int(0, strat.size() - 1))];
      Vec y = s.sample_point(rng);
      if (!strat.domain().contains(y)) continue;
      const Vec lhs = s.tangent_projector(y) * f.subgradient(y);
      const Vec rhs = f.restricted_gradient(s.id(), y);
      worst = std::max(worst, (lhs - rhs).norm());
    }
    EXPECT_LE(worst, 1e-8) << name;
  }
}

TEST(CatalogInvariants, SubgradientBoundedByLipschitzG) {
  Rng rng(31337);
  for (const auto& name : catalog_names()) {
    const auto& f = catalog_get(name);
    double worst = 0.0;
    for (int i = 0; i < 4000; ++i) {
      worst = std::max(worst, f.subgradient(f.stratification().domain().sample(rng)).norm());
    }
    EXPECT_LE(worst, f.lipschitz_G()) << name;
    EXPECT_GT(f.lipschitz_G(), 0.0);
  }
}

TEST(CatalogInvariants, BoundaryConditionHolds) {
  for (const auto& name : catalog_names()) {
    const auto& f = catalog_get(name);
    std::string diag;
    EXPECT_TRUE(f.stratification().boundary_condition_holds(60, 9, &diag)) << name << ": " << diag;
  }
}

TEST(CatalogInvariants, StratificationJsonRoundTrip) {
  const auto& f = catalog_get("appendix_fig1");
  const std::string text = f.stratification().describe_json();
  const Stratification back = Stratification::from_json(text);
  EXPECT_EQ(back.size(), f.stratification().size());
  EXPECT_EQ(back.R(), f.stratification().R());
  Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    const Vec x = back.domain().sample(rng);
    for (const auto& s : back.strata()) {
      EXPECT_NEAR(s.distance(x), f.stratification().by_id(s.id()).distance(x), 1e-12);
    }
  }
}

TEST(CatalogInvariants, TwoLinesDemoHasRankOne) {
  const auto& f = catalog_get("two_lines_demo");
  EXPECT_EQ(f.stratification().R(), 1);
  // No zero-dimensional strata: X_0 is empty, so its distance convention is 1.
  EXPECT_DOUBLE_EQ(f.stratification().skeleton_distance(v2(0.3, 0.3), 0), 1.0);
}
