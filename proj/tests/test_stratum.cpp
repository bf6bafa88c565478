#include <gtest/gtest.h>

#include "strata/stratum.hpp"

using namespace strata;

namespace {

Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

// Central finite differences of the nearest-point projection.
Mat fd_projection_jacobian(const Stratum& s, const Vec& x, double h = 1e-6) {
  const int d = static_cast<int>(x.size());
  Mat j(d, d);
  for (int c = 0; c < d; ++c) {
    Vec xp = x, xm = x;
    xp[c] += h;
    xm[c] -= h;
    j.col(c) = (s.project(xp) - s.project(xm)) / (2 * h);
  }
  return j;
}

}  // namespace

TEST(StratumProjection, CircleRadialProjection) {
  const auto c = Stratum::circle(0, v2(0, 0), 1.0);
  const Vec p = c.project(v2(2, 0));
  EXPECT_NEAR(p[0], 1.0, 1e-15);
  EXPECT_NEAR(p[1], 0.0, 1e-15);
}

TEST(StratumProjection, PointStratumAlwaysProjectsToItself) {
  const auto s = Stratum::point(0, v2(0, 0));
  for (const Vec& x : {v2(3, -1), v2(0, 0), v2(1e6, 2)}) {
    EXPECT_EQ(s.project(x), v2(0, 0));
  }
}

TEST(StratumProjection, VerticalLineCoordinateProjection) {
  const auto line = Stratum::segment(0, v2(0.5, 0), v2(0, 1), 0.0, 8.0, true, false);
  const Vec p = line.project(v2(0.4, 5.5));
  EXPECT_DOUBLE_EQ(p[0], 0.5);
  EXPECT_DOUBLE_EQ(p[1], 5.5);
}

TEST(StratumProjection, ProjectionIsIdempotent) {
  Rng rng(3);
  const auto line = Stratum::segment(0, v2(0, 0), v2(1, 2), -4, 4, false, false);
  const auto circ = Stratum::circle(1, v2(0.2, -0.1), 0.8);
  for (int i = 0; i < 200; ++i) {
    const Vec x = v2(rng.uniform(-2, 2), rng.uniform(-2, 2));
    for (const Stratum* s : {&line, &circ}) {
      if (s->kind() == StratumKind::CircleArc && (x - v2(0.2, -0.1)).norm() < 1e-3) continue;
      const Vec p = s->project(x);
      EXPECT_NEAR((s->project(p) - p).norm(), 0.0, 1e-10);
    }
  }
}

TEST(StratumProjection, MinimalityAgainstPerturbedCandidates) {
  // Nearest point beats 32 perturbed on-stratum candidates.
  Rng rng(11);
  const auto circ = Stratum::circle(0, v2(0, 0), 1.0);
  const auto seg = Stratum::segment(1, v2(-1, 0.5), v2(1, 1), 0.0, 3.0, false, false);
  for (int i = 0; i < 50; ++i) {
    const Vec x = v2(rng.uniform(-2, 2), rng.uniform(-2, 2));
    for (const Stratum* s : {&circ, &seg}) {
      if (s->kind() == StratumKind::CircleArc && x.norm() < 1e-3) continue;
      const Vec p = s->project(x);
      const double d = (x - p).norm();
      for (int cand = 0; cand < 32; ++cand) {
        const Vec q = s->sample_point(rng);
        EXPECT_LE(d, (x - q).norm() + 1e-12);
      }
    }
  }
}

TEST(StratumProjection, OpenEndpointSignalsIllPosed) {
  // Bounded-open piece: projection landing on the excluded endpoint.
  const auto seg = Stratum::segment(0, v2(0, 0), v2(1, 0), 0.0, 1.0, true, false);
  EXPECT_THROW(seg.project(v2(-0.5, 0.2)), IllPosedProjection);
  EXPECT_NO_THROW(seg.project(v2(1.7, 0.2)));  // closed right end clamps fine
  EXPECT_THROW(Stratum::circle(1, v2(0, 0), 1.0).project(v2(0, 0)), IllPosedProjection);
}

TEST(StratumJacobian, UnitCircleClosedForms) {
  const auto c = Stratum::circle(0, v2(0, 0), 1.0);
  // Outside at radius 2: Jacobian = (1/2) diag(0,1).
  const Mat j_out = c.projection_jacobian(v2(2, 0));
  EXPECT_NEAR(j_out(0, 0), 0.0, 1e-15);
  EXPECT_NEAR(j_out(1, 1), 0.5, 1e-15);
  EXPECT_NEAR(j_out(0, 1), 0.0, 1e-15);
  EXPECT_NEAR(j_out(1, 0), 0.0, 1e-15);
  // Inside at radius 1/2: Jacobian = 2 diag(0,1).
  const Mat j_in = c.projection_jacobian(v2(0.5, 0));
  EXPECT_NEAR(j_in(1, 1), 2.0, 1e-15);
  EXPECT_NEAR(j_in(0, 0), 0.0, 1e-15);
}

TEST(StratumJacobian, CircleMatchesShapeOperatorExpression) {
  // (Id - r S)^{-1} P = (1 -/+ r/rho)^{-1} P at inside/outside offsets.
  const auto c = Stratum::circle(0, v2(0, 0), 1.0);
  const Mat p_at = c.tangent_projector(v2(1, 0));
  for (double r : {0.5, 0.25, 0.1}) {
    const Mat inside = c.projection_jacobian(v2(1.0 - r, 0));
    EXPECT_NEAR((inside - p_at / (1.0 - r)).norm(), 0.0, 1e-12);
    const Mat outside = c.projection_jacobian(v2(1.0 + r, 0));
    EXPECT_NEAR((outside - p_at / (1.0 + r)).norm(), 0.0, 1e-12);
  }
}

TEST(StratumJacobian, AffineKindsEqualTangentProjectorExactly) {
  Rng rng(5);
  const auto seg = Stratum::segment(0, v2(0.3, -1), v2(2, 1), -10, 10, false, false);
  Mat basis(2, 1);
  basis << 3.0 / 5, 4.0 / 5;
  const auto aff = Stratum::affine(1, v2(0, 0), basis);
  for (int i = 0; i < 100; ++i) {
    const Vec x = v2(rng.uniform(-3, 3), rng.uniform(-3, 3));
    EXPECT_EQ(seg.projection_jacobian(x), seg.tangent_projector(seg.project(x)));
    EXPECT_EQ(aff.projection_jacobian(x), aff.tangent_projector(aff.project(x)));
  }
}

TEST(StratumJacobian, MatchesFiniteDifferences) {
  Rng rng(19);
  const auto circ = Stratum::circle(0, v2(0.1, 0.2), 0.9);
  const auto seg = Stratum::segment(1, v2(0, 0), v2(1, -1), -5, 5, false, false);
  int checked = 0;
  for (int i = 0; i < 300; ++i) {
    const Vec x = v2(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5));
    const double off = (x - v2(0.1, 0.2)).norm();
    if (off < 0.05 || std::abs(off - 0.9) < 1e-3) continue;  // keep FD well-posed
    for (const Stratum* s : {&circ, &seg}) {
      const Mat j = s->projection_jacobian(x);
      const Mat fd = fd_projection_jacobian(*s, x);
      EXPECT_NEAR((j - fd).norm() / std::max(1.0, j.norm()), 0.0, 1e-6);
      ++checked;
    }
  }
  EXPECT_GT(checked, 100);
}

TEST(StratumJacobian, CurvatureRadiusExceededAtCenter) {
  const auto c = Stratum::circle(0, v2(0, 0), 1.0);
  EXPECT_THROW(c.projection_jacobian(v2(0, 0)), CurvatureRadiusExceeded);
}

TEST(StratumTangent, ProjectorsHaveRightRank) {
  const auto pt = Stratum::point(0, v2(1, 1));
  const auto seg = Stratum::segment(1, v2(0, 0), v2(0, 1), 0, 8, true, false);
  const auto reg = Stratum::region(2, v2(-1, -1), v2(1, 1), {false, false}, {false, false});
  const auto circ = Stratum::circle(3, v2(0, 0), 2.0);

  EXPECT_EQ(OrthoProjector::from_matrix(pt.tangent_projector(v2(1, 1))).rank(), 0);
  EXPECT_EQ(OrthoProjector::from_matrix(seg.tangent_projector(v2(0, 3))).rank(), 1);
  EXPECT_EQ(OrthoProjector::from_matrix(reg.tangent_projector(v2(0, 0))).rank(), 2);
  const Vec y = v2(2.0 * std::cos(0.7), 2.0 * std::sin(0.7));
  const auto tp = OrthoProjector::from_matrix(circ.tangent_projector(y));
  EXPECT_EQ(tp.rank(), 1);
  // tangent is orthogonal to the radial direction
  EXPECT_NEAR((tp.matrix() * y).norm(), 0.0, 1e-12);
}

TEST(StratumMembership, ExactSignTests) {
  const auto reg = Stratum::region(0, v2(0, 0), v2(1, 1), {true, true}, {false, false});
  EXPECT_TRUE(reg.contains(v2(0.5, 0.5)));
  EXPECT_FALSE(reg.contains(v2(0.0, 0.5)));  // open side
  EXPECT_TRUE(reg.contains(v2(1.0, 0.5)));   // closed side
  const auto seg = Stratum::segment(1, v2(0, 0), v2(1, 0), 0.0, 1.0, true, true);
  EXPECT_TRUE(seg.contains(v2(0.5, 0)));
  EXPECT_FALSE(seg.contains(v2(0.0, 0)));
  EXPECT_FALSE(seg.contains(v2(0.5, 0.01)));
  EXPECT_TRUE(seg.contains(v2(0.5, 1e-12), 1e-9));
}

TEST(StratumArc, ArcDistanceAndEndpoints) {
  // Quarter arc from angle 0 to pi/2, both endpoints excluded.
  const auto arc = Stratum::circle_arc(0, v2(0, 0), 1.0, 0.0, M_PI / 2, true, true);
  EXPECT_NEAR(arc.distance(v2(0.9, 0.9)), std::hypot(0.9, 0.9) - 1.0, 1e-12);
  // Off the angular range the nearest point is an endpoint.
  EXPECT_NEAR(arc.distance(v2(2.0, -1.0)), (v2(2, -1) - v2(1, 0)).norm(), 1e-12);
  EXPECT_THROW(arc.project(v2(2.0, -1.0)), IllPosedProjection);
  const Vec p = arc.project(v2(0.9, 0.9));
  EXPECT_NEAR(p.norm(), 1.0, 1e-12);
}
