#include <gtest/gtest.h>

#include "strata/geometry.hpp"
#include "strata/stratification.hpp"

using namespace strata;

namespace {

Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

}  // namespace

TEST(OrthoProjectorTest, AcceptsDiagonalProjectors) {
  Mat m = Mat::Zero(2, 2);
  m(0, 0) = 1.0;
  const auto p = OrthoProjector::from_matrix(m);
  EXPECT_EQ(p.rank(), 1);
  const Vec out = project_subspace(p, v2(2, 3));
  EXPECT_DOUBLE_EQ(out[0], 2.0);
  EXPECT_DOUBLE_EQ(out[1], 0.0);
}

TEST(OrthoProjectorTest, IdentityIsAProjector) {
  const auto p = OrthoProjector::from_matrix(Mat::Identity(3, 3));
  EXPECT_EQ(p.rank(), 3);
  const Vec v = (Vec(3) << 1, -2, 0.5).finished();
  EXPECT_NEAR((project_subspace(p, v) - v).norm(), 0.0, 0.0);
}

TEST(OrthoProjectorTest, SecondAxisProjector) {
  Mat m = Mat::Zero(2, 2);
  m(1, 1) = 1.0;
  const Vec out = project_subspace(OrthoProjector::from_matrix(m), v2(2, 3));
  EXPECT_DOUBLE_EQ(out[0], 0.0);
  EXPECT_DOUBLE_EQ(out[1], 3.0);
}

TEST(OrthoProjectorTest, RejectsNonProjectors) {
  Mat skew(2, 2);
  skew << 0, 1, -1, 0;
  EXPECT_THROW(OrthoProjector::from_matrix(skew), NotAProjector);
  Mat scale = 2.0 * Mat::Identity(2, 2);
  EXPECT_THROW(OrthoProjector::from_matrix(scale), NotAProjector);
  Mat nonsym(2, 2);
  nonsym << 1, 0.5, 0, 0;
  EXPECT_THROW(OrthoProjector::from_matrix(nonsym), NotAProjector);
}

TEST(OrthoProjectorTest, RandomSubspaceProjectorsPassStructuralChecks) {
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const int d = rng.uniform_int(2, 5);
    const Vec u = rng.unit_vector(d);
    const Mat p = u * u.transpose();
    const auto op = OrthoProjector::from_matrix(p);
    EXPECT_EQ(op.rank(), 1);
    EXPECT_LE((p * p - p).norm(), kProjectorIdempotenceTol);
    EXPECT_LE((p - p.transpose()).norm(), kProjectorSymmetryTol);
    // idempotence of application
    const Vec v = rng.unit_vector(d);
    EXPECT_NEAR((op.apply(op.apply(v)) - op.apply(v)).norm(), 0.0, 1e-12);
  }
}

TEST(DistanceTest, PointSetExamples) {
  const auto s = Stratum::point(0, v2(0, 0));
  EXPECT_DOUBLE_EQ(s.distance(v2(3, 4)), 5.0);
  EXPECT_DOUBLE_EQ(truncate_unit(s.distance(v2(3, 4))), 1.0);

  const auto line = Stratum::segment(1, v2(0, 0), v2(0, 1), -100, 100, false, false);
  EXPECT_NEAR(line.distance(v2(0.3, 7)), 0.3, 1e-15);
  EXPECT_NEAR(truncate_unit(line.distance(v2(0.3, 7))), 0.3, 1e-15);
}

TEST(DistanceTest, EmptySetConvention) {
  // dist(x, empty) = 1: the skeleton below every dimension is empty.
  std::vector<Stratum> strata;
  strata.push_back(Stratum::region(0, v2(-1, -1), v2(1, 1), {false, false}, {false, false}));
  Stratification s(std::move(strata), Box{v2(-1, -1), v2(1, 1)});
  EXPECT_DOUBLE_EQ(s.skeleton_distance(v2(0.5, 0.5), -1), 1.0);
  EXPECT_DOUBLE_EQ(s.skeleton_distance(v2(0.5, 0.5), 0), 1.0);
  EXPECT_DOUBLE_EQ(s.skeleton_distance(v2(0.5, 0.5), 1), 1.0);
  // truncdist(x, empty) = min(1, 1) = 1
  EXPECT_DOUBLE_EQ(truncate_unit(s.skeleton_distance(v2(0.5, 0.5), -1)), 1.0);
}

TEST(DistanceTest, DistIsOneLipschitz) {
  Rng rng(42);
  const auto line = Stratum::segment(0, v2(0.2, -0.3), v2(3, 4), -5, 5, false, false);
  const auto circ = Stratum::circle(1, v2(0.5, 0.5), 1.25);
  for (int i = 0; i < 500; ++i) {
    const Vec a = v2(rng.uniform(-3, 3), rng.uniform(-3, 3));
    const Vec b = v2(rng.uniform(-3, 3), rng.uniform(-3, 3));
    for (const Stratum* s : {&line, &circ}) {
      EXPECT_LE(std::abs(s->distance(a) - s->distance(b)), (a - b).norm() + 1e-12);
      EXPECT_LE(truncate_unit(s->distance(a)), 1.0);
      EXPECT_LE(truncate_unit(s->distance(a)), s->distance(a) + 1e-15);
    }
  }
}

TEST(BoxTest, ContainsAndClamp) {
  Box b{v2(-1, 0), v2(1, 2)};
  EXPECT_TRUE(b.contains(v2(0, 1)));
  EXPECT_TRUE(b.contains(v2(-1, 2)));
  EXPECT_FALSE(b.contains(v2(1.01, 1)));
  const Vec c = b.clamp(v2(5, -3));
  EXPECT_DOUBLE_EQ(c[0], 1.0);
  EXPECT_DOUBLE_EQ(c[1], 0.0);
}
