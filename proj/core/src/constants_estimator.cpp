#include "strata/constants_estimator.hpp"

#include <algorithm>
#include <cmath>

namespace strata {

namespace {

constexpr double kFloor = 1e-6;

// Orthonormal tangent basis at y, from the analytic tangent projector.
Mat tangent_basis(const Stratum& s, const Vec& y) {
  const Mat P = s.tangent_projector(y);
  Eigen::SelfAdjointEigenSolver<Mat> es(P);
  const int d = static_cast<int>(P.rows());
  Mat basis(d, s.dim());
  int col = 0;
  for (int i = 0; i < d && col < s.dim(); ++i) {
    if (es.eigenvalues()[i] > 0.5) basis.col(col++) = es.eigenvectors().col(i);
  }
  return basis;
}

// A point in the projection domain of s near y: y plus a normal offset within
// the skeleton-tapered tube, capped at half the curvature radius for circle
// strata (the envelope on which the Jacobian spectrum bounds are quoted).
Vec wellposed_sample(const Stratum& s, const Stratification& strat, const Vec& y, Rng& rng) {
  const int d = strat.ambient_dim();
  double cap = 0.8 * truncate_unit(strat.skeleton_distance(y, s.dim() - 1));
  if (s.kind() == StratumKind::CircleArc) {
    cap = std::min(cap, 0.5 * s.circle_data().radius);
  }
  if (s.dim() == d) return y;
  // random unit direction in the normal space
  const Mat P = s.tangent_projector(y);
  Vec w;
  double n = 0.0;
  do {
    const Vec u = rng.unit_vector(d);
    w = u - P * u;
    n = w.norm();
  } while (n < 1e-9);
  w /= n;
  return y + rng.uniform(0.0, cap) * w;
}

}  // namespace

ConstantsEstimate estimate_constants_raw(const Stratification& strat,
                                         const CatalogFunction::ValueFn& value,
                                         const CatalogFunction::GradFn& subgrad,
                                         const std::vector<CatalogFunction::GradFn>& restricted,
                                         int samples, uint64_t seed) {
  (void)value;
  if (samples < 100) throw ConfigError("estimate_constants requires at least 100 samples");
  Rng rng(seed);
  const Box& box = strat.domain();

  FrozenConstants est;
  est.G = 0.0;
  est.L1 = 0.0;
  est.L2 = 0.0;
  est.L0 = 0.0;
  est.lambda_lo = std::numeric_limits<double>::infinity();
  est.lambda_hi = 0.0;

  for (int i = 0; i < samples; ++i) {
    est.G = std::max(est.G, subgrad(box.sample(rng)).norm());
  }

  const int per_stratum = std::max(10, samples / std::max(1, strat.size()));
  for (const auto& s : strat.strata()) {
    const int j = s.dim();
    for (int i = 0; i < per_stratum; ++i) {
      Vec y = s.sample_point(rng);
      if (!box.contains(y)) y = box.clamp(y);
      const double trunc_y = truncate_unit(strat.skeleton_distance(y, j - 1));

      // L2: global projection-formula ratio against points of K.
      {
        Vec x;
        if (i % 2 == 0) {
          x = box.sample(rng);
        } else {
          const double r = std::pow(10.0, rng.uniform(-4.0, 0.0));
          x = box.clamp(y + r * rng.unit_vector(box.dim()));
        }
        const double dxy = (x - y).norm();
        if (dxy > 1e-10) {
          const Vec lhs = s.tangent_projector(y) * subgrad(x) -
                          restricted[static_cast<size_t>(s.id())](y);
          est.L2 = std::max(est.L2, lhs.norm() * trunc_y / dxy);
        }
      }

      if (s.dim() == 0) continue;

      // L1: tangent-plane variation along the stratum.
      {
        Vec y2 = s.sample_point(rng);
        if (!box.contains(y2)) y2 = box.clamp(y2);
        const double dyy = (y2 - y).norm();
        if (dyy > 1e-10) {
          const double num =
              (s.tangent_projector(y) - s.tangent_projector(y2)).operatorNorm();
          est.L1 = std::max(est.L1, num * trunc_y / dyy);
        }
      }

      // lambda / L0 over the well-posed cone.
      {
        const Vec x = wellposed_sample(s, strat, y, rng);
        try {
          const Mat J = s.projection_jacobian(x);
          Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (J + J.transpose()));
          est.lambda_hi = std::max(est.lambda_hi, es.eigenvalues().maxCoeff());
          const Vec yx = s.project(x);
          const Mat B = tangent_basis(s, yx);
          Eigen::SelfAdjointEigenSolver<Mat> est_t(B.transpose() * J * B);
          est.lambda_lo = std::min(est.lambda_lo, est_t.eigenvalues().minCoeff());
          const double r = (x - yx).norm();
          const double tx = truncate_unit(strat.skeleton_distance(x, j - 1));
          if (r > 1e-10) {
            est.L0 = std::max(est.L0, (J - s.tangent_projector(yx)).operatorNorm() * tx / r);
          }
        } catch (const Error&) {
          // sample fell outside the projection domain: skip
        }
      }
    }
  }
  if (!std::isfinite(est.lambda_lo)) est.lambda_lo = 1.0;
  if (est.lambda_hi <= 0.0) est.lambda_hi = 1.0;

  ConstantsEstimate out;
  out.sampled = est;
  out.frozen.G = 2.0 * est.G;
  out.frozen.L1 = std::max(kFloor, 2.0 * est.L1);
  out.frozen.L2 = std::max(kFloor, 2.0 * est.L2);
  out.frozen.L0 = std::max(kFloor, 2.0 * est.L0);
  out.frozen.lambda_lo = 0.5 * est.lambda_lo;
  out.frozen.lambda_hi = 2.0 * est.lambda_hi;
  return out;
}

ConstantsEstimate estimate_constants(const CatalogFunction& f, int samples, uint64_t seed) {
  std::vector<CatalogFunction::GradFn> restricted;
  for (const auto& s : f.stratification().strata()) {
    restricted.push_back(
        [&f, id = s.id()](const Vec& y) { return f.restricted_gradient(id, y); });
  }
  auto est = estimate_constants_raw(
      f.stratification(), [&f](const Vec& x) { return f.value(x); },
      [&f](const Vec& x) { return f.subgradient(x); }, restricted, samples, seed);
  // Ground the G estimate with the refined grid bound from the catalog entry.
  est.sampled.G = std::max(est.sampled.G, f.lipschitz_G() / 1.1);
  est.frozen.G = 2.0 * est.sampled.G;
  return est;
}

}  // namespace strata
