#include "strata/geometry.hpp"

#include <cmath>

namespace strata {

bool all_finite(const Vec& v) { return v.allFinite(); }
bool all_finite(const Mat& m) { return m.allFinite(); }

OrthoProjector OrthoProjector::from_matrix(Mat m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw NotAProjector("projector must be square and nonempty");
  }
  if (!m.allFinite()) {
    throw NotAProjector("projector has non-finite entries");
  }
  const double sym = (m - m.transpose()).norm();
  if (sym > kProjectorSymmetryTol) {
    throw NotAProjector("projector is not symmetric: ||P - P^T||_F = " + std::to_string(sym));
  }
  const double idem = (m * m - m).norm();
  if (idem > kProjectorIdempotenceTol) {
    throw NotAProjector("projector is not idempotent: ||P^2 - P||_F = " + std::to_string(idem));
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(m);
  int rank = 0;
  for (int i = 0; i < m.rows(); ++i) {
    const double ev = es.eigenvalues()[i];
    if (std::abs(ev - 1.0) <= kProjectorEigenTol) {
      ++rank;
    } else if (std::abs(ev) > kProjectorEigenTol) {
      throw NotAProjector("projector eigenvalue outside {0,1}: " + std::to_string(ev));
    }
  }
  return OrthoProjector(std::move(m), rank);
}

Vec project_subspace(const OrthoProjector& p, const Vec& v) {
  if (v.size() != p.dim()) {
    throw Error("project_subspace: dimension mismatch");
  }
  return p.apply(v);
}

bool Box::contains(const Vec& x) const {
  for (int i = 0; i < dim(); ++i) {
    if (x[i] < lo[i] || x[i] > hi[i]) return false;
  }
  return true;
}

Vec Box::clamp(const Vec& x) const {
  Vec out = x;
  for (int i = 0; i < dim(); ++i) {
    out[i] = std::min(std::max(out[i], lo[i]), hi[i]);
  }
  return out;
}

Vec Box::sample(Rng& rng) const {
  Vec out(dim());
  for (int i = 0; i < dim(); ++i) out[i] = rng.uniform(lo[i], hi[i]);
  return out;
}

double Rng::uniform(double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  return d(gen_);
}

int Rng::uniform_int(int lo, int hi) {
  std::uniform_int_distribution<int> d(lo, hi);
  return d(gen_);
}

Vec Rng::unit_vector(int d) {
  std::normal_distribution<double> n(0.0, 1.0);
  Vec v(d);
  double norm = 0.0;
  do {
    for (int i = 0; i < d; ++i) v[i] = n(gen_);
    norm = v.norm();
  } while (norm < 1e-12);
  return v / norm;
}

}  // namespace strata
