#pragma once

#include <Eigen/Dense>
#include <random>

#include "strata/errors.hpp"

namespace strata {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Convention used throughout: the distance to the empty set is 1.
inline constexpr double kEmptySetDistance = 1.0;

// Structural identity tolerances for projector tagging.
inline constexpr double kProjectorIdempotenceTol = 1e-10;
inline constexpr double kProjectorSymmetryTol = 1e-12;
inline constexpr double kProjectorEigenTol = 1e-8;

bool all_finite(const Vec& v);
bool all_finite(const Mat& m);

inline double truncate_unit(double d) { return d < 1.0 ? d : 1.0; }

// A square matrix explicitly tagged as an orthogonal projector. Tagging is
// validated once at construction: symmetry, idempotence, and {0,1} spectrum.
class OrthoProjector {
 public:
  static OrthoProjector from_matrix(Mat m);  // throws NotAProjector

  const Mat& matrix() const { return m_; }
  int rank() const { return rank_; }
  int dim() const { return static_cast<int>(m_.rows()); }
  Vec apply(const Vec& v) const { return m_ * v; }

 private:
  OrthoProjector(Mat m, int rank) : m_(std::move(m)), rank_(rank) {}
  Mat m_;
  int rank_;
};

// Pv for a tagged projector. Idempotence P(Pv) = Pv holds to 1e-12.
Vec project_subspace(const OrthoProjector& p, const Vec& v);

// Axis-aligned compact box (the domain K of a stratification).
struct Box {
  Vec lo;
  Vec hi;

  int dim() const { return static_cast<int>(lo.size()); }
  bool contains(const Vec& x) const;
  Vec clamp(const Vec& x) const;
  Vec sample(class Rng& rng) const;
};

// Deterministic RNG wrapper used by every sampling routine in the library.
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}
  double uniform(double lo, double hi);
  double uniform01() { return uniform(0.0, 1.0); }
  int uniform_int(int lo, int hi);  // inclusive bounds
  Vec unit_vector(int d);

 private:
  std::mt19937_64 gen_;
};

}  // namespace strata
