#include "strata/minnorm.hpp"

#include <cmath>

namespace strata {

namespace {

// Minimum-norm point of the affine hull of the columns in `pts` (as convex
// combination coefficients); returns false when the subset is affinely
// degenerate. Solves the KKT system of min |V l|^2 s.t. sum l = 1.
bool affine_min_norm(const std::vector<const Vec*>& pts, Vec& coeffs) {
  const int m = static_cast<int>(pts.size());
  Mat kkt(m + 1, m + 1);
  Vec rhs = Vec::Zero(m + 1);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) kkt(i, j) = 2.0 * pts[static_cast<size_t>(i)]->dot(*pts[static_cast<size_t>(j)]);
    kkt(i, m) = 1.0;
    kkt(m, i) = 1.0;
  }
  kkt(m, m) = 0.0;
  rhs[m] = 1.0;
  Eigen::FullPivLU<Mat> lu(kkt);
  if (!lu.isInvertible()) return false;
  const Vec sol = lu.solve(rhs);
  coeffs = sol.head(m);
  return true;
}

}  // namespace

Vec min_norm_hull(const std::vector<Vec>& vectors) {
  if (vectors.empty()) throw Error("min_norm_hull: empty generator list");
  const int d = static_cast<int>(vectors.front().size());
  for (const auto& v : vectors) {
    if (static_cast<int>(v.size()) != d) throw Error("min_norm_hull: mixed dimensions");
  }

  const int n = static_cast<int>(vectors.size());
  if (n > 20) throw Error("min_norm_hull: too many generators for exhaustive enumeration");

  double best_sq = std::numeric_limits<double>::infinity();
  Vec best = vectors.front();
  // Every face of the hull is spanned by at most d+1 generators (Caratheodory);
  // enumerate all subsets and keep affine minimizers with convex coefficients.
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::vector<const Vec*> pts;
    for (int i = 0; i < n; ++i) {
      if (mask & (1u << i)) pts.push_back(&vectors[static_cast<size_t>(i)]);
    }
    if (static_cast<int>(pts.size()) > d + 1) continue;
    Vec coeffs;
    if (pts.size() == 1) {
      coeffs = Vec::Ones(1);
    } else if (!affine_min_norm(pts, coeffs)) {
      continue;
    }
    bool convex = true;
    for (int i = 0; i < coeffs.size(); ++i) {
      if (coeffs[i] < -1e-12) {
        convex = false;
        break;
      }
    }
    if (!convex) continue;
    Vec cand = Vec::Zero(d);
    for (size_t i = 0; i < pts.size(); ++i) cand += coeffs[static_cast<int>(i)] * (*pts[i]);
    const double sq = cand.squaredNorm();
    if (sq < best_sq) {
      best_sq = sq;
      best = cand;
    }
  }
  return best;
}

std::optional<Vec> spurious_direction(const std::function<Vec(const Vec&)>& subgrad,
                                      const Vec& z, double delta, int samples, uint64_t seed) {
  if (samples < 1) throw ConfigError("spurious_direction requires samples >= 1");
  Rng rng(seed);
  const int d = static_cast<int>(z.size());
  std::vector<Vec> gens;
  gens.push_back(subgrad(z));
  for (int i = 0; i < samples; ++i) {
    const double r = delta * std::sqrt(rng.uniform01());
    gens.push_back(subgrad(z + r * rng.unit_vector(d)));
  }
  // Reduce to a manageable generator set: keep extreme directions by a simple
  // greedy farthest-point thinning when oversampled.
  if (gens.size() > 12) {
    std::vector<Vec> kept;
    kept.push_back(gens.front());
    while (kept.size() < 12) {
      double best = -1.0;
      const Vec* pick = nullptr;
      for (const auto& g : gens) {
        double nearest = std::numeric_limits<double>::infinity();
        for (const auto& k : kept) nearest = std::min(nearest, (g - k).norm());
        if (nearest > best) {
          best = nearest;
          pick = &g;
        }
      }
      if (pick == nullptr || best < 1e-12) break;
      kept.push_back(*pick);
    }
    gens = std::move(kept);
  }
  const Vec v = min_norm_hull(gens);
  if (v.norm() <= 1e-10) return std::nullopt;
  return v;
}

std::vector<SpuriousRow> spurious_rows(const Vec& v, const Vec& z, double f_at_z,
                                       const std::vector<Vec>& iterates,
                                       const std::vector<double>& gammas) {
  if (iterates.size() < 2 || gammas.size() + 1 != iterates.size()) {
    throw Error("spurious_rows: need n iterates and n-1 steps");
  }
  const double vsq = v.squaredNorm();
  std::vector<SpuriousRow> rows;
  for (size_t i = 0; i + 1 < iterates.size(); ++i) {
    SpuriousRow r;
    r.k = static_cast<int64_t>(i + 1);
    r.g_value = f_at_z + v.dot(iterates[i] - z);
    const double g_next = f_at_z + v.dot(iterates[i + 1] - z);
    r.decrease = r.g_value - g_next;
    r.ok = r.decrease >= gammas[i] * vsq * (1.0 - 1e-12);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace strata
