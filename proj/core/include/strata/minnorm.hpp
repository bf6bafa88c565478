#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "strata/geometry.hpp"

namespace strata {

// Minimum-norm point of the convex hull of finitely many vectors (d <= 3,
// a handful of generators). Exhaustive face enumeration: the affine-hull
// minimizer of every generator subset is tested for convex coefficients.
// Throws Error on an empty input.
Vec min_norm_hull(const std::vector<Vec>& vectors);

// Minimum-norm element of the sampled delta-enlarged subdifferential hull
// around z. Returns nullopt when 0 lies in the hull (the point is critical
// and the linear-Lyapunov variant does not apply).
std::optional<Vec> spurious_direction(const std::function<Vec(const Vec&)>& subgrad,
                                      const Vec& z, double delta, int samples,
                                      uint64_t seed);

struct SpuriousRow {
  int64_t k = 0;
  double g_value = 0.0;   // linear Lyapunov f(z) + <v, x_k - z>
  double decrease = 0.0;  // g(x_k) - g(x_{k+1})
  bool ok = false;        // decrease >= gamma * ||v||^2
};

// Linear-Lyapunov ledger rows for a zero-dimensional stratum {z} with
// direction v (from spurious_direction) along iterates x_1..x_{n}.
std::vector<SpuriousRow> spurious_rows(const Vec& v, const Vec& z, double f_at_z,
                                       const std::vector<Vec>& iterates,
                                       const std::vector<double>& gammas);

}  // namespace strata
