#pragma once

#include <string>
#include <vector>

#include "strata/catalog.hpp"
#include "strata/schedule.hpp"

namespace strata {

// Record of a subgradient run x_{k+1} = x_k - gamma_k v_k.
//
// 0-based storage of the 1-based quantities of the recursion:
//   iterates[i]     = x_{i+1},  i in [0, K]   (x_1 .. x_{K+1})
//   subgradients[i] = v_{i+1},  i in [0, K-1]
//   steps[i]        = gamma_{i+1}
struct Trajectory {
  std::vector<Vec> iterates;
  std::vector<Vec> subgradients;
  std::vector<double> steps;
  std::string function_name;
  uint64_t config_hash = 0;
  bool escaped_domain = false;

  int64_t K() const { return static_cast<int64_t>(subgradients.size()); }
  int dim() const { return iterates.empty() ? 0 : static_cast<int>(iterates.front().size()); }
  // 1-based accessors matching the recursion indexing.
  const Vec& x(int64_t k) const { return iterates[static_cast<size_t>(k - 1)]; }
  const Vec& v(int64_t k) const { return subgradients[static_cast<size_t>(k - 1)]; }
  double gamma(int64_t k) const { return steps[static_cast<size_t>(k - 1)]; }
};

// Runs the subgradient recursion for K steps from x1. Deterministic: the
// subgradient selection is deterministic, so reruns are bit-identical.
// If an iterate leaves the domain box the run is truncated there, the
// escaping iterate is kept as the final one and the trajectory is flagged.
// `project_to_box` clips iterates to K instead (opt-in projected mode, not
// the plain method).
Trajectory run(const CatalogFunction& f, const Vec& x1,
               const StepSchedule& schedule, int64_t K,
               bool project_to_box = false);

// CSV round trip. Schema: header k,x_1..x_d,v_1..v_d,gamma; one row per k;
// the final row carries x_{K+1} with empty v/gamma fields. Numbers printed
// with enough digits for exact round-tripping.
std::string trajectory_to_csv(const Trajectory& t);
Trajectory trajectory_from_csv(const std::string& text);  // throws ParseError

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);  // throws ParseError

}  // namespace strata
