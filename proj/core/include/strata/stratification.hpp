#pragma once

#include <string>
#include <vector>

#include "strata/stratum.hpp"

namespace strata {

// Ordered collection of strata partitioning a compact box K, with skeletons,
// the active-dimension list and the rank map.
class Stratification {
 public:
  Stratification(std::vector<Stratum> strata, Box domain);

  int ambient_dim() const { return domain_.dim(); }
  const Box& domain() const { return domain_; }
  const std::vector<Stratum>& strata() const { return strata_; }
  const Stratum& by_id(int id) const;
  int size() const { return static_cast<int>(strata_.size()); }

  // Active dimensions J (increasing) and ranks. R() is the largest rank.
  const std::vector<int>& active_dims() const { return active_dims_; }
  int R() const { return static_cast<int>(active_dims_.size()) - 1; }
  int rank_of_dim(int dim) const;
  int rank_of(int stratum_id) const;

  // Distance to the skeleton X_j (union of strata of dimension <= j).
  // Follows the paper conventions: X_{-1} is empty and dist(x, empty) = 1;
  // the same convention applies when no stratum of dimension <= j exists.
  double skeleton_distance(const Vec& x, int j) const;

  // Index (id) of the unique stratum containing x, or -1 if none claims it.
  int containing_stratum(const Vec& x) const;

  // Partition check on an n-per-axis sampling grid over K: every grid point
  // belongs to exactly one stratum. Returns the first offending point, or an
  // empty vector when the check passes.
  std::vector<double> partition_violation(int n_per_axis) const;

  // Sampled check of the Def.-1 boundary condition for every ordered pair.
  bool boundary_condition_holds(int samples_per_stratum, uint64_t seed,
                                std::string* diag = nullptr) const;

  // JSON description (ids, kinds, parameters, dims, ranks) for the verifier
  // CLI path, and the inverse used by `strata-lab verify`.
  std::string describe_json() const;
  static Stratification from_json(const std::string& text);

 private:
  std::vector<Stratum> strata_;
  Box domain_;
  std::vector<int> active_dims_;
  std::vector<int> id_to_index_;
};

}  // namespace strata
