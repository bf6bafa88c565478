#pragma once

#include <functional>
#include <memory>
#include <string>

#include "strata/stratification.hpp"

namespace strata {

// Frozen regularity constants of a catalog entry, estimated numerically and
// stored with a 2x safety margin (lambda_lo with a 1/2 margin).
struct FrozenConstants {
  double G = 1.0;
  double L1 = 1e-6;
  double L2 = 1e-6;
  double L0 = 1e-6;
  double lambda_lo = 1.0;
  double lambda_hi = 1.0;
};

// A benchmark function together with its explicit stratification, a
// deterministic subgradient selection and per-stratum restricted gradients.
class CatalogFunction {
 public:
  using ValueFn = std::function<double(const Vec&)>;
  using GradFn = std::function<Vec(const Vec&)>;

  CatalogFunction(std::string name, Stratification strat, ValueFn value,
                  GradFn subgradient, std::vector<GradFn> restricted);

  const std::string& name() const { return name_; }
  const Stratification& stratification() const { return strat_; }

  double value(const Vec& x) const { return value_(x); }

  // Deterministic element of the Clarke subdifferential (termwise sign(0)=0
  // selection); equals the gradient at smooth points.
  Vec subgradient(const Vec& x) const { return subgrad_(x); }

  // Riemannian gradient of f restricted to the stratum, at y on the stratum.
  // Throws NotOnStratum when dist(y, stratum) > 1e-9.
  Vec restricted_gradient(int stratum_id, const Vec& y) const;

  // Sampled max of ||subgradient|| over K plus a 10% margin.
  double lipschitz_G() const { return lipschitz_G_; }

  // 2x-margined constants {G, L1, L2, L0, lambda_lo, lambda_hi}.
  const FrozenConstants& frozen_constants() const { return frozen_; }

 private:
  friend const CatalogFunction& catalog_get(const std::string& name);
  std::string name_;
  Stratification strat_;
  ValueFn value_;
  GradFn subgrad_;
  std::vector<GradFn> restricted_;  // indexed by stratum id
  double lipschitz_G_ = 0.0;
  FrozenConstants frozen_;
};

// Catalog lookup. Known names: appendix_fig1, abs_diff_sq, two_lines_demo,
// abs_power (exponent parameter via "abs_power(<beta>)", default beta = 1).
// Entries are constructed once and cached; references stay valid.
const CatalogFunction& catalog_get(const std::string& name);

std::vector<std::string> catalog_names();

}  // namespace strata
