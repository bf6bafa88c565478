#pragma once

#include "strata/catalog.hpp"

namespace strata {

// Empirical suprema of the defining ratios of the regularity constants over
// sampled pairs, with the raw sample extrema and the margined frozen values
// (2x for upper constants, 1/2 for lambda_lo; L-constants floored at 1e-6).
struct ConstantsEstimate {
  FrozenConstants sampled;
  FrozenConstants frozen;
};

ConstantsEstimate estimate_constants(const CatalogFunction& f, int samples,
                                     uint64_t seed);

// Same estimators over a bare stratification with explicit value/subgradient
// callables; used for non-catalog strata (e.g. curved test strata).
ConstantsEstimate estimate_constants_raw(
    const Stratification& strat, const CatalogFunction::ValueFn& value,
    const CatalogFunction::GradFn& subgrad,
    const std::vector<CatalogFunction::GradFn>& restricted, int samples,
    uint64_t seed);

}  // namespace strata
