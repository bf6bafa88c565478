#pragma once

#include "strata/params.hpp"
#include "strata/schedule.hpp"
#include "strata/stratification.hpp"

namespace strata {

// Conical neighborhoods of a stratum X with dim(X) = j < d:
//   wellposed C*(X): dist(x,X) <= A3 * truncdist(x, X_{j-1})
//   outer     C(X):  dist(x,X) <= gamma^alpha * min{gamma^{rank*beta}, dist(x, X_{j-1})}
//   inner     Chat:  dist(x,X) <= gamma^beta  * min{gamma^{rank*beta}, dist(x, X_{j-1})}
// For dim(X) = d all three reduce to analytic membership of the region.
// The wellposed cone uses the truncated skeleton distance, the outer/inner
// cones the untruncated one, exactly as defined.

bool in_wellposed(const Vec& x, const Stratum& s, const Stratification& strat,
                  const NeighborhoodParams& p);
bool in_outer(const Vec& x, const Stratum& s, const Stratification& strat,
              const NeighborhoodParams& p);
bool in_inner(const Vec& x, const Stratum& s, const Stratification& strat,
              const NeighborhoodParams& p);

enum class Quant { Lt, Le, Eq };

// Membership of x in the union of inner (outer) cones over the quantified
// dimension class; the union over an empty class is empty (never entered).
bool in_inner_union(const Vec& x, const Stratification& strat,
                    const NeighborhoodParams& p, Quant q, int j);
bool in_outer_union(const Vec& x, const Stratification& strat,
                    const NeighborhoodParams& p, Quant q, int j);

// Hypothesis/conclusion pairs of the six metric relations between the
// nested neighborhoods, evaluated so property tests can assert each
// implication. Conclusions carry a 1e-12 relative guard against boundary
// rounding. Items 3 and 6 also expose the compared values.
struct GeomItem {
  bool hypothesis = false;
  bool conclusion = false;
  bool holds() const { return !hypothesis || conclusion; }
};

struct GeomItemsReport {
  GeomItem item1;  // x in inner  =>  dist(x,X) <= gamma^{(1+r)beta}
  GeomItem item2;  // x in outer  =>  dist(x,X) <= gamma^{alpha+r*beta}
  GeomItem item3;  // x outside lower inner cones => dist(x, X_{j-1}) >= gamma^{r*beta}
  GeomItem item4;  // inner\lower, step <= G*gamma => inflated inner (factor 3)
  GeomItem item5;  // outer\lower, step <= G*gamma => inflated outer (factor 3)
  GeomItem item6;  // inner\lower and x' outside outer => separation >= gamma^{alpha+r*beta}/4
  double item3_dist = 0.0, item3_bound = 0.0;
  double item6_separation = 0.0, item6_bound = 0.0;
  bool all_hold() const {
    return item1.holds() && item2.holds() && item3.holds() && item4.holds() &&
           item5.holds() && item6.holds();
  }
};

GeomItemsReport geom_items(const Vec& x, const Vec& xp, const Stratum& s,
                           const Stratification& strat,
                           const NeighborhoodParams& p);

// min{gamma^{rank*beta}, dist(x, X_{dim-1})} for x outside the lower inner
// cones; asserts the corollary bound gamma^{1-beta} / gamma0^{1-(R+1)beta}.
// Throws PreconditionViolated when x lies inside a lower inner cone.
double skeleton_lower_bound(const Vec& x, const Stratum& s,
                            const Stratification& strat,
                            const NeighborhoodParams& p);

// Per-interval frozen parameters for decreasing step sizes: interval i of the
// doubling decomposition uses gamma frozen at the start of the next interval
// (the last step of the schedule for the final interval).
NeighborhoodParams varying_params(const NeighborhoodParams& base,
                                  const StepSchedule& schedule,
                                  const std::vector<IndexInterval>& intervals,
                                  int i);

}  // namespace strata
