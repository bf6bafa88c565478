#include "strata/cones.hpp"

#include <cmath>

namespace strata {

namespace {

// Relative guard for boundary rounding when asserting lemma conclusions.
constexpr double kConcl = 1.0 + 1e-12;

// min{gamma^{rank*beta}, dist(x, X_{dim-1})}
double taper(const Vec& x, const Stratum& s, const Stratification& strat,
             const NeighborhoodParams& p) {
  const double cap = std::pow(p.gamma, strat.rank_of(s.id()) * p.beta);
  return std::min(cap, strat.skeleton_distance(x, s.dim() - 1));
}

}  // namespace

bool in_wellposed(const Vec& x, const Stratum& s, const Stratification& strat,
                  const NeighborhoodParams& p) {
  if (s.dim() == strat.ambient_dim()) return s.contains(x);
  const double t = truncate_unit(strat.skeleton_distance(x, s.dim() - 1));
  return s.distance(x) <= p.A3 * t;
}

bool in_outer(const Vec& x, const Stratum& s, const Stratification& strat,
              const NeighborhoodParams& p) {
  if (s.dim() == strat.ambient_dim()) return s.contains(x);
  return s.distance(x) <= std::pow(p.gamma, p.alpha) * taper(x, s, strat, p);
}

bool in_inner(const Vec& x, const Stratum& s, const Stratification& strat,
              const NeighborhoodParams& p) {
  if (s.dim() == strat.ambient_dim()) return s.contains(x);
  return s.distance(x) <= std::pow(p.gamma, p.beta) * taper(x, s, strat, p);
}

namespace {

bool quant_match(Quant q, int dim, int j) {
  switch (q) {
    case Quant::Lt: return dim < j;
    case Quant::Le: return dim <= j;
    case Quant::Eq: return dim == j;
  }
  return false;
}

template <typename Pred>
bool union_membership(const Vec& x, const Stratification& strat, Quant q, int j, Pred pred) {
  for (const auto& s : strat.strata()) {
    if (!quant_match(q, s.dim(), j)) continue;
    if (pred(x, s)) return true;
  }
  return false;
}

}  // namespace

bool in_inner_union(const Vec& x, const Stratification& strat, const NeighborhoodParams& p,
                    Quant q, int j) {
  return union_membership(x, strat, q, j, [&](const Vec& y, const Stratum& s) {
    return in_inner(y, s, strat, p);
  });
}

bool in_outer_union(const Vec& x, const Stratification& strat, const NeighborhoodParams& p,
                    Quant q, int j) {
  return union_membership(x, strat, q, j, [&](const Vec& y, const Stratum& s) {
    return in_outer(y, s, strat, p);
  });
}

GeomItemsReport geom_items(const Vec& x, const Vec& xp, const Stratum& s,
                           const Stratification& strat, const NeighborhoodParams& p) {
  GeomItemsReport rep;
  const int r = strat.rank_of(s.id());
  const double g = p.gamma;
  const double dist_x = s.distance(x);
  const double dist_xp = s.distance(xp);
  const bool inner_x = in_inner(x, s, strat, p);
  const bool outer_x = in_outer(x, s, strat, p);
  const bool outer_xp = in_outer(xp, s, strat, p);
  const bool lower_x = in_inner_union(x, strat, p, Quant::Lt, s.dim());

  rep.item1.hypothesis = inner_x;
  rep.item1.conclusion = dist_x <= std::pow(g, (1 + r) * p.beta) * kConcl;

  rep.item2.hypothesis = outer_x;
  rep.item2.conclusion = dist_x <= std::pow(g, p.alpha + r * p.beta) * kConcl;

  rep.item3.hypothesis = !lower_x;
  rep.item3_dist = strat.skeleton_distance(x, s.dim() - 1);
  rep.item3_bound = std::pow(g, r * p.beta);
  rep.item3.conclusion = rep.item3_dist >= rep.item3_bound / kConcl;

  const double step = (xp - x).norm();
  const double taper_xp = taper(xp, s, strat, p);
  rep.item4.hypothesis = inner_x && !lower_x && step <= p.constants.G * g;
  rep.item4.conclusion = dist_xp <= 3.0 * std::pow(g, p.beta) * taper_xp * kConcl;

  rep.item5.hypothesis = outer_x && !lower_x && step <= p.constants.G * g;
  rep.item5.conclusion = dist_xp <= 3.0 * std::pow(g, p.alpha) * taper_xp * kConcl;

  rep.item6.hypothesis = inner_x && !lower_x && !outer_xp;
  rep.item6_separation = step;
  rep.item6_bound = std::pow(g, p.alpha + r * p.beta) / 4.0;
  rep.item6.conclusion = rep.item6_separation >= rep.item6_bound / kConcl;

  return rep;
}

double skeleton_lower_bound(const Vec& x, const Stratum& s, const Stratification& strat,
                            const NeighborhoodParams& p) {
  if (in_inner_union(x, strat, p, Quant::Lt, s.dim())) {
    throw PreconditionViolated("x lies inside a lower-dimensional inner cone");
  }
  const double m = taper(x, s, strat, p);
  const double bound =
      std::pow(p.gamma, 1.0 - p.beta) / std::pow(p.gamma0, 1.0 - (p.R + 1) * p.beta);
  if (m < bound / kConcl) {
    throw Error("skeleton lower bound violated: min = " + std::to_string(m) +
                " < " + std::to_string(bound));
  }
  return m;
}

NeighborhoodParams varying_params(const NeighborhoodParams& base, const StepSchedule& schedule,
                                  const std::vector<IndexInterval>& intervals, int i) {
  if (i < 0 || i >= static_cast<int>(intervals.size())) {
    throw Error("varying_params: interval index out of range");
  }
  const int64_t K_last = intervals.back().hi;
  // gamma frozen at the start of the next interval; the schedule's final step
  // for the last interval.
  const int64_t freeze_at = std::min(intervals[static_cast<size_t>(i)].hi + 1, K_last);
  NeighborhoodParams p = base;
  p.gamma = schedule.gamma_at(freeze_at);
  return p;
}

}  // namespace strata
