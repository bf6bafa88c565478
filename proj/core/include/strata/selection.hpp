#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "strata/cones.hpp"
#include "strata/engine.hpp"

namespace strata {

// Sentinels for the switching-time formulas: min{} = +infinity, max{} = -1.
inline constexpr int64_t kNoLeftEntry = std::numeric_limits<int64_t>::max();
inline constexpr int64_t kNoRightExit = -1;

// Precomputed inner/outer cone membership per stratum per iteration. The
// strata-selection algorithms are purely combinatorial on these tables, so
// they can be driven by synthetic tables with no geometry attached.
struct MembershipTables {
  struct StratumMeta {
    int id = 0;
    int dim = 0;
  };

  int64_t K = 0;
  int ambient_dim = 0;
  std::vector<StratumMeta> strata;
  // tables[s][k-1] for stratum index s and iteration k in [1, K]
  std::vector<std::vector<char>> inner;
  std::vector<std::vector<char>> outer;
  // Fallback assignment of Algorithm 1's last line, per iteration: the
  // nearest full-dimensional stratum id. When empty it is derived from the
  // outer-membership columns of the full-dimensional strata.
  std::vector<int> nearest_top;

  bool inner_at(int s, int64_t k) const { return inner[s][static_cast<size_t>(k - 1)] != 0; }
  bool outer_at(int s, int64_t k) const { return outer[s][static_cast<size_t>(k - 1)] != 0; }
};

MembershipTables build_tables(const Trajectory& traj, const Stratification& strat,
                              const NeighborhoodParams& p);

// Per-iterate stratum assignment (stratum ids, entry i is Psi_{i+1}).
struct Selection {
  std::vector<int> assignment;
  int64_t K() const { return static_cast<int64_t>(assignment.size()); }
  int psi(int64_t k) const { return assignment[static_cast<size_t>(k - 1)]; }
};

// Earliest inner-cone entry of stratum index s on [l, r]; kNoLeftEntry if none.
int64_t k_left(const MembershipTables& t, int s, int64_t l, int64_t r);

// Latest k in [l, r] such that x_{[l,k]} stays in the outer cone and x_k lies
// in the inner cone of stratum index s; kNoRightExit if none.
int64_t k_right(const MembershipTables& t, int s, int64_t l, int64_t r);

// One CheckLeft pass over [l, r] at dimension j. May assign a prefix of the
// interval in `out`; returns the remaining interval (possibly empty).
IndexInterval check_left(const MembershipTables& t, IndexInterval lr, int j,
                         Selection& out);

// One BuildInside pass over [l, r] at dimension j. Assigns the block starting
// at the earliest inner entry; returns the remaining interval.
IndexInterval build_inside(const MembershipTables& t, IndexInterval lr, int j,
                           Selection& out);

// Algorithm 1 on tables: dimensions 0..d-1 over maximal unassigned intervals,
// CheckLeft once then BuildInside until exhaustion, leftovers to the nearest
// full-dimensional stratum. Ties always break to the lowest stratum id.
Selection build_selection_tables(const MembershipTables& t);

Selection build_selection(const Trajectory& traj, const Stratification& strat,
                          const NeighborhoodParams& p);

// Varying-step construction: independent per doubling interval, each with its
// frozen parameters.
Selection build_selection_varying(const Trajectory& traj, const Stratification& strat,
                                  const StepSchedule& schedule,
                                  const NeighborhoodParams& base);

// Sets of left/right upward switches per stratum (1-based iterations, sorted).
struct SwitchSets {
  std::map<int, std::vector<int64_t>> lswitch;
  std::map<int, std::vector<int64_t>> rswitch;
};

SwitchSets switch_sets(const Selection& sel,
                       const std::vector<MembershipTables::StratumMeta>& strata);
SwitchSets switch_sets(const Selection& sel, const Stratification& strat);

std::vector<MembershipTables::StratumMeta> stratum_metas(const Stratification& strat);

// Selection JSON: {K, assignments, lswitch per stratum, rswitch per stratum},
// stable key order (compact single line) for golden files.
std::string selection_to_json(const Selection& sel,
                              const std::vector<MembershipTables::StratumMeta>& strata);
std::string selection_to_json(const Selection& sel, const Stratification& strat);
Selection selection_from_json(const std::string& text);  // throws ParseError

}  // namespace strata
