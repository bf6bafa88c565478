#include "strata/selection.hpp"

#include <algorithm>
#include <cassert>

#include <json.hpp>

namespace strata {

using nlohmann::ordered_json;

namespace {
constexpr int kUnassigned = -1;
}

MembershipTables build_tables(const Trajectory& traj, const Stratification& strat,
                              const NeighborhoodParams& p) {
  MembershipTables t;
  t.K = traj.K();
  t.ambient_dim = strat.ambient_dim();
  const auto& strata = strat.strata();
  t.strata.reserve(strata.size());
  t.inner.assign(strata.size(), std::vector<char>(static_cast<size_t>(t.K), 0));
  t.outer.assign(strata.size(), std::vector<char>(static_cast<size_t>(t.K), 0));
  for (size_t s = 0; s < strata.size(); ++s) {
    t.strata.push_back({strata[s].id(), strata[s].dim()});
    for (int64_t k = 1; k <= t.K; ++k) {
      const Vec& x = traj.x(k);
      t.inner[s][static_cast<size_t>(k - 1)] = in_inner(x, strata[s], strat, p) ? 1 : 0;
      t.outer[s][static_cast<size_t>(k - 1)] = in_outer(x, strata[s], strat, p) ? 1 : 0;
    }
  }
  // Nearest full-dimensional stratum per iterate, for Algorithm 1's last line.
  t.nearest_top.assign(static_cast<size_t>(t.K), -1);
  for (int64_t k = 1; k <= t.K; ++k) {
    double best = 0.0;
    int best_id = -1;
    for (const auto& s : strata) {
      if (s.dim() != strat.ambient_dim()) continue;
      const double d = s.distance(traj.x(k));
      if (best_id < 0 || d < best) {
        best = d;
        best_id = s.id();
      }
    }
    t.nearest_top[static_cast<size_t>(k - 1)] = best_id;
  }
  return t;
}

int64_t k_left(const MembershipTables& t, int s, int64_t l, int64_t r) {
  for (int64_t k = l; k <= r; ++k) {
    if (t.inner_at(s, k)) return k;
  }
  return kNoLeftEntry;
}

int64_t k_right(const MembershipTables& t, int s, int64_t l, int64_t r) {
  int64_t best = kNoRightExit;
  for (int64_t k = l; k <= r; ++k) {
    if (!t.outer_at(s, k)) break;  // prefix x_{[l,k]} must stay in the outer cone
    if (t.inner_at(s, k)) best = k;
  }
  return best;
}

namespace {

void assign_range(Selection& out, int64_t lo, int64_t hi, int stratum_id) {
  for (int64_t k = lo; k <= hi; ++k) {
    assert(out.assignment[static_cast<size_t>(k - 1)] == kUnassigned);
    out.assignment[static_cast<size_t>(k - 1)] = stratum_id;
  }
}

bool whole_interval_in_outer(const MembershipTables& t, int s, int64_t l, int64_t r) {
  for (int64_t k = l; k <= r; ++k) {
    if (!t.outer_at(s, k)) return false;
  }
  return true;
}

}  // namespace

IndexInterval check_left(const MembershipTables& t, IndexInterval lr, int j, Selection& out) {
  if (lr.empty()) return lr;
  // Latest admissible right-switch time over the strata of dimension j;
  // ties break to the lowest stratum id (strata are scanned in id order).
  int64_t best_kr = kNoRightExit;
  int best_s = -1;
  for (size_t s = 0; s < t.strata.size(); ++s) {
    if (t.strata[s].dim != j) continue;
    const int64_t kr = k_right(t, static_cast<int>(s), lr.lo, lr.hi);
    if (kr > best_kr ||
        (kr == best_kr && best_s >= 0 && kr != kNoRightExit &&
         t.strata[s].id < t.strata[static_cast<size_t>(best_s)].id)) {
      best_kr = kr;
      best_s = static_cast<int>(s);
    }
  }
  if (best_kr == kNoRightExit) return lr;  // no left buffer to cross

  const int id = t.strata[static_cast<size_t>(best_s)].id;
  if (whole_interval_in_outer(t, best_s, lr.lo, lr.hi)) {
    assign_range(out, lr.lo, lr.hi, id);
    return IndexInterval{lr.hi + 1, lr.hi};  // empty
  }
  assign_range(out, lr.lo, best_kr, id);
  return IndexInterval{best_kr + 1, lr.hi};
}

IndexInterval build_inside(const MembershipTables& t, IndexInterval lr, int j, Selection& out) {
  if (lr.empty()) return lr;
#ifndef NDEBUG
  // Promise: no iterate of the pending prefix lies in an inner cone of this
  // dimension class (holds by the minimality of the chosen entry time).
  for (size_t s = 0; s < t.strata.size(); ++s) {
    if (t.strata[s].dim != j) continue;
    assert(k_left(t, static_cast<int>(s), lr.lo, lr.hi) == kNoLeftEntry ||
           k_left(t, static_cast<int>(s), lr.lo, lr.hi) >= lr.lo);
  }
#endif
  // Earliest inner-cone entry over the strata of dimension j (ties: lowest id).
  int64_t best_kl = kNoLeftEntry;
  int best_s = -1;
  for (size_t s = 0; s < t.strata.size(); ++s) {
    if (t.strata[s].dim != j) continue;
    const int64_t kl = k_left(t, static_cast<int>(s), lr.lo, lr.hi);
    if (kl < best_kl ||
        (kl == best_kl && best_s >= 0 && kl != kNoLeftEntry &&
         t.strata[s].id < t.strata[static_cast<size_t>(best_s)].id)) {
      best_kl = kl;
      best_s = static_cast<int>(s);
    }
  }
  if (best_kl == kNoLeftEntry) return IndexInterval{lr.hi + 1, lr.hi};  // no entrance: stop

  const int id = t.strata[static_cast<size_t>(best_s)].id;
  if (whole_interval_in_outer(t, best_s, best_kl, lr.hi)) {
    assign_range(out, best_kl, lr.hi, id);
    return IndexInterval{lr.hi + 1, lr.hi};
  }
  const int64_t kr = k_right(t, best_s, best_kl, lr.hi);
  assert(kr >= best_kl);
  assign_range(out, best_kl, kr, id);
  return IndexInterval{kr + 1, lr.hi};
}

Selection build_selection_tables(const MembershipTables& t) {
  Selection sel;
  sel.assignment.assign(static_cast<size_t>(t.K), kUnassigned);

  for (int j = 0; j < t.ambient_dim; ++j) {
    bool any_dim_j = false;
    for (const auto& m : t.strata) any_dim_j |= (m.dim == j);
    if (!any_dim_j) continue;  // empty dimension class: skipped

    // Maximal unassigned consecutive intervals, in increasing order.
    std::vector<IndexInterval> intervals;
    int64_t k = 1;
    while (k <= t.K) {
      if (sel.assignment[static_cast<size_t>(k - 1)] != kUnassigned) {
        ++k;
        continue;
      }
      int64_t end = k;
      while (end + 1 <= t.K && sel.assignment[static_cast<size_t>(end)] == kUnassigned) ++end;
      intervals.push_back(IndexInterval{k, end});
      k = end + 1;
    }

    for (const auto& iv : intervals) {
      IndexInterval cur = check_left(t, iv, j, sel);
      while (!cur.empty()) {
        const int64_t prev_lo = cur.lo;
        cur = build_inside(t, cur, j, sel);
        if (!cur.empty() && cur.lo <= prev_lo) {
          throw Error("selection construction failed to make progress");
        }
      }
    }
  }

  // Every index not yet assigned goes to the nearest full-dimensional stratum.
  for (int64_t k = 1; k <= t.K; ++k) {
    auto& slot = sel.assignment[static_cast<size_t>(k - 1)];
    if (slot != kUnassigned) continue;
    int id = t.nearest_top.empty() ? -1 : t.nearest_top[static_cast<size_t>(k - 1)];
    if (id < 0) {
      // Table-only mode: lowest-id full-dimensional stratum whose outer
      // (= membership) column claims the iterate, else the lowest id overall.
      int fallback = -1;
      for (size_t s = 0; s < t.strata.size(); ++s) {
        if (t.strata[s].dim != t.ambient_dim) continue;
        if (fallback < 0) fallback = t.strata[s].id;
        if (t.outer_at(static_cast<int>(s), k)) {
          id = t.strata[s].id;
          break;
        }
      }
      if (id < 0) id = fallback;
      if (id < 0) throw Error("no full-dimensional stratum available for fallback assignment");
    }
    slot = id;
  }
  return sel;
}

Selection build_selection(const Trajectory& traj, const Stratification& strat,
                          const NeighborhoodParams& p) {
  return build_selection_tables(build_tables(traj, strat, p));
}

Selection build_selection_varying(const Trajectory& traj, const Stratification& strat,
                                  const StepSchedule& schedule, const NeighborhoodParams& base) {
  const auto intervals = doubling_intervals(schedule, 1, traj.K());
  Selection sel;
  sel.assignment.assign(static_cast<size_t>(traj.K()), kUnassigned);
  for (size_t i = 0; i < intervals.size(); ++i) {
    const NeighborhoodParams p =
        varying_params(base, schedule, intervals, static_cast<int>(i));
    // Restrict the trajectory to the interval and construct independently.
    Trajectory sub;
    sub.function_name = traj.function_name;
    for (int64_t k = intervals[i].lo; k <= intervals[i].hi; ++k) {
      sub.iterates.push_back(traj.x(k));
      sub.subgradients.push_back(traj.v(k));
      sub.steps.push_back(traj.gamma(k));
    }
    sub.iterates.push_back(traj.x(intervals[i].hi + 1));
    const Selection part = build_selection_tables(build_tables(sub, strat, p));
    for (int64_t k = intervals[i].lo; k <= intervals[i].hi; ++k) {
      sel.assignment[static_cast<size_t>(k - 1)] = part.psi(k - intervals[i].lo + 1);
    }
  }
  return sel;
}

std::vector<MembershipTables::StratumMeta> stratum_metas(const Stratification& strat) {
  std::vector<MembershipTables::StratumMeta> out;
  out.reserve(strat.strata().size());
  for (const auto& s : strat.strata()) out.push_back({s.id(), s.dim()});
  return out;
}

SwitchSets switch_sets(const Selection& sel,
                       const std::vector<MembershipTables::StratumMeta>& strata) {
  SwitchSets out;
  std::map<int, int> dim_of;
  for (const auto& m : strata) {
    out.lswitch[m.id] = {};
    out.rswitch[m.id] = {};
    dim_of[m.id] = m.dim;
  }
  const int64_t K = sel.K();
  for (int64_t k = 2; k <= K; ++k) {
    const int cur = sel.psi(k), prev = sel.psi(k - 1);
    if (cur != prev && dim_of.at(cur) <= dim_of.at(prev)) out.lswitch[cur].push_back(k);
  }
  for (int64_t k = 1; k <= K - 1; ++k) {
    const int cur = sel.psi(k), next = sel.psi(k + 1);
    if (cur != next && dim_of.at(cur) <= dim_of.at(next)) out.rswitch[cur].push_back(k);
  }
  return out;
}

SwitchSets switch_sets(const Selection& sel, const Stratification& strat) {
  return switch_sets(sel, stratum_metas(strat));
}

std::string selection_to_json(const Selection& sel,
                              const std::vector<MembershipTables::StratumMeta>& strata) {
  const SwitchSets sw = switch_sets(sel, strata);
  ordered_json j;
  j["K"] = sel.K();
  j["assignments"] = sel.assignment;
  ordered_json ls = ordered_json::object(), rs = ordered_json::object();
  for (const auto& m : strata) {
    ls[std::to_string(m.id)] = sw.lswitch.at(m.id);
    rs[std::to_string(m.id)] = sw.rswitch.at(m.id);
  }
  j["lswitch"] = std::move(ls);
  j["rswitch"] = std::move(rs);
  return j.dump();
}

std::string selection_to_json(const Selection& sel, const Stratification& strat) {
  return selection_to_json(sel, stratum_metas(strat));
}

Selection selection_from_json(const std::string& text) {
  try {
    const auto j = ordered_json::parse(text);
    Selection sel;
    sel.assignment = j.at("assignments").get<std::vector<int>>();
    if (j.contains("K") && j.at("K").get<int64_t>() != sel.K()) {
      throw ParseError("selection json: K does not match the assignment length");
    }
    return sel;
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& e) {
    throw ParseError(std::string("selection json: ") + e.what());
  }
}

}  // namespace strata
