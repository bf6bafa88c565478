#include "strata/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace strata {

namespace {

// Floating-point guard for inequality assertions on computed quantities.
bool leq(double a, double b) {
  return a <= b + 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
}

double step_condition_constant(const FrozenConstants& c) {
  return std::max({4.0 * c.lambda_hi * c.G,
                   8.0 * c.L2 * c.lambda_hi * c.lambda_hi / c.lambda_lo,
                   2.0 * c.L1 * c.G * c.lambda_hi});
}

}  // namespace

ValidityReport is_valid(const Selection& sel, const Trajectory& traj,
                        const Stratification& strat, const NeighborhoodParams& p) {
  ValidityReport rep;
  const int64_t K = sel.K();
  if (K != traj.K()) throw Error("is_valid: selection and trajectory disagree on K");
  for (int64_t k = 1; k <= K; ++k) {
    const Stratum& s = strat.by_id(sel.psi(k));
    if (!in_outer(traj.x(k), s, strat, p)) {
      rep.valid = false;
      rep.first_violation_k = k;
      rep.reason = "x_k outside the outer cone of stratum " + std::to_string(s.id());
      return rep;
    }
    if (in_inner_union(traj.x(k), strat, p, Quant::Lt, s.dim())) {
      rep.valid = false;
      rep.first_violation_k = k;
      rep.reason = "x_k inside a lower-dimensional inner cone while assigned to stratum " +
                   std::to_string(s.id());
      return rep;
    }
  }
  return rep;
}

GoodnessReport is_good(const Selection& sel, const Trajectory& traj,
                       const Stratification& strat, const NeighborhoodParams& p) {
  GoodnessReport rep;
  const SwitchSets sw = switch_sets(sel, strat);
  const int64_t K = sel.K();

  auto fail = [&rep](int clause, int stratum_id, int64_t k, std::string reason) {
    rep.good = false;
    rep.violated_clause = clause;
    rep.stratum_id = stratum_id;
    rep.witness_k = k;
    rep.reason = std::move(reason);
  };

  for (const auto& s : strat.strata()) {
    const auto& ls = sw.lswitch.at(s.id());
    const auto& rs = sw.rswitch.at(s.id());
    for (int64_t k : ls) {
      if (!in_inner(traj.x(k), s, strat, p)) {
        fail(1, s.id(), k, "left switch outside the inner cone");
        return rep;
      }
    }
    for (int64_t k : rs) {
      if (!in_inner(traj.x(k), s, strat, p)) {
        fail(1, s.id(), k, "right switch outside the inner cone");
        return rep;
      }
    }
    // Buffer traversal between consecutive left switches (k_0^L = 0).
    for (size_t i = 0; i < ls.size(); ++i) {
      const int64_t lo = i == 0 ? 0 : ls[i - 1];
      bool found = false;
      for (int64_t k = lo + 1; k < ls[i]; ++k) {
        if (k >= 1 && !in_outer(traj.x(k), s, strat, p)) {
          found = true;
          break;
        }
      }
      if (!found) {
        fail(2, s.id(), ls[i], "no outer-cone exit before this left switch");
        return rep;
      }
    }
    // Mirrored condition between consecutive right switches (k_{N+1}^R = K+1).
    for (size_t i = 0; i < rs.size(); ++i) {
      const int64_t hi = (i + 1 < rs.size()) ? rs[i + 1] : K + 1;
      bool found = false;
      for (int64_t k = rs[i] + 1; k < hi; ++k) {
        if (k <= K && !in_outer(traj.x(k), s, strat, p)) {
          found = true;
          break;
        }
      }
      if (!found) {
        fail(3, s.id(), rs[i], "no outer-cone exit after this right switch");
        return rep;
      }
    }
  }
  return rep;
}

bool in_wellposed_id(const Vec& x, int stratum_id, const Stratification& strat,
                     const NeighborhoodParams& p) {
  return in_wellposed(x, strat.by_id(stratum_id), strat, p);
}

double g_value(const CatalogFunction& f, int stratum_id, const Vec& x,
               const NeighborhoodParams& p) {
  const Stratum& s = f.stratification().by_id(stratum_id);
  if (!in_wellposed(x, s, f.stratification(), p)) {
    throw OutsideWellPosed("g evaluation outside C* of stratum " + std::to_string(stratum_id));
  }
  return f.value(s.project(x));
}

Vec g_grad(const CatalogFunction& f, int stratum_id, const Vec& x,
           const NeighborhoodParams& p) {
  const Stratum& s = f.stratification().by_id(stratum_id);
  if (!in_wellposed(x, s, f.stratification(), p)) {
    throw OutsideWellPosed("g gradient outside C* of stratum " + std::to_string(stratum_id));
  }
  const Vec y = s.project(x);
  return s.projection_jacobian(x).transpose() * f.restricted_gradient(s.id(), y);
}

Payments payments(const Selection& sel, const Trajectory& traj, const Stratification& strat,
                  const NeighborhoodParams& p) {
  (void)p;
  Payments out;
  const int64_t K = sel.K();
  auto dim_of = [&](int id) { return strat.by_id(id).dim(); };
  for (int64_t k = 2; k <= K - 1; ++k) {
    const int cur = sel.psi(k), prev = sel.psi(k - 1);
    if (cur == prev) continue;
    if (dim_of(cur) <= dim_of(prev)) out.PL += strat.by_id(cur).distance(traj.x(k));
    if (dim_of(prev) <= dim_of(cur)) out.PR += strat.by_id(prev).distance(traj.x(k));
  }
  if (K >= 2) {
    // Switch at k = K falls outside the displayed sums; flagged separately.
    const int cur = sel.psi(K), prev = sel.psi(K - 1);
    if (cur != prev) {
      if (dim_of(cur) <= dim_of(prev)) {
        out.boundary_payment += strat.by_id(cur).distance(traj.x(K));
        ++out.boundary_flagged;
      }
      if (dim_of(prev) <= dim_of(cur)) {
        out.boundary_payment += strat.by_id(prev).distance(traj.x(K));
        ++out.boundary_flagged;
      }
    }
  }
  return out;
}

DescentLedger descent_ledger(const Selection& sel, const Trajectory& traj,
                             const CatalogFunction& f, const NeighborhoodParams& p) {
  const Stratification& strat = f.stratification();
  const int64_t K = sel.K();
  if (K != traj.K()) throw Error("descent_ledger: selection and trajectory disagree on K");

  DescentLedger led;
  led.rows.reserve(static_cast<size_t>(K));
  const double A1 = p.A1(), A2 = p.A2();
  const double step_cond = step_condition_constant(p.constants);

  double sum_gamma2a1 = 0.0;
  for (int64_t k = 1; k <= K; ++k) {
    LedgerRow row;
    row.k = k;
    row.psi = sel.psi(k);
    const Stratum& s = strat.by_id(row.psi);
    const double gamma_k = traj.gamma(k);
    sum_gamma2a1 += std::pow(gamma_k, 1.0 + 2.0 * p.alpha);

    double grad_sq_k = 0.0;
    try {
      const Vec g = g_grad(f, row.psi, traj.x(k), p);
      grad_sq_k = g.squaredNorm();
      row.grad_sq = grad_sq_k;
      led.sum_gamma_grad_sq += gamma_k * grad_sq_k;
    } catch (const OutsideWellPosed&) {
      row.usable = false;
    } catch (const IllPosedProjection&) {
      row.usable = false;
    }
    if (!row.usable) ++led.excluded_rows;

    if (k >= 2 && sel.psi(k) != sel.psi(k - 1)) {
      try {
        row.switching_term =
            g_value(f, row.psi, traj.x(k), p) - g_value(f, sel.psi(k - 1), traj.x(k), p);
        led.switching_sum += row.switching_term;
      } catch (const OutsideWellPosed&) {
        row.switch_usable = false;
      } catch (const IllPosedProjection&) {
        row.switch_usable = false;
      }
    }

    const double denom = truncate_unit(strat.skeleton_distance(traj.x(k), s.dim() - 1));
    const double dk = s.distance(traj.x(k));
    row.proximity_sq = denom > 0 ? (dk / denom) * (dk / denom) : 0.0;

    // Per-step stratified descent inequality at non-switch steps. Its own
    // hypothesis is the quarter cone (4*A3 <= 1 in the lemma), independent of
    // the wider guard cone used for row usability.
    if (k <= K - 1 && sel.psi(k + 1) == sel.psi(k)) {
      NeighborhoodParams lemma_p = p;
      lemma_p.A3 = std::min(p.A3, 0.25);
      const Vec mid = 0.5 * (traj.x(k) + traj.x(k + 1));
      const bool wp = in_wellposed(traj.x(k), s, strat, lemma_p) &&
                      in_wellposed(traj.x(k + 1), s, strat, lemma_p) &&
                      in_wellposed(mid, s, strat, lemma_p);
      const double lower_dist = strat.skeleton_distance(traj.x(k), s.dim() - 1);
      row.step_hypotheses_hold = wp && gamma_k * step_cond <= lower_dist && row.usable;
      if (row.step_hypotheses_hold) {
        ++led.steps_with_hypotheses;
        try {
          const double g_now = g_value(f, row.psi, traj.x(k), p);
          const double g_next = g_value(f, row.psi, traj.x(k + 1), p);
          const double rhs = -gamma_k * A1 * grad_sq_k + gamma_k * A2 * row.proximity_sq;
          row.step_inequality_holds = leq(g_next - g_now, rhs);
        } catch (const OutsideWellPosed&) {
          row.step_hypotheses_hold = false;
          --led.steps_with_hypotheses;
        }
        if (row.step_hypotheses_hold && !row.step_inequality_holds) {
          ++led.step_inequality_failures;
        }
      }
    }
    led.rows.push_back(row);
  }

  try {
    led.delta_f = g_value(f, sel.psi(1), traj.x(1), p) -
                  g_value(f, sel.psi(K), traj.x(K + 1), p);
  } catch (const OutsideWellPosed&) {
    led.delta_f_usable = false;
  } catch (const IllPosedProjection&) {
    led.delta_f_usable = false;
  }

  led.lhs_descent = A1 * led.sum_gamma_grad_sq;
  led.rhs_descent = led.delta_f + led.switching_sum + A2 * sum_gamma2a1;
  led.descent_inequality_holds = led.delta_f_usable && leq(led.lhs_descent, led.rhs_descent);

  led.pay = payments(sel, traj, strat, p);
  led.payment_rhs =
      4.0 * p.constants.G * (led.pay.PL + led.pay.PR + led.pay.boundary_payment);
  led.payment_bound_holds = leq(led.switching_sum, led.payment_rhs);
  return led;
}

std::string ledger_to_csv(const DescentLedger& ledger) {
  std::string out = "k,psi,grad_sq,switching_term,proximity_sq,flags\n";
  char buf[160];
  for (const auto& r : ledger.rows) {
    std::string flags;
    if (!r.usable) flags += "excluded";
    if (!r.switch_usable) flags += flags.empty() ? "switch_excluded" : "|switch_excluded";
    if (r.step_hypotheses_hold && !r.step_inequality_holds) {
      flags += flags.empty() ? "step_violation" : "|step_violation";
    }
    std::snprintf(buf, sizeof(buf), "%lld,%d,%.17g,%.17g,%.17g,", static_cast<long long>(r.k),
                  r.psi, r.grad_sq, r.switching_term, r.proximity_sq);
    out += buf;
    out += flags;
    out += '\n';
  }
  return out;
}

std::vector<SwitchCountRow> switch_count_bound(const Selection& sel, const Trajectory& traj,
                                               const Stratification& strat,
                                               const NeighborhoodParams& p) {
  const SwitchSets sw = switch_sets(sel, strat);
  const double gamma = traj.gamma(1);
  const double GgK = p.constants.G * gamma * static_cast<double>(traj.K());
  std::vector<SwitchCountRow> rows;
  for (const auto& s : strat.strata()) {
    SwitchCountRow r;
    r.stratum_id = s.id();
    r.left_observed = static_cast<int64_t>(sw.lswitch.at(s.id()).size());
    r.right_observed = static_cast<int64_t>(sw.rswitch.at(s.id()).size());
    const double expo = p.alpha + strat.rank_of(s.id()) * p.beta;
    r.bound = 4.0 * GgK / std::pow(gamma, expo);
    r.within = static_cast<double>(r.left_observed) <= r.bound + 1e-9 &&
               static_cast<double>(r.right_observed) <= r.bound + 1e-9;
    rows.push_back(r);
  }
  return rows;
}

RateReport rate_report(const CatalogFunction& f, const Vec& x1,
                       const std::vector<int64_t>& K_list, double gamma0_ceiling) {
  RateReport rep;
  const int R = f.stratification().R();
  for (int64_t K : K_list) {
    RateRow row;
    row.K = K;
    row.gamma = std::pow(static_cast<double>(K), -1.0 + 2.0 / (3.0 * R + 8.0));
    if (row.gamma >= gamma0_ceiling) {
      row.skipped = true;
      rep.rows.push_back(row);
      continue;
    }
    const NeighborhoodParams p = NeighborhoodParams::auto_for(f, row.gamma, gamma0_ceiling);
    const Trajectory traj = run(f, x1, StepSchedule::constant(row.gamma), K);
    const Selection sel = build_selection(traj, f.stratification(), p);
    row.valid = is_valid(sel, traj, f.stratification(), p).valid;
    row.good = is_good(sel, traj, f.stratification(), p).good;
    const DescentLedger led = descent_ledger(sel, traj, f, p);
    row.excluded_rows = led.excluded_rows;
    double sum = 0.0;
    for (const auto& r : led.rows) {
      if (r.usable) sum += r.grad_sq;
    }
    row.mean_grad_sq = sum / static_cast<double>(traj.K());
    int64_t pass = 0;
    for (int64_t k = 1; k <= traj.K(); ++k) {
      const Stratum& s = f.stratification().by_id(sel.psi(k));
      const double bound =
          std::pow(row.gamma, p.alpha + f.stratification().rank_of(s.id()) * p.beta);
      if (s.distance(traj.x(k)) <= bound * (1.0 + 1e-12)) ++pass;
    }
    row.certificate_pass_rate = static_cast<double>(pass) / static_cast<double>(traj.K());
    rep.rows.push_back(row);
  }
  // Log-log least squares over the rows that ran.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (const auto& r : rep.rows) {
    if (r.skipped || r.mean_grad_sq <= 0) continue;
    const double lx = std::log(static_cast<double>(r.K)), ly = std::log(r.mean_grad_sq);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n >= 2 && sxx * n - sx * sx > 0) {
    rep.fitted_slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    rep.fitted_intercept = (sy - rep.fitted_slope * sx) / n;
  }
  return rep;
}

VaryingLedger varying_ledger(const Selection& sel, const Trajectory& traj,
                             const CatalogFunction& f, const StepSchedule& schedule,
                             const NeighborhoodParams& base) {
  const Stratification& strat = f.stratification();
  const int64_t K = traj.K();
  VaryingLedger led;
  led.intervals = doubling_intervals(schedule, 1, K);

  std::vector<int> interval_of(static_cast<size_t>(K) + 1, 0);
  for (size_t i = 0; i < led.intervals.size(); ++i) {
    for (int64_t k = led.intervals[i].lo; k <= led.intervals[i].hi; ++k) {
      interval_of[static_cast<size_t>(k)] = static_cast<int>(i);
    }
  }
  std::vector<NeighborhoodParams> ps;
  ps.reserve(led.intervals.size());
  for (size_t i = 0; i < led.intervals.size(); ++i) {
    ps.push_back(varying_params(base, schedule, led.intervals, static_cast<int>(i)));
  }

  const double A1 = base.A1(), A2 = base.A2();
  const double G = base.constants.G;
  const double nstrata = static_cast<double>(strat.size());
  double bracket = 0.0, pay_bracket = 0.0;
  for (int64_t k = 1; k <= K; ++k) {
    const auto& p = ps[static_cast<size_t>(interval_of[static_cast<size_t>(k)])];
    const double gamma_k = traj.gamma(k);
    bracket += G * G * nstrata * std::pow(gamma_k, 1.0 + base.beta - base.alpha) +
               A2 * std::pow(gamma_k, 1.0 + 2.0 * base.alpha);
    pay_bracket += G * G * nstrata * std::pow(gamma_k, 1.0 + base.beta - base.alpha);
    try {
      const Vec g = g_grad(f, sel.psi(k), traj.x(k), p);
      led.sum_gamma_grad_sq += gamma_k * g.squaredNorm();
    } catch (const OutsideWellPosed&) {
      ++led.excluded_rows;
    } catch (const IllPosedProjection&) {
      ++led.excluded_rows;
    }
    if (k >= 2 && sel.psi(k) != sel.psi(k - 1)) {
      try {
        const double term = g_value(f, sel.psi(k), traj.x(k), p) -
                            g_value(f, sel.psi(k - 1), traj.x(k), p);
        if (interval_of[static_cast<size_t>(k)] != interval_of[static_cast<size_t>(k - 1)]) {
          led.switching_boundary += term;
        } else {
          led.switching_interior += term;
        }
      } catch (const OutsideWellPosed&) {
        ++led.excluded_rows;
      } catch (const IllPosedProjection&) {
        ++led.excluded_rows;
      }
    }
  }
  try {
    led.delta_f = g_value(f, sel.psi(1), traj.x(1), ps.front()) -
                  g_value(f, sel.psi(K), traj.x(K + 1), ps.back());
  } catch (const Error&) {
    // leave at 0; exclusion visible through excluded_rows
    ++led.excluded_rows;
  }
  led.corollary_bracket = bracket + G;
  const double lhs = A1 * led.sum_gamma_grad_sq;
  led.fitted_C = std::max(0.0, (lhs - led.delta_f) / led.corollary_bracket);
  led.payment_bracket = pay_bracket + G * std::pow(traj.gamma(1), base.beta);
  led.fitted_payment_C =
      std::max(0.0, (led.switching_interior + led.switching_boundary) / led.payment_bracket);
  return led;
}

KlMonitor kl_monitor(const Trajectory& traj, const Selection& sel, const CatalogFunction& f,
                     const StepSchedule& schedule, const NeighborhoodParams& base,
                     double tail_fraction, double osc_threshold, double sum_threshold) {
  (void)schedule;
  const Stratification& strat = f.stratification();
  const int64_t K = traj.K();
  KlMonitor m;
  m.proj_series.reserve(static_cast<size_t>(K));
  m.grad_series.reserve(static_cast<size_t>(K));

  for (int64_t k = 1; k <= K; ++k) {
    double term_grad = 0.0;
    try {
      term_grad = traj.gamma(k) * g_grad(f, sel.psi(k), traj.x(k), base).norm();
    } catch (const Error&) {
      term_grad = 0.0;
    }
    m.grad_series.push_back(term_grad);
    m.grad_sum += term_grad;

    double term_proj = 0.0;
    if (k <= K - 1 && sel.psi(k + 1) != sel.psi(k)) {
      try {
        const Vec a = strat.by_id(sel.psi(k + 1)).project(traj.x(k + 1));
        const Vec b = strat.by_id(sel.psi(k)).project(traj.x(k + 1));
        term_proj = (a - b).norm();
      } catch (const Error&) {
        term_proj = 0.0;
      }
    }
    m.proj_series.push_back(term_proj);
    m.proj_sum += term_proj;
  }

  const int64_t tail = std::max<int64_t>(1, static_cast<int64_t>(tail_fraction * K));
  m.tail_start = K - tail + 1;
  for (int64_t k = m.tail_start; k <= K; ++k) {
    m.tail_grad_increment += m.grad_series[static_cast<size_t>(k - 1)];
    m.tail_proj_increment += m.proj_series[static_cast<size_t>(k - 1)];
  }
  // Tail oscillation: diameter of the iterate tail (x_k for k >= tail_start).
  double diam_sq = 0.0;
  for (int64_t a = m.tail_start; a <= K + 1; ++a) {
    for (int64_t b = a + 1; b <= K + 1; ++b) {
      diam_sq = std::max(diam_sq, (traj.x(a) - traj.x(b)).squaredNorm());
    }
  }
  m.tail_oscillation = std::sqrt(diam_sq);
  m.certificate = m.tail_oscillation <= osc_threshold &&
                  m.tail_grad_increment <= sum_threshold &&
                  m.tail_proj_increment <= sum_threshold;
  return m;
}

std::vector<StationarityPair> stationarity_measure(const Trajectory& traj, const Selection& sel,
                                                   const CatalogFunction& f,
                                                   const NeighborhoodParams& p) {
  const Stratification& strat = f.stratification();
  std::vector<StationarityPair> out;
  out.reserve(static_cast<size_t>(sel.K()));
  for (int64_t k = 1; k <= sel.K(); ++k) {
    StationarityPair pr;
    const Stratum& s = strat.by_id(sel.psi(k));
    pr.delta = s.distance(traj.x(k));
    try {
      if (!in_wellposed(traj.x(k), s, strat, p)) throw OutsideWellPosed("");
      pr.eps = f.restricted_gradient(s.id(), s.project(traj.x(k))).norm();
    } catch (const Error&) {
      pr.usable = false;
    }
    out.push_back(pr);
  }
  return out;
}

}  // namespace strata
