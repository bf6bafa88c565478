#pragma once

#include <optional>
#include <string>
#include <vector>

#include "strata/selection.hpp"

namespace strata {

// ---------------------------------------------------------------------------
// Definition-level checkers

struct ValidityReport {
  bool valid = true;
  int64_t first_violation_k = 0;  // earliest violating iteration when !valid
  std::string reason;
};

// x_k in C(Psi_k) \ Chat_{< dim(Psi_k)} at every k.
ValidityReport is_valid(const Selection& sel, const Trajectory& traj,
                        const Stratification& strat, const NeighborhoodParams& p);

struct GoodnessReport {
  bool good = true;
  int violated_clause = 0;  // 1: switch not in inner cone, 2: left buffer, 3: right buffer
  int stratum_id = -1;
  int64_t witness_k = 0;
  std::string reason;
};

// Clause 1: every switch index lies in the inner cone of its stratum.
// Clause 2/3: between consecutive left (right) switches of a stratum there is
// an index with x outside its outer cone.
GoodnessReport is_good(const Selection& sel, const Trajectory& traj,
                       const Stratification& strat, const NeighborhoodParams& p);

// ---------------------------------------------------------------------------
// The projected Lyapunov functions g_X = f o pi_X

bool in_wellposed_id(const Vec& x, int stratum_id, const Stratification& strat,
                     const NeighborhoodParams& p);

// g_X(x) = f(pi_X(x)); grad g_X(x) = (Jac pi_X(x))^T grad_X f(pi_X(x)).
// Both throw OutsideWellPosed when x is outside C*(X).
double g_value(const CatalogFunction& f, int stratum_id, const Vec& x,
               const NeighborhoodParams& p);
Vec g_grad(const CatalogFunction& f, int stratum_id, const Vec& x,
           const NeighborhoodParams& p);

// ---------------------------------------------------------------------------
// Payments and the descent ledger

struct Payments {
  double PL = 0.0;
  double PR = 0.0;
  // Switches whose payment index falls outside the displayed sum range
  // [2, K-1] (left switch at K, right switch at K-1), flagged separately.
  int boundary_flagged = 0;
  double boundary_payment = 0.0;
};

Payments payments(const Selection& sel, const Trajectory& traj,
                  const Stratification& strat, const NeighborhoodParams& p);

struct LedgerRow {
  int64_t k = 0;
  int psi = -1;
  bool usable = true;          // g-evaluations well-posed at this row
  double grad_sq = 0.0;        // ||grad g_{Psi_k}(x_k)||^2
  double switching_term = 0.0; // g_{Psi_k}(x_k) - g_{Psi_{k-1}}(x_k); 0 off switches
  bool switch_usable = true;
  double proximity_sq = 0.0;   // (dist(x_k,Psi_k)/truncdist(x_k, X_{dim-1}))^2
  // Per-step stratified descent check, evaluated when Psi_{k+1} = Psi_k:
  bool step_hypotheses_hold = false;
  bool step_inequality_holds = true;
};

struct DescentLedger {
  std::vector<LedgerRow> rows;
  int64_t excluded_rows = 0;

  double sum_gamma_grad_sq = 0.0;  // over usable rows
  double switching_sum = 0.0;      // over usable switch rows
  double delta_f = 0.0;            // g_{Psi_1}(x_1) - g_{Psi_K}(x_{K+1})
  bool delta_f_usable = true;

  // Lemma-level inequality sides with the frozen constants:
  //   A1 * sum gamma*grad_sq  <=  delta_f + switching_sum + A2*K*gamma^{2alpha+1}
  double lhs_descent = 0.0;
  double rhs_descent = 0.0;
  bool descent_inequality_holds = false;

  // Payment bound: switching_sum <= 4G*(PL+PR) (+ flagged boundary terms).
  Payments pay;
  double payment_rhs = 0.0;
  bool payment_bound_holds = false;

  // Per-step descent lemma accounting.
  int64_t steps_with_hypotheses = 0;
  int64_t step_inequality_failures = 0;
};

DescentLedger descent_ledger(const Selection& sel, const Trajectory& traj,
                             const CatalogFunction& f, const NeighborhoodParams& p);

std::string ledger_to_csv(const DescentLedger& ledger);

// ---------------------------------------------------------------------------
// Switch-count bounds: per stratum, both counts <= 4*G*gamma*K / gamma^{alpha+r*beta}

struct SwitchCountRow {
  int stratum_id = -1;
  int64_t left_observed = 0;
  int64_t right_observed = 0;
  double bound = 0.0;
  bool within = true;
};

std::vector<SwitchCountRow> switch_count_bound(const Selection& sel,
                                               const Trajectory& traj,
                                               const Stratification& strat,
                                               const NeighborhoodParams& p);

// ---------------------------------------------------------------------------
// Rate report over a list of horizons with the corollary step-size rule

struct RateRow {
  int64_t K = 0;
  double gamma = 0.0;
  double mean_grad_sq = 0.0;
  double certificate_pass_rate = 0.0;  // dist(x_k, Psi_k) <= gamma^{alpha + rank*beta}
  int64_t excluded_rows = 0;
  bool valid = false;
  bool good = false;
  bool skipped = false;  // gamma >= gamma0
};

struct RateReport {
  std::vector<RateRow> rows;
  double fitted_slope = 0.0;  // log-log slope of mean_grad_sq vs K
  double fitted_intercept = 0.0;
};

RateReport rate_report(const CatalogFunction& f, const Vec& x1,
                       const std::vector<int64_t>& K_list,
                       double gamma0_ceiling = 0.1);

// ---------------------------------------------------------------------------
// Varying-step ledger (per doubling interval, frozen parameters each)

struct VaryingLedger {
  std::vector<IndexInterval> intervals;
  double sum_gamma_grad_sq = 0.0;
  double switching_interior = 0.0;  // switches within an interval
  double switching_boundary = 0.0;  // switches across interval starts
  double delta_f = 0.0;
  int64_t excluded_rows = 0;
  // Corollary right side with C = 1, and the empirically fitted C.
  double corollary_bracket = 0.0;  // sum G^2|X| gamma^{1+beta-alpha} + A2 gamma^{1+2alpha}, plus G
  double fitted_C = 0.0;
  // Payment lemma bracket: G^2|X| sum gamma^{1+beta-alpha} + G gamma_{k(1)}^beta.
  double payment_bracket = 0.0;
  double fitted_payment_C = 0.0;
};

VaryingLedger varying_ledger(const Selection& sel, const Trajectory& traj,
                             const CatalogFunction& f, const StepSchedule& schedule,
                             const NeighborhoodParams& base);

// ---------------------------------------------------------------------------
// Sequential-convergence monitor for gamma_k ~ 1/k

struct KlMonitor {
  std::vector<double> proj_series;  // ||pi_{Psi_{k+1}}(x_{k+1}) - pi_{Psi_k}(x_{k+1})||
  std::vector<double> grad_series;  // gamma_k ||grad g_{Psi_k}(x_k)||
  double proj_sum = 0.0;
  double grad_sum = 0.0;
  double tail_proj_increment = 0.0;
  double tail_grad_increment = 0.0;
  double tail_oscillation = 0.0;  // sup ||x_m - x_m'|| over the tail window
  int64_t tail_start = 0;
  bool certificate = false;
};

KlMonitor kl_monitor(const Trajectory& traj, const Selection& sel,
                     const CatalogFunction& f, const StepSchedule& schedule,
                     const NeighborhoodParams& base, double tail_fraction = 0.1,
                     double osc_threshold = 1e-3, double sum_threshold = 1e-4);

// ---------------------------------------------------------------------------
// (eps_k, delta_k) stationarity certificates

struct StationarityPair {
  double eps = 0.0;    // ||grad_X f(pi_X(x_k))|| on the selected stratum
  double delta = 0.0;  // dist(x_k, Psi_k)
  bool usable = true;
};

std::vector<StationarityPair> stationarity_measure(const Trajectory& traj,
                                                   const Selection& sel,
                                                   const CatalogFunction& f,
                                                   const NeighborhoodParams& p);

}  // namespace strata
