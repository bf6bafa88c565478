// strata-lab: run subgradient-descent experiments on the stratified catalog,
// build strata selections, audit the descent ledger, and verify recorded runs.
//
// Subcommands: run | verify | rate-sweep | kl | varying
// Exit codes: 0 success / verification pass, 1 verification failure,
//             2 usage, config or parse errors.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "strata/cones.hpp"
#include "strata/engine.hpp"
#include "strata/selection.hpp"
#include "strata/svg.hpp"
#include "strata/verifier.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace strata;

namespace {

struct Config {
  std::string function = "appendix_fig1";
  std::vector<double> start;
  std::string schedule_kind = "constant";
  double gamma = 0.01;
  double c = 0.01;
  std::vector<double> explicit_steps;
  int64_t K = 5000;
  std::string alpha = "auto";
  std::string beta = "auto";
  double gamma0 = 0.1;
  std::string out_dir = "out";
  uint64_t seed = 0;
  bool strict_gamma0 = false;
  bool projected = false;
  std::vector<int64_t> K_list = {2000, 8000, 32000};
  double tail_fraction = 0.1;
  double osc_threshold = 1e-3;
  double sum_threshold = 1e-4;
  bool constants_override = false;
  FrozenConstants constants;
};

// Applies config-file values for every option the command line did not set;
// flags always win.
void merge_config_file(Config& cfg, const std::string& path, const CLI::App* active) {
  ordered_json j;
  try {
    j = ordered_json::parse(read_file(path));
  } catch (const std::exception& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  auto flag_unset = [&](const std::string& name) {
    return active->get_option_no_throw(name) == nullptr || active->count(name) == 0;
  };
  if (j.contains("function") && flag_unset("--function")) {
    cfg.function = j["function"].get<std::string>();
  }
  if (j.contains("start") && flag_unset("--start")) {
    cfg.start = j["start"].get<std::vector<double>>();
  }
  if (j.contains("schedule")) {
    const auto& s = j["schedule"];
    if (s.contains("kind") && flag_unset("--schedule")) {
      cfg.schedule_kind = s["kind"].get<std::string>();
    }
    if (s.contains("gamma") && flag_unset("--gamma")) cfg.gamma = s["gamma"].get<double>();
    if (s.contains("c") && flag_unset("--c")) cfg.c = s["c"].get<double>();
    if (s.contains("values")) cfg.explicit_steps = s["values"].get<std::vector<double>>();
  }
  if (j.contains("K") && flag_unset("--K")) cfg.K = j["K"].get<int64_t>();
  if (j.contains("alpha") && flag_unset("--alpha")) {
    cfg.alpha = j["alpha"].is_string() ? j["alpha"].get<std::string>()
                                       : std::to_string(j["alpha"].get<double>());
  }
  if (j.contains("beta") && flag_unset("--beta")) {
    cfg.beta = j["beta"].is_string() ? j["beta"].get<std::string>()
                                     : std::to_string(j["beta"].get<double>());
  }
  if (j.contains("gamma0") && flag_unset("--gamma0")) cfg.gamma0 = j["gamma0"].get<double>();
  if (j.contains("out_dir") && flag_unset("--out")) cfg.out_dir = j["out_dir"].get<std::string>();
  if (j.contains("seed") && flag_unset("--seed")) cfg.seed = j["seed"].get<uint64_t>();
  if (j.contains("strict_gamma0") && flag_unset("--strict-gamma0")) {
    cfg.strict_gamma0 = j["strict_gamma0"].get<bool>();
  }
  if (j.contains("K_list") && flag_unset("--K-list")) {
    cfg.K_list = j["K_list"].get<std::vector<int64_t>>();
  }
  if (j.contains("constants") && j["constants"].is_object()) {
    const auto& c = j["constants"];
    cfg.constants_override = true;
    cfg.constants.G = c.value("G", 1.0);
    cfg.constants.L1 = c.value("L1", 1e-6);
    cfg.constants.L2 = c.value("L2", 1e-6);
    cfg.constants.L0 = c.value("L0", 1e-6);
    cfg.constants.lambda_lo = c.value("lambda_lo", 1.0);
    cfg.constants.lambda_hi = c.value("lambda_hi", 1.0);
  }
}

fs::path resolve_out_dir(const Config& cfg) {
  fs::path out(cfg.out_dir);
  if (const char* root = std::getenv("STRATA_LAB_OUT"); root != nullptr && *root != '\0') {
    if (out.is_relative()) out = fs::path(root) / out;
  }
  fs::create_directories(out);
  return out;
}

Vec start_point(const Config& cfg, const CatalogFunction& f) {
  const int d = f.stratification().ambient_dim();
  Vec x1(d);
  if (cfg.start.empty()) {
    if (cfg.function == "appendix_fig1" && d == 2) {
      x1 << 0.4, 5.5;  // the reference experiment start
    } else {
      const auto& box = f.stratification().domain();
      for (int i = 0; i < d; ++i) x1[i] = box.lo[i] + 0.75 * (box.hi[i] - box.lo[i]);
    }
    return x1;
  }
  if (static_cast<int>(cfg.start.size()) != d) {
    throw ConfigError("start point dimension mismatch (expected " + std::to_string(d) + ")");
  }
  for (int i = 0; i < d; ++i) x1[i] = cfg.start[static_cast<size_t>(i)];
  return x1;
}

NeighborhoodParams resolve_params(const Config& cfg, const CatalogFunction& f, double gamma) {
  NeighborhoodParams p = NeighborhoodParams::auto_for(f, gamma, cfg.gamma0);
  if (cfg.alpha != "auto") p.alpha = std::stod(cfg.alpha);
  if (cfg.beta != "auto") p.beta = std::stod(cfg.beta);
  if (cfg.constants_override) p.constants = cfg.constants;
  p.require_valid(cfg.strict_gamma0);  // throws ConfigError naming the violation
  return p;
}

StepSchedule resolve_schedule(const Config& cfg) {
  if (cfg.schedule_kind == "constant") return StepSchedule::constant(cfg.gamma);
  if (cfg.schedule_kind == "inverse_k") return StepSchedule::inverse_k(cfg.c);
  if (cfg.schedule_kind == "explicit") return StepSchedule::explicit_list(cfg.explicit_steps);
  throw ConfigError("unknown schedule kind: " + cfg.schedule_kind);
}

ordered_json ledger_json(const DescentLedger& led) {
  ordered_json j;
  j["excluded_rows"] = led.excluded_rows;
  j["sum_gamma_grad_sq"] = led.sum_gamma_grad_sq;
  j["switching_sum"] = led.switching_sum;
  j["delta_f"] = led.delta_f;
  j["delta_f_usable"] = led.delta_f_usable;
  j["lhs_descent"] = led.lhs_descent;
  j["rhs_descent"] = led.rhs_descent;
  j["descent_inequality_holds"] = led.descent_inequality_holds;
  j["payments"] = {{"PL", led.pay.PL},
                   {"PR", led.pay.PR},
                   {"boundary_flagged", led.pay.boundary_flagged},
                   {"boundary_payment", led.pay.boundary_payment}};
  j["payment_rhs"] = led.payment_rhs;
  j["payment_bound_holds"] = led.payment_bound_holds;
  j["steps_with_hypotheses"] = led.steps_with_hypotheses;
  j["step_inequality_failures"] = led.step_inequality_failures;
  return j;
}

ordered_json switch_rows_json(const std::vector<SwitchCountRow>& rows) {
  ordered_json arr = ordered_json::array();
  bool all = true;
  for (const auto& r : rows) {
    arr.push_back({{"stratum", r.stratum_id},
                   {"left", r.left_observed},
                   {"right", r.right_observed},
                   {"bound", r.bound},
                   {"within", r.within}});
    all = all && r.within;
  }
  ordered_json j;
  j["all_within"] = all;
  j["rows"] = std::move(arr);
  return j;
}

double certificate_pass_rate(const Selection& sel, const Trajectory& traj,
                             const Stratification& strat, const NeighborhoodParams& p) {
  int64_t pass = 0;
  for (int64_t k = 1; k <= traj.K(); ++k) {
    const auto& s = strat.by_id(sel.psi(k));
    const double bound = std::pow(p.gamma, p.alpha + strat.rank_of(s.id()) * p.beta);
    if (s.distance(traj.x(k)) <= bound * (1.0 + 1e-12)) ++pass;
  }
  return static_cast<double>(pass) / static_cast<double>(traj.K());
}

int cmd_run(const Config& cfg) {
  const auto& f = catalog_get(cfg.function);
  const Vec x1 = start_point(cfg, f);
  const NeighborhoodParams p = resolve_params(cfg, f, cfg.gamma);
  const fs::path out = resolve_out_dir(cfg);

  const Trajectory traj = run(f, x1, StepSchedule::constant(cfg.gamma), cfg.K, cfg.projected);
  const Selection sel = build_selection(traj, f.stratification(), p);
  const auto validity = is_valid(sel, traj, f.stratification(), p);
  const auto goodness = is_good(sel, traj, f.stratification(), p);
  const auto led = descent_ledger(sel, traj, f, p);
  const auto counts = switch_count_bound(sel, traj, f.stratification(), p);

  write_file((out / "trajectory.csv").string(), trajectory_to_csv(traj));
  write_file((out / "selection.json").string(), selection_to_json(sel, f.stratification()) + "\n");
  write_file((out / "ledger.csv").string(), ledger_to_csv(led));
  write_file((out / "stratification.json").string(), f.stratification().describe_json() + "\n");
  write_file((out / "params.json").string(), p.to_json() + "\n");
  write_file((out / "trajectory.svg").string(), trajectory_svg(traj, f.stratification()));

  ordered_json rep;
  rep["function"] = f.name();
  rep["K"] = traj.K();
  rep["gamma"] = cfg.gamma;
  rep["start"] = std::vector<double>(x1.data(), x1.data() + x1.size());
  rep["seed"] = cfg.seed;
  rep["config_hash"] = traj.config_hash;
  rep["escaped_domain"] = traj.escaped_domain;
  rep["valid"] = validity.valid;
  if (!validity.valid) {
    rep["first_violation_k"] = validity.first_violation_k;
    rep["validity_reason"] = validity.reason;
  }
  rep["good"] = goodness.good;
  if (!goodness.good) {
    rep["violated_clause"] = goodness.violated_clause;
    rep["goodness_reason"] = goodness.reason;
  }
  rep["ledger"] = ledger_json(led);
  rep["switch_counts"] = switch_rows_json(counts);
  rep["certificate_pass_rate"] = certificate_pass_rate(sel, traj, f.stratification(), p);
  rep["theory_violations"] = p.theory_violations();
  write_file((out / "report.json").string(), rep.dump(2) + "\n");
  std::cout << "run: wrote " << out.string() << " (valid=" << (validity.valid ? "yes" : "no")
            << ", good=" << (goodness.good ? "yes" : "no") << ")\n";
  return 0;
}

int cmd_verify(const std::string& traj_path, const std::string& sel_path,
               const std::string& strat_path, const std::string& params_path,
               const std::string& report_out) {
  const Trajectory traj = trajectory_from_csv(read_file(traj_path));
  const Selection sel = selection_from_json(read_file(sel_path));
  const Stratification strat = Stratification::from_json(read_file(strat_path));
  const NeighborhoodParams p = NeighborhoodParams::from_json(read_file(params_path));
  if (traj.K() != sel.K()) throw ParseError("trajectory and selection disagree on K");
  if (traj.dim() != strat.ambient_dim()) {
    throw ParseError("trajectory and stratification disagree on the ambient dimension");
  }
  const auto validity = is_valid(sel, traj, strat, p);
  const auto goodness = is_good(sel, traj, strat, p);

  ordered_json rep;
  rep["K"] = traj.K();
  rep["valid"] = validity.valid;
  rep["good"] = goodness.good;
  if (!validity.valid) {
    rep["first_violation_k"] = validity.first_violation_k;
    rep["validity_reason"] = validity.reason;
  }
  if (!goodness.good) {
    rep["violated_clause"] = goodness.violated_clause;
    rep["goodness_stratum"] = goodness.stratum_id;
    rep["goodness_witness_k"] = goodness.witness_k;
    rep["goodness_reason"] = goodness.reason;
  }
  const std::string text = rep.dump(2) + "\n";
  if (!report_out.empty()) write_file(report_out, text);
  std::cout << text;
  return validity.valid && goodness.good ? 0 : 1;
}

int cmd_rate_sweep(const Config& cfg) {
  if (cfg.K_list.empty()) throw ConfigError("rate-sweep requires a non-empty K list");
  const auto& f = catalog_get(cfg.function);
  const Vec x1 = start_point(cfg, f);
  const fs::path out = resolve_out_dir(cfg);
  const RateReport rep = rate_report(f, x1, cfg.K_list, cfg.gamma0);

  std::string csv = "K,gamma,mean_grad_sq,certificate_pass_rate,excluded_rows,valid,good,skipped\n";
  std::vector<double> Ks, vals;
  char buf[256];
  for (const auto& r : rep.rows) {
    if (r.skipped) {
      std::cerr << "warning: K=" << r.K << " skipped (gamma=" << r.gamma
                << " >= gamma0=" << cfg.gamma0 << ")\n";
    } else {
      Ks.push_back(static_cast<double>(r.K));
      vals.push_back(r.mean_grad_sq);
    }
    std::snprintf(buf, sizeof(buf), "%lld,%.17g,%.17g,%.17g,%lld,%d,%d,%d\n",
                  static_cast<long long>(r.K), r.gamma, r.mean_grad_sq,
                  r.certificate_pass_rate, static_cast<long long>(r.excluded_rows),
                  r.valid ? 1 : 0, r.good ? 1 : 0, r.skipped ? 1 : 0);
    csv += buf;
  }
  write_file((out / "rates.csv").string(), csv);
  write_file((out / "rates.svg").string(), rates_svg(Ks, vals));
  ordered_json j;
  j["fitted_slope"] = rep.fitted_slope;
  j["fitted_intercept"] = rep.fitted_intercept;
  j["rows_run"] = Ks.size();
  write_file((out / "report.json").string(), j.dump(2) + "\n");
  std::cout << "rate-sweep: fitted log-log slope " << rep.fitted_slope << "\n";
  return 0;
}

int cmd_kl(const Config& cfg, bool start_given) {
  const auto& f = catalog_get(cfg.function);
  Config local = cfg;
  if (!start_given && cfg.function == "appendix_fig1") {
    // Default start near the terminal kink rest: the 1/k budget only moves
    // the iterate a bounded total distance, so certification needs a start
    // within reach of the attractor at (0, 0).
    local.start = {0.01, 0.01};
  }
  const Vec x1 = start_point(local, f);
  const auto sched = StepSchedule::inverse_k(cfg.c);
  const NeighborhoodParams base = resolve_params(cfg, f, sched.gamma_at(1) / 2.0);
  const fs::path out = resolve_out_dir(cfg);

  const Trajectory traj = run(f, x1, sched, cfg.K);
  const Selection sel = build_selection_varying(traj, f.stratification(), sched, base);
  const auto mon = kl_monitor(traj, sel, f, sched, base, cfg.tail_fraction, cfg.osc_threshold,
                              cfg.sum_threshold);

  std::string csv = "k,proj_term,grad_term\n";
  char buf[128];
  for (size_t i = 0; i < mon.grad_series.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g\n", i + 1, mon.proj_series[i],
                  mon.grad_series[i]);
    csv += buf;
  }
  write_file((out / "kl.csv").string(), csv);
  ordered_json j;
  j["K"] = traj.K();
  j["c"] = cfg.c;
  j["start"] = std::vector<double>(x1.data(), x1.data() + x1.size());
  j["proj_sum"] = mon.proj_sum;
  j["grad_sum"] = mon.grad_sum;
  j["tail_start"] = mon.tail_start;
  j["tail_proj_increment"] = mon.tail_proj_increment;
  j["tail_grad_increment"] = mon.tail_grad_increment;
  j["tail_oscillation"] = mon.tail_oscillation;
  j["certificate"] = mon.certificate;
  write_file((out / "report.json").string(), j.dump(2) + "\n");
  std::cout << "kl: certificate " << (mon.certificate ? "pass" : "fail") << " (tail osc "
            << mon.tail_oscillation << ")\n";
  return 0;
}

int cmd_varying(const Config& cfg) {
  const auto& f = catalog_get(cfg.function);
  const Vec x1 = start_point(cfg, f);
  Config local = cfg;
  if (local.schedule_kind == "constant") local.schedule_kind = "inverse_k";
  const auto sched = resolve_schedule(local);
  const NeighborhoodParams base = resolve_params(cfg, f, sched.gamma_at(cfg.K));
  const fs::path out = resolve_out_dir(cfg);

  const Trajectory traj = run(f, x1, sched, cfg.K);
  const Selection sel = build_selection_varying(traj, f.stratification(), sched, base);
  const auto vl = varying_ledger(sel, traj, f, sched, base);

  write_file((out / "trajectory.csv").string(), trajectory_to_csv(traj));
  write_file((out / "selection.json").string(), selection_to_json(sel, f.stratification()) + "\n");
  write_file((out / "trajectory.svg").string(), trajectory_svg(traj, f.stratification()));

  ordered_json j;
  j["K"] = traj.K();
  ordered_json arr = ordered_json::array();
  for (const auto& iv : vl.intervals) arr.push_back({{"lo", iv.lo}, {"hi", iv.hi}});
  j["intervals"] = std::move(arr);
  j["sum_gamma_grad_sq"] = vl.sum_gamma_grad_sq;
  j["switching_interior"] = vl.switching_interior;
  j["switching_boundary"] = vl.switching_boundary;
  j["delta_f"] = vl.delta_f;
  j["excluded_rows"] = vl.excluded_rows;
  j["corollary_bracket"] = vl.corollary_bracket;
  j["fitted_C"] = vl.fitted_C;
  j["payment_bracket"] = vl.payment_bracket;
  j["fitted_payment_C"] = vl.fitted_payment_C;
  write_file((out / "report.json").string(), j.dump(2) + "\n");
  std::cout << "varying: " << vl.intervals.size() << " doubling intervals, fitted C "
            << vl.fitted_C << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"strata-lab: a laboratory for the subgradient method on stratified functions"};
  app.require_subcommand(1);

  Config cfg;
  std::string config_path;
  std::string start_csv;
  std::string k_list_csv;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config file (flags win over it)");
    sub->add_option("--function", cfg.function, "catalog function name");
    sub->add_option("--start", start_csv, "start point, comma separated");
    sub->add_option("--K", cfg.K, "number of iterations");
    sub->add_option("--gamma", cfg.gamma, "constant step size");
    sub->add_option("--c", cfg.c, "coefficient of the 1/k schedule");
    sub->add_option("--alpha", cfg.alpha, "outer exponent, or 'auto'");
    sub->add_option("--beta", cfg.beta, "inner exponent, or 'auto'");
    sub->add_option("--gamma0", cfg.gamma0, "step-size ceiling");
    sub->add_option("--out", cfg.out_dir, "output directory");
    sub->add_option("--seed", cfg.seed, "seed recorded with the run");
    sub->add_flag("--strict-gamma0", cfg.strict_gamma0,
                  "fail when the theory-regime inequalities are violated");
  };

  auto* run_cmd = app.add_subcommand("run", "constant-step run with selection and ledger");
  add_common(run_cmd);
  run_cmd->add_flag("--projected", cfg.projected, "clip iterates to the domain box (non-plain)");

  auto* verify_cmd = app.add_subcommand("verify", "check validity/goodness of recorded files");
  std::string v_traj, v_sel, v_strat, v_params, v_report;
  verify_cmd->add_option("--trajectory", v_traj, "trajectory.csv")->required();
  verify_cmd->add_option("--selection", v_sel, "selection.json")->required();
  verify_cmd->add_option("--stratification", v_strat, "stratification.json")->required();
  verify_cmd->add_option("--params", v_params, "params.json")->required();
  verify_cmd->add_option("--report", v_report, "optional verdict output path");

  auto* rate_cmd = app.add_subcommand("rate-sweep", "corollary-rule step sizes over a K list");
  add_common(rate_cmd);
  rate_cmd->add_option("--K-list", k_list_csv, "comma-separated horizons");

  auto* kl_cmd = app.add_subcommand("kl", "1/k schedule sequential-convergence monitor");
  add_common(kl_cmd);
  kl_cmd->add_option("--tail-fraction", cfg.tail_fraction, "tail window fraction");
  kl_cmd->add_option("--osc-threshold", cfg.osc_threshold, "tail oscillation threshold");
  kl_cmd->add_option("--sum-threshold", cfg.sum_threshold, "tail increment threshold");

  auto* var_cmd = app.add_subcommand("varying", "decreasing-step run with per-interval selection");
  add_common(var_cmd);
  var_cmd->add_option("--schedule", cfg.schedule_kind, "inverse_k | explicit | constant");

  CLI11_PARSE(app, argc, argv);

  try {
    CLI::App* active = app.get_subcommands().front();
    if (!config_path.empty()) merge_config_file(cfg, config_path, active);
    if (!start_csv.empty()) {
      cfg.start.clear();
      std::stringstream ss(start_csv);
      std::string tok;
      while (std::getline(ss, tok, ',')) cfg.start.push_back(std::stod(tok));
    }
    if (!k_list_csv.empty()) {
      cfg.K_list.clear();
      std::stringstream ss(k_list_csv);
      std::string tok;
      while (std::getline(ss, tok, ',')) cfg.K_list.push_back(std::stoll(tok));
    }

    if (run_cmd->parsed()) return cmd_run(cfg);
    if (verify_cmd->parsed()) return cmd_verify(v_traj, v_sel, v_strat, v_params, v_report);
    if (rate_cmd->parsed()) return cmd_rate_sweep(cfg);
    if (kl_cmd->parsed()) {
      return cmd_kl(cfg, kl_cmd->count("--start") > 0 || !cfg.start.empty());
    }
    if (var_cmd->parsed()) return cmd_varying(cfg);
  } catch (const UnknownCatalogFunction& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
