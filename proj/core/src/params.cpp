#include "strata/params.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

namespace strata {

using nlohmann::ordered_json;

NeighborhoodParams NeighborhoodParams::auto_for(const CatalogFunction& f, double gamma,
                                                double gamma0_ceiling) {
  NeighborhoodParams p;
  p.R = f.stratification().R();
  p.beta = 1.0 / (p.R + 2);
  p.alpha = p.beta / 3.0;
  p.gamma = gamma;
  p.gamma0 = gamma0_ceiling;
  p.constants = f.frozen_constants();
  // Keep the outer cones inside the well-posed cones at desk-scale step
  // sizes; projection onto the catalog's flat strata is globally defined, so
  // a wider guard cone stays within the true projection domain. The paper's
  // A3 <= 1/4 requirement remains visible through theory_violations().
  p.A3 = std::clamp(1.05 * std::pow(gamma, p.alpha), 0.25, 0.8);
  return p;
}

NeighborhoodParams NeighborhoodParams::theory_tight(const CatalogFunction& f, double gamma) {
  NeighborhoodParams p;
  p.R = f.stratification().R();
  p.beta = 1.0 / (p.R + 2);
  p.alpha = p.beta / 3.0;
  p.constants = f.frozen_constants();
  p.A3 = 0.25;
  const auto& c = p.constants;
  const double M = std::max({4.0 * c.lambda_hi * c.G,
                             8.0 * c.L2 * c.lambda_hi * c.lambda_hi / c.lambda_lo,
                             2.0 * c.L1 * c.G * c.lambda_hi});
  double g0 = 0.99;
  g0 = std::min(g0, std::pow(0.25, 1.0 / (p.beta - p.alpha)));          // 4 g0^(b-a) <= 1
  g0 = std::min(g0, std::pow(2.0 * c.G, 1.0 / ((p.R + 1) * p.beta - 1)));  // g0^((R+1)b-1) >= 2G
  g0 = std::min(g0, std::pow(M, 1.0 / (p.R * p.beta - 1)));             // g0^(Rb-1) >= M
  g0 = std::min(g0, std::pow(p.A3 / 3.0, 1.0 / p.alpha));               // 3 g0^a <= A3
  p.gamma0 = g0;
  p.gamma = gamma > 0 ? gamma : g0 / 2.0;
  return p;
}

std::vector<std::string> NeighborhoodParams::hard_violations() const {
  std::vector<std::string> v;
  if (!(alpha > 0 && beta > 0 && alpha < 1 && beta < 1)) v.push_back("alpha, beta in (0,1)");
  if (!(alpha < beta)) v.push_back("alpha < beta");
  if (!((R + 1) * beta < 1)) v.push_back("(R+1)*beta < 1");
  if (!(gamma > 0)) v.push_back("gamma > 0");
  if (!(gamma0 > 0)) v.push_back("gamma0 > 0");
  if (!(gamma < gamma0)) v.push_back("gamma < gamma0");
  if (!(constants.G > 0 && constants.L1 > 0 && constants.L2 > 0 && constants.L0 > 0 &&
        constants.lambda_lo > 0 && constants.lambda_hi >= constants.lambda_lo)) {
    v.push_back("constants positive with lambda_lo <= lambda_hi");
  }
  return v;
}

std::vector<std::string> NeighborhoodParams::theory_violations() const {
  std::vector<std::string> v;
  const auto& c = constants;
  if (!(4.0 * std::pow(gamma0, beta - alpha) <= 1.0)) {
    v.push_back("4*gamma0^(beta-alpha) <= 1");
  }
  if (!(std::pow(gamma0, (R + 1) * beta - 1.0) >= 2.0 * c.G)) {
    v.push_back("gamma0^((R+1)*beta-1) >= 2G");
  }
  const double M = std::max({4.0 * c.lambda_hi * c.G,
                             8.0 * c.L2 * c.lambda_hi * c.lambda_hi / c.lambda_lo,
                             2.0 * c.L1 * c.G * c.lambda_hi});
  if (!(std::pow(gamma0, R * beta - 1.0) >= M)) {
    v.push_back("gamma0^(R*beta-1) >= max{4*lh*G, 8*L2*lh^2/ll, 2*L1*G*lh}");
  }
  if (!(3.0 * std::pow(gamma0, alpha) <= A3)) v.push_back("3*gamma0^alpha <= A3");
  if (!(A3 <= 0.25)) v.push_back("A3 <= 1/4");
  return v;
}

void NeighborhoodParams::require_valid(bool strict) const {
  auto join = [](const std::vector<std::string>& v) {
    std::string s;
    for (const auto& e : v) s += (s.empty() ? "" : "; ") + e;
    return s;
  };
  const auto hard = hard_violations();
  if (!hard.empty()) throw ConfigError("invalid parameters: " + join(hard));
  if (strict) {
    const auto theory = theory_violations();
    if (!theory.empty()) throw ConfigError("theory-regime violated: " + join(theory));
  }
}

std::string NeighborhoodParams::to_json() const {
  ordered_json j;
  j["alpha"] = alpha;
  j["beta"] = beta;
  j["gamma"] = gamma;
  j["gamma0"] = gamma0;
  j["R"] = R;
  j["A3"] = A3;
  j["constants"] = {{"G", constants.G},         {"L1", constants.L1},
                    {"L2", constants.L2},       {"L0", constants.L0},
                    {"lambda_lo", constants.lambda_lo}, {"lambda_hi", constants.lambda_hi}};
  j["A1"] = A1();
  j["A2"] = A2();
  j["theory_violations"] = theory_violations();
  return j.dump(2);
}

NeighborhoodParams NeighborhoodParams::from_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const std::exception& e) {
    throw ParseError(std::string("params json: ") + e.what());
  }
  try {
    NeighborhoodParams p;
    p.alpha = j.at("alpha").get<double>();
    p.beta = j.at("beta").get<double>();
    p.gamma = j.at("gamma").get<double>();
    p.gamma0 = j.at("gamma0").get<double>();
    p.R = j.at("R").get<int>();
    if (j.contains("A3")) p.A3 = j.at("A3").get<double>();
    const auto& c = j.at("constants");
    p.constants.G = c.at("G").get<double>();
    p.constants.L1 = c.at("L1").get<double>();
    p.constants.L2 = c.at("L2").get<double>();
    p.constants.L0 = c.at("L0").get<double>();
    p.constants.lambda_lo = c.at("lambda_lo").get<double>();
    p.constants.lambda_hi = c.at("lambda_hi").get<double>();
    return p;
  } catch (const std::exception& e) {
    throw ParseError(std::string("params json: ") + e.what());
  }
}

}  // namespace strata
