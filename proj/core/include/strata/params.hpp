#pragma once

#include <string>
#include <vector>

#include "strata/catalog.hpp"

namespace strata {

// Exponents, step sizes and regularity constants that define the conical
// neighborhoods and the descent-ledger inequalities.
//
// Two tiers of constraints:
//  - hard (structural): alpha < beta, (R+1)*beta < 1, gamma < gamma0,
//    positivity. Violations always fail config resolution.
//  - theory-regime: the gamma0 smallness system
//        4*gamma0^(beta-alpha) <= 1
//        gamma0^((R+1)*beta-1) >= 2G
//        gamma0^(R*beta-1)     >= max{4*lh*G, 8*L2*lh^2/ll, 2*L1*G*lh}
//        3*gamma0^alpha <= A3 <= 1/4
//    These hold only at impractically small step sizes for the catalog's
//    estimated constants; they are evaluated and reported on every run and
//    enforced only when `strict` is requested.
struct NeighborhoodParams {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double gamma0 = 0.1;
  int R = 1;
  double A3 = 0.25;
  FrozenConstants constants;

  double A1() const {
    const double lh = constants.lambda_hi;
    return constants.lambda_lo / (16.0 * lh * lh);
  }
  double A2() const {
    const double ll = constants.lambda_lo, lh = constants.lambda_hi;
    return constants.L2 * constants.L2 * (4.0 * lh * lh / ll + ll / 2.0);
  }

  // Corollary defaults: beta = 1/(R+2), alpha = beta/3, plus the function's
  // frozen constants and a desk-scale gamma0 ceiling.
  static NeighborhoodParams auto_for(const CatalogFunction& f, double gamma,
                                     double gamma0_ceiling = 0.1);

  // Same exponents but with gamma0 shrunk until every theory-regime
  // inequality holds; gamma is set to gamma0/2 unless given.
  static NeighborhoodParams theory_tight(const CatalogFunction& f,
                                         double gamma = -1.0);

  std::vector<std::string> hard_violations() const;
  std::vector<std::string> theory_violations() const;
  // Throws ConfigError naming the violated inequality.
  void require_valid(bool strict = false) const;

  std::string to_json() const;
  static NeighborhoodParams from_json(const std::string& text);
};

}  // namespace strata
