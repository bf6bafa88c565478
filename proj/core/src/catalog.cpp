#include "strata/catalog.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "strata/constants_estimator.hpp"

namespace strata {

namespace {

double sgn(double t) { return t > 0 ? 1.0 : (t < 0 ? -1.0 : 0.0); }

Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

Vec v1(double a) {
  Vec v(1);
  v << a;
  return v;
}

// Refined grid max of ||subgradient|| over the domain box.
double sampled_subgradient_max(const CatalogFunction::GradFn& g, const Box& box) {
  const int d = box.dim();
  double best = 0.0;
  Vec best_x = box.lo;
  auto sweep = [&](const Vec& lo, const Vec& hi, int n) {
    std::vector<int> idx(static_cast<size_t>(d), 0);
    Vec x(d);
    while (true) {
      for (int i = 0; i < d; ++i) {
        x[i] = lo[i] + (hi[i] - lo[i]) * idx[static_cast<size_t>(i)] / (n - 1);
      }
      const double nv = g(x).norm();
      if (nv > best) {
        best = nv;
        best_x = x;
      }
      int axis = 0;
      while (axis < d) {
        if (++idx[static_cast<size_t>(axis)] < n) break;
        idx[static_cast<size_t>(axis)] = 0;
        ++axis;
      }
      if (axis == d) break;
    }
  };
  const int coarse = d == 1 ? 4001 : 321;
  sweep(box.lo, box.hi, coarse);
  // Zoom around the argmax a few times to catch narrow ridges.
  Vec span = (box.hi - box.lo) / (coarse - 1);
  for (int round = 0; round < 3; ++round) {
    Vec lo(d), hi(d);
    for (int i = 0; i < d; ++i) {
      lo[i] = std::max(box.lo[i], best_x[i] - span[i]);
      hi[i] = std::min(box.hi[i], best_x[i] + span[i]);
    }
    sweep(lo, hi, 41);
    span /= 20.0;
  }
  return best;
}

std::vector<bool> sides(bool a, bool b) { return {a, b}; }

// ---------------------------------------------------------------------------
// appendix_fig1: the switching-trajectory function
//   f(x,y) = |y| + l/2 (1+sin(pi y))|x| + l/2 (1-sin(pi y))|x-c| + mu x^2
//            + B1 exp(-(x-c)^2/sx^2 - (y-4.2)^2/sy^2)
//            + B2 exp(-x^2/sx^2 - (y-3.2)^2/sy^2)
// on K = [-2,2] x [-1,8], with B1=B2=1, sx=0.02, sy=0.35, mu=0.1, c=0.5, l=1.

struct Fig1 {
  static constexpr double B1 = 1.0, B2 = 1.0;
  static constexpr double sx = 0.02, sy = 0.35;
  static constexpr double mu = 0.1, c = 0.5, lam = 1.0;
  static constexpr double y1 = 4.2, y2 = 3.2;

  static double e1(double x, double y) {
    return std::exp(-(x - c) * (x - c) / (sx * sx) - (y - y1) * (y - y1) / (sy * sy));
  }
  static double e2(double x, double y) {
    return std::exp(-x * x / (sx * sx) - (y - y2) * (y - y2) / (sy * sy));
  }
  static double value(const Vec& p) {
    const double x = p[0], y = p[1];
    return std::abs(y) + 0.5 * lam * (1 + std::sin(M_PI * y)) * std::abs(x) +
           0.5 * lam * (1 - std::sin(M_PI * y)) * std::abs(x - c) + mu * x * x +
           B1 * e1(x, y) + B2 * e2(x, y);
  }
  // Partial derivatives with the absolute-value signs supplied by the caller.
  static double dx(double x, double y, double sgn_x, double sgn_xc) {
    return 0.5 * lam * (1 + std::sin(M_PI * y)) * sgn_x +
           0.5 * lam * (1 - std::sin(M_PI * y)) * sgn_xc + 2 * mu * x +
           B1 * (-2 * (x - c) / (sx * sx)) * e1(x, y) + B2 * (-2 * x / (sx * sx)) * e2(x, y);
  }
  static double dy(double x, double y, double sgn_y) {
    return sgn_y + 0.5 * lam * M_PI * std::cos(M_PI * y) * (std::abs(x) - std::abs(x - c)) +
           B1 * (-2 * (y - y1) / (sy * sy)) * e1(x, y) +
           B2 * (-2 * (y - y2) / (sy * sy)) * e2(x, y);
  }
  static Vec subgrad(const Vec& p) {
    const double x = p[0], y = p[1];
    return v2(dx(x, y, sgn(x), sgn(x - c)), dy(x, y, sgn(y)));
  }
};

CatalogFunction make_appendix_fig1() {
  const double c = Fig1::c;
  Box box{v2(-2.0, -1.0), v2(2.0, 8.0)};
  std::vector<Stratum> strata;
  strata.push_back(Stratum::point(0, v2(0.0, 0.0)));
  strata.push_back(Stratum::point(1, v2(c, 0.0)));
  // vertical kink lines, split at y = 0
  strata.push_back(Stratum::segment(2, v2(0, 0), v2(0, 1), 0.0, 8.0, true, false));
  strata.push_back(Stratum::segment(3, v2(0, 0), v2(0, 1), -1.0, 0.0, false, true));
  strata.push_back(Stratum::segment(4, v2(c, 0), v2(0, 1), 0.0, 8.0, true, false));
  strata.push_back(Stratum::segment(5, v2(c, 0), v2(0, 1), -1.0, 0.0, false, true));
  // the |y| kink line, split at x = 0 and x = c
  strata.push_back(Stratum::segment(6, v2(0, 0), v2(1, 0), -2.0, 0.0, false, true));
  strata.push_back(Stratum::segment(7, v2(0, 0), v2(1, 0), 0.0, c, true, true));
  strata.push_back(Stratum::segment(8, v2(0, 0), v2(1, 0), c, 2.0, true, false));
  // open 2-d cells
  strata.push_back(Stratum::region(9, v2(-2, 0), v2(0, 8), sides(false, true), sides(false, false)));
  strata.push_back(Stratum::region(10, v2(0, 0), v2(c, 8), sides(true, true), sides(true, false)));
  strata.push_back(Stratum::region(11, v2(c, 0), v2(2, 8), sides(true, true), sides(false, false)));
  strata.push_back(Stratum::region(12, v2(-2, -1), v2(0, 0), sides(false, false), sides(true, true)));
  strata.push_back(Stratum::region(13, v2(0, -1), v2(c, 0), sides(true, false), sides(true, true)));
  strata.push_back(Stratum::region(14, v2(c, -1), v2(2, 0), sides(true, false), sides(false, true)));

  auto on_x_line = [](double x_line, double sgn_y) {
    return [x_line, sgn_y](const Vec& y) { return v2(0.0, Fig1::dy(x_line, y[1], sgn_y)); };
  };
  auto on_y_line = [](double sgn_x, double sgn_xc) {
    return [sgn_x, sgn_xc](const Vec& y) { return v2(Fig1::dx(y[0], 0.0, sgn_x, sgn_xc), 0.0); };
  };
  auto in_cell = [](double sgn_x, double sgn_xc, double sgn_y) {
    return [sgn_x, sgn_xc, sgn_y](const Vec& y) {
      return v2(Fig1::dx(y[0], y[1], sgn_x, sgn_xc), Fig1::dy(y[0], y[1], sgn_y));
    };
  };
  std::vector<CatalogFunction::GradFn> restricted(15);
  restricted[0] = [](const Vec&) { return Vec::Zero(2).eval(); };
  restricted[1] = [](const Vec&) { return Vec::Zero(2).eval(); };
  restricted[2] = on_x_line(0.0, 1.0);
  restricted[3] = on_x_line(0.0, -1.0);
  restricted[4] = on_x_line(c, 1.0);
  restricted[5] = on_x_line(c, -1.0);
  restricted[6] = on_y_line(-1.0, -1.0);
  restricted[7] = on_y_line(1.0, -1.0);
  restricted[8] = on_y_line(1.0, 1.0);
  restricted[9] = in_cell(-1, -1, 1);
  restricted[10] = in_cell(1, -1, 1);
  restricted[11] = in_cell(1, 1, 1);
  restricted[12] = in_cell(-1, -1, -1);
  restricted[13] = in_cell(1, -1, -1);
  restricted[14] = in_cell(1, 1, -1);

  return CatalogFunction("appendix_fig1", Stratification(std::move(strata), box), Fig1::value,
                         Fig1::subgrad, std::move(restricted));
}

// ---------------------------------------------------------------------------
// abs_diff_sq: f(x,y) = (|x| - |y|)^2 on [-2,2]^2, axes refined into a true
// partition (origin, four open rays, four open quadrants).

CatalogFunction make_abs_diff_sq() {
  Box box{v2(-2, -2), v2(2, 2)};
  std::vector<Stratum> strata;
  strata.push_back(Stratum::point(0, v2(0, 0)));
  strata.push_back(Stratum::segment(1, v2(0, 0), v2(1, 0), 0.0, 2.0, true, false));
  strata.push_back(Stratum::segment(2, v2(0, 0), v2(1, 0), -2.0, 0.0, false, true));
  strata.push_back(Stratum::segment(3, v2(0, 0), v2(0, 1), 0.0, 2.0, true, false));
  strata.push_back(Stratum::segment(4, v2(0, 0), v2(0, 1), -2.0, 0.0, false, true));
  strata.push_back(Stratum::region(5, v2(0, 0), v2(2, 2), sides(true, true), sides(false, false)));
  strata.push_back(Stratum::region(6, v2(-2, 0), v2(0, 2), sides(false, true), sides(true, false)));
  strata.push_back(Stratum::region(7, v2(-2, -2), v2(0, 0), sides(false, false), sides(true, true)));
  strata.push_back(Stratum::region(8, v2(0, -2), v2(2, 0), sides(true, false), sides(false, true)));

  auto value = [](const Vec& p) {
    const double q = std::abs(p[0]) - std::abs(p[1]);
    return q * q;
  };
  auto subgrad = [](const Vec& p) {
    const double q = std::abs(p[0]) - std::abs(p[1]);
    return v2(2 * q * sgn(p[0]), -2 * q * sgn(p[1]));
  };
  auto quadrant = [](double sx, double sy) {
    return [sx, sy](const Vec& p) {
      const double q = sx * p[0] - sy * p[1];
      return v2(2 * q * sx, -2 * q * sy);
    };
  };
  std::vector<CatalogFunction::GradFn> restricted(9);
  restricted[0] = [](const Vec&) { return Vec::Zero(2).eval(); };
  // f restricted to the x-axis is x^2, to the y-axis y^2.
  restricted[1] = [](const Vec& p) { return v2(2 * p[0], 0.0); };
  restricted[2] = [](const Vec& p) { return v2(2 * p[0], 0.0); };
  restricted[3] = [](const Vec& p) { return v2(0.0, 2 * p[1]); };
  restricted[4] = [](const Vec& p) { return v2(0.0, 2 * p[1]); };
  restricted[5] = quadrant(1, 1);
  restricted[6] = quadrant(-1, 1);
  restricted[7] = quadrant(-1, -1);
  restricted[8] = quadrant(1, -1);

  return CatalogFunction("abs_diff_sq", Stratification(std::move(strata), box), value, subgrad,
                         std::move(restricted));
}

// ---------------------------------------------------------------------------
// two_lines_demo: f(x,y) = |x| * |x-c| + 0.1 y^2 on [-2,2]^2.
// Two full vertical kink lines, both two-sided attractors, no
// zero-dimensional strata (R = 1).

CatalogFunction make_two_lines_demo() {
  const double c = 0.5;
  Box box{v2(-2, -2), v2(2, 2)};
  std::vector<Stratum> strata;
  strata.push_back(Stratum::segment(0, v2(0, 0), v2(0, 1), -2.0, 2.0, false, false));
  strata.push_back(Stratum::segment(1, v2(c, 0), v2(0, 1), -2.0, 2.0, false, false));
  strata.push_back(Stratum::region(2, v2(-2, -2), v2(0, 2), sides(false, false), sides(true, false)));
  strata.push_back(Stratum::region(3, v2(0, -2), v2(c, 2), sides(true, false), sides(true, false)));
  strata.push_back(Stratum::region(4, v2(c, -2), v2(2, 2), sides(true, false), sides(false, false)));

  auto value = [c](const Vec& p) {
    return std::abs(p[0]) * std::abs(p[0] - c) + 0.1 * p[1] * p[1];
  };
  auto subgrad = [c](const Vec& p) {
    return v2(sgn(p[0]) * std::abs(p[0] - c) + std::abs(p[0]) * sgn(p[0] - c), 0.2 * p[1]);
  };
  auto strip = [c](double sx, double sxc) {
    return [c, sx, sxc](const Vec& p) {
      return v2(sx * std::abs(p[0] - c) + std::abs(p[0]) * sxc, 0.2 * p[1]);
    };
  };
  std::vector<CatalogFunction::GradFn> restricted(5);
  // f restricted to either line is 0.1 y^2.
  restricted[0] = [](const Vec& p) { return v2(0.0, 0.2 * p[1]); };
  restricted[1] = [](const Vec& p) { return v2(0.0, 0.2 * p[1]); };
  restricted[2] = strip(-1, -1);
  restricted[3] = strip(1, -1);
  restricted[4] = strip(1, 1);

  return CatalogFunction("two_lines_demo", Stratification(std::move(strata), box), value, subgrad,
                         std::move(restricted));
}

// ---------------------------------------------------------------------------
// abs_power(p): f(x) = |x|^{1+p} on [-1.5, 1.5], p > 0.

CatalogFunction make_abs_power(double p) {
  if (!(p > 0)) throw UnknownCatalogFunction("abs_power requires a positive exponent");
  Box box{v1(-1.5), v1(1.5)};
  std::vector<Stratum> strata;
  strata.push_back(Stratum::point(0, v1(0.0)));
  strata.push_back(Stratum::region(1, v1(0.0), v1(1.5), {true}, {false}));
  strata.push_back(Stratum::region(2, v1(-1.5), v1(0.0), {false}, {true}));

  auto value = [p](const Vec& x) { return std::pow(std::abs(x[0]), 1.0 + p); };
  auto subgrad = [p](const Vec& x) {
    return v1((1.0 + p) * std::pow(std::abs(x[0]), p) * sgn(x[0]));
  };
  std::vector<CatalogFunction::GradFn> restricted(3);
  restricted[0] = [](const Vec&) { return Vec::Zero(1).eval(); };
  restricted[1] = [p](const Vec& x) { return v1((1.0 + p) * std::pow(x[0], p)); };
  restricted[2] = [p](const Vec& x) { return v1(-(1.0 + p) * std::pow(-x[0], p)); };

  std::string name = p == 1.0 ? "abs_power" : "abs_power(" + std::to_string(p) + ")";
  return CatalogFunction(std::move(name), Stratification(std::move(strata), box), value, subgrad,
                         std::move(restricted));
}

}  // namespace

CatalogFunction::CatalogFunction(std::string name, Stratification strat, ValueFn value,
                                 GradFn subgradient, std::vector<GradFn> restricted)
    : name_(std::move(name)),
      strat_(std::move(strat)),
      value_(std::move(value)),
      subgrad_(std::move(subgradient)),
      restricted_(std::move(restricted)) {
  if (restricted_.size() != strat_.strata().size()) {
    throw Error("catalog entry: one restricted gradient per stratum required");
  }
  const auto bad = strat_.partition_violation(64);
  if (!bad.empty()) throw Error("catalog entry '" + name_ + "': strata do not partition K");
  std::string diag;
  if (!strat_.boundary_condition_holds(40, 0x5eed, &diag)) {
    throw Error("catalog entry '" + name_ + "': " + diag);
  }
}

Vec CatalogFunction::restricted_gradient(int stratum_id, const Vec& y) const {
  const Stratum& s = strat_.by_id(stratum_id);
  if (s.distance(y) > 1e-9) {
    throw NotOnStratum("restricted_gradient: point is not on stratum " +
                       std::to_string(stratum_id));
  }
  return restricted_[static_cast<size_t>(stratum_id)](y);
}

const CatalogFunction& catalog_get(const std::string& name) {
  static std::mutex mu;
  static std::map<std::string, std::unique_ptr<CatalogFunction>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(name);
  if (it != cache.end()) return *it->second;

  std::unique_ptr<CatalogFunction> built;
  if (name == "appendix_fig1") {
    built = std::make_unique<CatalogFunction>(make_appendix_fig1());
  } else if (name == "abs_diff_sq") {
    built = std::make_unique<CatalogFunction>(make_abs_diff_sq());
  } else if (name == "two_lines_demo") {
    built = std::make_unique<CatalogFunction>(make_two_lines_demo());
  } else if (name == "abs_power") {
    built = std::make_unique<CatalogFunction>(make_abs_power(1.0));
  } else if (name.rfind("abs_power(", 0) == 0 && name.back() == ')') {
    double p = 0.0;
    try {
      p = std::stod(name.substr(10, name.size() - 11));
    } catch (const std::exception&) {
      throw UnknownCatalogFunction("cannot parse exponent in '" + name + "'");
    }
    built = std::make_unique<CatalogFunction>(make_abs_power(p));
  } else {
    std::string known;
    for (const auto& n : catalog_names()) known += (known.empty() ? "" : ", ") + n;
    throw UnknownCatalogFunction("unknown function '" + name + "'; catalog: " + known);
  }

  built->lipschitz_G_ = 1.1 * sampled_subgradient_max(built->subgrad_, built->strat_.domain());
  built->frozen_ = estimate_constants(*built, 4000, 0xC0FFEE).frozen;
  auto [pos, inserted] = cache.emplace(name, std::move(built));
  return *pos->second;
}

std::vector<std::string> catalog_names() {
  return {"appendix_fig1", "abs_diff_sq", "two_lines_demo", "abs_power"};
}

}  // namespace strata
