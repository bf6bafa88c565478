#include "strata/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "strata/stratification.hpp"

namespace strata {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

struct Mapper {
  double x0, y0, sx, sy;
  int height;
  double px(double x) const { return (x - x0) * sx; }
  double py(double y) const { return height - (y - y0) * sy; }
};

}  // namespace

std::string trajectory_svg(const Trajectory& traj, const Stratification& strat, int width,
                           int height) {
  const Box& box = strat.domain();
  if (box.dim() < 1) return "<svg/>";
  const bool one_d = box.dim() == 1;
  const double x_lo = box.lo[0], x_hi = box.hi[0];
  const double y_lo = one_d ? -1.0 : box.lo[1], y_hi = one_d ? 1.0 : box.hi[1];
  Mapper m{x_lo, y_lo, width / (x_hi - x_lo), height / (y_hi - y_lo), height};

  auto pt = [&](const Vec& p) {
    const double y = one_d ? 0.0 : p[1];
    return num(m.px(p[0])) + "," + num(m.py(y));
  };

  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
                    std::to_string(width) + "\" height=\"" + std::to_string(height) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // stratum overlays
  for (const auto& s : strat.strata()) {
    switch (s.kind()) {
      case StratumKind::Point: {
        const auto& p = s.point_data();
        const double y = one_d ? 0.0 : p.z[1];
        svg += "<circle cx=\"" + num(m.px(p.z[0])) + "\" cy=\"" + num(m.py(y)) +
               "\" r=\"4\" fill=\"crimson\"/>\n";
        break;
      }
      case StratumKind::Segment: {
        const auto& g = s.segment_data();
        const double lo = std::max(g.t_lo, -1e6), hi = std::min(g.t_hi, 1e6);
        const Vec a = g.anchor + lo * g.dir;
        const Vec b = g.anchor + hi * g.dir;
        svg += "<line x1=\"" + num(m.px(a[0])) + "\" y1=\"" + num(m.py(one_d ? 0.0 : a[1])) +
               "\" x2=\"" + num(m.px(b[0])) + "\" y2=\"" + num(m.py(one_d ? 0.0 : b[1])) +
               "\" stroke=\"steelblue\" stroke-width=\"1.5\"/>\n";
        break;
      }
      case StratumKind::CircleArc: {
        const auto& g = s.circle_data();
        svg += "<circle cx=\"" + num(m.px(g.center[0])) + "\" cy=\"" + num(m.py(g.center[1])) +
               "\" r=\"" + num(g.radius * m.sx) +
               "\" fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\"/>\n";
        break;
      }
      default:
        break;  // affine pieces and open regions are left unshaded
    }
  }

  // trajectory polyline (thinned to at most ~4000 segments)
  const size_t n = traj.iterates.size();
  const size_t stride = std::max<size_t>(1, n / 4000);
  std::string poly;
  for (size_t i = 0; i < n; i += stride) {
    poly += pt(traj.iterates[i]) + " ";
  }
  if ((n - 1) % stride != 0) poly += pt(traj.iterates.back());
  svg += "<polyline points=\"" + poly +
         "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
  svg += "<circle cx=\"" + num(m.px(traj.iterates.front()[0])) + "\" cy=\"" +
         num(m.py(one_d ? 0.0 : traj.iterates.front()[1])) +
         "\" r=\"3\" fill=\"forestgreen\"/>\n";
  svg += "</svg>\n";
  return svg;
}

std::string rates_svg(const std::vector<double>& Ks, const std::vector<double>& values,
                      int width, int height) {
  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
                    std::to_string(width) + "\" height=\"" + std::to_string(height) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (Ks.size() == values.size() && Ks.size() >= 2) {
    double lx0 = 1e300, lx1 = -1e300, ly0 = 1e300, ly1 = -1e300;
    std::vector<double> lx(Ks.size()), ly(Ks.size());
    for (size_t i = 0; i < Ks.size(); ++i) {
      lx[i] = std::log10(Ks[i]);
      ly[i] = std::log10(std::max(values[i], 1e-300));
      lx0 = std::min(lx0, lx[i]);
      lx1 = std::max(lx1, lx[i]);
      ly0 = std::min(ly0, ly[i]);
      ly1 = std::max(ly1, ly[i]);
    }
    if (lx1 - lx0 < 1e-9) lx1 = lx0 + 1;
    if (ly1 - ly0 < 1e-9) ly1 = ly0 + 1;
    const double pad = 40;
    std::string poly;
    for (size_t i = 0; i < Ks.size(); ++i) {
      const double X = pad + (lx[i] - lx0) / (lx1 - lx0) * (width - 2 * pad);
      const double Y = height - pad - (ly[i] - ly0) / (ly1 - ly0) * (height - 2 * pad);
      poly += num(X) + "," + num(Y) + " ";
      svg += "<circle cx=\"" + num(X) + "\" cy=\"" + num(Y) + "\" r=\"3\" fill=\"black\"/>\n";
    }
    svg += "<polyline points=\"" + poly +
           "\" fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\"/>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace strata
