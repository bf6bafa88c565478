#include "strata/stratum.hpp"

#include <algorithm>
#include <cmath>

namespace strata {

namespace {

constexpr double kDegenerateTol = 1e-12;

// Is angle a inside [lo, hi] (angles need not be wrapped)?
bool angle_in_range(double a, double lo, double hi, bool open_lo, bool open_hi) {
  // Normalize to a representative within [lo, lo + 2pi).
  double rel = a - lo;
  while (rel < 0) rel += 2.0 * M_PI;
  while (rel >= 2.0 * M_PI) rel -= 2.0 * M_PI;
  const double span = hi - lo;
  if (rel > span) return false;
  if (open_lo && rel == 0.0) return false;
  if (open_hi && rel == span) return false;
  return true;
}

}  // namespace

const char* kind_name(StratumKind k) {
  switch (k) {
    case StratumKind::Point: return "point";
    case StratumKind::Segment: return "segment";
    case StratumKind::Affine: return "affine";
    case StratumKind::CircleArc: return "circle_arc";
    case StratumKind::Region: return "region";
  }
  return "?";
}

Stratum Stratum::point(int id, Vec z) {
  if (!all_finite(z)) throw Error("point stratum with non-finite coordinates");
  const int d = static_cast<int>(z.size());
  return Stratum(id, 0, d, StratumKind::Point, PointData{std::move(z)});
}

Stratum Stratum::segment(int id, Vec anchor, Vec dir, double t_lo, double t_hi,
                         bool open_lo, bool open_hi) {
  const int d = static_cast<int>(anchor.size());
  const double n = dir.norm();
  if (n < kDegenerateTol) throw Error("segment stratum with zero direction");
  if (!(t_lo < t_hi)) throw Error("segment stratum with empty parameter range");
  dir /= n;
  return Stratum(id, 1, d, StratumKind::Segment,
                 SegmentData{std::move(anchor), std::move(dir), t_lo, t_hi, open_lo, open_hi});
}

Stratum Stratum::affine(int id, Vec anchor, Mat basis) {
  const int d = static_cast<int>(anchor.size());
  const int m = static_cast<int>(basis.cols());
  if (basis.rows() != d || m < 1 || m > d) throw Error("affine stratum basis shape");
  if ((basis.transpose() * basis - Mat::Identity(m, m)).norm() > 1e-10) {
    throw Error("affine stratum basis not orthonormal");
  }
  return Stratum(id, m, d, StratumKind::Affine, AffineData{std::move(anchor), std::move(basis)});
}

Stratum Stratum::circle(int id, Vec center, double radius) {
  if (center.size() != 2) throw Error("circle stratum requires ambient dimension 2");
  if (!(radius > 0)) throw Error("circle stratum radius must be positive");
  return Stratum(id, 1, 2, StratumKind::CircleArc,
                 CircleArcData{std::move(center), radius, -M_PI, M_PI, true, false, false});
}

Stratum Stratum::circle_arc(int id, Vec center, double radius, double theta_lo,
                            double theta_hi, bool open_lo, bool open_hi) {
  if (center.size() != 2) throw Error("circle arc requires ambient dimension 2");
  if (!(radius > 0) || !(theta_lo < theta_hi)) throw Error("degenerate circle arc");
  return Stratum(id, 1, 2, StratumKind::CircleArc,
                 CircleArcData{std::move(center), radius, theta_lo, theta_hi, false, open_lo, open_hi});
}

Stratum Stratum::region(int id, Vec lo, Vec hi, std::vector<bool> open_lo,
                        std::vector<bool> open_hi) {
  const int d = static_cast<int>(lo.size());
  if (hi.size() != d || static_cast<int>(open_lo.size()) != d ||
      static_cast<int>(open_hi.size()) != d) {
    throw Error("region stratum bound shape mismatch");
  }
  for (int i = 0; i < d; ++i) {
    if (!(lo[i] < hi[i])) throw Error("region stratum with empty side");
  }
  return Stratum(id, d, d, StratumKind::Region,
                 RegionData{std::move(lo), std::move(hi), std::move(open_lo), std::move(open_hi)});
}

double Stratum::distance(const Vec& x) const {
  switch (kind_) {
    case StratumKind::Point:
      return (x - point_data().z).norm();
    case StratumKind::Segment: {
      const auto& s = segment_data();
      const double t = s.dir.dot(x - s.anchor);
      const double tc = std::clamp(t, s.t_lo, s.t_hi);
      return (x - (s.anchor + tc * s.dir)).norm();
    }
    case StratumKind::Affine: {
      const auto& a = affine_data();
      const Vec rel = x - a.anchor;
      return (rel - a.basis * (a.basis.transpose() * rel)).norm();
    }
    case StratumKind::CircleArc: {
      const auto& c = circle_data();
      const Vec rel = x - c.center;
      const double rho = rel.norm();
      if (c.full) return std::abs(rho - c.radius);
      const double theta = std::atan2(rel[1], rel[0]);
      if (rho > kDegenerateTol && angle_in_range(theta, c.theta_lo, c.theta_hi, false, false)) {
        return std::abs(rho - c.radius);
      }
      Vec e0(2), e1(2);
      e0 << c.center[0] + c.radius * std::cos(c.theta_lo),
          c.center[1] + c.radius * std::sin(c.theta_lo);
      e1 << c.center[0] + c.radius * std::cos(c.theta_hi),
          c.center[1] + c.radius * std::sin(c.theta_hi);
      return std::min((x - e0).norm(), (x - e1).norm());
    }
    case StratumKind::Region: {
      const auto& r = region_data();
      double sq = 0.0;
      for (int i = 0; i < ambient_dim_; ++i) {
        double gap = 0.0;
        if (x[i] < r.lo[i]) gap = r.lo[i] - x[i];
        if (x[i] > r.hi[i]) gap = x[i] - r.hi[i];
        sq += gap * gap;
      }
      return std::sqrt(sq);
    }
  }
  return 0.0;
}

bool Stratum::contains(const Vec& x, double tol) const {
  switch (kind_) {
    case StratumKind::Point:
      return (x - point_data().z).norm() <= tol;
    case StratumKind::Segment: {
      const auto& s = segment_data();
      const double t = s.dir.dot(x - s.anchor);
      if (t < s.t_lo || t > s.t_hi) return false;
      if (s.open_lo && t == s.t_lo) return false;
      if (s.open_hi && t == s.t_hi) return false;
      return (x - (s.anchor + t * s.dir)).norm() <= tol;
    }
    case StratumKind::Affine:
      return distance(x) <= tol;
    case StratumKind::CircleArc: {
      const auto& c = circle_data();
      const Vec rel = x - c.center;
      if (std::abs(rel.norm() - c.radius) > tol) return false;
      if (c.full) return true;
      const double theta = std::atan2(rel[1], rel[0]);
      return angle_in_range(theta, c.theta_lo, c.theta_hi, c.open_lo, c.open_hi);
    }
    case StratumKind::Region: {
      const auto& r = region_data();
      for (int i = 0; i < ambient_dim_; ++i) {
        if (x[i] < r.lo[i] || (r.open_lo[i] && x[i] == r.lo[i])) return false;
        if (x[i] > r.hi[i] || (r.open_hi[i] && x[i] == r.hi[i])) return false;
      }
      return true;
    }
  }
  return false;
}

Vec Stratum::project(const Vec& x) const {
  switch (kind_) {
    case StratumKind::Point:
      return point_data().z;
    case StratumKind::Segment: {
      const auto& s = segment_data();
      const double t = s.dir.dot(x - s.anchor);
      const double tc = std::clamp(t, s.t_lo, s.t_hi);
      if (s.open_lo && tc <= s.t_lo) {
        throw IllPosedProjection("projection lands on excluded left endpoint");
      }
      if (s.open_hi && tc >= s.t_hi) {
        throw IllPosedProjection("projection lands on excluded right endpoint");
      }
      return s.anchor + tc * s.dir;
    }
    case StratumKind::Affine: {
      const auto& a = affine_data();
      const Vec rel = x - a.anchor;
      return a.anchor + a.basis * (a.basis.transpose() * rel);
    }
    case StratumKind::CircleArc: {
      const auto& c = circle_data();
      const Vec rel = x - c.center;
      const double rho = rel.norm();
      if (rho < kDegenerateTol) {
        throw IllPosedProjection("projection from the circle center is not single-valued");
      }
      const double theta = std::atan2(rel[1], rel[0]);
      if (c.full || angle_in_range(theta, c.theta_lo, c.theta_hi, false, false)) {
        if (!c.full && !angle_in_range(theta, c.theta_lo, c.theta_hi, c.open_lo, c.open_hi)) {
          throw IllPosedProjection("projection lands on excluded arc endpoint");
        }
        return c.center + (c.radius / rho) * rel;
      }
      // Nearest arc endpoint.
      Vec e0(2), e1(2);
      e0 << c.center[0] + c.radius * std::cos(c.theta_lo),
          c.center[1] + c.radius * std::sin(c.theta_lo);
      e1 << c.center[0] + c.radius * std::cos(c.theta_hi),
          c.center[1] + c.radius * std::sin(c.theta_hi);
      const bool first = (x - e0).norm() <= (x - e1).norm();
      if ((first && c.open_lo) || (!first && c.open_hi)) {
        throw IllPosedProjection("projection lands on excluded arc endpoint");
      }
      return first ? e0 : e1;
    }
    case StratumKind::Region: {
      const auto& r = region_data();
      Vec out = x;
      for (int i = 0; i < ambient_dim_; ++i) {
        out[i] = std::min(std::max(out[i], r.lo[i]), r.hi[i]);
      }
      return out;
    }
  }
  return x;
}

Mat Stratum::tangent_projector(const Vec& y) const {
  const int d = ambient_dim_;
  switch (kind_) {
    case StratumKind::Point:
      return Mat::Zero(d, d);
    case StratumKind::Segment: {
      const auto& s = segment_data();
      return s.dir * s.dir.transpose();
    }
    case StratumKind::Affine: {
      const auto& a = affine_data();
      return a.basis * a.basis.transpose();
    }
    case StratumKind::CircleArc: {
      const auto& c = circle_data();
      Vec rel = y - c.center;
      const double rho = rel.norm();
      if (rho < kDegenerateTol) throw NotOnStratum("tangent projector at circle center");
      rel /= rho;
      Vec tau(2);
      tau << -rel[1], rel[0];
      return tau * tau.transpose();
    }
    case StratumKind::Region:
      return Mat::Identity(d, d);
  }
  return Mat::Zero(d, d);
}

Mat Stratum::projection_jacobian(const Vec& x) const {
  const int d = ambient_dim_;
  switch (kind_) {
    case StratumKind::Point:
      return Mat::Zero(d, d);
    case StratumKind::Segment: {
      const auto& s = segment_data();
      const double t = s.dir.dot(x - s.anchor);
      if (t < s.t_lo || t > s.t_hi) {
        if ((t <= s.t_lo && s.open_lo) || (t >= s.t_hi && s.open_hi)) {
          throw IllPosedProjection("projection jacobian at excluded endpoint");
        }
        return Mat::Zero(d, d);  // clamped to a closed endpoint: locally constant
      }
      return s.dir * s.dir.transpose();
    }
    case StratumKind::Affine: {
      const auto& a = affine_data();
      return a.basis * a.basis.transpose();
    }
    case StratumKind::CircleArc: {
      const auto& c = circle_data();
      const Vec rel = x - c.center;
      const double rho = rel.norm();
      if (rho < kDegenerateTol) {
        throw CurvatureRadiusExceeded("offset reaches the curvature radius of the circle");
      }
      // (Id - r S_{w,y})^{-1} P_y collapses to (radius/rho) P_y for a circle.
      const Vec y = c.center + (c.radius / rho) * rel;
      return (c.radius / rho) * tangent_projector(y);
    }
    case StratumKind::Region: {
      const auto& r = region_data();
      Mat j = Mat::Zero(d, d);
      for (int i = 0; i < d; ++i) {
        if (x[i] >= r.lo[i] && x[i] <= r.hi[i]) j(i, i) = 1.0;
      }
      return j;
    }
  }
  return Mat::Zero(d, d);
}

Vec Stratum::sample_point(Rng& rng) const {
  switch (kind_) {
    case StratumKind::Point:
      return point_data().z;
    case StratumKind::Segment: {
      const auto& s = segment_data();
      const double lo = std::isfinite(s.t_lo) ? s.t_lo : -1e3;
      const double hi = std::isfinite(s.t_hi) ? s.t_hi : 1e3;
      // Keep clear of open endpoints.
      const double pad = (hi - lo) * 1e-6;
      return s.anchor + rng.uniform(lo + pad, hi - pad) * s.dir;
    }
    case StratumKind::Affine: {
      const auto& a = affine_data();
      Vec coeff(a.basis.cols());
      for (int i = 0; i < coeff.size(); ++i) coeff[i] = rng.uniform(-1.0, 1.0);
      return a.anchor + a.basis * coeff;
    }
    case StratumKind::CircleArc: {
      const auto& c = circle_data();
      const double th = rng.uniform(c.theta_lo, c.theta_hi);
      Vec out(2);
      out << c.center[0] + c.radius * std::cos(th), c.center[1] + c.radius * std::sin(th);
      return out;
    }
    case StratumKind::Region: {
      const auto& r = region_data();
      Vec out(ambient_dim_);
      for (int i = 0; i < ambient_dim_; ++i) {
        const double lo = std::isfinite(r.lo[i]) ? r.lo[i] : -1e3;
        const double hi = std::isfinite(r.hi[i]) ? r.hi[i] : 1e3;
        const double pad = (hi - lo) * 1e-9;
        out[i] = rng.uniform(lo + pad, hi - pad);
      }
      return out;
    }
  }
  return Vec::Zero(ambient_dim_);
}

}  // namespace strata
