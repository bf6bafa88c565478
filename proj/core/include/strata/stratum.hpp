#pragma once

#include <variant>
#include <vector>

#include "strata/geometry.hpp"

namespace strata {

enum class StratumKind { Point, Segment, Affine, CircleArc, Region };

const char* kind_name(StratumKind k);

// One connected manifold piece of a stratification, with analytic distance,
// nearest-point projection, tangent projector and projection Jacobian.
//
// Kinds:
//   Point     - a single point {z}, dimension 0.
//   Segment   - {anchor + t*dir : t in (lo,hi)}, dimension 1; either end may
//               be open (excluded) or closed, and may be infinite.
//   Affine    - unbounded affine piece spanned by an orthonormal basis.
//   CircleArc - arc of a circle in R^2; full circles allowed.
//   Region    - full-dimensional open region, an axis-aligned box with
//               per-side openness (sides may be infinite).
class Stratum {
 public:
  struct PointData {
    Vec z;
  };
  struct SegmentData {
    Vec anchor;
    Vec dir;  // unit
    double t_lo, t_hi;
    bool open_lo, open_hi;
  };
  struct AffineData {
    Vec anchor;
    Mat basis;  // orthonormal columns
  };
  struct CircleArcData {
    Vec center;
    double radius;
    double theta_lo, theta_hi;  // ignored when full
    bool full;
    bool open_lo, open_hi;
  };
  struct RegionData {
    Vec lo, hi;
    std::vector<bool> open_lo, open_hi;
  };

  static Stratum point(int id, Vec z);
  static Stratum segment(int id, Vec anchor, Vec dir, double t_lo, double t_hi,
                         bool open_lo, bool open_hi);
  static Stratum affine(int id, Vec anchor, Mat basis);
  static Stratum circle(int id, Vec center, double radius);
  static Stratum circle_arc(int id, Vec center, double radius, double theta_lo,
                            double theta_hi, bool open_lo, bool open_hi);
  static Stratum region(int id, Vec lo, Vec hi, std::vector<bool> open_lo,
                        std::vector<bool> open_hi);

  int id() const { return id_; }
  int dim() const { return dim_; }
  int ambient_dim() const { return ambient_dim_; }
  StratumKind kind() const { return kind_; }

  // Euclidean distance to the piece (equivalently to its closure).
  double distance(const Vec& x) const;

  // Exact analytic membership. For 1-dimensional kinds a point counts as a
  // member when its distance to the carrier is at most `tol` and it lies
  // strictly within any open parameter bound.
  bool contains(const Vec& x, double tol = 0.0) const;

  // Nearest point on the stratum. Throws IllPosedProjection when the nearest
  // point is an excluded endpoint or is not unique (circle center).
  Vec project(const Vec& x) const;

  // Orthogonal projector onto the tangent space at y (y on the stratum).
  Mat tangent_projector(const Vec& y) const;

  // Jacobian of the nearest-point projection at x. Constant tangent projector
  // for flat kinds; (Id - r S)^{-1} P for the circle. Throws
  // CurvatureRadiusExceeded when the offset reaches the curvature radius.
  Mat projection_jacobian(const Vec& x) const;

  // Uniform sample on the piece (parameter-uniform), used by estimators.
  Vec sample_point(Rng& rng) const;

  const PointData& point_data() const { return std::get<PointData>(geom_); }
  const SegmentData& segment_data() const { return std::get<SegmentData>(geom_); }
  const AffineData& affine_data() const { return std::get<AffineData>(geom_); }
  const CircleArcData& circle_data() const { return std::get<CircleArcData>(geom_); }
  const RegionData& region_data() const { return std::get<RegionData>(geom_); }

 private:
  using Geom = std::variant<PointData, SegmentData, AffineData, CircleArcData, RegionData>;
  Stratum(int id, int dim, int ambient, StratumKind kind, Geom geom)
      : id_(id), dim_(dim), ambient_dim_(ambient), kind_(kind), geom_(std::move(geom)) {}

  int id_;
  int dim_;
  int ambient_dim_;
  StratumKind kind_;
  Geom geom_;
};

}  // namespace strata
