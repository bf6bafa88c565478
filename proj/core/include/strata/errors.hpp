#pragma once

#include <stdexcept>
#include <string>

namespace strata {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A LinearMap handed to project_subspace that fails the projector checks.
struct NotAProjector : Error {
  using Error::Error;
};

// Nearest-point projection would land on an excluded endpoint or is not
// single-valued (e.g. the center of a circle stratum).
struct IllPosedProjection : Error {
  using Error::Error;
};

// projection_jacobian queried at an offset at or beyond the curvature radius.
struct CurvatureRadiusExceeded : Error {
  using Error::Error;
};

// A point required to lie on a stratum does not (distance check at 1e-9).
struct NotOnStratum : Error {
  using Error::Error;
};

// g_X evaluation requested outside the well-posed cone of the stratum.
struct OutsideWellPosed : Error {
  using Error::Error;
};

struct UnknownCatalogFunction : Error {
  using Error::Error;
};

struct PreconditionViolated : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

struct ParseError : Error {
  using Error::Error;
};

}  // namespace strata
