#pragma once

#include <string>

#include "strata/engine.hpp"

namespace strata {

// Minimal hand-rolled SVG: the trajectory polyline over stratum overlays
// (lines, points, circles), axes fixed to the domain box K.
std::string trajectory_svg(const Trajectory& traj, const Stratification& strat,
                           int width = 720, int height = 720);

// Log-log polyline of (K, mean grad-sq) pairs for rate sweeps.
std::string rates_svg(const std::vector<double>& Ks,
                      const std::vector<double>& values, int width = 640,
                      int height = 480);

}  // namespace strata
