#pragma once

#include <cstddef>
#include <span>

#include "hdrgm/image.hpp"

namespace hdrgm {

/// Values below this base level are treated as achromatic by the division
/// decomposition: detail is forced to 1 there.
inline constexpr double kBaseEpsilon = 1e-6;

/// Largest number of kernel taps (window area times pixel count) evaluated
/// directly; costlier filters go through the bilateral grid.
inline constexpr double kDirectTapBudget = 5e7;

/// Edge-preserving smoothing with Gaussian spatial and range kernels. Picks
/// the direct evaluation when it fits kDirectTapBudget and the bilateral
/// grid otherwise.
Plane bilateral_filter(const Plane& plane, double sigma_s, double sigma_r);

/// Brute-force evaluation over a square window of half-width 2*sigma_s,
/// renormalized at the image border.
Plane bilateral_filter_direct(const Plane& plane, double sigma_s, double sigma_r);

/// Bilateral grid approximation (splat, separable blur, trilinear slice).
Plane bilateral_filter_grid(const Plane& plane, double sigma_s, double sigma_r);

struct BaseDetail {
  Plane base;
  Plane detail;

  /// base * detail, element-wise.
  Plane recombine() const;
};

/// Spatial and range sigmas used for base/detail separation of `plane`:
/// 0.2 * max(width, height) and 0.05 * max(plane).
struct BilateralSigmas {
  double spatial;
  double range;
};
BilateralSigmas default_sigmas(const Plane& plane);

/// Splits a non-negative plane into a bilateral base layer and a
/// multiplicative detail layer (plane / base).
BaseDetail decompose_divide(const Plane& plane);
BaseDetail decompose_divide(const Plane& plane, BilateralSigmas sigmas);

struct RegionCount {
  std::size_t regions = 0;
  std::size_t pixels = 0;
};

/// 8-connected component count of the set pixels of `mask`.
RegionCount connected_regions(const Mask& mask);

/// Nearest-rank percentile: the ceil(p * n)-th smallest value. Throws
/// std::invalid_argument for empty input or p outside (0, 1].
double percentile(std::span<const double> values, double p);

}  // namespace hdrgm
