#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>

#include "hdrgm/colorspace.hpp"
#include "hdrgm/gamut.hpp"
#include "hdrgm/image.hpp"

namespace hdrgm {

/// Pixels whose IPT chroma falls below this in either image have no hue.
inline constexpr double kMinIptChroma = 1e-4;

/// Circular hue difference in degrees, in [0, 180].
double delta_h(double h_t, double h_c);

struct HueDiffReport {
  double mean_dh = 0.0;
  double stderr_dh = 0.0;
  std::size_t valid_pixels = 0;
  bool no_chromatic_pixels = false;
  Plane map;  // per-pixel delta h, 0 where excluded
  std::optional<double> oog_fraction_before;
  std::optional<double> oog_fraction_after;
};

/// Hue differences in cylindrical IPT between two XYZ images of equal size.
/// Throws std::invalid_argument on a dimension mismatch.
HueDiffReport hue_diff_image(const ImagePlanar& reference, const ImagePlanar& test,
                             const Vec3& white);

struct MeanAndError {
  double mean = 0.0;
  double std_error = 0.0;
};

/// Mean and standard error of per-image means.
MeanAndError corpus_summary(std::span<const double> per_image_means);

/// Fraction of pixels of an LCh image that fail contains().
double oog_fraction(const ImagePlanar& lch, const GamutBoundary& dst, double eps = kContainEpsilon);

/// Out-of-gamut mask of an LCh image.
Mask oog_mask(const ImagePlanar& lch, const GamutBoundary& dst, double eps = kContainEpsilon);

void write_hue_report(std::ostream& os, const HueDiffReport& r);

}  // namespace hdrgm
