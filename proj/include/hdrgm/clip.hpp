#pragma once

#include <cstddef>
#include <iosfwd>

#include "hdrgm/colorspace.hpp"
#include "hdrgm/gamut.hpp"
#include "hdrgm/image.hpp"

namespace hdrgm {

enum class ClipMode { chroma_only, lightness_only, interpolated };

struct ClipPolicy {
  ClipMode mode = ClipMode::interpolated;
  double weight = 0.5;  // 0 = chroma-only target, 1 = lightness-only target

  void validate() const;
};

/// Boundary point at the pixel's (clamped) lightness.
LChColor clip_chroma_target(const LChColor& p, const GamutBoundary& dst);
/// Boundary point at the pixel's chroma, or the cusp when the chroma exceeds
/// the cusp chroma.
LChColor clip_lightness_target(const LChColor& p, const GamutBoundary& dst);

/// Maps an out-of-gamut pixel into the slice triangle; in-gamut pixels and
/// the hue are returned untouched.
LChColor clip_pixel(const LChColor& p, const GamutBoundary& dst, const ClipPolicy& policy);

struct ClipReport {
  std::size_t total = 0;
  std::size_t moved = 0;
  double mean_dc = 0.0;  // mean over moved pixels
  double max_dc = 0.0;
  double mean_dl = 0.0;
  double max_dl = 0.0;
};

struct ClipResult {
  ImagePlanar image;
  ClipReport report;
  Mask moved;
};

ClipResult clip_image(const ImagePlanar& lch, const GamutBoundary& dst, const ClipPolicy& policy);

void write_clip_report(std::ostream& os, const ClipReport& r);

}  // namespace hdrgm
