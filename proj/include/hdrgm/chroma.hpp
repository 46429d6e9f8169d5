#pragma once

#include <iosfwd>
#include <span>

#include "hdrgm/gamut.hpp"
#include "hdrgm/image.hpp"
#include "hdrgm/imaging.hpp"

namespace hdrgm {

/// Increment of the per-hue gamut scale search.
inline constexpr double kScaleStep = 0.1;
/// Width in bins of the circular box filter applied to the scale vector.
inline constexpr int kSmoothingWindow = 15;

/// Chooses the chroma percentile from the spatial spread of out-of-gamut
/// pixels.
struct PercentilePolicy {
  double spread = 0.99;        // out-of-gamut pixels scattered over the image
  double concentrated = 1.00;  // out-of-gamut pixels in a few regions
  double region_ratio_threshold = 0.01;

  void validate() const;
};

struct ScaleVector {
  HueTable raw{};
  HueTable smoothed{};
  double step = kScaleStep;
};

/// Percentile to use for `lch`: `concentrated` when regions/pixels of the
/// out-of-gamut mask is below the threshold, `spread` otherwise, and 1.0
/// when nothing is out of gamut.
double select_percentile(const ImagePlanar& lch, const GamutBoundary& dst,
                         const PercentilePolicy& policy);

struct SlicePixel {
  double c = 0.0;
  double l = 0.0;
};

/// False for pixels that no origin-centered scaling of the slice reaches:
/// negative lightness, or chroma beyond the ray through black and the cusp.
bool scalable(const GamutSlice& slice, const SlicePixel& p);

// Smallest scale 1 + k*step for which the scaled slice contains every pixel.
// Unscalable pixels are ignored. The iterative form grows the scale one step
// at a time; the closed form solves for k per pixel. Both return the same
// value bit for bit.
double slice_scale_iterative(const GamutSlice& slice, std::span<const SlicePixel> pixels,
                             double step = kScaleStep);
double slice_scale_closed_form(const GamutSlice& slice, std::span<const SlicePixel> pixels,
                               double step = kScaleStep);

/// Per-hue scale factors R_h from a base-layer LCh image. Within each bin only
/// pixels at or below the bin's `pct` chroma percentile are enclosed.
HueTable compute_scale_vector(const ImagePlanar& lch_base, const GamutBoundary& dst, double pct,
                              double step = kScaleStep);
HueTable compute_scale_vector_iterative(const ImagePlanar& lch_base, const GamutBoundary& dst,
                                        double pct, double step = kScaleStep);

/// Circular centered box average; bins 359 and 0 are neighbors.
HueTable smooth_scale_vector(const HueTable& raw, int window = kSmoothingWindow);

/// Divides the chroma base layer by R'_h of each pixel's bin and re-injects
/// the detail layer. L and h are copied unchanged.
ImagePlanar apply_hue_specific(const ImagePlanar& lch, const HueTable& smoothed);
ImagePlanar apply_hue_specific(const ImagePlanar& lch, const BaseDetail& chroma,
                               const HueTable& smoothed);

/// min over non-empty bins of destination / source cusp chroma.
double global_chroma_scale(const SourceGamut& src, const GamutBoundary& dst);

/// Multiplies the chroma base layer by global_chroma_scale when it is < 1.
ImagePlanar apply_global(const ImagePlanar& lch, const SourceGamut& src, const GamutBoundary& dst);
ImagePlanar apply_global(const ImagePlanar& lch, const BaseDetail& chroma, double scale);

struct ChromaResult {
  ImagePlanar image;
  double percentile = 1.0;
  ScaleVector scales;         // hue-specific only
  double global_scale = 1.0;  // global only
};

/// Complete hue-specific stage: percentile selection, decomposition, scale
/// search, smoothing and application.
ChromaResult compress_hue_specific(const ImagePlanar& lch, const GamutBoundary& dst,
                                   const PercentilePolicy& policy, double step = kScaleStep);

/// Complete global stage.
ChromaResult compress_global(const ImagePlanar& lch, const GamutBoundary& dst,
                             const PercentilePolicy& policy);

/// One "hue raw smoothed" record per bin.
void write_scale_vector(std::ostream& os, const ScaleVector& sv);

}  // namespace hdrgm
