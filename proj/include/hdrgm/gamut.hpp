#pragma once

#include <array>
#include <iosfwd>

#include "hdrgm/colorspace.hpp"
#include "hdrgm/image.hpp"

namespace hdrgm {

inline constexpr int kHueBins = 360;
using HueTable = std::array<double, kHueBins>;

/// Containment tolerance in chroma units.
inline constexpr double kContainEpsilon = 1e-9;

/// Hue bin of an angle in degrees: floor(h) after wrapping into [0,360).
int hue_bin(double h);

/// Triangular approximation of a constant-hue gamut slice with vertices
/// (0,0), (cusp_c, cusp_l) and (0,100) in the chroma-lightness plane.
struct GamutSlice {
  int hue = 0;  // bin start in degrees
  double cusp_c = 0.0;
  double cusp_l = 0.0;
  double g_b = 0.0;  // lightness floor
  double g_t = 0.0;  // lightness ceiling used by the lightness compression

  /// Boundary chroma at lightness l in [0, 100]; unchecked.
  double chroma_at(double l) const;
  /// Boundary chroma of the slice scaled about the origin by `scale`.
  double scaled_chroma_at(double l, double scale) const;

  bool contains_scaled(double c, double l, double scale, double eps = kContainEpsilon) const {
    return l >= 0.0 && l <= 100.0 * scale && c <= scaled_chroma_at(l, scale) + eps;
  }
};

class GamutBoundary {
 public:
  GamutBoundary() = default;
  GamutBoundary(std::array<GamutSlice, kHueBins> slices, Chromaticities prims);

  const GamutSlice& slice(int bin) const { return slices_[static_cast<std::size_t>(bin)]; }
  const GamutSlice& slice_for(double h) const { return slice(hue_bin(h)); }
  const std::array<GamutSlice, kHueBins>& slices() const { return slices_; }
  const Chromaticities& primaries() const { return prims_; }

  /// LAB reference white of unit luminance. Containment only depends on
  /// ratios, so any image white of the same chromaticity is compatible.
  Vec3 white() const { return white_xyz(prims_.white, 1.0); }

 private:
  std::array<GamutSlice, kHueBins> slices_{};
  Chromaticities prims_ = Chromaticities::srgb();
};

/// Samples the surface of the RGB cube (6 faces, samples_per_edge^2 points
/// each, plus 64 * samples_per_edge points along each of the 12 edges),
/// records the maximum-chroma point per 1 degree hue bin and fills empty bins
/// by circular linear interpolation.
GamutBoundary build_target_boundary(const Chromaticities& prims, int samples_per_edge = 256);

/// Triangle boundary chroma at lightness l. Throws std::out_of_range
/// ("lightness out of display range") when l is outside [0,100].
double max_chroma_at(const GamutBoundary& b, double h, double l);

bool contains(const GamutBoundary& b, const LChColor& p, double eps = kContainEpsilon);

/// Containment in the slice triangle with every vertex scaled by `scale`.
bool contains_scaled(const GamutBoundary& b, const LChColor& p, double scale,
                     double eps = kContainEpsilon);

/// Per-hue statistics of an image's colors.
struct SourceGamut {
  HueTable chroma{};       // percentile-ranked chroma per bin
  HueTable lightness{};    // percentile-ranked lightness per bin
  HueTable min_lightness{};
  HueTable max_lightness{};
  std::array<std::size_t, kHueBins> count{};

  bool empty(int bin) const { return count[static_cast<std::size_t>(bin)] == 0; }
};

/// Builds per-bin statistics from an LCh image. Throws std::invalid_argument
/// when `pct` is outside (0,1].
SourceGamut build_source_gamut(const ImagePlanar& lch, double pct);

/// One "hue cusp_c cusp_l" record per bin.
void write_boundary(std::ostream& os, const GamutBoundary& b);

}  // namespace hdrgm
