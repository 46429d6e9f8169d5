#include "hdrgm/gamut.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "hdrgm/imaging.hpp"

namespace hdrgm {

namespace {

// Cube samples closer than this to the achromatic axis carry no usable hue.
constexpr double kMinCuspChroma = 1e-3;
// Samples along each cube edge per face sample along a face side.
constexpr int kEdgeDensity = 64;

struct CuspCandidate {
  double c = 0.0;
  double l = 0.0;
};

using CuspTable = std::array<CuspCandidate, kHueBins>;

}  // namespace

int hue_bin(double h) {
  if (!std::isfinite(h)) return 0;
  int bin = static_cast<int>(std::floor(normalize_hue(h)));
  return std::clamp(bin, 0, kHueBins - 1);
}

double GamutSlice::chroma_at(double l) const { return scaled_chroma_at(l, 1.0); }

double GamutSlice::scaled_chroma_at(double l, double scale) const {
  // The slice is convex, so its outline is the lower of the two edge lines.
  // Written so that the result is monotone in `scale` under rounding.
  const double lower = cusp_c * (l / cusp_l);
  const double upper = cusp_c * ((100.0 * scale - l) / (100.0 - cusp_l));
  return std::min(lower, upper);
}

GamutBoundary::GamutBoundary(std::array<GamutSlice, kHueBins> slices, Chromaticities prims)
    : slices_(slices), prims_(prims) {}

GamutBoundary build_target_boundary(const Chromaticities& prims, int samples_per_edge) {
  if (samples_per_edge < 64) throw std::invalid_argument("samples_per_edge must be >= 64");
  const Mat3 to_xyz = rgb_to_xyz_matrix(prims);
  const Vec3 white = white_xyz(prims.white, 1.0);
  const int n = samples_per_edge;

  std::array<CuspTable, 6> per_face{};
#pragma omp parallel for schedule(static)
  for (int face = 0; face < 6; ++face) {
    const int axis = face / 2;
    const double fixed = face % 2;
    const int u = (axis + 1) % 3;
    const int v = (axis + 2) % 3;
    CuspTable& table = per_face[static_cast<std::size_t>(face)];
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        Vec3 rgb;
        rgb[axis] = fixed;
        rgb[u] = static_cast<double>(i) / (n - 1);
        rgb[v] = static_cast<double>(j) / (n - 1);
        const LChColor c = xyz_to_lch(Vec3(to_xyz * rgb), white);
        if (c.C < kMinCuspChroma) continue;
        CuspCandidate& best = table[static_cast<std::size_t>(hue_bin(c.h))];
        if (c.C > best.c) best = {c.C, c.L};
      }
    }
  }

  // Cusps sit on the cube edges, where hue turns fastest near the primaries.
  // A dense pass along the 12 edges keeps every bin close to its true cusp.
  std::array<CuspTable, 3> per_axis{};
  const int edge_samples = kEdgeDensity * n;
#pragma omp parallel for schedule(static)
  for (int axis = 0; axis < 3; ++axis) {
    CuspTable& table = per_axis[static_cast<std::size_t>(axis)];
    for (int corner = 0; corner < 4; ++corner) {
      for (int i = 0; i < edge_samples; ++i) {
        Vec3 rgb;
        rgb[axis] = static_cast<double>(i) / (edge_samples - 1);
        rgb[(axis + 1) % 3] = corner & 1;
        rgb[(axis + 2) % 3] = (corner >> 1) & 1;
        const LChColor c = xyz_to_lch(Vec3(to_xyz * rgb), white);
        if (c.C < kMinCuspChroma) continue;
        CuspCandidate& best = table[static_cast<std::size_t>(hue_bin(c.h))];
        if (c.C > best.c) best = {c.C, c.L};
      }
    }
  }

  // Merge in a fixed order for a deterministic result.
  CuspTable cusps{};
  for (const CuspTable& table : per_face)
    for (int b = 0; b < kHueBins; ++b)
      if (table[b].c > cusps[b].c) cusps[b] = table[b];
  for (const CuspTable& table : per_axis)
    for (int b = 0; b < kHueBins; ++b)
      if (table[b].c > cusps[b].c) cusps[b] = table[b];

  std::vector<int> filled;
  for (int b = 0; b < kHueBins; ++b)
    if (cusps[b].c > 0.0) filled.push_back(b);
  if (filled.empty()) throw std::invalid_argument("degenerate primaries");

  std::array<GamutSlice, kHueBins> slices{};
  for (int b = 0; b < kHueBins; ++b) {
    CuspCandidate cusp = cusps[b];
    if (cusp.c <= 0.0) {
      // Nearest filled neighbors on either side, wrapping around 360.
      auto next_it = std::upper_bound(filled.begin(), filled.end(), b);
      const int next = next_it == filled.end() ? filled.front() : *next_it;
      const int prev = next_it == filled.begin() ? filled.back() : *(next_it - 1);
      const int span = ((next - prev) % kHueBins + kHueBins) % kHueBins;
      const int offset = ((b - prev) % kHueBins + kHueBins) % kHueBins;
      const double t = span == 0 ? 0.0 : static_cast<double>(offset) / span;
      cusp.c = (1.0 - t) * cusps[prev].c + t * cusps[next].c;
      cusp.l = (1.0 - t) * cusps[prev].l + t * cusps[next].l;
    }
    slices[b] = GamutSlice{b, cusp.c, cusp.l, 0.0, cusp.l};
  }
  return GamutBoundary(slices, prims);
}

double max_chroma_at(const GamutBoundary& b, double h, double l) {
  if (!(l >= 0.0 && l <= 100.0)) throw std::out_of_range("lightness out of display range");
  return b.slice_for(h).chroma_at(l);
}

bool contains(const GamutBoundary& b, const LChColor& p, double eps) {
  return b.slice_for(p.h).contains_scaled(p.C, p.L, 1.0, eps);
}

bool contains_scaled(const GamutBoundary& b, const LChColor& p, double scale, double eps) {
  return b.slice_for(p.h).contains_scaled(p.C, p.L, scale, eps);
}

SourceGamut build_source_gamut(const ImagePlanar& img, double pct) {
  if (!(pct > 0.0 && pct <= 1.0)) throw std::invalid_argument("percentile outside (0,1]");
  std::array<std::vector<double>, kHueBins> chroma;
  std::array<std::vector<double>, kHueBins> light;
  const Plane& L = img.channel(lch::L);
  const Plane& C = img.channel(lch::C);
  const Plane& H = img.channel(lch::H);
  for (std::size_t i = 0; i < img.pixel_count(); ++i) {
    const auto b = static_cast<std::size_t>(hue_bin(H[i]));
    chroma[b].push_back(C[i]);
    light[b].push_back(L[i]);
  }
  SourceGamut sg;
  for (std::size_t b = 0; b < kHueBins; ++b) {
    sg.count[b] = chroma[b].size();
    if (chroma[b].empty()) continue;
    sg.chroma[b] = percentile(chroma[b], pct);
    sg.lightness[b] = percentile(light[b], pct);
    auto [lo, hi] = std::minmax_element(light[b].begin(), light[b].end());
    sg.min_lightness[b] = *lo;
    sg.max_lightness[b] = *hi;
  }
  return sg;
}

void write_boundary(std::ostream& os, const GamutBoundary& b) {
  os << "# hue cusp_c cusp_l\n";
  for (const GamutSlice& s : b.slices()) os << fmt::format("{} {:.6f} {:.6f}\n", s.hue, s.cusp_c, s.cusp_l);
}

}  // namespace hdrgm
