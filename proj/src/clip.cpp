#include "hdrgm/clip.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace hdrgm {

void ClipPolicy::validate() const {
  if (!(weight >= 0.0 && weight <= 1.0)) throw std::invalid_argument("clip weight outside [0,1]");
}

LChColor clip_chroma_target(const LChColor& p, const GamutBoundary& dst) {
  const double l = std::clamp(p.L, 0.0, 100.0);
  const double c = std::min(std::max(p.C, 0.0), dst.slice_for(p.h).chroma_at(l));
  return {l, c, p.h};
}

LChColor clip_lightness_target(const LChColor& p, const GamutBoundary& dst) {
  const GamutSlice& s = dst.slice_for(p.h);
  const double c = std::max(p.C, 0.0);
  if (c > s.cusp_c) return {s.cusp_l, s.cusp_c, p.h};
  // Lightness interval of the slice at this chroma.
  const double t = c / s.cusp_c;
  const double lo = s.cusp_l * t;
  const double hi = 100.0 - (100.0 - s.cusp_l) * t;
  return {std::clamp(p.L, lo, hi), c, p.h};
}

LChColor clip_pixel(const LChColor& p, const GamutBoundary& dst, const ClipPolicy& policy) {
  if (contains(dst, p)) return p;
  switch (policy.mode) {
    case ClipMode::chroma_only:
      return clip_chroma_target(p, dst);
    case ClipMode::lightness_only:
      return clip_lightness_target(p, dst);
    case ClipMode::interpolated:
      break;
  }
  const LChColor a = clip_chroma_target(p, dst);
  const LChColor b = clip_lightness_target(p, dst);
  const double t = policy.weight;
  return {(1.0 - t) * a.L + t * b.L, (1.0 - t) * a.C + t * b.C, p.h};
}

ClipResult clip_image(const ImagePlanar& lch, const GamutBoundary& dst, const ClipPolicy& policy) {
  policy.validate();
  ClipResult res{lch, {}, Mask(lch.width(), lch.height())};
  Plane& L = res.image.channel(lch::L);
  Plane& C = res.image.channel(lch::C);
  const Plane& H = res.image.channel(lch::H);
  const auto n = static_cast<std::ptrdiff_t>(lch.pixel_count());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    const LChColor in{L[k], C[k], H[k]};
    if (contains(dst, in)) continue;
    const LChColor out = clip_pixel(in, dst, policy);
    L[k] = out.L;
    C[k] = out.C;
    res.moved.set(k, true);
  }

  // Serial reduction keeps the report bit-reproducible.
  ClipReport& r = res.report;
  r.total = lch.pixel_count();
  double sum_dc = 0.0, sum_dl = 0.0;
  for (std::size_t k = 0; k < r.total; ++k) {
    if (!res.moved[k]) continue;
    ++r.moved;
    const double dc = std::abs(C[k] - lch.channel(lch::C)[k]);
    const double dl = std::abs(L[k] - lch.channel(lch::L)[k]);
    sum_dc += dc;
    sum_dl += dl;
    r.max_dc = std::max(r.max_dc, dc);
    r.max_dl = std::max(r.max_dl, dl);
  }
  if (r.moved > 0) {
    r.mean_dc = sum_dc / static_cast<double>(r.moved);
    r.mean_dl = sum_dl / static_cast<double>(r.moved);
  }
  return res;
}

void write_clip_report(std::ostream& os, const ClipReport& r) {
  os << fmt::format("pixels {}\nmoved {}\nmoved_fraction {:.6f}\n", r.total, r.moved,
                    r.total ? static_cast<double>(r.moved) / static_cast<double>(r.total) : 0.0);
  os << fmt::format("mean_dc {:.6f}\nmax_dc {:.6f}\nmean_dl {:.6f}\nmax_dl {:.6f}\n", r.mean_dc,
                    r.max_dc, r.mean_dl, r.max_dl);
}

}  // namespace hdrgm
