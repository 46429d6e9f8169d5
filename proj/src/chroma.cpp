#include "hdrgm/chroma.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <vector>

namespace hdrgm {

namespace {

// Upper bound on scale steps; only reachable through non-finite input.
constexpr long kMaxScaleSteps = 100'000'000;

double scale_at(long k, double step) { return 1.0 + static_cast<double>(k) * step; }

void check_step(double step) {
  if (!(step > 0.0)) throw std::invalid_argument("scale step must be positive");
}

long pixel_steps(const GamutSlice& s, const SlicePixel& p, double step) {
  const double need_upper =
      (p.l + (p.c - kContainEpsilon) * (100.0 - s.cusp_l) / s.cusp_c) / 100.0;
  const double need = std::max({1.0, need_upper, p.l / 100.0});
  long k = static_cast<long>(std::ceil((need - 1.0) / step));
  k = std::clamp(k, 0L, kMaxScaleSteps);
  // The estimate can be off by one through rounding; settle it on the exact
  // containment predicate the iterative search uses.
  while (k > 0 && s.contains_scaled(p.c, p.l, scale_at(k - 1, step))) --k;
  while (!s.contains_scaled(p.c, p.l, scale_at(k, step))) {
    if (++k > kMaxScaleSteps) throw std::runtime_error("scale search did not converge");
  }
  return k;
}

// Pixels of one bin, restricted to those at or below the chroma percentile
// and reachable by scaling.
std::array<std::vector<SlicePixel>, kHueBins> retained_pixels(const ImagePlanar& img,
                                                              const GamutBoundary& dst,
                                                              double pct) {
  if (!(pct > 0.0 && pct <= 1.0)) throw std::invalid_argument("percentile outside (0,1]");
  std::array<std::vector<SlicePixel>, kHueBins> bins;
  const Plane& L = img.channel(lch::L);
  const Plane& C = img.channel(lch::C);
  const Plane& H = img.channel(lch::H);
  for (std::size_t i = 0; i < img.pixel_count(); ++i)
    bins[static_cast<std::size_t>(hue_bin(H[i]))].push_back({C[i], L[i]});

  std::vector<double> chroma;
  for (int b = 0; b < kHueBins; ++b) {
    auto& px = bins[static_cast<std::size_t>(b)];
    if (px.empty()) continue;
    chroma.clear();
    for (const auto& p : px) chroma.push_back(p.c);
    const double limit = percentile(chroma, pct);
    const GamutSlice& s = dst.slice(b);
    std::erase_if(px, [&](const SlicePixel& p) { return !(p.c <= limit) || !scalable(s, p); });
  }
  return bins;
}

HueTable plane_scale_vector(const ImagePlanar& lch_base, const GamutBoundary& dst, double pct,
                            double step, bool iterative) {
  check_step(step);
  const auto bins = retained_pixels(lch_base, dst, pct);
  HueTable r{};
#pragma omp parallel for schedule(dynamic)
  for (int b = 0; b < kHueBins; ++b) {
    const auto& px = bins[static_cast<std::size_t>(b)];
    r[static_cast<std::size_t>(b)] = iterative ? slice_scale_iterative(dst.slice(b), px, step)
                                               : slice_scale_closed_form(dst.slice(b), px, step);
  }
  return r;
}

ImagePlanar with_chroma(const ImagePlanar& lch, Plane chroma) {
  ImagePlanar out = lch;
  out.set_channel(lch::C, std::move(chroma));
  return out;
}

}  // namespace

void PercentilePolicy::validate() const {
  if (!(spread > 0.0 && spread <= 1.0) || !(concentrated > 0.0 && concentrated <= 1.0))
    throw std::invalid_argument("percentiles must lie in (0,1]");
  if (!(region_ratio_threshold > 0.0))
    throw std::invalid_argument("region ratio threshold must be positive");
}

double select_percentile(const ImagePlanar& img, const GamutBoundary& dst,
                         const PercentilePolicy& policy) {
  policy.validate();
  Mask oog(img.width(), img.height());
  const Plane& L = img.channel(lch::L);
  const Plane& C = img.channel(lch::C);
  const Plane& H = img.channel(lch::H);
  for (std::size_t i = 0; i < img.pixel_count(); ++i)
    oog.set(i, !contains(dst, LChColor{L[i], C[i], H[i]}));
  const RegionCount rc = connected_regions(oog);
  if (rc.pixels == 0) return 1.0;
  const double ratio = static_cast<double>(rc.regions) / static_cast<double>(rc.pixels);
  return ratio < policy.region_ratio_threshold ? policy.concentrated : policy.spread;
}

bool scalable(const GamutSlice& s, const SlicePixel& p) {
  return p.l >= 0.0 && p.c <= s.cusp_c * (p.l / s.cusp_l) + kContainEpsilon;
}

double slice_scale_iterative(const GamutSlice& s, std::span<const SlicePixel> pixels, double step) {
  check_step(step);
  long k = 0;
  for (;;) {
    const double r = scale_at(k, step);
    const bool all_inside = std::all_of(pixels.begin(), pixels.end(), [&](const SlicePixel& p) {
      return !scalable(s, p) || s.contains_scaled(p.c, p.l, r);
    });
    if (all_inside) return r;
    if (++k > kMaxScaleSteps) throw std::runtime_error("scale search did not converge");
  }
}

double slice_scale_closed_form(const GamutSlice& s, std::span<const SlicePixel> pixels,
                               double step) {
  check_step(step);
  long k = 0;
  for (const SlicePixel& p : pixels)
    if (scalable(s, p)) k = std::max(k, pixel_steps(s, p, step));
  return scale_at(k, step);
}

HueTable compute_scale_vector(const ImagePlanar& lch_base, const GamutBoundary& dst, double pct,
                              double step) {
  return plane_scale_vector(lch_base, dst, pct, step, false);
}

HueTable compute_scale_vector_iterative(const ImagePlanar& lch_base, const GamutBoundary& dst,
                                        double pct, double step) {
  return plane_scale_vector(lch_base, dst, pct, step, true);
}

HueTable smooth_scale_vector(const HueTable& raw, int window) {
  if (window < 1 || window % 2 == 0 || window > kHueBins)
    throw std::invalid_argument("smoothing window must be odd and within 1..360");
  const int half = window / 2;
  HueTable out{};
  for (int h = 0; h < kHueBins; ++h) {
    double sum = 0.0;
    for (int d = -half; d <= half; ++d) sum += raw[static_cast<std::size_t>((h + d + kHueBins) % kHueBins)];
    out[static_cast<std::size_t>(h)] = sum / window;
  }
  return out;
}

ImagePlanar apply_hue_specific(const ImagePlanar& lch, const HueTable& smoothed) {
  if (std::all_of(smoothed.begin(), smoothed.end(), [](double r) { return r == 1.0; })) return lch;
  return apply_hue_specific(lch, decompose_divide(lch.channel(lch::C)), smoothed);
}

ImagePlanar apply_hue_specific(const ImagePlanar& lch, const BaseDetail& chroma,
                               const HueTable& smoothed) {
  if (std::all_of(smoothed.begin(), smoothed.end(), [](double r) { return r == 1.0; })) return lch;
  const Plane& H = lch.channel(lch::H);
  Plane out(lch.width(), lch.height());
  const auto n = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    const double r = smoothed[static_cast<std::size_t>(hue_bin(H[k]))];
    out[k] = (chroma.base[k] / r) * chroma.detail[k];
  }
  return with_chroma(lch, std::move(out));
}

double global_chroma_scale(const SourceGamut& src, const GamutBoundary& dst) {
  double s = 1.0;
  bool any = false;
  for (int b = 0; b < kHueBins; ++b) {
    const double c = src.chroma[static_cast<std::size_t>(b)];
    if (src.empty(b) || !(c > 0.0)) continue;
    const double ratio = dst.slice(b).cusp_c / c;
    s = any ? std::min(s, ratio) : ratio;
    any = true;
  }
  return s;
}

ImagePlanar apply_global(const ImagePlanar& lch, const SourceGamut& src, const GamutBoundary& dst) {
  const double s = global_chroma_scale(src, dst);
  if (s >= 1.0) return lch;
  return apply_global(lch, decompose_divide(lch.channel(lch::C)), s);
}

ImagePlanar apply_global(const ImagePlanar& lch, const BaseDetail& chroma, double scale) {
  if (scale >= 1.0) return lch;
  Plane out(lch.width(), lch.height());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = (chroma.base[k] * scale) * chroma.detail[k];
  return with_chroma(lch, std::move(out));
}

ChromaResult compress_hue_specific(const ImagePlanar& lch, const GamutBoundary& dst,
                                   const PercentilePolicy& policy, double step) {
  ChromaResult res;
  res.percentile = select_percentile(lch, dst, policy);
  res.scales.step = step;
  BaseDetail bd = decompose_divide(lch.channel(lch::C));
  res.scales.raw = compute_scale_vector(with_chroma(lch, bd.base), dst, res.percentile, step);
  res.scales.smoothed = smooth_scale_vector(res.scales.raw);
  res.image = apply_hue_specific(lch, bd, res.scales.smoothed);
  return res;
}

ChromaResult compress_global(const ImagePlanar& lch, const GamutBoundary& dst,
                             const PercentilePolicy& policy) {
  ChromaResult res;
  res.percentile = select_percentile(lch, dst, policy);
  BaseDetail bd = decompose_divide(lch.channel(lch::C));
  const SourceGamut src = build_source_gamut(with_chroma(lch, bd.base), res.percentile);
  res.global_scale = global_chroma_scale(src, dst);
  res.image = apply_global(lch, bd, res.global_scale);
  res.scales.raw.fill(1.0);
  res.scales.smoothed.fill(1.0);
  return res;
}

void write_scale_vector(std::ostream& os, const ScaleVector& sv) {
  os << "# hue raw smoothed\n";
  for (int h = 0; h < kHueBins; ++h) {
    const auto k = static_cast<std::size_t>(h);
    os << fmt::format("{} {:.6f} {:.6f}\n", h, sv.raw[k], sv.smoothed[k]);
  }
}

}  // namespace hdrgm
