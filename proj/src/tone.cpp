#include "hdrgm/tone.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "hdrgm/imaging.hpp"

namespace hdrgm {

namespace {

// Y / Y_n that CIE LAB maps to L* = 50.
constexpr double kMidGrayRatio = (66.0 / 116.0) * (66.0 / 116.0) * (66.0 / 116.0);

}  // namespace

double apply_tone_function(ToneFunction f, double x) {
  switch (f) {
    case ToneFunction::log1p:
      return std::log1p(x);
    case ToneFunction::sqrt:
      return std::sqrt(x);
  }
  return x;
}

double log_average_luminance(const ImagePlanar& xyz) {
  double sum = 0.0;
  std::size_t n = 0;
  for (double y : xyz.channel(xyz::Y).values()) {
    if (y > 0.0 && std::isfinite(y)) {
      sum += std::log(y);
      ++n;
    }
  }
  return n == 0 ? 0.0 : std::exp(sum / static_cast<double>(n));
}

double anchor_white_luminance(const ImagePlanar& xyz) {
  const double avg = log_average_luminance(xyz);
  return avg > 0.0 ? avg / kMidGrayRatio : 1.0;
}

ImagePlanar photographic_tmo(const ImagePlanar& xyz, double key) {
  if (!(key > 0.0)) throw std::invalid_argument("key must be positive");
  const double avg = log_average_luminance(xyz);
  if (!(avg > 0.0)) throw std::invalid_argument("black image");

  const Plane& Y = xyz.channel(xyz::Y);
  const double exposure = key / avg;
  double l_white = 0.0;
  for (double y : Y.values())
    if (y > 0.0) l_white = std::max(l_white, exposure * y);
  const double inv_white2 = 1.0 / (l_white * l_white);

  Plane ld(xyz.width(), xyz.height());
  double max_ld = 0.0;
  for (std::size_t i = 0; i < Y.size(); ++i) {
    if (!(Y[i] > 0.0)) continue;
    const double lm = exposure * Y[i];
    ld[i] = lm * (1.0 + lm * inv_white2) / (1.0 + lm);
    max_ld = std::max(max_ld, ld[i]);
  }

  const double norm = 100.0 / max_ld;
  ImagePlanar out(xyz.width(), xyz.height(), 3);
  for (std::size_t i = 0; i < Y.size(); ++i) {
    if (!(Y[i] > 0.0)) continue;
    // Scaling all of X, Y, Z by one factor keeps x and y.
    const double k = ld[i] * norm / Y[i];
    out.channel(xyz::X)[i] = xyz.channel(xyz::X)[i] * k;
    out.channel(xyz::Y)[i] = ld[i] * norm;
    out.channel(xyz::Z)[i] = xyz.channel(xyz::Z)[i] * k;
  }
  return out;
}

double LightnessCurveParams::b_top(double chroma) const {
  const double c = std::max(chroma, 0.0);
  const double w = c / (c + cusp_c);
  return ((1.0 - w) * (g_top - l_mid) + w * (100.0 - l_mid)) / n;
}

double middle_lightness(double g_b, double g_t, double sg_top, double sg_bottom) {
  const double total = sg_top + sg_bottom;
  if (!(total > 0.0)) return g_t;
  return g_b + (g_t - g_b) * sg_bottom / total;
}

LightnessCurveParams make_lightness_params(const GamutSlice& slice, double sg_top, double sg_bottom,
                                           ToneFunction f) {
  LightnessCurveParams p;
  p.f = f;
  p.sg_top = std::max(0.0, sg_top);
  p.sg_bottom = std::max(0.0, sg_bottom);
  p.g_top = slice.g_t;
  p.g_bottom = slice.g_b;
  p.cusp_c = slice.cusp_c;
  p.l_mid = middle_lightness(p.g_bottom, p.g_top, p.sg_top, p.sg_bottom);
  p.a_top = p.l_mid;
  p.n = apply_tone_function(f, p.g_top + p.sg_top - p.l_mid);
  // Linear map of [g_b - sg_b, l_mid] onto [g_b, l_mid].
  const double span = p.l_mid - p.g_bottom + p.sg_bottom;
  p.b_bottom = span > 0.0 ? (p.l_mid - p.g_bottom) / span : 1.0;
  return p;
}

LightnessCurveParams fit_lightness_params(const SourceGamut& src, const GamutBoundary& dst, int bin,
                                          ToneFunction f) {
  const GamutSlice& slice = dst.slice(bin);
  if (src.empty(bin)) return make_lightness_params(slice, 0.0, 0.0, f);
  const auto k = static_cast<std::size_t>(bin);
  return make_lightness_params(slice, src.lightness[k] - slice.g_t,
                               slice.g_b - src.min_lightness[k], f);
}

double compress_lightness(double l, double chroma, const LightnessCurveParams& p) {
  if (l > p.l_mid) {
    if (!(p.n > 0.0)) return l;
    return p.a_top + p.b_top(chroma) * apply_tone_function(p.f, l - p.l_mid);
  }
  return p.g_bottom + p.b_bottom * (l - (p.g_bottom - p.sg_bottom));
}

CuspTmoResult cusp_aligned_tmo(const ImagePlanar& lch, const GamutBoundary& dst,
                               const PercentilePolicy& policy, ToneFunction f, bool global_sg) {
  CuspTmoResult res;
  res.percentile = select_percentile(lch, dst, policy);
  const BaseDetail bd = decompose_divide(lch.channel(lch::L));
  ImagePlanar base_img = lch;
  base_img.set_channel(lch::L, bd.base);
  const SourceGamut src = build_source_gamut(base_img, res.percentile);

  for (int b = 0; b < kHueBins; ++b)
    res.curve[static_cast<std::size_t>(b)] = fit_lightness_params(src, dst, b, f);
  if (global_sg) {
    double top = 0.0, bottom = 0.0;
    for (const auto& p : res.curve) {
      top = std::max(top, p.sg_top);
      bottom = std::max(bottom, p.sg_bottom);
    }
    for (int b = 0; b < kHueBins; ++b)
      res.curve[static_cast<std::size_t>(b)] = make_lightness_params(dst.slice(b), top, bottom, f);
  }

  const bool identity = std::all_of(res.curve.begin(), res.curve.end(),
                                    [](const LightnessCurveParams& p) { return p.identity(); });
  if (identity) {
    res.image = lch;
    return res;
  }

  const Plane& C = lch.channel(lch::C);
  const Plane& H = lch.channel(lch::H);
  Plane out(lch.width(), lch.height());
  const auto n = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    const auto& p = res.curve[static_cast<std::size_t>(hue_bin(H[k]))];
    out[k] = compress_lightness(bd.base[k], C[k], p) * bd.detail[k];
  }
  res.image = lch;
  res.image.set_channel(lch::L, std::move(out));
  return res;
}

std::vector<std::pair<double, double>> tone_curve_samples(const LightnessCurveParams& p,
                                                          double chroma, int samples) {
  if (samples < 2) throw std::invalid_argument("need at least two curve samples");
  const double lo = std::min(0.0, p.g_bottom - p.sg_bottom);
  const double hi = std::max(100.0, p.g_top + p.sg_top);
  std::vector<std::pair<double, double>> out;
  out.reserve(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i) {
    const double l = lo + (hi - lo) * i / (samples - 1);
    out.emplace_back(l, compress_lightness(l, chroma, p));
  }
  return out;
}

void write_tone_curves(std::ostream& os, const LightnessCurve& curve, std::span<const int> bins,
                       int samples) {
  os << "# hue chroma L_in L_out\n";
  for (int b : bins) {
    const auto& p = curve.at(static_cast<std::size_t>(b));
    for (double c : {0.0, p.cusp_c})
      for (const auto& [lin, lout] : tone_curve_samples(p, c, samples))
        os << fmt::format("{} {:.4f} {:.6f} {:.6f}\n", b, c, lin, lout);
  }
}

}  // namespace hdrgm
