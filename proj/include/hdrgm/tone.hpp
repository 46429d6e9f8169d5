#pragma once

#include <array>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "hdrgm/chroma.hpp"
#include "hdrgm/gamut.hpp"
#include "hdrgm/image.hpp"

namespace hdrgm {

/// Compressive function F applied above the middle line. Both choices are
/// monotone with F(0) = 0.
enum class ToneFunction { log1p, sqrt };

double apply_tone_function(ToneFunction f, double x);

/// Global photographic operator on luminance. Chromaticities are kept and
/// the result is scaled so that the maximum Y is 100. Throws
/// std::invalid_argument("black image") when no pixel has positive Y.
ImagePlanar photographic_tmo(const ImagePlanar& xyz, double key = 0.18);

/// Log-average of the positive luminances, or 0 when there are none.
double log_average_luminance(const ImagePlanar& xyz);

/// White luminance that places the log-average luminance at L* = 50.
double anchor_white_luminance(const ImagePlanar& xyz);

/// Per-slice parameters of the cusp-aligned lightness curve.
struct LightnessCurveParams {
  double sg_top = 0.0;     // overshoot above g_t
  double sg_bottom = 0.0;  // undershoot below g_b
  double l_mid = 0.0;
  double a_top = 0.0;
  double n = 0.0;          // F(g_t + sg_top - l_mid)
  double b_bottom = 1.0;
  double g_top = 0.0;
  double g_bottom = 0.0;
  double cusp_c = 0.0;     // destination cusp chroma, max(G(C)) of the slice
  ToneFunction f = ToneFunction::log1p;

  bool identity() const { return sg_top == 0.0 && sg_bottom == 0.0; }
  /// Top-segment slope for a pixel of the given chroma.
  double b_top(double chroma) const;
};

using LightnessCurve = std::array<LightnessCurveParams, kHueBins>;

/// Split lightness between the compressed top and the linear bottom:
/// g_b + (g_t - g_b) * sg_b / (sg_t + sg_b), and g_t when both are zero.
double middle_lightness(double g_b, double g_t, double sg_top, double sg_bottom);

LightnessCurveParams make_lightness_params(const GamutSlice& slice, double sg_top, double sg_bottom,
                                           ToneFunction f = ToneFunction::log1p);

/// Fits the curve of one hue bin from the source statistics (percentile
/// lightness for the top, minimum lightness for the bottom). Empty bins get
/// identity parameters.
LightnessCurveParams fit_lightness_params(const SourceGamut& src, const GamutBoundary& dst, int bin,
                                          ToneFunction f = ToneFunction::log1p);

/// Compressed lightness of one pixel. Continuous and non-decreasing in `l`.
double compress_lightness(double l, double chroma, const LightnessCurveParams& p);

struct CuspTmoResult {
  ImagePlanar image;
  LightnessCurve curve{};
  double percentile = 1.0;
};

/// Lightness compression on an HDR LCh image: bilateral base/detail split of
/// L, per-slice curve fit on the base layer, compression of the base, detail
/// re-injection. With `global_sg` the largest overshoots over all slices are
/// used for every slice.
CuspTmoResult cusp_aligned_tmo(const ImagePlanar& lch, const GamutBoundary& dst,
                               const PercentilePolicy& policy,
                               ToneFunction f = ToneFunction::log1p, bool global_sg = false);

/// (input L, output L) samples of a slice curve at fixed chroma.
std::vector<std::pair<double, double>> tone_curve_samples(const LightnessCurveParams& p,
                                                          double chroma, int samples = 256);

/// "hue L_in L_out" records for each requested bin, evaluated at zero chroma
/// and at the slice's cusp chroma.
void write_tone_curves(std::ostream& os, const LightnessCurve& curve, std::span<const int> bins,
                       int samples = 64);

}  // namespace hdrgm
