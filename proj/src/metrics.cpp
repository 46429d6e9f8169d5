#include "hdrgm/metrics.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace hdrgm {

double delta_h(double h_t, double h_c) {
  const double direct = std::abs(h_t - h_c);
  const double wrapped = std::abs(std::min(h_t, h_c) + 360.0 - std::max(h_t, h_c));
  return std::min(direct, wrapped);
}

HueDiffReport hue_diff_image(const ImagePlanar& reference, const ImagePlanar& test,
                             const Vec3& white) {
  if (reference.width() != test.width() || reference.height() != test.height())
    throw std::invalid_argument("image dimensions differ");
  HueDiffReport r;
  r.map = Plane(reference.width(), reference.height());
  const std::size_t n = reference.pixel_count();
  Mask valid(reference.width(), reference.height());
  const auto sn = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < sn; ++i) {
    const auto k = static_cast<std::size_t>(i);
    const auto pixel = [k](const ImagePlanar& img) {
      return Vec3{img.channel(0)[k], img.channel(1)[k], img.channel(2)[k]};
    };
    const IptCyl a = xyz_to_ipt_cyl(pixel(reference), white);
    const IptCyl b = xyz_to_ipt_cyl(pixel(test), white);
    if (!(a.C >= kMinIptChroma && b.C >= kMinIptChroma)) continue;
    r.map[k] = delta_h(a.h, b.h);
    valid.set(k, true);
  }

  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (!valid[k]) continue;
    sum += r.map[k];
    ++r.valid_pixels;
  }
  if (r.valid_pixels == 0) {
    r.no_chromatic_pixels = true;
    return r;
  }
  r.mean_dh = sum / static_cast<double>(r.valid_pixels);
  if (r.valid_pixels > 1) {
    double ss = 0.0;
    for (std::size_t k = 0; k < n; ++k)
      if (valid[k]) ss += (r.map[k] - r.mean_dh) * (r.map[k] - r.mean_dh);
    const double m = static_cast<double>(r.valid_pixels);
    r.stderr_dh = std::sqrt(ss / (m - 1.0)) / std::sqrt(m);
  }
  return r;
}

MeanAndError corpus_summary(std::span<const double> means) {
  MeanAndError out;
  if (means.empty()) return out;
  double sum = 0.0;
  for (double v : means) sum += v;
  const double m = static_cast<double>(means.size());
  out.mean = sum / m;
  if (means.size() > 1) {
    double ss = 0.0;
    for (double v : means) ss += (v - out.mean) * (v - out.mean);
    out.std_error = std::sqrt(ss / (m - 1.0)) / std::sqrt(m);
  }
  return out;
}

Mask oog_mask(const ImagePlanar& img, const GamutBoundary& dst, double eps) {
  Mask m(img.width(), img.height());
  const Plane& L = img.channel(lch::L);
  const Plane& C = img.channel(lch::C);
  const Plane& H = img.channel(lch::H);
  for (std::size_t i = 0; i < img.pixel_count(); ++i)
    m.set(i, !contains(dst, LChColor{L[i], C[i], H[i]}, eps));
  return m;
}

double oog_fraction(const ImagePlanar& img, const GamutBoundary& dst, double eps) {
  if (img.pixel_count() == 0) return 0.0;
  return static_cast<double>(oog_mask(img, dst, eps).count()) /
         static_cast<double>(img.pixel_count());
}

void write_hue_report(std::ostream& os, const HueDiffReport& r) {
  os << fmt::format("mean_dh {:.6f}\nstderr_dh {:.6f}\nvalid_pixels {}\n", r.mean_dh, r.stderr_dh,
                    r.valid_pixels);
  if (r.no_chromatic_pixels) os << "flag no chromatic pixels\n";
  if (r.oog_fraction_before) os << fmt::format("oog_fraction_before {:.6f}\n", *r.oog_fraction_before);
  if (r.oog_fraction_after) os << fmt::format("oog_fraction_after {:.6f}\n", *r.oog_fraction_after);
}

}  // namespace hdrgm
