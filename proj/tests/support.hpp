// Shared fixtures for the unit and acceptance tests: synthetic images and
// reference formulas written independently of the library.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <numbers>
#include <random>
#include <string>

#include "hdrgm/colorspace.hpp"
#include "hdrgm/image.hpp"

namespace testing {

using hdrgm::ImagePlanar;

inline std::filesystem::path data_dir() { return HDRGM_TEST_DATA; }

inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("hdrgm-test-" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

// Published IEC 61966-2-1 linear sRGB to XYZ matrix (D65, Y of white = 1).
inline constexpr std::array<std::array<double, 3>, 3> kSrgbToXyz{{
    {0.4124564, 0.3575761, 0.1804375},
    {0.2126729, 0.7151522, 0.0721750},
    {0.0193339, 0.1191920, 0.9503041},
}};
inline constexpr std::array<double, 3> kD65{0.95047, 1.0, 1.08883};

inline std::array<double, 3> ref_rgb_to_xyz(double r, double g, double b) {
  std::array<double, 3> out{};
  for (int i = 0; i < 3; ++i)
    out[i] = kSrgbToXyz[i][0] * r + kSrgbToXyz[i][1] * g + kSrgbToXyz[i][2] * b;
  return out;
}

// CIE 1976 L*a*b* in cylindrical form.
inline std::array<double, 3> ref_xyz_to_lch(std::array<double, 3> xyz,
                                            std::array<double, 3> white) {
  const auto f = [](double t) {
    constexpr double d = 6.0 / 29.0;
    return t > d * d * d ? std::cbrt(t) : t / (3.0 * d * d) + 4.0 / 29.0;
  };
  const double fx = f(xyz[0] / white[0]);
  const double fy = f(xyz[1] / white[1]);
  const double fz = f(xyz[2] / white[2]);
  const double a = 500.0 * (fx - fy);
  const double b = 200.0 * (fy - fz);
  double h = std::atan2(b, a) * 180.0 / std::numbers::pi;
  if (h < 0.0) h += 360.0;
  return {116.0 * fy - 16.0, std::hypot(a, b), h};
}

inline double ref_srgb_encode(double v) {
  return v <= 0.0031308 ? 12.92 * v : 1.055 * std::pow(v, 1.0 / 2.4) - 0.055;
}

// Images are built in linear sRGB and converted with the library matrix so
// that pipeline tests exercise the same primaries as the target gamut.
template <typename F>
ImagePlanar rgb_image(int w, int h, F&& pixel) {
  ImagePlanar rgb(w, h, 3);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const std::array<double, 3> v = pixel(x, y);
      for (int c = 0; c < 3; ++c) rgb.channel(c)(x, y) = v[c];
    }
  return rgb;
}

inline ImagePlanar to_xyz(const ImagePlanar& rgb) {
  return hdrgm::transform(rgb, hdrgm::rgb_to_xyz_matrix(hdrgm::Chromaticities::srgb()));
}

inline ImagePlanar constant_xyz(int w, int h, std::array<double, 3> rgb) {
  return to_xyz(rgb_image(w, h, [&](int, int) { return rgb; }));
}

// Smooth HDR gradient: luminance spans four decades, hue sweeps the circle
// with moderate saturation.
inline ImagePlanar hdr_gradient(int w, int h) {
  return to_xyz(rgb_image(w, h, [&](int x, int y) {
    const double lum = std::pow(10.0, 4.0 * x / std::max(1, w - 1) - 2.0);
    const double a = 2.0 * std::numbers::pi * y / h;
    std::array<double, 3> c{};
    for (int k = 0; k < 3; ++k)
      c[k] = lum * (0.6 + 0.35 * std::cos(a - 2.0 * std::numbers::pi * k / 3.0));
    return c;
  }));
}

// Highly saturated patches at several exposures over a dim gray surround,
// the typical source of out-of-gamut tone mapper output.
inline ImagePlanar saturated_patches(int w, int h) {
  static constexpr std::array<std::array<double, 3>, 6> kColors{{
      {1.0, 0.02, 0.01}, {0.02, 1.0, 0.05}, {0.01, 0.05, 1.0},
      {1.0, 0.9, 0.0},   {0.0, 0.9, 1.0},   {0.9, 0.0, 1.0}}};
  return to_xyz(rgb_image(w, h, [&](int x, int y) {
    const int px = x * 6 / w;
    const int py = y * 3 / h;
    const int lx = x % std::max(1, w / 6);
    const int ly = y % std::max(1, h / 3);
    const bool border = lx < 3 || ly < 3;
    if (border) return std::array<double, 3>{0.05, 0.05, 0.05};
    const double gain = std::pow(8.0, py);
    const auto& c = kColors[static_cast<std::size_t>(px)];
    return std::array<double, 3>{gain * c[0], gain * c[1], gain * c[2]};
  }));
}

// Log-normal luminance noise with random chromaticities: spatially spread
// out-of-gamut pixels.
inline ImagePlanar random_hdr(int w, int h, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::lognormal_distribution<double> lum(0.0, 1.5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return to_xyz(rgb_image(w, h, [&](int, int) {
    const double l = lum(rng);
    return std::array<double, 3>{l * u(rng), l * u(rng), l * u(rng)};
  }));
}

// Colors strictly inside the sRGB cube, darkened so that the photographic
// normalization keeps them away from the white apex.
inline ImagePlanar in_gamut_image(int w, int h) {
  return to_xyz(rgb_image(w, h, [&](int x, int y) {
    const double t = static_cast<double>(x) / std::max(1, w - 1);
    const double s = static_cast<double>(y) / std::max(1, h - 1);
    return std::array<double, 3>{0.2 + 0.1 * t, 0.2 + 0.05 * s, 0.22};
  }));
}

}  // namespace testing
