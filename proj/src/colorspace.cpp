#include "hdrgm/colorspace.hpp"

#include <Eigen/LU>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "hdrgm/image.hpp"

namespace hdrgm {

namespace {

constexpr double kLabEpsilon = 216.0 / 24389.0;
constexpr double kLabKappa = 24389.0 / 27.0;
constexpr double kIptExponent = 0.43;

double lab_f(double t) {
  return t > kLabEpsilon ? std::cbrt(t) : (kLabKappa * t + 16.0) / 116.0;
}

double lab_f_inv(double f) {
  constexpr double kDelta = 6.0 / 29.0;
  return f > kDelta ? f * f * f : (116.0 * f - 16.0) / kLabKappa;
}

double signed_pow(double v, double e) {
  return std::copysign(std::pow(std::abs(v), e), v);
}

double degrees(double rad) { return rad * 180.0 / std::numbers::pi; }
double radians(double deg) { return deg * std::numbers::pi / 180.0; }

// Ebner & Fairchild (1998).
const Mat3& xyz_to_lms() {
  static const Mat3 m = (Mat3() << 0.4002, 0.7075, -0.0807,
                                   -0.2280, 1.1500, 0.0612,
                                   0.0, 0.0, 0.9184).finished();
  return m;
}

const Mat3& lms_to_xyz() {
  static const Mat3 m = xyz_to_lms().inverse();
  return m;
}

const Mat3& lms_to_ipt() {
  static const Mat3 m = (Mat3() << 0.4000, 0.4000, 0.2000,
                                   4.4550, -4.8510, 0.3960,
                                   0.8056, 0.3572, -1.1628).finished();
  return m;
}

const Mat3& ipt_to_lms() {
  static const Mat3 m = lms_to_ipt().inverse();
  return m;
}

Vec3 xy_to_xyz(const Xy& c) { return {c.x / c.y, 1.0, (1.0 - c.x - c.y) / c.y}; }

}  // namespace

Chromaticities Chromaticities::srgb() {
  return {{0.64, 0.33}, {0.30, 0.60}, {0.15, 0.06}, {0.3127, 0.3290}};
}

void Chromaticities::validate() const {
  for (const Xy& c : {red, green, blue, white}) {
    if (!(c.x > 0.0 && c.x < 1.0 && c.y > 0.0 && c.y < 1.0))
      throw std::invalid_argument("chromaticity coordinate outside (0,1)");
  }
  double area = (green.x - red.x) * (blue.y - red.y) - (blue.x - red.x) * (green.y - red.y);
  if (std::abs(area) < 1e-9) throw std::invalid_argument("degenerate primaries");
}

Mat3 rgb_to_xyz_matrix(const Chromaticities& prims) {
  prims.validate();
  Mat3 primaries;
  primaries.col(0) = xy_to_xyz(prims.red);
  primaries.col(1) = xy_to_xyz(prims.green);
  primaries.col(2) = xy_to_xyz(prims.blue);
  Eigen::FullPivLU<Mat3> lu(primaries);
  if (!lu.isInvertible()) throw std::invalid_argument("degenerate primaries");
  Vec3 scale = lu.solve(xy_to_xyz(prims.white));
  return primaries * scale.asDiagonal();
}

Vec3 white_xyz(const Xy& white, double luminance) { return xy_to_xyz(white) * luminance; }

double normalize_hue(double degrees) {
  double h = std::fmod(degrees, 360.0);
  if (h < 0.0) h += 360.0;
  // fmod of a tiny negative angle plus 360 can round up to exactly 360.
  if (h >= 360.0) h = 0.0;
  return h;
}

LChColor xyz_to_lch(const Vec3& xyz, const Vec3& white) {
  double fx = lab_f(xyz.x() / white.x());
  double fy = lab_f(xyz.y() / white.y());
  double fz = lab_f(xyz.z() / white.z());
  double a = 500.0 * (fx - fy);
  double b = 200.0 * (fy - fz);
  return {116.0 * fy - 16.0, std::hypot(a, b), normalize_hue(degrees(std::atan2(b, a)))};
}

Vec3 lch_to_xyz(const LChColor& c, const Vec3& white) {
  double hr = radians(c.h);
  double a = c.C * std::cos(hr);
  double b = c.C * std::sin(hr);
  double fy = (c.L + 16.0) / 116.0;
  double fx = fy + a / 500.0;
  double fz = fy - b / 200.0;
  return {lab_f_inv(fx) * white.x(), lab_f_inv(fy) * white.y(), lab_f_inv(fz) * white.z()};
}

IptCyl xyz_to_ipt_cyl(const Vec3& xyz, const Vec3& white) {
  Vec3 lms = xyz_to_lms() * xyz;
  Vec3 norm = xyz_to_lms() * white;
  Vec3 lmsp;
  for (int i = 0; i < 3; ++i) lmsp[i] = signed_pow(lms[i] / norm[i], kIptExponent);
  Vec3 ipt = lms_to_ipt() * lmsp;
  return {ipt[0], std::hypot(ipt[1], ipt[2]),
          normalize_hue(degrees(std::atan2(ipt[2], ipt[1])))};
}

Vec3 ipt_cyl_to_xyz(const IptCyl& c, const Vec3& white) {
  double hr = radians(c.h);
  Vec3 ipt{c.I, c.C * std::cos(hr), c.C * std::sin(hr)};
  Vec3 lmsp = ipt_to_lms() * ipt;
  Vec3 norm = xyz_to_lms() * white;
  Vec3 lms;
  for (int i = 0; i < 3; ++i) lms[i] = signed_pow(lmsp[i], 1.0 / kIptExponent) * norm[i];
  return lms_to_xyz() * lms;
}

double srgb_encode(double linear) {
  if (linear <= 0.0031308) return 12.92 * linear;
  return 1.055 * std::pow(linear, 1.0 / 2.4) - 0.055;
}

double srgb_decode(double encoded) {
  if (encoded <= 0.04045) return encoded / 12.92;
  return std::pow((encoded + 0.055) / 1.055, 2.4);
}

ImagePlanar xyz_to_lch(const ImagePlanar& xyz, const Vec3& white) {
  ImagePlanar out(xyz.width(), xyz.height(), 3);
  const auto n = static_cast<std::ptrdiff_t>(xyz.pixel_count());
  const Plane& X = xyz.channel(xyz::X);
  const Plane& Y = xyz.channel(xyz::Y);
  const Plane& Z = xyz.channel(xyz::Z);
  Plane& L = out.channel(lch::L);
  Plane& C = out.channel(lch::C);
  Plane& H = out.channel(lch::H);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    auto k = static_cast<std::size_t>(i);
    LChColor c = xyz_to_lch(Vec3{X[k], Y[k], Z[k]}, white);
    L[k] = c.L;
    C[k] = c.C;
    H[k] = c.h;
  }
  return out;
}

ImagePlanar lch_to_xyz(const ImagePlanar& img, const Vec3& white) {
  ImagePlanar out(img.width(), img.height(), 3);
  const auto n = static_cast<std::ptrdiff_t>(img.pixel_count());
  const Plane& L = img.channel(lch::L);
  const Plane& C = img.channel(lch::C);
  const Plane& H = img.channel(lch::H);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    auto k = static_cast<std::size_t>(i);
    Vec3 v = lch_to_xyz(LChColor{L[k], C[k], H[k]}, white);
    for (int c = 0; c < 3; ++c) out.channel(c)[k] = v[c];
  }
  return out;
}

ImagePlanar transform(const ImagePlanar& img, const Mat3& m) {
  ImagePlanar out(img.width(), img.height(), 3);
  const auto n = static_cast<std::ptrdiff_t>(img.pixel_count());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    auto k = static_cast<std::size_t>(i);
    Vec3 v = m * Vec3{img.channel(0)[k], img.channel(1)[k], img.channel(2)[k]};
    for (int c = 0; c < 3; ++c) out.channel(c)[k] = v[c];
  }
  return out;
}

}  // namespace hdrgm
