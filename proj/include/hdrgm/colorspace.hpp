#pragma once

#include <Eigen/Core>

namespace hdrgm {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

class ImagePlanar;

/// CIE 1931 xy chromaticity coordinate.
struct Xy {
  double x = 0.0;
  double y = 0.0;
};

/// Primaries and white point of an additive RGB display gamut.
struct Chromaticities {
  Xy red;
  Xy green;
  Xy blue;
  Xy white;

  /// ITU-R BT.709 primaries with a D65 white point.
  static Chromaticities srgb();

  /// Throws std::invalid_argument when a coordinate lies outside (0,1) or
  /// the primaries are collinear.
  void validate() const;
};

/// Cylindrical CIE LAB. Hue is in degrees, normalized to [0, 360).
struct LChColor {
  double L = 0.0;
  double C = 0.0;
  double h = 0.0;
};

/// Cylindrical IPT. Hue in degrees, [0, 360).
struct IptCyl {
  double I = 0.0;
  double C = 0.0;
  double h = 0.0;
};

/// Matrix mapping linear RGB to XYZ such that RGB (1,1,1) lands on the white
/// point with Y = 1. Throws std::invalid_argument("degenerate primaries") if
/// the primary matrix is singular.
Mat3 rgb_to_xyz_matrix(const Chromaticities& prims);

/// XYZ of a white point with the given luminance.
Vec3 white_xyz(const Xy& white, double luminance = 1.0);

/// Wraps an angle in degrees into [0, 360).
double normalize_hue(double degrees);

// LAB is evaluated on unbounded ratios: L exceeds 100 whenever Y > Y_n.
LChColor xyz_to_lch(const Vec3& xyz, const Vec3& white);
Vec3 lch_to_xyz(const LChColor& c, const Vec3& white);

// IPT with the LMS stage normalized so that `white` maps to LMS (1,1,1);
// achromatic colors therefore have zero P and T.
IptCyl xyz_to_ipt_cyl(const Vec3& xyz, const Vec3& white);
Vec3 ipt_cyl_to_xyz(const IptCyl& c, const Vec3& white);

/// IEC 61966-2-1 transfer. Input is expected in [0,1].
double srgb_encode(double linear);
double srgb_decode(double encoded);

// Whole-image conversions. Channel order is X,Y,Z and L,C,h respectively.
ImagePlanar xyz_to_lch(const ImagePlanar& xyz, const Vec3& white);
ImagePlanar lch_to_xyz(const ImagePlanar& lch, const Vec3& white);
ImagePlanar transform(const ImagePlanar& img, const Mat3& m);

}  // namespace hdrgm
