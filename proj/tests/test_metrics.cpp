#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "hdrgm/metrics.hpp"
#include "support.hpp"

using namespace hdrgm;

namespace {

const GamutBoundary& srgb() {
  static const GamutBoundary b = build_target_boundary(Chromaticities::srgb());
  return b;
}

Vec3 d65() { return white_xyz(Chromaticities::srgb().white, 1.0); }

// Applies `f` to the cylindrical IPT coordinates of every pixel.
template <class F>
ImagePlanar edit_ipt(const ImagePlanar& xyz, F f) {
  ImagePlanar out = xyz;
  for (std::size_t i = 0; i < xyz.pixel_count(); ++i) {
    const Vec3 v(xyz.channel(0)[i], xyz.channel(1)[i], xyz.channel(2)[i]);
    const Vec3 w = ipt_cyl_to_xyz(f(xyz_to_ipt_cyl(v, d65())), d65());
    for (int c = 0; c < 3; ++c) out.channel(c)[i] = w[c];
  }
  return out;
}

}  // namespace

TEST_CASE("circular hue difference") {
  CHECK(delta_h(40.0, 60.0) == doctest::Approx(20.0));
  CHECK(delta_h(350.0, 10.0) == doctest::Approx(20.0));
  CHECK(delta_h(0.0, 180.0) == doctest::Approx(180.0));
  CHECK(delta_h(123.0, 123.0) == 0.0);

  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 360.0);
  for (int i = 0; i < 10000; ++i) {
    const double a = u(rng), b = u(rng), c = u(rng);
    CHECK(delta_h(a, b) == delta_h(b, a));
    CHECK(delta_h(a, b) >= 0.0);
    CHECK(delta_h(a, b) <= 180.0);
    CHECK(delta_h(a, c) <= delta_h(a, b) + delta_h(b, c) + 1e-9);
  }
}

TEST_CASE("hue differences between images") {
  const ImagePlanar ref = testing::to_xyz(testing::rgb_image(32, 16, [](int x, int y) {
    return std::array<double, 3>{0.1 + 0.02 * x, 0.3 + 0.02 * y, 0.2};
  }));

  SUBCASE("identical images") {
    const HueDiffReport r = hue_diff_image(ref, ref, d65());
    CHECK(r.mean_dh == 0.0);
    CHECK(r.valid_pixels == ref.pixel_count());
    CHECK_FALSE(r.no_chromatic_pixels);
  }
  SUBCASE("halving IPT chroma keeps hue") {
    const ImagePlanar half = edit_ipt(ref, [](IptCyl c) {
      c.C *= 0.5;
      return c;
    });
    const HueDiffReport r = hue_diff_image(ref, half, d65());
    CHECK(r.mean_dh < 3.0);
    CHECK(r.mean_dh < 1e-9);
  }
  SUBCASE("known hue rotation") {
    const ImagePlanar rotated = edit_ipt(ref, [](IptCyl c) {
      c.h = std::fmod(c.h + 10.0, 360.0);
      return c;
    });
    const HueDiffReport r = hue_diff_image(ref, rotated, d65());
    CHECK(r.mean_dh == doctest::Approx(10.0).epsilon(1e-9));
    CHECK(r.stderr_dh < 1e-9);
    for (double v : r.map.values()) CHECK(v == doctest::Approx(10.0).epsilon(1e-9));
  }
  SUBCASE("gray images have no hue") {
    const ImagePlanar gray = testing::constant_xyz(8, 8, {0.4, 0.4, 0.4});
    const HueDiffReport r = hue_diff_image(gray, gray, d65());
    CHECK(r.no_chromatic_pixels);
    CHECK(r.valid_pixels == 0);
    CHECK(r.mean_dh == 0.0);
  }
  SUBCASE("dimension mismatch") {
    CHECK_THROWS_AS(hue_diff_image(ref, testing::constant_xyz(8, 8, {0.4, 0.4, 0.4}), d65()),
                    std::invalid_argument);
  }
}

TEST_CASE("out-of-gamut fraction") {
  ImagePlanar img(10, 10, 3);
  for (std::size_t i = 0; i < img.pixel_count(); ++i) {
    const double h = 3.6 * static_cast<double>(i) + 0.5;
    const GamutSlice& s = srgb().slice_for(h);
    img.channel(lch::L)[i] = s.cusp_l;
    img.channel(lch::C)[i] = (i % 2 == 0 ? 0.9 : 2.0) * s.cusp_c;
    img.channel(lch::H)[i] = h;
  }
  CHECK(oog_fraction(img, srgb()) == doctest::Approx(0.5));
  CHECK(oog_mask(img, srgb()).count() == 50);
  for (double& c : img.channel(lch::C).values()) c *= 0.4;
  CHECK(oog_fraction(img, srgb()) == 0.0);
}

TEST_CASE("corpus summary") {
  const std::vector<double> v{1.0, 2.0, 3.0, 4.0};
  const MeanAndError m = corpus_summary(v);
  CHECK(m.mean == doctest::Approx(2.5));
  CHECK(m.std_error == doctest::Approx(std::sqrt(5.0 / 3.0) / 2.0));
  const std::vector<double> one{7.0};
  CHECK(corpus_summary(one).mean == 7.0);
  CHECK(corpus_summary(one).std_error == 0.0);
}

TEST_CASE("hue report text") {
  HueDiffReport r;
  r.mean_dh = 1.5;
  r.valid_pixels = 12;
  r.oog_fraction_before = 0.25;
  std::ostringstream os;
  write_hue_report(os, r);
  CHECK(os.str().find("mean_dh") != std::string::npos);
  CHECK(os.str().find("oog_fraction_before") != std::string::npos);
}
