#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <string>

#include "hdrgm/tone.hpp"
#include "support.hpp"

using namespace hdrgm;

namespace {

const GamutBoundary& srgb() {
  static const GamutBoundary b = build_target_boundary(Chromaticities::srgb());
  return b;
}

double chroma_x(const ImagePlanar& xyz, std::size_t i) {
  const double s = xyz.channel(0)[i] + xyz.channel(1)[i] + xyz.channel(2)[i];
  return xyz.channel(0)[i] / s;
}
double chroma_y(const ImagePlanar& xyz, std::size_t i) {
  const double s = xyz.channel(0)[i] + xyz.channel(1)[i] + xyz.channel(2)[i];
  return xyz.channel(1)[i] / s;
}

}  // namespace

TEST_CASE("photographic operator against the written-out formula") {
  const ImagePlanar xyz = testing::random_hdr(13, 11, 21);
  const ImagePlanar out = photographic_tmo(xyz, 0.18);
  const Plane& Y = xyz.channel(1);

  double log_sum = 0.0;
  for (double y : Y.values()) log_sum += std::log(y);
  const double avg = std::exp(log_sum / static_cast<double>(Y.size()));
  const double white = 0.18 / avg * Y.max_value();
  std::vector<double> ld;
  for (double y : Y.values()) {
    const double lm = 0.18 / avg * y;
    ld.push_back(lm * (1 + lm / (white * white)) / (1 + lm));
  }
  const double peak = *std::max_element(ld.begin(), ld.end());
  for (std::size_t i = 0; i < Y.size(); ++i)
    CHECK(out.channel(1)[i] == doctest::Approx(100.0 * ld[i] / peak).epsilon(1e-12));
  CHECK(std::abs(out.channel(1).max_value() - 100.0) < 1e-9);
  for (std::size_t i = 0; i < Y.size(); ++i) {
    CHECK(std::abs(chroma_x(out, i) - chroma_x(xyz, i)) < 1e-12);
    CHECK(std::abs(chroma_y(out, i) - chroma_y(xyz, i)) < 1e-12);
  }
}

TEST_CASE("photographic operator edge cases") {
  const ImagePlanar flat = testing::constant_xyz(7, 5, {0.3, 0.3, 0.3});
  const ImagePlanar flat_out = photographic_tmo(flat);
  for (double y : flat_out.channel(1).values()) CHECK(y == doctest::Approx(100.0).epsilon(1e-12));

  CHECK_THROWS_WITH_AS(photographic_tmo(ImagePlanar(4, 4, 3)), "black image", std::invalid_argument);

  const ImagePlanar xyz = testing::hdr_gradient(32, 16);
  ImagePlanar scaled = xyz;
  for (int c = 0; c < 3; ++c)
    for (double& v : scaled.channel(c).values()) v *= 250.0;
  const ImagePlanar a = photographic_tmo(xyz);
  const ImagePlanar b = photographic_tmo(scaled);
  for (int c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < xyz.pixel_count(); ++i)
      CHECK(b.channel(c)[i] == doctest::Approx(a.channel(c)[i]).epsilon(1e-12));
}

TEST_CASE("HDR anchor puts the log-average at L* = 50") {
  const ImagePlanar xyz = testing::random_hdr(21, 17, 4);
  const double avg = log_average_luminance(xyz);
  const double yn = anchor_white_luminance(xyz);
  const LChColor c = xyz_to_lch(Vec3(0, avg, 0), white_xyz(Chromaticities::srgb().white, yn));
  CHECK(c.L == doctest::Approx(50.0).epsilon(1e-12));
  CHECK(anchor_white_luminance(ImagePlanar(3, 3, 3)) == 1.0);
}

TEST_CASE("middle lightness") {
  CHECK(middle_lightness(0.0, 60.0, 20.0, 0.0) == 0.0);
  CHECK(middle_lightness(0.0, 60.0, 0.0, 15.0) == 60.0);
  CHECK(middle_lightness(0.0, 60.0, 9.0, 9.0) == 30.0);
  CHECK(middle_lightness(10.0, 60.0, 0.0, 0.0) == 60.0);
}

TEST_CASE("lightness curve landmarks") {
  const GamutSlice& s = srgb().slice(120);
  const double sg_t = 140.0, sg_b = 12.0;
  const LightnessCurveParams p = make_lightness_params(s, sg_t, sg_b);
  CHECK(p.g_top == s.cusp_l);
  CHECK(p.l_mid == doctest::Approx(s.cusp_l * sg_b / (sg_t + sg_b)));
  CHECK(compress_lightness(p.l_mid, 0.0, p) == doctest::Approx(p.l_mid).epsilon(1e-15));
  CHECK(compress_lightness(p.l_mid, 50.0, p) == doctest::Approx(p.l_mid).epsilon(1e-15));
  CHECK(compress_lightness(s.g_t + sg_t, 0.0, p) == doctest::Approx(s.g_t).epsilon(1e-12));
  const double at_cusp = p.l_mid + ((s.g_t - p.l_mid) + (100.0 - p.l_mid)) / 2.0;
  CHECK(compress_lightness(s.g_t + sg_t, s.cusp_c, p) == doctest::Approx(at_cusp).epsilon(1e-12));
  CHECK(compress_lightness(s.g_b - sg_b, 0.0, p) == doctest::Approx(s.g_b).epsilon(1e-12));

  for (double c : {0.0, 1.0, 50.0, 1e3, 1e6}) {
    const double w = c / (c + s.cusp_c);
    CHECK(w >= 0.0);
    CHECK(w < 1.0);
    // Range bound of the top branch inside the fitted interval.
    CHECK(compress_lightness(s.g_t + sg_t, c, p) <= p.l_mid + p.b_top(c) * p.n + 1e-12);
    CHECK(compress_lightness(s.g_t + sg_t, c, p) <= 100.0);
  }
}

TEST_CASE("identity parameters leave lightness alone") {
  const LightnessCurveParams p = make_lightness_params(srgb().slice(3), 0.0, 0.0);
  CHECK(p.identity());
  for (double l : {-5.0, 0.0, 33.3, 100.0, 180.0}) CHECK(compress_lightness(l, 20.0, p) == l);
}

TEST_CASE("composite curve is continuous and monotone") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (ToneFunction f : {ToneFunction::log1p, ToneFunction::sqrt}) {
    for (int b = 0; b < kHueBins; b += 5) {
      const LightnessCurveParams p = make_lightness_params(srgb().slice(b), 300.0 * u(rng), 30.0 * u(rng), f);
      for (double c : {0.0, 10.0, p.cusp_c, 400.0}) {
        CHECK(compress_lightness(p.l_mid, c, p) == doctest::Approx(p.l_mid).epsilon(1e-15));
        // sqrt has an unbounded slope at zero, so the one-ulp check is for log1p.
        if (f == ToneFunction::log1p) {
          const double below = compress_lightness(std::nextafter(p.l_mid, -1e9), c, p);
          const double above = compress_lightness(std::nextafter(p.l_mid, 1e9), c, p);
          CHECK(std::abs(above - below) < 1e-9);
        }
        const auto samples = tone_curve_samples(p, c, 10000);
        for (std::size_t i = 1; i < samples.size(); ++i) CHECK(samples[i].second >= samples[i - 1].second);
        if (c == 0.0)
          for (std::size_t i = 1; i < samples.size(); ++i) CHECK(samples[i].second > samples[i - 1].second);
      }
    }
  }
}

TEST_CASE("cusp-aligned compression") {
  SUBCASE("input below every slice cusp is unchanged") {
    // Dark colors: lightness stays under the lowest cusp lightness (blue).
    const ImagePlanar rgb = testing::rgb_image(20, 12, [](int x, int y) {
      return std::array<double, 3>{0.01 + 0.002 * x, 0.02 + 0.001 * y, 0.015};
    });
    const ImagePlanar lch = xyz_to_lch(testing::to_xyz(rgb), white_xyz(Chromaticities::srgb().white, 1.0));
    REQUIRE(lch.channel(lch::L).max_value() < 30.0);
    const CuspTmoResult r = cusp_aligned_tmo(lch, srgb(), PercentilePolicy{});
    for (const auto& p : r.curve) CHECK(p.identity());
    for (std::size_t i = 0; i < lch.pixel_count(); ++i)
      CHECK(std::abs(r.image.channel(lch::L)[i] - lch.channel(lch::L)[i]) < 1e-6);
    CHECK(r.image.channel(lch::H) == lch.channel(lch::H));
    CHECK(r.image.channel(lch::C) == lch.channel(lch::C));
  }
  SUBCASE("HDR lightness is brought towards the display range") {
    const ImagePlanar xyz = testing::hdr_gradient(64, 32);
    const ImagePlanar lch = xyz_to_lch(xyz, white_xyz(Chromaticities::srgb().white, anchor_white_luminance(xyz)));
    CHECK(lch.channel(lch::L).max_value() > 150.0);
    const CuspTmoResult r = cusp_aligned_tmo(lch, srgb(), PercentilePolicy{});
    CHECK(r.image.channel(lch::H) == lch.channel(lch::H));
    CHECK(r.image.channel(lch::C) == lch.channel(lch::C));
    CHECK(r.image.channel(lch::L).max_value() < 110.0);
    CHECK(r.image.channel(lch::L).min_value() >= -1e-9);
    const CuspTmoResult g = cusp_aligned_tmo(lch, srgb(), PercentilePolicy{}, ToneFunction::log1p, true);
    for (const auto& p : g.curve) {
      CHECK(p.sg_top == g.curve[0].sg_top);
      CHECK(p.sg_bottom == g.curve[0].sg_bottom);
    }
  }
}

TEST_CASE("tone curve export") {
  LightnessCurve curve;
  for (int b = 0; b < kHueBins; ++b) curve[b] = make_lightness_params(srgb().slice(b), 50.0, 5.0);
  std::ostringstream os;
  const std::array<int, 2> bins{0, 180};
  write_tone_curves(os, curve, bins, 8);
  const std::string text = os.str();
  CHECK(text.rfind("# hue chroma L_in L_out\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 1 + 2 * 2 * 8);
}
