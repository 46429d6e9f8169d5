#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "hdrgm/clip.hpp"
#include "hdrgm/metrics.hpp"
#include "support.hpp"

using namespace hdrgm;

namespace {

const GamutBoundary& srgb() {
  static const GamutBoundary b = build_target_boundary(Chromaticities::srgb());
  return b;
}

// Slice triangle written out independently, tolerant by `tol`.
bool in_slice(const GamutSlice& s, double c, double l, double tol) {
  if (l < -tol || l > 100.0 + tol || c < -tol) return false;
  return c <= s.cusp_c * l / s.cusp_l + tol && c <= s.cusp_c * (100.0 - l) / (100.0 - s.cusp_l) + tol;
}

ImagePlanar random_lch(int w, int h, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> L(-10.0, 140.0), C(0.0, 220.0), H(0.0, 360.0);
  ImagePlanar img(w, h, 3);
  for (std::size_t i = 0; i < img.pixel_count(); ++i) {
    img.channel(lch::L)[i] = L(rng);
    img.channel(lch::C)[i] = C(rng);
    img.channel(lch::H)[i] = H(rng);
  }
  return img;
}

}  // namespace

TEST_CASE("in-gamut pixels are returned unchanged") {
  const GamutSlice& s = srgb().slice(200);
  const LChColor p{s.cusp_l, 0.5 * s.cusp_c, 200.5};
  for (ClipMode m : {ClipMode::chroma_only, ClipMode::lightness_only, ClipMode::interpolated}) {
    const LChColor q = clip_pixel(p, srgb(), ClipPolicy{m, 0.5});
    CHECK(q.L == p.L);
    CHECK(q.C == p.C);
    CHECK(q.h == p.h);
  }
}

TEST_CASE("chroma-only clipping keeps lightness and desaturates") {
  const GamutSlice& s = srgb().slice(40);
  const LChColor p{95.0, 60.0, 40.5};
  const LChColor q = clip_pixel(p, srgb(), ClipPolicy{ClipMode::chroma_only, 0.5});
  CHECK(q.L == 95.0);
  CHECK(q.C == doctest::Approx(s.cusp_c * 5.0 / (100.0 - s.cusp_l)).epsilon(1e-12));
  CHECK(q.C < 0.2 * p.C);
  const LChColor top = clip_pixel({120.0, 10.0, 40.5}, srgb(), ClipPolicy{ClipMode::chroma_only, 0.5});
  CHECK(top.L == 100.0);
  CHECK(top.C == 0.0);
}

TEST_CASE("lightness-only clipping keeps chroma up to the cusp") {
  const GamutSlice& s = srgb().slice(130);
  const LChColor p{98.0, 0.5 * s.cusp_c, 130.2};
  const LChColor q = clip_pixel(p, srgb(), ClipPolicy{ClipMode::lightness_only, 0.5});
  CHECK(q.C == p.C);
  CHECK(q.L == doctest::Approx(100.0 - 0.5 * (100.0 - s.cusp_l)).epsilon(1e-12));
  const LChColor far = clip_pixel({60.0, 2.0 * s.cusp_c, 130.2}, srgb(), ClipPolicy{ClipMode::lightness_only, 0.5});
  CHECK(far.L == s.cusp_l);
  CHECK(far.C == s.cusp_c);
}

TEST_CASE("interpolated clipping of a bright saturated pixel") {
  const GamutSlice& s = srgb().slice(270);
  const LChColor p{110.0, s.cusp_c, 270.7};
  const LChColor q = clip_pixel(p, srgb(), ClipPolicy{ClipMode::interpolated, 0.5});
  // Midpoint of white (100, 0) and the cusp.
  CHECK(q.L == doctest::Approx(0.5 * (100.0 + s.cusp_l)).epsilon(1e-12));
  CHECK(q.C == doctest::Approx(0.5 * s.cusp_c).epsilon(1e-12));
  CHECK(contains(srgb(), q, 1e-6));
}

TEST_CASE("clipped images are inside the target with the hue untouched") {
  const ImagePlanar img = random_lch(64, 64, 11);
  for (ClipMode m : {ClipMode::chroma_only, ClipMode::lightness_only, ClipMode::interpolated}) {
    for (double t : {0.0, 0.3, 0.5, 1.0}) {
      const ClipResult r = clip_image(img, srgb(), ClipPolicy{m, t});
      CHECK(r.image.channel(lch::H) == img.channel(lch::H));
      CHECK(oog_fraction(r.image, srgb(), 1e-6) == 0.0);
      for (std::size_t i = 0; i < img.pixel_count(); ++i) {
        const double h = img.channel(lch::H)[i];
        const GamutSlice& s = srgb().slice_for(h);
        CHECK(in_slice(s, r.image.channel(lch::C)[i], r.image.channel(lch::L)[i], 1e-6));
        if (m == ClipMode::lightness_only && img.channel(lch::C)[i] <= s.cusp_c && r.moved[i])
          CHECK(r.image.channel(lch::C)[i] == img.channel(lch::C)[i]);
      }
      const ClipResult again = clip_image(r.image, srgb(), ClipPolicy{m, t});
      CHECK(again.report.moved == 0);
      CHECK(again.image.channel(lch::L) == r.image.channel(lch::L));
      CHECK(again.image.channel(lch::C) == r.image.channel(lch::C));
    }
  }
}

TEST_CASE("displacement grows with the overshoot") {
  const GamutSlice& s = srgb().slice(10);
  double prev = 0.0;
  for (double c = s.chroma_at(50.0) + 1.0; c < 250.0; c += 5.0) {
    const LChColor p{50.0, c, 10.5};
    const LChColor q = clip_pixel(p, srgb(), ClipPolicy{ClipMode::interpolated, 0.5});
    const double d = std::hypot(q.L - p.L, q.C - p.C);
    CHECK(d >= prev);
    prev = d;
  }
}

TEST_CASE("clip report") {
  ImagePlanar img(4, 1, 3);
  const double h = 40.5;
  const GamutSlice& s = srgb().slice_for(h);
  const double ls[4] = {50.0, 50.0, 50.0, 110.0};
  const double cs[4] = {10.0, s.chroma_at(50.0) + 10.0, s.chroma_at(50.0) + 30.0, 0.0};
  for (std::size_t i = 0; i < 4; ++i) {
    img.channel(lch::L)[i] = ls[i];
    img.channel(lch::C)[i] = cs[i];
    img.channel(lch::H)[i] = h;
  }
  const ClipResult r = clip_image(img, srgb(), ClipPolicy{ClipMode::chroma_only, 0.5});
  CHECK(r.report.total == 4);
  CHECK(r.report.moved == 3);
  CHECK_FALSE(r.moved[0]);
  CHECK(r.report.max_dc == doctest::Approx(30.0));
  CHECK(r.report.mean_dc == doctest::Approx(40.0 / 3.0));
  CHECK(r.report.max_dl == doctest::Approx(10.0));
  std::ostringstream os;
  write_clip_report(os, r.report);
  CHECK(os.str().find("moved") != std::string::npos);

  CHECK_THROWS_AS(clip_image(img, srgb(), ClipPolicy{ClipMode::interpolated, 1.5}), std::invalid_argument);
}
