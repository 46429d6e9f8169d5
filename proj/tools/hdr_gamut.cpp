// hdr-gamut: tone mapping and gamut management of HDR images.
//
//   hdr-gamut map --input f.hdr --output f.png [options]
//   hdr-gamut boundary --target srgb --out boundary.txt
//   hdr-gamut metrics --ref a.hdr --test b.png
//
// Exit status: 0 on success, 1 on bad input or arguments, 2 on internal error.

#include <CLI11.hpp>
#include <fmt/format.h>

#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "hdrgm/error.hpp"
#include "hdrgm/gamut.hpp"
#include "hdrgm/io.hpp"
#include "hdrgm/metrics.hpp"
#include "hdrgm/pipeline.hpp"

namespace {

struct MapArgs {
  std::string input, output;
  std::string tmo = "photographic";
  double key = 0.18;
  std::string chroma = "hue-specific";
  std::string clip = "interp";
  double clip_weight = 0.5;
  std::string target = "srgb";
  std::string anchor = "logavg50";
  std::string tone_function = "log1p";
  bool global_sg = false;
  double pct_spread = 0.99;
  double pct_concentrated = 1.0;
  double region_threshold = 0.01;
  int boundary_samples = 256;
  std::string diag;
};

struct BoundaryArgs {
  std::string target = "srgb";
  std::string out;
  int samples = 256;
};

struct MetricsArgs {
  std::string ref, test;
  std::string target = "srgb";
  std::string map;
};

int run_map(const MapArgs& a) {
  hdrgm::PipelineConfig cfg;
  cfg.input = a.input;
  cfg.output = a.output;
  cfg.tmo = hdrgm::parse_tmo(a.tmo);
  cfg.key = a.key;
  cfg.chroma = hdrgm::parse_chroma(a.chroma);
  cfg.clip = hdrgm::parse_clip(a.clip);
  cfg.clip_weight = a.clip_weight;
  cfg.target = hdrgm::load_target(a.target);
  cfg.anchor = hdrgm::parse_anchor(a.anchor);
  cfg.tone_function = hdrgm::parse_tone_function(a.tone_function);
  cfg.global_sg = a.global_sg;
  cfg.percentiles = {a.pct_spread, a.pct_concentrated, a.region_threshold};
  cfg.boundary_samples = a.boundary_samples;
  if (!a.diag.empty()) cfg.diag_dir = a.diag;

  const hdrgm::PipelineResult r = hdrgm::run_pipeline(cfg);
  fmt::print("oog after tmo {:.6f}, after chroma {:.6f}, after clip {:.6f}\n", r.oog.after_tmo,
             r.oog.after_chroma, r.oog.after_clip);
  return 0;
}

int run_boundary(const BoundaryArgs& a) {
  const hdrgm::Chromaticities prims = hdrgm::load_target(a.target);
  if (a.samples < 64) throw hdrgm::InputError("samples must be at least 64");
  const hdrgm::GamutBoundary b = hdrgm::build_target_boundary(prims, a.samples);
  std::ofstream f(a.out);
  if (!f) throw hdrgm::InputError(fmt::format("cannot write {}", a.out));
  hdrgm::write_boundary(f, b);
  return 0;
}

int run_metrics(const MetricsArgs& a) {
  const hdrgm::Chromaticities prims = hdrgm::load_target(a.target);
  // Both images must be display referred: white at Y = 100.
  const hdrgm::ImagePlanar ref = hdrgm::load_any(a.ref, prims);
  const hdrgm::ImagePlanar test = hdrgm::load_any(a.test, prims);
  if (ref.width() != test.width() || ref.height() != test.height())
    throw hdrgm::InputError("image dimensions differ");
  const hdrgm::HueDiffReport r = hdrgm::hue_diff_image(ref, test, hdrgm::white_xyz(prims.white, 100.0));
  hdrgm::write_hue_report(std::cout, r);
  if (!a.map.empty()) hdrgm::write_png_false_color(a.map, r.map, 30.0);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"HDR tone mapping with hue-preserving gamut management"};
  app.require_subcommand(1);

  MapArgs map;
  CLI::App* m = app.add_subcommand("map", "tone map an HDR image into the target gamut");
  m->add_option("--input", map.input, "Radiance .hdr or .pfm file")->required();
  m->add_option("--output", map.output, "8-bit PNG")->required();
  m->add_option("--tmo", map.tmo, "photographic|cusp")->capture_default_str();
  m->add_option("--key", map.key, "photographic key value")->capture_default_str();
  m->add_option("--chroma", map.chroma, "hue-specific|global|none")->capture_default_str();
  m->add_option("--clip", map.clip, "interp|chroma|lightness|none")->capture_default_str();
  m->add_option("--clip-weight", map.clip_weight, "weight of the lightness target")
      ->capture_default_str();
  m->add_option("--target", map.target, "srgb or a file of r, g, b, w xy lines")
      ->capture_default_str();
  m->add_option("--anchor", map.anchor, "HDR white anchor for the cusp path: logavg50|none")
      ->capture_default_str();
  m->add_option("--tone-function", map.tone_function, "log1p|sqrt")->capture_default_str();
  m->add_flag("--global-sg", map.global_sg, "one lightness overshoot for all hue slices");
  m->add_option("--percentile-spread", map.pct_spread)->capture_default_str();
  m->add_option("--percentile-concentrated", map.pct_concentrated)->capture_default_str();
  m->add_option("--region-threshold", map.region_threshold)->capture_default_str();
  m->add_option("--boundary-samples", map.boundary_samples, "RGB cube samples per edge")
      ->capture_default_str();
  m->add_option("--diag", map.diag, "diagnostics directory");

  BoundaryArgs boundary;
  CLI::App* b = app.add_subcommand("boundary", "export the cusp table of a gamut");
  b->add_option("--target", boundary.target)->capture_default_str();
  b->add_option("--out", boundary.out)->required();
  b->add_option("--samples", boundary.samples)->capture_default_str();

  MetricsArgs metrics;
  CLI::App* x = app.add_subcommand("metrics", "hue differences between two display images");
  x->add_option("--ref", metrics.ref)->required();
  x->add_option("--test", metrics.test)->required();
  x->add_option("--target", metrics.target)->capture_default_str();
  x->add_option("--map", metrics.map, "false-color PNG of the hue differences");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*m) return run_map(map);
    if (*b) return run_boundary(boundary);
    return run_metrics(metrics);
  } catch (const hdrgm::InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 2;
  }
}
