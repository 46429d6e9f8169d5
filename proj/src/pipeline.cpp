#include "hdrgm/pipeline.hpp"

#include <fmt/format.h>

#include <array>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "hdrgm/error.hpp"
#include "hdrgm/io.hpp"
#include "hdrgm/metrics.hpp"

namespace hdrgm {

namespace {

// Runs one stage and tags any failure with its name. Input errors keep
// their category so the CLI can tell them from internal faults.
template <typename F>
auto stage(std::string_view name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const InputError& e) {
    throw InputError(fmt::format("{}: {}", name, e.what()));
  } catch (const std::exception& e) {
    throw std::runtime_error(fmt::format("{}: {}", name, e.what()));
  }
}

template <typename E, std::size_t N>
E parse_enum(std::string_view what, std::string_view s,
             const std::array<std::pair<std::string_view, E>, N>& table) {
  for (const auto& [name, value] : table)
    if (name == s) return value;
  throw InputError(fmt::format("unknown {} '{}'", what, s));
}

constexpr std::array<std::pair<std::string_view, TmoKind>, 2> kTmo{
    {{"photographic", TmoKind::photographic}, {"cusp", TmoKind::cusp}}};
constexpr std::array<std::pair<std::string_view, ChromaKind>, 3> kChroma{
    {{"hue-specific", ChromaKind::hue_specific},
     {"global", ChromaKind::global},
     {"none", ChromaKind::none}}};
constexpr std::array<std::pair<std::string_view, ClipKind>, 4> kClip{
    {{"interp", ClipKind::interp},
     {"chroma", ClipKind::chroma},
     {"lightness", ClipKind::lightness},
     {"none", ClipKind::none}}};

template <typename E, std::size_t N>
std::string_view name_of(E v, const std::array<std::pair<std::string_view, E>, N>& table) {
  for (const auto& [name, value] : table)
    if (value == v) return name;
  return "?";
}

ClipPolicy clip_policy(const PipelineConfig& cfg) {
  ClipPolicy p;
  p.weight = cfg.clip_weight;
  switch (cfg.clip) {
    case ClipKind::chroma: p.mode = ClipMode::chroma_only; break;
    case ClipKind::lightness: p.mode = ClipMode::lightness_only; break;
    default: p.mode = ClipMode::interpolated; break;
  }
  return p;
}

Vec3 display_white(const PipelineConfig& cfg) { return white_xyz(cfg.target.white, 100.0); }

}  // namespace

void PipelineConfig::validate() const {
  try {
    percentiles.validate();
    ClipPolicy{ClipMode::interpolated, clip_weight}.validate();
    target.validate();
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  if (!(key > 0.0)) throw InputError("key must be positive");
  if (boundary_samples < 64) throw InputError("boundary samples must be at least 64");
}

TmoKind parse_tmo(std::string_view s) { return parse_enum("tmo", s, kTmo); }
ChromaKind parse_chroma(std::string_view s) { return parse_enum("chroma method", s, kChroma); }
ClipKind parse_clip(std::string_view s) { return parse_enum("clip mode", s, kClip); }

AnchorMode parse_anchor(std::string_view s) {
  return parse_enum("anchor", s,
                    std::array<std::pair<std::string_view, AnchorMode>, 2>{
                        {{"logavg50", AnchorMode::logavg50}, {"none", AnchorMode::none}}});
}

ToneFunction parse_tone_function(std::string_view s) {
  return parse_enum("tone function", s,
                    std::array<std::pair<std::string_view, ToneFunction>, 2>{
                        {{"log1p", ToneFunction::log1p}, {"sqrt", ToneFunction::sqrt}}});
}

std::string_view to_string(TmoKind k) { return name_of(k, kTmo); }
std::string_view to_string(ChromaKind k) { return name_of(k, kChroma); }
std::string_view to_string(ClipKind k) { return name_of(k, kClip); }

Chromaticities load_target(std::string_view target) {
  if (target == "srgb") return Chromaticities::srgb();
  std::ifstream f{std::filesystem::path(target)};
  if (!f) throw InputError(fmt::format("cannot open target {}", target));
  std::array<Xy, 4> xy{};
  std::size_t n = 0;
  std::string line;
  while (std::getline(f, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    Xy v;
    if (!(ls >> v.x >> v.y) || n == xy.size()) throw InputError("malformed target gamut file");
    xy[n++] = v;
  }
  if (n != xy.size()) throw InputError("target gamut file needs four xy lines");
  Chromaticities c{xy[0], xy[1], xy[2], xy[3]};
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  return c;
}

PipelineResult run_pipeline_on(const ImagePlanar& xyz, const PipelineConfig& cfg) {
  cfg.validate();
  const GamutBoundary dst =
      stage("boundary", [&] { return build_target_boundary(cfg.target, cfg.boundary_samples); });
  return run_pipeline_on(xyz, cfg, dst);
}

PipelineResult run_pipeline_on(const ImagePlanar& xyz, const PipelineConfig& cfg,
                               const GamutBoundary& dst) {
  cfg.validate();
  if (xyz.channels() != 3 || xyz.pixel_count() == 0) throw InputError("empty image");
  if (!xyz.all_finite()) throw InputError("non-finite pixel values");

  PipelineResult r;
  r.boundary = dst;
  const Vec3 white = display_white(cfg);

  if (cfg.tmo == TmoKind::photographic) {
    r.black_input = !(log_average_luminance(xyz) > 0.0);
    r.tone_mapped = stage("tmo", [&] {
      // Nothing to expose: a black frame stays black.
      return r.black_input ? ImagePlanar(xyz.width(), xyz.height(), 3)
                           : photographic_tmo(xyz, cfg.key);
    });
    r.lch_initial = xyz_to_lch(r.tone_mapped, white);
    r.lch_tone = r.lch_initial;
  } else {
    const double yn = cfg.anchor == AnchorMode::logavg50 ? anchor_white_luminance(xyz) : 100.0;
    r.lch_initial = xyz_to_lch(xyz, white_xyz(cfg.target.white, yn));
    r.cusp = stage("tmo", [&] {
      return cusp_aligned_tmo(r.lch_initial, dst, cfg.percentiles, cfg.tone_function,
                              cfg.global_sg);
    });
    r.lch_tone = r.cusp->image;
    r.tone_mapped = lch_to_xyz(r.lch_tone, white);
  }
  r.oog.after_tmo = oog_fraction(r.lch_tone, dst);

  r.chroma = stage("chroma", [&] {
    switch (cfg.chroma) {
      case ChromaKind::hue_specific: return compress_hue_specific(r.lch_tone, dst, cfg.percentiles);
      case ChromaKind::global: return compress_global(r.lch_tone, dst, cfg.percentiles);
      case ChromaKind::none: break;
    }
    ChromaResult none;
    none.image = r.lch_tone;
    return none;
  });
  r.lch_chroma = r.chroma.image;
  r.oog.after_chroma = oog_fraction(r.lch_chroma, dst);

  if (cfg.clip == ClipKind::none) {
    r.lch_final = r.lch_chroma;
    r.clip.total = r.lch_final.pixel_count();
  } else {
    ClipResult c = stage("clip", [&] { return clip_image(r.lch_chroma, dst, clip_policy(cfg)); });
    r.lch_final = std::move(c.image);
    r.clip = c.report;
  }
  r.oog.after_clip = oog_fraction(r.lch_final, dst);

  // Untouched colors skip the lossy LCh round trip.
  r.output = r.lch_final == r.lch_tone ? r.tone_mapped : lch_to_xyz(r.lch_final, white);
  return r;
}

PipelineResult run_pipeline(const PipelineConfig& cfg) {
  cfg.validate();
  const ImagePlanar xyz = stage("load", [&] { return load_hdr(cfg.input); });
  PipelineResult r = run_pipeline_on(xyz, cfg);
  r.png_clipped = stage("save", [&] { return save_png_srgb(cfg.output, r.output, cfg.target); });
  if (cfg.diag_dir) stage("diagnostics", [&] { write_diagnostics(*cfg.diag_dir, r, cfg); });
  return r;
}

void write_diagnostics(const std::filesystem::path& dir, const PipelineResult& r,
                       const PipelineConfig& cfg) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw InputError(fmt::format("cannot create {}: {}", dir.string(), ec.message()));
  const auto open = [&](const char* name) {
    std::ofstream f(dir / name);
    if (!f) throw InputError(fmt::format("cannot write {}", (dir / name).string()));
    return f;
  };

  {
    auto f = open("boundary.txt");
    write_boundary(f, r.boundary);
  }
  if (cfg.chroma == ChromaKind::hue_specific) {
    auto f = open("scale_vector.txt");
    write_scale_vector(f, r.chroma.scales);
  }
  if (r.cusp) {
    std::array<int, 12> bins{};
    for (std::size_t i = 0; i < bins.size(); ++i) bins[i] = static_cast<int>(30 * i);
    auto f = open("tone_curves.txt");
    write_tone_curves(f, r.cusp->curve, bins);
  }

  write_png_mask(dir / "oog_before.png", oog_mask(r.lch_tone, r.boundary));
  write_png_mask(dir / "oog_after.png", oog_mask(r.lch_final, r.boundary));

  HueDiffReport dh = hue_diff_image(r.tone_mapped, r.output, display_white(cfg));
  dh.oog_fraction_before = r.oog.after_tmo;
  dh.oog_fraction_after = r.oog.after_clip;
  // Fixed 30 degree scale so maps of different runs are comparable.
  write_png_false_color(dir / "dh_map.png", dh.map, 30.0);
  {
    auto f = open("hue_report.txt");
    write_hue_report(f, dh);
  }

  auto f = open("stages.txt");
  f << fmt::format("tmo {}\nchroma {}\nclip {}\n", to_string(cfg.tmo), to_string(cfg.chroma),
                   to_string(cfg.clip));
  if (r.black_input) f << "flag black input\n";
  if (r.cusp) f << fmt::format("tmo_percentile {:.6f}\n", r.cusp->percentile);
  if (cfg.chroma != ChromaKind::none)
    f << fmt::format("chroma_percentile {:.6f}\n", r.chroma.percentile);
  if (cfg.chroma == ChromaKind::global)
    f << fmt::format("global_scale {:.9f}\n", r.chroma.global_scale);
  f << fmt::format("oog_after_tmo {:.6f}\noog_after_chroma {:.6f}\noog_after_clip {:.6f}\n",
                   r.oog.after_tmo, r.oog.after_chroma, r.oog.after_clip);
  write_clip_report(f, r.clip);
  f << fmt::format("png_clipped_pixels {}\n", r.png_clipped);
}

}  // namespace hdrgm
