#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "hdrgm/chroma.hpp"
#include "hdrgm/clip.hpp"
#include "hdrgm/colorspace.hpp"
#include "hdrgm/gamut.hpp"
#include "hdrgm/image.hpp"
#include "hdrgm/tone.hpp"

namespace hdrgm {

enum class TmoKind { photographic, cusp };
enum class ChromaKind { hue_specific, global, none };
enum class ClipKind { interp, chroma, lightness, none };
enum class AnchorMode { logavg50, none };

struct PipelineConfig {
  std::filesystem::path input;
  std::filesystem::path output;
  TmoKind tmo = TmoKind::photographic;
  double key = 0.18;
  ChromaKind chroma = ChromaKind::hue_specific;
  ClipKind clip = ClipKind::interp;
  double clip_weight = 0.5;
  PercentilePolicy percentiles;
  Chromaticities target = Chromaticities::srgb();
  AnchorMode anchor = AnchorMode::logavg50;
  bool global_sg = false;
  ToneFunction tone_function = ToneFunction::log1p;
  int boundary_samples = 256;
  std::optional<std::filesystem::path> diag_dir;

  /// Throws InputError for out-of-range values.
  void validate() const;
};

// Option spellings shared by the CLI and the diagnostics.
TmoKind parse_tmo(std::string_view s);
ChromaKind parse_chroma(std::string_view s);
ClipKind parse_clip(std::string_view s);
AnchorMode parse_anchor(std::string_view s);
ToneFunction parse_tone_function(std::string_view s);
std::string_view to_string(TmoKind k);
std::string_view to_string(ChromaKind k);
std::string_view to_string(ClipKind k);

/// "srgb" or a file with four "x y" lines for red, green, blue and white.
Chromaticities load_target(std::string_view target);

struct StageFractions {
  double after_tmo = 0.0;
  double after_chroma = 0.0;
  double after_clip = 0.0;
};

struct PipelineResult {
  ImagePlanar output;        // display-referred XYZ, white at Y = 100
  ImagePlanar tone_mapped;   // XYZ after luminance compression only
  ImagePlanar lch_initial;   // first LCh conversion
  ImagePlanar lch_tone;      // LCh entering the chroma stage
  ImagePlanar lch_chroma;    // LCh after chroma compression
  ImagePlanar lch_final;     // LCh after clipping
  GamutBoundary boundary;
  StageFractions oog;
  ChromaResult chroma;
  std::optional<CuspTmoResult> cusp;
  ClipReport clip;
  bool black_input = false;  // luminance compression skipped
  std::size_t png_clipped = 0;  // set by run_pipeline
};

/// Runs every stage on an in-memory HDR XYZ image.
PipelineResult run_pipeline_on(const ImagePlanar& xyz, const PipelineConfig& cfg);
PipelineResult run_pipeline_on(const ImagePlanar& xyz, const PipelineConfig& cfg,
                               const GamutBoundary& dst);

/// Loads cfg.input, runs the pipeline, writes cfg.output and, when
/// requested, the diagnostics.
PipelineResult run_pipeline(const PipelineConfig& cfg);

void write_diagnostics(const std::filesystem::path& dir, const PipelineResult& r,
                       const PipelineConfig& cfg);

}  // namespace hdrgm
