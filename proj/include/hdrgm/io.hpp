#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "hdrgm/colorspace.hpp"
#include "hdrgm/image.hpp"

namespace hdrgm {

/// Decoded HDR file: three float planes and whether they hold XYZ
/// (Radiance "32-bit_rle_xyze") or linear RGB.
struct HdrPixels {
  ImagePlanar planes;
  bool is_xyz = false;
};

// Codecs throw InputError with "unsupported format" for an unknown magic and
// "corrupt image" for truncated or malformed data.

HdrPixels read_rgbe(const std::filesystem::path& path);
HdrPixels decode_rgbe(std::span<const std::uint8_t> bytes);
/// Writes run-length encoded scanlines where the width allows it.
void write_rgbe(const std::filesystem::path& path, const ImagePlanar& rgb);
std::vector<std::uint8_t> encode_rgbe(const ImagePlanar& rgb, bool run_length = true);

HdrPixels read_pfm(const std::filesystem::path& path);
HdrPixels decode_pfm(std::span<const std::uint8_t> bytes);
/// Little-endian (scale -1.0) three-channel PFM.
void write_pfm(const std::filesystem::path& path, const ImagePlanar& rgb);

/// Radiance RGBE or PFM, detected from the magic bytes.
HdrPixels read_hdr(const std::filesystem::path& path);

/// Loads an HDR file as XYZ. RGB files are assumed to use `file_primaries`.
ImagePlanar load_hdr(const std::filesystem::path& path,
                     const Chromaticities& file_primaries = Chromaticities::srgb());

/// 8-bit sRGB-encoded pixels of a display-referred XYZ image (white at
/// Y = 100) in the given RGB primaries.
struct Srgb8 {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;    // interleaved
  std::size_t clipped_pixels = 0;   // pixels with a channel outside [0,1]
};

Srgb8 encode_srgb8(const ImagePlanar& xyz, const Chromaticities& prims = Chromaticities::srgb());

/// Encodes and writes an 8-bit PNG. Returns the number of clipped pixels.
std::size_t save_png_srgb(const std::filesystem::path& path, const ImagePlanar& xyz,
                          const Chromaticities& prims = Chromaticities::srgb());

/// Reads an 8-bit PNG and returns display-referred XYZ (white at Y = 100).
ImagePlanar load_png_srgb(const std::filesystem::path& path,
                          const Chromaticities& prims = Chromaticities::srgb());

/// Loads either an HDR file or a PNG, by magic.
ImagePlanar load_any(const std::filesystem::path& path,
                     const Chromaticities& prims = Chromaticities::srgb());

void write_png_rgb8(const std::filesystem::path& path, int width, int height,
                    std::span<const std::uint8_t> rgb);
void write_png_mask(const std::filesystem::path& path, const Mask& mask);

/// Writes `plane` as a false-color PNG, mapping [0, max_value] onto a
/// blue-cyan-yellow-red ramp.
void write_png_false_color(const std::filesystem::path& path, const Plane& plane,
                           double max_value);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);

}  // namespace hdrgm
