#include "hdrgm/io.hpp"

#include <fmt/format.h>
#include <png.h>

#include <Eigen/LU>

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>
#include <string_view>

#include "hdrgm/error.hpp"

namespace hdrgm {

namespace {

[[noreturn]] void corrupt() { throw InputError("corrupt image"); }

bool starts_with(std::span<const std::uint8_t> b, std::string_view s) {
  return b.size() >= s.size() && std::equal(s.begin(), s.end(), b.begin(),
                                            [](char c, std::uint8_t u) { return static_cast<std::uint8_t>(c) == u; });
}

double sanitize(double v) { return std::isfinite(v) ? v : 0.0; }

// ---------------------------------------------------------------------------
// Radiance RGBE

double rgbe_component(std::uint8_t mantissa, std::uint8_t exponent) {
  if (exponent == 0) return 0.0;
  return std::ldexp(static_cast<double>(mantissa), static_cast<int>(exponent) - 136);
}

std::array<std::uint8_t, 4> to_rgbe(double r, double g, double b) {
  r = std::max(r, 0.0);
  g = std::max(g, 0.0);
  b = std::max(b, 0.0);
  const double v = std::max({r, g, b});
  if (!(v >= 1e-32) || !std::isfinite(v)) return {0, 0, 0, 0};
  int e = 0;
  const double f = std::frexp(v, &e);
  const double scale = f * 256.0 / v;
  auto q = [&](double c) { return static_cast<std::uint8_t>(std::min(255.0, std::floor(c * scale))); };
  return {q(r), q(g), q(b), static_cast<std::uint8_t>(e + 128)};
}

class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> b) : bytes_(b) {}

  std::uint8_t next() {
    if (pos_ >= bytes_.size()) corrupt();
    return bytes_[pos_++];
  }
  std::string line() {
    std::string s;
    for (;;) {
      if (pos_ >= bytes_.size()) corrupt();
      const char c = static_cast<char>(bytes_[pos_++]);
      if (c == '\n') return s;
      s.push_back(c);
    }
  }
  std::size_t remaining() const { return bytes_.size() - pos_; }
  std::span<const std::uint8_t> take(std::size_t n) {
    if (remaining() < n) corrupt();
    auto s = bytes_.subspan(pos_, n);
    pos_ += n;
    return s;
  }
  std::uint8_t peek(std::size_t offset) const {
    return pos_ + offset < bytes_.size() ? bytes_[pos_ + offset] : 0;
  }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

// One scanline of 4-byte pixels, in any of the three Radiance encodings.
void read_scanline(ByteReader& in, std::vector<std::uint8_t>& line, int width) {
  const bool new_rle = width >= 8 && width < 0x8000 && in.peek(0) == 2 && in.peek(1) == 2 &&
                       (in.peek(2) & 0x80) == 0;
  if (new_rle) {
    in.take(2);
    const int encoded_width = (in.next() << 8) | in.next();
    if (encoded_width != width) corrupt();
    for (int ch = 0; ch < 4; ++ch) {
      int x = 0;
      while (x < width) {
        int count = in.next();
        if (count > 128) {
          count -= 128;
          if (x + count > width) corrupt();
          const std::uint8_t v = in.next();
          for (int i = 0; i < count; ++i) line[static_cast<std::size_t>(4 * (x++) + ch)] = v;
        } else {
          if (count == 0 || x + count > width) corrupt();
          for (int i = 0; i < count; ++i) line[static_cast<std::size_t>(4 * (x++) + ch)] = in.next();
        }
      }
    }
    return;
  }
  // Flat pixels, possibly with old-style (1,1,1,n) repeat markers.
  int x = 0;
  int shift = 0;
  while (x < width) {
    std::array<std::uint8_t, 4> px{in.next(), in.next(), in.next(), in.next()};
    if (px[0] == 1 && px[1] == 1 && px[2] == 1) {
      if (x == 0) corrupt();
      const long count = static_cast<long>(px[3]) << shift;
      if (x + count > width) corrupt();
      for (long i = 0; i < count; ++i, ++x)
        std::copy_n(line.begin() + 4 * (x - 1), 4, line.begin() + 4 * x);
      shift += 8;
    } else {
      std::copy(px.begin(), px.end(), line.begin() + 4 * x);
      ++x;
      shift = 0;
    }
  }
}

void rle_channel(std::vector<std::uint8_t>& out, const std::vector<std::uint8_t>& data) {
  constexpr int kMinRun = 4;
  const int n = static_cast<int>(data.size());
  int cur = 0;
  while (cur < n) {
    int beg_run = cur;
    int run_count = 0;
    int old_run_count = 0;
    while (run_count < kMinRun && beg_run < n) {
      beg_run += run_count;
      old_run_count = run_count;
      run_count = 1;
      while (beg_run + run_count < n && run_count < 127 && data[beg_run] == data[beg_run + run_count])
        ++run_count;
    }
    if (old_run_count > 1 && old_run_count == beg_run - cur) {
      out.push_back(static_cast<std::uint8_t>(128 + old_run_count));
      out.push_back(data[cur]);
      cur = beg_run;
    }
    while (cur < beg_run) {
      const int literal = std::min(128, beg_run - cur);
      out.push_back(static_cast<std::uint8_t>(literal));
      out.insert(out.end(), data.begin() + cur, data.begin() + cur + literal);
      cur += literal;
    }
    if (run_count >= kMinRun) {
      out.push_back(static_cast<std::uint8_t>(128 + run_count));
      out.push_back(data[beg_run]);
      cur += run_count;
    }
  }
}

// ---------------------------------------------------------------------------
// PFM

std::string_view next_token(std::span<const std::uint8_t> b, std::size_t& pos) {
  while (pos < b.size() && std::isspace(b[pos])) ++pos;
  const std::size_t start = pos;
  while (pos < b.size() && !std::isspace(b[pos])) ++pos;
  if (start == pos) corrupt();
  return {reinterpret_cast<const char*>(b.data() + start), pos - start};
}

template <typename T>
T parse_number(std::string_view s) {
  T v{};
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) corrupt();
  return v;
}

// ---------------------------------------------------------------------------
// PNG

std::array<double, 3> false_color(double t) {
  static constexpr std::array<std::array<double, 3>, 5> kStops = {{
      {0.0, 0.0, 0.5}, {0.0, 0.0, 1.0}, {0.0, 1.0, 1.0}, {1.0, 1.0, 0.0}, {1.0, 0.0, 0.0}}};
  t = std::clamp(t, 0.0, 1.0) * (kStops.size() - 1);
  const auto i = std::min<std::size_t>(static_cast<std::size_t>(t), kStops.size() - 2);
  const double f = t - static_cast<double>(i);
  std::array<double, 3> c{};
  for (int k = 0; k < 3; ++k) c[k] = (1.0 - f) * kStops[i][k] + f * kStops[i + 1][k];
  return c;
}

std::uint8_t quantize(double v) {
  return static_cast<std::uint8_t>(std::floor(std::clamp(v, 0.0, 1.0) * 255.0 + 0.5));
}

void write_png(const std::filesystem::path& path, int width, int height, std::uint32_t format,
               std::span<const std::uint8_t> pixels) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(width);
  image.height = static_cast<png_uint_32>(height);
  image.format = format;
  if (!png_image_write_to_file(&image, path.c_str(), 0, pixels.data(), 0, nullptr))
    throw InputError(fmt::format("cannot write {}: {}", path.string(), image.message));
}

}  // namespace

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InputError(fmt::format("cannot open {}", path.string()));
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

HdrPixels decode_rgbe(std::span<const std::uint8_t> bytes) {
  if (bytes.empty()) corrupt();
  if (!starts_with(bytes, "#?")) throw InputError("unsupported format");
  ByteReader in(bytes);
  bool is_xyz = false;
  for (;;) {
    const std::string l = in.line();
    if (l.empty()) break;
    if (l.rfind("FORMAT=", 0) == 0) {
      if (l == "FORMAT=32-bit_rle_xyze") is_xyz = true;
      else if (l != "FORMAT=32-bit_rle_rgbe") throw InputError("unsupported format");
    }
  }
  std::istringstream res(in.line());
  std::string ys, xs;
  int height = 0, width = 0;
  if (!(res >> ys >> height >> xs >> width) || xs != "+X" || (ys != "-Y" && ys != "+Y"))
    throw InputError("unsupported format");
  if (width <= 0 || height <= 0) corrupt();
  const bool bottom_up = ys == "+Y";

  HdrPixels out{ImagePlanar(width, height, 3), is_xyz};
  std::vector<std::uint8_t> line(static_cast<std::size_t>(width) * 4);
  for (int row = 0; row < height; ++row) {
    read_scanline(in, line, width);
    const int y = bottom_up ? height - 1 - row : row;
    for (int x = 0; x < width; ++x) {
      const auto* p = &line[static_cast<std::size_t>(4 * x)];
      for (int c = 0; c < 3; ++c) out.planes.channel(c)(x, y) = rgbe_component(p[c], p[3]);
    }
  }
  return out;
}

HdrPixels read_rgbe(const std::filesystem::path& path) { return decode_rgbe(read_file(path)); }

std::vector<std::uint8_t> encode_rgbe(const ImagePlanar& rgb, bool run_length) {
  const int w = rgb.width();
  const int h = rgb.height();
  std::string header = fmt::format("#?RADIANCE\nFORMAT=32-bit_rle_rgbe\n\n-Y {} +X {}\n", h, w);
  std::vector<std::uint8_t> out(header.begin(), header.end());
  const bool rle = run_length && w >= 8 && w < 0x8000;
  std::array<std::vector<std::uint8_t>, 4> planes;
  for (auto& p : planes) p.resize(static_cast<std::size_t>(w));
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const auto px = to_rgbe(rgb.channel(0)(x, y), rgb.channel(1)(x, y), rgb.channel(2)(x, y));
      if (rle) {
        for (int c = 0; c < 4; ++c) planes[c][x] = px[c];
      } else {
        out.insert(out.end(), px.begin(), px.end());
      }
    }
    if (rle) {
      out.insert(out.end(), {2, 2, static_cast<std::uint8_t>(w >> 8), static_cast<std::uint8_t>(w & 0xff)});
      for (const auto& p : planes) rle_channel(out, p);
    }
  }
  return out;
}

void write_rgbe(const std::filesystem::path& path, const ImagePlanar& rgb) {
  const auto bytes = encode_rgbe(rgb);
  std::ofstream f(path, std::ios::binary);
  f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw InputError(fmt::format("cannot write {}", path.string()));
}

HdrPixels decode_pfm(std::span<const std::uint8_t> bytes) {
  if (bytes.empty()) corrupt();
  if (!starts_with(bytes, "PF") && !starts_with(bytes, "Pf")) throw InputError("unsupported format");
  std::size_t pos = 0;
  const std::string_view kind = next_token(bytes, pos);
  if (kind != "PF" && kind != "Pf") throw InputError("unsupported format");
  const int channels = kind == "PF" ? 3 : 1;
  const int width = parse_number<int>(next_token(bytes, pos));
  const int height = parse_number<int>(next_token(bytes, pos));
  const double scale = parse_number<double>(next_token(bytes, pos));
  if (width <= 0 || height <= 0 || scale == 0.0) corrupt();
  ++pos;  // single whitespace byte before the raster
  const std::size_t count = static_cast<std::size_t>(width) * height * channels;
  if (pos > bytes.size() || bytes.size() - pos < count * 4) corrupt();
  const bool little = scale < 0.0;
  const bool swap = little != (std::endian::native == std::endian::little);

  HdrPixels out{ImagePlanar(width, height, 3), false};
  const std::uint8_t* p = bytes.data() + pos;
  for (int row = 0; row < height; ++row) {
    const int y = height - 1 - row;  // rows are stored bottom to top
    for (int x = 0; x < width; ++x) {
      for (int c = 0; c < channels; ++c) {
        std::array<std::uint8_t, 4> raw;
        std::copy_n(p, 4, raw.begin());
        p += 4;
        if (swap) std::reverse(raw.begin(), raw.end());
        const double v = sanitize(std::bit_cast<float>(raw));
        if (channels == 1) {
          for (int k = 0; k < 3; ++k) out.planes.channel(k)(x, y) = v;
        } else {
          out.planes.channel(c)(x, y) = v;
        }
      }
    }
  }
  return out;
}

HdrPixels read_pfm(const std::filesystem::path& path) { return decode_pfm(read_file(path)); }

void write_pfm(const std::filesystem::path& path, const ImagePlanar& rgb) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError(fmt::format("cannot write {}", path.string()));
  f << "PF\n" << rgb.width() << ' ' << rgb.height() << "\n-1.0\n";
  std::vector<std::uint8_t> row(static_cast<std::size_t>(rgb.width()) * 12);
  for (int y = rgb.height() - 1; y >= 0; --y) {
    std::size_t o = 0;
    for (int x = 0; x < rgb.width(); ++x) {
      for (int c = 0; c < 3; ++c) {
        auto raw = std::bit_cast<std::array<std::uint8_t, 4>>(static_cast<float>(rgb.channel(c)(x, y)));
        if constexpr (std::endian::native == std::endian::big) std::reverse(raw.begin(), raw.end());
        std::copy(raw.begin(), raw.end(), row.begin() + static_cast<std::ptrdiff_t>(o));
        o += 4;
      }
    }
    f.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size()));
  }
  if (!f) throw InputError(fmt::format("cannot write {}", path.string()));
}

HdrPixels read_hdr(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  if (bytes.empty()) corrupt();
  if (starts_with(bytes, "#?")) return decode_rgbe(bytes);
  if (starts_with(bytes, "PF") || starts_with(bytes, "Pf")) return decode_pfm(bytes);
  throw InputError("unsupported format");
}

ImagePlanar load_hdr(const std::filesystem::path& path, const Chromaticities& file_primaries) {
  HdrPixels px = read_hdr(path);
  if (px.is_xyz) return std::move(px.planes);
  return transform(px.planes, rgb_to_xyz_matrix(file_primaries));
}

Srgb8 encode_srgb8(const ImagePlanar& xyz, const Chromaticities& prims) {
  const Mat3 to_rgb = rgb_to_xyz_matrix(prims).inverse();
  Srgb8 out{xyz.width(), xyz.height(), std::vector<std::uint8_t>(xyz.pixel_count() * 3), 0};
  for (std::size_t i = 0; i < xyz.pixel_count(); ++i) {
    const Vec3 rgb = to_rgb * Vec3{xyz.channel(0)[i], xyz.channel(1)[i], xyz.channel(2)[i]} / 100.0;
    bool clipped = false;
    for (int c = 0; c < 3; ++c) {
      // Tolerate rounding noise of colors that sit exactly on the cube.
      if (rgb[c] < -1e-9 || rgb[c] > 1.0 + 1e-9) clipped = true;
      out.rgb[3 * i + c] = quantize(srgb_encode(std::clamp(rgb[c], 0.0, 1.0)));
    }
    if (clipped) ++out.clipped_pixels;
  }
  return out;
}

std::size_t save_png_srgb(const std::filesystem::path& path, const ImagePlanar& xyz,
                          const Chromaticities& prims) {
  const Srgb8 px = encode_srgb8(xyz, prims);
  write_png_rgb8(path, px.width, px.height, px.rgb);
  return px.clipped_pixels;
}

ImagePlanar load_png_srgb(const std::filesystem::path& path, const Chromaticities& prims) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.c_str())) {
    std::string msg = image.message;
    throw InputError(fmt::format("cannot read {}: {}", path.string(), msg));
  }
  image.format = PNG_FORMAT_RGB;
  std::vector<std::uint8_t> buf(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, buf.data(), 0, nullptr)) {
    png_image_free(&image);
    throw InputError("corrupt image");
  }
  const int w = static_cast<int>(image.width);
  const int h = static_cast<int>(image.height);
  ImagePlanar rgb(w, h, 3);
  for (std::size_t i = 0; i < rgb.pixel_count(); ++i)
    for (int c = 0; c < 3; ++c) rgb.channel(c)[i] = 100.0 * srgb_decode(buf[3 * i + c] / 255.0);
  return transform(rgb, rgb_to_xyz_matrix(prims));
}

ImagePlanar load_any(const std::filesystem::path& path, const Chromaticities& prims) {
  const auto bytes = read_file(path);
  if (starts_with(bytes, "\x89PNG")) return load_png_srgb(path, prims);
  return load_hdr(path, prims);
}

void write_png_rgb8(const std::filesystem::path& path, int width, int height,
                    std::span<const std::uint8_t> rgb) {
  write_png(path, width, height, PNG_FORMAT_RGB, rgb);
}

void write_png_mask(const std::filesystem::path& path, const Mask& mask) {
  std::vector<std::uint8_t> px(mask.size());
  for (std::size_t i = 0; i < mask.size(); ++i) px[i] = mask[i] ? 255 : 0;
  write_png(path, mask.width(), mask.height(), PNG_FORMAT_GRAY, px);
}

void write_png_false_color(const std::filesystem::path& path, const Plane& plane,
                           double max_value) {
  std::vector<std::uint8_t> px(plane.size() * 3);
  const double scale = max_value > 0.0 ? 1.0 / max_value : 0.0;
  for (std::size_t i = 0; i < plane.size(); ++i) {
    const auto c = false_color(plane[i] * scale);
    for (int k = 0; k < 3; ++k) px[3 * i + k] = quantize(c[k]);
  }
  write_png_rgb8(path, plane.width(), plane.height(), px);
}

}  // namespace hdrgm
