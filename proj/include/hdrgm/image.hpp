#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace hdrgm {

/// Single-channel row-major image of doubles.
class Plane {
 public:
  Plane() = default;
  Plane(int width, int height, double fill = 0.0);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(int x, int y) { return data_[index(x, y)]; }
  double operator()(int x, int y) const { return data_[index(x, y)]; }
  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }

  double max_value() const;
  double min_value() const;

  bool operator==(const Plane&) const = default;

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<double> data_;
};

/// Binary mask with the same addressing as Plane.
class Mask {
 public:
  Mask() = default;
  Mask(int width, int height, bool fill = false);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return bits_.size(); }

  bool operator()(int x, int y) const {
    return bits_[static_cast<std::size_t>(y) * width_ + x] != 0;
  }
  bool operator[](std::size_t i) const { return bits_[i] != 0; }
  void set(std::size_t i, bool v) { bits_[i] = v ? 1 : 0; }
  void set(int x, int y, bool v) {
    bits_[static_cast<std::size_t>(y) * width_ + x] = v ? 1 : 0;
  }

  std::size_t count() const;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> bits_;
};

/// Channel indices for XYZ and LCh images.
namespace xyz {
inline constexpr int X = 0;
inline constexpr int Y = 1;
inline constexpr int Z = 2;
}  // namespace xyz

namespace lch {
inline constexpr int L = 0;
inline constexpr int C = 1;
inline constexpr int H = 2;
}  // namespace lch

/// Multi-channel planar image. All planes share the same dimensions.
class ImagePlanar {
 public:
  ImagePlanar() = default;
  ImagePlanar(int width, int height, int channels, double fill = 0.0);

  int width() const { return width_; }
  int height() const { return height_; }
  int channels() const { return static_cast<int>(planes_.size()); }
  std::size_t pixel_count() const {
    return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
  }

  Plane& channel(int c) { return planes_[static_cast<std::size_t>(c)]; }
  const Plane& channel(int c) const { return planes_[static_cast<std::size_t>(c)]; }

  /// Replaces a plane; throws std::invalid_argument on a size mismatch.
  void set_channel(int c, Plane p);

  /// True when no plane holds NaN or infinity.
  bool all_finite() const;

  bool operator==(const ImagePlanar&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<Plane> planes_;
};

}  // namespace hdrgm
