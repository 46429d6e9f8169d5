#include "hdrgm/image.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hdrgm {

Plane::Plane(int width, int height, double fill)
    : width_(width), height_(height) {
  if (width < 0 || height < 0) throw std::invalid_argument("negative plane size");
  data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
}

double Plane::max_value() const {
  return data_.empty() ? 0.0 : *std::max_element(data_.begin(), data_.end());
}

double Plane::min_value() const {
  return data_.empty() ? 0.0 : *std::min_element(data_.begin(), data_.end());
}

Mask::Mask(int width, int height, bool fill) : width_(width), height_(height) {
  bits_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height),
               fill ? 1 : 0);
}

std::size_t Mask::count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), 1));
}

ImagePlanar::ImagePlanar(int width, int height, int channels, double fill)
    : width_(width), height_(height) {
  planes_.assign(static_cast<std::size_t>(channels), Plane(width, height, fill));
}

void ImagePlanar::set_channel(int c, Plane p) {
  if (p.width() != width_ || p.height() != height_)
    throw std::invalid_argument("plane size does not match image");
  planes_.at(static_cast<std::size_t>(c)) = std::move(p);
}

bool ImagePlanar::all_finite() const {
  for (const auto& p : planes_)
    for (double v : p.values())
      if (!std::isfinite(v)) return false;
  return true;
}

}  // namespace hdrgm
