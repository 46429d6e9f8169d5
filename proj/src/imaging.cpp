#include "hdrgm/imaging.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace hdrgm {

namespace {

void check_sigmas(double sigma_s, double sigma_r) {
  if (!(sigma_s > 0.0) || !(sigma_r > 0.0))
    throw std::invalid_argument("bilateral sigmas must be positive");
}

std::vector<double> gaussian_taps(double sigma, int radius) {
  std::vector<double> taps(static_cast<std::size_t>(2 * radius + 1));
  for (int d = -radius; d <= radius; ++d)
    taps[static_cast<std::size_t>(d + radius)] = std::exp(-0.5 * d * d / (sigma * sigma));
  return taps;
}

// Grid cells per sigma in each dimension.
constexpr double kGridOversample = 4.0;
constexpr int kMaxRangeCells = 1024;

struct Grid {
  int nx = 0, ny = 0, nz = 0;
  std::vector<double> num, den;

  std::size_t index(int x, int y, int z) const {
    return (static_cast<std::size_t>(z) * ny + static_cast<std::size_t>(y)) * nx +
           static_cast<std::size_t>(x);
  }
};

// Convolves num and den along one axis with a truncated Gaussian; cells
// beyond the grid contribute nothing.
void blur_axis(Grid& g, int axis, const std::vector<double>& taps) {
  const int radius = static_cast<int>(taps.size() / 2);
  const int n[3] = {g.nx, g.ny, g.nz};
  const std::size_t stride[3] = {1, static_cast<std::size_t>(g.nx),
                                 static_cast<std::size_t>(g.nx) * g.ny};
  const int len = n[axis];
  std::vector<double> out_num(g.num.size()), out_den(g.den.size());
  for (int z = 0; z < g.nz; ++z) {
    for (int y = 0; y < g.ny; ++y) {
      for (int x = 0; x < g.nx; ++x) {
        const int pos[3] = {x, y, z};
        const std::size_t base = g.index(x, y, z);
        const int p = pos[axis];
        double sn = 0.0, sd = 0.0;
        const int lo = std::max(-radius, -p);
        const int hi = std::min(radius, len - 1 - p);
        for (int d = lo; d <= hi; ++d) {
          const std::size_t k = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(base) +
                                                         d * static_cast<std::ptrdiff_t>(stride[axis]));
          const double t = taps[static_cast<std::size_t>(d + radius)];
          sn += t * g.num[k];
          sd += t * g.den[k];
        }
        out_num[base] = sn;
        out_den[base] = sd;
      }
    }
  }
  g.num.swap(out_num);
  g.den.swap(out_den);
}

}  // namespace

Plane bilateral_filter(const Plane& plane, double sigma_s, double sigma_r) {
  const double radius = std::min<double>(std::floor(2.0 * sigma_s),
                                         std::max(plane.width(), plane.height()));
  const double taps = (2.0 * radius + 1.0) * (2.0 * radius + 1.0) * static_cast<double>(plane.size());
  if (taps > kDirectTapBudget) return bilateral_filter_grid(plane, sigma_s, sigma_r);
  return bilateral_filter_direct(plane, sigma_s, sigma_r);
}

Plane bilateral_filter_direct(const Plane& plane, double sigma_s, double sigma_r) {
  check_sigmas(sigma_s, sigma_r);
  const int w = plane.width();
  const int h = plane.height();
  const int radius = static_cast<int>(std::min<double>(std::floor(2.0 * sigma_s),
                                                       std::max(w, h)));
  const std::vector<double> spatial = gaussian_taps(sigma_s, radius);
  const double range_scale = -0.5 / (sigma_r * sigma_r);
  Plane out(w, h);

#pragma omp parallel for schedule(dynamic, 4)
  for (int y = 0; y < h; ++y) {
    const int y0 = std::max(0, y - radius);
    const int y1 = std::min(h - 1, y + radius);
    for (int x = 0; x < w; ++x) {
      const int x0 = std::max(0, x - radius);
      const int x1 = std::min(w - 1, x + radius);
      const double center = plane(x, y);
      double sum = 0.0;
      double norm = 0.0;
      for (int j = y0; j <= y1; ++j) {
        const double wy = spatial[static_cast<std::size_t>(j - y + radius)];
        for (int i = x0; i <= x1; ++i) {
          const double v = plane(i, j);
          const double d = v - center;
          const double wgt = wy * spatial[static_cast<std::size_t>(i - x + radius)] *
                             std::exp(range_scale * d * d);
          sum += wgt * d;
          norm += wgt;
        }
      }
      // Offsets from the center keep flat neighborhoods exact.
      out(x, y) = center + sum / norm;
    }
  }
  return out;
}

Plane bilateral_filter_grid(const Plane& plane, double sigma_s, double sigma_r) {
  check_sigmas(sigma_s, sigma_r);
  const int w = plane.width();
  const int h = plane.height();
  if (plane.empty()) return plane;

  const double vmin = plane.min_value();
  const double vmax = plane.max_value();
  const double cell_s = sigma_s / kGridOversample;
  double cell_r = sigma_r / kGridOversample;
  if ((vmax - vmin) / cell_r > kMaxRangeCells) cell_r = (vmax - vmin) / kMaxRangeCells;
  const double range_sigma_cells = sigma_r / cell_r;

  Grid g;
  g.nx = static_cast<int>(std::floor((w - 1) / cell_s)) + 2;
  g.ny = static_cast<int>(std::floor((h - 1) / cell_s)) + 2;
  g.nz = static_cast<int>(std::floor((vmax - vmin) / cell_r)) + 2;
  const std::size_t cells = static_cast<std::size_t>(g.nx) * g.ny * g.nz;
  g.num.assign(cells, 0.0);
  g.den.assign(cells, 0.0);

  struct Coord {
    int i[3];
    double t[3];
  };
  auto locate = [&](int x, int y, double v) {
    const double f[3] = {x / cell_s, y / cell_s, (v - vmin) / cell_r};
    Coord c{};
    for (int a = 0; a < 3; ++a) {
      c.i[a] = static_cast<int>(std::floor(f[a]));
      c.t[a] = f[a] - c.i[a];
    }
    return c;
  };

  // Splat with trilinear weights. Serial so the accumulation order is fixed.
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double v = plane(x, y);
      const Coord c = locate(x, y, v);
      for (int corner = 0; corner < 8; ++corner) {
        double wgt = 1.0;
        int p[3];
        for (int a = 0; a < 3; ++a) {
          const int bit = (corner >> a) & 1;
          p[a] = c.i[a] + bit;
          wgt *= bit ? c.t[a] : 1.0 - c.t[a];
        }
        const std::size_t k = g.index(p[0], p[1], p[2]);
        g.num[k] += wgt * v;
        g.den[k] += wgt;
      }
    }
  }

  const auto spatial_taps =
      gaussian_taps(kGridOversample, static_cast<int>(std::floor(2.0 * kGridOversample)));
  const auto range_taps =
      gaussian_taps(range_sigma_cells, static_cast<int>(std::ceil(4.0 * range_sigma_cells)));
  blur_axis(g, 0, spatial_taps);
  blur_axis(g, 1, spatial_taps);
  blur_axis(g, 2, range_taps);

  Plane out(w, h);
#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double v = plane(x, y);
      const Coord c = locate(x, y, v);
      double sn = 0.0, sd = 0.0;
      for (int corner = 0; corner < 8; ++corner) {
        double wgt = 1.0;
        int p[3];
        for (int a = 0; a < 3; ++a) {
          const int bit = (corner >> a) & 1;
          p[a] = c.i[a] + bit;
          wgt *= bit ? c.t[a] : 1.0 - c.t[a];
        }
        const std::size_t k = g.index(p[0], p[1], p[2]);
        sn += wgt * g.num[k];
        sd += wgt * g.den[k];
      }
      out(x, y) = sd > 0.0 ? sn / sd : v;
    }
  }
  return out;
}

Plane BaseDetail::recombine() const {
  Plane out(base.width(), base.height());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = base[i] * detail[i];
  return out;
}

BilateralSigmas default_sigmas(const Plane& plane) {
  return {0.2 * std::max(plane.width(), plane.height()), 0.05 * plane.max_value()};
}

BaseDetail decompose_divide(const Plane& plane) {
  return decompose_divide(plane, default_sigmas(plane));
}

BaseDetail decompose_divide(const Plane& plane, BilateralSigmas sigmas) {
  BaseDetail bd;
  // A plane with no positive values has nothing to smooth.
  if (plane.empty() || !(sigmas.range > 0.0) || !(sigmas.spatial > 0.0))
    bd.base = plane;
  else
    bd.base = bilateral_filter(plane, sigmas.spatial, sigmas.range);
  bd.detail = Plane(plane.width(), plane.height(), 1.0);
  for (std::size_t i = 0; i < plane.size(); ++i)
    if (bd.base[i] >= kBaseEpsilon) bd.detail[i] = plane[i] / bd.base[i];
  return bd;
}

RegionCount connected_regions(const Mask& mask) {
  const int w = mask.width();
  const int h = mask.height();
  RegionCount rc;
  std::vector<std::uint8_t> seen(mask.size(), 0);
  std::vector<std::size_t> stack;
  for (std::size_t start = 0; start < mask.size(); ++start) {
    if (!mask[start] || seen[start]) continue;
    ++rc.regions;
    seen[start] = 1;
    stack.push_back(start);
    while (!stack.empty()) {
      const std::size_t k = stack.back();
      stack.pop_back();
      ++rc.pixels;
      const int x = static_cast<int>(k % static_cast<std::size_t>(w));
      const int y = static_cast<int>(k / static_cast<std::size_t>(w));
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          const int nx = x + dx;
          const int ny = y + dy;
          if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
          const std::size_t n = static_cast<std::size_t>(ny) * w + nx;
          if (mask[n] && !seen[n]) {
            seen[n] = 1;
            stack.push_back(n);
          }
        }
      }
    }
  }
  return rc;
}

double percentile(std::span<const double> values, double p) {
  if (values.empty()) throw std::invalid_argument("percentile of empty input");
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("percentile outside (0,1]");
  const std::size_t n = values.size();
  // Guard against p * n landing a hair above an integer (0.99 * 100).
  auto rank = static_cast<std::size_t>(std::ceil(p * static_cast<double>(n) - 1e-9));
  rank = std::clamp<std::size_t>(rank, 1, n);
  std::vector<double> v(values.begin(), values.end());
  auto nth = v.begin() + static_cast<std::ptrdiff_t>(rank - 1);
  std::nth_element(v.begin(), nth, v.end());
  return *nth;
}

}  // namespace hdrgm
