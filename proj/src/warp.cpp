#include "grfaug/warp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace grfaug {

namespace {

void require_same_size(const ScalarField& a, const ScalarField& b) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw std::invalid_argument("transform fields differ in size: " + std::to_string(a.width()) +
                                "x" + std::to_string(a.height()) + " vs " +
                                std::to_string(b.width()) + "x" + std::to_string(b.height()));
  }
}

template <typename MatrixAt>
PixelAffineGrid fill_grid(int width, int height, MatrixAt&& matrix_at) {
  std::vector<Affine> matrices;
  matrices.reserve(static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) matrices.push_back(matrix_at(x, y));
  return PixelAffineGrid(width, height, std::move(matrices));
}

// Backward-mapped coordinates land a rounding error away from pixel centers
// even for identity matrices; snapping keeps such samples exact.
constexpr double kSnap = 1e-7;

double snap(double p) noexcept {
  const double r = std::round(p);
  return std::abs(p - r) < kSnap ? r : p;
}

// Normalized coordinate of pixel center i on an axis of n pixels, and back.
double to_normalized(int i, int n) noexcept {
  return static_cast<double>(2 * i + 1 - n) / static_cast<double>(n);
}
double to_pixel(double u, int n) noexcept { return ((u + 1.0) * n - 1.0) / 2.0; }

class Sampler {
 public:
  Sampler(const ImageBuffer& image, Padding padding) : image_(image), padding_(padding) {}

  // Channel value at integer pixel (x, y), applying the padding rule.
  float texel(int x, int y, int c) const noexcept {
    if (padding_ == Padding::EdgeClamp) {
      return image_.at(std::clamp(x, 0, image_.width() - 1), std::clamp(y, 0, image_.height() - 1), c);
    }
    if (x < 0 || y < 0 || x >= image_.width() || y >= image_.height()) return 0.0f;
    return image_.at(x, y, c);
  }

  void nearest(double px, double py, std::span<float, 3> out) const noexcept {
    const int x = static_cast<int>(std::floor(px + 0.5));
    const int y = static_cast<int>(std::floor(py + 0.5));
    for (int c = 0; c < 3; ++c) out[c] = texel(x, y, c);
  }

  void bilinear(double px, double py, std::span<float, 3> out) const noexcept {
    const double fx0 = std::floor(px);
    const double fy0 = std::floor(py);
    const int x0 = static_cast<int>(fx0);
    const int y0 = static_cast<int>(fy0);
    const float tx = static_cast<float>(px - fx0);
    const float ty = static_cast<float>(py - fy0);
    for (int c = 0; c < 3; ++c) {
      const float top = std::lerp(texel(x0, y0, c), texel(x0 + 1, y0, c), tx);
      const float bottom = std::lerp(texel(x0, y0 + 1, c), texel(x0 + 1, y0 + 1, c), tx);
      out[c] = std::clamp(std::lerp(top, bottom, ty), 0.0f, 1.0f);
    }
  }

 private:
  const ImageBuffer& image_;
  Padding padding_;
};

}  // namespace

Affine multiply(const Affine& a, const Affine& b) noexcept {
  return {
      a[0] * b[0] + a[1] * b[3],
      a[0] * b[1] + a[1] * b[4],
      a[0] * b[2] + a[1] * b[5] + a[2],
      a[3] * b[0] + a[4] * b[3],
      a[3] * b[1] + a[4] * b[4],
      a[3] * b[2] + a[4] * b[5] + a[5],
  };
}

PixelAffineGrid::PixelAffineGrid(int width, int height)
    : PixelAffineGrid(width, height,
                      std::vector<Affine>(static_cast<std::size_t>(std::max(width, 0)) *
                                              static_cast<std::size_t>(std::max(height, 0)),
                                          kIdentityAffine)) {}

PixelAffineGrid::PixelAffineGrid(int width, int height, std::vector<Affine> matrices)
    : width_(width), height_(height), matrices_(std::move(matrices)) {
  if (width < 1 || height < 1) throw std::invalid_argument("affine grid dimensions must be positive");
  if (matrices_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw std::invalid_argument("affine grid matrix count does not match its dimensions");
  }
  for (const auto& m : matrices_) {
    for (double v : m) {
      if (!std::isfinite(v)) throw std::invalid_argument("affine grid contains a non-finite entry");
    }
  }
}

PixelAffineGrid build_pixel_affine(const SpatialTransform& transform) {
  return std::visit(
      [](const auto& t) -> PixelAffineGrid {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, LocalRotate>) {
          return fill_grid(t.g.width(), t.g.height(), [&](int x, int y) {
            const double angle = std::numbers::pi * t.g.at(x, y);
            const double c = std::cos(angle);
            const double s = std::sin(angle);
            return Affine{c, -s, 0.0, s, c, 0.0};
          });
        } else {
          require_same_size(t.gx, t.gy);
          return fill_grid(t.gx.width(), t.gx.height(), [&](int x, int y) {
            const double gx = t.gx.at(x, y);
            const double gy = t.gy.at(x, y);
            if constexpr (std::is_same_v<T, LocalScale>) {
              return Affine{1.0 + gx, 0.0, 0.0, 0.0, 1.0 + gy, 0.0};
            } else if constexpr (std::is_same_v<T, LocalShear>) {
              return Affine{1.0, gx, 0.0, gy, 1.0, 0.0};
            } else {
              return Affine{1.0, 0.0, gx, 0.0, 1.0, gy};
            }
          });
        }
      },
      transform);
}

PixelAffineGrid compose_grids(std::span<const PixelAffineGrid> grids) {
  if (grids.empty()) throw std::invalid_argument("cannot compose an empty list of grids");
  const int w = grids.front().width();
  const int h = grids.front().height();
  for (const auto& g : grids) {
    if (g.width() != w || g.height() != h) {
      throw std::invalid_argument("cannot compose grids of different sizes");
    }
  }
  PixelAffineGrid result = grids.front();
  for (std::size_t i = 1; i < grids.size(); ++i) {
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) result.at(x, y) = multiply(result.at(x, y), grids[i].at(x, y));
  }
  return result;
}

ImageBuffer apply_pixel_affine(const ImageBuffer& image, const PixelAffineGrid& grid,
                               const SamplingPolicy& policy) {
  const int w = image.width();
  const int h = image.height();
  if (grid.width() != w || grid.height() != h) {
    throw std::invalid_argument("affine grid " + std::to_string(grid.width()) + "x" +
                                std::to_string(grid.height()) + " does not match image " +
                                std::to_string(w) + "x" + std::to_string(h));
  }
  ImageBuffer out(w, h);
  const Sampler sampler(image, policy.padding);
  for (int y = 0; y < h; ++y) {
    const double v = to_normalized(y, h);
    for (int x = 0; x < w; ++x) {
      const double u = to_normalized(x, w);
      const Affine& m = grid.at(x, y);
      if (!std::all_of(m.begin(), m.end(), [](double e) { return std::isfinite(e); })) {
        throw std::invalid_argument("non-finite affine entry at pixel (" + std::to_string(x) + ", " +
                                    std::to_string(y) + ")");
      }
      // One pixel beyond the border already samples pure padding, so larger
      // excursions can be clamped without changing the result.
      const double px = std::clamp(snap(to_pixel(m[0] * u + m[1] * v + m[2], w)), -2.0, w + 1.0);
      const double py = std::clamp(snap(to_pixel(m[3] * u + m[4] * v + m[5], h)), -2.0, h + 1.0);
      if (policy.interpolation == Interpolation::Nearest) {
        sampler.nearest(px, py, out.pixel(x, y));
      } else {
        sampler.bilinear(px, py, out.pixel(x, y));
      }
    }
  }
  return out;
}

}  // namespace grfaug
