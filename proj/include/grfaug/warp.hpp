#pragma once

#include <array>
#include <span>
#include <variant>
#include <vector>

#include "grfaug/grf.hpp"
#include "grfaug/image.hpp"

namespace grfaug {

/// 2x3 affine matrix, row-major: {t11, t12, t13, t21, t22, t23}.
using Affine = std::array<double, 6>;

inline constexpr Affine kIdentityAffine{1.0, 0.0, 0.0, 0.0, 1.0, 0.0};

/// Product a * b of the 3x3 homogeneous extensions, truncated to 2x3.
Affine multiply(const Affine& a, const Affine& b) noexcept;

/// One affine matrix per target pixel, row-major over pixels.
class PixelAffineGrid {
 public:
  PixelAffineGrid() = default;
  PixelAffineGrid(int width, int height);  // identity everywhere
  PixelAffineGrid(int width, int height, std::vector<Affine> matrices);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }

  const Affine& at(int x, int y) const noexcept { return matrices_[index(x, y)]; }
  Affine& at(int x, int y) noexcept { return matrices_[index(x, y)]; }
  std::span<const Affine> matrices() const noexcept { return matrices_; }

  bool operator==(const PixelAffineGrid&) const = default;

 private:
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<Affine> matrices_;
};

// Local spatial transforms. Field values are in normalized coordinate units
// (each image axis spans [-1, 1]); rotation angles are pi * g.
struct LocalRotate {
  ScalarField g;
};
struct LocalScale {
  ScalarField gx, gy;
};
struct LocalShear {
  ScalarField gx, gy;
};
struct LocalTranslate {
  ScalarField gx, gy;
};

using SpatialTransform = std::variant<LocalRotate, LocalScale, LocalShear, LocalTranslate>;

enum class Interpolation { Bilinear, Nearest };
enum class Padding { EdgeClamp, ZeroFill };

struct SamplingPolicy {
  Interpolation interpolation = Interpolation::Bilinear;
  Padding padding = Padding::EdgeClamp;

  bool operator==(const SamplingPolicy&) const = default;
};

PixelAffineGrid build_pixel_affine(const SpatialTransform& transform);

/// Per-pixel product grids[0] * grids[1] * ... in list order.
PixelAffineGrid compose_grids(std::span<const PixelAffineGrid> grids);

/// Backward warp. Target pixel (x, y) has normalized coordinates
/// u = (2x + 1) / W - 1, v = (2y + 1) / H - 1; its matrix maps (u, v) to the
/// source location, which is sampled under `policy`.
ImageBuffer apply_pixel_affine(const ImageBuffer& image, const PixelAffineGrid& grid,
                               const SamplingPolicy& policy = {});

}  // namespace grfaug
