#pragma once

#include <array>

#include "grfaug/grf.hpp"
#include "grfaug/image.hpp"

namespace grfaug {

using Rgb = std::array<double, 3>;
using Hsv = std::array<double, 3>;  // hue in [0, 1), saturation and value in [0, 1]

Hsv rgb_to_hsv(const Rgb& rgb) noexcept;
Rgb hsv_to_rgb(const Hsv& hsv) noexcept;  // hue is taken modulo 1

/// Independent additive fields for the hue, saturation and value channels.
struct ColorFieldTriple {
  ScalarField hue;
  ScalarField saturation;
  ScalarField value;
};

/// Per-pixel h' = (h + g_h) mod 1, s' = clamp(s + g_s), v' = clamp(v + g_v).
/// Pixels where all three fields are zero are copied unchanged.
ImageBuffer apply_local_color(const ImageBuffer& image, const ColorFieldTriple& fields);

/// The channel update applied by apply_local_color, exposed for testing.
Hsv shift_hsv(const Hsv& hsv, double dh, double ds, double dv) noexcept;

}  // namespace grfaug
