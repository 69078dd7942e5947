#include "grfaug/color.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace grfaug {

namespace {

double wrap_unit(double h) noexcept {
  double r = h - std::floor(h);
  // h slightly below an integer can round up to exactly 1.
  return r >= 1.0 ? 0.0 : r;
}

void require_size(const ScalarField& f, const ImageBuffer& image) {
  if (f.width() != image.width() || f.height() != image.height()) {
    throw std::invalid_argument("color field size does not match image size");
  }
}

}  // namespace

Hsv rgb_to_hsv(const Rgb& rgb) noexcept {
  const auto [r, g, b] = rgb;
  const double max = std::max({r, g, b});
  const double min = std::min({r, g, b});
  const double delta = max - min;
  if (delta <= 0.0) return {0.0, 0.0, max};
  const double s = max > 0.0 ? delta / max : 0.0;
  double h;
  if (max == r) {
    h = (g - b) / delta;
    if (h < 0.0) h += 6.0;
  } else if (max == g) {
    h = (b - r) / delta + 2.0;
  } else {
    h = (r - g) / delta + 4.0;
  }
  return {wrap_unit(h / 6.0), s, max};
}

Rgb hsv_to_rgb(const Hsv& hsv) noexcept {
  const double h6 = wrap_unit(hsv[0]) * 6.0;
  const double s = hsv[1];
  const double v = hsv[2];
  const double sector = std::floor(h6);
  const double f = h6 - sector;
  const double p = v * (1.0 - s);
  const double q = v * (1.0 - s * f);
  const double t = v * (1.0 - s * (1.0 - f));
  switch (static_cast<int>(sector)) {
    case 0: return {v, t, p};
    case 1: return {q, v, p};
    case 2: return {p, v, t};
    case 3: return {p, q, v};
    case 4: return {t, p, v};
    default: return {v, p, q};
  }
}

Hsv shift_hsv(const Hsv& hsv, double dh, double ds, double dv) noexcept {
  return {wrap_unit(hsv[0] + dh), std::clamp(hsv[1] + ds, 0.0, 1.0),
          std::clamp(hsv[2] + dv, 0.0, 1.0)};
}

ImageBuffer apply_local_color(const ImageBuffer& image, const ColorFieldTriple& fields) {
  require_size(fields.hue, image);
  require_size(fields.saturation, image);
  require_size(fields.value, image);
  ImageBuffer out = image;
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      const double dh = fields.hue.at(x, y);
      const double ds = fields.saturation.at(x, y);
      const double dv = fields.value.at(x, y);
      if (dh == 0.0 && ds == 0.0 && dv == 0.0) continue;
      auto px = out.pixel(x, y);
      const Hsv shifted = shift_hsv(rgb_to_hsv({px[0], px[1], px[2]}), dh, ds, dv);
      const Rgb rgb = hsv_to_rgb(shifted);
      for (int c = 0; c < 3; ++c) px[c] = static_cast<float>(std::clamp(rgb[c], 0.0, 1.0));
    }
  }
  return out;
}

}  // namespace grfaug
