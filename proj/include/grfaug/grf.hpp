#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace grfaug {

/// Parameters of one bounded Gaussian random field on a pixel grid.
struct FieldSpec {
  int width = 0;
  int height = 0;
  double gamma = 0.0;  // power-law exponent of the spectrum
  double alpha = 0.0;  // amplitude bound, values lie in [-alpha, alpha]
  std::uint64_t seed = 0;

  bool operator==(const FieldSpec&) const = default;
};

/// Row-major realization of a FieldSpec.
class ScalarField {
 public:
  ScalarField() = default;
  ScalarField(FieldSpec spec, std::vector<double> values);

  static ScalarField constant(int width, int height, double value);

  int width() const noexcept { return spec_.width; }
  int height() const noexcept { return spec_.height; }
  const FieldSpec& spec() const noexcept { return spec_; }

  double at(int x, int y) const noexcept {
    return values_[static_cast<std::size_t>(y) * static_cast<std::size_t>(spec_.width) +
                   static_cast<std::size_t>(x)];
  }
  std::span<const double> values() const noexcept { return values_; }

  double max_abs() const noexcept;
  double sum() const noexcept;

  bool operator==(const ScalarField&) const = default;

 private:
  FieldSpec spec_;
  std::vector<double> values_;
};

/// P(k) = k^-gamma for k > 0, and 0 at the DC mode.
double power_spectrum(double k, double gamma) noexcept;

void validate(const FieldSpec& spec);

/// Spectral synthesis of a zero-mean isotropic field with power-law spectrum.
///
/// Recipe: white noise from Rng(spec.seed), one normal() per pixel in
/// row-major order; forward real FFT; every mode at integer lattice
/// frequency (kx, ky) is multiplied by sqrt(P(sqrt(kx^2 + ky^2))), which
/// zeroes DC; inverse real FFT. The result is rescaled by alpha / max|raw|
/// so that the extreme value reaches the bound exactly. A raw field that is
/// identically zero (1x1 grids, alpha == 0) yields the zero field.
///
/// Pure and thread-safe.
ScalarField synthesize_field(const FieldSpec& spec);

}  // namespace grfaug
