#pragma once

#include <complex>
#include <span>
#include <vector>

#include "grfaug/grf.hpp"

namespace grfaug {

struct FitRange {
  double k_min = 0.0;
  double k_max = 0.0;
};

/// Radially averaged periodogram: power[i] is the mean of |F(k)|^2 / (W H)
/// over lattice modes in annulus i, and k_bins[i] the mean |k| of those modes.
struct SpectrumEstimate {
  std::vector<double> k_bins;
  std::vector<double> power;
  double fitted_slope = 0.0;
  FitRange fit_range{};
};

/// Row-major 2-D DFT, unnormalized forward transform. Radix-2 for power-of-two
/// axes, direct summation otherwise. Kept separate from the synthesis FFT so
/// the estimator can serve as an independent check of it.
std::vector<std::complex<double>> dft2d(std::span<const double> values, int width, int height);

/// Annuli are linear in |k| from 0.5 to min(W, H) / 2 + 0.5, so the DC mode is
/// excluded and each annulus is at least one lattice unit wide.
SpectrumEstimate radial_power_spectrum(const ScalarField& field, int n_bins);

/// Ensemble average over fields of identical size.
SpectrumEstimate radial_power_spectrum(std::span<const ScalarField> fields, int n_bins);

/// min(W, H) / 4, but at least 2.
int default_bin_count(int width, int height) noexcept;

/// Drops the lowest annulus and the top 20% of k.
FitRange default_fit_range(const SpectrumEstimate& estimate);

/// Least-squares slope of log(power) against log(k) over bins inside `range`.
double fit_power_law(const SpectrumEstimate& estimate, FitRange range);

}  // namespace grfaug
