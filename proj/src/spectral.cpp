#include "grfaug/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace grfaug {

namespace {

using cd = std::complex<double>;

bool is_power_of_two(std::size_t n) noexcept { return n != 0 && (n & (n - 1)) == 0; }

void fft_radix2(std::vector<cd>& a) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double angle = -2.0 * std::numbers::pi / static_cast<double>(len);
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < len / 2; ++k) {
        const cd w = std::polar(1.0, angle * static_cast<double>(k));
        const cd u = a[i + k];
        const cd v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
      }
    }
  }
}

void dft_direct(std::vector<cd>& a) {
  const std::size_t n = a.size();
  std::vector<cd> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    cd acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double angle = -2.0 * std::numbers::pi * static_cast<double>((k * j) % n) / static_cast<double>(n);
      acc += a[j] * std::polar(1.0, angle);
    }
    out[k] = acc;
  }
  a = std::move(out);
}

void transform(std::vector<cd>& a) {
  if (is_power_of_two(a.size())) {
    fft_radix2(a);
  } else {
    dft_direct(a);
  }
}

int signed_frequency(int i, int n) noexcept { return i <= n / 2 ? i : i - n; }

}  // namespace

std::vector<cd> dft2d(std::span<const double> values, int width, int height) {
  const auto w = static_cast<std::size_t>(width);
  const auto h = static_cast<std::size_t>(height);
  if (values.size() != w * h) throw std::invalid_argument("dft2d: value count does not match size");
  std::vector<cd> grid(values.begin(), values.end());
  std::vector<cd> line(w);
  for (std::size_t y = 0; y < h; ++y) {
    std::copy_n(grid.begin() + static_cast<std::ptrdiff_t>(y * w), w, line.begin());
    transform(line);
    std::copy(line.begin(), line.end(), grid.begin() + static_cast<std::ptrdiff_t>(y * w));
  }
  line.resize(h);
  for (std::size_t x = 0; x < w; ++x) {
    for (std::size_t y = 0; y < h; ++y) line[y] = grid[y * w + x];
    transform(line);
    for (std::size_t y = 0; y < h; ++y) grid[y * w + x] = line[y];
  }
  return grid;
}

int default_bin_count(int width, int height) noexcept { return std::max(2, std::min(width, height) / 4); }

SpectrumEstimate radial_power_spectrum(const ScalarField& field, int n_bins) {
  return radial_power_spectrum(std::span<const ScalarField>(&field, 1), n_bins);
}

SpectrumEstimate radial_power_spectrum(std::span<const ScalarField> fields, int n_bins) {
  if (fields.empty()) throw std::invalid_argument("no fields to estimate a spectrum from");
  const int w = fields.front().width();
  const int h = fields.front().height();
  if (w < 4 || h < 4) throw std::invalid_argument("spectrum estimation needs a field of at least 4x4");
  const int annuli = std::min(w, h) / 2;
  if (n_bins < 2 || n_bins > annuli) {
    throw std::invalid_argument("bin count must lie in [2, " + std::to_string(annuli) + "], got " +
                                std::to_string(n_bins));
  }
  for (const auto& f : fields) {
    if (f.width() != w || f.height() != h) throw std::invalid_argument("ensemble fields differ in size");
  }

  const double k_lo = 0.5;
  const double bin_width = static_cast<double>(annuli) / n_bins;
  const auto nb = static_cast<std::size_t>(n_bins);
  std::vector<double> power_sum(nb, 0.0);
  std::vector<double> k_sum(nb, 0.0);
  std::vector<double> count(nb, 0.0);
  const double norm = 1.0 / (static_cast<double>(w) * h);

  for (const auto& f : fields) {
    const auto spectrum = dft2d(f.values(), w, h);
    for (int y = 0; y < h; ++y) {
      const double ky = signed_frequency(y, h);
      for (int x = 0; x < w; ++x) {
        const double k = std::hypot(static_cast<double>(signed_frequency(x, w)), ky);
        if (k < k_lo) continue;
        const auto bin = static_cast<std::size_t>((k - k_lo) / bin_width);
        if (bin >= nb) continue;
        power_sum[bin] += std::norm(spectrum[static_cast<std::size_t>(y) * w + x]) * norm;
        k_sum[bin] += k;
        count[bin] += 1.0;
      }
    }
  }

  SpectrumEstimate est;
  for (std::size_t b = 0; b < nb; ++b) {
    // Annuli at least one unit wide always contain an on-axis lattice point.
    est.k_bins.push_back(k_sum[b] / count[b]);
    est.power.push_back(power_sum[b] / count[b]);
  }
  est.fit_range = default_fit_range(est);
  est.fitted_slope = std::nan("");
  return est;
}

FitRange default_fit_range(const SpectrumEstimate& estimate) {
  if (estimate.k_bins.size() < 2) throw std::invalid_argument("spectrum has fewer than 2 bins");
  return {estimate.k_bins[1], 0.8 * estimate.k_bins.back()};
}

double fit_power_law(const SpectrumEstimate& estimate, FitRange range) {
  if (estimate.k_bins.size() != estimate.power.size()) {
    throw std::invalid_argument("spectrum bins and powers differ in length");
  }
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < estimate.k_bins.size(); ++i) {
    const double k = estimate.k_bins[i];
    if (k < range.k_min || k > range.k_max) continue;
    if (!(estimate.power[i] > 0.0)) {
      throw std::invalid_argument("zero power at k = " + std::to_string(k) + " inside the fit range");
    }
    const double lx = std::log(k);
    const double ly = std::log(estimate.power[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n < 2) throw std::invalid_argument("fewer than 2 spectrum bins inside the fit range");
  const double dn = static_cast<double>(n);
  const double denom = dn * sxx - sx * sx;
  if (denom <= 0.0) throw std::invalid_argument("fit range bins share a single k");
  return (dn * sxy - sx * sy) / denom;
}

}  // namespace grfaug
