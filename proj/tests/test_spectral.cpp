#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "grfaug/spectral.hpp"

using namespace grfaug;

namespace {

ScalarField from_values(int w, int h, std::vector<double> v) {
  double peak = 0.0;
  for (double x : v) peak = std::max(peak, std::abs(x));
  return ScalarField({w, h, 0.0, peak, 0}, std::move(v));
}

std::vector<ScalarField> ensemble(int n, double gamma, int trials) {
  std::vector<ScalarField> out;
  for (int t = 0; t < trials; ++t) out.push_back(synthesize_field({n, n, gamma, 1.0, static_cast<std::uint64_t>(t)}));
  return out;
}

}  // namespace

TEST_CASE("dft2d agrees with direct summation") {
  for (auto [w, h] : {std::pair{8, 4}, std::pair{6, 5}}) {
    std::vector<double> v(static_cast<std::size_t>(w * h));
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::sin(1.7 * i) + 0.1 * i;
    const auto fast = dft2d(v, w, h);
    for (int ky = 0; ky < h; ++ky) {
      for (int kx = 0; kx < w; ++kx) {
        std::complex<double> acc = 0.0;
        for (int y = 0; y < h; ++y)
          for (int x = 0; x < w; ++x)
            acc += v[y * w + x] * std::polar(1.0, -2 * std::numbers::pi * (double(kx * x) / w + double(ky * y) / h));
        CHECK(std::abs(fast[ky * w + kx] - acc) < 1e-9);
      }
    }
  }
}

TEST_CASE("radial_power_spectrum basics") {
  SUBCASE("zero field has zero power") {
    const auto est = radial_power_spectrum(from_values(16, 16, std::vector<double>(256, 0.0)), 4);
    for (double p : est.power) CHECK(p == 0.0);
    CHECK(est.k_bins.size() == 4);
  }
  SUBCASE("single cosine concentrates in one bin") {
    const int n = 64, k0 = 5;
    std::vector<double> v(n * n);
    for (int y = 0; y < n; ++y)
      for (int x = 0; x < n; ++x) v[y * n + x] = std::cos(2 * std::numbers::pi * k0 * x / n);
    const auto est = radial_power_spectrum(from_values(n, n, v), 32);
    std::size_t peak = 0;
    for (std::size_t i = 0; i < est.power.size(); ++i)
      if (est.power[i] > est.power[peak]) peak = i;
    CHECK(est.k_bins[peak] == doctest::Approx(k0).epsilon(0.1));
    for (std::size_t i = 0; i < est.power.size(); ++i) {
      if (i != peak) CHECK(est.power[i] <= 1e-9 * est.power[peak]);
    }
  }
  SUBCASE("bins are increasing and positive") {
    const auto est = radial_power_spectrum(synthesize_field({40, 32, 3.0, 1.0, 1}), default_bin_count(40, 32));
    CHECK(est.k_bins.size() == 8);
    for (std::size_t i = 0; i < est.k_bins.size(); ++i) {
      CHECK(est.k_bins[i] > 0.0);
      CHECK(est.power[i] >= 0.0);
      if (i > 0) CHECK(est.k_bins[i] > est.k_bins[i - 1]);
    }
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(radial_power_spectrum(from_values(3, 8, std::vector<double>(24, 0.0)), 2), std::invalid_argument);
    CHECK_THROWS_AS(radial_power_spectrum(from_values(8, 8, std::vector<double>(64, 0.0)), 1), std::invalid_argument);
    CHECK_THROWS_AS(radial_power_spectrum(from_values(8, 8, std::vector<double>(64, 0.0)), 5), std::invalid_argument);
  }
}

TEST_CASE("fit_power_law") {
  SpectrumEstimate est;
  for (int k = 1; k <= 20; ++k) {
    est.k_bins.push_back(k);
    est.power.push_back(std::pow(k, -3.0));
  }
  CHECK(fit_power_law(est, {1, 20}) == doctest::Approx(-3.0).epsilon(1e-9));
  CHECK(fit_power_law(est, {2.5, 7.5}) == doctest::Approx(-3.0).epsilon(1e-9));
  CHECK_THROWS_AS(fit_power_law(est, {2.5, 2.9}), std::invalid_argument);
  est.power[4] = 0.0;
  CHECK_THROWS_AS(fit_power_law(est, {1, 20}), std::invalid_argument);
}

TEST_CASE("white noise ensemble is flat") {
  const auto fields = ensemble(128, 0.0, 64);
  const auto est = radial_power_spectrum(fields, default_bin_count(128, 128));
  const double slope = fit_power_law(est, est.fit_range);
  CHECK(slope >= -0.3);
  CHECK(slope <= 0.3);
}

TEST_CASE("gamma 4 ensemble power follows k^-4 within 25 percent") {
  const auto est = radial_power_spectrum(ensemble(256, 4.0, 64), default_bin_count(256, 256));
  const auto range = default_fit_range(est);
  // Amplitude of the reference power law: least squares in log space at slope -4.
  double log_c = 0.0;
  int n = 0;
  for (std::size_t i = 0; i < est.k_bins.size(); ++i) {
    if (est.k_bins[i] < range.k_min || est.k_bins[i] > range.k_max) continue;
    log_c += std::log(est.power[i]) + 4.0 * std::log(est.k_bins[i]);
    ++n;
  }
  const double c = std::exp(log_c / n);
  for (std::size_t i = 0; i < est.k_bins.size(); ++i) {
    if (est.k_bins[i] < range.k_min || est.k_bins[i] > range.k_max) continue;
    CAPTURE(est.k_bins[i]);
    CHECK(std::abs(est.power[i] / (c * std::pow(est.k_bins[i], -4.0)) - 1.0) < 0.25);
  }
}

TEST_CASE("gamma 7 ensemble slope over k in [2, 32]") {
  const auto est = radial_power_spectrum(ensemble(256, 7.0, 64), default_bin_count(256, 256));
  const double slope = fit_power_law(est, {2, 32});
  CHECK(slope >= -7.5);
  CHECK(slope <= -6.5);
}

TEST_CASE("estimator is scale equivariant and shift invariant") {
  const auto f = synthesize_field({32, 32, 3.0, 1.0, 4});
  const auto base = radial_power_spectrum(f, 8);

  std::vector<double> scaled(f.values().begin(), f.values().end());
  for (auto& v : scaled) v *= 2.5;
  const auto est_scaled = radial_power_spectrum(from_values(32, 32, scaled), 8);
  for (std::size_t i = 0; i < base.power.size(); ++i)
    CHECK(est_scaled.power[i] == doctest::Approx(6.25 * base.power[i]).epsilon(1e-9));
  CHECK(fit_power_law(est_scaled, base.fit_range) == doctest::Approx(fit_power_law(base, base.fit_range)).epsilon(1e-9));

  std::vector<double> shifted(32 * 32);
  for (int y = 0; y < 32; ++y)
    for (int x = 0; x < 32; ++x) shifted[((y + 5) % 32) * 32 + (x + 11) % 32] = f.at(x, y);
  const auto est_shifted = radial_power_spectrum(from_values(32, 32, shifted), 8);
  for (std::size_t i = 0; i < base.power.size(); ++i)
    CHECK(est_shifted.power[i] == doctest::Approx(base.power[i]).epsilon(1e-9));
}

TEST_CASE("fitted slope decreases with gamma") {
  double previous = 1.0;
  for (double gamma : {3.0, 5.0, 7.0, 10.0}) {
    const auto est = radial_power_spectrum(ensemble(128, gamma, 16), default_bin_count(128, 128));
    const double slope = fit_power_law(est, est.fit_range);
    CHECK(slope < previous);
    previous = slope;
  }
}
