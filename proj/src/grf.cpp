#include "grfaug/grf.hpp"

#include <fftw3.h>

#include <cmath>
#include <memory>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <string>

#include "grfaug/rng.hpp"

namespace grfaug {

namespace {

// FFTW's planner is not reentrant; execution of distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const noexcept { fftw_free(p); }
};

template <typename T>
std::unique_ptr<T[], FftwFree> fftw_alloc(std::size_t n) {
  auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * n));
  if (p == nullptr) throw std::bad_alloc();
  return std::unique_ptr<T[], FftwFree>(p);
}

class Plan {
 public:
  explicit Plan(fftw_plan p) : plan_(p) {
    if (plan_ == nullptr) throw std::runtime_error("FFTW failed to create a plan");
  }
  ~Plan() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan_);
  }
  Plan(const Plan&) = delete;
  Plan& operator=(const Plan&) = delete;

  void execute() const { fftw_execute(plan_); }

 private:
  fftw_plan plan_;
};

// Signed lattice frequency of FFT bin i on an axis of length n.
int signed_frequency(int i, int n) noexcept { return i <= n / 2 ? i : i - n; }

}  // namespace

ScalarField::ScalarField(FieldSpec spec, std::vector<double> values)
    : spec_(spec), values_(std::move(values)) {
  if (values_.size() != static_cast<std::size_t>(spec_.width) * static_cast<std::size_t>(spec_.height)) {
    throw std::invalid_argument("field value count does not match its dimensions");
  }
}

ScalarField ScalarField::constant(int width, int height, double value) {
  FieldSpec spec{width, height, 0.0, std::abs(value), 0};
  validate(spec);
  return ScalarField(spec, std::vector<double>(static_cast<std::size_t>(width) * height, value));
}

double ScalarField::max_abs() const noexcept {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double ScalarField::sum() const noexcept {
  return std::accumulate(values_.begin(), values_.end(), 0.0);
}

double power_spectrum(double k, double gamma) noexcept {
  if (k <= 0.0) return 0.0;
  return std::pow(k, -gamma);
}

void validate(const FieldSpec& spec) {
  if (spec.width < 1 || spec.height < 1) {
    throw std::invalid_argument("field dimensions must be positive, got " +
                                std::to_string(spec.width) + "x" + std::to_string(spec.height));
  }
  if (!std::isfinite(spec.gamma) || spec.gamma < 0.0) {
    throw std::invalid_argument("field gamma must be finite and >= 0");
  }
  if (!std::isfinite(spec.alpha) || spec.alpha < 0.0) {
    throw std::invalid_argument("field alpha must be finite and >= 0");
  }
}

ScalarField synthesize_field(const FieldSpec& spec) {
  validate(spec);
  const int w = spec.width;
  const int h = spec.height;
  const std::size_t n = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
  std::vector<double> values(n, 0.0);
  if (spec.alpha == 0.0 || n == 1) return ScalarField(spec, std::move(values));

  const int half_w = w / 2 + 1;
  const std::size_t n_modes = static_cast<std::size_t>(h) * static_cast<std::size_t>(half_w);
  auto real = fftw_alloc<double>(n);
  auto modes = fftw_alloc<fftw_complex>(n_modes);

  Rng rng(spec.seed);
  for (std::size_t i = 0; i < n; ++i) real[i] = rng.normal();

  std::unique_ptr<Plan> forward;
  std::unique_ptr<Plan> inverse;
  {
    std::lock_guard lock(planner_mutex());
    forward = std::make_unique<Plan>(
        fftw_plan_dft_r2c_2d(h, w, real.get(), modes.get(), FFTW_ESTIMATE));
    inverse = std::make_unique<Plan>(
        fftw_plan_dft_c2r_2d(h, w, modes.get(), real.get(), FFTW_ESTIMATE));
  }
  // Planning with FFTW_ESTIMATE leaves the arrays untouched.
  forward->execute();

  for (int row = 0; row < h; ++row) {
    const double ky = signed_frequency(row, h);
    for (int col = 0; col < half_w; ++col) {
      const double kx = col;
      const double amp = std::sqrt(power_spectrum(std::hypot(kx, ky), spec.gamma));
      auto& m = modes[static_cast<std::size_t>(row) * half_w + col];
      m[0] *= amp;
      m[1] *= amp;
    }
  }
  inverse->execute();

  double peak = 0.0;
  for (std::size_t i = 0; i < n; ++i) peak = std::max(peak, std::abs(real[i]));
  if (peak == 0.0) return ScalarField(spec, std::move(values));

  // v / peak is exactly +-1 at the extreme, so the bound is attained exactly
  // and never exceeded.
  for (std::size_t i = 0; i < n; ++i) values[i] = (real[i] / peak) * spec.alpha;
  return ScalarField(spec, std::move(values));
}

}  // namespace grfaug
