#include "grfaug/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "grfaug/color.hpp"
#include "grfaug/grf.hpp"
#include "grfaug/rng.hpp"

namespace grfaug {

namespace {

constexpr std::pair<TransformKind, std::string_view> kKindNames[] = {
    {TransformKind::Rotate, "rotate"},
    {TransformKind::Scale, "scale"},
    {TransformKind::Shear, "shear"},
    {TransformKind::Translate, "translate"},
    {TransformKind::Color, "color"},
};

ScalarField make_field(const ImageBuffer& image, const SampledKind& k, std::size_t i) {
  return synthesize_field({image.width(), image.height(), k.gamma, k.effective_alpha,
                           k.field_seeds.at(i)});
}

SpatialTransform make_spatial(const ImageBuffer& image, const SampledKind& k) {
  switch (k.kind) {
    case TransformKind::Rotate: return LocalRotate{make_field(image, k, 0)};
    case TransformKind::Scale: return LocalScale{make_field(image, k, 0), make_field(image, k, 1)};
    case TransformKind::Shear: return LocalShear{make_field(image, k, 0), make_field(image, k, 1)};
    case TransformKind::Translate:
      return LocalTranslate{make_field(image, k, 0), make_field(image, k, 1)};
    case TransformKind::Color: break;
  }
  throw std::logic_error("color is not a spatial transform");
}

}  // namespace

std::string_view to_string(TransformKind kind) noexcept {
  for (const auto& [k, name] : kKindNames)
    if (k == kind) return name;
  return "unknown";
}

TransformKind parse_transform_kind(std::string_view name) {
  for (const auto& [k, n] : kKindNames)
    if (n == name) return k;
  throw std::invalid_argument("unknown transform kind '" + std::string(name) + "'");
}

int field_count(TransformKind kind) noexcept {
  switch (kind) {
    case TransformKind::Rotate: return 1;
    case TransformKind::Color: return 3;
    default: return 2;
  }
}

bool is_spatial(TransformKind kind) noexcept { return kind != TransformKind::Color; }

void validate(const AugmentConfig& config) {
  auto finite = [](double v) { return std::isfinite(v); };
  if (!finite(config.gamma_range.low) || !finite(config.gamma_range.high) ||
      config.gamma_range.low > config.gamma_range.high || config.gamma_range.low < 0.0) {
    throw std::invalid_argument("gamma_range must be finite with 0 <= low <= high");
  }
  if (!finite(config.alpha_range.low) || !finite(config.alpha_range.high) ||
      config.alpha_range.low > config.alpha_range.high || config.alpha_range.low < 0.0) {
    throw std::invalid_argument("alpha_range must be finite with 0 <= low <= high");
  }
  if (!(config.probability >= 0.0 && config.probability <= 1.0)) {
    throw std::invalid_argument("probability must lie in [0, 1]");
  }
  if (config.transforms.empty()) throw std::invalid_argument("transforms must not be empty");
  auto sorted = config.transforms;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::invalid_argument("transforms must not repeat a kind");
  }
  if (config.composition_size < 1 ||
      static_cast<std::size_t>(config.composition_size) > config.transforms.size()) {
    throw std::invalid_argument("composition_size must lie in [1, number of transforms]");
  }
  if (config.resize_to && (config.resize_to->width < 1 || config.resize_to->height < 1)) {
    throw std::invalid_argument("resize_to dimensions must be positive");
  }
}

std::optional<SampledTransform> sample_transform(const AugmentConfig& config,
                                                 std::uint64_t image_index) {
  validate(config);
  Rng rng(derive_seed(config.seed, image_index));
  if (!rng.bernoulli(config.probability)) return std::nullopt;

  auto pool = config.transforms;
  std::sort(pool.begin(), pool.end());
  const auto n = static_cast<std::size_t>(config.composition_size);
  for (std::size_t i = 0; i < n; ++i) {
    std::swap(pool[i], pool[i + rng.below(pool.size() - i)]);
  }
  pool.resize(n);
  std::sort(pool.begin(), pool.end());
  rng.shuffle(pool.begin(), pool.end());

  SampledTransform t;
  t.kinds.resize(n);
  for (std::size_t i = 0; i < n; ++i) t.kinds[i].kind = pool[i];
  for (auto& k : t.kinds) k.gamma = rng.uniform(config.gamma_range.low, config.gamma_range.high);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (auto& k : t.kinds) {
    k.alpha = rng.uniform(config.alpha_range.low, config.alpha_range.high);
    k.effective_alpha = k.alpha * scale;
  }
  for (auto& k : t.kinds) {
    k.field_seeds.resize(static_cast<std::size_t>(field_count(k.kind)));
    for (auto& s : k.field_seeds) s = rng.next_u64();
  }
  return t;
}

ImageBuffer apply_sampled(const ImageBuffer& image, const SampledTransform& transform,
                          const SamplingPolicy& policy) {
  std::vector<PixelAffineGrid> grids;
  const SampledKind* color = nullptr;
  for (const auto& k : transform.kinds) {
    if (k.field_seeds.size() != static_cast<std::size_t>(field_count(k.kind))) {
      throw std::invalid_argument("transform '" + std::string(to_string(k.kind)) +
                                  "' needs " + std::to_string(field_count(k.kind)) + " field seeds");
    }
    if (is_spatial(k.kind)) {
      grids.push_back(build_pixel_affine(make_spatial(image, k)));
    } else {
      color = &k;
    }
  }
  ImageBuffer out = grids.empty() ? image : apply_pixel_affine(image, compose_grids(grids), policy);
  if (color != nullptr) {
    out = apply_local_color(out, {make_field(out, *color, 0), make_field(out, *color, 1),
                                  make_field(out, *color, 2)});
  }
  return out;
}

ImageBuffer resize_bilinear(const ImageBuffer& image, int width, int height) {
  if (width < 1 || height < 1) throw std::invalid_argument("resize target must be at least 1x1");
  if (image.empty()) throw std::invalid_argument("cannot resize an empty image");
  if (width == image.width() && height == image.height()) return image;

  const double sx = static_cast<double>(image.width()) / width;
  const double sy = static_cast<double>(image.height()) / height;
  const int max_x = image.width() - 1;
  const int max_y = image.height() - 1;

  struct Tap {
    int i0, i1;
    float t;
  };
  auto taps = [](int n, double scale, int max_i) {
    std::vector<Tap> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      const double src = std::clamp((i + 0.5) * scale - 0.5, 0.0, static_cast<double>(max_i));
      const int i0 = static_cast<int>(std::floor(src));
      out[static_cast<std::size_t>(i)] = {i0, std::min(i0 + 1, max_i), static_cast<float>(src - i0)};
    }
    return out;
  };
  const auto xs = taps(width, sx, max_x);
  const auto ys = taps(height, sy, max_y);

  ImageBuffer out(width, height);
  for (int y = 0; y < height; ++y) {
    const Tap& ty = ys[static_cast<std::size_t>(y)];
    for (int x = 0; x < width; ++x) {
      const Tap& tx = xs[static_cast<std::size_t>(x)];
      for (int c = 0; c < 3; ++c) {
        const float top = std::lerp(image.at(tx.i0, ty.i0, c), image.at(tx.i1, ty.i0, c), tx.t);
        const float bottom = std::lerp(image.at(tx.i0, ty.i1, c), image.at(tx.i1, ty.i1, c), tx.t);
        out.at(x, y, c) = std::clamp(std::lerp(top, bottom, ty.t), 0.0f, 1.0f);
      }
    }
  }
  return out;
}

ImageBuffer augment_image(const ImageBuffer& image, const AugmentConfig& config,
                          std::uint64_t image_index) {
  const ImageBuffer resized = config.resize_to
                                  ? resize_bilinear(image, config.resize_to->width, config.resize_to->height)
                                  : image;
  const auto t = sample_transform(config, image_index);
  return t ? apply_sampled(resized, *t, config.sampling) : resized;
}

std::vector<ImageBuffer> augment_batch(std::span<const ImageBuffer> images,
                                       const AugmentConfig& config, unsigned threads) {
  validate(config);
  std::vector<ImageBuffer> out(images.size());
  std::vector<std::exception_ptr> errors(images.size());
  if (images.empty()) return out;

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, images.size()));

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < images.size(); i = next++) {
      try {
        out[i] = augment_image(images[i], config, i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (!errors[i]) continue;
    try {
      std::rethrow_exception(errors[i]);
    } catch (const std::exception& e) {
      throw BatchError(i, e.what());
    } catch (...) {
      throw BatchError(i, "unknown error");
    }
  }
  return out;
}

}  // namespace grfaug
