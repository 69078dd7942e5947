#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "grfaug/image.hpp"
#include "grfaug/warp.hpp"

namespace grfaug {

enum class TransformKind { Rotate, Scale, Shear, Translate, Color };

std::string_view to_string(TransformKind kind) noexcept;
TransformKind parse_transform_kind(std::string_view name);

/// Number of independent fields a kind consumes: 1 for Rotate, 3 for Color, 2 otherwise.
int field_count(TransformKind kind) noexcept;
bool is_spatial(TransformKind kind) noexcept;

struct Range {
  double low = 0.0;
  double high = 0.0;
  bool contains(double v) const noexcept { return low <= v && v <= high; }
  bool operator==(const Range&) const = default;
};

struct Size {
  int width = 0;
  int height = 0;
  bool operator==(const Size&) const = default;
};

/// Sampling protocol for one augmentation. Defaults are the best-performing
/// setting of the random field study: gamma in [7, 10], alpha in [0, 1/3],
/// applied with probability 0.8.
struct AugmentConfig {
  Range gamma_range{7.0, 10.0};
  Range alpha_range{0.0, 1.0 / 3.0};
  double probability = 0.8;
  std::vector<TransformKind> transforms{TransformKind::Translate};
  int composition_size = 1;
  SamplingPolicy sampling{};
  std::optional<Size> resize_to;
  std::uint64_t seed = 0;

  bool operator==(const AugmentConfig&) const = default;
};

/// Throws std::invalid_argument describing the first violated constraint.
void validate(const AugmentConfig& config);

struct SampledKind {
  TransformKind kind = TransformKind::Translate;
  double gamma = 0.0;
  double alpha = 0.0;            // as drawn from alpha_range
  double effective_alpha = 0.0;  // alpha / sqrt(N), the bound actually used
  std::vector<std::uint64_t> field_seeds;

  bool operator==(const SampledKind&) const = default;
};

/// Constituents of one (possibly composite) augmentation, in application order.
struct SampledTransform {
  std::vector<SampledKind> kinds;
  bool operator==(const SampledTransform&) const = default;
};

/// Draws the augmentation for one image. Fully determined by
/// (config.seed, image_index); absent when the Bernoulli(probability) draw fails.
///
/// Draw order on the per-image stream Rng(derive_seed(seed, image_index)):
/// Bernoulli, kind subset, order permutation, gammas, alphas, field seeds.
std::optional<SampledTransform> sample_transform(const AugmentConfig& config,
                                                 std::uint64_t image_index);

/// Spatial kinds are composed into one grid and applied in a single warp;
/// a Color kind follows as a separate pass.
ImageBuffer apply_sampled(const ImageBuffer& image, const SampledTransform& transform,
                          const SamplingPolicy& policy = {});

/// Bilinear resampling with pixel-center alignment and edge clamping.
ImageBuffer resize_bilinear(const ImageBuffer& image, int width, int height);

/// Resize (if configured) and augment a single image as item `image_index`.
ImageBuffer augment_image(const ImageBuffer& image, const AugmentConfig& config,
                          std::uint64_t image_index);

class BatchError : public std::runtime_error {
 public:
  BatchError(std::size_t index, const std::string& what)
      : std::runtime_error("image " + std::to_string(index) + ": " + what), index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// Augments images[i] as item i. The result does not depend on `threads`
/// (0 selects the hardware concurrency). On failure throws BatchError for
/// the lowest failing index.
std::vector<ImageBuffer> augment_batch(std::span<const ImageBuffer> images,
                                       const AugmentConfig& config, unsigned threads = 0);

}  // namespace grfaug
