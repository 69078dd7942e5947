#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace grfaug {

/// H x W x 3 image, interleaved RGB, channels in [0, 1].
class ImageBuffer {
 public:
  static constexpr int kChannels = 3;

  ImageBuffer() = default;
  ImageBuffer(int width, int height);
  ImageBuffer(int width, int height, std::vector<float> data);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  bool empty() const noexcept { return data_.empty(); }
  std::size_t pixel_count() const noexcept {
    return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
  }

  float& at(int x, int y, int c) { return data_[index(x, y) + c]; }
  float at(int x, int y, int c) const { return data_[index(x, y) + c]; }

  std::span<float, 3> pixel(int x, int y) { return std::span<float, 3>(&data_[index(x, y)], 3); }
  std::span<const float, 3> pixel(int x, int y) const {
    return std::span<const float, 3>(&data_[index(x, y)], 3);
  }

  std::span<float> data() noexcept { return data_; }
  std::span<const float> data() const noexcept { return data_; }

  bool operator==(const ImageBuffer&) const = default;

 private:
  std::size_t index(int x, int y) const noexcept {
    return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
            static_cast<std::size_t>(x)) * kChannels;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<float> data_;
};

}  // namespace grfaug
