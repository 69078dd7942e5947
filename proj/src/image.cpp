#include "grfaug/image.hpp"

#include <stdexcept>
#include <string>

namespace grfaug {

ImageBuffer::ImageBuffer(int width, int height) : width_(width), height_(height) {
  if (width < 1 || height < 1) {
    throw std::invalid_argument("image dimensions must be positive, got " +
                                std::to_string(width) + "x" + std::to_string(height));
  }
  data_.assign(pixel_count() * kChannels, 0.0f);
}

ImageBuffer::ImageBuffer(int width, int height, std::vector<float> data)
    : ImageBuffer(width, height) {
  if (data.size() != data_.size()) {
    throw std::invalid_argument("image data has " + std::to_string(data.size()) +
                                " values, expected " + std::to_string(data_.size()));
  }
  data_ = std::move(data);
}

}  // namespace grfaug
