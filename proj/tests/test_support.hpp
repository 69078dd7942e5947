#pragma once

#include <filesystem>
#include <random>
#include <string>

#include "grfaug/image.hpp"
#include "grfaug/rng.hpp"

namespace grfaug::testing {

inline ImageBuffer random_image(int width, int height, std::uint64_t seed) {
  Rng rng(seed);
  ImageBuffer img(width, height);
  for (auto& v : img.data()) v = static_cast<float>(rng.uniform());
  return img;
}

// Each pixel holds a distinct label so permutations can be checked exactly.
inline ImageBuffer labeled_image(int width, int height) {
  ImageBuffer img(width, height);
  const float n = static_cast<float>(width * height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const float label = static_cast<float>(y * width + x);
      img.at(x, y, 0) = label / n;
      img.at(x, y, 1) = static_cast<float>(x) / width;
      img.at(x, y, 2) = static_cast<float>(y) / height;
    }
  }
  return img;
}

inline ImageBuffer constant_image(int width, int height, float r, float g, float b) {
  ImageBuffer img(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      img.at(x, y, 0) = r;
      img.at(x, y, 1) = g;
      img.at(x, y, 2) = b;
    }
  }
  return img;
}

class TempDir {
 public:
  explicit TempDir(const std::string& name) {
    path_ = std::filesystem::temp_directory_path() /
            ("grfaug_" + name + "_" + std::to_string(std::random_device{}()));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace grfaug::testing
