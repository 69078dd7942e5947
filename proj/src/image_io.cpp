#include "grfaug/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

namespace grfaug {

namespace {

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_bytes(const std::filesystem::path& path, const void* data, std::size_t size) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
  if (!out) throw IoError("failed writing " + path.string());
}

ImageBuffer decode_png(const std::vector<std::uint8_t>& bytes, const std::string& name) {
  png_image img;
  std::memset(&img, 0, sizeof(img));
  img.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&img, bytes.data(), bytes.size())) {
    throw IoError("cannot decode PNG " + name + ": " + img.message);
  }
  img.format = PNG_FORMAT_RGBA;
  std::vector<std::uint8_t> rgba(PNG_IMAGE_SIZE(img));
  if (!png_image_finish_read(&img, nullptr, rgba.data(), 0, nullptr)) {
    png_image_free(&img);
    throw IoError("cannot decode PNG " + name + ": " + img.message);
  }
  const int w = static_cast<int>(img.width);
  const int h = static_cast<int>(img.height);
  std::vector<float> data(static_cast<std::size_t>(w) * h * 3);
  for (std::size_t i = 0, n = static_cast<std::size_t>(w) * h; i < n; ++i) {
    for (std::size_t c = 0; c < 3; ++c) data[i * 3 + c] = rgba[i * 4 + c] / 255.0f;
  }
  return ImageBuffer(w, h, std::move(data));
}

class PpmReader {
 public:
  PpmReader(const std::vector<std::uint8_t>& bytes, std::string name)
      : bytes_(bytes), name_(std::move(name)) {}

  ImageBuffer read() {
    if (bytes_.size() < 2 || bytes_[0] != 'P' || (bytes_[1] != '6' && bytes_[1] != '3')) {
      fail("not a P3/P6 PPM");
    }
    const bool binary = bytes_[1] == '6';
    pos_ = 2;
    const long w = number();
    const long h = number();
    const long maxval = number();
    if (w < 1 || h < 1 || maxval < 1 || maxval > 65535) fail("bad header");
    const auto n = static_cast<std::size_t>(w) * static_cast<std::size_t>(h) * 3;
    std::vector<float> data(n);
    const auto max = static_cast<float>(maxval);
    if (binary) {
      ++pos_;  // single whitespace after maxval
      const std::size_t bpc = maxval > 255 ? 2 : 1;
      if (bytes_.size() < pos_ + n * bpc) fail("truncated pixel data");
      for (std::size_t i = 0; i < n; ++i) {
        unsigned v = bytes_[pos_ + i * bpc];
        if (bpc == 2) v = (v << 8) | bytes_[pos_ + i * bpc + 1];
        data[i] = std::min(1.0f, static_cast<float>(v) / max);
      }
    } else {
      for (auto& v : data) v = std::min(1.0f, static_cast<float>(number()) / max);
    }
    return ImageBuffer(static_cast<int>(w), static_cast<int>(h), std::move(data));
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw IoError("cannot decode PPM " + name_ + ": " + why);
  }

  long number() {
    while (pos_ < bytes_.size()) {
      if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else {
        break;
      }
    }
    if (pos_ >= bytes_.size() || !std::isdigit(bytes_[pos_])) fail("expected a number");
    long v = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      v = v * 10 + (bytes_[pos_++] - '0');
      if (v > (1L << 30)) fail("number out of range");
    }
    return v;
  }

  const std::vector<std::uint8_t>& bytes_;
  std::string name_;
  std::size_t pos_ = 0;
};

std::vector<std::uint8_t> encode(const std::uint8_t* pixels, int w, int h, png_uint_32 format) {
  png_image img;
  std::memset(&img, 0, sizeof(img));
  img.version = PNG_IMAGE_VERSION;
  img.width = static_cast<png_uint_32>(w);
  img.height = static_cast<png_uint_32>(h);
  img.format = format;
  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&img, nullptr, &size, 0, pixels, 0, nullptr)) {
    throw IoError(std::string("PNG encoding failed: ") + img.message);
  }
  std::vector<std::uint8_t> out(size);
  if (!png_image_write_to_memory(&img, out.data(), &size, 0, pixels, 0, nullptr)) {
    throw IoError(std::string("PNG encoding failed: ") + img.message);
  }
  out.resize(size);
  return out;
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | static_cast<std::uint32_t>(p[1]) << 8 |
         static_cast<std::uint32_t>(p[2]) << 16 | static_cast<std::uint32_t>(p[3]) << 24;
}

}  // namespace

std::uint8_t to_byte(float v) noexcept {
  return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0f, 1.0f) * 255.0f));
}

ImageBuffer read_image(const std::filesystem::path& path) {
  const auto bytes = read_bytes(path);
  static constexpr std::array<std::uint8_t, 4> kPngMagic{0x89, 'P', 'N', 'G'};
  if (bytes.size() >= 4 && std::equal(kPngMagic.begin(), kPngMagic.end(), bytes.begin())) {
    return decode_png(bytes, path.string());
  }
  return PpmReader(bytes, path.string()).read();
}

std::vector<std::uint8_t> encode_png(const ImageBuffer& image) {
  std::vector<std::uint8_t> pixels(image.data().size());
  std::transform(image.data().begin(), image.data().end(), pixels.begin(), to_byte);
  return encode(pixels.data(), image.width(), image.height(), PNG_FORMAT_RGB);
}

void write_png(const std::filesystem::path& path, const ImageBuffer& image) {
  const auto bytes = encode_png(image);
  write_bytes(path, bytes.data(), bytes.size());
}

void write_field_png(const std::filesystem::path& path, const ScalarField& field) {
  const double alpha = field.spec().alpha;
  std::vector<std::uint8_t> pixels;
  pixels.reserve(field.values().size());
  for (double v : field.values()) {
    const double unit = alpha > 0.0 ? (v + alpha) / (2.0 * alpha) : 0.5;
    pixels.push_back(to_byte(static_cast<float>(unit)));
  }
  const auto bytes = encode(pixels.data(), field.width(), field.height(), PNG_FORMAT_GRAY);
  write_bytes(path, bytes.data(), bytes.size());
}

void write_field_raw(const std::filesystem::path& path, const ScalarField& field) {
  std::vector<std::uint8_t> out{'G', 'R', 'F', '1'};
  put_u32(out, static_cast<std::uint32_t>(field.width()));
  put_u32(out, static_cast<std::uint32_t>(field.height()));
  put_u32(out, 0);
  for (double v : field.values()) put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
  write_bytes(path, out.data(), out.size());
}

ScalarField read_field_raw(const std::filesystem::path& path) {
  const auto bytes = read_bytes(path);
  if (bytes.size() < 16 || std::memcmp(bytes.data(), "GRF1", 4) != 0) {
    throw IoError(path.string() + " is not a GRF1 field file");
  }
  const auto w = get_u32(bytes.data() + 4);
  const auto h = get_u32(bytes.data() + 8);
  const std::size_t n = static_cast<std::size_t>(w) * h;
  if (w == 0 || h == 0 || bytes.size() != 16 + 4 * n) throw IoError(path.string() + " has a bad size");
  std::vector<double> values(n);
  double peak = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    values[i] = std::bit_cast<float>(get_u32(bytes.data() + 16 + 4 * i));
    peak = std::max(peak, std::abs(values[i]));
  }
  FieldSpec spec{static_cast<int>(w), static_cast<int>(h), 0.0, peak, 0};
  return ScalarField(spec, std::move(values));
}

}  // namespace grfaug
