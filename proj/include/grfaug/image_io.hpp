#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "grfaug/errors.hpp"
#include "grfaug/grf.hpp"
#include "grfaug/image.hpp"

namespace grfaug {

std::uint8_t to_byte(float v) noexcept;  // round(v * 255), clamped

/// Reads PNG or binary/ASCII PPM (chosen by content). Channels map to v / 255
/// (v / maxval for PPM); alpha is dropped, gray is replicated.
ImageBuffer read_image(const std::filesystem::path& path);

void write_png(const std::filesystem::path& path, const ImageBuffer& image);
std::vector<std::uint8_t> encode_png(const ImageBuffer& image);

/// Grayscale PNG with field values mapped affinely from [-alpha, alpha] to [0, 255].
void write_field_png(const std::filesystem::path& path, const ScalarField& field);

/// Raw little-endian grid: "GRF1", u32 width, u32 height, u32 reserved (0),
/// then width * height float32 values in row-major order.
void write_field_raw(const std::filesystem::path& path, const ScalarField& field);
ScalarField read_field_raw(const std::filesystem::path& path);

}  // namespace grfaug
