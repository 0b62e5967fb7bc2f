#pragma once

#include <filesystem>

#include "facerr/image.hpp"

namespace facerr {

// 8-bit PNG only. Gray and alpha inputs are converted to RGB; 16-bit inputs
// raise Error(kUnsupported). Values map linearly: byte / 255.
Image read_image(const std::filesystem::path& path);

// Channels are clamped to [0, 1] and rounded to the nearest byte.
void write_image(const std::filesystem::path& path, const Image& image);

// 0 / 255 in all three channels.
void write_mask(const std::filesystem::path& path, const Mask& mask);

std::uint8_t to_byte(double value);

}  // namespace facerr
