#include "facerr/png_io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <vector>

#include "facerr/error.hpp"

namespace facerr {
namespace {

constexpr unsigned char kPngSignature[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};

struct PngImage {
  png_image image{};
  PngImage() {
    image.version = PNG_IMAGE_VERSION;
  }
  ~PngImage() { png_image_free(&image); }
  PngImage(const PngImage&) = delete;
  PngImage& operator=(const PngImage&) = delete;
};

}  // namespace

std::uint8_t to_byte(double value) {
  return static_cast<std::uint8_t>(std::lround(std::clamp(value, 0.0, 1.0) * 255.0));
}

Image read_image(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (bytes.size() < sizeof(kPngSignature) || std::memcmp(bytes.data(), kPngSignature, sizeof(kPngSignature)) != 0) {
    throw Error(ErrorKind::kFormat, path.string() + " is not a PNG file");
  }

  PngImage png;
  if (!png_image_begin_read_from_memory(&png.image, bytes.data(), bytes.size())) {
    throw Error(ErrorKind::kFormat, path.string() + ": " + png.image.message);
  }
  if (png.image.format & PNG_FORMAT_FLAG_LINEAR) {
    throw Error(ErrorKind::kUnsupported, path.string() + ": only 8-bit PNG is supported (found 16-bit)");
  }
  png.image.format = PNG_FORMAT_RGB;
  const int width = static_cast<int>(png.image.width);
  const int height = static_cast<int>(png.image.height);
  std::vector<unsigned char> rgb(PNG_IMAGE_SIZE(png.image));
  if (!png_image_finish_read(&png.image, nullptr, rgb.data(), 0, nullptr)) {
    throw Error(ErrorKind::kFormat, path.string() + ": " + png.image.message);
  }

  Image out(width, height);
  for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] = rgb[i] / 255.0;
  return out;
}

namespace {

void write_rgb(const std::filesystem::path& path, int width, int height, const std::vector<unsigned char>& rgb) {
  PngImage png;
  png.image.width = static_cast<png_uint_32>(width);
  png.image.height = static_cast<png_uint_32>(height);
  png.image.format = PNG_FORMAT_RGB;
  png_alloc_size_t size = 0;
  if (!png_image_write_get_memory_size(png.image, size, 0, rgb.data(), 0, nullptr)) {
    throw Error(ErrorKind::kIo, "PNG encode failed: " + std::string(png.image.message));
  }
  std::vector<unsigned char> buffer(size);
  if (!png_image_write_to_memory(&png.image, buffer.data(), &size, 0, rgb.data(), 0, nullptr)) {
    throw Error(ErrorKind::kIo, "PNG encode failed: " + std::string(png.image.message));
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kIo, "cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(buffer.data()), static_cast<std::streamsize>(size));
  if (!out) throw Error(ErrorKind::kIo, "write failed: " + path.string());
}

}  // namespace

void write_image(const std::filesystem::path& path, const Image& image) {
  if (image.empty()) throw Error(ErrorKind::kInvalidArgument, "cannot write an empty image");
  std::vector<unsigned char> rgb(image.data.size());
  for (std::size_t i = 0; i < rgb.size(); ++i) rgb[i] = to_byte(image.data[i]);
  write_rgb(path, image.width, image.height, rgb);
}

void write_mask(const std::filesystem::path& path, const Mask& mask) {
  if (mask.width <= 0 || mask.height <= 0) throw Error(ErrorKind::kInvalidArgument, "cannot write an empty mask");
  std::vector<unsigned char> rgb(mask.data.size() * 3);
  for (std::size_t i = 0; i < mask.data.size(); ++i) {
    const unsigned char v = mask.data[i] ? 255 : 0;
    rgb[3 * i] = rgb[3 * i + 1] = rgb[3 * i + 2] = v;
  }
  write_rgb(path, mask.width, mask.height, rgb);
}

}  // namespace facerr
