#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace attnkit::detail {

struct PngPixels {
  int width = 0;
  int height = 0;
  int channels = 0;  // 1 (gray) or 3 (rgb)
  std::vector<std::uint8_t> data;
};

// 16-bit depth is narrowed to 8, alpha is stripped, palette expanded.
PngPixels read_png(const std::filesystem::path& path);

void write_png(const std::filesystem::path& path, int width, int height, int channels,
               const std::vector<std::uint8_t>& data);

}  // namespace attnkit::detail
