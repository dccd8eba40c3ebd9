#pragma once

#include <vector>

#include "attnkit/errors.hpp"

namespace attnkit {

/// RGB image, interleaved row-major, values nominally in [0, 1].
struct Image {
  int width = 0;
  int height = 0;
  std::vector<double> data;  ///< size = width * height * 3

  Image() = default;
  Image(int w, int h) : width(w), height(h), data(static_cast<std::size_t>(w) * h * 3, 0.0) {}

  static Image constant(int w, int h, double value) {
    Image img(w, h);
    for (double& v : img.data) v = value;
    return img;
  }

  std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }

  double& at(int x, int y, int c) {
    return data[(static_cast<std::size_t>(y) * width + x) * 3 + c];
  }
  double at(int x, int y, int c) const {
    return data[(static_cast<std::size_t>(y) * width + x) * 3 + c];
  }
};

/// Clamp every channel into [0, 1].
void clamp01(Image& img);

/// Rec. 601 luma.
double luminance(const Image& img, int x, int y);
double mean_luminance(const Image& img);

Image resize_image(const Image& img, int width, int height);

/// Root-mean-square per-pixel-channel difference.
double rms_distortion(const Image& a, const Image& b);

}  // namespace attnkit
