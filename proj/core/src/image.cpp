#include "attnkit/image.hpp"

#include <algorithm>
#include <cmath>

#include "resample.hpp"

namespace attnkit {

void clamp01(Image& img) {
  for (double& v : img.data) v = std::clamp(v, 0.0, 1.0);
}

double luminance(const Image& img, int x, int y) {
  return 0.299 * img.at(x, y, 0) + 0.587 * img.at(x, y, 1) + 0.114 * img.at(x, y, 2);
}

double mean_luminance(const Image& img) {
  double acc = 0.0;
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) acc += luminance(img, x, y);
  }
  return acc / static_cast<double>(img.pixel_count());
}

Image resize_image(const Image& img, int width, int height) {
  if (width < 1 || height < 1) throw InvalidInput("resize target must be at least 1x1");
  if (width == img.width && height == img.height) return img;
  Image out(width, height);
  out.data = detail::bilinear_resample(img.data, img.width, img.height, 3, width, height);
  return out;
}

double rms_distortion(const Image& a, const Image& b) {
  if (a.width != b.width || a.height != b.height) {
    throw ShapeError("images have mismatched dimensions");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    const double d = a.data[i] - b.data[i];
    acc += d * d;
  }
  return std::sqrt(acc / static_cast<double>(a.data.size()));
}

}  // namespace attnkit
