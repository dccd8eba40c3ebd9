#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace attnkit::detail {

// Bilinear resample of an interleaved row-major buffer. Pixel centers sit at
// (i + 0.5) / n, source coordinates clamped at the border.
inline std::vector<double> bilinear_resample(const std::vector<double>& src, int src_w, int src_h,
                                             int channels, int dst_w, int dst_h) {
  std::vector<double> dst(static_cast<std::size_t>(dst_w) * dst_h * channels);
  const double sx = static_cast<double>(src_w) / dst_w;
  const double sy = static_cast<double>(src_h) / dst_h;
  for (int y = 0; y < dst_h; ++y) {
    const double fy = (y + 0.5) * sy - 0.5;
    const double cy = std::clamp(fy, 0.0, static_cast<double>(src_h - 1));
    const int y0 = static_cast<int>(std::floor(cy));
    const int y1 = std::min(y0 + 1, src_h - 1);
    const double wy = cy - y0;
    for (int x = 0; x < dst_w; ++x) {
      const double fx = (x + 0.5) * sx - 0.5;
      const double cx = std::clamp(fx, 0.0, static_cast<double>(src_w - 1));
      const int x0 = static_cast<int>(std::floor(cx));
      const int x1 = std::min(x0 + 1, src_w - 1);
      const double wx = cx - x0;
      for (int c = 0; c < channels; ++c) {
        auto px = [&](int xx, int yy) {
          return src[(static_cast<std::size_t>(yy) * src_w + xx) * channels + c];
        };
        const double top = px(x0, y0) * (1.0 - wx) + px(x1, y0) * wx;
        const double bot = px(x0, y1) * (1.0 - wx) + px(x1, y1) * wx;
        dst[(static_cast<std::size_t>(y) * dst_w + x) * channels + c] =
            top * (1.0 - wy) + bot * wy;
      }
    }
  }
  return dst;
}

}  // namespace attnkit::detail
