#include "attnkit/corruption.hpp"

#include <algorithm>
#include <cmath>

#include "attnkit/rng.hpp"

namespace attnkit {

namespace {

constexpr double kPi = 3.14159265358979323846;

int reflect_index(int i, int n) {
  // Half-sample symmetric reflection: -1 -> 0, -2 -> 1, n -> n-1.
  while (i < 0 || i >= n) {
    if (i < 0) i = -i - 1;
    if (i >= n) i = 2 * n - 1 - i;
  }
  return i;
}

void bilinear_splat_max(std::vector<double>& layer, int width, int height, double px, double py,
                        double value) {
  const int x0 = static_cast<int>(std::floor(px));
  const int y0 = static_cast<int>(std::floor(py));
  const double wx = px - x0;
  const double wy = py - y0;
  const double weights[4] = {(1 - wx) * (1 - wy), wx * (1 - wy), (1 - wx) * wy, wx * wy};
  const int xs[4] = {x0, x0 + 1, x0, x0 + 1};
  const int ys[4] = {y0, y0, y0 + 1, y0 + 1};
  for (int k = 0; k < 4; ++k) {
    if (xs[k] < 0 || xs[k] >= width || ys[k] < 0 || ys[k] >= height) continue;
    double& cell = layer[static_cast<std::size_t>(ys[k]) * width + xs[k]];
    cell = std::max(cell, value * weights[k]);
  }
}

int severity_checked(int severity) {
  if (severity < 0 || severity > 5) throw InvalidInput("severity must lie in [0, 5]");
  return severity;
}

// ---- 8x8 DCT machinery ----------------------------------------------------

struct DctBasis {
  double m[8][8];
  DctBasis() {
    for (int u = 0; u < 8; ++u) {
      const double c = u == 0 ? std::sqrt(1.0 / 8.0) : std::sqrt(2.0 / 8.0);
      for (int x = 0; x < 8; ++x) {
        m[u][x] = c * std::cos((2 * x + 1) * u * kPi / 16.0);
      }
    }
  }
};

const DctBasis& dct_basis() {
  static const DctBasis basis;
  return basis;
}

constexpr int kLumaQuant[64] = {
    16, 11, 10, 16, 24,  40,  51,  61,  12, 12, 14, 19, 26,  58,  60,  55,
    14, 13, 16, 24, 40,  57,  69,  56,  14, 17, 22, 29, 51,  87,  80,  62,
    18, 22, 37, 56, 68,  109, 103, 77,  24, 35, 55, 64, 81,  104, 113, 92,
    49, 64, 78, 87, 103, 121, 120, 101, 72, 92, 95, 98, 112, 100, 103, 99};

constexpr int kChromaQuant[64] = {
    17, 18, 24, 47, 99, 99, 99, 99, 18, 21, 26, 66, 99, 99, 99, 99,
    24, 26, 56, 99, 99, 99, 99, 99, 47, 66, 99, 99, 99, 99, 99, 99,
    99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99,
    99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99};

void scaled_quant_table(const int* base, int quality, double* out) {
  const int scale = quality < 50 ? 5000 / quality : 200 - 2 * quality;
  for (int i = 0; i < 64; ++i) {
    const int q = (base[i] * scale + 50) / 100;
    out[i] = static_cast<double>(std::clamp(q, 1, 255));
  }
}

void dct_quant_block(double* block, const double* quant) {
  const DctBasis& basis = dct_basis();
  double tmp[64];
  double coef[64];
  // rows: tmp = block * M^T
  for (int y = 0; y < 8; ++y) {
    for (int u = 0; u < 8; ++u) {
      double acc = 0.0;
      for (int x = 0; x < 8; ++x) acc += block[y * 8 + x] * basis.m[u][x];
      tmp[y * 8 + u] = acc;
    }
  }
  // cols: coef = M * tmp
  for (int v = 0; v < 8; ++v) {
    for (int u = 0; u < 8; ++u) {
      double acc = 0.0;
      for (int y = 0; y < 8; ++y) acc += basis.m[v][y] * tmp[y * 8 + u];
      coef[v * 8 + u] = acc;
    }
  }
  for (int i = 0; i < 64; ++i) {
    coef[i] = std::nearbyint(coef[i] / quant[i]) * quant[i];
  }
  // inverse: block = M^T * coef * M
  for (int v = 0; v < 8; ++v) {
    for (int x = 0; x < 8; ++x) {
      double acc = 0.0;
      for (int u = 0; u < 8; ++u) acc += coef[v * 8 + u] * basis.m[u][x];
      tmp[v * 8 + x] = acc;
    }
  }
  for (int y = 0; y < 8; ++y) {
    for (int x = 0; x < 8; ++x) {
      double acc = 0.0;
      for (int v = 0; v < 8; ++v) acc += basis.m[v][y] * tmp[v * 8 + x];
      block[y * 8 + x] = acc;
    }
  }
}

}  // namespace

std::string corruption_kind_name(CorruptionKind kind) {
  switch (kind) {
    case CorruptionKind::kGaussian: return "gaussian";
    case CorruptionKind::kImpulse: return "impulse";
    case CorruptionKind::kMotionBlur: return "motion_blur";
    case CorruptionKind::kJpeg: return "jpeg";
    case CorruptionKind::kFog: return "fog";
    case CorruptionKind::kSnow: return "snow";
  }
  throw InvalidInput("unknown corruption kind");
}

CorruptionKind corruption_kind_from_name(const std::string& name) {
  for (CorruptionKind kind : kAllCorruptionKinds) {
    if (corruption_kind_name(kind) == name) return kind;
  }
  throw InvalidInput("unknown corruption kind: " + name);
}

void CorruptionSpec::validate() const {
  if (severity < 1 || severity > 5) throw InvalidInput("corruption severity must lie in [1, 5]");
}

void SeverityLadders::validate() const {
  auto non_decreasing = [](const auto& arr) {
    for (std::size_t i = 1; i < arr.size(); ++i) {
      if (arr[i] < arr[i - 1]) return false;
    }
    return true;
  };
  for (double v : gaussian_sigma) {
    if (v < 0.0) throw InvalidInput("gaussian sigma ladder must be nonnegative");
  }
  for (double v : impulse_fraction) {
    if (v < 0.0 || v > 1.0) throw InvalidInput("impulse fraction ladder must lie in [0, 1]");
  }
  for (int v : motion_blur_length) {
    if (v < 1) throw InvalidInput("motion blur length ladder must be >= 1");
  }
  for (int v : jpeg_quality) {
    if (v < 1 || v > 100) throw InvalidInput("jpeg quality ladder must lie in [1, 100]");
  }
  for (double v : fog_strength) {
    if (v < 0.0 || v > 1.0) throw InvalidInput("fog strength ladder must lie in [0, 1]");
  }
  for (double v : snow_streaks_per_kpx) {
    if (v < 0.0) throw InvalidInput("snow density ladder must be nonnegative");
  }
  for (double v : snow_whitening) {
    if (v < 0.0 || v > 1.0) throw InvalidInput("snow whitening ladder must lie in [0, 1]");
  }
  if (!non_decreasing(gaussian_sigma) || !non_decreasing(impulse_fraction) ||
      !non_decreasing(motion_blur_length) || !non_decreasing(fog_strength) ||
      !non_decreasing(snow_streaks_per_kpx) || !non_decreasing(snow_whitening)) {
    throw InvalidInput("severity ladders must grow with severity");
  }
  for (std::size_t i = 1; i < jpeg_quality.size(); ++i) {
    if (jpeg_quality[i] > jpeg_quality[i - 1]) {
      throw InvalidInput("jpeg quality ladder must fall with severity");
    }
  }
}

Image add_gaussian_noise(const Image& img, double sigma, std::uint64_t seed) {
  if (sigma < 0.0) throw InvalidInput("noise sigma must be nonnegative");
  RandomStream rng(seed);
  Image out = img;
  for (double& v : out.data) v += sigma * rng.normal();
  clamp01(out);
  return out;
}

Image add_impulse_noise(const Image& img, double fraction, std::uint64_t seed) {
  if (fraction < 0.0 || fraction > 1.0) throw InvalidInput("impulse fraction must lie in [0, 1]");
  RandomStream rng(seed);
  Image out = img;
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      if (rng.uniform() >= fraction) continue;
      const double value = rng.uniform() < 0.5 ? 0.0 : 1.0;
      for (int c = 0; c < 3; ++c) out.at(x, y, c) = value;
    }
  }
  return out;
}

RawMap motion_blur_kernel(int length, double angle_deg) {
  if (length < 1) throw InvalidInput("kernel length must be >= 1");
  RawMap kernel(length, length);
  const double rad = angle_deg * kPi / 180.0;
  const double cx = (length - 1) / 2.0;
  const double dx = std::cos(rad);
  const double dy = std::sin(rad);
  for (int s = 0; s < length; ++s) {
    const double t = s - cx;
    const double px = cx + t * dx;
    const double py = cx + t * dy;
    const int x0 = static_cast<int>(std::floor(px));
    const int y0 = static_cast<int>(std::floor(py));
    const double wx = px - x0;
    const double wy = py - y0;
    const double weights[4] = {(1 - wx) * (1 - wy), wx * (1 - wy), (1 - wx) * wy, wx * wy};
    const int xs[4] = {x0, x0 + 1, x0, x0 + 1};
    const int ys[4] = {y0, y0, y0 + 1, y0 + 1};
    for (int k = 0; k < 4; ++k) {
      if (xs[k] < 0 || xs[k] >= length || ys[k] < 0 || ys[k] >= length) continue;
      kernel.at(xs[k], ys[k]) += weights[k];
    }
  }
  double sum = 0.0;
  for (double v : kernel.values) sum += v;
  for (double& v : kernel.values) v /= sum;
  return kernel;
}

Image convolve_reflect(const Image& img, const RawMap& kernel) {
  if (kernel.width > img.width || kernel.height > img.height) {
    throw KernelTooLarge("convolution kernel exceeds the image extent");
  }
  const int kcx = kernel.width / 2;
  const int kcy = kernel.height / 2;
  Image out(img.width, img.height);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      double acc[3] = {0.0, 0.0, 0.0};
      for (int j = 0; j < kernel.height; ++j) {
        const int sy = reflect_index(y + j - kcy, img.height);
        for (int i = 0; i < kernel.width; ++i) {
          const double w = kernel.at(i, j);
          if (w == 0.0) continue;
          const int sx = reflect_index(x + i - kcx, img.width);
          for (int c = 0; c < 3; ++c) acc[c] += w * img.at(sx, sy, c);
        }
      }
      for (int c = 0; c < 3; ++c) out.at(x, y, c) = acc[c];
    }
  }
  clamp01(out);
  return out;
}

Image jpeg_roundtrip(const Image& img, int quality) {
  if (quality < 1 || quality > 100) throw InvalidInput("jpeg quality must lie in [1, 100]");
  const int w8 = (img.width + 7) / 8 * 8;
  const int h8 = (img.height + 7) / 8 * 8;

  // YCbCr planes on the 255 scale, edge-replicated to block boundaries.
  std::vector<double> planes[3];
  for (auto& p : planes) p.resize(static_cast<std::size_t>(w8) * h8);
  for (int y = 0; y < h8; ++y) {
    const int sy = std::min(y, img.height - 1);
    for (int x = 0; x < w8; ++x) {
      const int sx = std::min(x, img.width - 1);
      const double r = img.at(sx, sy, 0) * 255.0;
      const double g = img.at(sx, sy, 1) * 255.0;
      const double b = img.at(sx, sy, 2) * 255.0;
      const std::size_t i = static_cast<std::size_t>(y) * w8 + x;
      planes[0][i] = 0.299 * r + 0.587 * g + 0.114 * b;
      planes[1][i] = -0.168736 * r - 0.331264 * g + 0.5 * b + 128.0;
      planes[2][i] = 0.5 * r - 0.418688 * g - 0.081312 * b + 128.0;
    }
  }

  double luma_table[64];
  double chroma_table[64];
  scaled_quant_table(kLumaQuant, quality, luma_table);
  scaled_quant_table(kChromaQuant, quality, chroma_table);

  for (int plane = 0; plane < 3; ++plane) {
    const double* quant = plane == 0 ? luma_table : chroma_table;
    for (int by = 0; by < h8; by += 8) {
      for (int bx = 0; bx < w8; bx += 8) {
        double block[64];
        for (int y = 0; y < 8; ++y) {
          for (int x = 0; x < 8; ++x) {
            block[y * 8 + x] = planes[plane][static_cast<std::size_t>(by + y) * w8 + bx + x] - 128.0;
          }
        }
        dct_quant_block(block, quant);
        for (int y = 0; y < 8; ++y) {
          for (int x = 0; x < 8; ++x) {
            planes[plane][static_cast<std::size_t>(by + y) * w8 + bx + x] = block[y * 8 + x] + 128.0;
          }
        }
      }
    }
  }

  Image out(img.width, img.height);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * w8 + x;
      const double yy = planes[0][i];
      const double cb = planes[1][i] - 128.0;
      const double cr = planes[2][i] - 128.0;
      out.at(x, y, 0) = (yy + 1.402 * cr) / 255.0;
      out.at(x, y, 1) = (yy - 0.344136 * cb - 0.714136 * cr) / 255.0;
      out.at(x, y, 2) = (yy + 1.772 * cb) / 255.0;
    }
  }
  clamp01(out);
  return out;
}

std::vector<double> plasma_fractal(int width, int height, std::uint64_t seed,
                                   double roughness_decay) {
  if (width < 1 || height < 1) throw InvalidInput("plasma field must be at least 1x1");
  int n = 1;
  while (n < std::max(width, height)) n *= 2;
  const int stride = n + 1;
  std::vector<double> grid(static_cast<std::size_t>(stride) * stride, 0.0);
  RandomStream rng(seed);
  auto cell = [&](int x, int y) -> double& {
    return grid[static_cast<std::size_t>(y) * stride + x];
  };

  cell(0, 0) = rng.uniform();
  cell(n, 0) = rng.uniform();
  cell(0, n) = rng.uniform();
  cell(n, n) = rng.uniform();

  double amplitude = 1.0;
  for (int step = n; step > 1; step /= 2) {
    const int half = step / 2;
    // diamond
    for (int y = half; y < n; y += step) {
      for (int x = half; x < n; x += step) {
        const double avg = (cell(x - half, y - half) + cell(x + half, y - half) +
                            cell(x - half, y + half) + cell(x + half, y + half)) /
                           4.0;
        cell(x, y) = avg + (rng.uniform() - 0.5) * amplitude;
      }
    }
    // square
    for (int y = 0; y <= n; y += half) {
      for (int x = (y / half) % 2 == 0 ? half : 0; x <= n; x += step) {
        double acc = 0.0;
        int count = 0;
        if (x - half >= 0) { acc += cell(x - half, y); ++count; }
        if (x + half <= n) { acc += cell(x + half, y); ++count; }
        if (y - half >= 0) { acc += cell(x, y - half); ++count; }
        if (y + half <= n) { acc += cell(x, y + half); ++count; }
        cell(x, y) = acc / count + (rng.uniform() - 0.5) * amplitude;
      }
    }
    amplitude /= roughness_decay;
  }

  double lo = grid[0];
  double hi = grid[0];
  for (double v : grid) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const double span = hi > lo ? hi - lo : 1.0;

  std::vector<double> field(static_cast<std::size_t>(width) * height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      field[static_cast<std::size_t>(y) * width + x] = (cell(x, y) - lo) / span;
    }
  }
  return field;
}

Image apply_fog(const Image& img, double strength, std::uint64_t seed) {
  if (strength < 0.0 || strength > 1.0) throw InvalidInput("fog strength must lie in [0, 1]");
  const std::vector<double> field = plasma_fractal(img.width, img.height, seed);
  Image out(img.width, img.height);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      const double haze = field[static_cast<std::size_t>(y) * img.width + x];
      for (int c = 0; c < 3; ++c) {
        const double v = img.at(x, y, c);
        out.at(x, y, c) = (1.0 - strength) * v + strength * std::max(haze, v);
      }
    }
  }
  clamp01(out);
  return out;
}

Image apply_snow(const Image& img, const SnowParams& params, std::uint64_t seed) {
  if (params.whitening < 0.0 || params.whitening > 1.0 || params.streaks_per_kpx < 0.0) {
    throw InvalidInput("snow parameters out of range");
  }
  Image out = img;
  for (double& v : out.data) v += params.whitening * (1.0 - v);

  const auto count = static_cast<long long>(
      std::llround(params.streaks_per_kpx * static_cast<double>(img.pixel_count()) / 1000.0));
  if (count > 0) {
    RandomStream rng(seed);
    std::vector<double> layer(img.pixel_count(), 0.0);
    const double main_angle = rng.uniform(55.0, 125.0);
    for (long long k = 0; k < count; ++k) {
      const double cx = rng.uniform() * img.width;
      const double cy = rng.uniform() * img.height;
      const double len = rng.uniform(params.streak_length_min, params.streak_length_max);
      const double ang = (main_angle + rng.uniform(-8.0, 8.0)) * kPi / 180.0;
      const double brightness = rng.uniform(0.85, 0.98);
      const int steps = std::max(2, static_cast<int>(std::ceil(len * 2.0)));
      for (int s = 0; s <= steps; ++s) {
        const double t = -len / 2.0 + len * s / steps;
        bilinear_splat_max(layer, img.width, img.height, cx + t * std::cos(ang),
                           cy + t * std::sin(ang), brightness);
      }
    }
    for (int y = 0; y < img.height; ++y) {
      for (int x = 0; x < img.width; ++x) {
        const double flake = layer[static_cast<std::size_t>(y) * img.width + x];
        if (flake <= 0.0) continue;
        for (int c = 0; c < 3; ++c) {
          out.at(x, y, c) = std::max(out.at(x, y, c), flake);
        }
      }
    }
  }
  clamp01(out);
  return out;
}

Image gaussian_noise(const Image& img, int severity, std::uint64_t seed,
                     const SeverityLadders& ladders) {
  if (severity_checked(severity) == 0) return img;
  return add_gaussian_noise(img, ladders.gaussian_sigma[severity - 1], seed);
}

Image impulse_noise(const Image& img, int severity, std::uint64_t seed,
                    const SeverityLadders& ladders) {
  if (severity_checked(severity) == 0) return img;
  return add_impulse_noise(img, ladders.impulse_fraction[severity - 1], seed);
}

Image motion_blur(const Image& img, int severity, std::uint64_t seed,
                  const SeverityLadders& ladders) {
  if (severity_checked(severity) == 0) return img;
  RandomStream rng(seed);
  const double angle = rng.uniform(-45.0, 45.0);
  return convolve_reflect(img, motion_blur_kernel(ladders.motion_blur_length[severity - 1], angle));
}

Image jpeg_compress(const Image& img, int severity, const SeverityLadders& ladders) {
  if (severity_checked(severity) == 0) return img;
  return jpeg_roundtrip(img, ladders.jpeg_quality[severity - 1]);
}

Image fog(const Image& img, int severity, std::uint64_t seed, const SeverityLadders& ladders) {
  if (severity_checked(severity) == 0) return img;
  return apply_fog(img, ladders.fog_strength[severity - 1], seed);
}

Image snow(const Image& img, int severity, std::uint64_t seed, const SeverityLadders& ladders) {
  if (severity_checked(severity) == 0) return img;
  SnowParams params;
  params.streaks_per_kpx = ladders.snow_streaks_per_kpx[severity - 1];
  params.whitening = ladders.snow_whitening[severity - 1];
  params.streak_length_max = 14.0 + 2.0 * severity;
  return apply_snow(img, params, seed);
}

Image apply_corruption(const Image& img, const CorruptionSpec& spec,
                       const SeverityLadders& ladders) {
  switch (spec.kind) {
    case CorruptionKind::kGaussian: return gaussian_noise(img, spec.severity, spec.seed, ladders);
    case CorruptionKind::kImpulse: return impulse_noise(img, spec.severity, spec.seed, ladders);
    case CorruptionKind::kMotionBlur: return motion_blur(img, spec.severity, spec.seed, ladders);
    case CorruptionKind::kJpeg: return jpeg_compress(img, spec.severity, ladders);
    case CorruptionKind::kFog: return fog(img, spec.severity, spec.seed, ladders);
    case CorruptionKind::kSnow: return snow(img, spec.severity, spec.seed, ladders);
  }
  throw InvalidInput("unknown corruption kind");
}

}  // namespace attnkit
