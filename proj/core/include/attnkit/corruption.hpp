#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "attnkit/attention_map.hpp"
#include "attnkit/image.hpp"

namespace attnkit {

enum class CorruptionKind { kGaussian, kImpulse, kMotionBlur, kJpeg, kFog, kSnow };

inline constexpr std::array<CorruptionKind, 6> kAllCorruptionKinds = {
    CorruptionKind::kGaussian, CorruptionKind::kImpulse, CorruptionKind::kMotionBlur,
    CorruptionKind::kJpeg,     CorruptionKind::kFog,     CorruptionKind::kSnow};

std::string corruption_kind_name(CorruptionKind kind);
CorruptionKind corruption_kind_from_name(const std::string& name);

/// (kind, severity, seed) triple that fully determines one degradation.
struct CorruptionSpec {
  CorruptionKind kind = CorruptionKind::kGaussian;
  int severity = 3;
  std::uint64_t seed = 0;

  void validate() const;  ///< severity must lie in [1, 5]
};

/// Strength ladders indexed by severity 1..5. Index is severity - 1.
struct SeverityLadders {
  std::array<double, 5> gaussian_sigma = {0.08, 0.12, 0.18, 0.26, 0.38};
  std::array<double, 5> impulse_fraction = {0.02, 0.04, 0.06, 0.12, 0.22};
  std::array<int, 5> motion_blur_length = {7, 11, 15, 19, 23};
  std::array<int, 5> jpeg_quality = {25, 18, 15, 10, 7};
  std::array<double, 5> fog_strength = {0.15, 0.25, 0.35, 0.45, 0.55};
  std::array<double, 5> snow_streaks_per_kpx = {0.8, 1.4, 2.2, 3.2, 4.5};
  std::array<double, 5> snow_whitening = {0.04, 0.08, 0.12, 0.17, 0.22};

  void validate() const;
};

// Strength-parameterized primitives. Zero strength is an exact identity.

Image add_gaussian_noise(const Image& img, double sigma, std::uint64_t seed);
Image add_impulse_noise(const Image& img, double fraction, std::uint64_t seed);

/// Normalized linear blur kernel of the given length at angle_deg from the
/// x-axis, bilinearly rasterized on a length x length grid.
RawMap motion_blur_kernel(int length, double angle_deg);

/// Convolution with reflect padding. Throws KernelTooLarge when the kernel
/// exceeds the shorter image side.
Image convolve_reflect(const Image& img, const RawMap& kernel);

/// 8x8 block-DCT quantization round trip at the given quality in [1, 100],
/// standard luminance/chrominance tables, no chroma subsampling. Deterministic.
Image jpeg_roundtrip(const Image& img, int quality);

/// Lighten-blend a diamond-square plasma field over the image:
/// out = (1 - strength) * img + strength * max(field, img).
Image apply_fog(const Image& img, double strength, std::uint64_t seed);

struct SnowParams {
  double streaks_per_kpx = 0.0;  ///< bright streak count per 1000 pixels
  double whitening = 0.0;        ///< blend factor toward white
  double streak_length_min = 6.0;
  double streak_length_max = 14.0;
};

Image apply_snow(const Image& img, const SnowParams& params, std::uint64_t seed);

/// Diamond-square plasma field normalized to [0, 1], cropped to width x height.
std::vector<double> plasma_fractal(int width, int height, std::uint64_t seed,
                                   double roughness_decay = 2.0);

// Severity-ladder entry points. Severity 0 returns the input untouched.

Image gaussian_noise(const Image& img, int severity, std::uint64_t seed,
                     const SeverityLadders& ladders = {});
Image impulse_noise(const Image& img, int severity, std::uint64_t seed,
                    const SeverityLadders& ladders = {});
Image motion_blur(const Image& img, int severity, std::uint64_t seed,
                  const SeverityLadders& ladders = {});
Image jpeg_compress(const Image& img, int severity, const SeverityLadders& ladders = {});
Image fog(const Image& img, int severity, std::uint64_t seed, const SeverityLadders& ladders = {});
Image snow(const Image& img, int severity, std::uint64_t seed, const SeverityLadders& ladders = {});

Image apply_corruption(const Image& img, const CorruptionSpec& spec,
                       const SeverityLadders& ladders = {});

}  // namespace attnkit
