#pragma once

#include <span>
#include <vector>

#include "attnkit/errors.hpp"

namespace attnkit {

/// Floor applied to values inside logarithms; keeps divergences finite for
/// delta-like maps.
inline constexpr double kLogFloor = 1e-8;

/// Tolerance on the unit-mass invariant of AttentionMap.
inline constexpr double kMassTolerance = 1e-6;

/// Unconstrained 2-D grid of reals (logits, raw intensities) awaiting
/// normalization. Row-major storage.
struct RawMap {
  int width = 0;
  int height = 0;
  std::vector<double> values;

  RawMap() = default;
  RawMap(int w, int h, double fill = 0.0)
      : width(w), height(h), values(static_cast<std::size_t>(w) * h, fill) {}
  RawMap(int w, int h, std::vector<double> v) : width(w), height(h), values(std::move(v)) {}

  std::size_t size() const { return values.size(); }
  double& at(int x, int y) { return values[static_cast<std::size_t>(y) * width + x]; }
  double at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
};

/// Nonnegative spatial distribution over an image grid: every value >= 0 and
/// the pixel sum is 1 within kMassTolerance. Immutable after construction.
class AttentionMap {
 public:
  /// Validates and adopts an already-normalized grid.
  static AttentionMap from_distribution(int width, int height, std::vector<double> values);

  static AttentionMap uniform(int width, int height);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  double at(int x, int y) const { return values_[static_cast<std::size_t>(y) * width_ + x]; }
  std::span<const double> values() const { return values_; }

  bool same_shape(const AttentionMap& other) const {
    return width_ == other.width_ && height_ == other.height_;
  }

 private:
  AttentionMap(int width, int height, std::vector<double> values)
      : width_(width), height_(height), values_(std::move(values)) {}

  int width_;
  int height_;
  std::vector<double> values_;
};

/// Spatial softmax with max-subtraction. Throws InvalidInput on non-finite
/// values or empty grids.
AttentionMap normalize_softmax(const RawMap& raw);

/// Divides nonnegative intensities by their total. Throws DegenerateMap when
/// the total is zero, InvalidInput on negative or non-finite values.
AttentionMap normalize_sum(const RawMap& raw);

/// KL(p || q) in nats; q is floored at eps inside the log, zero-p terms
/// contribute nothing. Result is >= -1e-9 (tiny negatives come from the
/// floor interacting with near-zero q mass).
double kl_divergence(const AttentionMap& p, const AttentionMap& q, double eps = kLogFloor);

/// Pearson correlation of the flattened pixel vectors. Constant maps have no
/// correlation and raise DegenerateMap.
double pearson_cc(const AttentionMap& p, const AttentionMap& q);

/// Shannon entropy in nats, 0*log(0) := 0.
double entropy(const AttentionMap& p);

/// Bilinear resample followed by renormalization. Same-size targets return
/// the input unchanged.
AttentionMap resize_map(const AttentionMap& p, int width, int height);

/// Pixel-wise arithmetic mean of equally sized maps.
AttentionMap mean_map(std::span<const AttentionMap> maps);

/// Isotropic Gaussian centered on the grid, sigma expressed as a fraction of
/// the shorter side. Stand-in for a dataset-average attention map.
AttentionMap centered_gaussian(int width, int height, double sigma_fraction = 0.25);

}  // namespace attnkit
