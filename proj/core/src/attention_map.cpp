#include "attnkit/attention_map.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "resample.hpp"

namespace attnkit {

namespace {

void require_grid(int width, int height, std::size_t count) {
  if (width < 1 || height < 1) {
    throw InvalidInput("map dimensions must be at least 1x1");
  }
  if (count != static_cast<std::size_t>(width) * height) {
    throw ShapeError("value count does not match map dimensions");
  }
}

void require_same_shape(const AttentionMap& p, const AttentionMap& q) {
  if (!p.same_shape(q)) {
    throw ShapeError("attention maps have mismatched dimensions");
  }
}

}  // namespace

AttentionMap AttentionMap::from_distribution(int width, int height, std::vector<double> values) {
  require_grid(width, height, values.size());
  double sum = 0.0;
  for (double v : values) {
    if (!std::isfinite(v)) throw InvalidInput("attention map value is not finite");
    if (v < 0.0) throw InvalidInput("attention map value is negative");
    sum += v;
  }
  if (std::abs(sum - 1.0) > kMassTolerance) {
    throw InvalidInput("attention map mass deviates from 1 by more than 1e-6");
  }
  return AttentionMap(width, height, std::move(values));
}

AttentionMap AttentionMap::uniform(int width, int height) {
  if (width < 1 || height < 1) throw InvalidInput("map dimensions must be at least 1x1");
  const std::size_t n = static_cast<std::size_t>(width) * height;
  return AttentionMap(width, height, std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

AttentionMap normalize_softmax(const RawMap& raw) {
  require_grid(raw.width, raw.height, raw.values.size());
  double max_v = -std::numeric_limits<double>::infinity();
  for (double v : raw.values) {
    if (!std::isfinite(v)) throw InvalidInput("softmax input is not finite");
    max_v = std::max(max_v, v);
  }
  std::vector<double> out(raw.values.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = std::exp(raw.values[i] - max_v);
    sum += out[i];
  }
  for (double& v : out) v /= sum;
  return AttentionMap::from_distribution(raw.width, raw.height, std::move(out));
}

AttentionMap normalize_sum(const RawMap& raw) {
  require_grid(raw.width, raw.height, raw.values.size());
  double sum = 0.0;
  for (double v : raw.values) {
    if (!std::isfinite(v)) throw InvalidInput("map intensity is not finite");
    if (v < 0.0) throw InvalidInput("map intensity is negative");
    sum += v;
  }
  if (sum <= 0.0) throw DegenerateMap("cannot normalize a zero-mass map");
  std::vector<double> out(raw.values.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = raw.values[i] / sum;
  return AttentionMap::from_distribution(raw.width, raw.height, std::move(out));
}

double kl_divergence(const AttentionMap& p, const AttentionMap& q, double eps) {
  require_same_shape(p, q);
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double pi = p[i];
    if (pi <= 0.0) continue;
    acc += pi * (std::log(pi) - std::log(std::max(q[i], eps)));
  }
  return acc;
}

double pearson_cc(const AttentionMap& p, const AttentionMap& q) {
  require_same_shape(p, q);
  const std::size_t n = p.size();
  double mp = 0.0;
  double mq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mp += p[i];
    mq += q[i];
  }
  mp /= static_cast<double>(n);
  mq /= static_cast<double>(n);
  double vp = 0.0;
  double vq = 0.0;
  double cov = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dp = p[i] - mp;
    const double dq = q[i] - mq;
    vp += dp * dp;
    vq += dq * dq;
    cov += dp * dq;
  }
  // A constant map only reaches ~1e-30 here through rounding noise.
  constexpr double kVarianceFloor = 1e-24;
  if (vp <= kVarianceFloor || vq <= kVarianceFloor) {
    throw DegenerateMap("correlation undefined for a constant map");
  }
  return std::clamp(cov / std::sqrt(vp * vq), -1.0, 1.0);
}

double entropy(const AttentionMap& p) {
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0) acc -= p[i] * std::log(p[i]);
  }
  return acc;
}

AttentionMap resize_map(const AttentionMap& p, int width, int height) {
  if (width < 1 || height < 1) throw InvalidInput("resize target must be at least 1x1");
  if (width == p.width() && height == p.height()) {
    return AttentionMap::from_distribution(width, height,
                                           std::vector<double>(p.values().begin(), p.values().end()));
  }
  std::vector<double> src(p.values().begin(), p.values().end());
  std::vector<double> out =
      detail::bilinear_resample(src, p.width(), p.height(), 1, width, height);
  const double sum = std::accumulate(out.begin(), out.end(), 0.0);
  for (double& v : out) v /= sum;
  return AttentionMap::from_distribution(width, height, std::move(out));
}

AttentionMap mean_map(std::span<const AttentionMap> maps) {
  if (maps.empty()) throw InvalidInput("mean of an empty map list");
  const AttentionMap& first = maps.front();
  std::vector<double> acc(first.size(), 0.0);
  for (const AttentionMap& m : maps) {
    require_same_shape(first, m);
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += m[i];
  }
  const double inv = 1.0 / static_cast<double>(maps.size());
  for (double& v : acc) v *= inv;
  return AttentionMap::from_distribution(first.width(), first.height(), std::move(acc));
}

AttentionMap centered_gaussian(int width, int height, double sigma_fraction) {
  if (sigma_fraction <= 0.0) throw InvalidInput("sigma fraction must be positive");
  RawMap raw(width, height);
  const double cx = (width - 1) / 2.0;
  const double cy = (height - 1) / 2.0;
  const double sigma = sigma_fraction * std::min(width, height);
  const double inv2s2 = 1.0 / (2.0 * sigma * sigma);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const double dx = x - cx;
      const double dy = y - cy;
      raw.at(x, y) = std::exp(-(dx * dx + dy * dy) * inv2s2);
    }
  }
  return normalize_sum(raw);
}

}  // namespace attnkit
