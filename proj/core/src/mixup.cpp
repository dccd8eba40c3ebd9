#include "attnkit/mixup.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace attnkit {

namespace {

void require_aligned(const Sample& a, const Sample& b) {
  if (a.image.width != b.image.width || a.image.height != b.image.height) {
    throw ShapeError("sample images have mismatched dimensions");
  }
  if (a.labels.size() != b.labels.size()) {
    throw ShapeError("samples carry different pseudo-label counts");
  }
  for (std::size_t n = 0; n < a.labels.size(); ++n) {
    if (!a.labels[n].same_shape(b.labels[n])) {
      throw ShapeError("pseudo-labels have mismatched dimensions");
    }
  }
}

AttentionMap blend_maps(const AttentionMap& a, const AttentionMap& b, double lambda) {
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = lambda * a[i] + (1.0 - lambda) * b[i];
  }
  return AttentionMap::from_distribution(a.width(), a.height(), std::move(out));
}

}  // namespace

void MixPolicy::validate() const {
  if (beta_alpha <= 0.0) throw InvalidInput("beta parameter must be positive");
  if (top_k_fraction <= 0.0 || top_k_fraction > 1.0) {
    throw InvalidInput("top-K fraction must lie in (0, 1]");
  }
  if (crop_scale_min <= 0.0 || crop_scale_max > 1.0 || crop_scale_min > crop_scale_max) {
    throw InvalidInput("crop scale range must be a sub-interval of (0, 1]");
  }
  if (reg_weight < 0.0) throw InvalidInput("regularizer weight must be nonnegative");
}

double sample_lambda(double beta_alpha, RandomStream& rng) {
  if (beta_alpha <= 0.0) throw InvalidInput("beta parameter must be positive");
  return rng.beta(beta_alpha, beta_alpha);
}

Sample vanilla_mixup(const Sample& a, const Sample& b, double lambda) {
  require_aligned(a, b);
  if (lambda < 0.0 || lambda > 1.0) throw InvalidInput("lambda must lie in [0, 1]");

  Sample out;
  out.image = Image(a.image.width, a.image.height);
  for (std::size_t i = 0; i < out.image.data.size(); ++i) {
    out.image.data[i] = lambda * a.image.data[i] + (1.0 - lambda) * b.image.data[i];
  }
  out.labels.reserve(a.labels.size());
  for (std::size_t n = 0; n < a.labels.size(); ++n) {
    out.labels.push_back(blend_maps(a.labels[n], b.labels[n], lambda));
  }
  if (a.attention && b.attention) {
    out.attention = blend_maps(*a.attention, *b.attention, lambda);
  }
  return out;
}

Sample soft_attention_mixup(const Sample& a, const Sample& b, double eps) {
  require_aligned(a, b);
  if (!a.attention || !b.attention) {
    throw MissingAttention("soft attention mixup needs predicted maps on both samples");
  }
  const AttentionMap& sa = *a.attention;
  const AttentionMap& sb = *b.attention;
  if (!sa.same_shape(sb) || sa.width() != a.image.width || sa.height() != a.image.height) {
    throw ShapeError("attention maps do not match the image dimensions");
  }

  const std::size_t pixels = sa.size();
  std::vector<double> weight_a(pixels);
  for (std::size_t i = 0; i < pixels; ++i) {
    weight_a[i] = sa[i] / (sa[i] + sb[i] + eps);
  }

  Sample out;
  out.image = Image(a.image.width, a.image.height);
  for (std::size_t i = 0; i < pixels; ++i) {
    const double wa = weight_a[i];
    const double wb = 1.0 - wa;
    for (int c = 0; c < 3; ++c) {
      out.image.data[i * 3 + c] = wa * a.image.data[i * 3 + c] + wb * b.image.data[i * 3 + c];
    }
  }

  auto weighted = [&](const AttentionMap& ma, const AttentionMap& mb) {
    RawMap raw(ma.width(), ma.height());
    for (std::size_t i = 0; i < pixels; ++i) {
      raw.values[i] = weight_a[i] * ma[i] + (1.0 - weight_a[i]) * mb[i];
    }
    return normalize_sum(raw);
  };
  out.labels.reserve(a.labels.size());
  for (std::size_t n = 0; n < a.labels.size(); ++n) {
    out.labels.push_back(weighted(a.labels[n], b.labels[n]));
  }
  out.attention = weighted(sa, sb);
  return out;
}

std::vector<std::size_t> select_candidates(std::span<const Sample> batch,
                                           const AttentionMap& average_attention,
                                           double top_k_fraction) {
  if (batch.empty()) throw InvalidInput("candidate selection over an empty batch");
  if (top_k_fraction <= 0.0 || top_k_fraction > 1.0) {
    throw InvalidInput("top-K fraction must lie in (0, 1]");
  }
  std::vector<double> divergence(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    if (!batch[i].attention) {
      throw MissingAttention("candidate selection needs predicted maps");
    }
    divergence[i] = kl_divergence(*batch[i].attention, average_attention);
  }
  std::vector<std::size_t> order(batch.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return divergence[a] > divergence[b];
  });
  const auto take = static_cast<std::size_t>(
      std::ceil(top_k_fraction * static_cast<double>(batch.size())));
  order.resize(std::min(take, batch.size()));
  return order;
}

Sample random_crop(const Sample& sample, double scale_min, double scale_max, RandomStream& rng) {
  if (scale_min <= 0.0 || scale_max > 1.0 || scale_min > scale_max) {
    throw InvalidInput("crop scale range must be a sub-interval of (0, 1]");
  }
  const int width = sample.image.width;
  const int height = sample.image.height;

  for (int attempt = 0; attempt < 8; ++attempt) {
    const int crop_w = std::max(1, static_cast<int>(std::lround(rng.uniform(scale_min, scale_max) * width)));
    const int crop_h = std::max(1, static_cast<int>(std::lround(rng.uniform(scale_min, scale_max) * height)));
    const int x0 = static_cast<int>(rng.uniform_int(0, width - crop_w));
    const int y0 = static_cast<int>(rng.uniform_int(0, height - crop_h));
    if (crop_w == width && crop_h == height) return sample;  // full frame

    auto crop_map = [&](const AttentionMap& map) -> std::optional<AttentionMap> {
      RawMap raw(crop_w, crop_h);
      for (int y = 0; y < crop_h; ++y) {
        for (int x = 0; x < crop_w; ++x) raw.at(x, y) = map.at(x0 + x, y0 + y);
      }
      try {
        return resize_map(normalize_sum(raw), map.width(), map.height());
      } catch (const DegenerateMap&) {
        return std::nullopt;  // crop removed all label mass
      }
    };

    Sample out;
    bool degenerate = false;
    for (const AttentionMap& label : sample.labels) {
      auto cropped = crop_map(label);
      if (!cropped) {
        degenerate = true;
        break;
      }
      out.labels.push_back(std::move(*cropped));
    }
    if (degenerate) continue;
    if (sample.attention) {
      auto cropped = crop_map(*sample.attention);
      if (!cropped) continue;
      out.attention = std::move(*cropped);
    }

    Image window(crop_w, crop_h);
    for (int y = 0; y < crop_h; ++y) {
      for (int x = 0; x < crop_w; ++x) {
        for (int c = 0; c < 3; ++c) window.at(x, y, c) = sample.image.at(x0 + x, y0 + y, c);
      }
    }
    out.image = resize_image(window, width, height);
    return out;
  }
  return sample;  // retries exhausted
}

std::vector<Sample> corruption_robust_batch(const std::vector<Sample>& batch,
                                            const MixPolicy& policy, RandomStream& rng) {
  policy.validate();
  if (batch.empty()) throw InvalidInput("augmentation over an empty batch");

  std::vector<AttentionMap> predictions;
  predictions.reserve(batch.size());
  for (const Sample& sample : batch) {
    if (!sample.attention) throw MissingAttention("batch augmentation needs predicted maps");
    predictions.push_back(*sample.attention);
  }
  const AttentionMap average = mean_map(predictions);

  const std::vector<std::size_t> candidates =
      select_candidates(batch, average, policy.top_k_fraction);

  std::vector<Sample> out = batch;
  out.reserve(batch.size() + candidates.size());
  for (std::size_t idx : candidates) {
    std::size_t partner = idx;
    if (batch.size() > 1) {
      partner = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(batch.size()) - 2));
      if (partner >= idx) ++partner;  // uniform over the batch excluding self
    }
    out.push_back(soft_attention_mixup(batch[idx], batch[partner]));
  }
  return out;
}

double central_bias_loss(const CentralBiasTerms& terms, double reg_weight) {
  if (reg_weight < 0.0) throw InvalidInput("regularizer weight must be nonnegative");
  return terms.random_crop + terms.original +
         reg_weight * (terms.random_crop_mixup + terms.original_mixup);
}

}  // namespace attnkit
