#include "attnkit/knowledge.hpp"

#include <algorithm>
#include <cmath>

namespace attnkit {

std::size_t CategoryStatsAccumulator::bucket_index(const std::string& category) {
  for (std::size_t i = 0; i < order_.size(); ++i) {
    if (order_[i] == category) return i;
  }
  order_.push_back(category);
  buckets_.push_back(Bucket{0, 0.0, order_.size() - 1});
  return order_.size() - 1;
}

void CategoryStatsAccumulator::add_image(const ImageAnnotations& annotations,
                                         const AttentionMap& pseudo_label_mean) {
  for (const Instance& instance : annotations.instances) {
    if (instance.mask.width != pseudo_label_mean.width() ||
        instance.mask.height != pseudo_label_mean.height()) {
      throw ShapeError("instance mask does not match pseudo-label dimensions");
    }
    double inside = 0.0;
    long long pixels = 0;
    for (std::size_t i = 0; i < instance.mask.size(); ++i) {
      if (instance.mask.values[i]) {
        inside += pseudo_label_mean[i];
        ++pixels;
      }
    }
    if (pixels == 0) {
      ++skipped_;
      continue;
    }
    Bucket& bucket = buckets_[bucket_index(instance.category)];
    bucket.count += 1;
    bucket.attention_sum += inside / static_cast<double>(pixels);
  }
}

void CategoryStatsAccumulator::merge(const CategoryStatsAccumulator& other) {
  for (std::size_t i = 0; i < other.order_.size(); ++i) {
    Bucket& bucket = buckets_[bucket_index(other.order_[i])];
    bucket.count += other.buckets_[i].count;
    bucket.attention_sum += other.buckets_[i].attention_sum;
  }
  skipped_ += other.skipped_;
}

CategoryStats CategoryStatsAccumulator::finalize() const {
  CategoryStats stats;
  stats.skipped_empty_instances = skipped_;
  std::vector<std::size_t> idx(order_.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (buckets_[a].count != buckets_[b].count) return buckets_[a].count > buckets_[b].count;
    return buckets_[a].first_seen < buckets_[b].first_seen;
  });
  for (std::size_t i : idx) {
    const Bucket& bucket = buckets_[i];
    const double mean =
        bucket.count > 0 ? bucket.attention_sum / static_cast<double>(bucket.count) : 0.0;
    stats.entries.push_back({order_[i], bucket.count, mean});
  }
  return stats;
}

std::vector<std::string> select_frequent(const CategoryStats& stats, double coverage_percent) {
  if (coverage_percent <= 0.0 || coverage_percent > 100.0) {
    throw InvalidInput("coverage threshold must lie in (0, 100]");
  }
  long long total = 0;
  for (const auto& entry : stats.entries) total += entry.instance_count;
  if (stats.entries.empty() || total <= 0) {
    throw InvalidInput("category statistics are empty");
  }
  const double threshold = coverage_percent / 100.0 * static_cast<double>(total);
  std::vector<std::string> frequent;
  long long cumulative = 0;
  for (const auto& entry : stats.entries) {
    cumulative += entry.instance_count;
    frequent.push_back(entry.category);
    if (static_cast<double>(cumulative) >= threshold - 1e-9) break;
  }
  return frequent;
}

std::vector<std::string> mine_priors(const CategoryStats& stats,
                                     const std::vector<std::string>& frequent, double eta) {
  if (eta <= 0.0 || eta > 1.0) throw InvalidInput("proportion factor must lie in (0, 1]");
  if (frequent.empty()) throw InvalidInput("frequent category set is empty");

  auto in_frequent = [&](const std::string& category) {
    return std::find(frequent.begin(), frequent.end(), category) != frequent.end();
  };

  double attention_sum = 0.0;
  for (const auto& entry : stats.entries) {
    if (in_frequent(entry.category)) attention_sum += entry.mean_attention;
  }
  const double threshold = eta * attention_sum;

  std::vector<std::string> priors;
  for (const auto& entry : stats.entries) {
    if (in_frequent(entry.category) && entry.mean_attention < threshold) {
      priors.push_back(entry.category);
    }
  }
  return priors;
}

BinaryMask build_prior_mask(const ImageAnnotations& annotations,
                            const std::vector<std::string>& priors, int width, int height) {
  BinaryMask mask(width, height, 0);
  for (const Instance& instance : annotations.instances) {
    if (std::find(priors.begin(), priors.end(), instance.category) == priors.end()) continue;
    if (instance.mask.width != width || instance.mask.height != height) {
      throw ShapeError("instance mask does not match the requested mask dimensions");
    }
    for (std::size_t i = 0; i < mask.size(); ++i) {
      mask.values[i] = static_cast<std::uint8_t>(mask.values[i] | (instance.mask.values[i] ? 1 : 0));
    }
  }
  return mask;
}

RawMap embed_premultiplied(const AttentionMap& label, const BinaryMask& prior_mask, double alpha) {
  if (alpha <= 0.0) throw InvalidInput("embedding adjustment must be positive");
  if (prior_mask.width != label.width() || prior_mask.height != label.height()) {
    throw ShapeError("prior mask does not match label dimensions");
  }
  RawMap raw(label.width(), label.height());
  const double in_weight = 1.0 + alpha;
  for (std::size_t i = 0; i < raw.values.size(); ++i) {
    raw.values[i] = label[i] * (prior_mask.values[i] ? in_weight : alpha);
  }
  return raw;
}

AttentionMap embed(const AttentionMap& label, const BinaryMask& prior_mask, double alpha) {
  return normalize_sum(embed_premultiplied(label, prior_mask, alpha));
}

ChannelStack embed_concat(const AttentionMap& label, const BinaryMask& prior_mask) {
  if (prior_mask.width != label.width() || prior_mask.height != label.height()) {
    throw ShapeError("prior mask does not match label dimensions");
  }
  ChannelStack stack;
  stack.width = label.width();
  stack.height = label.height();
  stack.label_channel.assign(label.values().begin(), label.values().end());
  stack.mask_channel.resize(prior_mask.size());
  for (std::size_t i = 0; i < prior_mask.size(); ++i) {
    stack.mask_channel[i] = prior_mask.values[i] ? 1.0 : 0.0;
  }
  return stack;
}

AttentionMap stack_label(const ChannelStack& stack) {
  return AttentionMap::from_distribution(stack.width, stack.height, stack.label_channel);
}

BinaryMask stack_mask(const ChannelStack& stack) {
  BinaryMask mask(stack.width, stack.height);
  for (std::size_t i = 0; i < mask.size(); ++i) {
    mask.values[i] = stack.mask_channel[i] != 0.0 ? 1 : 0;
  }
  return mask;
}

}  // namespace attnkit
