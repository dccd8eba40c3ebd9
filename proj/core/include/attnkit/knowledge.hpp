#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "attnkit/attention_map.hpp"

namespace attnkit {

/// Binary segmentation grid, 0/1 per pixel, row-major.
struct BinaryMask {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> values;

  BinaryMask() = default;
  BinaryMask(int w, int h, std::uint8_t fill = 0)
      : width(w), height(h), values(static_cast<std::size_t>(w) * h, fill) {}

  std::size_t size() const { return values.size(); }
  std::uint8_t at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
  std::uint8_t& at(int x, int y) { return values[static_cast<std::size_t>(y) * width + x]; }
};

/// One segmented object instance.
struct Instance {
  std::string category;
  BinaryMask mask;
};

/// All instances segmented in one image.
struct ImageAnnotations {
  std::vector<Instance> instances;
};

/// Per-category instance counts and mean pseudo-label attention, sorted by
/// count descending (ties keep first-appearance order).
struct CategoryStats {
  struct Entry {
    std::string category;
    long long instance_count = 0;
    double mean_attention = 0.0;
  };
  std::vector<Entry> entries;
  long long skipped_empty_instances = 0;
};

/// Streaming accumulator for CategoryStats; merges associatively so image
/// batches can be processed in parallel and combined in input order.
class CategoryStatsAccumulator {
 public:
  /// Folds one image in: each instance contributes the mean of mu_p inside
  /// its mask. Empty masks are skipped and counted.
  void add_image(const ImageAnnotations& annotations, const AttentionMap& pseudo_label_mean);

  void merge(const CategoryStatsAccumulator& other);

  CategoryStats finalize() const;

 private:
  struct Bucket {
    long long count = 0;
    double attention_sum = 0.0;
    std::size_t first_seen = 0;
  };
  std::vector<std::string> order_;
  std::vector<Bucket> buckets_;
  long long skipped_ = 0;

  std::size_t bucket_index(const std::string& category);
};

/// Smallest count-descending prefix whose cumulative instance count reaches
/// coverage_percent of the total. coverage_percent in (0, 100].
std::vector<std::string> select_frequent(const CategoryStats& stats, double coverage_percent);

/// Among the frequent categories, those whose mean attention falls below
/// eta times the frequent set's summed mean attention. eta in (0, 1].
std::vector<std::string> mine_priors(const CategoryStats& stats,
                                     const std::vector<std::string>& frequent, double eta);

/// Pixel-wise OR of the instance masks whose category is in the prior set.
BinaryMask build_prior_mask(const ImageAnnotations& annotations,
                            const std::vector<std::string>& priors, int width, int height);

/// Pre-normalization embedding product: label * (mask + alpha) per pixel.
/// In-mask pixels scale by exactly (1 + alpha), the rest by exactly alpha.
RawMap embed_premultiplied(const AttentionMap& label, const BinaryMask& prior_mask, double alpha);

/// Knowledge embedding: amplify label mass inside the prior mask, then
/// renormalize to unit mass.
AttentionMap embed(const AttentionMap& label, const BinaryMask& prior_mask, double alpha);

/// Channel-stacked alternative to the multiplicative embedding: channel 0 is
/// the label, channel 1 the mask, neither altered.
struct ChannelStack {
  int width = 0;
  int height = 0;
  std::vector<double> label_channel;
  std::vector<double> mask_channel;
};

ChannelStack embed_concat(const AttentionMap& label, const BinaryMask& prior_mask);

/// Recover the stacked inputs; exact round trip.
AttentionMap stack_label(const ChannelStack& stack);
BinaryMask stack_mask(const ChannelStack& stack);

}  // namespace attnkit
