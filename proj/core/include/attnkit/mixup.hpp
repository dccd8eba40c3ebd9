#pragma once

#include <optional>
#include <vector>

#include "attnkit/attention_map.hpp"
#include "attnkit/image.hpp"
#include "attnkit/rng.hpp"
#include "attnkit/uncertainty.hpp"

namespace attnkit {

/// One training sample: image, its pseudo-labels, and (optionally) the
/// predicted attention map the soft variants need.
struct Sample {
  Image image;
  PseudoLabelSet labels;
  std::optional<AttentionMap> attention;
};

enum class MixMode { kVanilla, kSoftAttention };

struct MixPolicy {
  MixMode mode = MixMode::kSoftAttention;
  double beta_alpha = 10.0;      ///< Beta(a, a) parameter for vanilla lambda
  double top_k_fraction = 0.125; ///< fraction of each batch selected for augmentation
  double crop_scale_min = 0.5;
  double crop_scale_max = 1.0;
  double reg_weight = 1.0;       ///< weight on the mixup terms of the composed loss

  void validate() const;
};

/// Beta(alpha, alpha) draw; deterministic given the stream state.
double sample_lambda(double beta_alpha, RandomStream& rng);

/// Global-transparency blend of two samples: lambda * a + (1 - lambda) * b
/// on the image and on every label map.
Sample vanilla_mixup(const Sample& a, const Sample& b, double lambda);

/// Per-pixel blend weighted by the samples' predicted attention:
/// w_a = S_a / (S_a + S_b + eps), w_b = 1 - w_a. Labels and the blended
/// attention map are renormalized.
Sample soft_attention_mixup(const Sample& a, const Sample& b, double eps = kLogFloor);

/// Indices of the ceil(top_k_fraction * batch) samples with the largest
/// KL(S_i || S_avg); ties break toward the lower index.
std::vector<std::size_t> select_candidates(std::span<const Sample> batch,
                                           const AttentionMap& average_attention,
                                           double top_k_fraction);

/// Random crop with per-axis scale drawn from [scale_min, scale_max], applied
/// identically to the image and every map, then resized back to the original
/// frame. Crops that strip all label mass are redrawn (up to 8 times, then
/// the full frame is kept).
Sample random_crop(const Sample& sample, double scale_min, double scale_max, RandomStream& rng);

/// Corruption-robustness augmentation: the top-K candidates of the batch are
/// soft-attention-mixed with random partners and appended to the originals.
std::vector<Sample> corruption_robust_batch(const std::vector<Sample>& batch,
                                            const MixPolicy& policy, RandomStream& rng);

/// The four uncertainty-loss evaluations the central-bias regularizer
/// combines.
struct CentralBiasTerms {
  double random_crop = 0.0;        ///< loss on the cropped data
  double original = 0.0;           ///< loss on the untouched data
  double random_crop_mixup = 0.0;  ///< loss on mixups of the cropped data
  double original_mixup = 0.0;     ///< loss on mixups of the original data
};

/// random_crop + original + reg_weight * (random_crop_mixup + original_mixup).
double central_bias_loss(const CentralBiasTerms& terms, double reg_weight = 1.0);

}  // namespace attnkit
