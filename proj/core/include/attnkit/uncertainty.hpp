#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "attnkit/attention_map.hpp"

namespace attnkit {

/// Aligned attention maps from distinct source models.
using PseudoLabelSet = std::vector<AttentionMap>;

/// One log-variance e_n = log(u_n^2) per pseudo-label source. Larger values
/// down-weight the source.
struct UncertaintyState {
  std::vector<double> log_variances;

  std::size_t size() const { return log_variances.size(); }
  static UncertaintyState zeros(std::size_t n) { return {std::vector<double>(n, 0.0)}; }
};

/// sum_n [ KL(label_n || S) * exp(-e_n) + e_n / 2 ], with the per-source
/// pieces kept for inspection.
struct UncertaintyLoss {
  double total = 0.0;
  std::vector<double> kld;    ///< KL(label_n || S)
  std::vector<double> terms;  ///< weighted KLD plus the log-variance penalty
};

UncertaintyLoss uncertainty_loss(const AttentionMap& fused, const PseudoLabelSet& labels,
                                 const UncertaintyState& state, double eps = kLogFloor);

/// Gradients of the uncertainty loss with the fused map parameterized as
/// softmax(logits):
///   d/d logit_i = sum_n exp(-e_n) * (S_i - label_{n,i})
///   d/d e_n     = -KL_n * exp(-e_n) + 1/2
struct UncertaintyGradient {
  RawMap logit_gradient;
  std::vector<double> log_variance_gradient;
};

UncertaintyGradient loss_gradient(const RawMap& fused_logits, const PseudoLabelSet& labels,
                                  const UncertaintyState& state);

/// Closed-form minimizer over the fused map: the exp(-e_n)-weighted
/// arithmetic mean of the labels.
AttentionMap optimal_fusion(const PseudoLabelSet& labels, const UncertaintyState& state);

/// Closed-form minimizer over one log-variance: log(2 * kld). Throws
/// DegenerateUncertainty for kld <= 0 (the optimum runs to -infinity).
double optimal_log_variance(double kld);

struct OptimizerSettings {
  double logit_step = 0.5;
  double log_variance_step = 0.1;
  int max_iterations = 500;
  double gradient_tolerance = 1e-6;
};

struct FusionProblem {
  PseudoLabelSet labels;
  UncertaintyState initial_state;
  OptimizerSettings settings;
  bool freeze_log_variances = false;
  std::optional<RawMap> initial_logits;  ///< defaults to all-zero (uniform map)

  /// Called with (iteration, loss) after every accepted step.
  std::function<void(int, double)> iteration_observer;

  static FusionProblem from_labels(PseudoLabelSet labels);
};

struct FusionResult {
  AttentionMap fused;
  UncertaintyState state;
  double final_loss = 0.0;
  int iterations = 0;
};

/// Joint gradient descent on (logits, log-variances) with backtracking step
/// halving; the loss sequence is non-increasing. Throws OptimizerDiverged if
/// the loss leaves the finite range.
FusionResult fit_fusion(const FusionProblem& problem);

/// Both sides of the cross-entropy identity
///   CE(S, label) = KL(label || S) + H(label),
/// evaluated independently so callers can assert it.
struct CrossEntropyIdentity {
  double cross_entropy = 0.0;
  double kld_plus_entropy = 0.0;
};

CrossEntropyIdentity ce_kld_identity_check(const AttentionMap& fused, const AttentionMap& label,
                                           double eps = kLogFloor);

}  // namespace attnkit
