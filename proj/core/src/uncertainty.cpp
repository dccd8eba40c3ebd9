#include "attnkit/uncertainty.hpp"

#include <algorithm>
#include <cmath>

namespace attnkit {

namespace {

void require_problem_shapes(const PseudoLabelSet& labels, const UncertaintyState& state) {
  if (labels.empty()) throw InvalidInput("pseudo-label set is empty");
  if (labels.size() != state.size()) {
    throw ShapeError("label count does not match log-variance count");
  }
  for (const AttentionMap& label : labels) {
    if (!label.same_shape(labels.front())) {
      throw ShapeError("pseudo-labels have mismatched dimensions");
    }
  }
  for (double e : state.log_variances) {
    if (!std::isfinite(e)) throw InvalidInput("log-variance is not finite");
  }
}

}  // namespace

UncertaintyLoss uncertainty_loss(const AttentionMap& fused, const PseudoLabelSet& labels,
                                 const UncertaintyState& state, double eps) {
  require_problem_shapes(labels, state);
  if (!fused.same_shape(labels.front())) {
    throw ShapeError("fused map does not match label dimensions");
  }
  UncertaintyLoss loss;
  loss.kld.reserve(labels.size());
  loss.terms.reserve(labels.size());
  for (std::size_t n = 0; n < labels.size(); ++n) {
    const double kld = kl_divergence(labels[n], fused, eps);
    const double e = state.log_variances[n];
    const double term = kld * std::exp(-e) + 0.5 * e;
    loss.kld.push_back(kld);
    loss.terms.push_back(term);
    loss.total += term;
  }
  return loss;
}

UncertaintyGradient loss_gradient(const RawMap& fused_logits, const PseudoLabelSet& labels,
                                  const UncertaintyState& state) {
  require_problem_shapes(labels, state);
  const AttentionMap fused = normalize_softmax(fused_logits);
  if (!fused.same_shape(labels.front())) {
    throw ShapeError("logit grid does not match label dimensions");
  }

  UncertaintyGradient grad;
  grad.logit_gradient = RawMap(fused_logits.width, fused_logits.height);
  grad.log_variance_gradient.resize(labels.size());

  for (std::size_t n = 0; n < labels.size(); ++n) {
    const double weight = std::exp(-state.log_variances[n]);
    const AttentionMap& label = labels[n];
    for (std::size_t i = 0; i < fused.size(); ++i) {
      grad.logit_gradient.values[i] += weight * (fused[i] - label[i]);
    }
    grad.log_variance_gradient[n] = -kl_divergence(label, fused) * weight + 0.5;
  }
  return grad;
}

AttentionMap optimal_fusion(const PseudoLabelSet& labels, const UncertaintyState& state) {
  require_problem_shapes(labels, state);
  const AttentionMap& first = labels.front();
  std::vector<double> acc(first.size(), 0.0);
  double weight_sum = 0.0;
  for (std::size_t n = 0; n < labels.size(); ++n) {
    const double w = std::exp(-state.log_variances[n]);
    weight_sum += w;
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += w * labels[n][i];
  }
  for (double& v : acc) v /= weight_sum;
  return AttentionMap::from_distribution(first.width(), first.height(), std::move(acc));
}

double optimal_log_variance(double kld) {
  if (kld <= 0.0) {
    throw DegenerateUncertainty("log-variance optimum is unbounded below for zero divergence");
  }
  return std::log(2.0 * kld);
}

FusionProblem FusionProblem::from_labels(PseudoLabelSet labels) {
  FusionProblem problem;
  problem.initial_state = UncertaintyState::zeros(labels.size());
  problem.labels = std::move(labels);
  return problem;
}

FusionResult fit_fusion(const FusionProblem& problem) {
  require_problem_shapes(problem.labels, problem.initial_state);
  const OptimizerSettings& opt = problem.settings;
  if (opt.logit_step <= 0.0 || opt.log_variance_step <= 0.0 || opt.max_iterations < 1) {
    throw InvalidInput("optimizer settings out of range");
  }

  const AttentionMap& first = problem.labels.front();
  RawMap logits = problem.initial_logits
                      ? *problem.initial_logits
                      : RawMap(first.width(), first.height());
  if (logits.width != first.width() || logits.height != first.height()) {
    throw ShapeError("initial logits do not match label dimensions");
  }
  UncertaintyState state = problem.initial_state;

  double loss = uncertainty_loss(normalize_softmax(logits), problem.labels, state).total;
  if (!std::isfinite(loss)) throw OptimizerDiverged("initial loss is not finite");

  int iterations = 0;
  for (int it = 0; it < opt.max_iterations; ++it) {
    const UncertaintyGradient grad = loss_gradient(logits, problem.labels, state);
    double norm_sq = 0.0;
    for (double g : grad.logit_gradient.values) norm_sq += g * g;
    if (!problem.freeze_log_variances) {
      for (double g : grad.log_variance_gradient) norm_sq += g * g;
    }
    if (std::sqrt(norm_sq) < opt.gradient_tolerance) break;

    // Backtracking: halve the step scale until the loss stops increasing.
    bool accepted = false;
    double scale = 1.0;
    RawMap next_logits = logits;
    UncertaintyState next_state = state;
    for (int attempt = 0; attempt < 60; ++attempt) {
      for (std::size_t i = 0; i < logits.values.size(); ++i) {
        next_logits.values[i] = logits.values[i] - scale * opt.logit_step * grad.logit_gradient.values[i];
      }
      if (!problem.freeze_log_variances) {
        for (std::size_t n = 0; n < state.size(); ++n) {
          next_state.log_variances[n] =
              state.log_variances[n] - scale * opt.log_variance_step * grad.log_variance_gradient[n];
        }
      }
      const double next_loss =
          uncertainty_loss(normalize_softmax(next_logits), problem.labels, next_state).total;
      if (std::isfinite(next_loss) && next_loss <= loss) {
        logits = next_logits;
        state = next_state;
        loss = next_loss;
        accepted = true;
        break;
      }
      scale *= 0.5;
    }
    if (!accepted) break;  // no descent direction left at the smallest step
    iterations = it + 1;
    if (problem.iteration_observer) problem.iteration_observer(iterations, loss);
  }

  if (!std::isfinite(loss)) throw OptimizerDiverged("fusion loss left the finite range");
  return FusionResult{normalize_softmax(logits), std::move(state), loss, iterations};
}

CrossEntropyIdentity ce_kld_identity_check(const AttentionMap& fused, const AttentionMap& label,
                                           double eps) {
  if (!fused.same_shape(label)) throw ShapeError("maps have mismatched dimensions");
  double ce = 0.0;
  for (std::size_t i = 0; i < label.size(); ++i) {
    if (label[i] > 0.0) ce -= label[i] * std::log(std::max(fused[i], eps));
  }
  return CrossEntropyIdentity{ce, kl_divergence(label, fused, eps) + entropy(label)};
}

}  // namespace attnkit
