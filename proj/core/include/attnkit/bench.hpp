#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "attnkit/attention_map.hpp"
#include "attnkit/corruption.hpp"

namespace attnkit {

enum class MetricKind { kKld, kCc };

/// Error attributable to a metric value: KLD itself, or 1 - CC.
double degradation(double value, MetricKind kind);

/// Degradations for one model over a fixed corruption set, plus the clean
/// baseline. Entries are aligned with the corruption set they were built from.
struct DegradationVector {
  std::vector<double> per_corruption;
  double clean = 0.0;
  MetricKind metric = MetricKind::kKld;
};

/// Ratio of summed degradations against the reference model.
double mcd(const DegradationVector& model, const DegradationVector& reference);

/// Ratio of summed corruption-minus-clean degradations against the reference.
double relative_mcd(const DegradationVector& model, const DegradationVector& reference);

struct MetricPair {
  double kld = 0.0;
  double cc = 0.0;
};

/// Clean and per-corruption metric values for one model.
struct ModelMetrics {
  std::string name;
  MetricPair clean;
  std::map<CorruptionKind, MetricPair> corruptions;
};

struct BenchmarkTable {
  std::vector<ModelMetrics> models;

  const ModelMetrics& find(const std::string& name) const;
};

DegradationVector degradation_vector(const ModelMetrics& model, MetricKind metric);

/// Aggregate scores of one model against the reference.
struct ModelScores {
  std::string name;
  double mcd_kld = 0.0;
  double mcd_cc = 0.0;
  double relative_mcd_kld = 0.0;
  double relative_mcd_cc = 0.0;
};

struct BenchReport {
  std::string reference;
  std::vector<ModelMetrics> models;
  std::vector<ModelScores> scores;  ///< one entry per model, reference included
};

BenchReport compute_bench(const BenchmarkTable& table, const std::string& reference);

/// Mean KLD / CC over aligned prediction and ground-truth lists. KLD is
/// oriented KL(ground truth || prediction); predictions are resampled to the
/// ground-truth resolution when they differ.
struct PairMetrics {
  double mean_kld = 0.0;
  double mean_cc = 0.0;
  std::size_t count = 0;
};

PairMetrics evaluate_pairs(std::span<const AttentionMap> predictions,
                           std::span<const AttentionMap> ground_truth);

/// Deviation-threshold split: maps whose KL(map || average) exceeds delta.
struct BiasSplit {
  std::vector<std::size_t> selected;
  std::vector<std::size_t> complement;
};

BiasSplit central_bias_split(std::span<const AttentionMap> maps, const AttentionMap& average,
                             double delta);

/// Plain-text, CSV, and JSON renderings of a benchmark report.
std::string render_report_text(const BenchReport& report);
std::string render_report_csv(const BenchReport& report);
std::string render_report_json(const BenchReport& report);

}  // namespace attnkit
