#include "attnkit/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <nlohmann/json.hpp>

namespace attnkit {

namespace {

using nlohmann::json;

void require_comparable(const DegradationVector& model, const DegradationVector& reference) {
  if (model.metric != reference.metric) {
    throw InvalidInput("degradation vectors use different metrics");
  }
  if (model.per_corruption.size() != reference.per_corruption.size()) {
    throw ShapeError("degradation vectors cover different corruption sets");
  }
  if (model.per_corruption.empty()) {
    throw InvalidInput("degradation vector is empty");
  }
}

double sum(const std::vector<double>& values) {
  double acc = 0.0;
  for (double v : values) acc += v;
  return acc;
}

std::string format_cell(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.3f", value);
  return buffer;
}

}  // namespace

double degradation(double value, MetricKind kind) {
  switch (kind) {
    case MetricKind::kKld:
      if (value < 0.0) throw InvalidInput("KLD degradation input must be nonnegative");
      return value;
    case MetricKind::kCc:
      if (value < -1.0 || value > 1.0) throw InvalidInput("CC must lie in [-1, 1]");
      return 1.0 - value;
  }
  throw InvalidInput("unknown metric kind");
}

double mcd(const DegradationVector& model, const DegradationVector& reference) {
  require_comparable(model, reference);
  const double ref_sum = sum(reference.per_corruption);
  if (ref_sum == 0.0) throw DegenerateReference("reference degradations sum to zero");
  return sum(model.per_corruption) / ref_sum;
}

double relative_mcd(const DegradationVector& model, const DegradationVector& reference) {
  require_comparable(model, reference);
  const auto gap_sum = [](const DegradationVector& v) {
    double acc = 0.0;
    for (double d : v.per_corruption) acc += d - v.clean;
    return acc;
  };
  const double ref_gap = gap_sum(reference);
  if (std::abs(ref_gap) < 1e-12) {
    throw DegenerateReference("reference corruption gap sums to zero");
  }
  return gap_sum(model) / ref_gap;
}

const ModelMetrics& BenchmarkTable::find(const std::string& name) const {
  for (const ModelMetrics& model : models) {
    if (model.name == name) return model;
  }
  throw InvalidInput("model not present in benchmark table: " + name);
}

DegradationVector degradation_vector(const ModelMetrics& model, MetricKind metric) {
  DegradationVector vec;
  vec.metric = metric;
  const auto pick = [&](const MetricPair& pair) {
    return metric == MetricKind::kKld ? pair.kld : pair.cc;
  };
  vec.clean = degradation(pick(model.clean), metric);
  vec.per_corruption.reserve(model.corruptions.size());
  for (const auto& [kind, pair] : model.corruptions) {
    vec.per_corruption.push_back(degradation(pick(pair), metric));
  }
  return vec;
}

BenchReport compute_bench(const BenchmarkTable& table, const std::string& reference) {
  const ModelMetrics& ref = table.find(reference);
  for (const ModelMetrics& model : table.models) {
    if (model.corruptions.empty()) {
      throw InvalidInput("model carries no corruption columns: " + model.name);
    }
    if (model.corruptions.size() != ref.corruptions.size()) {
      throw ShapeError("corruption sets differ between models");
    }
    for (const auto& [kind, pair] : model.corruptions) {
      if (ref.corruptions.find(kind) == ref.corruptions.end()) {
        throw ShapeError("corruption sets differ between models");
      }
    }
  }

  BenchReport report;
  report.reference = reference;
  report.models = table.models;
  const DegradationVector ref_kld = degradation_vector(ref, MetricKind::kKld);
  const DegradationVector ref_cc = degradation_vector(ref, MetricKind::kCc);
  for (const ModelMetrics& model : table.models) {
    ModelScores scores;
    scores.name = model.name;
    scores.mcd_kld = mcd(degradation_vector(model, MetricKind::kKld), ref_kld);
    scores.mcd_cc = mcd(degradation_vector(model, MetricKind::kCc), ref_cc);
    scores.relative_mcd_kld = relative_mcd(degradation_vector(model, MetricKind::kKld), ref_kld);
    scores.relative_mcd_cc = relative_mcd(degradation_vector(model, MetricKind::kCc), ref_cc);
    report.scores.push_back(scores);
  }
  return report;
}

PairMetrics evaluate_pairs(std::span<const AttentionMap> predictions,
                           std::span<const AttentionMap> ground_truth) {
  if (predictions.size() != ground_truth.size()) {
    throw ShapeError("prediction and ground-truth lists differ in length");
  }
  if (predictions.empty()) throw InvalidInput("no prediction pairs to evaluate");

  PairMetrics metrics;
  metrics.count = predictions.size();
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const AttentionMap& gt = ground_truth[i];
    const AttentionMap pred = predictions[i].same_shape(gt)
                                  ? predictions[i]
                                  : resize_map(predictions[i], gt.width(), gt.height());
    metrics.mean_kld += kl_divergence(gt, pred);
    metrics.mean_cc += pearson_cc(gt, pred);
  }
  metrics.mean_kld /= static_cast<double>(metrics.count);
  metrics.mean_cc /= static_cast<double>(metrics.count);
  return metrics;
}

BiasSplit central_bias_split(std::span<const AttentionMap> maps, const AttentionMap& average,
                             double delta) {
  if (delta <= 0.0) throw InvalidInput("deviation threshold must be positive");
  BiasSplit split;
  for (std::size_t i = 0; i < maps.size(); ++i) {
    if (kl_divergence(maps[i], average) > delta) {
      split.selected.push_back(i);
    } else {
      split.complement.push_back(i);
    }
  }
  return split;
}

std::string render_report_text(const BenchReport& report) {
  std::ostringstream out;
  out << "Corruption robustness report (reference: " << report.reference << ")\n";
  out << "Metrics are averaged per image, then per corruption kind.\n\n";
  out << "model";
  out << " | clean kld/cc";
  for (CorruptionKind kind : kAllCorruptionKinds) {
    out << " | " << corruption_kind_name(kind);
  }
  out << " | mCD kld/cc | rel-mCD kld/cc\n";
  for (std::size_t m = 0; m < report.models.size(); ++m) {
    const ModelMetrics& model = report.models[m];
    const ModelScores& scores = report.scores[m];
    out << model.name;
    out << " | " << format_cell(model.clean.kld) << "/" << format_cell(model.clean.cc);
    for (CorruptionKind kind : kAllCorruptionKinds) {
      auto it = model.corruptions.find(kind);
      if (it == model.corruptions.end()) {
        out << " | -";
      } else {
        out << " | " << format_cell(it->second.kld) << "/" << format_cell(it->second.cc);
      }
    }
    out << " | " << format_cell(scores.mcd_kld) << "/" << format_cell(scores.mcd_cc);
    out << " | " << format_cell(scores.relative_mcd_kld) << "/"
        << format_cell(scores.relative_mcd_cc);
    out << "\n";
  }
  return out.str();
}

std::string render_report_csv(const BenchReport& report) {
  std::ostringstream out;
  out << "model,metric,clean";
  for (CorruptionKind kind : kAllCorruptionKinds) out << "," << corruption_kind_name(kind);
  out << ",mcd,relative_mcd\n";
  for (std::size_t m = 0; m < report.models.size(); ++m) {
    const ModelMetrics& model = report.models[m];
    const ModelScores& scores = report.scores[m];
    for (MetricKind metric : {MetricKind::kKld, MetricKind::kCc}) {
      const bool is_kld = metric == MetricKind::kKld;
      out << model.name << "," << (is_kld ? "kld" : "cc") << ","
          << (is_kld ? model.clean.kld : model.clean.cc);
      for (CorruptionKind kind : kAllCorruptionKinds) {
        auto it = model.corruptions.find(kind);
        out << ",";
        if (it != model.corruptions.end()) {
          out << (is_kld ? it->second.kld : it->second.cc);
        }
      }
      out << "," << (is_kld ? scores.mcd_kld : scores.mcd_cc) << ","
          << (is_kld ? scores.relative_mcd_kld : scores.relative_mcd_cc) << "\n";
    }
  }
  return out.str();
}

std::string render_report_json(const BenchReport& report) {
  json doc;
  doc["reference"] = report.reference;
  doc["models"] = json::array();
  for (std::size_t m = 0; m < report.models.size(); ++m) {
    const ModelMetrics& model = report.models[m];
    const ModelScores& scores = report.scores[m];
    json entry;
    entry["name"] = model.name;
    entry["clean"] = {{"kld", model.clean.kld}, {"cc", model.clean.cc}};
    json corruptions = json::object();
    for (const auto& [kind, pair] : model.corruptions) {
      corruptions[corruption_kind_name(kind)] = {{"kld", pair.kld}, {"cc", pair.cc}};
    }
    entry["corruptions"] = corruptions;
    entry["mcd"] = {{"kld", scores.mcd_kld}, {"cc", scores.mcd_cc}};
    entry["relative_mcd"] = {{"kld", scores.relative_mcd_kld}, {"cc", scores.relative_mcd_cc}};
    doc["models"].push_back(entry);
  }
  return doc.dump(2) + "\n";
}

}  // namespace attnkit
