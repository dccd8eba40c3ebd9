#include "attnkit/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include <nlohmann/json.hpp>

#include "attnkit/parallel.hpp"
#include "attnkit/rng.hpp"

namespace attnkit {

namespace {

using nlohmann::json;

std::string sanitized(std::string id) {
  for (char& c : id) {
    if (c == '/' || c == '\\' || c == ':') c = '_';
  }
  return id;
}

Sample load_sample(const ManifestRow& row, const std::filesystem::path& base,
                   bool need_attention) {
  Sample sample;
  sample.image = load_image(base / row.image);
  for (const auto& [source, path] : row.maps) {
    sample.labels.push_back(load_map(base / path));
  }
  if (!row.attention.empty()) {
    sample.attention = load_map(base / row.attention);
  } else if (need_attention) {
    throw MissingAttention("manifest row lacks a predicted map: " + row.id);
  }
  return sample;
}

std::vector<std::string> map_sources(const ManifestRow& row) {
  std::vector<std::string> sources;
  for (const auto& [source, path] : row.maps) sources.push_back(source);
  return sources;
}

}  // namespace

CorruptOutcome corrupt_dataset(const std::vector<ManifestRow>& inputs,
                               const std::filesystem::path& input_base,
                               const CorruptOptions& options) {
  if (options.kinds.empty() || options.severities.empty()) {
    throw InvalidInput("corruption run needs at least one kind and one severity");
  }
  for (int severity : options.severities) {
    if (severity < 1 || severity > 5) throw InvalidInput("severity must lie in [1, 5]");
  }
  options.ladders.validate();
  if (options.image_format != "png" && options.image_format != "ppm") {
    throw InvalidInput("corruption output format must be png or ppm");
  }
  std::filesystem::create_directories(options.out_dir);

  struct Task {
    const ManifestRow* input;
    CorruptionKind kind;
    int severity;
  };
  std::vector<Task> tasks;
  for (const ManifestRow& row : inputs) {
    for (CorruptionKind kind : options.kinds) {
      for (int severity : options.severities) {
        tasks.push_back({&row, kind, severity});
      }
    }
  }

  std::vector<ManifestRow> rows(tasks.size());
  parallel_for(tasks.size(), options.workers, [&](std::size_t i) {
    const Task& task = tasks[i];
    const std::string kind_name = corruption_kind_name(task.kind);
    const std::uint64_t seed = derive_seed(options.seed, task.input->id, kind_name,
                                           static_cast<std::uint64_t>(task.severity));
    ManifestRow out;
    out.id = sanitized(task.input->id) + "_" + kind_name + "_s" + std::to_string(task.severity);
    out.source = task.input->image;
    out.kind = kind_name;
    out.severity = task.severity;
    out.seed = seed;
    try {
      const Image image = load_image(input_base / task.input->image);
      const Image corrupted =
          apply_corruption(image, CorruptionSpec{task.kind, task.severity, seed}, options.ladders);
      const std::string filename = out.id + "." + options.image_format;
      save_image(corrupted, options.out_dir / filename);
      out.image = filename;
      out.ok = true;
    } catch (const Error& e) {
      out.ok = false;
      out.error = e.what();
    }
    rows[i] = std::move(out);
  });

  CorruptOutcome outcome;
  outcome.rows = std::move(rows);
  outcome.failures = static_cast<std::size_t>(
      std::count_if(outcome.rows.begin(), outcome.rows.end(),
                    [](const ManifestRow& row) { return row.ok && !*row.ok; }));
  return outcome;
}

AugmentOutcome augment_dataset(const std::vector<ManifestRow>& inputs,
                               const std::filesystem::path& input_base,
                               const AugmentOptions& options) {
  options.policy.validate();
  if (options.batch_size < 1) throw InvalidInput("batch size must be at least 1");
  if (inputs.empty()) throw InvalidInput("augmentation needs a nonempty manifest");
  if (options.image_format != "png" && options.image_format != "ppm") {
    throw InvalidInput("augmentation output format must be png or ppm");
  }
  std::filesystem::create_directories(options.out_dir);

  const std::size_t batch_count =
      (inputs.size() + options.batch_size - 1) / static_cast<std::size_t>(options.batch_size);
  std::vector<std::vector<ManifestRow>> batch_rows(batch_count);

  parallel_for(batch_count, options.workers, [&](std::size_t b) {
    const std::size_t begin = b * static_cast<std::size_t>(options.batch_size);
    const std::size_t end = std::min(begin + options.batch_size, inputs.size());
    const bool soft = options.policy.mode == MixMode::kSoftAttention;

    std::vector<Sample> batch;
    batch.reserve(end - begin);
    for (std::size_t i = begin; i < end; ++i) {
      batch.push_back(load_sample(inputs[i], input_base, soft));
    }
    RandomStream rng(derive_seed(options.seed, "augment", "batch", b));

    struct Generated {
      Sample sample;
      std::string mode;
      std::vector<std::string> parents;
    };
    std::vector<Generated> generated;

    const std::size_t take = static_cast<std::size_t>(
        std::ceil(options.policy.top_k_fraction * static_cast<double>(batch.size())));

    std::vector<std::size_t> candidates;
    if (soft) {
      std::vector<AttentionMap> predictions;
      for (const Sample& sample : batch) predictions.push_back(*sample.attention);
      const AttentionMap average = mean_map(predictions);
      candidates = select_candidates(batch, average, options.policy.top_k_fraction);
      for (std::size_t idx : candidates) {
        std::size_t partner = idx;
        if (batch.size() > 1) {
          partner = static_cast<std::size_t>(
              rng.uniform_int(0, static_cast<std::int64_t>(batch.size()) - 2));
          if (partner >= idx) ++partner;
        }
        generated.push_back({soft_attention_mixup(batch[idx], batch[partner]),
                             "soft",
                             {inputs[begin + idx].id, inputs[begin + partner].id}});
      }
    } else {
      for (std::size_t k = 0; k < take; ++k) {
        const auto i = static_cast<std::size_t>(
            rng.uniform_int(0, static_cast<std::int64_t>(batch.size()) - 1));
        std::size_t j = i;
        if (batch.size() > 1) {
          j = static_cast<std::size_t>(
              rng.uniform_int(0, static_cast<std::int64_t>(batch.size()) - 2));
          if (j >= i) ++j;
        }
        const double lambda = sample_lambda(options.policy.beta_alpha, rng);
        generated.push_back({vanilla_mixup(batch[i], batch[j], lambda),
                             "vanilla",
                             {inputs[begin + i].id, inputs[begin + j].id}});
      }
      candidates.resize(std::min(take, batch.size()));
      for (std::size_t k = 0; k < candidates.size(); ++k) candidates[k] = k;
    }

    if (options.emit_crops) {
      for (std::size_t idx : candidates) {
        generated.push_back({random_crop(batch[idx], options.policy.crop_scale_min,
                                         options.policy.crop_scale_max, rng),
                             "crop",
                             {inputs[begin + idx].id}});
      }
    }

    std::vector<ManifestRow>& out_rows = batch_rows[b];
    for (std::size_t k = 0; k < generated.size(); ++k) {
      const Generated& gen = generated[k];
      const std::string prefix = "b" + std::to_string(b) + "_aug" + std::to_string(k);
      ManifestRow row;
      row.id = prefix;
      row.image = prefix + "." + options.image_format;
      save_image(gen.sample.image, options.out_dir / row.image);

      const std::vector<std::string> sources = map_sources(inputs[begin]);
      for (std::size_t n = 0; n < gen.sample.labels.size(); ++n) {
        const std::string name = prefix + ".map." + sources[n] + ".attn";
        save_map(gen.sample.labels[n], options.out_dir / name);
        row.maps[sources[n]] = name;
      }
      if (gen.sample.attention) {
        row.attention = prefix + ".attention.attn";
        save_map(*gen.sample.attention, options.out_dir / row.attention);
      }
      json parents = json::array();
      for (const std::string& parent : gen.parents) parents.push_back(parent);
      row.extra["augmented_from"] = parents.dump();
      row.extra["mode"] = json(gen.mode).dump();
      out_rows.push_back(std::move(row));
    }
  });

  AugmentOutcome outcome;
  outcome.rows = inputs;
  for (const auto& rows : batch_rows) {
    outcome.rows.insert(outcome.rows.end(), rows.begin(), rows.end());
  }
  return outcome;
}

PairMetrics evaluate_directories(const std::filesystem::path& predictions,
                                 const std::filesystem::path& ground_truth,
                                 const EvalOptions& options) {
  const auto collect = [](const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) {
      throw IoError("not a directory: " + dir.string());
    }
    std::map<std::string, std::filesystem::path> by_stem;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
      if (!entry.is_regular_file()) continue;
      const std::string ext = entry.path().extension().string();
      if (ext != ".attn" && ext != ".png" && ext != ".pgm") continue;
      const std::string stem = entry.path().stem().string();
      auto it = by_stem.find(stem);
      if (it == by_stem.end() || entry.path().filename() < it->second.filename()) {
        by_stem[stem] = entry.path();
      }
    }
    return by_stem;
  };

  const auto pred_files = collect(predictions);
  const auto gt_files = collect(ground_truth);

  std::vector<std::pair<std::filesystem::path, std::filesystem::path>> pairs;
  for (const auto& [stem, pred_path] : pred_files) {
    auto it = gt_files.find(stem);
    if (it != gt_files.end()) pairs.emplace_back(pred_path, it->second);
  }
  if (pairs.empty()) throw InvalidInput("no matching prediction/ground-truth pairs");

  std::vector<double> klds(pairs.size());
  std::vector<double> ccs(pairs.size());
  parallel_for(pairs.size(), options.workers, [&](std::size_t i) {
    const AttentionMap gt = load_map(pairs[i].second, options.normalization);
    AttentionMap pred = load_map(pairs[i].first, options.normalization);
    if (!pred.same_shape(gt)) pred = resize_map(pred, gt.width(), gt.height());
    klds[i] = kl_divergence(gt, pred);
    ccs[i] = pearson_cc(gt, pred);
  });

  PairMetrics metrics;
  metrics.count = pairs.size();
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    metrics.mean_kld += klds[i];
    metrics.mean_cc += ccs[i];
  }
  metrics.mean_kld /= static_cast<double>(metrics.count);
  metrics.mean_cc /= static_cast<double>(metrics.count);
  return metrics;
}

BenchmarkTable load_benchmark_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open benchmark table: " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw IoError("cannot parse benchmark table " + path.string() + ": " + e.what());
  }

  BenchmarkTable table;
  for (const json& entry : doc.at("models")) {
    ModelMetrics model;
    model.name = entry.at("name").get<std::string>();
    model.clean.kld = entry.at("clean").at("kld").get<double>();
    model.clean.cc = entry.at("clean").at("cc").get<double>();
    for (const auto& [kind_name, pair] : entry.at("corruptions").items()) {
      MetricPair metrics;
      metrics.kld = pair.at("kld").get<double>();
      metrics.cc = pair.at("cc").get<double>();
      model.corruptions[corruption_kind_from_name(kind_name)] = metrics;
    }
    table.models.push_back(std::move(model));
  }
  return table;
}

}  // namespace attnkit
