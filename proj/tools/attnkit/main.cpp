// attnkit: attention-map robustness toolkit.
//
// Subcommands: fuse, mine, embed, augment, corrupt, eval, bench, bias-split.
// Exit codes: 0 success, 1 validation error, 2 I/O error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "attnkit/bench.hpp"
#include "attnkit/config.hpp"
#include "attnkit/io.hpp"
#include "attnkit/knowledge.hpp"
#include "attnkit/pipeline.hpp"
#include "attnkit/rng.hpp"
#include "attnkit/uncertainty.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct GlobalArgs {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  int workers = 1;
};

attnkit::Config load_config(const GlobalArgs& args) {
  attnkit::Config config;
  if (!args.config_path.empty()) {
    config = attnkit::Config::load(args.config_path);
  }
  if (args.seed) config.seed = *args.seed;
  config.validate();
  return config;
}

void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw attnkit::IoError("cannot open file for writing: " + path.string());
  out << text;
  if (!out.good()) throw attnkit::IoError("failed while writing " + path.string());
}

void emit_json(const json& doc, const std::string& out_path) {
  const std::string text = doc.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    write_text_file(out_path, text);
  }
}

// ---- fuse ------------------------------------------------------------------

struct FuseArgs {
  std::vector<std::string> map_paths;
  std::vector<double> fixed_log_variances;
  std::string out_path;
  std::string json_path;
  std::optional<int> iterations;
};

int run_fuse(const GlobalArgs& global, const FuseArgs& args) {
  const attnkit::Config config = load_config(global);

  attnkit::PseudoLabelSet labels;
  for (const std::string& path : args.map_paths) {
    labels.push_back(attnkit::load_map(path));
  }

  attnkit::FusionProblem problem = attnkit::FusionProblem::from_labels(std::move(labels));
  problem.settings = config.optimizer;
  if (args.iterations) problem.settings.max_iterations = *args.iterations;
  if (!args.fixed_log_variances.empty()) {
    if (args.fixed_log_variances.size() != problem.labels.size()) {
      throw attnkit::InvalidInput("--fixed-e must list one value per map");
    }
    problem.initial_state.log_variances = args.fixed_log_variances;
    problem.freeze_log_variances = true;
  }

  const attnkit::FusionResult result = attnkit::fit_fusion(problem);
  attnkit::save_map(result.fused, args.out_path);

  const attnkit::UncertaintyLoss loss =
      attnkit::uncertainty_loss(result.fused, problem.labels, result.state);
  json doc;
  doc["final_loss"] = result.final_loss;
  doc["e"] = result.state.log_variances;
  doc["kld"] = loss.kld;
  doc["iterations"] = result.iterations;
  emit_json(doc, args.json_path);
  return 0;
}

// ---- mine ------------------------------------------------------------------

struct MineArgs {
  std::string instances_path;
  std::string masks_dir;
  std::string manifest_path;
  std::optional<double> coverage_percent;
  std::optional<double> eta;
  std::string out_path;
  std::string masks_out_dir;
};

attnkit::InstanceAnnotationFile load_masks_dir(const fs::path& dir) {
  // Layout: <dir>/<image_id>/<category>_<index>.png (or .pgm), one file per
  // instance.
  attnkit::InstanceAnnotationFile file;
  if (!fs::is_directory(dir)) throw attnkit::IoError("not a directory: " + dir.string());
  std::vector<fs::path> image_dirs;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_directory()) image_dirs.push_back(entry.path());
  }
  std::sort(image_dirs.begin(), image_dirs.end());
  for (const fs::path& image_dir : image_dirs) {
    attnkit::InstanceAnnotationFile::Entry entry;
    entry.image_id = image_dir.filename().string();
    std::vector<fs::path> mask_files;
    for (const auto& f : fs::directory_iterator(image_dir)) {
      const std::string ext = f.path().extension().string();
      if (f.is_regular_file() && (ext == ".png" || ext == ".pgm")) mask_files.push_back(f.path());
    }
    std::sort(mask_files.begin(), mask_files.end());
    for (const fs::path& mask_file : mask_files) {
      attnkit::Instance instance;
      const std::string stem = mask_file.stem().string();
      const std::size_t sep = stem.rfind('_');
      instance.category = sep == std::string::npos ? stem : stem.substr(0, sep);
      instance.mask = attnkit::load_mask(mask_file);
      if (entry.instances.empty()) {
        entry.width = instance.mask.width;
        entry.height = instance.mask.height;
      }
      entry.instances.push_back(std::move(instance));
    }
    if (!entry.instances.empty()) file.entries.push_back(std::move(entry));
  }
  return file;
}

int run_mine(const GlobalArgs& global, const MineArgs& args) {
  const attnkit::Config config = load_config(global);
  const double coverage = args.coverage_percent.value_or(config.coverage_percent);
  const double eta = args.eta.value_or(config.mining_eta);

  attnkit::InstanceAnnotationFile annotations;
  if (!args.instances_path.empty()) {
    annotations = attnkit::load_instance_annotations(args.instances_path);
  } else if (!args.masks_dir.empty()) {
    annotations = load_masks_dir(args.masks_dir);
  } else {
    throw attnkit::InvalidInput("mine needs --instances or --masks-dir");
  }

  // Pseudo-label mean per image comes from the manifest's map set.
  const std::vector<attnkit::ManifestRow> rows = attnkit::load_manifest(args.manifest_path);
  const fs::path base = fs::path(args.manifest_path).parent_path();

  attnkit::CategoryStatsAccumulator accumulator;
  for (const auto& entry : annotations.entries) {
    const attnkit::ManifestRow* row = nullptr;
    for (const attnkit::ManifestRow& candidate : rows) {
      if (candidate.id == entry.image_id) {
        row = &candidate;
        break;
      }
    }
    if (!row) throw attnkit::InvalidInput("manifest has no row for image " + entry.image_id);
    if (row->maps.empty()) {
      throw attnkit::InvalidInput("manifest row has no pseudo-label maps: " + entry.image_id);
    }
    std::vector<attnkit::AttentionMap> maps;
    for (const auto& [source, path] : row->maps) maps.push_back(attnkit::load_map(base / path));
    const attnkit::AttentionMap mean = attnkit::mean_map(maps);

    attnkit::ImageAnnotations image;
    image.instances = entry.instances;
    accumulator.add_image(image, mean);
  }
  const attnkit::CategoryStats stats = accumulator.finalize();
  const std::vector<std::string> frequent = attnkit::select_frequent(stats, coverage);
  const std::vector<std::string> priors = attnkit::mine_priors(stats, frequent, eta);

  json doc;
  doc["coverage_percent"] = coverage;
  doc["eta"] = eta;
  doc["categories"] = json::array();
  for (const auto& entry : stats.entries) {
    doc["categories"].push_back({{"name", entry.category},
                                 {"count", entry.instance_count},
                                 {"mean_attention", entry.mean_attention}});
  }
  doc["frequent"] = frequent;
  doc["priors"] = priors;
  doc["skipped_empty_instances"] = stats.skipped_empty_instances;
  emit_json(doc, args.out_path);

  if (!args.masks_out_dir.empty()) {
    fs::create_directories(args.masks_out_dir);
    for (const auto& entry : annotations.entries) {
      attnkit::ImageAnnotations image;
      image.instances = entry.instances;
      const attnkit::BinaryMask mask =
          attnkit::build_prior_mask(image, priors, entry.width, entry.height);
      attnkit::save_mask(mask, fs::path(args.masks_out_dir) / (entry.image_id + ".png"));
    }
  }
  return 0;
}

// ---- embed -----------------------------------------------------------------

struct EmbedArgs {
  std::string map_path;
  std::string mask_path;
  std::optional<double> alpha;
  std::string out_path;
  bool concat = false;
};

int run_embed(const GlobalArgs& global, const EmbedArgs& args) {
  const attnkit::Config config = load_config(global);
  const double alpha = args.alpha.value_or(config.embed_alpha);
  const attnkit::AttentionMap label = attnkit::load_map(args.map_path);
  const attnkit::BinaryMask mask = attnkit::load_mask(args.mask_path);

  if (args.concat) {
    // Two-channel output: <out>.label.attn and <out>.mask.attn.
    const attnkit::ChannelStack stack = attnkit::embed_concat(label, mask);
    const fs::path prefix(args.out_path);
    attnkit::save_map(attnkit::stack_label(stack), prefix.string() + ".label.attn");
    attnkit::save_mask(attnkit::stack_mask(stack), prefix.string() + ".mask.png");
    return 0;
  }
  attnkit::save_map(attnkit::embed(label, mask, alpha), args.out_path);
  return 0;
}

// ---- augment ---------------------------------------------------------------

struct AugmentArgs {
  std::string manifest_path;
  std::string out_dir;
  std::string out_manifest;
  std::string mode = "soft";
  std::optional<double> top_k;
  std::optional<double> beta_alpha;
  std::optional<double> crop_min;
  std::optional<double> crop_max;
  int batch_size = 8;
  bool no_crops = false;
  std::string format = "png";
};

int run_augment(const GlobalArgs& global, const AugmentArgs& args) {
  const attnkit::Config config = load_config(global);

  attnkit::AugmentOptions options;
  options.policy.mode =
      args.mode == "vanilla" ? attnkit::MixMode::kVanilla : attnkit::MixMode::kSoftAttention;
  options.policy.top_k_fraction = args.top_k.value_or(config.top_k_fraction);
  options.policy.beta_alpha = args.beta_alpha.value_or(config.beta_alpha);
  options.policy.crop_scale_min = args.crop_min.value_or(config.crop_scale_min);
  options.policy.crop_scale_max = args.crop_max.value_or(config.crop_scale_max);
  options.policy.reg_weight = config.reg_weight;
  options.batch_size = args.batch_size;
  options.seed = config.seed;
  options.out_dir = args.out_dir;
  options.image_format = args.format;
  options.workers = global.workers;
  options.emit_crops = !args.no_crops;

  const std::vector<attnkit::ManifestRow> rows = attnkit::load_manifest(args.manifest_path);
  const fs::path base = fs::path(args.manifest_path).parent_path();
  const attnkit::AugmentOutcome outcome = attnkit::augment_dataset(rows, base, options);

  const fs::path manifest_out = args.out_manifest.empty()
                                    ? fs::path(args.out_dir) / "manifest.jsonl"
                                    : fs::path(args.out_manifest);
  attnkit::save_manifest(outcome.rows, manifest_out);
  std::cout << "augmented " << outcome.rows.size() - rows.size() << " samples from " << rows.size()
            << " inputs\n";
  return 0;
}

// ---- corrupt ---------------------------------------------------------------

struct CorruptArgs {
  std::string manifest_path;
  std::string out_dir;
  std::string out_manifest;
  std::vector<std::string> kinds;
  std::vector<int> severities;
  std::string format = "png";
};

int run_corrupt(const GlobalArgs& global, const CorruptArgs& args) {
  const attnkit::Config config = load_config(global);

  attnkit::CorruptOptions options;
  if (!args.kinds.empty()) {
    options.kinds.clear();
    for (const std::string& name : args.kinds) {
      options.kinds.push_back(attnkit::corruption_kind_from_name(name));
    }
  }
  if (!args.severities.empty()) options.severities = args.severities;
  options.seed = config.seed;
  options.out_dir = args.out_dir;
  options.image_format = args.format;
  options.workers = global.workers;
  options.ladders = config.ladders;

  const std::vector<attnkit::ManifestRow> rows = attnkit::load_manifest(args.manifest_path);
  const fs::path base = fs::path(args.manifest_path).parent_path();
  const attnkit::CorruptOutcome outcome = attnkit::corrupt_dataset(rows, base, options);

  const fs::path manifest_out = args.out_manifest.empty()
                                    ? fs::path(args.out_dir) / "manifest.jsonl"
                                    : fs::path(args.out_manifest);
  attnkit::save_manifest(outcome.rows, manifest_out);
  std::cout << "wrote " << outcome.rows.size() - outcome.failures << " corrupted images ("
            << outcome.failures << " failures)\n";
  return 0;
}

// ---- eval ------------------------------------------------------------------

struct EvalArgs {
  std::string pred_dir;
  std::string gt_dir;
  std::string normalization = "sum";
  std::string out_path;
};

int run_eval(const GlobalArgs& global, const EvalArgs& args) {
  load_config(global);  // validates config when one is supplied
  attnkit::EvalOptions options;
  options.normalization = args.normalization == "softmax" ? attnkit::MapNormalization::kSoftmax
                                                          : attnkit::MapNormalization::kSum;
  options.workers = global.workers;
  const attnkit::PairMetrics metrics =
      attnkit::evaluate_directories(args.pred_dir, args.gt_dir, options);

  json doc;
  doc["mean_kld"] = metrics.mean_kld;
  doc["mean_cc"] = metrics.mean_cc;
  doc["count"] = metrics.count;
  emit_json(doc, args.out_path);
  return 0;
}

// ---- bench -----------------------------------------------------------------

struct BenchArgs {
  std::string tables_path;
  std::string reference;
  std::string out_dir;
};

int run_bench(const GlobalArgs& global, const BenchArgs& args) {
  load_config(global);
  const attnkit::BenchmarkTable table = attnkit::load_benchmark_table(args.tables_path);
  const attnkit::BenchReport report = attnkit::compute_bench(table, args.reference);

  std::cout << attnkit::render_report_text(report);
  if (!args.out_dir.empty()) {
    fs::create_directories(args.out_dir);
    write_text_file(fs::path(args.out_dir) / "report.txt", attnkit::render_report_text(report));
    write_text_file(fs::path(args.out_dir) / "report.csv", attnkit::render_report_csv(report));
    write_text_file(fs::path(args.out_dir) / "report.json", attnkit::render_report_json(report));
  }
  return 0;
}

// ---- bias-split ------------------------------------------------------------

struct BiasSplitArgs {
  std::string maps_dir;
  std::vector<double> deltas{2.0, 2.5, 3.0, 3.5, 4.0};
  std::string average = "mean";  // mean | gaussian
  std::string average_map_path;
  double sigma_fraction = 0.25;
  std::string out_dir;
};

int run_bias_split(const GlobalArgs& global, const BiasSplitArgs& args) {
  load_config(global);
  if (!fs::is_directory(args.maps_dir)) {
    throw attnkit::IoError("not a directory: " + args.maps_dir);
  }

  std::vector<std::pair<std::string, fs::path>> files;
  for (const auto& entry : fs::directory_iterator(args.maps_dir)) {
    const std::string ext = entry.path().extension().string();
    if (!entry.is_regular_file() || (ext != ".attn" && ext != ".png" && ext != ".pgm")) continue;
    files.emplace_back(entry.path().stem().string(), entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw attnkit::InvalidInput("no map files found in " + args.maps_dir);

  std::vector<attnkit::AttentionMap> maps;
  for (const auto& [stem, path] : files) maps.push_back(attnkit::load_map(path));

  std::optional<attnkit::AttentionMap> average;
  if (!args.average_map_path.empty()) {
    average = attnkit::load_map(args.average_map_path);
  } else if (args.average == "gaussian") {
    average = attnkit::centered_gaussian(maps.front().width(), maps.front().height(),
                                         args.sigma_fraction);
  } else {
    average = attnkit::mean_map(maps);
  }

  fs::create_directories(args.out_dir);
  for (double delta : args.deltas) {
    const attnkit::BiasSplit split = attnkit::central_bias_split(maps, *average, delta);
    json doc;
    doc["delta"] = delta;
    doc["selected"] = json::array();
    doc["complement"] = json::array();
    for (std::size_t i : split.selected) doc["selected"].push_back(files[i].first);
    for (std::size_t i : split.complement) doc["complement"].push_back(files[i].first);
    char name[64];
    std::snprintf(name, sizeof(name), "split_delta_%.6g.json", delta);
    write_text_file(fs::path(args.out_dir) / name, doc.dump(2) + "\n");
  }
  std::cout << "wrote " << args.deltas.size() << " split files to " << args.out_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"attention-map robustness toolkit"};
  app.require_subcommand(1);

  GlobalArgs global;
  app.add_option("--config", global.config_path, "JSON config file")
      ->envname(attnkit::kConfigEnvVar);
  std::uint64_t seed_value = 0;
  auto* seed_opt = app.add_option("--seed", seed_value, "global random seed");
  app.add_option("--workers", global.workers, "worker threads for manifest commands")
      ->check(CLI::PositiveNumber);

  FuseArgs fuse;
  auto* fuse_cmd = app.add_subcommand("fuse", "fuse pseudo-label maps under the uncertainty loss");
  fuse_cmd->add_option("--map", fuse.map_paths, "pseudo-label map files")->required();
  fuse_cmd->add_option("--fixed-e", fuse.fixed_log_variances,
                       "freeze log-variances at these values");
  fuse_cmd->add_option("--out", fuse.out_path, "fused map output (.attn/.pgm/.png)")->required();
  fuse_cmd->add_option("--json", fuse.json_path, "write the fit summary JSON here");
  int fuse_iterations = 0;
  auto* fuse_iter_opt = fuse_cmd->add_option("--iterations", fuse_iterations,
                                             "override optimizer iteration budget");

  MineArgs mine;
  auto* mine_cmd = app.add_subcommand("mine", "mine prior categories from instance masks");
  mine_cmd->add_option("--instances", mine.instances_path, "RLE instance annotation JSON");
  mine_cmd->add_option("--masks-dir", mine.masks_dir, "per-instance mask files, one dir per image");
  mine_cmd->add_option("--manifest", mine.manifest_path, "manifest with pseudo-label maps")
      ->required();
  double mine_p = 0.0;
  double mine_eta = 0.0;
  auto* mine_p_opt = mine_cmd->add_option("--p", mine_p, "coverage threshold percent");
  auto* mine_eta_opt = mine_cmd->add_option("--eta", mine_eta, "proportion factor");
  mine_cmd->add_option("--out", mine.out_path, "prior-selection JSON output");
  mine_cmd->add_option("--masks-out", mine.masks_out_dir, "write per-image prior masks here");

  EmbedArgs embed;
  auto* embed_cmd = app.add_subcommand("embed", "embed a prior mask into a pseudo-label");
  embed_cmd->add_option("--map", embed.map_path, "input map file")->required();
  embed_cmd->add_option("--mask", embed.mask_path, "prior mask file")->required();
  double embed_alpha = 0.0;
  auto* embed_alpha_opt = embed_cmd->add_option("--alpha", embed_alpha, "adjustment parameter");
  embed_cmd->add_option("--out", embed.out_path, "output path (prefix with --concat)")->required();
  embed_cmd->add_flag("--concat", embed.concat, "emit label and mask channels side by side");

  AugmentArgs augment;
  auto* augment_cmd = app.add_subcommand("augment", "mix and crop manifest samples");
  augment_cmd->add_option("--manifest", augment.manifest_path, "input manifest")->required();
  augment_cmd->add_option("--out-dir", augment.out_dir, "output directory")->required();
  augment_cmd->add_option("--out-manifest", augment.out_manifest,
                          "output manifest path (default <out-dir>/manifest.jsonl)");
  augment_cmd->add_option("--mode", augment.mode, "vanilla or soft")
      ->check(CLI::IsMember({"vanilla", "soft"}));
  double aug_topk = 0.0, aug_beta = 0.0, aug_crop_min = 0.0, aug_crop_max = 0.0;
  auto* topk_opt = augment_cmd->add_option("--topk", aug_topk, "top-K batch fraction");
  auto* beta_opt = augment_cmd->add_option("--beta-alpha", aug_beta, "Beta distribution parameter");
  auto* crop_min_opt = augment_cmd->add_option("--crop-min", aug_crop_min, "minimum crop scale");
  auto* crop_max_opt = augment_cmd->add_option("--crop-max", aug_crop_max, "maximum crop scale");
  augment_cmd->add_option("--batch-size", augment.batch_size, "samples per batch")
      ->check(CLI::PositiveNumber);
  augment_cmd->add_flag("--no-crops", augment.no_crops, "skip the random-crop outputs");
  augment_cmd->add_option("--format", augment.format, "image output format")
      ->check(CLI::IsMember({"png", "ppm"}));

  CorruptArgs corrupt;
  auto* corrupt_cmd = app.add_subcommand("corrupt", "generate corrupted copies of a dataset");
  corrupt_cmd->add_option("--input-manifest", corrupt.manifest_path, "input manifest")->required();
  corrupt_cmd->add_option("--out-dir", corrupt.out_dir, "output directory")->required();
  corrupt_cmd->add_option("--out-manifest", corrupt.out_manifest,
                          "output manifest path (default <out-dir>/manifest.jsonl)");
  corrupt_cmd->add_option("--kinds", corrupt.kinds,
                          "corruption kinds (default: all six)")
      ->delimiter(',');
  corrupt_cmd->add_option("--severities", corrupt.severities, "severity levels 1-5 (default: 3)")
      ->delimiter(',');
  corrupt_cmd->add_option("--format", corrupt.format, "image output format")
      ->check(CLI::IsMember({"png", "ppm"}));

  EvalArgs eval;
  auto* eval_cmd = app.add_subcommand("eval", "score predictions against ground truth");
  eval_cmd->add_option("--pred", eval.pred_dir, "prediction map directory")->required();
  eval_cmd->add_option("--gt", eval.gt_dir, "ground-truth map directory")->required();
  eval_cmd->add_option("--normalize", eval.normalization, "grayscale normalization")
      ->check(CLI::IsMember({"sum", "softmax"}));
  eval_cmd->add_option("--out", eval.out_path, "write metrics JSON here (default stdout)");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "derive mCD / Relative mCD from metric tables");
  bench_cmd->add_option("--tables", bench.tables_path, "benchmark table JSON")->required();
  bench_cmd->add_option("--ref", bench.reference, "reference model name")->required();
  bench_cmd->add_option("--out-dir", bench.out_dir, "write report.{txt,csv,json} here");

  BiasSplitArgs bias;
  auto* bias_cmd = app.add_subcommand("bias-split", "split maps by deviation from the average");
  bias_cmd->add_option("--maps-dir", bias.maps_dir, "directory of attention maps")->required();
  bias_cmd->add_option("--deltas", bias.deltas, "deviation thresholds")->delimiter(',');
  bias_cmd->add_option("--avg", bias.average, "average map source: mean or gaussian")
      ->check(CLI::IsMember({"mean", "gaussian"}));
  bias_cmd->add_option("--avg-map", bias.average_map_path, "explicit average map file");
  bias_cmd->add_option("--sigma-frac", bias.sigma_fraction,
                       "sigma fraction for the gaussian average");
  bias_cmd->add_option("--out-dir", bias.out_dir, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  if (seed_opt->count() > 0) global.seed = seed_value;

  try {
    if (*fuse_cmd) {
      if (fuse_iter_opt->count() > 0) fuse.iterations = fuse_iterations;
      return run_fuse(global, fuse);
    }
    if (*mine_cmd) {
      if (mine_p_opt->count() > 0) mine.coverage_percent = mine_p;
      if (mine_eta_opt->count() > 0) mine.eta = mine_eta;
      return run_mine(global, mine);
    }
    if (*embed_cmd) {
      if (embed_alpha_opt->count() > 0) embed.alpha = embed_alpha;
      return run_embed(global, embed);
    }
    if (*augment_cmd) {
      if (topk_opt->count() > 0) augment.top_k = aug_topk;
      if (beta_opt->count() > 0) augment.beta_alpha = aug_beta;
      if (crop_min_opt->count() > 0) augment.crop_min = aug_crop_min;
      if (crop_max_opt->count() > 0) augment.crop_max = aug_crop_max;
      return run_augment(global, augment);
    }
    if (*corrupt_cmd) return run_corrupt(global, corrupt);
    if (*eval_cmd) return run_eval(global, eval);
    if (*bench_cmd) return run_bench(global, bench);
    if (*bias_cmd) return run_bias_split(global, bias);
  } catch (const attnkit::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const attnkit::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
