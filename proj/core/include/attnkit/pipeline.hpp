#pragma once

#include <filesystem>
#include <vector>

#include "attnkit/bench.hpp"
#include "attnkit/config.hpp"
#include "attnkit/corruption.hpp"
#include "attnkit/io.hpp"
#include "attnkit/mixup.hpp"

namespace attnkit {

/// Manifest-level drivers shared by the CLI and the integration tests. All
/// output paths inside generated manifests are relative to the output
/// directory, so identical seeds give byte-identical artifacts regardless of
/// where the run lands.

struct CorruptOptions {
  std::vector<CorruptionKind> kinds{kAllCorruptionKinds.begin(), kAllCorruptionKinds.end()};
  std::vector<int> severities{3};
  std::uint64_t seed = 0;
  std::filesystem::path out_dir;
  std::string image_format = "png";  ///< "png" or "ppm"
  int workers = 1;
  SeverityLadders ladders;
};

struct CorruptOutcome {
  std::vector<ManifestRow> rows;
  std::size_t failures = 0;
};

/// Applies every (kind, severity) to every input row. Per-image seeds are
/// derived from (seed, id, kind, severity); unreadable inputs become failed
/// rows and the run continues.
CorruptOutcome corrupt_dataset(const std::vector<ManifestRow>& inputs,
                               const std::filesystem::path& input_base,
                               const CorruptOptions& options);

struct AugmentOptions {
  MixPolicy policy;
  int batch_size = 8;
  std::uint64_t seed = 0;
  std::filesystem::path out_dir;
  std::string image_format = "png";
  int workers = 1;
  bool emit_crops = true;  ///< also append a random crop per selected candidate
};

struct AugmentOutcome {
  std::vector<ManifestRow> rows;  ///< originals followed by augmented rows
};

/// Splits the manifest into batches, augments each with its own derived
/// random stream, and writes the generated samples under out_dir.
AugmentOutcome augment_dataset(const std::vector<ManifestRow>& inputs,
                               const std::filesystem::path& input_base,
                               const AugmentOptions& options);

struct EvalOptions {
  MapNormalization normalization = MapNormalization::kSum;
  int workers = 1;
};

/// Pairs files with matching stems across the two directories and averages
/// the KLD / CC metrics.
PairMetrics evaluate_directories(const std::filesystem::path& predictions,
                                 const std::filesystem::path& ground_truth,
                                 const EvalOptions& options = {});

/// Reads a benchmark metric table from JSON:
/// {"models": [{"name", "clean": {"kld","cc"}, "corruptions": {kind: {...}}}]}.
BenchmarkTable load_benchmark_table(const std::filesystem::path& path);

}  // namespace attnkit
