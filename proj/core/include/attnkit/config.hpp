#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "attnkit/corruption.hpp"
#include "attnkit/mixup.hpp"
#include "attnkit/uncertainty.hpp"

namespace attnkit {

/// Toolkit-wide defaults. Values are validated on load and before every
/// command runs, so bad settings fail before any file is written.
struct Config {
  // knowledge embedding
  double embed_alpha = 0.3;
  double coverage_percent = 98.0;
  double mining_eta = 0.1;

  // augmentation
  double top_k_fraction = 0.125;
  double beta_alpha = 10.0;
  double reg_weight = 1.0;
  double crop_scale_min = 0.5;
  double crop_scale_max = 1.0;

  // numerics
  double log_floor = kLogFloor;
  OptimizerSettings optimizer;

  SeverityLadders ladders;

  std::uint64_t seed = 0;

  void validate() const;

  /// Parses a JSON config file; unknown keys are rejected.
  static Config load(const std::filesystem::path& path);
  std::string to_json() const;
};

/// Environment variable naming a default config file.
inline constexpr const char* kConfigEnvVar = "ATTNKIT_CONFIG";

}  // namespace attnkit
