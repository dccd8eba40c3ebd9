#include "attnkit/config.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

namespace attnkit {

namespace {

using nlohmann::json;

template <typename T, std::size_t N>
void read_ladder(const json& doc, const char* key, std::array<T, N>& out) {
  if (!doc.contains(key)) return;
  const auto values = doc.at(key).get<std::vector<T>>();
  if (values.size() != N) {
    throw InvalidInput(std::string("ladder ") + key + " must list exactly 5 severities");
  }
  std::copy(values.begin(), values.end(), out.begin());
}

}  // namespace

void Config::validate() const {
  if (embed_alpha <= 0.0) throw InvalidInput("embed_alpha must be positive");
  if (coverage_percent <= 0.0 || coverage_percent > 100.0) {
    throw InvalidInput("coverage_percent must lie in (0, 100]");
  }
  if (mining_eta <= 0.0 || mining_eta > 1.0) throw InvalidInput("mining_eta must lie in (0, 1]");
  if (top_k_fraction <= 0.0 || top_k_fraction > 1.0) {
    throw InvalidInput("top_k_fraction must lie in (0, 1]");
  }
  if (beta_alpha <= 0.0) throw InvalidInput("beta_alpha must be positive");
  if (reg_weight < 0.0) throw InvalidInput("reg_weight must be nonnegative");
  if (crop_scale_min <= 0.0 || crop_scale_max > 1.0 || crop_scale_min > crop_scale_max) {
    throw InvalidInput("crop scale range must be a sub-interval of (0, 1]");
  }
  if (log_floor <= 0.0) throw InvalidInput("log_floor must be positive");
  if (optimizer.logit_step <= 0.0 || optimizer.log_variance_step <= 0.0) {
    throw InvalidInput("optimizer step sizes must be positive");
  }
  if (optimizer.max_iterations < 1) throw InvalidInput("optimizer needs at least one iteration");
  if (optimizer.gradient_tolerance < 0.0) {
    throw InvalidInput("gradient tolerance must be nonnegative");
  }
  ladders.validate();
}

Config Config::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config: " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw IoError("cannot parse config " + path.string() + ": " + e.what());
  }

  Config config;
  for (const auto& [key, value] : doc.items()) {
    if (key == "embed_alpha") config.embed_alpha = value.get<double>();
    else if (key == "coverage_percent") config.coverage_percent = value.get<double>();
    else if (key == "mining_eta") config.mining_eta = value.get<double>();
    else if (key == "top_k_fraction") config.top_k_fraction = value.get<double>();
    else if (key == "beta_alpha") config.beta_alpha = value.get<double>();
    else if (key == "reg_weight") config.reg_weight = value.get<double>();
    else if (key == "crop_scale_min") config.crop_scale_min = value.get<double>();
    else if (key == "crop_scale_max") config.crop_scale_max = value.get<double>();
    else if (key == "log_floor") config.log_floor = value.get<double>();
    else if (key == "seed") config.seed = value.get<std::uint64_t>();
    else if (key == "optimizer") {
      const json& opt = value;
      if (opt.contains("logit_step")) config.optimizer.logit_step = opt.at("logit_step").get<double>();
      if (opt.contains("log_variance_step")) {
        config.optimizer.log_variance_step = opt.at("log_variance_step").get<double>();
      }
      if (opt.contains("max_iterations")) {
        config.optimizer.max_iterations = opt.at("max_iterations").get<int>();
      }
      if (opt.contains("gradient_tolerance")) {
        config.optimizer.gradient_tolerance = opt.at("gradient_tolerance").get<double>();
      }
    } else if (key == "ladders") {
      const json& ladders = value;
      read_ladder(ladders, "gaussian_sigma", config.ladders.gaussian_sigma);
      read_ladder(ladders, "impulse_fraction", config.ladders.impulse_fraction);
      read_ladder(ladders, "motion_blur_length", config.ladders.motion_blur_length);
      read_ladder(ladders, "jpeg_quality", config.ladders.jpeg_quality);
      read_ladder(ladders, "fog_strength", config.ladders.fog_strength);
      read_ladder(ladders, "snow_streaks_per_kpx", config.ladders.snow_streaks_per_kpx);
      read_ladder(ladders, "snow_whitening", config.ladders.snow_whitening);
    } else {
      throw InvalidInput("unknown config key: " + key);
    }
  }
  config.validate();
  return config;
}

std::string Config::to_json() const {
  json doc;
  doc["embed_alpha"] = embed_alpha;
  doc["coverage_percent"] = coverage_percent;
  doc["mining_eta"] = mining_eta;
  doc["top_k_fraction"] = top_k_fraction;
  doc["beta_alpha"] = beta_alpha;
  doc["reg_weight"] = reg_weight;
  doc["crop_scale_min"] = crop_scale_min;
  doc["crop_scale_max"] = crop_scale_max;
  doc["log_floor"] = log_floor;
  doc["seed"] = seed;
  doc["optimizer"] = {{"logit_step", optimizer.logit_step},
                      {"log_variance_step", optimizer.log_variance_step},
                      {"max_iterations", optimizer.max_iterations},
                      {"gradient_tolerance", optimizer.gradient_tolerance}};
  doc["ladders"] = {{"gaussian_sigma", ladders.gaussian_sigma},
                    {"impulse_fraction", ladders.impulse_fraction},
                    {"motion_blur_length", ladders.motion_blur_length},
                    {"jpeg_quality", ladders.jpeg_quality},
                    {"fog_strength", ladders.fog_strength},
                    {"snow_streaks_per_kpx", ladders.snow_streaks_per_kpx},
                    {"snow_whitening", ladders.snow_whitening}};
  return doc.dump(2) + "\n";
}

}  // namespace attnkit
