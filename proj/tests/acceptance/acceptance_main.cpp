// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one PASS/FAIL line per criterion.
//
// usage: attnkit_acceptance <cli-binary> <fixture-dir>

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "attnkit/bench.hpp"
#include "attnkit/corruption.hpp"
#include "attnkit/io.hpp"
#include "attnkit/knowledge.hpp"
#include "attnkit/mixup.hpp"
#include "attnkit/pipeline.hpp"
#include "attnkit/uncertainty.hpp"
#include "support/oracles.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string g_cli;
std::string g_fixture_dir;
fs::path g_scratch;

int run_cli(const std::string& args) {
  const fs::path log = g_scratch / "cli_output.txt";
  const std::string command = g_cli + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(command.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

struct Check {
  std::string name;
  std::function<std::string()> body;  // empty string = pass, otherwise failure detail
};

// --- 1. Table-exact metric reproduction through the bench subcommand --------

std::string criterion_metric_reproduction() {
  const fs::path out = g_scratch / "bench_report";
  const int code = run_cli("bench --tables " + g_fixture_dir + "/bdda_c_benchmark.json" +
                           " --ref ML-Net --out-dir " + out.string());
  if (code != 0) return "bench exited with code " + std::to_string(code);

  const json report = json::parse(read_bytes(out / "report.json"));
  struct Expect {
    const char* model;
    double mcd_kld, mcd_cc, rel_kld, rel_cc;
  };
  const Expect expected[] = {{"RUAP", 0.529, 0.522, 0.755, 0.846},
                             {"UAP", 0.590, 0.578, 1.833, 1.790}};
  std::ostringstream problems;
  for (const Expect& e : expected) {
    bool found = false;
    for (const json& model : report.at("models")) {
      if (model.at("name") != e.model) continue;
      found = true;
      const auto check = [&](const char* label, double actual, double target) {
        if (std::abs(actual - target) > 0.002) {
          problems << e.model << " " << label << " = " << actual << " (want " << target
                   << " +-0.002); ";
        }
      };
      check("mCD:kld", model.at("mcd").at("kld").get<double>(), e.mcd_kld);
      check("mCD:cc", model.at("mcd").at("cc").get<double>(), e.mcd_cc);
      check("relmCD:kld", model.at("relative_mcd").at("kld").get<double>(), e.rel_kld);
      check("relmCD:cc", model.at("relative_mcd").at("cc").get<double>(), e.rel_cc);
    }
    if (!found) problems << e.model << " missing from report; ";
  }
  return problems.str();
}

// --- 2. Cross-entropy identity over 1000 random pairs -----------------------

std::string criterion_ce_identity() {
  attnkit::RandomStream rng(2025);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int width = 1 + static_cast<int>(rng.uniform_int(0, 15));
    const int height = 1 + static_cast<int>(rng.uniform_int(0, 15));
    const auto fused = oracles::random_map(width, height, rng, 2.0);
    const auto label = oracles::random_map(width, height, rng, 2.0);
    const auto sides = attnkit::ce_kld_identity_check(fused, label);
    worst = std::max(worst, std::abs(sides.cross_entropy - sides.kld_plus_entropy));
  }
  if (worst >= 1e-9) {
    return "max |CE - (KLD + H)| = " + std::to_string(worst) + " (limit 1e-9)";
  }
  return {};
}

// --- 3. Analytic gradient vs central finite differences ---------------------

std::string criterion_gradient_check() {
  const auto start = std::chrono::steady_clock::now();
  attnkit::RandomStream rng(303);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int width = 2 + static_cast<int>(rng.uniform_int(0, 6));
    const int height = 2 + static_cast<int>(rng.uniform_int(0, 6));
    const int n = 1 + static_cast<int>(rng.uniform_int(0, 3));

    attnkit::PseudoLabelSet labels;
    for (int k = 0; k < n; ++k) labels.push_back(oracles::random_map(width, height, rng, 1.5));

    const std::size_t pixels = static_cast<std::size_t>(width) * height;
    std::vector<double> params;
    for (std::size_t i = 0; i < pixels; ++i) params.push_back(rng.normal());
    for (int k = 0; k < n; ++k) params.push_back(rng.uniform(-1.0, 1.0));

    const auto loss_fn = [&](const std::vector<double>& p) {
      attnkit::RawMap logits(width, height,
                             std::vector<double>(p.begin(), p.begin() + pixels));
      attnkit::UncertaintyState state{std::vector<double>(p.begin() + pixels, p.end())};
      return attnkit::uncertainty_loss(attnkit::normalize_softmax(logits), labels, state).total;
    };

    attnkit::RawMap logits(width, height,
                           std::vector<double>(params.begin(), params.begin() + pixels));
    attnkit::UncertaintyState state{std::vector<double>(params.begin() + pixels, params.end())};
    const auto analytic = attnkit::loss_gradient(logits, labels, state);
    std::vector<double> flat = analytic.logit_gradient.values;
    flat.insert(flat.end(), analytic.log_variance_gradient.begin(),
                analytic.log_variance_gradient.end());

    const auto numeric = oracles::finite_difference_gradient(loss_fn, params, 1e-5);
    worst = std::max(worst, oracles::gradient_relative_error(flat, numeric));
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (worst >= 1e-5) return "max relative error " + std::to_string(worst) + " (limit 1e-5)";
  if (elapsed >= 10.0) return "took " + std::to_string(elapsed) + " s (limit 10 s)";
  return {};
}

// --- 4. fit_fusion against the closed forms ----------------------------------

std::string criterion_closed_form_fusion() {
  attnkit::RandomStream rng(404);

  // Frozen log-variances: the optimizer must land on the weighted mean.
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform_int(0, 2));
    attnkit::PseudoLabelSet labels;
    for (int k = 0; k < n; ++k) labels.push_back(oracles::random_map(4, 4, rng, 1.2));
    attnkit::FusionProblem problem = attnkit::FusionProblem::from_labels(labels);
    problem.freeze_log_variances = true;
    for (auto& e : problem.initial_state.log_variances) e = rng.uniform(-0.5, 0.5);
    problem.settings.max_iterations = 20000;
    problem.settings.gradient_tolerance = 1e-8;
    const auto result = attnkit::fit_fusion(problem);
    const auto expected = attnkit::optimal_fusion(labels, problem.initial_state);
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (std::abs(result.fused[i] - expected[i]) > 1e-4) {
        return "frozen-e trial " + std::to_string(trial) + ": pixel gap " +
               std::to_string(std::abs(result.fused[i] - expected[i]));
      }
    }
  }

  // Free log-variances: at convergence e_n must solve its stationarity
  // condition at the converged map.
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform_int(0, 2));
    attnkit::PseudoLabelSet labels;
    for (int k = 0; k < n; ++k) labels.push_back(oracles::random_map(4, 4, rng, 1.2));
    attnkit::FusionProblem problem = attnkit::FusionProblem::from_labels(labels);
    problem.settings.max_iterations = 60000;
    problem.settings.gradient_tolerance = 1e-9;
    const auto result = attnkit::fit_fusion(problem);
    const auto loss = attnkit::uncertainty_loss(result.fused, labels, result.state);
    for (std::size_t k = 0; k < labels.size(); ++k) {
      const double expected = attnkit::optimal_log_variance(loss.kld[k]);
      if (std::abs(result.state.log_variances[k] - expected) > 1e-3) {
        return "free-e trial " + std::to_string(trial) + ": e gap " +
               std::to_string(std::abs(result.state.log_variances[k] - expected));
      }
    }
  }
  return {};
}

// --- 5. Knowledge mining on the worked instance set -------------------------

std::string criterion_knowledge_mining() {
  attnkit::CategoryStats stats;
  stats.entries = {{"car", 500, 0.5},  {"person", 300, 0.04}, {"light", 100, 0.03},
                   {"stop", 60, 0.02}, {"dog", 5, 0.6},       {"couch", 2, 0.7}};
  const auto frequent = attnkit::select_frequent(stats, 98.0);
  if (frequent.size() != 4) {
    return "frequent set size " + std::to_string(frequent.size()) + " (want 4)";
  }
  const auto priors = attnkit::mine_priors(stats, frequent, 0.1);
  const std::vector<std::string> expected{"person", "light", "stop"};
  if (priors != expected) {
    std::string got;
    for (const auto& p : priors) got += p + " ";
    return "priors {" + got + "} (want person light stop)";
  }
  return {};
}

// --- 6. Exact embedding scale ratio ------------------------------------------

std::string criterion_embedding_ratio() {
  const double alpha = 0.3;
  const double target_ratio = (1.0 + alpha) / alpha;

  // Power-of-two uniform map: every pixel has Y > 0 and the in/out pixel
  // ratio must equal (1 + alpha) / alpha to the last bit.
  const auto uniform = attnkit::AttentionMap::uniform(4, 4);  // 1/16 per pixel
  attnkit::BinaryMask mask(4, 4);
  for (std::size_t i = 0; i < mask.size(); ++i) mask.values[i] = i % 2 == 0 ? 1 : 0;
  const attnkit::RawMap raw = attnkit::embed_premultiplied(uniform, mask, alpha);
  for (std::size_t i = 0; i < raw.values.size(); ++i) {
    for (std::size_t j = 0; j < raw.values.size(); ++j) {
      if (!mask.values[i] || mask.values[j]) continue;
      if (raw.values[i] / raw.values[j] != target_ratio) {
        return "pixel ratio differs from (1+a)/a in the last bit";
      }
    }
  }

  // Random maps: the scale factors applied are exactly (1 + alpha) and alpha.
  attnkit::RandomStream rng(606);
  for (int trial = 0; trial < 25; ++trial) {
    const auto label = oracles::random_map(6, 5, rng);
    attnkit::BinaryMask random_mask(6, 5);
    for (auto& v : random_mask.values) v = rng.uniform() < 0.5 ? 1 : 0;
    const attnkit::RawMap out = attnkit::embed_premultiplied(label, random_mask, alpha);
    for (std::size_t i = 0; i < out.values.size(); ++i) {
      const double expected =
          random_mask.values[i] ? label[i] * (1.0 + alpha) : label[i] * alpha;
      if (out.values[i] != expected) return "embedded value is not the exact 64-bit product";
    }
  }
  return {};
}

// --- 7. Mixup conservation ----------------------------------------------------

std::string criterion_mixup_conservation() {
  attnkit::RandomStream rng(707);
  for (int trial = 0; trial < 1000; ++trial) {
    attnkit::Sample a;
    attnkit::Sample b;
    a.image = attnkit::Image(6, 5);
    b.image = attnkit::Image(6, 5);
    for (double& v : a.image.data) v = rng.uniform();
    for (double& v : b.image.data) v = rng.uniform();
    a.labels = {oracles::random_map(6, 5, rng), oracles::random_map(6, 5, rng)};
    b.labels = {oracles::random_map(6, 5, rng), oracles::random_map(6, 5, rng)};
    a.attention = oracles::random_map(6, 5, rng);
    b.attention = oracles::random_map(6, 5, rng);

    const attnkit::Sample soft = attnkit::soft_attention_mixup(a, b);
    const attnkit::Sample vanilla =
        attnkit::vanilla_mixup(a, b, attnkit::sample_lambda(10.0, rng));
    for (const auto& sample : {&soft, &vanilla}) {
      for (const auto& label : sample->labels) {
        double sum = 0.0;
        for (std::size_t i = 0; i < label.size(); ++i) sum += label[i];
        if (std::abs(sum - 1.0) > 1e-6) {
          return "label mass " + std::to_string(sum) + " after mixup";
        }
      }
    }

    const attnkit::Sample keep_first = attnkit::vanilla_mixup(a, b, 1.0);
    if (keep_first.image.data != a.image.data) return "lambda=1 image not bit-exact";
    for (std::size_t n = 0; n < a.labels.size(); ++n) {
      for (std::size_t i = 0; i < a.labels[n].size(); ++i) {
        if (keep_first.labels[n][i] != a.labels[n][i]) return "lambda=1 label not bit-exact";
      }
    }
  }
  return {};
}

// --- 8. Impulse-noise binomial band ------------------------------------------

std::string criterion_impulse_fraction() {
  const double f = 0.06;
  const double band = 3.0 * std::sqrt(10000 * f * (1.0 - f));
  const attnkit::Image base = attnkit::Image::constant(100, 100, 0.5);
  int inside = 0;
  for (int run = 0; run < 100; ++run) {
    const attnkit::Image out = attnkit::add_impulse_noise(base, f, 800 + run);
    int affected = 0;
    for (int y = 0; y < 100; ++y) {
      for (int x = 0; x < 100; ++x) {
        if (out.at(x, y, 0) != 0.5) ++affected;
      }
    }
    if (std::abs(affected - 600.0) <= band) ++inside;
  }
  if (inside < 99) {
    return std::to_string(inside) + "/100 runs inside the 3-sigma band (want >= 99)";
  }
  return {};
}

// --- 9. Severity monotonicity -------------------------------------------------

std::string criterion_severity_monotonicity() {
  std::vector<attnkit::Image> corpus;
  for (int i = 0; i < 20; ++i) corpus.push_back(oracles::textured_image(48, 48, 9000 + i));
  for (attnkit::CorruptionKind kind : attnkit::kAllCorruptionKinds) {
    double previous = -1.0;
    for (int severity = 1; severity <= 5; ++severity) {
      double acc = 0.0;
      for (std::size_t i = 0; i < corpus.size(); ++i) {
        const attnkit::CorruptionSpec spec{kind, severity,
                                           attnkit::derive_seed(99, std::to_string(i),
                                                                attnkit::corruption_kind_name(kind),
                                                                static_cast<std::uint64_t>(severity))};
        acc += attnkit::rms_distortion(corpus[i], attnkit::apply_corruption(corpus[i], spec));
      }
      const double mean = acc / static_cast<double>(corpus.size());
      if (mean < previous) {
        return attnkit::corruption_kind_name(kind) + " severity " + std::to_string(severity) +
               " mean distortion fell: " + std::to_string(mean) + " < " + std::to_string(previous);
      }
      previous = mean;
    }
  }
  return {};
}

// --- 10. End-to-end pipeline determinism --------------------------------------

std::string criterion_pipeline_determinism() {
  // Small dataset shared by both runs.
  const fs::path data = g_scratch / "det_data";
  fs::create_directories(data);
  attnkit::RandomStream rng(1010);
  std::vector<attnkit::ManifestRow> rows;
  for (int i = 0; i < 3; ++i) {
    const std::string id = "f" + std::to_string(i);
    attnkit::save_image(oracles::textured_image(24, 18, 600 + i), data / (id + ".png"));
    attnkit::save_map(oracles::random_map(24, 18, rng), data / (id + ".label.attn"));
    attnkit::save_map(oracles::random_map(24, 18, rng), data / (id + ".pred.attn"));
    attnkit::ManifestRow row;
    row.id = id;
    row.image = id + ".png";
    row.maps["src"] = id + ".label.attn";
    row.attention = id + ".pred.attn";
    rows.push_back(std::move(row));
  }
  attnkit::save_manifest(rows, data / "manifest.jsonl");

  fs::create_directories(data / "gt");
  fs::create_directories(data / "pred");
  for (int i = 0; i < 3; ++i) {
    const auto map = oracles::random_map(24, 18, rng);
    attnkit::save_map(map, data / "gt" / ("f" + std::to_string(i) + ".attn"));
    attnkit::save_map(oracles::random_map(24, 18, rng),
                      data / "pred" / ("f" + std::to_string(i) + ".attn"));
  }

  const auto run_pipeline = [&](const std::string& tag) -> std::string {
    const fs::path root = g_scratch / ("det_" + tag);
    fs::create_directories(root);
    int code = run_cli("--seed 77 corrupt --input-manifest " + (data / "manifest.jsonl").string() +
                       " --kinds gaussian,impulse,snow --severities 2 --out-dir " +
                       (root / "corrupt").string());
    if (code != 0) return "corrupt failed in " + tag;
    code = run_cli("--seed 77 augment --manifest " + (data / "manifest.jsonl").string() +
                   " --out-dir " + (root / "augment").string() + " --mode soft --topk 0.34");
    if (code != 0) return "augment failed in " + tag;
    code = run_cli("eval --pred " + (data / "pred").string() + " --gt " + (data / "gt").string() +
                   " --out " + (root / "eval.json").string());
    if (code != 0) return "eval failed in " + tag;
    return {};
  };

  if (auto err = run_pipeline("a"); !err.empty()) return err;
  if (auto err = run_pipeline("b"); !err.empty()) return err;

  // Every produced file must match byte for byte.
  const fs::path a = g_scratch / "det_a";
  const fs::path b = g_scratch / "det_b";
  std::size_t compared = 0;
  for (const auto& entry : fs::recursive_directory_iterator(a)) {
    if (!entry.is_regular_file()) continue;
    const fs::path rel = fs::relative(entry.path(), a);
    if (!fs::exists(b / rel)) return "missing in second run: " + rel.string();
    if (read_bytes(entry.path()) != read_bytes(b / rel)) {
      return "byte mismatch: " + rel.string();
    }
    ++compared;
  }
  if (compared < 10) return "too few artifacts compared: " + std::to_string(compared);
  return {};
}

// --- 11. Central-bias threshold nesting ----------------------------------------

std::string criterion_central_bias_nesting() {
  const int size = 16;
  const auto average = attnkit::centered_gaussian(size, size, 0.18);

  // Mixtures between the average and a far-corner delta sweep KL upward;
  // bisect to land one map inside each inter-threshold band.
  const auto mixture = [&](double t) {
    std::vector<double> values(average.values().begin(), average.values().end());
    for (double& v : values) v *= 1.0 - t;
    values[0] += t;  // corner pixel
    return attnkit::AttentionMap::from_distribution(size, size, std::move(values));
  };
  const auto kl_at = [&](double t) { return attnkit::kl_divergence(mixture(t), average); };

  std::vector<attnkit::AttentionMap> maps;
  attnkit::RandomStream rng(1111);
  for (int i = 0; i < 6; ++i) {  // low-divergence crowd
    maps.push_back(attnkit::centered_gaussian(size, size, 0.18 + 0.01 * i));
  }
  for (double target : {2.25, 2.75, 3.25, 3.75, 4.5}) {
    double lo = 0.0;
    double hi = 1.0;
    for (int step = 0; step < 200; ++step) {
      const double mid = 0.5 * (lo + hi);
      (kl_at(mid) < target ? lo : hi) = mid;
    }
    maps.push_back(mixture(0.5 * (lo + hi)));
  }

  std::vector<std::vector<std::size_t>> selections;
  for (double delta : {2.0, 2.5, 3.0, 3.5, 4.0}) {
    selections.push_back(attnkit::central_bias_split(maps, average, delta).selected);
  }
  for (std::size_t level = 1; level < selections.size(); ++level) {
    const auto& outer = selections[level - 1];
    const auto& inner = selections[level];
    if (inner.size() >= outer.size()) {
      return "split at level " + std::to_string(level) + " did not shrink strictly";
    }
    for (std::size_t idx : inner) {
      if (std::find(outer.begin(), outer.end(), idx) == outer.end()) {
        return "split at level " + std::to_string(level) + " is not a subset";
      }
    }
  }
  if (selections.front().size() != 5 || selections.back().size() != 1) {
    return "expected the chain to run from 5 selections down to 1";
  }
  return {};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::fprintf(stderr, "usage: %s <cli-binary> <fixture-dir>\n", argv[0]);
    return 2;
  }
  g_cli = argv[1];
  g_fixture_dir = argv[2];
  g_scratch = fs::temp_directory_path() / "attnkit_acceptance";
  fs::remove_all(g_scratch);
  fs::create_directories(g_scratch);

  const std::vector<Check> checks = {
      {"metric reproduction (Table mCD / Relative mCD cells, +-0.002)",
       criterion_metric_reproduction},
      {"cross-entropy identity on 1000 random pairs (< 1e-9)", criterion_ce_identity},
      {"analytic gradient vs finite differences (100 problems, < 1e-5, < 10 s)",
       criterion_gradient_check},
      {"fit_fusion matches the closed-form optima (1e-4 / 1e-3)",
       criterion_closed_form_fusion},
      {"knowledge mining worked example (|frequent| = 4, priors exact)",
       criterion_knowledge_mining},
      {"embedding scale ratio (1+a)/a exact in 64-bit arithmetic",
       criterion_embedding_ratio},
      {"mixup conservation over 1000 draws (1 +- 1e-6; lambda=1 bit-exact)",
       criterion_mixup_conservation},
      {"impulse-noise counts inside the 3-sigma binomial band (>= 99/100)",
       criterion_impulse_fraction},
      {"severity monotonicity of mean distortion (6 kinds, 20 images)",
       criterion_severity_monotonicity},
      {"pipeline determinism: corrupt + augment + eval byte-identical",
       criterion_pipeline_determinism},
      {"central-bias splits strictly nested over delta = 2.0 .. 4.0",
       criterion_central_bias_nesting},
  };

  int failures = 0;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    std::string detail;
    try {
      detail = checks[i].body();
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    const bool ok = detail.empty();
    if (!ok) ++failures;
    std::cout << (ok ? "PASS" : "FAIL") << "  " << (i + 1) << ". " << checks[i].name;
    if (!ok) std::cout << "  [" << detail << "]";
    std::cout << std::endl;
  }
  fs::remove_all(g_scratch);
  std::cout << (failures == 0 ? "acceptance: all criteria passed"
                              : "acceptance: " + std::to_string(failures) + " criteria failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
