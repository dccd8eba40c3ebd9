#include <benchmark/benchmark.h>

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "attnkit/attention_map.hpp"
#include "attnkit/corruption.hpp"
#include "attnkit/rng.hpp"
#include "attnkit/uncertainty.hpp"

namespace {

attnkit::AttentionMap random_map(int width, int height, attnkit::RandomStream& rng) {
  attnkit::RawMap raw(width, height);
  for (double& v : raw.values) v = rng.normal();
  return attnkit::normalize_softmax(raw);
}

attnkit::Image textured_image(int width, int height, std::uint64_t seed) {
  attnkit::RandomStream rng(seed);
  attnkit::Image img(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const double base = 0.5 + 0.4 * std::sin(x * 0.11) * std::cos(y * 0.07);
      for (int c = 0; c < 3; ++c) {
        img.at(x, y, c) = std::clamp(base + 0.1 * rng.uniform(), 0.0, 1.0);
      }
    }
  }
  return img;
}

void BM_KlDivergence224(benchmark::State& state) {
  attnkit::RandomStream rng(7);
  const auto p = random_map(224, 224, rng);
  const auto q = random_map(224, 224, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(attnkit::kl_divergence(p, q));
  }
}
BENCHMARK(BM_KlDivergence224);

void BM_PearsonCc224(benchmark::State& state) {
  attnkit::RandomStream rng(7);
  const auto p = random_map(224, 224, rng);
  const auto q = random_map(224, 224, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(attnkit::pearson_cc(p, q));
  }
}
BENCHMARK(BM_PearsonCc224);

void BM_FitFusion8x8(benchmark::State& state) {
  attnkit::RandomStream rng(11);
  attnkit::PseudoLabelSet labels;
  for (int n = 0; n < 3; ++n) labels.push_back(random_map(8, 8, rng));
  auto problem = attnkit::FusionProblem::from_labels(labels);
  problem.settings.max_iterations = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(attnkit::fit_fusion(problem));
  }
}
BENCHMARK(BM_FitFusion8x8)->Arg(100)->Arg(500);

void BM_GaussianNoise224(benchmark::State& state) {
  const attnkit::Image img = textured_image(224, 224, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(attnkit::gaussian_noise(img, 3, 42));
  }
}
BENCHMARK(BM_GaussianNoise224);

void BM_MotionBlur224(benchmark::State& state) {
  const attnkit::Image img = textured_image(224, 224, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(attnkit::motion_blur(img, static_cast<int>(state.range(0)), 42));
  }
}
BENCHMARK(BM_MotionBlur224)->Arg(1)->Arg(3)->Arg(5);

void BM_JpegRoundtrip224(benchmark::State& state) {
  const attnkit::Image img = textured_image(224, 224, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(attnkit::jpeg_compress(img, 3));
  }
}
BENCHMARK(BM_JpegRoundtrip224);

void BM_Fog224(benchmark::State& state) {
  const attnkit::Image img = textured_image(224, 224, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(attnkit::fog(img, 3, 42));
  }
}
BENCHMARK(BM_Fog224);

}  // namespace

BENCHMARK_MAIN();
