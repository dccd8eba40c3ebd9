#include "attnkit/pipeline.hpp"

#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "support/oracles.hpp"

namespace fs = std::filesystem;
using attnkit::ManifestRow;

namespace {

class PipelineTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("attnkit_pipe_" +
            std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_ / "in");
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::vector<ManifestRow> write_inputs(int count, bool with_maps) {
    std::vector<ManifestRow> rows;
    attnkit::RandomStream rng(1234);
    for (int i = 0; i < count; ++i) {
      const std::string id = "img" + std::to_string(i);
      attnkit::save_image(oracles::textured_image(24, 16, 50 + i), dir_ / "in" / (id + ".png"));
      ManifestRow row;
      row.id = id;
      row.image = id + ".png";
      if (with_maps) {
        const auto label = oracles::random_map(24, 16, rng);
        attnkit::save_map(label, dir_ / "in" / (id + ".label.attn"));
        row.maps["src"] = id + ".label.attn";
        const auto prediction = oracles::random_map(24, 16, rng);
        attnkit::save_map(prediction, dir_ / "in" / (id + ".pred.attn"));
        row.attention = id + ".pred.attn";
      }
      rows.push_back(std::move(row));
    }
    return rows;
  }

  static std::string read_bytes(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  }

  fs::path dir_;
};

TEST_F(PipelineTest, CorruptCountsAndManifest) {
  const auto rows = write_inputs(3, false);
  attnkit::CorruptOptions options;
  options.severities = {3};
  options.seed = 9;
  options.out_dir = dir_ / "out";
  const auto outcome = attnkit::corrupt_dataset(rows, dir_ / "in", options);
  EXPECT_EQ(outcome.rows.size(), 18u);  // 3 images x 6 kinds x 1 severity
  EXPECT_EQ(outcome.failures, 0u);
  for (const auto& row : outcome.rows) {
    EXPECT_TRUE(row.ok.value_or(false));
    EXPECT_TRUE(fs::exists(dir_ / "out" / row.image));
  }
}

TEST_F(PipelineTest, CorruptKindFilter) {
  const auto rows = write_inputs(2, false);
  attnkit::CorruptOptions options;
  options.kinds = {attnkit::CorruptionKind::kGaussian};
  options.severities = {1, 4};
  options.out_dir = dir_ / "out";
  const auto outcome = attnkit::corrupt_dataset(rows, dir_ / "in", options);
  EXPECT_EQ(outcome.rows.size(), 4u);
  for (const auto& row : outcome.rows) EXPECT_EQ(row.kind, "gaussian");
}

TEST_F(PipelineTest, CorruptRecordsFailuresAndContinues) {
  auto rows = write_inputs(2, false);
  rows[0].image = "missing.png";
  attnkit::CorruptOptions options;
  options.kinds = {attnkit::CorruptionKind::kImpulse};
  options.out_dir = dir_ / "out";
  const auto outcome = attnkit::corrupt_dataset(rows, dir_ / "in", options);
  EXPECT_EQ(outcome.rows.size(), 2u);
  EXPECT_EQ(outcome.failures, 1u);
  EXPECT_FALSE(outcome.rows[0].ok.value_or(true));
  EXPECT_FALSE(outcome.rows[0].error.empty());
  EXPECT_TRUE(outcome.rows[1].ok.value_or(false));
}

TEST_F(PipelineTest, CorruptIsSeedDeterministicAcrossWorkerCounts) {
  const auto rows = write_inputs(2, false);
  attnkit::CorruptOptions options;
  options.severities = {2};
  options.seed = 31;
  options.out_dir = dir_ / "out1";
  options.workers = 1;
  const auto first = attnkit::corrupt_dataset(rows, dir_ / "in", options);
  options.out_dir = dir_ / "out2";
  options.workers = 4;
  const auto second = attnkit::corrupt_dataset(rows, dir_ / "in", options);
  ASSERT_EQ(first.rows.size(), second.rows.size());
  for (std::size_t i = 0; i < first.rows.size(); ++i) {
    EXPECT_EQ(first.rows[i].id, second.rows[i].id);
    EXPECT_EQ(read_bytes(dir_ / "out1" / first.rows[i].image),
              read_bytes(dir_ / "out2" / second.rows[i].image));
  }
}

TEST_F(PipelineTest, AugmentAppendsMixupsAndCrops) {
  const auto rows = write_inputs(8, true);
  attnkit::AugmentOptions options;
  options.policy.top_k_fraction = 0.125;
  options.out_dir = dir_ / "aug";
  options.seed = 5;
  const auto outcome = attnkit::augment_dataset(rows, dir_ / "in", options);
  // one batch of 8: one soft mixup plus one crop
  EXPECT_EQ(outcome.rows.size(), 10u);
  for (std::size_t i = 8; i < outcome.rows.size(); ++i) {
    EXPECT_TRUE(fs::exists(dir_ / "aug" / outcome.rows[i].image));
    for (const auto& [source, path] : outcome.rows[i].maps) {
      EXPECT_TRUE(fs::exists(dir_ / "aug" / path));
      const auto map = attnkit::load_map(dir_ / "aug" / path);
      double sum = 0.0;
      for (std::size_t k = 0; k < map.size(); ++k) sum += map[k];
      EXPECT_NEAR(sum, 1.0, 1e-6);
    }
  }
}

TEST_F(PipelineTest, AugmentVanillaWorksWithoutPredictions) {
  auto rows = write_inputs(4, true);
  for (auto& row : rows) row.attention.clear();
  attnkit::AugmentOptions options;
  options.policy.mode = attnkit::MixMode::kVanilla;
  options.policy.top_k_fraction = 0.5;
  options.out_dir = dir_ / "aug";
  options.emit_crops = false;
  const auto outcome = attnkit::augment_dataset(rows, dir_ / "in", options);
  EXPECT_EQ(outcome.rows.size(), 6u);  // 4 originals + ceil(0.5 * 4) mixups
}

TEST_F(PipelineTest, AugmentSoftNeedsPredictions) {
  auto rows = write_inputs(2, true);
  rows[1].attention.clear();
  attnkit::AugmentOptions options;
  options.out_dir = dir_ / "aug";
  EXPECT_THROW(attnkit::augment_dataset(rows, dir_ / "in", options), attnkit::MissingAttention);
}

TEST_F(PipelineTest, EvaluateDirectoriesIdenticalDirsScoreZeroOne) {
  fs::create_directories(dir_ / "pred");
  fs::create_directories(dir_ / "gt");
  attnkit::RandomStream rng(77);
  for (int i = 0; i < 4; ++i) {
    const auto map = oracles::random_map(10, 8, rng);
    attnkit::save_map(map, dir_ / "pred" / ("m" + std::to_string(i) + ".attn"));
    attnkit::save_map(map, dir_ / "gt" / ("m" + std::to_string(i) + ".attn"));
  }
  const auto metrics = attnkit::evaluate_directories(dir_ / "pred", dir_ / "gt", {});
  EXPECT_EQ(metrics.count, 4u);
  EXPECT_NEAR(metrics.mean_kld, 0.0, 1e-12);
  EXPECT_NEAR(metrics.mean_cc, 1.0, 1e-9);
}

TEST_F(PipelineTest, EvaluateDirectoriesMatchesByStem) {
  fs::create_directories(dir_ / "pred");
  fs::create_directories(dir_ / "gt");
  attnkit::RandomStream rng(78);
  attnkit::save_map(oracles::random_map(6, 6, rng), dir_ / "pred" / "a.attn");
  attnkit::save_map(oracles::random_map(6, 6, rng), dir_ / "gt" / "a.attn");
  attnkit::save_map(oracles::random_map(6, 6, rng), dir_ / "pred" / "only_pred.attn");
  const auto metrics = attnkit::evaluate_directories(dir_ / "pred", dir_ / "gt", {});
  EXPECT_EQ(metrics.count, 1u);
}

TEST_F(PipelineTest, EvaluateDirectoriesNoPairsThrows) {
  fs::create_directories(dir_ / "pred");
  fs::create_directories(dir_ / "gt");
  EXPECT_THROW(attnkit::evaluate_directories(dir_ / "pred", dir_ / "gt", {}),
               attnkit::InvalidInput);
}

}  // namespace
