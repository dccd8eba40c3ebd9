#include "attnkit/corruption.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "support/oracles.hpp"

using attnkit::Image;

namespace {

double psnr(const Image& a, const Image& b) {
  const double rmse = attnkit::rms_distortion(a, b);
  return 20.0 * std::log10(1.0 / rmse);
}

TEST(ZeroSeverity, EveryKindIsIdentity) {
  const Image img = oracles::textured_image(32, 24, 1);
  for (attnkit::CorruptionKind kind : attnkit::kAllCorruptionKinds) {
    attnkit::CorruptionSpec spec{kind, 0, 42};
    const Image out = attnkit::apply_corruption(img, spec);
    EXPECT_EQ(out.data, img.data) << attnkit::corruption_kind_name(kind);
  }
}

TEST(Determinism, SameSeedSameBytes) {
  const Image img = oracles::textured_image(32, 32, 2);
  for (attnkit::CorruptionKind kind : attnkit::kAllCorruptionKinds) {
    attnkit::CorruptionSpec spec{kind, 3, 99};
    const Image a = attnkit::apply_corruption(img, spec);
    const Image b = attnkit::apply_corruption(img, spec);
    EXPECT_EQ(a.data, b.data) << attnkit::corruption_kind_name(kind);
  }
}

TEST(GaussianNoise, SeverityThreeStdOnGrayCard) {
  const Image img = Image::constant(256, 256, 0.5);
  const Image out = attnkit::gaussian_noise(img, 3, 7);
  double mean = 0.0;
  for (double v : out.data) mean += v;
  mean /= static_cast<double>(out.data.size());
  double var = 0.0;
  for (double v : out.data) var += (v - mean) * (v - mean);
  var /= static_cast<double>(out.data.size());
  // sigma(3) = 0.18; [0,1] clamping trims the far tails slightly.
  EXPECT_NEAR(std::sqrt(var), 0.18, 0.01);
}

TEST(GaussianNoise, OutputClamped) {
  const Image img = Image::constant(16, 16, 0.95);
  const Image out = attnkit::gaussian_noise(img, 5, 3);
  for (double v : out.data) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
}

TEST(ImpulseNoise, AffectedCountInsideBinomialBand) {
  const double f = 0.06;
  const Image img = Image::constant(100, 100, 0.5);
  const double band = 3.0 * std::sqrt(10000 * f * (1.0 - f));
  const Image out = attnkit::add_impulse_noise(img, f, 11);
  int affected = 0;
  for (int y = 0; y < 100; ++y) {
    for (int x = 0; x < 100; ++x) {
      if (out.at(x, y, 0) != 0.5) {
        ++affected;
        // salt or pepper, all channels together
        EXPECT_TRUE(out.at(x, y, 0) == 0.0 || out.at(x, y, 0) == 1.0);
        EXPECT_EQ(out.at(x, y, 0), out.at(x, y, 1));
        EXPECT_EQ(out.at(x, y, 0), out.at(x, y, 2));
      }
    }
  }
  EXPECT_NEAR(affected, 600.0, band);
}

TEST(ImpulseNoise, ZeroFractionIsIdentity) {
  const Image img = oracles::textured_image(20, 20, 3);
  const Image out = attnkit::add_impulse_noise(img, 0.0, 5);
  EXPECT_EQ(out.data, img.data);
}

TEST(MotionBlur, ConstantImageUnchanged) {
  const Image img = Image::constant(32, 32, 0.42);
  const Image out = attnkit::motion_blur(img, 3, 17);
  for (double v : out.data) EXPECT_NEAR(v, 0.42, 1e-12);
}

TEST(MotionBlurKernel, HorizontalImpulseResponse) {
  // angle 0: the kernel is one row of equal masses.
  const attnkit::RawMap kernel = attnkit::motion_blur_kernel(5, 0.0);
  for (int y = 0; y < 5; ++y) {
    for (int x = 0; x < 5; ++x) {
      EXPECT_NEAR(kernel.at(x, y), y == 2 ? 0.2 : 0.0, 1e-12);
    }
  }

  Image img(21, 21);
  img.at(10, 10, 0) = img.at(10, 10, 1) = img.at(10, 10, 2) = 1.0;
  const Image out = attnkit::convolve_reflect(img, kernel);
  for (int x = 8; x <= 12; ++x) EXPECT_NEAR(out.at(x, 10, 0), 0.2, 1e-12);
  EXPECT_NEAR(out.at(7, 10, 0), 0.0, 1e-12);
  EXPECT_NEAR(out.at(10, 9, 0), 0.0, 1e-12);
}

TEST(MotionBlur, MassConservedOnInteriorContent) {
  Image img(41, 41);
  attnkit::RandomStream rng(19);
  for (int y = 15; y < 26; ++y) {
    for (int x = 15; x < 26; ++x) {
      for (int c = 0; c < 3; ++c) img.at(x, y, c) = rng.uniform();
    }
  }
  double mass_in = 0.0;
  for (double v : img.data) mass_in += v;
  const Image out = attnkit::motion_blur(img, 2, 23);
  double mass_out = 0.0;
  for (double v : out.data) mass_out += v;
  EXPECT_NEAR(mass_out, mass_in, 1e-4);
}

TEST(MotionBlur, KernelLargerThanImageThrows) {
  const Image img = Image::constant(8, 8, 0.5);
  EXPECT_THROW(attnkit::motion_blur(img, 5, 3), attnkit::KernelTooLarge);  // length 23 > 8
}

TEST(Jpeg, HighQualityIsNearLossless) {
  const Image img = oracles::textured_image(64, 48, 4);
  const Image out = attnkit::jpeg_roundtrip(img, 100);
  EXPECT_GT(psnr(img, out), 40.0);
}

TEST(Jpeg, QualityLadderDegradesMonotonically) {
  const Image img = oracles::textured_image(64, 64, 5);
  const Image s1 = attnkit::jpeg_compress(img, 1);
  const Image s5 = attnkit::jpeg_compress(img, 5);
  EXPECT_LT(psnr(img, s5), psnr(img, s1));
}

TEST(Jpeg, ConstantColorRoundTripsAlmostExactly) {
  // Only the DC coefficient survives; the error is bounded by half its
  // quantization step (32 at quality 25 -> 2/255 per pixel).
  const Image img = Image::constant(32, 32, 0.35);
  const Image out = attnkit::jpeg_compress(img, 1);
  for (double v : out.data) {
    EXPECT_NEAR(v, 0.35, 0.01);
    EXPECT_NEAR(v, out.data[0], 1e-9);  // flat blocks stay flat
  }
}

TEST(Fog, ZeroStrengthIsIdentity) {
  const Image img = oracles::textured_image(30, 30, 6);
  const Image out = attnkit::apply_fog(img, 0.0, 21);
  EXPECT_EQ(out.data, img.data);
}

TEST(Fog, LuminanceClimbsWithSeverityOnDarkImage) {
  const Image img = Image::constant(64, 64, 0.08);
  double previous = attnkit::mean_luminance(img);
  for (int severity = 1; severity <= 5; ++severity) {
    const Image out = attnkit::fog(img, severity, 77);
    const double lum = attnkit::mean_luminance(out);
    EXPECT_GT(lum, previous);
    previous = lum;
  }
}

TEST(Fog, FieldIsSeedDeterministic) {
  const auto a = attnkit::plasma_fractal(33, 17, 5);
  const auto b = attnkit::plasma_fractal(33, 17, 5);
  EXPECT_EQ(a, b);
  const auto c = attnkit::plasma_fractal(33, 17, 6);
  EXPECT_NE(a, c);
  for (double v : a) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
}

TEST(Snow, ZeroParamsAreIdentity) {
  const Image img = oracles::textured_image(30, 30, 8);
  const Image out = attnkit::apply_snow(img, attnkit::SnowParams{}, 3);
  EXPECT_EQ(out.data, img.data);
}

TEST(Snow, NearWhiteFractionGrowsWithSeverity) {
  const Image img = Image::constant(96, 96, 0.3);
  double previous = 0.0;
  for (int severity = 1; severity <= 5; ++severity) {
    const Image out = attnkit::snow(img, severity, 13);
    int bright = 0;
    for (int y = 0; y < out.height; ++y) {
      for (int x = 0; x < out.width; ++x) {
        if (attnkit::luminance(out, x, y) > 0.8) ++bright;
      }
    }
    EXPECT_GE(bright, previous) << "severity " << severity;
    previous = bright;
  }
  EXPECT_GT(previous, 0.0);
}

TEST(SeverityLadders, DistortionIsMonotonePerKind) {
  // Smaller sibling of the acceptance sweep: 5 images, severities 1..5.
  std::vector<Image> corpus;
  for (int i = 0; i < 5; ++i) corpus.push_back(oracles::textured_image(48, 48, 100 + i));
  for (attnkit::CorruptionKind kind : attnkit::kAllCorruptionKinds) {
    double previous = -1.0;
    for (int severity = 1; severity <= 5; ++severity) {
      double acc = 0.0;
      for (std::size_t i = 0; i < corpus.size(); ++i) {
        const attnkit::CorruptionSpec spec{kind, severity, 900 + i};
        acc += attnkit::rms_distortion(corpus[i], attnkit::apply_corruption(corpus[i], spec));
      }
      const double mean = acc / static_cast<double>(corpus.size());
      EXPECT_GE(mean, previous) << attnkit::corruption_kind_name(kind) << " severity " << severity;
      previous = mean;
    }
  }
}

TEST(CorruptionSpec, SeverityRangeEnforced) {
  attnkit::CorruptionSpec spec{attnkit::CorruptionKind::kGaussian, 0, 1};
  EXPECT_THROW(spec.validate(), attnkit::InvalidInput);
  spec.severity = 6;
  EXPECT_THROW(spec.validate(), attnkit::InvalidInput);
  spec.severity = 3;
  EXPECT_NO_THROW(spec.validate());
}

TEST(CorruptionKindNames, RoundTrip) {
  for (attnkit::CorruptionKind kind : attnkit::kAllCorruptionKinds) {
    EXPECT_EQ(attnkit::corruption_kind_from_name(attnkit::corruption_kind_name(kind)), kind);
  }
  EXPECT_THROW(attnkit::corruption_kind_from_name("sleet"), attnkit::InvalidInput);
}

TEST(SeverityLadderValidation, CatchesBadTables) {
  attnkit::SeverityLadders ladders;
  ladders.gaussian_sigma = {0.2, 0.1, 0.3, 0.4, 0.5};  // not monotone
  EXPECT_THROW(ladders.validate(), attnkit::InvalidInput);
  ladders = {};
  ladders.jpeg_quality = {10, 20, 30, 40, 50};  // must fall
  EXPECT_THROW(ladders.validate(), attnkit::InvalidInput);
  ladders = {};
  EXPECT_NO_THROW(ladders.validate());
}

}  // namespace
