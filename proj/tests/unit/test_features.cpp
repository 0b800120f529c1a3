#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "herdsig/feature_table.hpp"
#include "herdsig/features.hpp"
#include "herdsig/random.hpp"
#include "herdsig/segmentation.hpp"
#include "herdsig/synth.hpp"
#include "signals.hpp"

namespace herdsig {
namespace {

using herdsig::testing::error_code_of;
using herdsig::testing::sine;
using herdsig::testing::white_noise;

constexpr int kRate = 16000;
constexpr double kPi = std::numbers::pi;

// Band-limited sawtooth: harmonics k*f0 below Nyquist with amplitude 1/k.
std::vector<double> sawtooth(double f0, double amplitude, double seconds) {
  const auto n = static_cast<std::size_t>(seconds * kRate);
  std::vector<double> x(n, 0.0);
  for (int k = 1; k * f0 < kRate / 2.0; ++k) {
    for (std::size_t i = 0; i < n; ++i) x[i] += amplitude / k * std::sin(2.0 * kPi * k * f0 * static_cast<double>(i) / kRate);
  }
  return x;
}

std::vector<double> add(std::vector<double> a, const std::vector<double>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

// Pitch -----------------------------------------------------------------------

TEST(ExtractF0, SawtoothAt120Hz) {
  const auto x = sawtooth(120.0, 0.3, 1.0);
  const auto c = extract_f0(x, kRate, FrameConfig{});
  EXPECT_NEAR(mean_of(c.f0_hz), 120.0, 1.2);
  EXPECT_GT(c.voicing_fraction, 0.95);
  for (std::size_t i = 1; i < c.times_s.size(); ++i) EXPECT_GT(c.times_s[i], c.times_s[i - 1]);
  for (double f : c.f0_hz) {
    EXPECT_GE(f, kF0MinHz);
    EXPECT_LE(f, kF0MaxHz);
  }
}

TEST(ExtractF0, PureSineAt200Hz) {
  const auto c = extract_f0(sine(200.0, 0.5, 1.0, kRate), kRate, FrameConfig{});
  EXPECT_NEAR(mean_of(c.f0_hz), 200.0, 1.0);
}

TEST(ExtractF0, TracksAcrossTheBand) {
  for (double f0 : {75.0, 150.0, 310.0, 480.0}) {
    const auto c = extract_f0(sawtooth(f0, 0.3, 0.6), kRate, FrameConfig{});
    EXPECT_NEAR(mean_of(c.f0_hz), f0, 0.01 * f0) << f0;
  }
}

TEST(ExtractF0, WhiteNoiseIsUnvoiced) {
  EXPECT_EQ(error_code_of([] { extract_f0(white_noise(kRate, 0.1, 3), kRate, FrameConfig{}); }),
            ErrorCode::NoVoicedFrames);
}

TEST(ExtractF0, GainInvariant) {
  const auto x = sawtooth(140.0, 0.05, 0.5);
  auto y = x;
  for (double& v : y) v *= 7.0;
  const auto a = extract_f0(x, kRate, FrameConfig{});
  const auto b = extract_f0(y, kRate, FrameConfig{});
  ASSERT_EQ(a.f0_hz.size(), b.f0_hz.size());
  for (std::size_t i = 0; i < a.f0_hz.size(); ++i) EXPECT_NEAR(a.f0_hz[i], b.f0_hz[i], 1e-6);
}

TEST(F0Statistics, FlatContour) {
  const std::vector<double> track(20, 150.0);
  const auto s = f0_statistics(track);
  EXPECT_DOUBLE_EQ(s.min, 150.0);
  EXPECT_DOUBLE_EQ(s.mean, 150.0);
  EXPECT_DOUBLE_EQ(s.max, 150.0);
  EXPECT_DOUBLE_EQ(s.range, 0.0);
  EXPECT_DOUBLE_EQ(s.fm_extent, 0.0);
}

TEST(F0Statistics, TriangleTrack) {
  const std::vector<double> track{100, 120, 140, 160, 140, 120, 100, 120, 140, 160};
  const auto s = f0_statistics(track);
  EXPECT_DOUBLE_EQ(s.fm_extent, 60.0);
  EXPECT_DOUBLE_EQ(s.range, 60.0);
  EXPECT_DOUBLE_EQ(s.min, 100.0);
  EXPECT_DOUBLE_EQ(s.max, 160.0);
}

// Brute-force extremum pairing on a track without plateaus.
double fm_extent_oracle(const std::vector<double>& t) {
  std::vector<double> ext;
  for (std::size_t i = 1; i + 1 < t.size(); ++i) {
    const bool peak = t[i] > t[i - 1] && t[i] > t[i + 1];
    const bool trough = t[i] < t[i - 1] && t[i] < t[i + 1];
    if (peak || trough) ext.push_back(t[i]);
  }
  if (ext.size() < 2) return 0.0;
  double s = 0.0;
  for (std::size_t i = 1; i < ext.size(); ++i) s += std::abs(ext[i] - ext[i - 1]);
  return s / static_cast<double>(ext.size() - 1);
}

TEST(F0Statistics, FmExtentMatchesOracleOnRandomTracks) {
  Rng rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> t(5 + trial % 30);
    for (double& v : t) v = rng.uniform(80.0, 400.0);
    const auto s = f0_statistics(t);
    EXPECT_NEAR(s.fm_extent, fm_extent_oracle(t), 1e-9) << trial;
    EXPECT_LE(s.min, s.mean);
    EXPECT_LE(s.mean, s.max);
    EXPECT_DOUBLE_EQ(s.range, s.max - s.min);
  }
}

TEST(F0Statistics, NarrowVersusWideContourKeepsRangeOrdering) {
  std::vector<double> lfc, hfc;
  for (int i = 0; i < 100; ++i) {
    const double u = std::sin(2.0 * kPi * i / 50.0);
    lfc.push_back(120.0 + 16.515 * u);
    hfc.push_back(300.0 + 257.1 * u);
  }
  EXPECT_LT(f0_statistics(lfc).range, f0_statistics(hfc).range);
  EXPECT_NEAR(f0_statistics(lfc).range, 33.03, 0.1);
}

// Spectrum --------------------------------------------------------------------

double bin_of(const FrameConfig& cfg) {
  double bin_hz = 0.0;
  mean_power_spectrum(sine(1000.0, 0.5, 0.1, kRate), kRate, cfg, &bin_hz);
  return bin_hz;
}

TEST(SpectralFeatures, PureSine) {
  const FrameConfig cfg;
  const double bin = bin_of(cfg);
  const auto s = spectral_features(sine(1000.0, 0.5, 0.5, kRate), kRate, cfg);
  EXPECT_NEAR(s.centroid_hz, 1000.0, bin);
  EXPECT_NEAR(s.fpeak_hz, 1000.0, bin / 2);
  EXPECT_NEAR(s.q25_hz, 1000.0, bin);
  EXPECT_NEAR(s.q50_hz, 1000.0, bin);
  EXPECT_NEAR(s.q75_hz, 1000.0, bin);
}

TEST(SpectralFeatures, WhiteNoiseMedianAtHalfNyquist) {
  const auto s = spectral_features(white_noise(4 * kRate, 0.1, 5), kRate, FrameConfig{});
  EXPECT_NEAR(s.q50_hz, 0.25 * kRate, 0.05 * 0.25 * kRate);
  EXPECT_LE(s.q25_hz, s.q50_hz);
  EXPECT_LE(s.q50_hz, s.q75_hz);
}

TEST(SpectralFeatures, TwoEqualLines) {
  const FrameConfig cfg;
  const double bin = bin_of(cfg);
  const auto x = add(sine(500.0, 0.3, 0.5, kRate), sine(1500.0, 0.3, 0.5, kRate));
  const auto s = spectral_features(x, kRate, cfg);
  EXPECT_NEAR(s.centroid_hz, 1000.0, bin);
  EXPECT_NEAR(s.q25_hz, 500.0, bin);
  EXPECT_NEAR(s.q75_hz, 1500.0, bin);
  EXPECT_GT(s.bandwidth_hz, 1000.0 - 2 * bin);
}

TEST(SpectralFeatures, SilenceThrows) {
  EXPECT_EQ(error_code_of([] { spectral_features(std::vector<double>(4000, 0.0), kRate, FrameConfig{}); }),
            ErrorCode::ZeroEnergyFrame);
}

TEST(SpectralFeatures, QuartileOrderingOnRandomEvents) {
  Rng rng(99);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto n = static_cast<std::size_t>(rng.uniform(0.03, 0.15) * kRate);
    auto x = white_noise(n, rng.uniform(0.001, 0.3), 1000 + trial);
    const int tones = static_cast<int>(rng.uniform(0.0, 4.0));
    for (int t = 0; t < tones; ++t) {
      const auto s = sine(rng.uniform(60.0, 7900.0), rng.uniform(0.0, 2.0), static_cast<double>(n) / kRate, kRate);
      for (std::size_t i = 0; i < n && i < s.size(); ++i) x[i] += s[i];
    }
    const auto f = spectral_features(x, kRate, FrameConfig{});
    ASSERT_LE(f.q25_hz, f.q50_hz) << trial;
    ASSERT_LE(f.q50_hz, f.q75_hz) << trial;
    ASSERT_GE(f.bandwidth_hz, 0.0) << trial;
  }
}

// Amplitude -------------------------------------------------------------------

TEST(AmplitudeFeatures, SineRms) {
  for (double a : {0.1, 0.5, 0.9}) {
    const auto f = amplitude_features(sine(440.0, a, 1.0, kRate), kRate, FrameConfig{});
    EXPECT_NEAR(f.rms_mean, a / std::sqrt(2.0), 1e-3);
    EXPECT_NEAR(f.amplitude_db, 20.0 * std::log10(a / std::sqrt(2.0)), 0.01);
    EXPECT_LE(f.amplitude_db, 0.0);
  }
}

TEST(AmplitudeFeatures, SineZeroCrossingRate) {
  const FrameConfig cfg;
  const double per_frame = 1.0 / static_cast<double>(cfg.frame_length(kRate));
  for (double f : {100.0, 440.0, 2000.0}) {
    const auto af = amplitude_features(sine(f, 0.5, 1.0, kRate, 0.3), kRate, cfg);
    EXPECT_NEAR(af.zcr_mean, 2.0 * f / kRate, per_frame) << f;
  }
}

TEST(AmplitudeFeatures, FullAmTone) {
  auto x = sine(500.0, 0.5, 1.0, kRate);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] *= 0.5 * (1.0 - std::cos(2.0 * kPi * 8.0 * static_cast<double>(i) / kRate));
  }
  const auto af = amplitude_features(x, kRate, FrameConfig{});
  EXPECT_NEAR(af.am_rate_hz, 8.0, 1.0);
  EXPECT_GT(af.am_extent_db, 6.0);
  EXPECT_GT(af.am_var_db_per_s, 0.0);
}

TEST(AmplitudeFeatures, SteadyToneHasNoModulation) {
  const auto af = amplitude_features(sine(500.0, 0.5, 1.0, kRate), kRate, FrameConfig{});
  EXPECT_EQ(af.am_rate_hz, 0.0);
  EXPECT_EQ(af.am_extent_db, 0.0);
  EXPECT_NEAR(af.am_var_db_per_s, 0.0, 0.05);
}

TEST(FindPeaks, HandWorkedProminences) {
  const std::vector<double> env{0, 3, 1, 2, 0.5, 5, 0};
  EXPECT_EQ(find_peaks(env, 1.5), (std::vector<std::size_t>{1, 5}));
  EXPECT_EQ(find_peaks(env, 0.9), (std::vector<std::size_t>{1, 3, 5}));
  EXPECT_TRUE(find_peaks(env, 6.0).empty());
}

TEST(FindPeaks, PlateauCountsOnce) {
  const std::vector<double> env{0, 4, 4, 4, 0};
  EXPECT_EQ(find_peaks(env, 1.0), (std::vector<std::size_t>{1}));
}

// Formants --------------------------------------------------------------------

SynthSpec vowel_spec(std::array<double, 4> centers, double f0, std::uint64_t seed) {
  SynthSpec s;
  s.duration_s = 0.8;
  s.f0_mean_hz = s.f0_start_hz = s.f0_end_hz = f0;
  for (std::size_t k = 0; k < 4; ++k) s.formants[k] = {centers[k], kFormantBandwidths[k]};
  s.noise_snr_db = 40.0;
  s.seed = seed;
  return s;
}

TEST(FormantFeatures, SyntheticVowel) {
  const auto clip = render(vowel_spec({600, 1700, 2800, 3800}, 120.0, 4), kRate);
  const auto contour = extract_f0(clip.samples, kRate, FrameConfig{});
  const auto f = formant_features(clip.samples, kRate, FrameConfig{}, contour);
  ASSERT_TRUE(f.mean[0] && f.mean[1]);
  EXPECT_NEAR(*f.mean[0], 600.0, 60.0);
  EXPECT_NEAR(*f.mean[1], 1700.0, 170.0);
  if (f.mean[2] && f.mean[3]) {
    EXPECT_LT(*f.mean[0], *f.mean[1]);
    EXPECT_LT(*f.mean[1], *f.mean[2]);
    EXPECT_LT(*f.mean[2], *f.mean[3]);
  }
}

TEST(FormantFeatures, SecondFormantOrderingBetweenClasses) {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const auto hfc = render(vowel_spec(kHfcFormants, 150.0, seed), kRate);
    const auto lfc = render(vowel_spec(kLfcFormants, 150.0, seed), kRate);
    const auto fh = formant_features(hfc.samples, kRate, FrameConfig{}, extract_f0(hfc.samples, kRate, FrameConfig{}));
    const auto fl = formant_features(lfc.samples, kRate, FrameConfig{}, extract_f0(lfc.samples, kRate, FrameConfig{}));
    ASSERT_TRUE(fh.mean[1] && fl.mean[1]);
    EXPECT_GT(*fh.mean[1], *fl.mean[1]) << seed;
  }
}

TEST(FormantFeatures, UnvoicedNoiseIsUnresolved) {
  const auto x = white_noise(kRate / 2, 0.1, 8);
  EXPECT_EQ(error_code_of([&] { formant_features(x, kRate, FrameConfig{}, F0Contour{}); }),
            ErrorCode::FormantsUnresolved);
}

TEST(FormantFeatures, LpcOrderFollowsSampleRate) {
  EXPECT_EQ(formant_lpc_order(8000), 10u);
  EXPECT_EQ(formant_lpc_order(16000), 18u);
  EXPECT_EQ(formant_lpc_order(48000), 24u);
  EXPECT_EQ(formant_lpc_order(16000, 200.0), 18u);
  EXPECT_EQ(formant_lpc_order(16000, 493.0), 14u);  // 16.2 harmonics below Nyquist
  EXPECT_EQ(formant_lpc_order(16000, 590.0), 12u);
  EXPECT_EQ(formant_lpc_order(8000, 1500.0), 4u);
}

// MFCC ------------------------------------------------------------------------

TEST(Mfcc, RepeatedFramesHaveZeroDeltas) {
  // 400 Hz has a 40-sample period, so every 160-sample hop sees the same frame.
  const auto m = mfcc_features(sine(400.0, 0.5, 0.5, kRate), kRate, FrameConfig{});
  for (double d : m.delta_mean) EXPECT_NEAR(d, 0.0, 1e-9);
  EXPECT_NEAR(m.mean_abs_delta, 0.0, 1e-9);
}

TEST(Mfcc, GainLandsInFirstCoefficient) {
  const auto x = add(sawtooth(130.0, 0.1, 0.5), white_noise(kRate / 2, 0.01, 2));
  auto y = x;
  for (double& v : y) v *= 4.0;
  const auto a = mfcc_features(x, kRate, FrameConfig{});
  const auto b = mfcc_features(y, kRate, FrameConfig{});
  EXPECT_GT(b.mean[0], a.mean[0]);
  for (std::size_t k = 1; k < kMfccCount; ++k) EXPECT_NEAR(a.mean[k], b.mean[k], 1e-6) << k;
}

TEST(Mfcc, SilenceThrows) {
  EXPECT_EQ(error_code_of([] { mfcc_features(std::vector<double>(4000, 0.0), kRate, FrameConfig{}); }),
            ErrorCode::ZeroEnergyFrame);
}

TEST(Mfcc, HighCallsChangeMoreAbruptlyThanLowCalls) {
  int wins = 0;
  double sum_h = 0.0, sum_l = 0.0;
  for (std::uint64_t i = 0; i < 20; ++i) {
    const auto hfc = render(corpus_spec(CallLabel::HFC, i, 31, true), kRate);
    const auto lfc = render(corpus_spec(CallLabel::LFC, i, 31, true), kRate);
    const double dh = mfcc_features(hfc.samples, kRate, FrameConfig{}).mean_abs_delta;
    const double dl = mfcc_features(lfc.samples, kRate, FrameConfig{}).mean_abs_delta;
    sum_h += dh;
    sum_l += dl;
    wins += dh > dl;
  }
  EXPECT_GT(sum_h / 20.0, sum_l / 20.0);
  EXPECT_GT(wins, 10);
}

// HNR -------------------------------------------------------------------------

TEST(Hnr, PureSineIsHighlyPeriodic) {
  const auto c = extract_f0(sine(200.0, 0.5, 0.5, kRate), kRate, FrameConfig{});
  EXPECT_GT(hnr(c), 30.0);
}

TEST(Hnr, EqualPowerNoiseGivesZeroDecibels) {
  const auto s = sine(200.0, 0.5, 2.0, kRate);
  const auto x = add(s, white_noise(s.size(), 0.5 / std::sqrt(2.0), 21));
  const auto c = extract_f0(x, kRate, FrameConfig{});
  EXPECT_NEAR(hnr(c), 0.0, 1.5);
}

TEST(Hnr, ClampedAtUnity) {
  F0Contour c;
  c.f0_hz = {100.0, 100.0};
  c.times_s = {0.0, 0.01};
  c.strength = {1.0, 1.0};
  const double h = hnr(c);
  EXPECT_TRUE(std::isfinite(h));
  EXPECT_NEAR(h, 60.0, 0.01);
}

TEST(Hnr, EmptyContourThrows) {
  EXPECT_EQ(error_code_of([] { hnr(F0Contour{}); }), ErrorCode::NoVoicedFrames);
}

// Aggregation -----------------------------------------------------------------

TEST(ExtractAll, SilenceThrows) {
  EXPECT_EQ(error_code_of([] { extract_all(std::vector<double>(8000, 0.0), kRate, FrameConfig{}); }),
            ErrorCode::ZeroEnergyFrame);
}

TEST(ExtractAll, NoiseLeavesPitchFieldsMissing) {
  const auto f = extract_all(white_noise(kRate / 2, 0.1, 4), kRate, FrameConfig{});
  EXPECT_FALSE(f.f0_mean.has_value());
  EXPECT_FALSE(f.hnr_db.has_value());
  EXPECT_FALSE(f.formant_mean[0].has_value());
  EXPECT_GT(f.rms_mean, 0.0);
}

TEST(ExtractAll, SynthesizedCallsLandInTheirClassRanges) {
  for (std::size_t i = 0; i < 5; ++i) {
    const auto lfc = extract_all(render(corpus_spec(CallLabel::LFC, i, 3, true), kRate).samples, kRate, FrameConfig{});
    ASSERT_TRUE(lfc.f0_mean.has_value());
    EXPECT_GE(*lfc.f0_mean, 72.61);
    EXPECT_LE(*lfc.f0_mean, 183.27);
    EXPECT_GE(lfc.duration_s, 0.650);
    EXPECT_LE(lfc.duration_s, 2.921);
    const auto hfc = extract_all(render(corpus_spec(CallLabel::HFC, i, 3, true), kRate).samples, kRate, FrameConfig{});
    ASSERT_TRUE(hfc.f0_mean.has_value());
    EXPECT_GE(*hfc.f0_mean, 110.59);
    EXPECT_LE(*hfc.f0_mean, 494.16);
  }
}

TEST(ExtractAll, InvariantsHold) {
  const auto f = extract_all(render(corpus_spec(CallLabel::HFC, 2, 9, true), kRate).samples, kRate, FrameConfig{});
  EXPECT_LE(f.q25_hz, f.q50_hz);
  EXPECT_LE(f.q50_hz, f.q75_hz);
  ASSERT_TRUE(f.f0_min && f.f0_mean && f.f0_max && f.f0_range);
  EXPECT_LE(*f.f0_min, *f.f0_mean);
  EXPECT_LE(*f.f0_mean, *f.f0_max);
  EXPECT_DOUBLE_EQ(*f.f0_range, *f.f0_max - *f.f0_min);
  EXPECT_GE(f.rms_mean, 0.0);
  EXPECT_LE(f.rms_mean, 1.0);
  EXPECT_GE(f.zcr_mean, 0.0);
  EXPECT_LE(f.zcr_mean, 1.0);
  EXPECT_GT(f.duration_s, 0.0);
  EXPECT_LE(f.amplitude_db, 0.0);
  EXPECT_GE(*f.fm_extent_hz, 0.0);
  EXPECT_GE(f.am_extent_db, 0.0);
}

TEST(ExtractAll, GainCovariance) {
  const auto x = render(corpus_spec(CallLabel::LFC, 1, 12, true), kRate).samples;
  const double g = 0.5;
  auto y = x;
  for (double& v : y) v *= g;
  const auto a = extract_all(x, kRate, FrameConfig{});
  const auto b = extract_all(y, kRate, FrameConfig{});
  double bin = 0.0;
  mean_power_spectrum(x, kRate, FrameConfig{}, &bin);
  EXPECT_NEAR(b.amplitude_db - a.amplitude_db, 20.0 * std::log10(g), 1e-6);
  EXPECT_NEAR(b.rms_mean, g * a.rms_mean, 1e-12);
  ASSERT_TRUE(a.f0_mean && b.f0_mean);
  EXPECT_NEAR(*a.f0_mean, *b.f0_mean, 1e-6);
  EXPECT_DOUBLE_EQ(a.zcr_mean, b.zcr_mean);
  EXPECT_NEAR(a.q25_hz, b.q25_hz, bin);
  EXPECT_NEAR(a.q50_hz, b.q50_hz, bin);
  EXPECT_NEAR(a.q75_hz, b.q75_hz, bin);
  EXPECT_NEAR(a.spectral_centroid_hz, b.spectral_centroid_hz, bin);
  for (std::size_t k = 0; k < 4; ++k) {
    ASSERT_EQ(a.formant_mean[k].has_value(), b.formant_mean[k].has_value());
    if (a.formant_mean[k]) EXPECT_NEAR(*a.formant_mean[k], *b.formant_mean[k], bin);
  }
}

TEST(ExtractAll, LeadingSilenceShiftsOnlyTheTimes) {
  const FrameConfig cfg;
  auto call = render(corpus_spec(CallLabel::HFC, 0, 5, true), kRate);
  call.samples = peak_normalize(call, 0.8).samples;
  std::vector<double> base(kRate / 5, 0.0);
  base.insert(base.end(), call.samples.begin(), call.samples.end());
  base.insert(base.end(), kRate / 5, 0.0);
  std::vector<double> shifted(static_cast<std::size_t>(0.37 * kRate), 0.0);
  shifted.insert(shifted.end(), base.begin(), base.end());

  const auto ea = detect_events(AudioClip{base, kRate, "a"}, cfg, VadConfig{});
  const auto eb = detect_events(AudioClip{shifted, kRate, "b"}, cfg, VadConfig{});
  ASSERT_EQ(ea.size(), 1u);
  ASSERT_EQ(eb.size(), 1u);
  const double hop = cfg.hop_ms / 1000.0;
  EXPECT_NEAR(eb[0].start_s - ea[0].start_s, 0.37, hop);
  const auto fa = extract_all(ea[0], cfg);
  const auto fb = extract_all(eb[0], cfg);
  EXPECT_NEAR(fa.duration_s, fb.duration_s, hop);
  EXPECT_DOUBLE_EQ(fa.duration_s, ea[0].end_s - ea[0].start_s);
  ASSERT_TRUE(fa.f0_mean && fb.f0_mean);
  EXPECT_NEAR(*fa.f0_mean, *fb.f0_mean, 0.02 * *fa.f0_mean);
  EXPECT_NEAR(fa.amplitude_db, fb.amplitude_db, 0.5);
}

// CSV -------------------------------------------------------------------------

TEST(FeatureCsv, HeaderIsFixed) {
  std::string expected =
      "source_id,start_s,end_s,duration_s,f0_min,f0_mean,f0_max,f0_range,fm_extent_hz,bandwidth_hz,amplitude_db,"
      "am_extent_db,am_rate_hz,am_var_db_per_s,q25_hz,q50_hz,q75_hz,f1_mean,f2_mean,f3_mean,f4_mean,f1_range,"
      "f2_range,f3_range,f4_range,fpeak_hz,spectral_centroid_hz,rms_mean,zcr_mean,hnr_db";
  for (int i = 0; i < 13; ++i) expected += ",mfcc_" + std::to_string(i);
  for (int i = 0; i < 13; ++i) expected += ",dmfcc_" + std::to_string(i);
  expected += ",label";
  EXPECT_EQ(feature_csv_header(), expected);
}

TEST(FeatureCsv, RoundTripKeepsSixDigitsAndMissingCells) {
  const auto f = extract_all(render(corpus_spec(CallLabel::HFC, 0, 2, true), kRate).samples, kRate, FrameConfig{});
  auto g = f;
  g.f0_mean.reset();
  g.formant_mean[3].reset();
  FeatureTable t;
  t.rows.push_back(make_feature_row("a.wav", 0.0, f.duration_s, f, CallLabel::HFC));
  t.rows.push_back(make_feature_row("dir/b.wav", 1.5, 2.25, g, std::nullopt));
  const auto parsed = parse_feature_csv(format_feature_csv(t));
  ASSERT_EQ(parsed.rows.size(), 2u);
  for (std::size_t r = 0; r < 2; ++r) {
    EXPECT_EQ(parsed.rows[r].source_id, t.rows[r].source_id);
    EXPECT_EQ(parsed.rows[r].label, t.rows[r].label);
    ASSERT_EQ(parsed.rows[r].values.size(), feature_names().size());
    for (std::size_t c = 0; c < t.rows[r].values.size(); ++c) {
      const auto& want = t.rows[r].values[c];
      const auto& got = parsed.rows[r].values[c];
      ASSERT_EQ(want.has_value(), got.has_value()) << feature_names()[c];
      if (want) EXPECT_NEAR(*got, *want, 5e-6 * std::max(1.0, std::abs(*want))) << feature_names()[c];
    }
  }
  EXPECT_FALSE(parsed.rows[1].values[feature_index("f0_mean")].has_value());
}

TEST(FeatureCsv, PermutedHeaderIsRejected) {
  auto header = feature_csv_header();
  const auto pos = header.find("f0_min,f0_mean");
  header.replace(pos, 14, "f0_mean,f0_min");
  EXPECT_EQ(error_code_of([&] { parse_feature_csv(header + "\n"); }), ErrorCode::SchemaMismatch);
}

TEST(FeatureCsv, ShortRowIsRejected) {
  EXPECT_EQ(error_code_of([] { parse_feature_csv(feature_csv_header() + "\na.wav,0,1\n"); }),
            ErrorCode::SchemaMismatch);
}

TEST(FeatureCsv, UnknownColumnName) {
  EXPECT_EQ(error_code_of([] { feature_index("loudness"); }), ErrorCode::SchemaMismatch);
}

}  // namespace
}  // namespace herdsig
