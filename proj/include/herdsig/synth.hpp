#pragma once

#include <array>
#include <cstdint>
#include <filesystem>

#include "herdsig/audio_io.hpp"

namespace herdsig {

struct Resonator {
  double center_hz = 0.0;
  double bandwidth_hz = 0.0;
};

struct SynthSpec {
  CallLabel label = CallLabel::LFC;
  double duration_s = 1.0;
  double f0_mean_hz = 120.0;  // drawn mean pitch; the glide is centred on it
  double f0_start_hz = 120.0;
  double f0_end_hz = 120.0;
  double fm_depth_hz = 0.0;
  double fm_rate_hz = 0.0;
  double am_depth = 0.0;  // 0..1
  double am_rate_hz = 0.0;
  std::array<Resonator, 4> formants{{{600, 80}, {1700, 100}, {2800, 150}, {3800, 200}}};
  double noise_snr_db = 40.0;
  double peak_amplitude = 0.5;
  double breathiness = 0.3;  // aspiration noise std relative to the unit-std source
  std::uint64_t seed = 0;    // drives the noise sources
};

inline constexpr std::array<double, 4> kHfcFormants{609.56, 1704.81, 2779.11, 3800.0};
inline constexpr std::array<double, 4> kLfcFormants{617.35, 1542.96, 2844.92, 3800.0};
inline constexpr std::array<double, 4> kFormantBandwidths{80.0, 100.0, 150.0, 200.0};

// Draws a spec from the class's frequency, loudness and duration ranges.
SynthSpec sample_spec(CallLabel label, std::uint64_t seed, bool exclude_overlap);

// Instantaneous pitch at time t.
double instantaneous_f0(const SynthSpec& spec, double t);

// Source-filter rendering. Throws NyquistViolation when the sample rate
// cannot hold the highest resonator plus its bandwidth.
AudioClip render(const SynthSpec& spec, int sample_rate = 16000);

struct CorpusOptions {
  int sample_rate = 16000;
  bool exclude_overlap = true;
  std::size_t threads = 1;
};

// Writes 2n WAV files and manifest.csv into out_dir; returns the manifest
// with paths relative to out_dir.
CorpusManifest make_corpus(std::size_t n_per_class, std::uint64_t seed, const std::filesystem::path& out_dir,
                           const CorpusOptions& options = {});

// Spec of corpus item i of the given class.
SynthSpec corpus_spec(CallLabel label, std::size_t index, std::uint64_t seed, bool exclude_overlap);

}  // namespace herdsig
