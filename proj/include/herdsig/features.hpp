#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "herdsig/audio_io.hpp"
#include "herdsig/segmentation.hpp"

namespace herdsig {

inline constexpr double kF0MinHz = 50.0;
inline constexpr double kF0MaxHz = 600.0;
inline constexpr double kVoicingThreshold = 0.45;
inline constexpr std::size_t kSincHalfWidth = 24;  // taps per side for autocorrelation interpolation
inline constexpr std::size_t kMfccCount = 13;
inline constexpr std::size_t kMelFilters = 26;

struct F0Contour {
  std::vector<double> times_s;            // centre of each voiced frame
  std::vector<double> f0_hz;
  std::vector<double> strength;           // normalized autocorrelation at the chosen lag
  std::vector<std::size_t> frame_index;   // index into the analysis frame grid
  std::size_t analyzed_frames = 0;
  double voicing_fraction = 0.0;

  bool empty() const { return f0_hz.empty(); }
};

// Autocorrelation pitch tracker, one estimate per analysis frame whose
// three-period pitch window fits in the signal. Throws NoVoicedFrames.
F0Contour extract_f0(std::span<const double> samples, int sample_rate, const FrameConfig& cfg);

struct F0Stats {
  double min = 0.0, mean = 0.0, max = 0.0, range = 0.0, fm_extent = 0.0;
};

F0Stats f0_statistics(std::span<const double> f0_track);
inline F0Stats f0_statistics(const F0Contour& contour) { return f0_statistics(contour.f0_hz); }

struct SpectralFeatures {
  double centroid_hz = 0.0, bandwidth_hz = 0.0, q25_hz = 0.0, q50_hz = 0.0, q75_hz = 0.0, fpeak_hz = 0.0;
};

// Mean power spectrum over windowed frames. Throws ZeroEnergyFrame.
std::vector<double> mean_power_spectrum(std::span<const double> samples, int sample_rate, const FrameConfig& cfg,
                                        double* bin_hz);
SpectralFeatures spectral_features_from_power(std::span<const double> power, double bin_hz);
SpectralFeatures spectral_features(std::span<const double> samples, int sample_rate, const FrameConfig& cfg);

struct AmplitudeFeatures {
  double amplitude_db = 0.0, rms_mean = 0.0, zcr_mean = 0.0;
  double am_extent_db = 0.0, am_rate_hz = 0.0, am_var_db_per_s = 0.0;
};

AmplitudeFeatures amplitude_features(std::span<const double> samples, int sample_rate, const FrameConfig& cfg);

// Indices of envelope peaks whose prominence reaches min_prominence.
std::vector<std::size_t> find_peaks(std::span<const double> envelope, double min_prominence);

struct FormantFeatures {
  std::array<std::optional<double>, 4> mean;
  std::array<std::optional<double>, 4> range;
};

// With f0_hz > 0 the order is capped at 0.9 of the harmonic count below Nyquist (at least 4).
std::size_t formant_lpc_order(int sample_rate, double f0_hz = 0.0) noexcept;
// Formant candidates of one frame, ascending, at most four.
std::vector<double> frame_formants(std::span<const double> frame, int sample_rate, WindowKind window,
                                   double f0_hz = 0.0);
// Throws FormantsUnresolved when F1 and F2 cannot be measured; F3/F4 may be absent.
FormantFeatures formant_features(std::span<const double> samples, int sample_rate, const FrameConfig& cfg,
                                 const F0Contour& contour);

struct MfccFeatures {
  std::array<double, kMfccCount> mean{};
  std::array<double, kMfccCount> delta_mean{};
  double mean_abs_delta = 0.0;  // mean |delta| over frames and coefficients
};

// Per-frame MFCC vectors (frames x 13, row-major).
std::vector<std::array<double, kMfccCount>> mfcc_frames(std::span<const double> samples, int sample_rate,
                                                         const FrameConfig& cfg);
MfccFeatures mfcc_features(std::span<const double> samples, int sample_rate, const FrameConfig& cfg);

// Mean over voiced frames of 10*log10(r / (1 - r)), r clamped to [1e-6, 1 - 1e-6].
double hnr(const F0Contour& contour);

struct AcousticFeatures {
  double duration_s = 0.0;
  std::optional<double> f0_min, f0_mean, f0_max, f0_range, fm_extent_hz;
  double bandwidth_hz = 0.0;
  double amplitude_db = 0.0, am_extent_db = 0.0, am_rate_hz = 0.0, am_var_db_per_s = 0.0;
  double q25_hz = 0.0, q50_hz = 0.0, q75_hz = 0.0;
  std::array<std::optional<double>, 4> formant_mean;
  std::array<std::optional<double>, 4> formant_range;
  double fpeak_hz = 0.0, spectral_centroid_hz = 0.0;
  double rms_mean = 0.0, zcr_mean = 0.0;
  std::optional<double> hnr_db;
  std::array<double, kMfccCount> mfcc_mean{};
  std::array<double, kMfccCount> mfcc_delta_mean{};
  double mfcc_mean_abs_delta = 0.0;
};

// Every feature of one event; voicing and formant failures leave fields
// empty. Throws ZeroEnergyFrame on a silent event and ClipTooShort when the
// event holds fewer than three frames.
AcousticFeatures extract_all(std::span<const double> samples, int sample_rate, const FrameConfig& cfg);
inline AcousticFeatures extract_all(const VocalEvent& event, const FrameConfig& cfg) {
  auto f = extract_all(event.samples, event.sample_rate, cfg);
  f.duration_s = event.duration_s();
  return f;
}

// Names of the numeric feature columns, in CSV order (duration_s .. dmfcc_12).
const std::vector<std::string>& feature_names();
// Values in feature_names() order.
std::vector<std::optional<double>> feature_values(const AcousticFeatures& f);

}  // namespace herdsig
