#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace herdsig {

inline constexpr int kMinSampleRate = 8000;

// Decoded mono audio. Samples are finite and lie in [-1, 1].
struct AudioClip {
  std::vector<double> samples;
  int sample_rate = 16000;
  std::string source_id;

  double duration_s() const { return static_cast<double>(samples.size()) / sample_rate; }
};

enum class WindowKind { Rectangular, Hann, Hamming };

WindowKind parse_window_kind(const std::string& name);
std::string window_kind_name(WindowKind kind);

// Symmetric window of the given length.
std::vector<double> make_window(WindowKind kind, std::size_t length);

struct FrameConfig {
  double frame_ms = 25.0;
  double hop_ms = 10.0;
  WindowKind window = WindowKind::Hann;

  std::size_t frame_length(int sample_rate) const;
  std::size_t hop_length(int sample_rate) const;
  // Throws InvalidArgument unless 0 < hop <= frame and frame >= 2 samples.
  void validate(int sample_rate) const;
};

// Number of whole frames: floor((n - frame) / hop) + 1, or 0 when n < frame.
std::size_t frame_count(std::size_t n, std::size_t frame, std::size_t hop) noexcept;

// Windowed analysis frames stored row-major in one buffer.
struct FrameSet {
  std::size_t frame_length = 0;
  std::size_t hop_length = 0;
  int sample_rate = 0;
  std::vector<double> data;
  std::vector<double> start_s;

  std::size_t size() const { return start_s.size(); }
  std::span<const double> frame(std::size_t i) const {
    return {data.data() + i * frame_length, frame_length};
  }
};

FrameSet frames(std::span<const double> samples, int sample_rate, const FrameConfig& cfg);
inline FrameSet frames(const AudioClip& clip, const FrameConfig& cfg) {
  return frames(clip.samples, clip.sample_rate, cfg);
}

// WAV ------------------------------------------------------------------------

enum class WavEncoding { Pcm16, Float32 };

AudioClip load_wav(const std::filesystem::path& path);
AudioClip decode_wav(std::span<const unsigned char> bytes, std::string source_id);
std::vector<unsigned char> encode_wav(const AudioClip& clip, WavEncoding encoding = WavEncoding::Pcm16);
void write_wav(const std::filesystem::path& path, const AudioClip& clip,
               WavEncoding encoding = WavEncoding::Pcm16);

// Level ----------------------------------------------------------------------

// Scales so that max |sample| == target_peak. All-zero input is returned as is.
AudioClip peak_normalize(const AudioClip& clip, double target_peak);

double peak_abs(std::span<const double> samples) noexcept;

struct NoiseGateConfig {
  double quiet_fraction = 0.10;  // share of lowest-energy frames that define the noise profile
  double floor = 0.10;           // residual gain floor, as a multiple of the noise profile
  FrameConfig frame{32.0, 8.0, WindowKind::Hann};
};

// Spectral gating: magnitude minus the noise profile, floored at floor x profile,
// resynthesized by weighted overlap-add. Clips shorter than one frame pass through.
AudioClip reduce_noise(const AudioClip& clip, const NoiseGateConfig& cfg = {});

// Manifest -------------------------------------------------------------------

enum class CallLabel { HFC, LFC };

std::string label_code(CallLabel label);   // "HFC" / "LFC"
std::string label_name(CallLabel label);   // "Distress/Arousal" / "Contentment/Calm"
CallLabel parse_label(const std::string& code);

struct ManifestEntry {
  std::filesystem::path wav_path;
  std::optional<CallLabel> label;
  std::string cow_id;
};

struct CorpusManifest {
  std::vector<ManifestEntry> entries;
};

// CSV with header `path,label,cow_id`. Relative paths resolve against the
// manifest's directory.
CorpusManifest read_manifest(const std::filesystem::path& path);
// Paths are written as given.
void write_manifest(const std::filesystem::path& path, const CorpusManifest& manifest);
std::string format_manifest(const CorpusManifest& manifest);

}  // namespace herdsig
