#include "herdsig/audio_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <numbers>
#include <set>

#include "herdsig/dsp.hpp"
#include "herdsig/error.hpp"
#include "herdsig/fileutil.hpp"
#include "herdsig/simd/kernels.hpp"

namespace herdsig {

WindowKind parse_window_kind(const std::string& name) {
  if (name == "rectangular" || name == "rect") return WindowKind::Rectangular;
  if (name == "hann") return WindowKind::Hann;
  if (name == "hamming") return WindowKind::Hamming;
  throw Error(ErrorCode::InvalidArgument, "unknown window '" + name + "'");
}

std::string window_kind_name(WindowKind kind) {
  switch (kind) {
    case WindowKind::Rectangular: return "rectangular";
    case WindowKind::Hann: return "hann";
    case WindowKind::Hamming: return "hamming";
  }
  return "hann";
}

std::vector<double> make_window(WindowKind kind, std::size_t length) {
  std::vector<double> w(length, 1.0);
  if (kind == WindowKind::Rectangular || length < 2) return w;
  const double denom = static_cast<double>(length - 1);
  for (std::size_t n = 0; n < length; ++n) {
    const double c = std::cos(2.0 * std::numbers::pi * static_cast<double>(n) / denom);
    w[n] = kind == WindowKind::Hann ? 0.5 - 0.5 * c : 0.54 - 0.46 * c;
  }
  return w;
}

std::size_t FrameConfig::frame_length(int sample_rate) const {
  return static_cast<std::size_t>(std::lround(frame_ms * sample_rate / 1000.0));
}

std::size_t FrameConfig::hop_length(int sample_rate) const {
  return static_cast<std::size_t>(std::lround(hop_ms * sample_rate / 1000.0));
}

void FrameConfig::validate(int sample_rate) const {
  if (!(hop_ms > 0.0 && hop_ms <= frame_ms)) {
    throw Error(ErrorCode::InvalidArgument, "frame config needs 0 < hop_ms <= frame_ms");
  }
  if (frame_length(sample_rate) < 2 || hop_length(sample_rate) < 1) {
    throw Error(ErrorCode::InvalidArgument, "frame shorter than 2 samples");
  }
}

std::size_t frame_count(std::size_t n, std::size_t frame, std::size_t hop) noexcept {
  if (frame == 0 || hop == 0 || n < frame) return 0;
  return (n - frame) / hop + 1;
}

FrameSet frames(std::span<const double> samples, int sample_rate, const FrameConfig& cfg) {
  cfg.validate(sample_rate);
  FrameSet fs;
  fs.frame_length = cfg.frame_length(sample_rate);
  fs.hop_length = cfg.hop_length(sample_rate);
  fs.sample_rate = sample_rate;
  const std::size_t count = frame_count(samples.size(), fs.frame_length, fs.hop_length);
  if (count == 0) {
    throw Error(ErrorCode::ClipTooShort, std::to_string(samples.size()) + " samples, frame needs " +
                                             std::to_string(fs.frame_length));
  }
  const auto window = make_window(cfg.window, fs.frame_length);
  fs.data.resize(count * fs.frame_length);
  fs.start_s.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    const auto src = samples.subspan(i * fs.hop_length, fs.frame_length);
    std::span<double> dst(fs.data.data() + i * fs.frame_length, fs.frame_length);
    simd::multiply(src, window, dst);
    fs.start_s[i] = static_cast<double>(i * fs.hop_length) / sample_rate;
  }
  return fs;
}

// WAV ------------------------------------------------------------------------

namespace {

std::uint16_t get_u16(const unsigned char* p) { return static_cast<std::uint16_t>(p[0] | (p[1] << 8)); }
std::uint32_t get_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void put_u16(std::vector<unsigned char>& out, std::uint16_t v) {
  out.push_back(static_cast<unsigned char>(v & 0xff));
  out.push_back(static_cast<unsigned char>(v >> 8));
}
void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>((v >> (8 * i)) & 0xff));
}
void put_tag(std::vector<unsigned char>& out, const char* tag) { out.insert(out.end(), tag, tag + 4); }

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

}  // namespace

AudioClip decode_wav(std::span<const unsigned char> bytes, std::string source_id) {
  const auto malformed = [&](const std::string& why) {
    return Error(ErrorCode::MalformedContainer, source_id + ": " + why);
  };
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw malformed("not a RIFF/WAVE file");
  }
  const std::size_t riff_end = std::min<std::size_t>(bytes.size(), 8 + std::size_t{get_u32(bytes.data() + 4)});

  bool have_fmt = false;
  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  const unsigned char* data = nullptr;
  std::size_t data_size = 0;

  std::size_t pos = 12;
  while (pos + 8 <= riff_end) {
    const unsigned char* chunk = bytes.data() + pos;
    const std::size_t size = get_u32(chunk + 4);
    const std::size_t body = pos + 8;
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16 || body + size > bytes.size()) throw malformed("bad fmt chunk");
      format = get_u16(chunk + 8);
      channels = get_u16(chunk + 10);
      rate = get_u32(chunk + 12);
      bits = get_u16(chunk + 22);
      if (format == kFormatExtensible) {
        if (size < 26) throw malformed("short extensible fmt chunk");
        format = get_u16(chunk + 32);
      }
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      if (body + size > bytes.size()) throw malformed("data chunk truncated");
      data = bytes.data() + body;
      data_size = size;
      break;
    }
    pos = body + size + (size & 1);
  }
  if (!have_fmt) throw malformed("missing fmt chunk");
  if (data == nullptr) throw malformed("missing data chunk");

  const bool pcm16 = format == kFormatPcm && bits == 16;
  const bool f32 = format == kFormatFloat && bits == 32;
  if (!pcm16 && !f32) {
    throw Error(ErrorCode::UnsupportedEncoding,
                source_id + ": format " + std::to_string(format) + " with " + std::to_string(bits) + " bits");
  }
  if (channels != 1 && channels != 2) {
    throw Error(ErrorCode::UnsupportedEncoding, source_id + ": " + std::to_string(channels) + " channels");
  }
  if (rate < static_cast<std::uint32_t>(kMinSampleRate)) {
    throw Error(ErrorCode::UnsupportedEncoding, source_id + ": sample rate " + std::to_string(rate) + " below 8000");
  }
  const std::size_t block = channels * (bits / 8);
  if (data_size % block != 0) throw malformed("data size not a whole number of frames");
  const std::size_t n = data_size / block;
  if (n == 0) throw Error(ErrorCode::EmptyAudio, source_id + ": no samples");

  AudioClip clip;
  clip.sample_rate = static_cast<int>(rate);
  clip.source_id = std::move(source_id);
  clip.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t c = 0; c < channels; ++c) {
      const unsigned char* p = data + i * block + c * (bits / 8);
      if (pcm16) {
        acc += static_cast<std::int16_t>(get_u16(p)) / 32768.0;
      } else {
        const std::uint32_t u = get_u32(p);
        float f;
        std::memcpy(&f, &u, sizeof f);
        if (!std::isfinite(f)) throw malformed("non-finite float sample");
        acc += std::clamp(static_cast<double>(f), -1.0, 1.0);
      }
    }
    clip.samples[i] = acc / channels;
  }
  return clip;
}

AudioClip load_wav(const std::filesystem::path& path) {
  const auto bytes = read_bytes(path);
  return decode_wav(bytes, path.stem().string());
}

std::vector<unsigned char> encode_wav(const AudioClip& clip, WavEncoding encoding) {
  const std::uint16_t bits = encoding == WavEncoding::Pcm16 ? 16 : 32;
  const std::uint32_t data_size = static_cast<std::uint32_t>(clip.samples.size() * (bits / 8));
  std::vector<unsigned char> out;
  out.reserve(44 + data_size);
  put_tag(out, "RIFF");
  put_u32(out, 36 + data_size);
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put_u32(out, 16);
  put_u16(out, encoding == WavEncoding::Pcm16 ? kFormatPcm : kFormatFloat);
  put_u16(out, 1);
  put_u32(out, static_cast<std::uint32_t>(clip.sample_rate));
  put_u32(out, static_cast<std::uint32_t>(clip.sample_rate) * (bits / 8));
  put_u16(out, bits / 8);
  put_u16(out, bits);
  put_tag(out, "data");
  put_u32(out, data_size);
  for (double x : clip.samples) {
    if (encoding == WavEncoding::Pcm16) {
      const long v = std::clamp(std::lround(x * 32768.0), -32768L, 32767L);
      put_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(v)));
    } else {
      const float f = static_cast<float>(x);
      std::uint32_t u;
      std::memcpy(&u, &f, sizeof u);
      put_u32(out, u);
    }
  }
  return out;
}

void write_wav(const std::filesystem::path& path, const AudioClip& clip, WavEncoding encoding) {
  write_file_atomic(path, encode_wav(clip, encoding));
}

// Level ----------------------------------------------------------------------

double peak_abs(std::span<const double> samples) noexcept {
  double peak = 0.0;
  for (double x : samples) peak = std::max(peak, std::abs(x));
  return peak;
}

AudioClip peak_normalize(const AudioClip& clip, double target_peak) {
  if (!(target_peak > 0.0 && target_peak <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "target peak must lie in (0, 1]");
  }
  AudioClip out = clip;
  const double peak = peak_abs(clip.samples);
  if (peak == 0.0) return out;
  simd::scale(clip.samples, target_peak / peak, out.samples);
  return out;
}

AudioClip reduce_noise(const AudioClip& clip, const NoiseGateConfig& cfg) {
  cfg.frame.validate(clip.sample_rate);
  const std::size_t len = cfg.frame.frame_length(clip.sample_rate);
  const std::size_t hop = cfg.frame.hop_length(clip.sample_rate);
  const std::size_t count = frame_count(clip.samples.size(), len, hop);
  if (count == 0) return clip;

  const std::size_t nfft = dsp::next_power_of_two(len);
  const std::size_t bins = nfft / 2 + 1;
  const auto window = make_window(cfg.frame.window, len);

  // Zero padding gives every sample the full window overlap.
  const std::size_t pad = len - hop;
  const std::size_t n = clip.samples.size();
  const std::size_t padded_frames = (n + 2 * pad - len + hop - 1) / hop + 1;
  std::vector<double> x((padded_frames - 1) * hop + len, 0.0);
  std::copy(clip.samples.begin(), clip.samples.end(), x.begin() + static_cast<std::ptrdiff_t>(pad));

  std::vector<std::vector<std::complex<double>>> spectra(padded_frames);
  std::vector<double> energy(padded_frames, 0.0);
  std::vector<std::size_t> interior;
  for (std::size_t i = 0; i < padded_frames; ++i) {
    auto& buf = spectra[i];
    buf.assign(nfft, {});
    for (std::size_t m = 0; m < len; ++m) buf[m] = x[i * hop + m] * window[m];
    dsp::fft(buf);
    for (std::size_t k = 0; k < bins; ++k) energy[i] += std::norm(buf[k]);
    if (i * hop >= pad && i * hop + len <= pad + n) interior.push_back(i);
  }

  std::stable_sort(interior.begin(), interior.end(),
                   [&](std::size_t a, std::size_t b) { return energy[a] < energy[b]; });
  const std::size_t quiet = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::floor(cfg.quiet_fraction * static_cast<double>(interior.size()))));
  std::vector<double> profile(bins, 0.0);
  for (std::size_t q = 0; q < quiet; ++q) {
    for (std::size_t k = 0; k < bins; ++k) profile[k] += std::abs(spectra[interior[q]][k]);
  }
  for (double& p : profile) p /= static_cast<double>(quiet);

  std::vector<double> out(x.size(), 0.0);
  std::vector<double> norm(x.size(), 0.0);
  for (std::size_t i = 0; i < padded_frames; ++i) {
    auto& buf = spectra[i];
    for (std::size_t k = 0; k < bins; ++k) {
      const double mag = std::abs(buf[k]);
      const double target = std::max(mag - profile[k], cfg.floor * profile[k]);
      const std::complex<double> g = mag > 0.0 ? buf[k] * (target / mag) : std::complex<double>(0.0);
      buf[k] = g;
      if (k > 0 && k < nfft - k) buf[nfft - k] = std::conj(g);
    }
    dsp::fft(buf, true);
    for (std::size_t m = 0; m < len; ++m) {
      out[i * hop + m] += buf[m].real() * window[m];
      norm[i * hop + m] += window[m] * window[m];
    }
  }
  AudioClip result = clip;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = norm[pad + i];
    result.samples[i] = w > 1e-8 ? std::clamp(out[pad + i] / w, -1.0, 1.0) : 0.0;
  }
  return result;
}

// Manifest -------------------------------------------------------------------

std::string label_code(CallLabel label) { return label == CallLabel::HFC ? "HFC" : "LFC"; }

std::string label_name(CallLabel label) {
  return label == CallLabel::HFC ? "Distress/Arousal" : "Contentment/Calm";
}

CallLabel parse_label(const std::string& code) {
  if (code == "HFC" || code == "1") return CallLabel::HFC;
  if (code == "LFC" || code == "0") return CallLabel::LFC;
  throw Error(ErrorCode::InvalidArgument, "unknown label '" + code + "'");
}

CorpusManifest read_manifest(const std::filesystem::path& path) {
  const auto lines = split_lines(read_text(path));
  if (lines.empty() || split_csv_line(lines[0]) != std::vector<std::string>{"path", "label", "cow_id"}) {
    throw Error(ErrorCode::SchemaMismatch, path.string() + ": manifest header must be path,label,cow_id");
  }
  const auto base = path.parent_path();
  CorpusManifest manifest;
  std::set<std::string> seen;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto fields = split_csv_line(lines[i]);
    if (fields.size() != 3) {
      throw Error(ErrorCode::SchemaMismatch, path.string() + ": line " + std::to_string(i + 1) + " needs 3 fields");
    }
    ManifestEntry e;
    e.wav_path = fields[0];
    if (e.wav_path.is_relative()) e.wav_path = base / e.wav_path;
    if (!fields[1].empty()) e.label = parse_label(fields[1]);
    e.cow_id = fields[2];
    if (!seen.insert(e.wav_path.lexically_normal().string()).second) {
      throw Error(ErrorCode::InvalidArgument, path.string() + ": duplicate path " + fields[0]);
    }
    manifest.entries.push_back(std::move(e));
  }
  return manifest;
}

std::string format_manifest(const CorpusManifest& manifest) {
  std::string out = "path,label,cow_id\n";
  for (const auto& e : manifest.entries) {
    out += csv_escape(e.wav_path.generic_string());
    out += ',';
    if (e.label) out += label_code(*e.label);
    out += ',';
    out += csv_escape(e.cow_id);
    out += '\n';
  }
  return out;
}

void write_manifest(const std::filesystem::path& path, const CorpusManifest& manifest) {
  write_file_atomic(path, format_manifest(manifest));
}

}  // namespace herdsig
