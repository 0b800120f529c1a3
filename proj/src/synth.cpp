#include "herdsig/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "herdsig/error.hpp"
#include "herdsig/parallel.hpp"
#include "herdsig/random.hpp"
#include "herdsig/simd/kernels.hpp"

namespace herdsig {

namespace {

constexpr double kHfcF0Lo = 110.59, kHfcF0Hi = 494.16;
constexpr double kLfcF0Lo = 72.61, kLfcF0Hi = 183.27;
constexpr double kPitchFloor = 55.0, kPitchCeiling = 590.0;

// Exclusive lower bound for an (lo, hi] draw.
double uniform_open_low(Rng& rng, double lo, double hi) {
  double v = rng.uniform(lo, hi);
  while (v <= lo) v = rng.uniform(lo, hi);
  return v;
}

// Polynomial band-limited step correction for a sawtooth discontinuity.
double poly_blep(double t, double dt) {
  if (t < dt) {
    t /= dt;
    return t + t - t * t - 1.0;
  }
  if (t > 1.0 - dt) {
    t = (t - 1.0) / dt;
    return t * t + t + t + 1.0;
  }
  return 0.0;
}

}  // namespace

SynthSpec sample_spec(CallLabel label, std::uint64_t seed, bool exclude_overlap) {
  Rng rng(seed);
  SynthSpec s;
  s.label = label;
  s.seed = derive_seed(seed, 0x5EED, 1);
  const bool hfc = label == CallLabel::HFC;

  s.duration_s = hfc ? rng.uniform(0.638, 9.581) : rng.uniform(0.650, 2.921);
  if (hfc) {
    s.f0_mean_hz = exclude_overlap ? uniform_open_low(rng, kLfcF0Hi, kHfcF0Hi) : rng.uniform(kHfcF0Lo, kHfcF0Hi);
  } else {
    s.f0_mean_hz = rng.uniform(kLfcF0Lo, exclude_overlap ? kHfcF0Lo : kLfcF0Hi);
  }
  const double peak_db = hfc ? rng.uniform(-39.71, -2.45) : rng.uniform(-53.88, -8.16);
  s.peak_amplitude = std::pow(10.0, peak_db / 20.0);

  s.fm_depth_hz = 0.02 * s.f0_mean_hz;
  s.fm_rate_hz = rng.uniform(3.0, 6.0);
  const double headroom =
      std::min(s.f0_mean_hz - kPitchFloor, kPitchCeiling - s.f0_mean_hz) - s.fm_depth_hz;
  double half_width = hfc ? 0.3 * s.f0_mean_hz : rng.uniform(8.0, 18.0);
  half_width = std::clamp(half_width, 0.0, std::max(0.0, headroom));
  const double dir = rng.coin() ? 1.0 : -1.0;
  s.f0_start_hz = s.f0_mean_hz - dir * half_width;
  s.f0_end_hz = s.f0_mean_hz + dir * half_width;

  s.am_depth = rng.uniform(0.5, 0.8);
  s.am_rate_hz = rng.uniform(3.0, 8.0);

  const auto& preset = hfc ? kHfcFormants : kLfcFormants;
  for (std::size_t k = 0; k < 4; ++k) {
    s.formants[k] = {preset[k] * rng.uniform(0.9, 1.1), kFormantBandwidths[k]};
  }
  s.noise_snr_db = rng.uniform(20.0, 35.0);
  s.breathiness = 0.3;
  return s;
}

double instantaneous_f0(const SynthSpec& spec, double t) {
  const double frac = spec.duration_s > 0.0 ? t / spec.duration_s : 0.0;
  return spec.f0_start_hz + (spec.f0_end_hz - spec.f0_start_hz) * frac +
         spec.fm_depth_hz * std::sin(2.0 * std::numbers::pi * spec.fm_rate_hz * t);
}

AudioClip render(const SynthSpec& spec, int sample_rate) {
  const double sr = sample_rate;
  for (const auto& f : spec.formants) {
    if (sr < 2.0 * (f.center_hz + f.bandwidth_hz)) {
      throw Error(ErrorCode::NyquistViolation,
                  "sample rate " + std::to_string(sample_rate) + " cannot hold a resonator at " +
                      std::to_string(f.center_hz) + " Hz");
    }
  }
  if (!(spec.duration_s > 0.0) || !(spec.peak_amplitude > 0.0 && spec.peak_amplitude <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "spec needs positive duration and peak in (0, 1]");
  }
  const auto n = static_cast<std::size_t>(std::llround(spec.duration_s * sr));
  Rng rng(spec.seed);

  std::vector<double> x(n);
  double phase = 0.0;
  const double saw_gain = std::sqrt(3.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / sr;
    const double dt = instantaneous_f0(spec, t) / sr;
    x[i] = saw_gain * (2.0 * phase - 1.0 - poly_blep(phase, dt)) + spec.breathiness * rng.normal();
    phase += dt;
    phase -= std::floor(phase);
  }

  for (const auto& f : spec.formants) {
    const double r = std::exp(-std::numbers::pi * f.bandwidth_hz / sr);
    const double a1 = 2.0 * r * std::cos(2.0 * std::numbers::pi * f.center_hz / sr);
    const double a2 = -r * r;
    const double b0 = 1.0 - a1 - a2;
    double y1 = 0.0, y2 = 0.0;
    for (double& v : x) {
      const double y = b0 * v + a1 * y1 + a2 * y2;
      y2 = y1;
      y1 = y;
      v = y;
    }
  }

  const double ramp = 0.020 * sr;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / sr;
    double g = 1.0 - spec.am_depth * 0.5 * (1.0 + std::cos(2.0 * std::numbers::pi * spec.am_rate_hz * t));
    const double edge = std::min(static_cast<double>(i), static_cast<double>(n - 1 - i));
    if (edge < ramp) g *= 0.5 - 0.5 * std::cos(std::numbers::pi * edge / ramp);
    x[i] *= g;
  }

  const double power = simd::sum_squares(x) / static_cast<double>(n);
  const double noise_std = std::sqrt(power / std::pow(10.0, spec.noise_snr_db / 10.0));
  for (double& v : x) v += noise_std * rng.normal();

  AudioClip clip;
  clip.sample_rate = sample_rate;
  clip.samples = std::move(x);
  return peak_normalize(clip, spec.peak_amplitude);
}

SynthSpec corpus_spec(CallLabel label, std::size_t index, std::uint64_t seed, bool exclude_overlap) {
  const std::uint64_t stream = label == CallLabel::HFC ? 1 : 2;
  return sample_spec(label, derive_seed(seed, stream, index), exclude_overlap);
}

CorpusManifest make_corpus(std::size_t n_per_class, std::uint64_t seed, const std::filesystem::path& out_dir,
                           const CorpusOptions& options) {
  if (n_per_class < 1) throw Error(ErrorCode::InvalidArgument, "corpus needs at least one call per class");
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::IoFailure, "cannot create " + out_dir.string());

  CorpusManifest manifest;
  manifest.entries.resize(2 * n_per_class);
  parallel_for(2 * n_per_class, options.threads, [&](std::size_t k) {
    const std::size_t i = k / 2;
    const CallLabel label = k % 2 == 0 ? CallLabel::HFC : CallLabel::LFC;
    char name[32];
    std::snprintf(name, sizeof name, "%s_%05zu.wav", label == CallLabel::HFC ? "hfc" : "lfc", i);
    char cow[16];
    std::snprintf(cow, sizeof cow, "cow%02zu", k % 20 + 1);
    auto clip = render(corpus_spec(label, i, seed, options.exclude_overlap), options.sample_rate);
    try {
      write_wav(out_dir / name, clip);
    } catch (const Error& e) {
      throw Error(ErrorCode::IoFailure, e.what());
    }
    manifest.entries[k] = {name, label, cow};
  });
  write_manifest(out_dir / "manifest.csv", manifest);
  return manifest;
}

}  // namespace herdsig
