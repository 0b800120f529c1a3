#include "herdsig/features.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "herdsig/dsp.hpp"
#include "herdsig/error.hpp"
#include "herdsig/simd/kernels.hpp"

namespace herdsig {

namespace {

double median_of(std::vector<double> v) {
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  double m = v[mid];
  if (v.size() % 2 == 0) {
    m = 0.5 * (m + *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid)));
  }
  return m;
}

struct Candidate {
  double lag = 0.0;
  double strength = 0.0;
};

constexpr int kRefineSteps = 8;  // sub-sample positions per lag when refining peaks

// Tapered-sinc weights for each sub-sample phase p / kRefineSteps, taps
// j = -kSincHalfWidth + 1 .. kSincHalfWidth relative to floor(lag).
const std::vector<std::vector<double>>& sinc_table() {
  static const auto table = [] {
    const auto half = static_cast<int>(kSincHalfWidth);
    std::vector<std::vector<double>> t(kRefineSteps, std::vector<double>(2 * kSincHalfWidth));
    for (int p = 0; p < kRefineSteps; ++p) {
      const double frac = static_cast<double>(p) / kRefineSteps;
      for (int j = -half + 1; j <= half; ++j) {
        const double d = frac - j;
        const double taper = 0.5 + 0.5 * std::cos(std::numbers::pi * d / half);
        const double sinc = std::abs(d) < 1e-12 ? 1.0 : std::sin(std::numbers::pi * d) / (std::numbers::pi * d);
        t[static_cast<std::size_t>(p)][static_cast<std::size_t>(j + half - 1)] = sinc * taper;
      }
    }
    return t;
  }();
  return table;
}

// Band-limited reconstruction of an autocorrelation at lag base + p / kRefineSteps,
// using its symmetry about lag 0.
double sinc_interpolate(const std::vector<double>& r, std::ptrdiff_t base, int phase) {
  const auto& w = sinc_table()[static_cast<std::size_t>(phase)];
  const auto half = static_cast<std::ptrdiff_t>(kSincHalfWidth);
  const auto n = static_cast<std::ptrdiff_t>(r.size());
  double sum = 0.0;
  for (std::ptrdiff_t j = -half + 1; j <= half; ++j) {
    const std::ptrdiff_t k = base + j;
    const std::ptrdiff_t idx = k < 0 ? -k : k;
    if (idx >= n) continue;
    sum += r[static_cast<std::size_t>(idx)] * w[static_cast<std::size_t>(j + half - 1)];
  }
  return sum;
}

// Maximum of f(step), step counted in 1/kRefineSteps lags, within one lag of
// an integer-lag local maximum; a parabola through the best three points
// gives the final position.
template <typename F>
Candidate refine_peak(const F& f, std::size_t lag) {
  const auto centre = static_cast<std::ptrdiff_t>(lag) * kRefineSteps;
  std::ptrdiff_t best_step = centre;
  double best = f(centre);
  for (std::ptrdiff_t s = centre - kRefineSteps; s <= centre + kRefineSteps; ++s) {
    const double v = s == centre ? best : f(s);
    if (v > best) {
      best = v;
      best_step = s;
    }
  }
  const double to_lag = 1.0 / kRefineSteps;
  const double a = f(best_step - 1), c = f(best_step + 1);
  const double denom = a - 2.0 * best + c;
  if (!(denom < 0.0)) return {static_cast<double>(best_step) * to_lag, best};
  const double delta = std::clamp(0.5 * (a - c) / denom, -0.5, 0.5);
  return {(static_cast<double>(best_step) + delta) * to_lag, best - 0.25 * (a - c) * delta};
}

// Shortest lag whose strength is within 10% of the strongest candidate.
std::optional<Candidate> choose(const std::vector<Candidate>& cands) {
  if (cands.empty()) return std::nullopt;
  double best = 0.0;
  for (const auto& c : cands) best = std::max(best, c.strength);
  if (best < kVoicingThreshold) return std::nullopt;
  for (const auto& c : cands) {
    if (c.strength >= 0.9 * best) return c;
  }
  return std::nullopt;
}

std::vector<double> preemphasize(std::span<const double> x, double coeff) {
  std::vector<double> y(x.size());
  if (x.empty()) return y;
  y[0] = x[0];
  for (std::size_t n = 1; n < x.size(); ++n) y[n] = x[n] - coeff * x[n - 1];
  return y;
}

}  // namespace

F0Contour extract_f0(std::span<const double> samples, int sample_rate, const FrameConfig& cfg) {
  cfg.validate(sample_rate);
  const std::size_t len = cfg.frame_length(sample_rate);
  const std::size_t hop = cfg.hop_length(sample_rate);
  const std::size_t n_frames = frame_count(samples.size(), len, hop);
  if (n_frames < 3) {
    throw Error(ErrorCode::ClipTooShort, "pitch tracking needs at least three frames");
  }
  const double sr = sample_rate;
  std::size_t pitch_len = static_cast<std::size_t>(std::lround(3.0 * sr / kF0MinHz));
  pitch_len = std::min(pitch_len, samples.size());
  const auto lag_lo = static_cast<std::size_t>(std::floor(sr / kF0MaxHz));
  const auto lag_hi = std::min(static_cast<std::size_t>(std::ceil(sr / kF0MinHz)), pitch_len - 2);

  const auto window = make_window(WindowKind::Hann, pitch_len);

  struct Raw {
    std::size_t frame;
    std::vector<Candidate> cands;
    std::optional<Candidate> pick;
  };
  std::vector<Raw> raw;

  const std::size_t max_lag = std::min(lag_hi + kSincHalfWidth + 2, pitch_len - 1);
  auto window_r = dsp::autocorrelation_fft(window, max_lag);
  for (std::size_t t = window_r.size(); t-- > 0;) window_r[t] /= window_r[0];
  const auto window_at = [&](double lag) {
    const auto t = static_cast<std::size_t>(lag);
    if (t + 1 >= window_r.size()) return window_r.back();
    const double f = lag - static_cast<double>(t);
    return (1.0 - f) * window_r[t] + f * window_r[t + 1];
  };

  std::vector<double> frame_buf(pitch_len);
  const auto analyze = [&](std::size_t frame, std::size_t start) {
    const auto slice = samples.subspan(start, pitch_len);
    const double mean = std::accumulate(slice.begin(), slice.end(), 0.0) / static_cast<double>(pitch_len);
    for (std::size_t n = 0; n < pitch_len; ++n) frame_buf[n] = (slice[n] - mean) * window[n];
    Raw entry{frame, {}, std::nullopt};
    auto r = dsp::autocorrelation_fft(frame_buf, max_lag);
    if (r[0] > 0.0) {
      const double r0 = r[0];
      for (double& v : r) v /= r0;
      const auto corrected = [&](std::ptrdiff_t step) {
        const std::ptrdiff_t base = step >= 0 ? step / kRefineSteps : -((-step + kRefineSteps - 1) / kRefineSteps);
        const auto phase = static_cast<int>(step - base * kRefineSteps);
        const double w = window_at(static_cast<double>(step) / kRefineSteps);
        return w > 1e-6 ? sinc_interpolate(r, base, phase) / w : 0.0;
      };
      for (std::size_t t = std::max<std::size_t>(lag_lo, 1); t <= lag_hi; ++t) {
        const double here = r[t] / window_r[t];
        if (!(here > r[t - 1] / window_r[t - 1] && here >= r[t + 1] / window_r[t + 1])) continue;
        entry.cands.push_back(refine_peak(corrected, t));
      }
      entry.pick = choose(entry.cands);
    }
    raw.push_back(std::move(entry));
  };

  for (std::size_t i = 0; i < n_frames; ++i) {
    const double centre = static_cast<double>(i * hop) + static_cast<double>(len) / 2.0;
    const double start = centre - static_cast<double>(pitch_len) / 2.0;
    if (start < 0.0) continue;
    const auto s = static_cast<std::size_t>(std::lround(start));
    if (s + pitch_len > samples.size()) continue;
    analyze(i, s);
  }
  if (raw.empty()) analyze(n_frames / 2, (samples.size() - pitch_len) / 2);

  const auto in_band = [&](double lag) {
    const double f = sr / lag;
    return f >= kF0MinHz && f <= kF0MaxHz;
  };
  for (auto& e : raw) {
    if (e.pick && !in_band(e.pick->lag)) e.pick.reset();
  }

  // Octave-jump suppression against the median of the neighbouring estimates.
  std::vector<double> initial;
  std::vector<std::size_t> voiced_idx;
  for (std::size_t k = 0; k < raw.size(); ++k) {
    if (raw[k].pick) {
      initial.push_back(sr / raw[k].pick->lag);
      voiced_idx.push_back(k);
    }
  }
  constexpr std::size_t kHalfSpan = 4;
  constexpr double kJumpRatio = 1.6;
  if (initial.size() >= 3) {
    for (std::size_t v = 0; v < initial.size(); ++v) {
      const std::size_t lo = v >= kHalfSpan ? v - kHalfSpan : 0;
      const std::size_t hi = std::min(initial.size(), v + kHalfSpan + 1);
      const double med = median_of(std::vector<double>(initial.begin() + static_cast<std::ptrdiff_t>(lo),
                                                       initial.begin() + static_cast<std::ptrdiff_t>(hi)));
      const double f = initial[v];
      if (std::max(f / med, med / f) <= kJumpRatio) continue;
      auto& e = raw[voiced_idx[v]];
      const double bad_lag = e.pick->lag;
      std::vector<Candidate> rest;
      for (const auto& c : e.cands) {
        if (std::abs(c.lag - bad_lag) > 0.2 * bad_lag) rest.push_back(c);
      }
      e.pick.reset();
      std::optional<Candidate> best;
      for (const auto& c : rest) {
        if (c.strength < kVoicingThreshold || !in_band(c.lag)) continue;
        const double fc = sr / c.lag;
        if (std::max(fc / med, med / fc) > kJumpRatio) continue;
        if (!best || c.strength > best->strength) best = c;
      }
      e.pick = best;
    }
  }

  F0Contour contour;
  contour.analyzed_frames = raw.size();
  for (const auto& e : raw) {
    if (!e.pick) continue;
    contour.frame_index.push_back(e.frame);
    contour.times_s.push_back((static_cast<double>(e.frame * hop) + static_cast<double>(len) / 2.0) / sr);
    contour.f0_hz.push_back(sr / e.pick->lag);
    contour.strength.push_back(e.pick->strength);
  }
  if (contour.f0_hz.empty()) throw Error(ErrorCode::NoVoicedFrames, "no frame reached the voicing threshold");
  contour.voicing_fraction = static_cast<double>(contour.f0_hz.size()) / static_cast<double>(raw.size());
  return contour;
}

F0Stats f0_statistics(std::span<const double> track) {
  if (track.empty()) throw Error(ErrorCode::InvalidArgument, "empty f0 track");
  F0Stats st;
  st.min = *std::min_element(track.begin(), track.end());
  st.max = *std::max_element(track.begin(), track.end());
  st.mean = std::accumulate(track.begin(), track.end(), 0.0) / static_cast<double>(track.size());
  st.range = st.max - st.min;

  std::vector<double> steps;
  for (double v : track) {
    if (steps.empty() || v != steps.back()) steps.push_back(v);
  }
  std::vector<double> extrema;
  for (std::size_t i = 1; i + 1 < steps.size(); ++i) {
    const bool peak = steps[i] > steps[i - 1] && steps[i] > steps[i + 1];
    const bool trough = steps[i] < steps[i - 1] && steps[i] < steps[i + 1];
    if (peak || trough) extrema.push_back(steps[i]);
  }
  if (extrema.size() >= 2) {
    double sum = 0.0;
    for (std::size_t i = 1; i < extrema.size(); ++i) sum += std::abs(extrema[i] - extrema[i - 1]);
    st.fm_extent = sum / static_cast<double>(extrema.size() - 1);
  }
  return st;
}

std::vector<double> mean_power_spectrum(std::span<const double> samples, int sample_rate, const FrameConfig& cfg,
                                        double* bin_hz) {
  const auto fs = frames(samples, sample_rate, cfg);
  const std::size_t nfft = dsp::analysis_fft_size(fs.frame_length);
  std::vector<double> mean(nfft / 2 + 1, 0.0);
  for (std::size_t i = 0; i < fs.size(); ++i) {
    const auto p = dsp::power_spectrum(fs.frame(i), nfft);
    for (std::size_t k = 0; k < mean.size(); ++k) mean[k] += p[k];
  }
  for (double& v : mean) v /= static_cast<double>(fs.size());
  if (bin_hz) *bin_hz = static_cast<double>(sample_rate) / static_cast<double>(nfft);
  return mean;
}

SpectralFeatures spectral_features_from_power(std::span<const double> power, double bin_hz) {
  const double total = std::accumulate(power.begin(), power.end(), 0.0);
  if (!(total > 0.0)) throw Error(ErrorCode::ZeroEnergyFrame, "spectrum has no energy");
  SpectralFeatures sf;
  double weighted = 0.0;
  for (std::size_t k = 0; k < power.size(); ++k) weighted += static_cast<double>(k) * bin_hz * power[k];
  sf.centroid_hz = weighted / total;

  const auto quantile_bin = [&](double q) {
    const double target = q * total;
    double cum = 0.0;
    for (std::size_t k = 0; k < power.size(); ++k) {
      cum += power[k];
      if (cum >= target) return k;
    }
    return power.size() - 1;
  };
  sf.q25_hz = static_cast<double>(quantile_bin(0.25)) * bin_hz;
  sf.q50_hz = static_cast<double>(quantile_bin(0.50)) * bin_hz;
  sf.q75_hz = static_cast<double>(quantile_bin(0.75)) * bin_hz;
  sf.bandwidth_hz = static_cast<double>(quantile_bin(0.995) - quantile_bin(0.005)) * bin_hz;

  const std::size_t peak = static_cast<std::size_t>(std::max_element(power.begin(), power.end()) - power.begin());
  double delta = 0.0;
  if (peak > 0 && peak + 1 < power.size()) {
    const double a = std::sqrt(power[peak - 1]), b = std::sqrt(power[peak]), c = std::sqrt(power[peak + 1]);
    const double denom = a - 2.0 * b + c;
    if (denom < 0.0) delta = std::clamp(0.5 * (a - c) / denom, -0.5, 0.5);
  }
  sf.fpeak_hz = (static_cast<double>(peak) + delta) * bin_hz;
  return sf;
}

SpectralFeatures spectral_features(std::span<const double> samples, int sample_rate, const FrameConfig& cfg) {
  double bin_hz = 0.0;
  const auto power = mean_power_spectrum(samples, sample_rate, cfg, &bin_hz);
  return spectral_features_from_power(power, bin_hz);
}

std::vector<std::size_t> find_peaks(std::span<const double> env, double min_prominence) {
  std::vector<std::size_t> peaks;
  const std::size_t n = env.size();
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (!(env[i] > env[i - 1] && env[i] >= env[i + 1])) continue;
    double left = env[i];
    for (std::size_t j = i; j-- > 0;) {
      if (env[j] > env[i]) break;
      left = std::min(left, env[j]);
    }
    double right = env[i];
    for (std::size_t j = i + 1; j < n; ++j) {
      if (env[j] > env[i]) break;
      right = std::min(right, env[j]);
    }
    if (env[i] - std::max(left, right) >= min_prominence) peaks.push_back(i);
  }
  return peaks;
}

AmplitudeFeatures amplitude_features(std::span<const double> samples, int sample_rate, const FrameConfig& cfg) {
  cfg.validate(sample_rate);
  const std::size_t len = cfg.frame_length(sample_rate);
  const std::size_t hop = cfg.hop_length(sample_rate);
  const std::size_t count = frame_count(samples.size(), len, hop);
  if (count < 2) throw Error(ErrorCode::ClipTooShort, "amplitude features need at least two frames");

  AmplitudeFeatures af;
  std::vector<double> env(count);
  double rms_sum = 0.0, zcr_sum = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const auto f = samples.subspan(i * hop, len);
    const double rms = std::sqrt(simd::sum_squares(f) / static_cast<double>(len));
    env[i] = 20.0 * std::log10(rms + 1e-10);
    rms_sum += rms;
    std::size_t crossings = 0;
    for (std::size_t n = 1; n < len; ++n) crossings += (f[n] >= 0.0) != (f[n - 1] >= 0.0);
    zcr_sum += static_cast<double>(crossings) / static_cast<double>(len - 1);
  }
  const double duration = static_cast<double>(samples.size()) / sample_rate;
  af.rms_mean = rms_sum / static_cast<double>(count);
  af.zcr_mean = zcr_sum / static_cast<double>(count);
  af.amplitude_db = std::accumulate(env.begin(), env.end(), 0.0) / static_cast<double>(count);
  double var = 0.0;
  for (std::size_t i = 1; i < count; ++i) var += std::abs(env[i] - env[i - 1]);
  af.am_var_db_per_s = var / duration;

  // Three-frame moving average keeps pitch-synchronous ripple out of the peak picker.
  std::vector<double> smooth(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t lo = i > 0 ? i - 1 : 0;
    const std::size_t hi = std::min(count - 1, i + 1);
    double s = 0.0;
    for (std::size_t j = lo; j <= hi; ++j) s += env[j];
    smooth[i] = s / static_cast<double>(hi - lo + 1);
  }
  const auto peaks = find_peaks(smooth, 1.5);
  if (!peaks.empty()) {
    double extent = 0.0;
    for (std::size_t p = 0; p < peaks.size(); ++p) {
      const std::size_t from = p == 0 ? 0 : peaks[p - 1];
      const std::size_t to = p + 1 == peaks.size() ? count - 1 : peaks[p + 1];
      const double left = *std::min_element(smooth.begin() + static_cast<std::ptrdiff_t>(from),
                                            smooth.begin() + static_cast<std::ptrdiff_t>(peaks[p]) + 1);
      const double right = *std::min_element(smooth.begin() + static_cast<std::ptrdiff_t>(peaks[p]),
                                             smooth.begin() + static_cast<std::ptrdiff_t>(to) + 1);
      extent += 0.5 * ((smooth[peaks[p]] - left) + (smooth[peaks[p]] - right));
    }
    af.am_extent_db = extent / static_cast<double>(peaks.size());
  }
  af.am_rate_hz = static_cast<double>(peaks.size()) / duration;
  return af;
}

std::size_t formant_lpc_order(int sample_rate, double f0_hz) noexcept {
  auto order = std::min<std::size_t>(2 + static_cast<std::size_t>(std::lround(sample_rate / 1000.0)), 24);
  if (f0_hz > 0.0) {
    const auto cap = static_cast<std::size_t>(0.9 * (sample_rate / 2.0) / f0_hz);
    order = std::min(order, std::max<std::size_t>(cap, 4));
  }
  return order;
}

std::vector<double> frame_formants(std::span<const double> frame, int sample_rate, WindowKind window,
                                   double f0_hz) {
  auto y = preemphasize(frame, 0.97);
  const auto w = make_window(window, y.size());
  simd::multiply(y, w, y);
  const std::size_t order = std::min(formant_lpc_order(sample_rate, f0_hz), y.size() - 1);
  const auto model = dsp::lpc(y, order);
  std::vector<double> found;
  if (model.order == 0) return found;
  const double sr = sample_rate;
  for (const auto& z : dsp::lpc_poles(model)) {
    if (z.imag() <= 0.0) continue;
    const double mag = std::abs(z);
    if (!(mag > 0.0)) continue;
    const double bw = -(sr / std::numbers::pi) * std::log(mag);
    const double freq = std::arg(z) * sr / (2.0 * std::numbers::pi);
    if (bw < 400.0 && freq >= 90.0 && freq <= sr / 2.0 - 50.0) found.push_back(freq);
  }
  std::sort(found.begin(), found.end());
  if (found.size() > 4) found.resize(4);
  return found;
}

FormantFeatures formant_features(std::span<const double> samples, int sample_rate, const FrameConfig& cfg,
                                 const F0Contour& contour) {
  if (contour.empty()) throw Error(ErrorCode::FormantsUnresolved, "no voiced frames");
  const std::size_t len = cfg.frame_length(sample_rate);
  const std::size_t hop = cfg.hop_length(sample_rate);
  std::array<std::vector<double>, 4> tracks;
  for (std::size_t i = 0; i < contour.frame_index.size(); ++i) {
    const std::size_t idx = contour.frame_index[i];
    if (idx * hop + len > samples.size()) continue;
    const auto f = frame_formants(samples.subspan(idx * hop, len), sample_rate, cfg.window, contour.f0_hz[i]);
    if (f.size() < 2) continue;
    for (std::size_t k = 0; k < f.size(); ++k) tracks[k].push_back(f[k]);
  }
  if (tracks[1].empty()) throw Error(ErrorCode::FormantsUnresolved, "fewer than two stable formants");
  FormantFeatures out;
  for (std::size_t k = 0; k < 4; ++k) {
    const auto& t = tracks[k];
    if (t.empty()) continue;
    out.mean[k] = std::accumulate(t.begin(), t.end(), 0.0) / static_cast<double>(t.size());
    out.range[k] = *std::max_element(t.begin(), t.end()) - *std::min_element(t.begin(), t.end());
  }
  return out;
}

std::vector<std::array<double, kMfccCount>> mfcc_frames(std::span<const double> samples, int sample_rate,
                                                         const FrameConfig& cfg) {
  const auto fs = frames(samples, sample_rate, cfg);
  const std::size_t nfft = dsp::analysis_fft_size(fs.frame_length);
  const auto bank = dsp::mel_filterbank(kMelFilters, nfft, sample_rate, 0.0, sample_rate / 2.0);
  std::vector<std::array<double, kMfccCount>> out(fs.size());
  double total = 0.0;
  std::vector<double> logs(kMelFilters);
  for (std::size_t i = 0; i < fs.size(); ++i) {
    const auto power = dsp::power_spectrum(fs.frame(i), nfft);
    const auto energies = bank.apply(power);
    for (std::size_t m = 0; m < kMelFilters; ++m) {
      total += energies[m];
      logs[m] = std::log(energies[m] + 1e-10);
    }
    const auto c = dsp::dct_ii(logs, kMfccCount);
    std::copy(c.begin(), c.end(), out[i].begin());
  }
  if (!(total > 0.0)) throw Error(ErrorCode::ZeroEnergyFrame, "no energy in any frame");
  return out;
}

MfccFeatures mfcc_features(std::span<const double> samples, int sample_rate, const FrameConfig& cfg) {
  const auto rows = mfcc_frames(samples, sample_rate, cfg);
  if (rows.size() < 3) throw Error(ErrorCode::ClipTooShort, "MFCC summary needs at least three frames");
  MfccFeatures mf;
  for (const auto& r : rows) {
    for (std::size_t c = 0; c < kMfccCount; ++c) mf.mean[c] += r[c];
  }
  double abs_sum = 0.0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    for (std::size_t c = 0; c < kMfccCount; ++c) {
      const double d = rows[i][c] - rows[i - 1][c];
      mf.delta_mean[c] += d;
      abs_sum += std::abs(d);
    }
  }
  const double n = static_cast<double>(rows.size());
  for (std::size_t c = 0; c < kMfccCount; ++c) {
    mf.mean[c] /= n;
    mf.delta_mean[c] /= n - 1.0;
  }
  mf.mean_abs_delta = abs_sum / ((n - 1.0) * static_cast<double>(kMfccCount));
  return mf;
}

double hnr(const F0Contour& contour) {
  if (contour.empty()) throw Error(ErrorCode::NoVoicedFrames, "empty contour");
  double sum = 0.0;
  for (double r : contour.strength) {
    const double c = std::clamp(r, 1e-6, 1.0 - 1e-6);
    sum += 10.0 * std::log10(c / (1.0 - c));
  }
  return sum / static_cast<double>(contour.strength.size());
}

AcousticFeatures extract_all(std::span<const double> samples, int sample_rate, const FrameConfig& cfg) {
  cfg.validate(sample_rate);
  if (!(simd::sum_squares(samples) > 0.0)) throw Error(ErrorCode::ZeroEnergyFrame, "silent event");
  const std::size_t n_frames =
      frame_count(samples.size(), cfg.frame_length(sample_rate), cfg.hop_length(sample_rate));
  if (n_frames < 3) throw Error(ErrorCode::ClipTooShort, "event shorter than three frames");

  AcousticFeatures f;
  f.duration_s = static_cast<double>(samples.size()) / sample_rate;

  const auto amp = amplitude_features(samples, sample_rate, cfg);
  f.amplitude_db = amp.amplitude_db;
  f.rms_mean = amp.rms_mean;
  f.zcr_mean = amp.zcr_mean;
  f.am_extent_db = amp.am_extent_db;
  f.am_rate_hz = amp.am_rate_hz;
  f.am_var_db_per_s = amp.am_var_db_per_s;

  const auto spec = spectral_features(samples, sample_rate, cfg);
  f.spectral_centroid_hz = spec.centroid_hz;
  f.bandwidth_hz = spec.bandwidth_hz;
  f.q25_hz = spec.q25_hz;
  f.q50_hz = spec.q50_hz;
  f.q75_hz = spec.q75_hz;
  f.fpeak_hz = spec.fpeak_hz;

  const auto mf = mfcc_features(samples, sample_rate, cfg);
  f.mfcc_mean = mf.mean;
  f.mfcc_delta_mean = mf.delta_mean;
  f.mfcc_mean_abs_delta = mf.mean_abs_delta;

  F0Contour contour;
  try {
    contour = extract_f0(samples, sample_rate, cfg);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NoVoicedFrames) throw;
  }
  if (!contour.empty()) {
    const auto st = f0_statistics(contour);
    f.f0_min = st.min;
    f.f0_mean = st.mean;
    f.f0_max = st.max;
    f.f0_range = st.range;
    f.fm_extent_hz = st.fm_extent;
    f.hnr_db = hnr(contour);
    try {
      const auto fm = formant_features(samples, sample_rate, cfg, contour);
      f.formant_mean = fm.mean;
      f.formant_range = fm.range;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::FormantsUnresolved) throw;
    }
  }
  return f;
}

const std::vector<std::string>& feature_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n = {"duration_s", "f0_min", "f0_mean", "f0_max", "f0_range", "fm_extent_hz",
                                  "bandwidth_hz", "amplitude_db", "am_extent_db", "am_rate_hz",
                                  "am_var_db_per_s", "q25_hz", "q50_hz", "q75_hz", "f1_mean", "f2_mean",
                                  "f3_mean", "f4_mean", "f1_range", "f2_range", "f3_range", "f4_range",
                                  "fpeak_hz", "spectral_centroid_hz", "rms_mean", "zcr_mean", "hnr_db"};
    for (std::size_t i = 0; i < kMfccCount; ++i) n.push_back("mfcc_" + std::to_string(i));
    for (std::size_t i = 0; i < kMfccCount; ++i) n.push_back("dmfcc_" + std::to_string(i));
    return n;
  }();
  return names;
}

std::vector<std::optional<double>> feature_values(const AcousticFeatures& f) {
  std::vector<std::optional<double>> v = {f.duration_s, f.f0_min, f.f0_mean, f.f0_max, f.f0_range,
                                          f.fm_extent_hz, f.bandwidth_hz, f.amplitude_db, f.am_extent_db,
                                          f.am_rate_hz, f.am_var_db_per_s, f.q25_hz, f.q50_hz, f.q75_hz};
  for (const auto& m : f.formant_mean) v.push_back(m);
  for (const auto& r : f.formant_range) v.push_back(r);
  v.insert(v.end(), {f.fpeak_hz, f.spectral_centroid_hz, f.rms_mean, f.zcr_mean, f.hnr_db});
  for (double c : f.mfcc_mean) v.push_back(c);
  for (double c : f.mfcc_delta_mean) v.push_back(c);
  return v;
}

}  // namespace herdsig
