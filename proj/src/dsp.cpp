#include "herdsig/dsp.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <fftw3.h>
#include <map>
#include <mutex>
#include <numbers>
#include <string>
#include <utility>

#include "herdsig/error.hpp"
#include "herdsig/simd/kernels.hpp"

namespace herdsig::dsp {

bool is_power_of_two(std::size_t n) noexcept { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_power_of_two(std::size_t n) noexcept {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

std::size_t analysis_fft_size(std::size_t frame_length) noexcept {
  return next_power_of_two(2 * std::max<std::size_t>(frame_length, 1));
}

namespace {

struct PlanCache {
  std::mutex mutex;
  std::map<std::pair<std::size_t, bool>, fftw_plan> plans;

  ~PlanCache() {
    for (auto& [key, plan] : plans) fftw_destroy_plan(plan);
  }
};

// The FFTW planner is not thread-safe; executing a finished plan is.
fftw_plan plan_for(std::size_t n, bool inverse) {
  static PlanCache cache;
  std::lock_guard lock(cache.mutex);
  fftw_plan& plan = cache.plans[{n, inverse}];
  if (plan == nullptr) {
    fftw_complex* scratch = fftw_alloc_complex(n);
    plan = fftw_plan_dft_1d(static_cast<int>(n), scratch, scratch, inverse ? FFTW_BACKWARD : FFTW_FORWARD,
                            FFTW_ESTIMATE);
    fftw_free(scratch);
  }
  return plan;
}

struct AlignedBuffer {
  fftw_complex* data = nullptr;
  std::size_t capacity = 0;

  fftw_complex* reserve(std::size_t n) {
    if (n > capacity) {
      fftw_free(data);
      data = fftw_alloc_complex(n);
      capacity = n;
    }
    return data;
  }
  ~AlignedBuffer() { fftw_free(data); }
};

}  // namespace

void fft(std::span<std::complex<double>> data, bool inverse) {
  const std::size_t n = data.size();
  if (!is_power_of_two(n)) {
    throw Error(ErrorCode::NonPowerOfTwoSize, "fft size " + std::to_string(n));
  }
  if (n == 1) return;
  thread_local AlignedBuffer buffer;
  fftw_complex* buf = buffer.reserve(n);
  auto* z = reinterpret_cast<std::complex<double>*>(buf);
  std::copy(data.begin(), data.end(), z);
  fftw_execute_dft(plan_for(n, inverse), buf, buf);
  std::copy(z, z + n, data.begin());
  if (inverse) {
    const double s = 1.0 / static_cast<double>(n);
    for (auto& x : data) x *= s;
  }
}

namespace {

std::vector<std::complex<double>> padded_transform(std::span<const double> frame, std::size_t fft_size) {
  if (!is_power_of_two(fft_size)) {
    throw Error(ErrorCode::NonPowerOfTwoSize, "fft size " + std::to_string(fft_size));
  }
  if (frame.size() > fft_size) {
    throw Error(ErrorCode::InvalidArgument, "frame longer than fft size");
  }
  std::vector<std::complex<double>> buf(fft_size);
  for (std::size_t i = 0; i < frame.size(); ++i) buf[i] = frame[i];
  fft(buf);
  return buf;
}

}  // namespace

std::vector<double> power_spectrum(std::span<const double> frame, std::size_t fft_size) {
  const auto buf = padded_transform(frame, fft_size);
  std::vector<double> power(fft_size / 2 + 1);
  simd::magnitude_squared(std::span(buf.data(), power.size()), power);
  return power;
}

Spectrum fft_magnitude(std::span<const double> frame, std::size_t fft_size, double sample_rate) {
  Spectrum s;
  s.magnitudes = power_spectrum(frame, fft_size);
  for (double& m : s.magnitudes) m = std::sqrt(m);
  s.bin_hz = sample_rate / static_cast<double>(fft_size);
  return s;
}

std::vector<double> autocorrelation_raw(std::span<const double> frame, std::size_t max_lag) {
  const std::size_t n = frame.size();
  std::vector<double> r(max_lag + 1, 0.0);
  if (n == 0) return r;
  const double inv = 1.0 / static_cast<double>(n);
  for (std::size_t k = 0; k <= max_lag && k < n; ++k) {
    r[k] = simd::dot(frame.subspan(0, n - k), frame.subspan(k)) * inv;
  }
  return r;
}

std::vector<double> autocorrelation_fft(std::span<const double> frame, std::size_t max_lag) {
  const std::size_t n = frame.size();
  std::vector<double> r(max_lag + 1, 0.0);
  if (n == 0) return r;
  const std::size_t size = next_power_of_two(2 * n);
  auto buf = padded_transform(frame, size);
  for (auto& z : buf) z = std::norm(z);
  fft(buf, true);
  const double inv = 1.0 / static_cast<double>(n);
  for (std::size_t k = 0; k <= max_lag && k < n; ++k) r[k] = buf[k].real() * inv;
  return r;
}

std::vector<double> autocorrelate(std::span<const double> frame) {
  if (frame.empty()) throw Error(ErrorCode::ZeroEnergyFrame, "empty frame");
  auto r = autocorrelation_raw(frame, frame.size() - 1);
  if (!(r[0] > 0.0)) throw Error(ErrorCode::ZeroEnergyFrame, "frame has no energy");
  const double inv = 1.0 / r[0];
  for (double& v : r) v *= inv;
  r[0] = 1.0;
  return r;
}

LpcModel levinson_durbin(std::span<const double> autocorr, std::size_t order) {
  if (autocorr.size() < order + 1) {
    throw Error(ErrorCode::InvalidArgument, "autocorrelation shorter than order + 1");
  }
  LpcModel model;
  double err = autocorr[0];
  model.errors.push_back(err);
  std::vector<double> a;
  a.reserve(order);
  if (!(err > 0.0)) {
    model.truncated = order > 0;
    model.gain = 0.0;
    return model;
  }
  std::vector<double> prev;
  for (std::size_t i = 1; i <= order; ++i) {
    double acc = autocorr[i];
    for (std::size_t j = 1; j < i; ++j) acc -= a[j - 1] * autocorr[i - j];
    const double k = acc / err;
    const double next_err = err * (1.0 - k * k);
    if (!(std::abs(k) < 1.0) || !(next_err > 0.0)) {
      model.truncated = true;
      break;
    }
    prev = a;
    a.push_back(k);
    for (std::size_t j = 1; j < i; ++j) a[j - 1] = prev[j - 1] - k * prev[i - j - 1];
    err = next_err;
    model.errors.push_back(err);
  }
  model.order = a.size();
  model.coefficients = std::move(a);
  model.gain = std::sqrt(err);
  return model;
}

LpcModel lpc(std::span<const double> frame, std::size_t order) {
  if (order >= frame.size()) {
    throw Error(ErrorCode::InvalidArgument, "lpc order must be below frame length");
  }
  const auto r = autocorrelation_raw(frame, order);
  return levinson_durbin(r, order);
}

std::vector<std::complex<double>> polynomial_roots(std::span<const double> coefficients) {
  std::size_t lead = 0;
  while (lead < coefficients.size() && coefficients[lead] == 0.0) ++lead;
  if (coefficients.size() - lead < 2) return {};
  const auto c = coefficients.subspan(lead);
  const std::size_t degree = c.size() - 1;

  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(degree),
                                                    static_cast<Eigen::Index>(degree));
  for (std::size_t j = 0; j < degree; ++j) {
    companion(0, static_cast<Eigen::Index>(j)) = -c[j + 1] / c[0];
  }
  for (std::size_t i = 1; i < degree; ++i) {
    companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
  }
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  const auto& ev = solver.eigenvalues();
  std::vector<std::complex<double>> roots(degree);
  for (std::size_t i = 0; i < degree; ++i) roots[i] = ev[static_cast<Eigen::Index>(i)];
  return roots;
}

std::vector<std::complex<double>> lpc_poles(const LpcModel& model) {
  std::vector<double> poly(model.coefficients.size() + 1);
  poly[0] = 1.0;
  for (std::size_t k = 0; k < model.coefficients.size(); ++k) poly[k + 1] = -model.coefficients[k];
  return polynomial_roots(poly);
}

double hz_to_mel(double hz) noexcept { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double mel_to_hz(double mel) noexcept { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

std::vector<double> MelFilterbank::apply(std::span<const double> power) const {
  std::vector<double> out(n_filters());
  for (std::size_t m = 0; m < out.size(); ++m) out[m] = simd::dot(row(m), power.subspan(0, n_bins));
  return out;
}

MelFilterbank mel_filterbank(std::size_t n_filters, std::size_t fft_size, double sample_rate,
                             double f_lo, double f_hi) {
  if (!is_power_of_two(fft_size)) {
    throw Error(ErrorCode::NonPowerOfTwoSize, "fft size " + std::to_string(fft_size));
  }
  if (!(f_lo >= 0.0 && f_lo < f_hi && f_hi <= sample_rate / 2.0) || n_filters == 0) {
    throw Error(ErrorCode::InvalidArgument, "mel filterbank needs 0 <= f_lo < f_hi <= sr/2");
  }
  const double bin_hz = sample_rate / static_cast<double>(fft_size);
  const double mel_lo = hz_to_mel(f_lo);
  const double mel_hi = hz_to_mel(f_hi);
  std::vector<double> edge_hz(n_filters + 2);
  std::vector<std::size_t> edge_bin(n_filters + 2);
  for (std::size_t i = 0; i < edge_hz.size(); ++i) {
    const double mel = mel_lo + (mel_hi - mel_lo) * static_cast<double>(i) / static_cast<double>(n_filters + 1);
    edge_hz[i] = mel_to_hz(mel);
    edge_bin[i] = static_cast<std::size_t>(std::lround(edge_hz[i] / bin_hz));
  }
  for (std::size_t i = 1; i < edge_bin.size(); ++i) {
    if (edge_bin[i] <= edge_bin[i - 1]) {
      throw Error(ErrorCode::TooManyFilters,
                  std::to_string(n_filters) + " filters collide at " + std::to_string(bin_hz) + " Hz bins");
    }
  }

  MelFilterbank fb;
  fb.n_bins = fft_size / 2 + 1;
  fb.weights.assign(n_filters * fb.n_bins, 0.0);
  for (std::size_t m = 0; m < n_filters; ++m) {
    const std::size_t left = edge_bin[m];
    const std::size_t center = edge_bin[m + 1];
    const std::size_t right = edge_bin[m + 2];
    double* w = fb.weights.data() + m * fb.n_bins;
    for (std::size_t k = left; k <= center; ++k) {
      w[k] = static_cast<double>(k - left) / static_cast<double>(center - left);
    }
    for (std::size_t k = center; k <= right && k < fb.n_bins; ++k) {
      w[k] = static_cast<double>(right - k) / static_cast<double>(right - center);
    }
    fb.center_hz.push_back(edge_hz[m + 1]);
    fb.center_bin.push_back(center);
  }
  return fb;
}

std::vector<double> dct_ii(std::span<const double> input, std::size_t n_out) {
  const std::size_t m = input.size();
  if (n_out > m) throw Error(ErrorCode::InvalidArgument, "dct_ii: n_out exceeds input length");
  std::vector<double> out(n_out, 0.0);
  if (m == 0) return out;
  const double md = static_cast<double>(m);
  for (std::size_t k = 0; k < n_out; ++k) {
    double acc = 0.0;
    for (std::size_t n = 0; n < m; ++n) {
      acc += input[n] * std::cos(std::numbers::pi / md * (static_cast<double>(n) + 0.5) * static_cast<double>(k));
    }
    out[k] = acc * (k == 0 ? std::sqrt(1.0 / md) : std::sqrt(2.0 / md));
  }
  return out;
}

}  // namespace herdsig::dsp
