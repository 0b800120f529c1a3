#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace herdsig::dsp {

bool is_power_of_two(std::size_t n) noexcept;
std::size_t next_power_of_two(std::size_t n) noexcept;
// Smallest power of two >= 2 * frame_length (zero padding halves the bin width).
std::size_t analysis_fft_size(std::size_t frame_length) noexcept;

// In-place FFT backed by FFTW; the inverse is scaled by 1/n. Size must be a power of two.
void fft(std::span<std::complex<double>> data, bool inverse = false);

struct Spectrum {
  std::vector<double> magnitudes;  // fft_size/2 + 1 bins
  double bin_hz = 0.0;

  std::size_t fft_size() const { return magnitudes.empty() ? 0 : 2 * (magnitudes.size() - 1); }
};

// |DFT| of the frame zero-padded to fft_size (bins 0..fft_size/2).
Spectrum fft_magnitude(std::span<const double> frame, std::size_t fft_size, double sample_rate = 1.0);

// |DFT|^2 of the zero-padded frame, bins 0..fft_size/2.
std::vector<double> power_spectrum(std::span<const double> frame, std::size_t fft_size);

// Biased autocorrelation sum_{n} x[n] x[n+k] / L for k = 0..max_lag (unnormalized).
std::vector<double> autocorrelation_raw(std::span<const double> frame, std::size_t max_lag);

// Same quantity computed through the FFT; O(L log L) for long lag ranges.
std::vector<double> autocorrelation_fft(std::span<const double> frame, std::size_t max_lag);

// Normalized biased autocorrelation r[0..L-1] with r[0] = 1.
// Throws ZeroEnergyFrame on an all-zero frame.
std::vector<double> autocorrelate(std::span<const double> frame);

struct LpcModel {
  std::vector<double> coefficients;  // a_1..a_p, x[n] ~ sum_k a_k x[n-k]
  double gain = 0.0;                 // sqrt of the final prediction-error power
  std::size_t order = 0;             // order actually fitted
  bool truncated = false;            // recursion stopped early on a singular step
  std::vector<double> errors;        // prediction-error power after each order 0..order
};

// Levinson-Durbin on an autocorrelation sequence r[0..order].
LpcModel levinson_durbin(std::span<const double> autocorr, std::size_t order);

// LPC of a frame by the autocorrelation method. Requires order < frame length.
LpcModel lpc(std::span<const double> frame, std::size_t order);

// Roots of c[0] z^n + c[1] z^(n-1) + ... + c[n] (companion-matrix eigenvalues).
std::vector<std::complex<double>> polynomial_roots(std::span<const double> coefficients);

// Roots of the LPC inverse filter A(z) = 1 - sum a_k z^-k, i.e. the synthesis poles.
std::vector<std::complex<double>> lpc_poles(const LpcModel& model);

double hz_to_mel(double hz) noexcept;
double mel_to_hz(double mel) noexcept;

struct MelFilterbank {
  std::size_t n_bins = 0;              // fft_size/2 + 1
  std::vector<double> weights;         // n_filters x n_bins, row-major
  std::vector<double> center_hz;
  std::vector<std::size_t> center_bin;

  std::size_t n_filters() const { return center_hz.size(); }
  std::span<const double> row(std::size_t i) const { return {weights.data() + i * n_bins, n_bins}; }
  // Filter energies of a power spectrum with n_bins entries.
  std::vector<double> apply(std::span<const double> power) const;
};

// Triangular filters equally spaced on the mel scale between f_lo and f_hi.
// Throws TooManyFilters when two edge points land on the same FFT bin.
MelFilterbank mel_filterbank(std::size_t n_filters, std::size_t fft_size, double sample_rate,
                             double f_lo, double f_hi);

// First n_out orthonormal DCT-II coefficients.
std::vector<double> dct_ii(std::span<const double> input, std::size_t n_out);

}  // namespace herdsig::dsp
