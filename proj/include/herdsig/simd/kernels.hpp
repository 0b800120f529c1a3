#pragma once

// Data-parallel inner loops shared by the DSP and model code.
//
// Every kernel has a scalar reference implementation and, where the target
// supports it, an AVX2 (x86-64) or NEON (aarch64) variant. The active variant
// is chosen once at startup from the CPU's capabilities; HERDSIG_SIMD=scalar
// in the environment forces the reference path. Reductions in the vector
// paths associate differently from the scalar loop, so results agree to
// rounding, not bit for bit. Element-wise kernels are bit-identical.

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

namespace herdsig::simd {

enum class Level { Scalar, Avx2, Neon };

std::string_view level_name(Level level) noexcept;

// Best level the running CPU supports.
Level detected() noexcept;

// Level currently used by the dispatching entry points below.
Level active() noexcept;

// Overrides dispatch (tests use this to pin a path). Requesting a level the
// CPU cannot run falls back to Scalar; the level actually set is returned.
Level force(Level level) noexcept;

double dot(std::span<const double> a, std::span<const double> b) noexcept;
double sum_squares(std::span<const double> a) noexcept;
// out[i] = a[i] * b[i]; out may alias a.
void multiply(std::span<const double> a, std::span<const double> b, std::span<double> out) noexcept;
// out[i] = a[i] * s; out may alias a.
void scale(std::span<const double> a, double s, std::span<double> out) noexcept;
// out[i] = |z[i]|^2
void magnitude_squared(std::span<const std::complex<double>> z, std::span<double> out) noexcept;

// Per-variant entry points, exposed for equivalence tests.
namespace scalar {
double dot(const double* a, const double* b, std::size_t n) noexcept;
double sum_squares(const double* a, std::size_t n) noexcept;
void multiply(const double* a, const double* b, double* out, std::size_t n) noexcept;
void scale(const double* a, double s, double* out, std::size_t n) noexcept;
void magnitude_squared(const std::complex<double>* z, double* out, std::size_t n) noexcept;
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define HERDSIG_HAVE_AVX2_KERNELS 1
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n) noexcept;
double sum_squares(const double* a, std::size_t n) noexcept;
void multiply(const double* a, const double* b, double* out, std::size_t n) noexcept;
void scale(const double* a, double s, double* out, std::size_t n) noexcept;
void magnitude_squared(const std::complex<double>* z, double* out, std::size_t n) noexcept;
}  // namespace avx2
#endif

#if defined(__aarch64__)
#define HERDSIG_HAVE_NEON_KERNELS 1
namespace neon {
double dot(const double* a, const double* b, std::size_t n) noexcept;
double sum_squares(const double* a, std::size_t n) noexcept;
void multiply(const double* a, const double* b, double* out, std::size_t n) noexcept;
void scale(const double* a, double s, double* out, std::size_t n) noexcept;
void magnitude_squared(const std::complex<double>* z, double* out, std::size_t n) noexcept;
}  // namespace neon
#endif

}  // namespace herdsig::simd
