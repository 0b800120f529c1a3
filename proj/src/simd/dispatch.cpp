#include <atomic>
#include <cstdlib>
#include <string>

#include "herdsig/simd/kernels.hpp"

namespace herdsig::simd {
namespace {

struct Table {
  double (*dot)(const double*, const double*, std::size_t) noexcept;
  double (*sum_squares)(const double*, std::size_t) noexcept;
  void (*multiply)(const double*, const double*, double*, std::size_t) noexcept;
  void (*scale)(const double*, double, double*, std::size_t) noexcept;
  void (*magnitude_squared)(const std::complex<double>*, double*, std::size_t) noexcept;
};

constexpr Table kScalar{scalar::dot, scalar::sum_squares, scalar::multiply, scalar::scale,
                        scalar::magnitude_squared};
#ifdef HERDSIG_HAVE_AVX2_KERNELS
constexpr Table kAvx2{avx2::dot, avx2::sum_squares, avx2::multiply, avx2::scale,
                      avx2::magnitude_squared};
#endif
#ifdef HERDSIG_HAVE_NEON_KERNELS
constexpr Table kNeon{neon::dot, neon::sum_squares, neon::multiply, neon::scale,
                      neon::magnitude_squared};
#endif

const Table& table_for(Level level) noexcept {
  switch (level) {
#ifdef HERDSIG_HAVE_AVX2_KERNELS
    case Level::Avx2:
      return kAvx2;
#endif
#ifdef HERDSIG_HAVE_NEON_KERNELS
    case Level::Neon:
      return kNeon;
#endif
    default:
      return kScalar;
  }
}

Level initial_level() noexcept {
  if (const char* env = std::getenv("HERDSIG_SIMD"); env != nullptr && std::string(env) == "scalar") {
    return Level::Scalar;
  }
  return detected();
}

std::atomic<Level>& current() noexcept {
  static std::atomic<Level> level{initial_level()};
  return level;
}

const Table& tbl() noexcept { return table_for(current().load(std::memory_order_relaxed)); }

}  // namespace

std::string_view level_name(Level level) noexcept {
  switch (level) {
    case Level::Avx2:
      return "avx2";
    case Level::Neon:
      return "neon";
    default:
      return "scalar";
  }
}

Level detected() noexcept {
#ifdef HERDSIG_HAVE_AVX2_KERNELS
  __builtin_cpu_init();
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) return Level::Avx2;
#endif
#ifdef HERDSIG_HAVE_NEON_KERNELS
  return Level::Neon;
#endif
  return Level::Scalar;
}

Level active() noexcept { return current().load(std::memory_order_relaxed); }

Level force(Level level) noexcept {
  const Level best = detected();
  const bool supported = level == Level::Scalar || level == best;
  const Level chosen = supported ? level : Level::Scalar;
  current().store(chosen, std::memory_order_relaxed);
  return chosen;
}

double dot(std::span<const double> a, std::span<const double> b) noexcept {
  return tbl().dot(a.data(), b.data(), a.size() < b.size() ? a.size() : b.size());
}

double sum_squares(std::span<const double> a) noexcept { return tbl().sum_squares(a.data(), a.size()); }

void multiply(std::span<const double> a, std::span<const double> b, std::span<double> out) noexcept {
  tbl().multiply(a.data(), b.data(), out.data(), out.size());
}

void scale(std::span<const double> a, double s, std::span<double> out) noexcept {
  tbl().scale(a.data(), s, out.data(), out.size());
}

void magnitude_squared(std::span<const std::complex<double>> z, std::span<double> out) noexcept {
  tbl().magnitude_squared(z.data(), out.data(), out.size());
}

}  // namespace herdsig::simd
