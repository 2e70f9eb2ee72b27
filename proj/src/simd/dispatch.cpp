#include <atomic>
#include <cstdlib>
#include <string>

#include "cantrans/error.hpp"
#include "cantrans/simd/kernels.hpp"

namespace cantrans::simd {

namespace {

bool available(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar: return true;
    case Isa::avx2:
#if defined(CANTRANS_HAVE_AVX2_KERNELS)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("bmi");
#else
      return false;
#endif
    case Isa::neon:
#if defined(CANTRANS_HAVE_NEON_KERNELS)
      return true;
#else
      return false;
#endif
  }
  return false;
}

std::atomic<Isa>& active() {
  static std::atomic<Isa> isa{detected_isa()};
  return isa;
}

}  // namespace

std::string_view to_string(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
  }
  return "unknown";
}

Isa detected_isa() noexcept {
  if (available(Isa::avx2)) return Isa::avx2;
  if (available(Isa::neon)) return Isa::neon;
  return Isa::scalar;
}

Isa active_isa() noexcept { return active().load(std::memory_order_relaxed); }

Isa set_active_isa(Isa isa) noexcept {
  if (!available(isa)) isa = Isa::scalar;
  active().store(isa, std::memory_order_relaxed);
  return isa;
}

void configure_from_environment() noexcept {
  const char* env = std::getenv("CANTRANS_SIMD");
  if (env == nullptr) return;
  std::string v(env);
  if (v == "scalar") set_active_isa(Isa::scalar);
  else if (v == "avx2") set_active_isa(Isa::avx2);
  else if (v == "neon") set_active_isa(Isa::neon);
}

std::size_t first_mismatch_lag(std::span<const std::uint8_t> seq, std::size_t begin, std::size_t end,
                               std::size_t lag) {
  require(begin <= end && end + lag <= seq.size(), ErrorKind::insufficient_data,
          "lag window exceeds sequence length");
  switch (active_isa()) {
#if defined(CANTRANS_HAVE_AVX2_KERNELS)
    case Isa::avx2: return avx2::first_mismatch_lag(seq.data(), begin, end, lag);
#endif
#if defined(CANTRANS_HAVE_NEON_KERNELS)
    case Isa::neon: return neon::first_mismatch_lag(seq.data(), begin, end, lag);
#endif
    default: return scalar::first_mismatch_lag(seq.data(), begin, end, lag);
  }
}

std::size_t count_value(std::span<const std::uint8_t> seq, std::uint8_t value) {
  switch (active_isa()) {
#if defined(CANTRANS_HAVE_AVX2_KERNELS)
    case Isa::avx2: return avx2::count_value(seq.data(), seq.size(), value);
#endif
#if defined(CANTRANS_HAVE_NEON_KERNELS)
    case Isa::neon: return neon::count_value(seq.data(), seq.size(), value);
#endif
    default: return scalar::count_value(seq.data(), seq.size(), value);
  }
}

void add_mod(std::span<const std::uint8_t> src, std::uint8_t shift, std::uint8_t modulus,
             std::span<std::uint8_t> dst) {
  require(dst.size() >= src.size(), ErrorKind::invalid_parameters, "add_mod destination too small");
  require(modulus > 0 && shift < modulus, ErrorKind::invalid_parameters, "add_mod shift must be below modulus");
  switch (active_isa()) {
#if defined(CANTRANS_HAVE_AVX2_KERNELS)
    case Isa::avx2: return avx2::add_mod(src.data(), src.size(), shift, modulus, dst.data());
#endif
#if defined(CANTRANS_HAVE_NEON_KERNELS)
    case Isa::neon: return neon::add_mod(src.data(), src.size(), shift, modulus, dst.data());
#endif
    default: return scalar::add_mod(src.data(), src.size(), shift, modulus, dst.data());
  }
}

}  // namespace cantrans::simd
