#include "cantrans/simd/kernels.hpp"

#if defined(CANTRANS_HAVE_AVX2_KERNELS)

#include <immintrin.h>

// Compiled with the avx2 target attribute so the rest of the build keeps the
// baseline ISA; only reached after the runtime CPU check in dispatch.cpp.
#define CANTRANS_AVX2 __attribute__((target("avx2,bmi")))

namespace cantrans::simd::avx2 {

CANTRANS_AVX2 std::size_t first_mismatch_lag(const std::uint8_t* seq, std::size_t begin, std::size_t end,
                                             std::size_t lag) {
  std::size_t i = begin;
  for (; i + 32 <= end; i += 32) {
    __m256i a = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(seq + i));
    __m256i b = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(seq + i + lag));
    auto eq = static_cast<std::uint32_t>(_mm256_movemask_epi8(_mm256_cmpeq_epi8(a, b)));
    if (eq != 0xffffffffU) return i + static_cast<std::size_t>(_tzcnt_u32(~eq));
  }
  return scalar::first_mismatch_lag(seq, i, end, lag);
}

CANTRANS_AVX2 std::size_t count_value(const std::uint8_t* seq, std::size_t n, std::uint8_t value) {
  const __m256i needle = _mm256_set1_epi8(static_cast<char>(value));
  std::size_t c = 0;
  std::size_t i = 0;
  for (; i + 32 <= n; i += 32) {
    __m256i a = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(seq + i));
    auto m = static_cast<std::uint32_t>(_mm256_movemask_epi8(_mm256_cmpeq_epi8(a, needle)));
    c += static_cast<std::size_t>(__builtin_popcount(m));
  }
  return c + scalar::count_value(seq + i, n - i, value);
}

CANTRANS_AVX2 void add_mod(const std::uint8_t* src, std::size_t n, std::uint8_t shift, std::uint8_t modulus,
                           std::uint8_t* dst) {
  const __m256i vs = _mm256_set1_epi8(static_cast<char>(shift));
  const __m256i vm = _mm256_set1_epi8(static_cast<char>(modulus));
  std::size_t i = 0;
  for (; i + 32 <= n; i += 32) {
    __m256i a = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + i));
    // the true sum may need 9 bits; wrapping arithmetic still gives the right
    // low byte, and a + shift >= modulus  <=>  a >= modulus - shift
    __m256i sum = _mm256_add_epi8(a, vs);
    __m256i red = _mm256_sub_epi8(sum, vm);
    __m256i thresh = _mm256_sub_epi8(vm, vs);
    __m256i ge = _mm256_cmpeq_epi8(_mm256_max_epu8(a, thresh), a);
    __m256i out = _mm256_blendv_epi8(sum, red, ge);
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i), out);
  }
  scalar::add_mod(src + i, n - i, shift, modulus, dst + i);
}

}  // namespace cantrans::simd::avx2

#endif
